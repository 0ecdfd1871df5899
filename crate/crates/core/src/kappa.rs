//! `κ(g) = L(g) / sup_{[a,b]} |g|`, reported as the interval
//! `[tail_max / sup, path_bound / sup]`, plus seeded sweeps and a resumable
//! JSONL store.

use std::collections::{BTreeMap, HashMap};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path as FsPath, PathBuf};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{limsup_estimate, moment_series};
use crate::pathopt::{minimax_path_on, GridBox, GridSpec};
use crate::poly::named::quadratic_family;
use crate::poly::{Interval, Poly};
use crate::roots::sup_norm;
use crate::scalar::{format_rational, rational_to_f64, BigRational, ComplexRational};

pub const DEFAULT_SWEEP_P: usize = 200;
/// Random coefficients are `k / 2^16`.
pub const RANDOM_DENOMINATOR_BITS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub p_max: usize,
    pub grid: GridSpec,
    pub levels: usize,
    /// Stamped onto freshly computed records; not part of the store key.
    pub timestamp: Option<u64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { p_max: DEFAULT_SWEEP_P, grid: GridSpec { bbox: None, nx: 128, ny: 128 }, levels: 2, timestamp: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    /// Box actually searched.
    #[serde(rename = "box")]
    pub bbox: GridBox,
    /// Whether the box was chosen automatically.
    pub auto_box: bool,
    pub nx: usize,
    pub ny: usize,
    pub levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaRecord {
    pub key: String,
    pub poly: String,
    pub interval: [String; 2],
    /// Family parameter, when the record belongs to a parametrised family.
    pub parameter: Option<String>,
    pub sup_norm: f64,
    pub tail_max: f64,
    pub p_at_max: usize,
    /// `min(minimax path bound, sup_norm)`; the straight segment is itself a path.
    pub path_bound: f64,
    pub path_bound_certified: f64,
    pub kappa_estimate: f64,
    pub kappa_upper: f64,
    /// `min(ℓ^{1/p}·certified, (b−a)^{1/p}·sup) / sup` at `p = p_at_max`, with `ℓ`
    /// the path length: the bound `|M_p|^{1/p}` is actually subject to.
    pub kappa_upper_ml: f64,
    #[serde(rename = "P")]
    pub p_max: usize,
    pub grid: GridRecord,
    pub seed: Option<u64>,
    pub timestamp: Option<u64>,
}

impl KappaRecord {
    pub fn degree(&self) -> usize {
        self.poly.split(',').count() - 1
    }

    /// `kappa_estimate ≤ kappa_upper_ml` and `kappa_upper ≤ 1`, both up to `1e-6`.
    pub fn is_consistent(&self) -> bool {
        self.kappa_estimate <= self.kappa_upper_ml * (1.0 + 1e-6) && self.kappa_upper <= 1.0 + 1e-6
    }
}

fn grid_tag(grid: &GridSpec, levels: usize) -> String {
    let bx = match grid.bbox {
        Some(b) => format!("{},{},{},{}", b.x_lo, b.x_hi, b.y_lo, b.y_hi),
        None => "auto".into(),
    };
    format!("{}x{}:{levels}:{bx}", grid.nx, grid.ny)
}

/// Store key of a record: polynomial, interval, `P` and grid.
pub fn record_key(f: &Poly, interval: &Interval, cfg: &SweepConfig) -> String {
    format!("{f}|{interval}|{}|{}", cfg.p_max, grid_tag(&cfg.grid, cfg.levels))
}

pub fn kappa_record(f: &Poly, interval: &Interval, cfg: &SweepConfig) -> Result<KappaRecord> {
    if f.is_constant() {
        return Err(Error::InvalidArgument("kappa of a constant polynomial".into()));
    }
    let sup = sup_norm(f, interval)?;
    let est = limsup_estimate(&moment_series(f, interval, cfg.p_max)?)?;
    let pb = minimax_path_on(f, interval, &cfg.grid, cfg.levels)?;

    let path_bound = pb.bound.min(sup.value);
    let path_bound_certified = pb.certified_bound.min(sup.certified_interval[1]);
    let width = rational_to_f64(&interval.length())?;
    let root = |len: f64| len.powf(1.0 / est.p_at_max as f64);
    let ml = (root(pb.path.length()) * pb.certified_bound).min(root(width) * sup.certified_interval[1]);
    Ok(KappaRecord {
        key: record_key(f, interval, cfg),
        poly: f.to_string(),
        interval: interval.to_strings(),
        parameter: None,
        sup_norm: sup.value,
        tail_max: est.tail_max,
        p_at_max: est.p_at_max,
        path_bound,
        path_bound_certified,
        kappa_estimate: est.tail_max / sup.value,
        kappa_upper: path_bound / sup.value,
        kappa_upper_ml: ml / sup.value,
        p_max: cfg.p_max,
        grid: GridRecord {
            bbox: pb.bbox,
            auto_box: cfg.grid.bbox.is_none(),
            nx: cfg.grid.nx,
            ny: cfg.grid.ny,
            levels: cfg.levels,
        },
        seed: None,
        timestamp: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub count: usize,
    pub min_kappa_upper: f64,
    pub witness: String,
    pub witness_parameter: Option<String>,
    pub witness_kappa_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub family: String,
    pub count: usize,
    pub seed: Option<u64>,
    pub per_degree: Vec<DegreeSummary>,
    pub inconsistent_records: usize,
}

impl SweepSummary {
    pub fn from_records(family: &str, seed: Option<u64>, records: &[KappaRecord]) -> Self {
        let mut by_degree: BTreeMap<usize, (usize, &KappaRecord)> = BTreeMap::new();
        for r in records {
            by_degree
                .entry(r.degree())
                .and_modify(|(n, best)| {
                    *n += 1;
                    if r.kappa_upper < best.kappa_upper {
                        *best = r;
                    }
                })
                .or_insert((1, r));
        }
        let per_degree = by_degree
            .into_iter()
            .map(|(degree, (count, r))| DegreeSummary {
                degree,
                count,
                min_kappa_upper: r.kappa_upper,
                witness: r.poly.clone(),
                witness_parameter: r.parameter.clone(),
                witness_kappa_estimate: r.kappa_estimate,
            })
            .collect();
        Self {
            family: family.into(),
            count: records.len(),
            seed,
            per_degree,
            inconsistent_records: records.iter().filter(|r| !r.is_consistent()).count(),
        }
    }

    pub fn min_kappa_upper(&self) -> Option<f64> {
        self.per_degree.iter().map(|d| d.min_kappa_upper).min_by(f64::total_cmp)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub records: Vec<KappaRecord>,
    pub summary: SweepSummary,
    /// Records taken from the store instead of recomputed.
    pub reused: usize,
}

/// Append-only JSONL file of [`KappaRecord`]s.
#[derive(Clone, Debug)]
pub struct ResultStore {
    path: PathBuf,
}

impl ResultStore {
    pub fn new(path: impl AsRef<FsPath>) -> Self {
        Self { path: path.as_ref().to_path_buf() }
    }

    pub fn path(&self) -> &FsPath {
        &self.path
    }

    /// All stored records; a missing file is an empty store.
    pub fn load(&self) -> Result<Vec<KappaRecord>> {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line)
                .map_err(|e| Error::Io(format!("{}:{}: {e}", self.path.display(), n + 1)))?;
            out.push(rec);
        }
        Ok(out)
    }

    pub fn append(&self, records: &[KappaRecord]) -> Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut buf = String::new();
        for r in records {
            buf.push_str(&serde_json::to_string(r)?);
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        Ok(())
    }
}

/// One polynomial to evaluate, with an optional family parameter label.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTask {
    pub f: Poly,
    pub parameter: Option<String>,
}

/// Computes the records of `tasks` in parallel, in task order. Records already
/// in `store` are reused; new ones are appended in task order.
pub fn run_sweep(
    family: &str,
    tasks: &[SweepTask],
    interval: &Interval,
    cfg: &SweepConfig,
    seed: Option<u64>,
    store: Option<&ResultStore>,
) -> Result<Sweep> {
    let stored: HashMap<String, KappaRecord> = match store {
        Some(s) => s.load()?.into_iter().map(|r| (r.key.clone(), r)).collect(),
        None => HashMap::new(),
    };
    let computed: Vec<(bool, KappaRecord)> = tasks
        .par_iter()
        .map(|t| {
            let key = record_key(&t.f, interval, cfg);
            if let Some(r) = stored.get(&key) {
                return Ok((true, r.clone()));
            }
            let mut r = kappa_record(&t.f, interval, cfg)?;
            r.parameter = t.parameter.clone();
            r.seed = seed;
            r.timestamp = cfg.timestamp;
            Ok((false, r))
        })
        .collect::<Result<_>>()?;
    let reused = computed.iter().filter(|(old, _)| *old).count();
    if let Some(s) = store {
        let fresh: Vec<KappaRecord> = computed.iter().filter(|(old, _)| !old).map(|(_, r)| r.clone()).collect();
        s.append(&fresh)?;
    }
    let records: Vec<KappaRecord> = computed.into_iter().map(|(_, r)| r).collect();
    let summary = SweepSummary::from_records(family, seed, &records);
    Ok(Sweep { records, summary, reused })
}

/// `f_t = 1 − (x + i·t)²` on `[−1, 1]` for each `t ∈ (0, 1]`.
pub fn quadratic_family_sweep(ts: &[BigRational], cfg: &SweepConfig, store: Option<&ResultStore>) -> Result<Sweep> {
    for t in ts {
        if !t.is_positive() || *t > BigRational::from_integer(1.into()) {
            return Err(Error::InvalidArgument(format!("family parameter {} outside (0, 1]", format_rational(t))));
        }
    }
    let tasks: Vec<SweepTask> =
        ts.iter().map(|t| SweepTask { f: quadratic_family(t), parameter: Some(format_rational(t)) }).collect();
    run_sweep("quadratic", &tasks, &Interval::symmetric(), cfg, None, store)
}

/// `count` polynomials of exact degree `degree` with Gaussian-rational
/// coefficients `(j + i·k) / 2^16`, `j, k` uniform in `[−box·2^16, box·2^16]`.
pub fn random_polynomials(degree: usize, count: usize, coeff_box: &BigRational, seed: u64) -> Result<Vec<Poly>> {
    if degree < 1 || count < 1 {
        return Err(Error::InvalidArgument("random sweep needs degree >= 1 and count >= 1".into()));
    }
    let den = BigInt::from(1u64 << RANDOM_DENOMINATOR_BITS);
    let limit = (coeff_box * BigRational::from_integer(den.clone())).floor().to_integer().to_i64();
    let limit = match limit {
        Some(l) if l > 0 => l,
        _ => {
            return Err(Error::InvalidArgument(format!("coefficient box {} out of range", format_rational(coeff_box))))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        ComplexRational::new(
            BigRational::new(rng.gen_range(-limit..=limit).into(), den.clone()),
            BigRational::new(rng.gen_range(-limit..=limit).into(), den.clone()),
        )
    };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut c: Vec<ComplexRational> = (0..degree).map(|_| draw(&mut rng)).collect();
        let lead = loop {
            let z = draw(&mut rng);
            if !z.is_zero() {
                break z;
            }
        };
        c.push(lead);
        out.push(Poly::new(c));
    }
    Ok(out)
}

pub fn random_sweep(
    degree: usize,
    count: usize,
    coeff_box: &BigRational,
    seed: u64,
    cfg: &SweepConfig,
    store: Option<&ResultStore>,
) -> Result<Sweep> {
    let tasks: Vec<SweepTask> = random_polynomials(degree, count, coeff_box, seed)?
        .into_iter()
        .map(|f| SweepTask { f, parameter: None })
        .collect();
    run_sweep("random", &tasks, &Interval::symmetric(), cfg, Some(seed), store)
}

/// Seconds since the Unix epoch, for callers that want records stamped.
pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}
