//! Command-line front end. Every subcommand prints one JSON document.
//!
//! Exit codes: 0 success, 1 numerical failure or failed check, 2 usage or
//! parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::contour::{circle_image_arc, deformation_check, parabola_image_arc, Integrand};
use crate::error::{Error, Result};
use crate::kappa::{quadratic_family_sweep, random_sweep, unix_timestamp, ResultStore, SweepConfig};
use crate::moments::{all_real, limsup_estimate, moment_series, series_max_bits};
use crate::pathopt::{bound_report, minimax_path_on, GridBox, GridSpec};
use crate::poly::named::complex_quadratic;
use crate::poly::{Interval, Poly};
use crate::roots::{critical_set, sup_norm};
use crate::scalar::{parse_rational, BigRational};
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "polymoments", version, about = "Exact polynomial moments, limsup estimates and path bounds")]
pub struct Cli {
    /// key=value file supplying flags for the chosen subcommand; explicit flags win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the JSON document here instead of stdout
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// Comma-separated coefficients, constant term first, e.g. "5/4,-1i,-1"
    #[arg(long, allow_hyphen_values = true, value_parser = parse_poly)]
    pub poly: Poly,
    #[arg(long, allow_hyphen_values = true, default_value = "-1,1", value_parser = parse_interval)]
    pub interval: Interval,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exact moments M_1..M_P
    Moments {
        #[command(flatten)]
        target: PolyArgs,
        #[arg(long, default_value_t = 200)]
        p_max: usize,
        /// Also write the series as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tail estimate of limsup |M_p|^(1/p)
    Limit {
        #[command(flatten)]
        target: PolyArgs,
        #[arg(long, default_value_t = 200)]
        p_max: usize,
    },
    /// Critical values and endpoint values, against the moment tail
    CriticalSet {
        #[command(flatten)]
        target: PolyArgs,
        #[arg(long, default_value_t = 200)]
        p_max: usize,
    },
    /// Certified sup |f| on the interval
    Supnorm {
        #[command(flatten)]
        target: PolyArgs,
    },
    /// Run a reproduction bundle; exit code 0 iff every check passes
    Verify {
        #[arg(value_enum)]
        which: Bundle,
    },
    /// Parabola-arc vs circle-arc integral of w^p / (-2 sqrt(1-w))
    DeformCheck {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Also write the two arcs as CSV into this directory
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Write the parabola and circle arcs as CSV
    Paths {
        #[arg(long)]
        emit: PathBuf,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Grid search for the path minimising max |f|
    MinimaxPath {
        #[command(flatten)]
        target: PolyArgs,
        /// x_lo,x_hi,y_lo,y_hi; default is derived from the critical points
        #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_box)]
        bbox: Option<GridBox>,
        #[arg(long, default_value = "512,512", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Also write the path as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Compare against the moment tail up to this P
        #[arg(long)]
        p_max: Option<usize>,
    },
    /// Kappa records over a family, with a resumable JSONL store
    KappaSweep {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coefficient box for random polynomials
        #[arg(long, default_value = "4", value_parser = parse_positive_rational)]
        coeff_box: BigRational,
        /// Comma-separated t values in (0, 1] for the quadratic family
        #[arg(long, value_parser = parse_rational_list)]
        t_grid: Option<RationalList>,
        #[arg(long, default_value_t = crate::kappa::DEFAULT_SWEEP_P)]
        p_max: usize,
        #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_box)]
        bbox: Option<GridBox>,
        #[arg(long, default_value = "128,128", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, default_value_t = 2)]
        levels: usize,
        /// JSONL file; existing records are reused and new ones appended
        #[arg(long)]
        store: Option<PathBuf>,
        /// Stamp new records with the current Unix time
        #[arg(long)]
        timestamp: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bundle {
    Prop1,
    Prop2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Quadratic,
    Random,
}

fn parse_poly(s: &str) -> std::result::Result<Poly, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_interval(s: &str) -> std::result::Result<Interval, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_box(s: &str) -> std::result::Result<GridBox, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("grid must be \"nx,ny\", got {s:?}"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid size {t:?}"));
    Ok((n(a)?, n(b)?))
}

fn parse_positive_rational(s: &str) -> std::result::Result<BigRational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r <= BigRational::from_integer(0.into()) {
        return Err(format!("expected a positive number, got {s:?}"));
    }
    Ok(r)
}

/// Comma-separated rationals, kept as one flag value.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalList(pub Vec<BigRational>);

fn parse_rational_list(s: &str) -> std::result::Result<RationalList, String> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()
        .map(RationalList)
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config(path: &FsPath) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        out.push((k.trim().replace('_', "-"), v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices config entries in as flags right after the subcommand name, so
/// that flags given on the command line come later and override them.
fn apply_config(args: Vec<OsString>, entries: &[(String, String)]) -> Result<Vec<OsString>> {
    let cmd = Cli::command();
    let globals: Vec<String> =
        cmd.get_arguments().filter_map(|a| a.get_long().map(String::from)).filter(|l| l != "config").collect();
    let Some(pos) = args.iter().position(|a| cmd.find_subcommand(a.to_string_lossy().as_ref()).is_some()) else {
        return Ok(args);
    };
    let sub = cmd.find_subcommand(args[pos].to_string_lossy().as_ref()).unwrap();
    let known_anywhere = |k: &str| {
        globals.iter().any(|g| g == k)
            || cmd.get_subcommands().any(|s| s.get_arguments().any(|a| a.get_long() == Some(k)))
    };
    let mut inserted = Vec::new();
    for (k, v) in entries {
        if !known_anywhere(k) {
            return Err(Error::parse(k.clone(), "unknown configuration key"));
        }
        let arg = sub.get_arguments().find(|a| a.get_long() == Some(k.as_str()));
        let is_global = globals.iter().any(|g| g == k);
        let takes_value = match arg {
            Some(a) => a.get_action().takes_values(),
            None if is_global => true,
            None => continue,
        };
        if takes_value {
            inserted.push(OsString::from(format!("--{k}={v}")));
        } else if v == "true" {
            inserted.push(OsString::from(format!("--{k}")));
        }
    }
    let mut out = args[..=pos].to_vec();
    out.extend(inserted);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Some(path) = config_path(&args) {
        match read_config(&path).and_then(|entries| apply_config(args.clone(), &entries)) {
            Ok(a) => args = a,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    let cmd = Cli::command().mut_subcommands(|s| s.args_override_self(true));
    let cli = match cmd.try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok((doc, pass)) => {
            if let Err(e) = emit(&cli, &doc) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, doc: &Value) -> Result<()> {
    let mut text = match cli.format {
        Format::Json => serde_json::to_string(doc)?,
        Format::Pretty => serde_json::to_string_pretty(doc)?,
    };
    text.push('\n');
    match &cli.output {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn target_json(t: &PolyArgs) -> Value {
    json!({ "poly": t.poly.to_string(), "interval": t.interval.to_strings() })
}

fn write_arcs(dir: &FsPath, samples: usize) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (name, path) in [("parabola_arc.csv", parabola_image_arc()), ("circle_arc.csv", circle_image_arc())] {
        let file = dir.join(name);
        path.write_csv(samples, fs::File::create(&file)?)?;
        files.push(file.display().to_string());
    }
    Ok(files)
}

fn grid_spec(bbox: Option<GridBox>, grid: (usize, usize)) -> Result<GridSpec> {
    GridSpec::new(bbox, grid.0, grid.1)
}

/// Runs the subcommand; returns the document and whether its checks passed.
pub fn execute(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.command {
        Command::Moments { target, p_max, csv } => {
            let s = moment_series(&target.poly, &target.interval, *p_max)?;
            if let Some(path) = csv {
                s.write_csv(fs::File::create(path)?)?;
            }
            let mut doc = target_json(target);
            doc["p_max"] = json!(p_max);
            doc["moments"] = json!(s.values().iter().map(|m| m.to_string()).collect::<Vec<_>>());
            doc["abs_roots"] = json!(s.abs_roots());
            doc["all_real"] = json!(all_real(&s));
            doc["max_bits"] = json!(series_max_bits(&s));
            Ok((doc, true))
        }
        Command::Limit { target, p_max } => {
            let est = limsup_estimate(&moment_series(&target.poly, &target.interval, *p_max)?)?;
            let mut doc = target_json(target);
            doc["p_max"] = json!(p_max);
            doc["estimate"] = serde_json::to_value(est)?;
            Ok((doc, true))
        }
        Command::CriticalSet { target, p_max } => {
            let cs = critical_set(&target.poly, &target.interval)?;
            let est = limsup_estimate(&moment_series(&target.poly, &target.interval, *p_max)?)?;
            let mut doc = cs.to_json();
            doc["poly"] = json!(target.poly.to_string());
            doc["interval"] = json!(target.interval.to_strings());
            doc["max_abs_S"] = json!(cs.max_abs);
            doc["tail_max"] = json!(est.tail_max);
            doc["p_max"] = json!(p_max);
            Ok((doc, true))
        }
        Command::Supnorm { target } => {
            let mut doc = sup_norm(&target.poly, &target.interval)?.to_json();
            doc["poly"] = json!(target.poly.to_string());
            doc["interval"] = json!(target.interval.to_strings());
            Ok((doc, true))
        }
        Command::Verify { which } => {
            let b = match which {
                Bundle::Prop1 => verify::prop1()?,
                Bundle::Prop2 => verify::prop2()?,
            };
            let pass = b.pass;
            Ok((serde_json::to_value(b)?, pass))
        }
        Command::DeformCheck { p, tol, emit, samples } => {
            let report =
                deformation_check(&Integrand::WPower { p: *p }, &parabola_image_arc(), &circle_image_arc(), *tol)?;
            let exact = moment_series(&complex_quadratic(), &Interval::symmetric(), (*p as usize).max(1))?;
            let m = exact.value((*p as usize).max(1));
            let mut doc = report.to_json();
            doc["p"] = json!(p);
            let pass = if *p >= 1 {
                let mf = m.to_float()?;
                let rel = |v: num_complex::Complex64| (v - mf).norm() / mf.norm();
                let worst = rel(report.first).max(rel(report.second));
                doc["exact"] = json!(m.to_string());
                doc["relative_error_vs_exact"] = json!(worst);
                report.pass && worst <= *tol
            } else {
                report.pass
            };
            doc["pass"] = json!(pass);
            if let Some(dir) = emit {
                doc["files"] = json!(write_arcs(dir, *samples)?);
            }
            Ok((doc, pass))
        }
        Command::Paths { emit, samples } => Ok((json!({ "files": write_arcs(emit, *samples)? }), true)),
        Command::MinimaxPath { target, bbox, grid, levels, csv, p_max } => {
            let pb = minimax_path_on(&target.poly, &target.interval, &grid_spec(*bbox, *grid)?, *levels)?;
            if let Some(path) = csv {
                pb.path.write_csv(pb.points().len(), fs::File::create(path)?)?;
            }
            let mut doc = pb.to_json();
            doc["poly"] = json!(target.poly.to_string());
            doc["interval"] = json!(target.interval.to_strings());
            let mut pass = true;
            if let Some(p) = p_max {
                let s = moment_series(&target.poly, &target.interval, *p)?;
                let r = bound_report(&target.poly, &target.interval, &pb, &s)?;
                pass = r.ml_consistent;
                doc["report"] = serde_json::to_value(r)?;
            }
            Ok((doc, pass))
        }
        Command::KappaSweep {
            family,
            degree,
            count,
            seed,
            coeff_box,
            t_grid,
            p_max,
            bbox,
            grid,
            levels,
            store,
            timestamp,
        } => {
            let cfg = SweepConfig {
                p_max: *p_max,
                grid: grid_spec(*bbox, *grid)?,
                levels: *levels,
                timestamp: timestamp.then(unix_timestamp),
            };
            let store = store.as_ref().map(ResultStore::new);
            let sweep = match family {
                Family::Quadratic => {
                    let ts = t_grid
                        .clone()
                        .map(|l| l.0)
                        .unwrap_or_else(|| (1..=16).map(|k| BigRational::new(k.into(), 16.into())).collect());
                    quadratic_family_sweep(&ts, &cfg, store.as_ref())?
                }
                Family::Random => random_sweep(*degree, *count, coeff_box, *seed, &cfg, store.as_ref())?,
            };
            let mut doc = json!({ "summary": sweep.summary, "reused": sweep.reused });
            match &store {
                Some(s) => doc["store"] = json!(s.path().display().to_string()),
                None => doc["records"] = serde_json::to_value(&sweep.records)?,
            }
            let pass = sweep.summary.inconsistent_records == 0;
            Ok((doc, pass))
        }
    }
}
