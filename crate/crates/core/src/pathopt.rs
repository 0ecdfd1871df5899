//! Upper bounds on `limsup |M_p|^{1/p}` from paths between the interval endpoints.
//!
//! `f^p` is entire, so `M_p` can be integrated along any path from `a` to `b`
//! and `|M_p| ≤ length · (max_path |f|)^p`. [`minimax_path`] searches a grid
//! for the path whose largest node value of `|f|` is smallest, then refines it
//! on successively finer grids restricted to a tube around the incumbent.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::Path;
use crate::error::{Error, Result};
use crate::moments::{limsup_estimate, MomentSeries};
use crate::poly::{horner, Interval, Poly};
use crate::roots::complex_roots;
use crate::scalar::{rational_to_f64, ComplexFloat, ComplexRational};

/// Refinement tube half-width, in cells of the previous level.
pub const TUBE_CELLS: f64 = 6.0;
pub const MIN_GRID_NODES: usize = 16;

/// Axis-aligned box `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl GridBox {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        if !(x_lo < x_hi && y_lo < y_hi) || ![x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!("degenerate box [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]")));
        }
        Ok(Self { x_lo, x_hi, y_lo, y_hi })
    }

    pub fn contains(&self, z: ComplexFloat) -> bool {
        self.x_lo <= z.re && z.re <= self.x_hi && self.y_lo <= z.im && z.im <= self.y_hi
    }

    /// Bounding box of `{a, b}` and the roots of `f'`, padded on every side by
    /// half of its larger side.
    pub fn around(f: &Poly, a: ComplexFloat, b: ComplexFloat) -> Result<Self> {
        let mut pts = vec![a, b];
        let df = f.derivative();
        if !df.is_constant() {
            pts.extend(complex_roots(&df)?.iter().map(|r| r.z));
        }
        let x_lo = pts.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let x_hi = pts.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let y_lo = pts.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
        let y_hi = pts.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
        let pad = 0.5 * (x_hi - x_lo).max(y_hi - y_lo);
        Self::new(x_lo - pad, x_hi + pad, y_lo - pad, y_hi + pad)
    }
}

impl std::str::FromStr for GridBox {
    type Err = Error;

    /// `x_lo,x_hi,y_lo,y_hi`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::parse(t, "expected a number")))
            .collect::<Result<_>>()?;
        match v[..] {
            [a, b, c, d] => Self::new(a, b, c, d),
            _ => Err(Error::parse(s, "box needs four numbers x_lo,x_hi,y_lo,y_hi")),
        }
    }
}

/// Coarsest search grid. `bbox = None` selects [`GridBox::around`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub bbox: Option<GridBox>,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(bbox: Option<GridBox>, nx: usize, ny: usize) -> Result<Self> {
        if nx < MIN_GRID_NODES || ny < MIN_GRID_NODES {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_GRID_NODES} nodes per side, got {nx}x{ny}"
            )));
        }
        Ok(Self { bbox, nx, ny })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(None, n, n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathBound {
    /// Polyline from `a` to `b`.
    pub path: Path,
    /// Largest `|f|` over the path's vertices.
    pub bound: f64,
    /// Upper bound of `|f|` over the whole polyline.
    pub certified_bound: f64,
    pub grid_levels: usize,
    /// `bound` after each level, starting with the coarse grid.
    pub level_bounds: Vec<f64>,
    pub bbox: GridBox,
}

impl PathBound {
    pub fn points(&self) -> &[ComplexFloat] {
        match &self.path {
            Path::Polyline(p) => p,
            _ => unreachable!("minimax paths are polylines"),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pts: Vec<[f64; 2]> = self.points().iter().map(|z| [z.re, z.im]).collect();
        serde_json::json!({
            "bound": self.bound,
            "certified_bound": self.certified_bound,
            "levels": self.grid_levels,
            "level_bounds": self.level_bounds,
            "length": self.path.length(),
            "box": self.bbox,
            "path_points": pts,
        })
    }
}

/// Sparse node set on the lattice `origin + (i·hx, j·hy)`.
struct Lattice {
    bbox: GridBox,
    hx: f64,
    hy: f64,
    /// Largest valid indices.
    imax: i64,
    jmax: i64,
}

impl Lattice {
    fn point(&self, (i, j): (i64, i64)) -> ComplexFloat {
        ComplexFloat::new(self.bbox.x_lo + i as f64 * self.hx, self.bbox.y_lo + j as f64 * self.hy)
    }

    fn refined(&self) -> Self {
        Self { bbox: self.bbox, hx: self.hx / 2.0, hy: self.hy / 2.0, imax: 2 * self.imax, jmax: 2 * self.jmax }
    }
}

fn distance_to_segment(z: ComplexFloat, p: ComplexFloat, q: ComplexFloat) -> f64 {
    let d = q - p;
    let len_sq = d.norm_sqr();
    let t = if len_sq > 0.0 { (((z - p) * d.conj()).re / len_sq).clamp(0.0, 1.0) } else { 0.0 };
    (z - (p + d * t)).norm()
}

fn tube_nodes(lat: &Lattice, path: &[ComplexFloat], radius: f64) -> BTreeSet<(i64, i64)> {
    let mut out = BTreeSet::new();
    for w in path.windows(2) {
        let (p, q) = (w[0], w[1]);
        let i0 = (((p.re.min(q.re) - radius - lat.bbox.x_lo) / lat.hx).floor() as i64).max(0);
        let i1 = (((p.re.max(q.re) + radius - lat.bbox.x_lo) / lat.hx).ceil() as i64).min(lat.imax);
        let j0 = (((p.im.min(q.im) - radius - lat.bbox.y_lo) / lat.hy).floor() as i64).max(0);
        let j1 = (((p.im.max(q.im) + radius - lat.bbox.y_lo) / lat.hy).ceil() as i64).min(lat.jmax);
        for i in i0..=i1 {
            for j in j0..=j1 {
                if distance_to_segment(lat.point((i, j)), p, q) <= radius {
                    out.insert((i, j));
                }
            }
        }
    }
    out
}

#[derive(PartialEq)]
struct Label {
    bottleneck: f64,
    length: f64,
    node: usize,
}

impl Eq for Label {}

impl Ord for Label {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bottleneck
            .total_cmp(&self.bottleneck)
            .then(other.length.total_cmp(&self.length))
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bottleneck Dijkstra over an 8-connected node set; ties in the bottleneck
/// are broken by Euclidean length. Returns the node sequence and its bottleneck.
fn bottleneck_path(
    lat: &Lattice,
    nodes: &[(i64, i64)],
    weights: &[f64],
    source: usize,
    target: usize,
) -> Option<(Vec<usize>, f64)> {
    let index: HashMap<(i64, i64), usize> = nodes.iter().enumerate().map(|(k, &n)| (n, k)).collect();
    let mut best = vec![(f64::INFINITY, f64::INFINITY); nodes.len()];
    let mut prev = vec![usize::MAX; nodes.len()];
    let mut done = vec![false; nodes.len()];
    let mut heap = BinaryHeap::new();
    best[source] = (weights[source], 0.0);
    heap.push(Label { bottleneck: weights[source], length: 0.0, node: source });
    while let Some(Label { bottleneck, length, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == target {
            let mut seq = vec![target];
            while *seq.last().unwrap() != source {
                seq.push(prev[*seq.last().unwrap()]);
            }
            seq.reverse();
            return Some((seq, bottleneck));
        }
        let (i, j) = nodes[node];
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let Some(&next) = index.get(&(i + di, j + dj)) else { continue };
                if done[next] {
                    continue;
                }
                let cand = (bottleneck.max(weights[next]), length + ((di as f64 * lat.hx).hypot(dj as f64 * lat.hy)));
                if cand.0 < best[next].0 || (cand.0 == best[next].0 && cand.1 < best[next].1) {
                    best[next] = cand;
                    prev[next] = node;
                    heap.push(Label { bottleneck: cand.0, length: cand.1, node: next });
                }
            }
        }
    }
    None
}

/// `|f|` in floating point together with a bound on its rounding error.
struct FloatEvaluator {
    coeffs: Vec<ComplexFloat>,
    abs_coeffs: Vec<f64>,
    rounding: f64,
}

impl FloatEvaluator {
    fn new(f: &Poly) -> Result<Self> {
        let coeffs = f.float_coeffs()?;
        let abs_coeffs = coeffs.iter().map(|c| c.norm()).collect();
        let n = coeffs.len() as f64;
        Ok(Self { coeffs, abs_coeffs, rounding: 8.0 * (n + 1.0) * f64::EPSILON })
    }

    fn abs(&self, z: ComplexFloat) -> f64 {
        horner(&self.coeffs, z).norm()
    }

    /// `Σ|a_k| R^k`.
    fn majorant(&self, r: f64) -> f64 {
        self.abs_coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
    }

    /// `Σ k|a_k| R^{k-1}`, a bound of `|f'|` on the disk of radius `R`.
    fn derivative_majorant(&self, r: f64) -> f64 {
        self.abs_coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * r + k as f64 * c)
    }

    fn error(&self, z: ComplexFloat) -> f64 {
        self.rounding * self.majorant(z.norm())
    }
}

/// Upper bound of `|f|` on the polyline: per segment, the larger vertex value
/// plus half the segment length times a bound of `|f'|` on the covering disk.
fn certify(eval: &FloatEvaluator, path: &[ComplexFloat], weights: &[f64]) -> f64 {
    let mut out = 0.0f64;
    for k in 0..path.len() - 1 {
        let (p, q) = (path[k], path[k + 1]);
        let half = 0.5 * (q - p).norm();
        let mid = 0.5 * (p + q);
        let vertex = (weights[k] + eval.error(p)).max(weights[k + 1] + eval.error(q));
        let slack = half * eval.derivative_majorant(mid.norm() + half);
        out = out.max((vertex + slack) * (1.0 + 4.0 * f64::EPSILON));
    }
    out
}

struct Candidate {
    points: Vec<ComplexFloat>,
    weights: Vec<f64>,
    bound: f64,
}

fn solve_level(
    f_eval: &FloatEvaluator,
    lat: &Lattice,
    nodes: Vec<(i64, i64)>,
    a: (ComplexFloat, f64),
    b: (ComplexFloat, f64),
) -> Result<Candidate> {
    let weights: Vec<f64> = nodes.par_iter().map(|&n| f_eval.abs(lat.point(n))).collect();
    let nearest = |z: ComplexFloat| {
        nodes
            .iter()
            .enumerate()
            .min_by(|x, y| (lat.point(*x.1) - z).norm().total_cmp(&(lat.point(*y.1) - z).norm()))
            .map(|(k, _)| k)
            .ok_or(Error::NoPath)
    };
    let (source, target) = (nearest(a.0)?, nearest(b.0)?);
    let (seq, inner) = bottleneck_path(lat, &nodes, &weights, source, target).ok_or(Error::NoPath)?;
    let mut points = vec![a.0];
    let mut pw = vec![a.1];
    for &k in &seq {
        let z = lat.point(nodes[k]);
        if z != *points.last().unwrap() && z != b.0 {
            points.push(z);
            pw.push(weights[k]);
        }
    }
    points.push(b.0);
    pw.push(b.1);
    Ok(Candidate { points, weights: pw, bound: inner.max(a.1).max(b.1) })
}

/// Minimax path from `a` to `b`, refined `levels` times.
pub fn minimax_path(f: &Poly, a: ComplexFloat, b: ComplexFloat, grid: &GridSpec, levels: usize) -> Result<PathBound> {
    if a == b {
        return Err(Error::InvalidArgument("minimax path needs distinct endpoints".into()));
    }
    let bbox = match grid.bbox {
        Some(bx) => bx,
        None => GridBox::around(f, a, b)?,
    };
    for z in [a, b] {
        if !bbox.contains(z) {
            return Err(Error::OutsideBox(format!(
                "{z} not in [{}, {}] x [{}, {}]",
                bbox.x_lo, bbox.x_hi, bbox.y_lo, bbox.y_hi
            )));
        }
    }
    let eval = FloatEvaluator::new(f)?;
    // endpoint values from exact evaluation so bound >= max(|f(a)|, |f(b)|) holds as computed
    let wa = f.eval(&ComplexRational::from_float(a)).abs_f64();
    let wb = f.eval(&ComplexRational::from_float(b)).abs_f64();

    let mut lat = Lattice {
        bbox,
        hx: (bbox.x_hi - bbox.x_lo) / (grid.nx - 1) as f64,
        hy: (bbox.y_hi - bbox.y_lo) / (grid.ny - 1) as f64,
        imax: grid.nx as i64 - 1,
        jmax: grid.ny as i64 - 1,
    };
    let all: Vec<(i64, i64)> = (0..=lat.imax).flat_map(|i| (0..=lat.jmax).map(move |j| (i, j))).collect();
    let mut best = solve_level(&eval, &lat, all, (a, wa), (b, wb))?;
    let mut level_bounds = vec![best.bound];
    for _ in 0..levels {
        let radius = TUBE_CELLS * lat.hx.max(lat.hy);
        lat = lat.refined();
        let nodes: Vec<(i64, i64)> = tube_nodes(&lat, &best.points, radius).into_iter().collect();
        let cand = solve_level(&eval, &lat, nodes, (a, wa), (b, wb))?;
        if cand.bound <= best.bound {
            best = cand;
        }
        level_bounds.push(best.bound);
    }
    let certified_bound = certify(&eval, &best.points, &best.weights).max(best.bound);
    Ok(PathBound {
        path: Path::Polyline(best.points),
        bound: best.bound,
        certified_bound,
        grid_levels: levels,
        level_bounds,
        bbox,
    })
}

/// `minimax_path` between the endpoints of a real interval.
pub fn minimax_path_on(f: &Poly, interval: &Interval, grid: &GridSpec, levels: usize) -> Result<PathBound> {
    let a = ComplexFloat::new(rational_to_f64(interval.a())?, 0.0);
    let b = ComplexFloat::new(rational_to_f64(interval.b())?, 0.0);
    minimax_path(f, a, b, grid, levels)
}

/// Moment tail against a path bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub tail_max: f64,
    pub p_at_max: usize,
    pub bound: f64,
    pub certified_bound: f64,
    pub path_length: f64,
    /// `tail_max ≤ certified_bound + 1e-6`.
    pub consistent: bool,
    /// `length^{1/p}·certified_bound` at `p = p_at_max`; `|M_p|^{1/p}` can
    /// exceed the bound itself by this factor.
    pub ml_bound_at_p: f64,
    /// `tail_max ≤ ml_bound_at_p + 1e-6`.
    pub ml_consistent: bool,
}

pub fn bound_report(_f: &Poly, _interval: &Interval, pb: &PathBound, s: &MomentSeries) -> Result<BoundReport> {
    let est = limsup_estimate(s)?;
    let path_length = pb.path.length();
    let ml_bound_at_p = path_length.powf(1.0 / est.p_at_max as f64) * pb.certified_bound;
    Ok(BoundReport {
        tail_max: est.tail_max,
        p_at_max: est.p_at_max,
        bound: pb.bound,
        certified_bound: pb.certified_bound,
        path_length,
        consistent: est.tail_max <= pb.certified_bound + 1e-6,
        ml_bound_at_p,
        ml_consistent: est.tail_max <= ml_bound_at_p + 1e-6,
    })
}
