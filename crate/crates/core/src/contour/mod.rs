//! Complex-plane paths, the `w`-plane moment integrand with its branch cut, contour
//! quadrature, deformation checks and ML-inequality bounds.
//!
//! For `f(z) = 1 − (z + i/2)²` on `[−1, 1]` the substitution `w = f(z)` turns
//! `M_p` into `∫ w^p / (−2·√(1−w)) dw` along the image arc, where the square
//! root takes `r·e^{iθ} ↦ √r·e^{iθ/2}` with `θ ∈ (0, 2π)`. That branch is cut
//! along `1 − w ∈ [0, ∞)`, i.e. `w ∈ (−∞, 1]`, and every path here must stay
//! off that ray.

pub mod quadrature;

use std::io::Write;

use crate::error::{Error, Result};
use crate::poly::{horner, Poly};
use crate::scalar::ComplexFloat;

/// Minimum distance between `ζ` and the non-negative real axis for [`branch_sqrt`].
pub const SQRT_CUT_TOLERANCE: f64 = 1e-12;
/// Minimum distance between a quadrature node and the ray `(−∞, 1]`.
pub const CUT_TOLERANCE: f64 = 1e-9;
/// Paths compared by [`deformation_check`] must share endpoints to this accuracy.
pub const ENDPOINT_TOLERANCE: f64 = 1e-12;
/// Samples per smooth piece when scanning a path for cut crossings.
const CUT_SCAN_SAMPLES: usize = 4096;

fn c(re: f64, im: f64) -> ComplexFloat {
    ComplexFloat::new(re, im)
}

/// Distance from `z` to the ray `[0, ∞)`.
fn distance_to_nonnegative_axis(z: ComplexFloat) -> f64 {
    if z.re >= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

/// Distance from `w` to the cut `(−∞, 1]` of `w ↦ √(1−w)`.
pub fn cut_distance(w: ComplexFloat) -> f64 {
    distance_to_nonnegative_axis(c(1.0, 0.0) - w)
}

/// Square root with argument taken in `(0, 2π)`, so the result has argument in
/// `(0, π)`. Undefined on the non-negative real axis.
pub fn branch_sqrt(z: ComplexFloat) -> Result<ComplexFloat> {
    let d = distance_to_nonnegative_axis(z);
    if !(d >= SQRT_CUT_TOLERANCE) {
        return Err(Error::BranchCut { point: z.to_string(), distance: d });
    }
    // −z has principal argument θ − π, so i·√(−z) = √r·e^{iθ/2}
    Ok(c(0.0, 1.0) * (-z).sqrt())
}

/// A piecewise-smooth path `γ: [0, 1] → ℂ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Path {
    Polyline(Vec<ComplexFloat>),
    /// `center + radius·e^{iθ}`, `θ` running linearly from `angle_start` to `angle_end`.
    CircleArc {
        center: ComplexFloat,
        radius: f64,
        angle_start: f64,
        angle_end: f64,
    },
    /// `x = apex − y²`, `y` running linearly from `y_start` to `y_end`.
    ParabolaArc {
        apex: f64,
        y_start: f64,
        y_end: f64,
    },
}

impl Path {
    /// Straight segment.
    pub fn segment(a: ComplexFloat, b: ComplexFloat) -> Self {
        Path::Polyline(vec![a, b])
    }

    pub fn point(&self, t: f64) -> ComplexFloat {
        match self {
            Path::Polyline(pts) => {
                let (k, s) = polyline_locate(pts.len(), t);
                pts[k] + (pts[k + 1] - pts[k]) * s
            }
            Path::CircleArc { center, radius, angle_start, angle_end } => {
                center + ComplexFloat::from_polar(*radius, angle_start + t * (angle_end - angle_start))
            }
            Path::ParabolaArc { apex, y_start, y_end } => {
                let y = y_start + t * (y_end - y_start);
                c(apex - y * y, y)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> ComplexFloat {
        match self {
            Path::Polyline(pts) => {
                let (k, _) = polyline_locate(pts.len(), t);
                (pts[k + 1] - pts[k]) * (pts.len() - 1) as f64
            }
            Path::CircleArc { radius, angle_start, angle_end, .. } => {
                let span = angle_end - angle_start;
                ComplexFloat::from_polar(*radius, angle_start + t * span) * c(0.0, span)
            }
            Path::ParabolaArc { y_start, y_end, .. } => {
                let dy = y_end - y_start;
                let y = y_start + t * dy;
                c(-2.0 * y * dy, dy)
            }
        }
    }

    pub fn start(&self) -> ComplexFloat {
        match self {
            Path::Polyline(pts) => pts[0],
            _ => self.point(0.0),
        }
    }

    pub fn end(&self) -> ComplexFloat {
        match self {
            Path::Polyline(pts) => *pts.last().unwrap(),
            _ => self.point(1.0),
        }
    }

    /// Arc length, in closed form for every variant.
    pub fn length(&self) -> f64 {
        match self {
            Path::Polyline(pts) => pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum(),
            Path::CircleArc { radius, angle_start, angle_end, .. } => radius * (angle_end - angle_start).abs(),
            Path::ParabolaArc { y_start, y_end, .. } => {
                let prim = |y: f64| 0.5 * y * (1.0 + 4.0 * y * y).sqrt() + 0.25 * (2.0 * y).asinh();
                (prim(*y_end) - prim(*y_start)).abs()
            }
        }
    }

    /// Smooth pieces; a polyline splits into its segments.
    pub fn pieces(&self) -> Vec<Path> {
        match self {
            Path::Polyline(pts) => pts.windows(2).map(|w| Path::segment(w[0], w[1])).collect(),
            other => vec![other.clone()],
        }
    }

    /// CSV rows `t,re,im` at `samples` evenly spaced parameters.
    pub fn write_csv<W: Write>(&self, samples: usize, mut w: W) -> Result<()> {
        writeln!(w, "t,re,im")?;
        let n = samples.max(2);
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let z = self.point(t);
            writeln!(w, "{t},{},{}", z.re, z.im)?;
        }
        Ok(())
    }
}

fn polyline_locate(n_points: usize, t: f64) -> (usize, f64) {
    let segments = n_points - 1;
    let x = t.clamp(0.0, 1.0) * segments as f64;
    let k = (x.floor() as usize).min(segments - 1);
    (k, x - k as f64)
}

/// The image of `[−1, 1]` under `1 − (z + i/2)²`: the arc of `x = 5/4 − y²`
/// from `1/4 + i` to `1/4 − i`.
pub fn parabola_image_arc() -> Path {
    Path::ParabolaArc { apex: 1.25, y_start: 1.0, y_end: -1.0 }
}

/// The arc of `|w|² = 17/16` from `1/4 + i` to `1/4 − i` through `√17/4`.
/// The left-hand arc would cross the cut at `−√17/4`.
pub fn circle_image_arc() -> Path {
    let theta = 1f64.atan2(0.25);
    Path::CircleArc { center: c(0.0, 0.0), radius: 17f64.sqrt() / 4.0, angle_start: theta, angle_end: -theta }
}

/// What is integrated along a path.
#[derive(Clone, Debug, PartialEq)]
pub enum Integrand {
    /// `f(z)^p`, entire.
    ZPower { coeffs: Vec<ComplexFloat>, p: u32 },
    /// `w^p / (−2·√(1−w))` with the branch of [`branch_sqrt`].
    WPower { p: u32 },
}

impl Integrand {
    pub fn z_power(f: &Poly, p: u32) -> Result<Self> {
        Ok(Integrand::ZPower { coeffs: f.float_coeffs()?, p })
    }

    pub fn eval(&self, z: ComplexFloat) -> Result<ComplexFloat> {
        match self {
            Integrand::ZPower { coeffs, p } => Ok(horner(coeffs, z).powu(*p)),
            Integrand::WPower { p } => {
                let d = cut_distance(z);
                if !(d > CUT_TOLERANCE) {
                    return Err(Error::BranchCut { point: z.to_string(), distance: d });
                }
                Ok(z.powu(*p) / (c(-2.0, 0.0) * branch_sqrt(c(1.0, 0.0) - z)?))
            }
        }
    }

    /// Rejects paths that touch or cross the cut `(−∞, 1]` between samples.
    pub fn check_path(&self, path: &Path) -> Result<()> {
        if let Integrand::WPower { .. } = self {
            for piece in path.pieces() {
                let n = CUT_SCAN_SAMPLES;
                let mut prev = piece.point(0.0);
                for i in 0..=n {
                    let w = piece.point(i as f64 / n as f64);
                    let d = cut_distance(w);
                    if !(d > CUT_TOLERANCE) {
                        return Err(Error::BranchCut { point: w.to_string(), distance: d });
                    }
                    if prev.im * w.im < 0.0 {
                        let s = prev.im / (prev.im - w.im);
                        let x = prev.re + s * (w.re - prev.re);
                        if x <= 1.0 {
                            return Err(Error::BranchCut { point: format!("{x}+0i"), distance: 0.0 });
                        }
                    }
                    prev = w;
                }
            }
        }
        Ok(())
    }

    /// The `p`-independent factor bounded by the ML estimate, and the base
    /// whose `p`-th power is bounded separately.
    fn split(&self, z: ComplexFloat) -> Result<(f64, f64)> {
        match self {
            Integrand::ZPower { coeffs, .. } => Ok((1.0, horner(coeffs, z).norm())),
            Integrand::WPower { .. } => Ok((0.5 / branch_sqrt(c(1.0, 0.0) - z)?.norm(), z.norm())),
        }
    }
}

/// Value and error estimate of a contour integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourIntegral {
    pub value: ComplexFloat,
    pub error: f64,
}

/// `∫_γ g(z) dz = ∫_0^1 g(γ(t))·γ'(t) dt`, piece by piece.
pub fn integrate(path: &Path, g: &Integrand, tol: f64) -> Result<ContourIntegral> {
    g.check_path(path)?;
    let mut total = quadrature::CompensatedSum::default();
    let mut error = 0.0;
    for piece in path.pieces() {
        let r = quadrature::integrate(|t| Ok(g.eval(piece.point(t))? * piece.derivative(t)), 0.0, 1.0, tol)?;
        total.add(r.value);
        error += r.error;
    }
    Ok(ContourIntegral { value: total.value(), error })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationReport {
    pub first: ComplexFloat,
    pub second: ComplexFloat,
    pub difference: f64,
    /// `difference / max(|first|, |second|)`.
    pub relative_difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl DeformationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "first": {"re": self.first.re, "im": self.first.im},
            "second": {"re": self.second.re, "im": self.second.im},
            "difference": self.difference,
            "relative_difference": self.relative_difference,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Integrates `g` along two paths with common endpoints and compares.
pub fn deformation_check(g: &Integrand, first: &Path, second: &Path, tol: f64) -> Result<DeformationReport> {
    for (x, y, which) in [(first.start(), second.start(), "start"), (first.end(), second.end(), "end")] {
        if (x - y).norm() > ENDPOINT_TOLERANCE {
            return Err(Error::EndpointMismatch(format!("{which}: {x} vs {y}")));
        }
    }
    let quad_tol = (tol * 1e-3).max(1e-14);
    let a = integrate(first, g, quad_tol)?.value;
    let b = integrate(second, g, quad_tol)?.value;
    let difference = (a - b).norm();
    let scale = a.norm().max(b.norm());
    let relative_difference = if scale > 0.0 { difference / scale } else { 0.0 };
    Ok(DeformationReport {
        first: a,
        second: b,
        difference,
        relative_difference,
        tolerance: tol,
        pass: relative_difference <= tol,
    })
}

/// `|∫_γ g| ≤ K·r^p` with `K = length·sup_factor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MLBound {
    pub length: f64,
    pub sup_factor: f64,
    pub r: f64,
    pub k: f64,
}

impl MLBound {
    pub fn at(&self, p: u32) -> f64 {
        self.k * self.r.powi(p as i32)
    }

    /// `ln(K·r^p)`, usable where the bound itself would overflow.
    pub fn ln_at(&self, p: u32) -> f64 {
        self.k.ln() + p as f64 * self.r.ln()
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Dense sampling followed by golden-section refinement around the best sample.
fn sampled_sup<F: Fn(f64) -> f64>(f: F, samples: usize) -> f64 {
    let n = samples.max(3);
    let vals: Vec<f64> = (0..n).map(|i| f(i as f64 / (n - 1) as f64)).collect();
    let (best, &v) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let lo = best.saturating_sub(1) as f64 / (n - 1) as f64;
    let hi = (best + 1).min(n - 1) as f64 / (n - 1) as f64;
    v.max(golden_max(&f, lo, hi))
}

pub fn ml_bound(path: &Path, g: &Integrand, samples: usize) -> Result<MLBound> {
    g.check_path(path)?;
    let mut sup_factor = 0.0f64;
    let mut r = 0.0f64;
    for piece in path.pieces() {
        let n = (samples / path.pieces().len()).max(3);
        let factor = |t: f64| g.split(piece.point(t)).map(|s| s.0).unwrap_or(f64::INFINITY);
        let base = |t: f64| g.split(piece.point(t)).map(|s| s.1).unwrap_or(f64::INFINITY);
        sup_factor = sup_factor.max(sampled_sup(factor, n));
        r = r.max(sampled_sup(base, n));
    }
    let length = path.length();
    Ok(MLBound { length, sup_factor, r, k: length * sup_factor })
}
