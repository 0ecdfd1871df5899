//! Adaptive composite Gauss–Legendre quadrature for complex-valued integrands on a real interval.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::ComplexFloat;

pub const PANEL_POINTS: usize = 15;
pub const MAX_DEPTH: usize = 40;

/// Nodes and weights on `[-1, 1]`, by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: ComplexFloat,
    carry: ComplexFloat,
}

impl CompensatedSum {
    pub fn add(&mut self, x: ComplexFloat) {
        let (s_re, c_re) = two_sum(self.sum.re, x.re);
        let (s_im, c_im) = two_sum(self.sum.im, x.im);
        self.sum = ComplexFloat::new(s_re, s_im);
        self.carry += ComplexFloat::new(c_re, c_im);
    }

    pub fn value(&self) -> ComplexFloat {
        self.sum + self.carry
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let c = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, c)
}

/// Panel estimate and `∫|f|` over the panel, the latter sizing rounding noise.
fn panel<F>(f: &F, lo: f64, hi: f64) -> Result<(ComplexFloat, f64)>
where
    F: Fn(f64) -> Result<ComplexFloat>,
{
    let (x, w) = rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = CompensatedSum::default();
    let mut mass = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = f(mid + half * xi)?;
        mass += v.norm() * wi;
        acc.add(v * *wi);
    }
    Ok((acc.value() * half, mass * half.abs()))
}

/// Differences below this multiple of `ε·∫|f|` are rounding, not truncation.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: ComplexFloat,
    /// Sum of the accepted panels' local error estimates.
    pub error: f64,
    pub panels: usize,
}

/// `∫_lo^hi f` to estimated absolute error `≤ tol·(1 + |result|)`.
///
/// Panels are bisected until the two-half estimate agrees with the whole-panel
/// estimate within the panel's share of the tolerance, or within the rounding
/// noise of `∫|f|` on the panel when cancellation makes the tolerance
/// unreachable. Panels are visited left to right so the result does not depend
/// on scheduling.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<ComplexFloat>,
{
    let (whole, _) = panel(&f, lo, hi)?;
    let budget = tol * (1.0 + whole.norm());
    let width = hi - lo;
    let mut stack = vec![(lo, hi, whole, 0usize)];
    let mut total = CompensatedSum::default();
    let mut error = 0.0;
    let mut panels = 0;
    while let Some((a, b, est, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let (left, mass_l) = panel(&f, a, m)?;
        let (right, mass_r) = panel(&f, m, b)?;
        let err = (left + right - est).norm();
        if err <= budget * (b - a) / width || err <= ROUNDING_FLOOR * (mass_l + mass_r) {
            total.add(left);
            total.add(right);
            error += err;
            panels += 2;
        } else if depth + 1 >= MAX_DEPTH {
            return Err(Error::QuadratureDepth { depth: MAX_DEPTH, achieved: err });
        } else {
            stack.push((m, b, right, depth + 1));
            stack.push((a, m, left, depth + 1));
        }
    }
    Ok(QuadratureResult { value: total.value(), error, panels })
}
