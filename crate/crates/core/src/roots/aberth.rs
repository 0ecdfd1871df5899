//! Simultaneous complex root finding (Aberth–Ehrlich) with a Newton polish.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::ComplexFloat;

pub const MAX_ITERATIONS: usize = 200;
/// Backward-error tolerance for simple roots.
pub const POLISH_TOLERANCE: f64 = 1e-13;
/// Backward-error tolerance for roots inside a cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

/// One approximate root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: ComplexFloat,
    /// Relative backward error `|g(z)| / Σ|a_k||z|^k`.
    pub residual: f64,
    /// Number of computed roots in this root's cluster.
    pub multiplicity: usize,
}

fn eval_with_derivative(a: &[ComplexFloat], z: ComplexFloat) -> (ComplexFloat, ComplexFloat) {
    let zero = ComplexFloat::new(0.0, 0.0);
    let (mut p, mut dp) = (zero, zero);
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn backward_error(a: &[ComplexFloat], z: ComplexFloat) -> f64 {
    let r = z.norm();
    let scale = a.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    let (p, _) = eval_with_derivative(a, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All `deg(g)` complex roots of `g`, with multiplicity.
pub fn complex_roots(g: &Poly) -> Result<Vec<Root>> {
    let degree = match g.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidArgument(format!("root finding needs degree >= 1, got {g}"))),
    };
    // exact zero roots are deflated up front
    let zeros = g.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        let rest = Poly::new(g.coeffs()[zeros..].to_vec());
        let mut roots: Vec<Root> =
            (0..zeros).map(|_| Root { z: ComplexFloat::new(0.0, 0.0), residual: 0.0, multiplicity: zeros }).collect();
        if degree > zeros {
            roots.extend(complex_roots(&rest)?);
        }
        roots.sort_by(|x, y| x.z.re.total_cmp(&y.z.re).then(x.z.im.total_cmp(&y.z.im)));
        return Ok(roots);
    }
    let a = g.float_coeffs()?;
    let lead = a[degree];
    let monic: Vec<ComplexFloat> = a.iter().map(|c| c / lead).collect();

    if degree == 1 {
        let z = -monic[0];
        return Ok(vec![Root { z, residual: backward_error(&monic, z), multiplicity: 1 }]);
    }

    // Fujiwara bound on root moduli, start on half of it around the centroid.
    let bound = (1..=degree)
        .map(|k| {
            let c = monic[degree - k].norm();
            if k == degree {
                (c / 2.0).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let centroid = -monic[degree - 1] / degree as f64;
    let radius = if bound > 0.0 { 0.5 * bound } else { 1.0 };
    let mut z: Vec<ComplexFloat> = (0..degree)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
            centroid + ComplexFloat::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut done = true;
        for k in 0..degree {
            let (p, dp) = eval_with_derivative(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: ComplexFloat = (0..degree).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (ComplexFloat::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    for zk in z.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = eval_with_derivative(&monic, *zk);
            let candidate = *zk - p / dp;
            if candidate.is_finite() && backward_error(&monic, candidate) < backward_error(&monic, *zk) {
                *zk = candidate;
            } else {
                break;
            }
        }
    }

    let cluster_radius = |x: ComplexFloat| 1e-5 * (1.0 + x.norm());
    let mut roots = Vec::with_capacity(degree);
    for (k, &zk) in z.iter().enumerate() {
        let multiplicity =
            z.iter().enumerate().filter(|&(j, zj)| j == k || (zk - zj).norm() <= cluster_radius(zk)).count();
        let residual = backward_error(&monic, zk);
        let tol = if multiplicity > 1 { CLUSTER_TOLERANCE } else { POLISH_TOLERANCE };
        if !(residual <= tol) {
            return Err(Error::NoConvergence { poly: g.to_string(), iterations: MAX_ITERATIONS });
        }
        roots.push(Root { z: zk, residual, multiplicity });
    }
    roots.sort_by(|x, y| x.z.re.total_cmp(&y.z.re).then(x.z.im.total_cmp(&y.z.im)));
    Ok(roots)
}
