//! Critical points, the critical-value set, and the certified sup-norm on an interval.

mod aberth;
mod sturm;

pub use aberth::{complex_roots, Root, CLUSTER_TOLERANCE, MAX_ITERATIONS, POLISH_TOLERANCE};
pub use sturm::{default_epsilon, real_roots_in_interval, RootEnclosure, SturmChain};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{horner, Interval, Poly, RealPoly};
use crate::scalar::{format_rational, rational_to_f64, BigRational, ComplexFloat, ComplexRational};

/// Critical values `f(z)` at roots of `f'`, together with the endpoint values.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSet {
    pub critical_points: Vec<Root>,
    pub values: Vec<ComplexFloat>,
    pub endpoint_values: (ComplexRational, ComplexRational),
    /// `max |s|` over critical values and endpoint values.
    pub max_abs: f64,
}

impl CriticalSet {
    /// `{critical_points: [{re, im, residual}], values, endpoint_values, max_abs}`;
    /// endpoint values are exact.
    pub fn to_json(&self) -> serde_json::Value {
        let pts: Vec<_> = self
            .critical_points
            .iter()
            .map(|r| serde_json::json!({ "re": r.z.re, "im": r.z.im, "residual": r.residual, "multiplicity": r.multiplicity }))
            .collect();
        let vals: Vec<_> = self.values.iter().map(|v| serde_json::json!({ "re": v.re, "im": v.im })).collect();
        serde_json::json!({
            "critical_points": pts,
            "values": vals,
            "endpoint_values": [self.endpoint_values.0, self.endpoint_values.1],
            "max_abs": self.max_abs,
        })
    }
}

pub fn critical_set(f: &Poly, interval: &Interval) -> Result<CriticalSet> {
    if f.is_constant() {
        return Err(Error::InvalidArgument("critical set of a constant polynomial".into()));
    }
    let df = f.derivative();
    let critical_points = if df.is_constant() { Vec::new() } else { complex_roots(&df)? };
    let coeffs = f.float_coeffs()?;
    let values: Vec<ComplexFloat> = critical_points.iter().map(|r| horner(&coeffs, r.z)).collect();
    let (a, b) = interval.endpoints_c();
    let endpoint_values = (f.eval(&a), f.eval(&b));
    let max_abs = values
        .iter()
        .map(|v| v.norm())
        .chain([endpoint_values.0.abs_f64(), endpoint_values.1.abs_f64()])
        .fold(0.0, f64::max);
    Ok(CriticalSet { critical_points, values, endpoint_values, max_abs })
}

/// `sup |f|` over a real interval, with an exact enclosure of `sup |f|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupNorm {
    /// Lower end of the enclosure of `sup |f|²`.
    pub value_sq_lo: BigRational,
    /// Upper end; equal to `value_sq_lo` when the maximiser is rational.
    pub value_sq_hi: BigRational,
    pub value: f64,
    pub argmax: f64,
    pub certified_interval: [f64; 2],
}

impl SupNorm {
    /// The exact `sup |f|²`, when it was pinned down exactly.
    pub fn value_sq(&self) -> Option<&BigRational> {
        (self.value_sq_lo == self.value_sq_hi).then_some(&self.value_sq_lo)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": self.value,
            "argmax": self.argmax,
            "certified_interval": self.certified_interval,
            "value_sq_exact": self.value_sq().map(format_rational),
            "value_sq_enclosure": [format_rational(&self.value_sq_lo), format_rational(&self.value_sq_hi)],
        })
    }
}

struct Candidate {
    lo: BigRational,
    hi: BigRational,
    at: f64,
}

/// `Σ |c_k| R^k`, an upper bound of `|p|` on `[-R, R]`.
fn coefficient_bound(p: &RealPoly, radius: &BigRational) -> BigRational {
    p.coeffs().iter().rev().fold(BigRational::zero(), |acc, c| acc * radius + c.abs())
}

pub fn sup_norm(f: &Poly, interval: &Interval) -> Result<SupNorm> {
    sup_norm_with_epsilon(f, interval, &default_epsilon())
}

/// Maximises `|f|²` over the endpoints and the isolated real roots of its
/// derivative. Irrational maximisers contribute an enclosure widened by a
/// Lipschitz term over their isolating interval.
pub fn sup_norm_with_epsilon(f: &Poly, interval: &Interval, eps: &BigRational) -> Result<SupNorm> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("sup-norm of the zero polynomial".into()));
    }
    let h = f.abs_sq_real();
    let dh = h.derivative();
    let mut candidates = Vec::new();
    for x in [interval.a(), interval.b()] {
        let v = h.eval(x);
        candidates.push(Candidate { lo: v.clone(), hi: v, at: rational_to_f64(x)? });
    }
    if !dh.is_zero() {
        for enc in real_roots_in_interval(&dh, interval, eps) {
            if enc.is_exact() {
                let v = h.eval(&enc.lo);
                candidates.push(Candidate { lo: v.clone(), hi: v, at: rational_to_f64(&enc.lo)? });
            } else {
                let (vl, vh) = (h.eval(&enc.lo), h.eval(&enc.hi));
                let radius = enc.lo.abs().max(enc.hi.abs());
                let slack = (&enc.hi - &enc.lo) * coefficient_bound(&dh, &radius);
                let (mn, mx) = if vl <= vh { (vl, vh) } else { (vh, vl) };
                candidates.push(Candidate { lo: mn - &slack, hi: mx + &slack, at: rational_to_f64(&enc.midpoint())? });
            }
        }
    }
    let best = candidates
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.lo.cmp(&y.lo).then(j.cmp(i)))
        .map(|(_, c)| c)
        .expect("endpoints are always candidates");
    let lo = best.lo.clone();
    let hi = candidates.iter().map(|c| c.hi.clone()).max().unwrap().max(lo.clone());
    let lo_f = lo.to_f64().unwrap_or(0.0).max(0.0);
    let hi_f = rational_to_f64(&hi)?;
    let value = if lo == hi {
        lo_f.sqrt()
    } else {
        rational_to_f64(&((&lo + &hi) / BigRational::from_integer(2.into())))?.sqrt()
    };
    Ok(SupNorm {
        value_sq_lo: lo.clone(),
        value_sq_hi: hi.clone(),
        value,
        argmax: best.at,
        certified_interval: if lo == hi { [value, value] } else { [lo_f.sqrt().next_down(), hi_f.sqrt().next_up()] },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::named::{complex_quadratic, shifted_parabola};
    use crate::scalar::{int, rat};

    #[test]
    fn critical_set_examples() {
        let cs = critical_set(&shifted_parabola(), &Interval::unit()).unwrap();
        assert_eq!(cs.values.len(), 1);
        assert!((cs.values[0] - ComplexFloat::new(4.0, 0.0)).norm() < 1e-12);
        assert_eq!(cs.endpoint_values, (ComplexRational::from_int(3), ComplexRational::from_int(0)));
        assert!((cs.max_abs - 4.0).abs() < 1e-9);

        let cs = critical_set(&Poly::from_ints(&[0, 0, 1]), &Interval::unit()).unwrap();
        assert!(cs.values[0].norm() < 1e-15);
        assert_eq!(cs.max_abs, 1.0);

        let cs = critical_set(&complex_quadratic(), &Interval::symmetric()).unwrap();
        assert!((cs.values[0] - ComplexFloat::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(cs.endpoint_values.0, ComplexRational::new(rat(1, 4), int(1)));
        assert_eq!(cs.endpoint_values.1, ComplexRational::new(rat(1, 4), int(-1)));
        assert!((cs.max_abs - 17f64.sqrt() / 4.0).abs() < 1e-15);
        for r in &cs.critical_points {
            assert!(r.residual <= POLISH_TOLERANCE);
        }
    }

    #[test]
    fn critical_set_rejects_constants() {
        assert!(critical_set(&Poly::from_ints(&[2]), &Interval::unit()).is_err());
    }

    #[test]
    fn linear_has_only_endpoints() {
        let cs = critical_set(&Poly::from_ints(&[1, 2]), &Interval::unit()).unwrap();
        assert!(cs.critical_points.is_empty());
        assert_eq!(cs.max_abs, 3.0);
    }

    #[test]
    fn sup_norm_examples() {
        let s = sup_norm(&complex_quadratic(), &Interval::symmetric()).unwrap();
        assert_eq!(s.value, 1.25);
        assert_eq!(s.value_sq(), Some(&rat(25, 16)));
        assert_eq!(s.argmax, 0.0);

        let s = sup_norm(&shifted_parabola(), &Interval::unit()).unwrap();
        assert_eq!(s.value_sq(), Some(&int(9)));
        assert_eq!(s.value, 3.0);
        assert_eq!(s.argmax, 0.0);

        let s = sup_norm(&Poly::x(), &Interval::symmetric()).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.argmax.abs(), 1.0);
    }

    #[test]
    fn irrational_maximiser_gets_tight_enclosure() {
        // f = x^3 - x on [-1, 1]: max |f| = 2/(3√3) at x = ±1/√3
        let f = Poly::from_ints(&[0, -1, 0, 1]);
        let s = sup_norm(&f, &Interval::symmetric()).unwrap();
        let expect = 2.0 / (3.0 * 3f64.sqrt());
        assert!(s.value_sq().is_none());
        assert!(s.certified_interval[0] <= expect && expect <= s.certified_interval[1]);
        assert!(s.certified_interval[1] - s.certified_interval[0] < 1e-12);
        assert!((s.value - expect).abs() < 1e-15);
        assert!((s.argmax.abs() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_sup_norm() {
        let s = sup_norm(&Poly::constant(ComplexRational::new(int(3), int(4))), &Interval::unit()).unwrap();
        assert_eq!(s.value, 5.0);
    }
}
