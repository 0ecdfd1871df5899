//! Exact real-root isolation with Sturm sequences over the rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::poly::{Interval, RealPoly};
use crate::scalar::BigRational;

/// Default isolating-interval width, `2^-60`.
pub fn default_epsilon() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1u64) << 60usize)
}

/// Closed rational interval known to contain exactly one real root.
/// `lo == hi` when the root itself is rational and was hit exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootEnclosure {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }
}

/// Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RealPoly>,
}

impl SturmChain {
    pub fn new(g: &RealPoly) -> Self {
        assert!(!g.is_zero(), "Sturm chain of the zero polynomial");
        let p0 = g.squarefree().normalized_positive();
        let p1 = p0.derivative().normalized_positive();
        let mut chain = vec![p0];
        if !p1.is_zero() {
            chain.push(p1);
            loop {
                let n = chain.len();
                let r = -&chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.normalized_positive());
            }
        }
        Self { chain }
    }

    /// The squarefree polynomial heading the chain.
    pub fn base(&self) -> &RealPoly {
        &self.chain[0]
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Number of sign changes of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        let signs: Vec<bool> =
            self.chain.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// Isolates every distinct real root of `g` in the closed interval, each to
/// width at most `eps`. Results are sorted.
pub fn real_roots_in_interval(g: &RealPoly, interval: &Interval, eps: &BigRational) -> Vec<RootEnclosure> {
    let chain = SturmChain::new(g);
    let base = chain.base().clone();
    let mut out = Vec::new();
    if base.eval(interval.a()).is_zero() {
        out.push(RootEnclosure { lo: interval.a().clone(), hi: interval.a().clone() });
    }
    let two = BigRational::from_integer(2.into());
    let mut stack = vec![(interval.a().clone(), interval.b().clone())];
    while let Some((lo, hi)) = stack.pop() {
        match chain.count(&lo, &hi) {
            0 => {}
            1 => out.push(refine(&base, lo, hi, eps)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Bisection on `(lo, hi]` holding exactly one simple root of `g`.
fn refine(g: &RealPoly, mut lo: BigRational, mut hi: BigRational, eps: &BigRational) -> RootEnclosure {
    let mut g_hi = g.eval(&hi);
    if g_hi.is_zero() {
        return RootEnclosure { lo: hi.clone(), hi };
    }
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > *eps {
        let mid = (&lo + &hi) / &two;
        let g_mid = g.eval(&mid);
        if g_mid.is_zero() {
            return RootEnclosure { lo: mid.clone(), hi: mid };
        }
        if g_mid.is_positive() == g_hi.is_positive() {
            hi = mid;
            g_hi = g_mid;
        } else {
            lo = mid;
        }
    }
    RootEnclosure { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    #[test]
    fn three_critical_points_of_the_quadratic_modulus() {
        // 2x(2x^2 - 3/2) = 4x^3 - 3x
        let g = RealPoly::from_ints(&[0, -3, 0, 4]);
        let roots = real_roots_in_interval(&g, &Interval::symmetric(), &default_epsilon());
        assert_eq!(roots.len(), 3);
        let s = 3f64.sqrt() / 2.0;
        let mids: Vec<f64> = roots.iter().map(|r| r.midpoint().to_f64().unwrap()).collect();
        assert!((mids[0] + s).abs() < 1e-15);
        assert_eq!(roots[1], RootEnclosure { lo: int(0), hi: int(0) });
        assert!((mids[2] - s).abs() < 1e-15);
        for r in &roots {
            assert!(&r.hi - &r.lo <= default_epsilon());
        }
    }

    #[test]
    fn sqrt_two() {
        let roots = real_roots_in_interval(
            &RealPoly::from_ints(&[-2, 0, 1]),
            &Interval::new(int(0), int(2)).unwrap(),
            &default_epsilon(),
        );
        assert_eq!(roots.len(), 1);
        assert!((roots[0].midpoint().to_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn no_real_roots() {
        let roots = real_roots_in_interval(
            &RealPoly::from_ints(&[1, 0, 1]),
            &Interval::new(int(-10), int(10)).unwrap(),
            &default_epsilon(),
        );
        assert!(roots.is_empty());
    }

    #[test]
    fn roots_on_both_endpoints_and_repeated() {
        // x^2 (x - 1)^3 on [0, 1]
        let x = RealPoly::from_ints(&[0, 1]);
        let xm1 = RealPoly::from_ints(&[-1, 1]);
        let g = &(&(&x * &x) * &(&xm1 * &xm1)) * &xm1;
        let roots = real_roots_in_interval(&g, &Interval::unit(), &default_epsilon());
        assert_eq!(roots, vec![RootEnclosure { lo: int(0), hi: int(0) }, RootEnclosure { lo: int(1), hi: int(1) }]);
    }

    #[test]
    fn counts_are_self_consistent() {
        let g = RealPoly::new(vec![rat(1, 7), int(-3), rat(-5, 2), int(4), int(1)]);
        let iv = Interval::new(int(-4), int(3)).unwrap();
        let chain = SturmChain::new(&g);
        let roots = real_roots_in_interval(&g, &iv, &default_epsilon());
        let at_a = usize::from(chain.base().eval(iv.a()).is_zero());
        assert_eq!(roots.len(), chain.count(iv.a(), iv.b()) + at_a);
    }

    proptest! {
        #[test]
        fn isolation_matches_sturm_count_and_signs(c in prop::collection::vec(-30i64..30, 2..8), a in -5i64..0, b in 1i64..5) {
            let g = RealPoly::new(c.iter().map(|&k| rat(k, 3)).collect());
            prop_assume!(g.degree().unwrap_or(0) >= 1);
            let iv = Interval::new(int(a), int(b)).unwrap();
            let chain = SturmChain::new(&g);
            let eps = rat(1, 1 << 20);
            let roots = real_roots_in_interval(&g, &iv, &eps);
            let at_a = usize::from(chain.base().eval(iv.a()).is_zero());
            prop_assert_eq!(roots.len(), chain.count(iv.a(), iv.b()) + at_a);
            for r in &roots {
                prop_assert!(&r.hi - &r.lo <= eps);
                if !r.is_exact() {
                    let (l, h) = (chain.base().eval(&r.lo), chain.base().eval(&r.hi));
                    prop_assert!(l.is_zero() || l.is_positive() != h.is_positive());
                }
            }
            for w in roots.windows(2) {
                prop_assert!(w[0].hi <= w[1].lo);
            }
        }
    }
}
