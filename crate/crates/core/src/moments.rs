//! Exact moment sequences `M_p = ∫_a^b f(x)^p dx` and the finite-tail root-test
//! estimate of `limsup |M_p|^{1/p}`.

use std::io::Write;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Interval, Poly};
use crate::scalar::{format_rational, ln_rational, rational_bits, BigRational, ComplexRational};

/// Default per-coefficient bit budget for moment series.
pub const DEFAULT_BIT_BUDGET: u64 = 1_000_000;

/// Single moment through the plain rational route: expand `f^p`, then apply the
/// antiderivative term by term.
pub fn moment_exact(f: &Poly, interval: &Interval, p: usize) -> Result<ComplexRational> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("moments of the zero polynomial".into()));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let fp = f.pow(p);
    let (a, b) = (interval.a(), interval.b());
    let mut a_pow = a.clone();
    let mut b_pow = b.clone();
    let mut acc = ComplexRational::zero();
    for (k, c) in fp.coeffs().iter().enumerate() {
        let w = (&b_pow - &a_pow) / BigRational::from_integer(BigInt::from(k + 1));
        acc += &c.scale(&w);
        a_pow *= a;
        b_pow *= b;
    }
    Ok(acc)
}

/// Exact moments `M_1..M_P` of one polynomial over one interval.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSeries {
    pub f: Poly,
    pub interval: Interval,
    values: Vec<ComplexRational>,
}

impl MomentSeries {
    pub fn p_max(&self) -> usize {
        self.values.len()
    }

    /// `M_p`, 1-based.
    pub fn value(&self, p: usize) -> &ComplexRational {
        &self.values[p - 1]
    }

    pub fn values(&self) -> &[ComplexRational] {
        &self.values
    }

    /// `|M_p|^{1/p}` for every `p`, computed as `exp(ln(|M_p|²) / 2p)` from the
    /// exact squared modulus so values far outside binary64 range are fine.
    /// Zero moments come out as `0.0`; see [`MomentSeries::zero_flags`].
    pub fn abs_roots(&self) -> Vec<f64> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let n = m.norm_sq();
                if n.is_zero() {
                    0.0
                } else {
                    (ln_rational(&n) / (2.0 * (i + 1) as f64)).exp()
                }
            })
            .collect()
    }

    pub fn zero_flags(&self) -> Vec<bool> {
        self.values.iter().map(ComplexRational::is_zero).collect()
    }

    /// `ln |M_p|`, `None` for zero moments.
    pub fn ln_abs(&self) -> Vec<Option<f64>> {
        self.values
            .iter()
            .map(|m| {
                let n = m.norm_sq();
                (!n.is_zero()).then(|| 0.5 * ln_rational(&n))
            })
            .collect()
    }

    /// CSV with columns `p,re,im,abs_root,flagged_zero`; `re`/`im` are exact.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "p,re,im,abs_root,flagged_zero")?;
        let roots = self.abs_roots();
        for (i, m) in self.values.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{:e},{}",
                i + 1,
                format_rational(&m.re),
                format_rational(&m.im),
                roots[i],
                u8::from(m.is_zero())
            )?;
        }
        Ok(())
    }
}

fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `M_1..M_P` with the default bit budget.
pub fn moment_series(f: &Poly, interval: &Interval, p_max: usize) -> Result<MomentSeries> {
    moment_series_with_budget(f, interval, p_max, DEFAULT_BIT_BUDGET)
}

/// Builds the whole series from incremental powers.
///
/// Denominators are cleared once: with `f = g/D` (`g` Gaussian-integer),
/// `a = α/q`, `b = β/q`, `K = deg(f)·P` and `L = lcm(1..K+1)`,
///
/// `M_p = Σ_k [g^p]_k · W_k / (L · q^{K+1} · D^p)`,
/// `W_k = (β^{k+1} − α^{k+1}) · q^{K−k} · L/(k+1)`,
///
/// so each step is an integer convolution plus one dot product and a single
/// reduction.
pub fn moment_series_with_budget(f: &Poly, interval: &Interval, p_max: usize, bit_budget: u64) -> Result<MomentSeries> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("moments of the zero polynomial".into()));
    }
    if p_max == 0 {
        return Err(Error::InvalidArgument("P must be at least 1".into()));
    }
    let coeff_den = lcm_of_denominators(f.coeffs().iter().flat_map(|c| [&c.re, &c.im]));
    let g: Vec<Complex<BigInt>> = f
        .coeffs()
        .iter()
        .map(|c| {
            let re = c.re.numer() * (&coeff_den / c.re.denom());
            let im = c.im.numer() * (&coeff_den / c.im.denom());
            Complex::new(re, im)
        })
        .collect();

    let (a, b) = (interval.a(), interval.b());
    let q = a.denom().lcm(b.denom());
    let alpha = a.numer() * (&q / a.denom());
    let beta = b.numer() * (&q / b.denom());

    let k_max = (g.len() - 1) * p_max;
    let mut lcm_all = BigInt::one();
    for k in 1..=k_max + 1 {
        lcm_all = lcm_all.lcm(&BigInt::from(k));
    }
    let mut q_pows = Vec::with_capacity(k_max + 1);
    q_pows.push(BigInt::one());
    for j in 1..=k_max {
        let next = &q_pows[j - 1] * &q;
        q_pows.push(next);
    }
    let mut weights = Vec::with_capacity(k_max + 1);
    let (mut ap, mut bp) = (alpha.clone(), beta.clone());
    for k in 0..=k_max {
        let w = (&bp - &ap) * &q_pows[k_max - k] * (&lcm_all / BigInt::from(k + 1));
        weights.push(w);
        ap *= &alpha;
        bp *= &beta;
    }
    let base_den = &lcm_all * &q_pows[k_max] * &q;

    let mut power = g.clone();
    let mut den = base_den.clone() * &coeff_den;
    let mut values = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let bits = power.iter().map(|c| c.re.bits().max(c.im.bits())).max().unwrap_or(0);
        if bits > bit_budget {
            return Err(Error::SizeBudget { bits, budget: bit_budget, p });
        }
        let mut s_re = BigInt::zero();
        let mut s_im = BigInt::zero();
        for (c, w) in power.iter().zip(&weights) {
            if w.is_zero() {
                continue;
            }
            if !c.re.is_zero() {
                s_re += &c.re * w;
            }
            if !c.im.is_zero() {
                s_im += &c.im * w;
            }
        }
        let m = ComplexRational::new(BigRational::new(s_re, den.clone()), BigRational::new(s_im, den.clone()));
        let bits = m.max_bits();
        if bits > bit_budget {
            return Err(Error::SizeBudget { bits, budget: bit_budget, p });
        }
        values.push(m);
        if p < p_max {
            power = gauss_mul(&power, &g);
            den *= &coeff_den;
        }
    }
    Ok(MomentSeries { f: f.clone(), interval: interval.clone(), values })
}

fn gauss_mul(a: &[Complex<BigInt>], b: &[Complex<BigInt>]) -> Vec<Complex<BigInt>> {
    let mut out = vec![Complex::new(BigInt::zero(), BigInt::zero()); a.len() + b.len() - 1];
    for (j, y) in b.iter().enumerate() {
        let (y_re0, y_im0) = (y.re.is_zero(), y.im.is_zero());
        if y_re0 && y_im0 {
            continue;
        }
        for (i, x) in a.iter().enumerate() {
            let slot = &mut out[i + j];
            if !y_re0 {
                slot.re += &x.re * &y.re;
                slot.im += &x.im * &y.re;
            }
            if !y_im0 {
                slot.re -= &x.im * &y.im;
                slot.im += &x.re * &y.im;
            }
        }
    }
    out
}

/// Finite-tail surrogate for `limsup |M_p|^{1/p}`. An estimate, not a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// Largest `|M_p|^{1/p}` over the window, zero moments skipped.
    pub tail_max: f64,
    /// Index attaining `tail_max`.
    pub p_at_max: usize,
    pub window: [usize; 2],
    /// Least-squares slope of `ln |M_p|` against `p` over the window.
    pub trend_slope: f64,
    pub zeros_skipped: usize,
    /// True when the default window held only zero moments and `[1, P]` was used.
    pub widened: bool,
}

pub fn limsup_estimate(s: &MomentSeries) -> Result<LimitEstimate> {
    let p_max = s.p_max();
    if p_max < 8 {
        return Err(Error::InvalidArgument(format!("limsup estimate needs P >= 8, got {p_max}")));
    }
    let roots = s.abs_roots();
    let logs = s.ln_abs();
    let zero = s.zero_flags();

    let mut lo = p_max.div_ceil(2);
    let mut widened = false;
    if (lo..=p_max).all(|p| zero[p - 1]) {
        lo = 1;
        widened = true;
        if zero.iter().all(|&z| z) {
            return Err(Error::AllZero);
        }
    }
    let mut best = (0.0f64, 0usize);
    let mut zeros_skipped = 0;
    let mut pts = Vec::new();
    for p in lo..=p_max {
        if zero[p - 1] {
            zeros_skipped += 1;
            continue;
        }
        if roots[p - 1] > best.0 || best.1 == 0 {
            best = (roots[p - 1], p);
        }
        pts.push((p as f64, logs[p - 1].unwrap()));
    }
    Ok(LimitEstimate {
        tail_max: best.0,
        p_at_max: best.1,
        window: [lo, p_max],
        trend_slope: least_squares_slope(&pts),
        zeros_skipped,
        widened,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Checks exactly that `M_p(f; from) = (|from|/|to|) · M_p(f∘ℓ; to)` for all `p ≤ P`.
pub fn affine_scaling_check(f: &Poly, from: &Interval, to: &Interval, p_max: usize) -> Result<bool> {
    let g = f.affine_pullback(from, to);
    let lhs = moment_series(f, from, p_max)?;
    let rhs = moment_series(&g, to, p_max)?;
    let ratio = from.length() / to.length();
    Ok(lhs.values().iter().zip(rhs.values()).all(|(l, r)| *l == r.scale(&ratio)))
}

/// Largest coefficient bit length in a series, for diagnostics.
pub fn series_max_bits(s: &MomentSeries) -> u64 {
    s.values().iter().map(|m| rational_bits(&m.re).max(rational_bits(&m.im))).max().unwrap_or(0)
}

/// Whether every moment is exactly real.
pub fn all_real(s: &MomentSeries) -> bool {
    s.values().iter().all(|m| m.im.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::named::{complex_quadratic, shifted_parabola};
    use crate::scalar::{int, rat};

    fn real(r: BigRational) -> ComplexRational {
        ComplexRational::real(r)
    }

    #[test]
    fn moment_exact_examples() {
        assert_eq!(moment_exact(&shifted_parabola(), &Interval::unit(), 1).unwrap(), real(rat(5, 3)));
        assert_eq!(moment_exact(&Poly::x(), &Interval::symmetric(), 3).unwrap(), ComplexRational::zero());
        assert_eq!(moment_exact(&complex_quadratic(), &Interval::symmetric(), 1).unwrap(), real(rat(11, 6)));
    }

    #[test]
    fn series_examples() {
        let two = Poly::from_ints(&[2]);
        let i = Interval::new(int(-1), rat(1, 2)).unwrap();
        let s = moment_series(&two, &i, 3).unwrap();
        let len = i.length();
        assert_eq!(s.values(), &[real(int(2) * &len), real(int(4) * &len), real(int(8) * &len)]);

        let s = moment_series(&Poly::x(), &Interval::symmetric(), 4).unwrap();
        assert_eq!(s.values(), &[real(int(0)), real(rat(2, 3)), real(int(0)), real(rat(2, 5))]);

        let s = moment_series(&shifted_parabola(), &Interval::unit(), 2).unwrap();
        assert_eq!(s.values(), &[real(rat(5, 3)), real(rat(53, 15))]);
    }

    #[test]
    fn series_matches_rational_route() {
        let f: Poly = "1/3-2/5i,3/7,-1/2+1i,2".parse().unwrap();
        let iv = Interval::new(rat(-2, 3), rat(5, 4)).unwrap();
        let s = moment_series(&f, &iv, 12).unwrap();
        for p in 1..=12 {
            assert_eq!(s.value(p), &moment_exact(&f, &iv, p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn abs_roots_examples() {
        let s = moment_series(&Poly::from_ints(&[1]), &Interval::unit(), 5).unwrap();
        assert!(s.abs_roots().iter().all(|&r| (r - 1.0).abs() < 1e-15));

        let s = moment_series(&Poly::x(), &Interval::symmetric(), 6).unwrap();
        let r = s.abs_roots();
        let z = s.zero_flags();
        for p in 1..=6 {
            if p % 2 == 1 {
                assert!(z[p - 1]);
                assert_eq!(r[p - 1], 0.0);
            } else {
                assert!(!z[p - 1]);
                let expect = (2.0 / (p as f64 + 1.0)).powf(1.0 / p as f64);
                assert!((r[p - 1] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn abs_root_beyond_float_range() {
        // M_400 of 4-(x+1)^2 on [0,1] is about 3^401/802, far beyond binary64
        let s = moment_series(&shifted_parabola(), &Interval::unit(), 400).unwrap();
        let r = s.abs_roots()[399];
        assert!((r - 2.958).abs() < 1e-3, "{r}");
    }

    #[test]
    fn limsup_examples() {
        let c = Poly::constant("-3/2".parse().unwrap());
        let est = limsup_estimate(&moment_series(&c, &Interval::unit(), 16).unwrap()).unwrap();
        assert!((est.tail_max - 1.5).abs() < 1e-14);
        assert_eq!(est.window, [8, 16]);

        let est = limsup_estimate(&moment_series(&Poly::x(), &Interval::symmetric(), 20).unwrap()).unwrap();
        assert_eq!(est.zeros_skipped, 5);
        assert_eq!(est.p_at_max % 2, 0);

        let short = moment_series(&Poly::x(), &Interval::symmetric(), 7).unwrap();
        assert!(matches!(limsup_estimate(&short), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn trend_slope_of_geometric_series() {
        // constant 2 on [0,1]: ln M_p = p ln 2
        let s = moment_series(&Poly::from_ints(&[2]), &Interval::unit(), 20).unwrap();
        let est = limsup_estimate(&s).unwrap();
        assert!((est.trend_slope - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn affine_scaling_examples() {
        let to = Interval::symmetric();
        assert!(affine_scaling_check(&Poly::x(), &Interval::unit(), &to, 5).unwrap());
        assert!(affine_scaling_check(&shifted_parabola(), &Interval::unit(), &to, 20).unwrap());
    }

    #[test]
    fn budget_guard_trips() {
        let f: Poly = "12345/7,999/13".parse().unwrap();
        let err = moment_series_with_budget(&f, &Interval::unit(), 50, 200).unwrap_err();
        assert!(matches!(err, Error::SizeBudget { budget: 200, .. }));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(moment_series(&Poly::zero(), &Interval::unit(), 3).is_err());
        assert!(moment_exact(&Poly::zero(), &Interval::unit(), 3).is_err());
    }

    #[test]
    fn csv_export() {
        let s = moment_series(&Poly::x(), &Interval::symmetric(), 3).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "p,re,im,abs_root,flagged_zero");
        assert!(lines[1].starts_with("1,0,0,") && lines[1].ends_with(",1"));
        assert!(lines[2].starts_with("2,2/3,0,") && lines[2].ends_with(",0"));
    }

    #[test]
    fn complex_quadratic_moments_are_real() {
        let s = moment_series(&complex_quadratic(), &Interval::symmetric(), 100).unwrap();
        assert!(all_real(&s));
    }
}
