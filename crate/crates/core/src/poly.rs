//! Dense polynomials with exact Gaussian-rational coefficients.
//!
//! Coefficients are stored lowest degree first and trailing zeros are always
//! stripped, so the zero polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, BigRational, ComplexFloat, ComplexRational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<ComplexRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ComplexRational>) -> Self {
        while coeffs.last().is_some_and(ComplexRational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![ComplexRational::zero(), ComplexRational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| ComplexRational::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[ComplexRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(ComplexRational::is_real)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, z: &ComplexRational) -> ComplexRational {
        let mut acc = ComplexRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Coefficients rounded to binary64.
    pub fn float_coeffs(&self) -> Result<Vec<ComplexFloat>> {
        self.coeffs.iter().map(ComplexRational::to_float).collect()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&BigRational::from_integer((k as i64).into())))
                .collect(),
        )
    }

    pub fn scale(&self, k: &ComplexRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `f^p` by repeated multiplication.
    pub fn pow(&self, p: usize) -> Poly {
        assert!(p >= 1, "pow requires p >= 1");
        let mut acc = self.clone();
        for _ in 1..p {
            acc = &acc * self;
        }
        acc
    }

    /// `g(t) = f(ℓ(t))` where `ℓ` is the increasing affine bijection `to → from`.
    pub fn affine_pullback(&self, from: &Interval, to: &Interval) -> Poly {
        let slope = from.length() / to.length();
        let shift = from.a() - to.a() * &slope;
        let map = Poly::new(vec![ComplexRational::real(shift), ComplexRational::real(slope)]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &map) + &Poly::constant(c.clone());
        }
        acc
    }

    /// The real polynomial `u² + v²` where `f = u + i·v` coefficientwise.
    /// For real `x` it equals `|f(x)|²`.
    pub fn abs_sq_real(&self) -> RealPoly {
        let u = RealPoly::new(self.coeffs.iter().map(|c| c.re.clone()).collect());
        let v = RealPoly::new(self.coeffs.iter().map(|c| c.im.clone()).collect());
        &(&u * &u) + &(&v * &v)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ComplexRational::zero();
        Poly::new((0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    /// Schoolbook convolution; this is the hot spot for high powers.
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ComplexRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    /// Comma-separated coefficients, lowest degree first. The zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|tok| {
                tok.parse::<ComplexRational>().map_err(|_| Error::parse(tok.trim(), "malformed polynomial coefficient"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Float Horner evaluation on pre-rounded coefficients.
pub fn horner(coeffs: &[ComplexFloat], z: ComplexFloat) -> ComplexFloat {
    coeffs.iter().rev().fold(ComplexFloat::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Closed real interval `[a, b]` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    a: BigRational,
    b: BigRational,
}

impl Interval {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidInterval { a: format_rational(&a), b: format_rational(&b) });
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn symmetric() -> Self {
        Self { a: -BigRational::one(), b: BigRational::one() }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn length(&self) -> BigRational {
        &self.b - &self.a
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.a <= x && x <= &self.b
    }

    pub fn endpoints_c(&self) -> (ComplexRational, ComplexRational) {
        (ComplexRational::real(self.a.clone()), ComplexRational::real(self.b.clone()))
    }

    pub fn to_strings(&self) -> [String; 2] {
        [format_rational(&self.a), format_rational(&self.b)]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_rational(&self.a), format_rational(&self.b))
    }
}

impl FromStr for Interval {
    type Err = Error;
    /// `"a,b"` with rational or decimal endpoints.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::parse(s, "interval must be \"a,b\""))?;
        Interval::new(parse_rational(a)?, parse_rational(b)?)
    }
}

/// Dense polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RealPoly {
    coeffs: Vec<BigRational>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> RealPoly {
        RealPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &RealPoly) -> (RealPoly, RealPoly) {
        let dl = d.lead().expect("division by the zero polynomial");
        let dn = d.coeffs.len();
        let mut r = self.coeffs.clone();
        if r.len() < dn {
            return (RealPoly::default(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn - 1] / dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dn - 1);
        (RealPoly::new(q), RealPoly::new(r))
    }

    pub fn rem(&self, d: &RealPoly) -> RealPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RealPoly) -> RealPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> RealPoly {
        match self.lead() {
            Some(l) => {
                let l = l.clone();
                RealPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
            None => self.clone(),
        }
    }

    /// Scales by a positive constant so the largest coefficient has unit magnitude.
    pub fn normalized_positive(&self) -> RealPoly {
        let m = self.coeffs.iter().map(|c| c.abs()).max();
        match m {
            Some(m) if !m.is_zero() => RealPoly::new(self.coeffs.iter().map(|c| c / &m).collect()),
            _ => self.clone(),
        }
    }

    /// Squarefree part `g / gcd(g, g')`.
    pub fn squarefree(&self) -> RealPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;
    fn add(self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RealPoly::new(
            (0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero)).collect(),
        )
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;
    fn sub(self, rhs: &RealPoly) -> RealPoly {
        self + &(-rhs)
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;
    fn mul(self, rhs: &RealPoly) -> RealPoly {
        if self.is_zero() || rhs.is_zero() {
            return RealPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::new(out)
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The two polynomials the worked examples revolve around.
pub mod named {
    use super::*;

    /// `4 − (x+1)² = 3 − 2x − x²`.
    pub fn shifted_parabola() -> Poly {
        Poly::from_ints(&[3, -2, -1])
    }

    /// `1 − (x + i/2)² = 5/4 − i·x − x²`.
    pub fn complex_quadratic() -> Poly {
        quadratic_family(&crate::scalar::rat(1, 2))
    }

    /// `1 − (x + i·t)² = (1 + t²) − 2it·x − x²`.
    pub fn quadratic_family(t: &BigRational) -> Poly {
        Poly::new(vec![
            ComplexRational::real(BigRational::one() + t * t),
            ComplexRational::new(BigRational::zero(), -(t * BigRational::from_integer(2.into()))),
            ComplexRational::from_int(-1),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn ci(re: i64, im: i64) -> ComplexRational {
        ComplexRational::new(int(re), int(im))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(shifted_parabola().eval(&ComplexRational::from_int(-1)), ComplexRational::from_int(4));
        let f = complex_quadratic();
        assert_eq!(f.eval(&ComplexRational::zero()), ComplexRational::real(rat(5, 4)));
        assert_eq!(f.eval(&ComplexRational::one()), ComplexRational::new(rat(1, 4), int(-1)));
        assert_eq!(f.eval(&ComplexRational::from_int(-1)), ComplexRational::new(rat(1, 4), int(1)));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(shifted_parabola().derivative(), Poly::from_ints(&[-2, -2]));
        assert!(Poly::from_ints(&[7]).derivative().is_zero());
        assert_eq!(Poly::from_ints(&[0, 0, 0, 1]).derivative(), Poly::from_ints(&[0, 0, 3]));
    }

    #[test]
    fn mul_pow_examples() {
        assert_eq!(&Poly::x() * &Poly::x(), Poly::from_ints(&[0, 0, 1]));
        assert_eq!(Poly::from_ints(&[1, 1]).pow(2), Poly::from_ints(&[1, 2, 1]));
        let f = complex_quadratic();
        let f0 = f.eval(&ComplexRational::zero());
        assert_eq!(f.pow(2).coeffs()[0], &f0 * &f0);
        assert_eq!(f.pow(2).coeffs()[0], ComplexRational::real(rat(25, 16)));
    }

    #[test]
    fn text_format() {
        assert_eq!("3,-2,-1".parse::<Poly>().unwrap(), shifted_parabola());
        let g: Poly = "3/4,-1i,-1".parse().unwrap();
        assert_eq!(g.coeffs()[0], ComplexRational::real(rat(3, 4)));
        assert_eq!(g.coeffs()[1], -ComplexRational::i());
        assert_eq!(complex_quadratic().to_string(), "5/4,-1i,-1");
        assert_eq!("5/4,-1i,-1".parse::<Poly>().unwrap(), complex_quadratic());
        let err = "1,2x,3".parse::<Poly>().unwrap_err();
        assert!(matches!(err, Error::Parse { ref token, .. } if token == "2x"));
        assert_eq!("0,0".parse::<Poly>().unwrap(), Poly::zero());
    }

    #[test]
    fn affine_pullback_examples() {
        let g = Poly::x().affine_pullback(&Interval::unit(), &Interval::symmetric());
        assert_eq!(g, Poly::new(vec![ComplexRational::real(rat(1, 2)), ComplexRational::real(rat(1, 2))]));
        let f = shifted_parabola();
        assert_eq!(f.affine_pullback(&Interval::unit(), &Interval::unit()), f);
    }

    #[test]
    fn abs_sq_real_examples() {
        let h = complex_quadratic().abs_sq_real();
        assert_eq!(h, RealPoly::new(vec![rat(25, 16), int(0), rat(-3, 2), int(0), int(1)]));
        assert_eq!(h.eval(&int(0)), rat(25, 16));
        let f = shifted_parabola();
        let sq = &f * &f;
        let expected = RealPoly::new(sq.coeffs().iter().map(|c| c.re.clone()).collect());
        assert_eq!(f.abs_sq_real(), expected);
        assert_eq!(Poly::constant(ComplexRational::i()).abs_sq_real(), RealPoly::from_ints(&[1]));
    }

    #[test]
    fn realpoly_division_and_gcd() {
        // (x-1)^2 (x+2)
        let p = RealPoly::from_ints(&[2, -3, 0, 1]);
        let sf = p.squarefree();
        assert_eq!(sf.monic(), RealPoly::from_ints(&[-2, 1, 1]));
        let (q, r) = p.div_rem(&RealPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, RealPoly::from_ints(&[-2, 1, 1]));
    }

    #[test]
    fn interval_rules() {
        assert!(Interval::new(int(1), int(1)).is_err());
        assert_eq!("-1,1".parse::<Interval>().unwrap(), Interval::symmetric());
        assert_eq!("0,1/2".parse::<Interval>().unwrap().length(), rat(1, 2));
    }

    fn arb_c() -> impl Strategy<Value = ComplexRational> {
        (-50i64..50, 1i64..9, -50i64..50, 1i64..9).prop_map(|(a, b, c, d)| ComplexRational::new(rat(a, b), rat(c, d)))
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(arb_c(), 0..6).prop_map(Poly::new)
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(f in arb_poly(), g in arb_poly(), z in arb_c()) {
            prop_assert_eq!((&f * &g).eval(&z), &f.eval(&z) * &g.eval(&z));
            prop_assert_eq!((&f + &g).eval(&z), &f.eval(&z) + &g.eval(&z));
        }

        #[test]
        fn derivative_linear_and_leibniz(f in arb_poly(), g in arb_poly(), k in arb_c()) {
            prop_assert_eq!((&f.scale(&k) + &g).derivative(), &f.derivative().scale(&k) + &g.derivative());
            prop_assert_eq!((&f * &g).derivative(), &(&f.derivative() * &g) + &(&f * &g.derivative()));
        }

        #[test]
        fn abs_sq_matches_norm_sq(f in arb_poly(), n in -40i64..40, d in 1i64..17) {
            let x = rat(n, d);
            prop_assert_eq!(f.abs_sq_real().eval(&x), f.eval(&ComplexRational::real(x)).norm_sq());
        }

        #[test]
        fn pullback_round_trip(f in arb_poly(), a in -5i64..5, w in 1i64..6) {
            let from = Interval::new(int(a), int(a + w)).unwrap();
            let to = Interval::symmetric();
            let g = f.affine_pullback(&from, &to);
            prop_assert_eq!(g.affine_pullback(&to, &from), f);
        }

        #[test]
        fn pow_matches_eval_power(f in arb_poly(), p in 1usize..5, z in arb_c()) {
            prop_assert_eq!(f.pow(p).eval(&z), f.eval(&z).pow(p as u32));
        }
    }

    #[test]
    fn product_sanity() {
        let f = Poly::new(vec![ci(1, 1), ci(0, 2)]);
        let g = Poly::new(vec![ci(2, 0), ci(-1, 1)]);
        assert_eq!(&f * &g, Poly::new(vec![ci(2, 2), ci(-2, 4), ci(-2, -2)]));
    }
}
