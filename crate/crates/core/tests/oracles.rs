//! Property tests: exact moments against independent bounds and routes.

use num_complex::Complex64;
use polymoments::contour::{integrate, Integrand, Path};
use polymoments::moments::{moment_exact, moment_series};
use polymoments::poly::{Interval, Poly};
use polymoments::roots::sup_norm;
use polymoments::scalar::{rat, rational_to_f64, ComplexRational};
use proptest::prelude::*;

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-8i64..=8, -8i64..=8), 1..=max_degree + 1).prop_map(|c| {
        let mut coeffs: Vec<_> = c.into_iter().map(|(re, im)| ComplexRational::new(rat(re, 4), rat(im, 4))).collect();
        if coeffs.iter().all(|z| z.is_zero()) {
            coeffs[0] = ComplexRational::one();
        }
        Poly::new(coeffs)
    })
}

fn interval_strategy() -> impl Strategy<Value = Interval> {
    (-6i64..=6, 1i64..=8, 1i64..=4).prop_map(|(a, w, d)| Interval::new(rat(a, 2), rat(a, 2) + rat(w, d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_bounded_by_length_times_sup_power(f in poly_strategy(4), iv in interval_strategy()) {
        let sup = sup_norm(&f, &iv).unwrap();
        let series = moment_series(&f, &iv, 16).unwrap();
        let length = rational_to_f64(&iv.length()).unwrap();
        for p in 1..=16 {
            let m = series.value(p).abs_f64();
            prop_assert!(m <= length * sup.certified_interval[1].powi(p as i32) * (1.0 + 1e-12), "p = {p}: {m} vs sup {}", sup.certified_interval[1]);
        }
    }

    #[test]
    fn series_agrees_with_single_moment(f in poly_strategy(4), iv in interval_strategy(), p in 1usize..=12) {
        let series = moment_series(&f, &iv, 12).unwrap();
        prop_assert_eq!(series.value(p), &moment_exact(&f, &iv, p).unwrap());
    }

    #[test]
    fn real_coefficients_give_real_moments(mut c in prop::collection::vec(-8i64..=8, 1..=5), iv in interval_strategy()) {
        if c.iter().all(|&k| k == 0) {
            c[0] = 1;
        }
        let f = Poly::new(c.into_iter().map(|k| ComplexRational::real(rat(k, 3))).collect());
        let series = moment_series(&f, &iv, 10).unwrap();
        prop_assert!(series.values().iter().all(|m| m.is_real()));
    }

    #[test]
    fn quadrature_along_the_segment_matches_exact(f in poly_strategy(3), iv in interval_strategy(), p in 1u32..=8) {
        let a = Complex64::new(rational_to_f64(iv.a()).unwrap(), 0.0);
        let b = Complex64::new(rational_to_f64(iv.b()).unwrap(), 0.0);
        let g = Integrand::z_power(&f, p).unwrap();
        let q = integrate(&Path::segment(a, b), &g, 1e-14).unwrap();
        let exact = moment_exact(&f, &iv, p as usize).unwrap();
        let scale = (b - a).norm() * sup_norm(&f, &iv).unwrap().certified_interval[1].powi(p as i32);
        prop_assert!((q.value - exact.to_float().unwrap()).norm() <= 1e-12 * scale.max(1e-300));
    }
}
