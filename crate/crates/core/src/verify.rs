//! End-to-end check bundles for the two worked examples:
//! `4 − (x+1)²` on `[0, 1]` and `1 − (x + i/2)²` on `[−1, 1]`.

use serde::Serialize;

use crate::contour::{circle_image_arc, deformation_check, ml_bound, parabola_image_arc, Integrand};
use crate::error::Result;
use crate::moments::{all_real, limsup_estimate, moment_series, MomentSeries};
use crate::poly::named::{complex_quadratic, shifted_parabola};
use crate::poly::Interval;
use crate::roots::{critical_set, sup_norm};
use crate::scalar::{format_rational, int, rat};

pub const FLAGSHIP_P: usize = 400;
pub const DEFORMATION_POWERS: [u32; 4] = [1, 5, 10, 20];
pub const DEFORMATION_TOLERANCE: f64 = 1e-8;
pub const ML_MAX_P: usize = 50;
pub const ML_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: serde_json::Value,
    pub expected: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, value: impl Serialize, expected: &str, pass: bool) -> Self {
        Self {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or_default(),
            expected: expected.into(),
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bundle {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Headline values, flattened into the JSON report.
    #[serde(flatten)]
    pub headline: serde_json::Map<String, serde_json::Value>,
}

impl Bundle {
    fn new(name: &str, checks: Vec<Check>, headline: serde_json::Map<String, serde_json::Value>) -> Self {
        Self { name: name.into(), pass: checks.iter().all(|c| c.pass), checks, headline }
    }
}

/// `|M_p| ≤ K·r^p·(1 + slack)` for `p = 1..=p_max`; returns the failing powers.
pub fn ml_violations(series: &MomentSeries, k: f64, r: f64, p_max: usize, slack: f64) -> Vec<usize> {
    (1..=p_max.min(series.p_max()))
        .filter(|&p| {
            let m = series.value(p);
            // compare in logs so large p cannot overflow
            let lhs = m.norm_sq();
            !m.is_zero() && 0.5 * crate::scalar::ln_rational(&lhs) > k.ln() + p as f64 * r.ln() + slack.ln_1p()
        })
        .collect()
}

pub fn prop1() -> Result<Bundle> {
    let f = shifted_parabola();
    let iv = Interval::unit();
    let sup = sup_norm(&f, &iv)?;
    let cs = critical_set(&f, &iv)?;
    let est = limsup_estimate(&moment_series(&f, &iv, FLAGSHIP_P)?)?;
    let checks = vec![
        Check::new("sup_norm_sq", sup.value_sq().map(format_rational), "9", sup.value_sq() == Some(&int(9))),
        Check::new("max_abs_S", cs.max_abs, "4 ± 1e-9", (cs.max_abs - 4.0).abs() <= 1e-9),
        Check::new("tail_max", est.tail_max, "[2.94, 3.0] at P = 400", (2.94..=3.0).contains(&est.tail_max)),
    ];
    let mut head = serde_json::Map::new();
    head.insert("sup_norm".into(), sup.value.into());
    head.insert("max_abs_S".into(), cs.max_abs.into());
    head.insert("tail_max".into(), est.tail_max.into());
    Ok(Bundle::new("prop1", checks, head))
}

pub fn prop2() -> Result<Bundle> {
    let f = complex_quadratic();
    let iv = Interval::symmetric();
    let sup = sup_norm(&f, &iv)?;
    let series = moment_series(&f, &iv, FLAGSHIP_P)?;
    let est = limsup_estimate(&series)?;

    let mut checks = vec![
        Check::new("sup_norm", sup.value, "1.25", sup.value_sq() == Some(&rat(25, 16))),
        Check::new("argmax", sup.argmax, "|x| ≤ 1e-6", sup.argmax.abs() <= 1e-6),
    ];
    let (p_arc, c_arc) = (parabola_image_arc(), circle_image_arc());
    for p in DEFORMATION_POWERS {
        let g = Integrand::WPower { p };
        let report = deformation_check(&g, &p_arc, &c_arc, DEFORMATION_TOLERANCE)?;
        let exact = series.value(p as usize).to_float()?;
        let scale = exact.norm();
        let rel = |v: num_complex::Complex64| (v - exact).norm() / scale;
        let worst = report.relative_difference.max(rel(report.first)).max(rel(report.second));
        checks.push(Check::new(
            &format!("deformation_p{p}"),
            worst,
            "pairwise relative ≤ 1e-8 (parabola, circle, exact)",
            worst <= DEFORMATION_TOLERANCE,
        ));
    }
    let ml = ml_bound(&c_arc, &Integrand::WPower { p: 0 }, 4000)?;
    let bad = ml_violations(&series, ml.k, ml.r, ML_MAX_P, ML_SLACK);
    checks.push(Check::new("ml_validity", &bad, "no violations for p ≤ 50", bad.is_empty()));
    checks.push(Check::new("tail_max", est.tail_max, "≤ 1.0309 at P = 400", est.tail_max <= 1.0309));
    let real_upto = series.values()[..100].iter().all(|m| m.is_real());
    checks.push(Check::new("moments_real", real_upto, "M_p real for p ≤ 100", real_upto));

    let mut head = serde_json::Map::new();
    head.insert("sup_norm".into(), sup.value.into());
    head.insert("tail_max".into(), est.tail_max.into());
    head.insert("ml_k".into(), ml.k.into());
    head.insert("ml_r".into(), ml.r.into());
    head.insert("all_moments_real".into(), all_real(&series).into());
    Ok(Bundle::new("prop2", checks, head))
}
