//! The substitution `w = f(z)` sends `[−1, 1]` to a parabola arc; the integral
//! of `w^p / (−2√(1−w))` is unchanged when that arc is swapped for the circle
//! `|w| = √17/4`, and the ML inequality on the circle bounds every moment.

use polymoments::contour::{circle_image_arc, deformation_check, ml_bound, parabola_image_arc, Integrand};
use polymoments::moments::moment_series;
use polymoments::poly::named::complex_quadratic;
use polymoments::poly::Interval;

fn main() -> polymoments::Result<()> {
    let (parabola, circle) = (parabola_image_arc(), circle_image_arc());
    let series = moment_series(&complex_quadratic(), &Interval::symmetric(), 40)?;
    for p in [1u32, 5, 10, 20, 40] {
        let r = deformation_check(&Integrand::WPower { p }, &parabola, &circle, 1e-8)?;
        println!(
            "p = {p:>2}: parabola {:.12}, circle {:.12}, exact {:.12}",
            r.first.re,
            r.second.re,
            series.value(p as usize).to_float()?.re
        );
    }

    let ml = ml_bound(&circle, &Integrand::WPower { p: 0 }, 4000)?;
    println!(
        "circle arc: length {:.6}, sup 1/(2|sqrt(1-w)|) {:.6}, K = {:.4}, r = {:.6}",
        ml.length, ml.sup_factor, ml.k, ml.r
    );
    for p in [10u32, 20, 40] {
        let m = series.value(p as usize).abs_f64();
        println!("|M_{p}| = {m:.6e} <= K r^p = {:.6e}", ml.at(p));
    }
    Ok(())
}
