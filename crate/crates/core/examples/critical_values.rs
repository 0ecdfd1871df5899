//! The critical-value set against the sup-norm and the moment tail.
//!
//! For `4 − (x+1)²` on `[0, 1]` the largest critical value is 4, attained at
//! `x = −1` outside the interval, while the moments grow like `3^p`.

use polymoments::moments::{limsup_estimate, moment_series};
use polymoments::poly::named::shifted_parabola;
use polymoments::poly::Interval;
use polymoments::roots::{critical_set, sup_norm};

fn main() -> polymoments::Result<()> {
    let f = shifted_parabola();
    let iv = Interval::unit();

    let cs = critical_set(&f, &iv)?;
    for (root, value) in cs.critical_points.iter().zip(&cs.values) {
        println!("f'(z) = 0 at z = {:.6}{:+.6}i, f(z) = {value}", root.z.re, root.z.im + 0.0);
    }
    println!("endpoint values {} and {}", cs.endpoint_values.0, cs.endpoint_values.1);
    println!("max |S| = {}", cs.max_abs);

    let sup = sup_norm(&f, &iv)?;
    println!("sup |f| = {} at x = {} (|f|^2 = {:?})", sup.value, sup.argmax, sup.value_sq().map(|v| v.to_string()));

    let est = limsup_estimate(&moment_series(&f, &iv, 400)?)?;
    println!("tail max of |M_p|^(1/p) up to p = 400: {:.6}", est.tail_max);
    Ok(())
}
