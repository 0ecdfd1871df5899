//! `1 − (x + i/2)²` on `[−1, 1]`: sup-norm 5/4, yet `|M_p|^{1/p}` stays below √17/4.

use polymoments::verify;

fn main() -> polymoments::Result<()> {
    let bundle = verify::prop2()?;
    for c in &bundle.checks {
        println!(
            "{:<16} {:<5} value {} (expected {})",
            c.name,
            if c.pass { "ok" } else { "FAIL" },
            c.value,
            c.expected
        );
    }
    println!("sqrt(17)/4 = {:.6}", 17f64.sqrt() / 4.0);
    println!("all checks pass: {}", bundle.pass);
    Ok(())
}
