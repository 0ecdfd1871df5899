//! Real coefficients: the moment growth matches the sup-norm, not the largest
//! critical value.

use polymoments::verify;

fn main() -> polymoments::Result<()> {
    let bundle = verify::prop1()?;
    for c in &bundle.checks {
        println!(
            "{:<12} {:<5} value {} (expected {})",
            c.name,
            if c.pass { "ok" } else { "FAIL" },
            c.value,
            c.expected
        );
    }
    println!("all checks pass: {}", bundle.pass);
    Ok(())
}
