//! Ratios `L/sup` along `1 − (x + i·t)²` and over seeded random quadratics.
//!
//!     cargo run --release --example kappa_sweep -- 200 1

use polymoments::kappa::{quadratic_family_sweep, random_sweep, SweepConfig};
use polymoments::scalar::{int, rat};

fn main() -> polymoments::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = SweepConfig::default();

    let ts: Vec<_> = [1, 2, 4, 8, 12, 16, 24, 32].iter().map(|&k| rat(k, 32)).collect();
    let family = quadratic_family_sweep(&ts, &cfg, None)?;
    println!("{:>6}  {:>10}  {:>10}", "t", "estimate", "upper");
    for r in &family.records {
        println!("{:>6}  {:>10.6}  {:>10.6}", r.parameter.as_deref().unwrap_or(""), r.kappa_estimate, r.kappa_upper);
    }

    let random = random_sweep(2, count, &int(4), seed, &cfg, None)?;
    for d in &random.summary.per_degree {
        println!(
            "degree {}: min upper {:.6} over {} polynomials, witness {}",
            d.degree, d.min_kappa_upper, d.count, d.witness
        );
    }
    Ok(())
}
