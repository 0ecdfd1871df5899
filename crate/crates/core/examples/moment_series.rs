//! Exact moments of a polynomial and the tail of `|M_p|^{1/p}`.
//!
//!     cargo run --example moment_series -- "5/4,-1i,-1" -1,1 60

use polymoments::moments::{limsup_estimate, moment_series};
use polymoments::poly::{Interval, Poly};

fn main() -> polymoments::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let f: Poly = args.first().map(String::as_str).unwrap_or("0,1").parse()?;
    let interval: Interval = args.get(1).map(String::as_str).unwrap_or("-1,1").parse()?;
    let p_max: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(40);

    let series = moment_series(&f, &interval, p_max)?;
    let roots = series.abs_roots();
    println!("f = {f} on [{interval}]");
    for p in 1..=p_max.min(6) {
        println!("  M_{p} = {}", series.value(p));
    }
    for p in [p_max / 4, p_max / 2, p_max].into_iter().filter(|&p| p >= 1) {
        println!("  |M_{p}|^(1/{p}) = {:.6}", roots[p - 1]);
    }
    if p_max >= 8 {
        let est = limsup_estimate(&series)?;
        println!("tail max {:.6} at p = {} over {:?}", est.tail_max, est.p_at_max, est.window);
    }
    Ok(())
}
