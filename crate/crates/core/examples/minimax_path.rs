//! Searches for the path from −1 to 1 along which `max |f|` is smallest and
//! compares it with the moment tail.
//!
//!     cargo run --release --example minimax_path -- "5/4,-1i,-1"

use polymoments::moments::moment_series;
use polymoments::pathopt::{bound_report, minimax_path_on, GridSpec};
use polymoments::poly::{Interval, Poly};
use polymoments::roots::sup_norm;

fn main() -> polymoments::Result<()> {
    let f: Poly = std::env::args().nth(1).as_deref().unwrap_or("5/4,-1i,-1").parse()?;
    let iv = Interval::symmetric();

    let pb = minimax_path_on(&f, &iv, &GridSpec::square(256)?, 3)?;
    println!("f = {f}");
    println!("sup on the segment      {:.6}", sup_norm(&f, &iv)?.value);
    println!("best path max |f|       {:.6}", pb.bound);
    println!("certified over the path {:.6}", pb.certified_bound);
    println!("per level               {:?}", pb.level_bounds);
    let deepest = pb.points().iter().map(|z| z.im).fold(0.0, f64::min);
    println!("{} vertices, length {:.4}, lowest point Im z = {deepest:.4}", pb.points().len(), pb.path.length());

    let report = bound_report(&f, &iv, &pb, &moment_series(&f, &iv, 200)?)?;
    println!("tail max {:.6}, consistent with the path bound: {}", report.tail_max, report.ml_consistent);
    Ok(())
}
