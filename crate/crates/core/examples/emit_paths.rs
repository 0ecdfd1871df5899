//! Writes the parabola and circle arcs as `t,re,im` CSV for plotting.
//!
//!     cargo run --example emit_paths -- out_dir

use std::fs::File;
use std::path::PathBuf;

use polymoments::contour::{circle_image_arc, parabola_image_arc};

fn main() -> polymoments::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "paths".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, path) in [("parabola_arc.csv", parabola_image_arc()), ("circle_arc.csv", circle_image_arc())] {
        let file = dir.join(name);
        path.write_csv(201, File::create(&file)?)?;
        println!("{} ({:.6} long)", file.display(), path.length());
    }
    Ok(())
}
