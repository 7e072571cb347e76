//! Draws the subdivided quadrant and the reduction of a stretch over it.

use semistable::cli::render::render;
use semistable::fan::FanMorphism;
use semistable::fixtures::{blowup_fan, quadrant};
use semistable::lattice::LatticeMap;
use semistable::reduction::reduce;

fn main() {
    let out = std::env::temp_dir();
    std::fs::write(out.join("blowup.svg"), render(&blowup_fan(), None).unwrap()).unwrap();
    let stretch = FanMorphism::new(quadrant(), quadrant(), LatticeMap::from_i64(&[[2, 0], [0, 1]], 2)).unwrap();
    let red = reduce(&stretch).unwrap();
    let svg = render(stretch.target(), Some(&red.base)).unwrap();
    std::fs::write(out.join("stretch.svg"), svg).unwrap();
    println!("wrote {} and {}", out.join("blowup.svg").display(), out.join("stretch.svg").display());
}
