//! Cones: double description, duals, faces and splitting.

use semistable::cone::Cone;
use semistable::matrix::ivec;

fn main() {
    let c = Cone::from_i64(3, &[[1, 0, 0], [0, 1, 0], [1, 1, 2], [1, 1, 1]]);
    println!("{c:?} has dimension {}", c.dim());
    println!("facet normals: {:?}", c.facets());
    println!("dual: {:?}", c.dual_cone());
    println!("faces:");
    for f in c.faces() {
        println!("  dim {}: {f:?}", f.dim());
    }
    let (plus, minus) = c.split_by_hyperplane(&ivec(&[1, -1, 0])).unwrap();
    println!("split by x = y: {plus:?} and {minus:?}");
    println!("interior sample {:?}", c.interior_sample());
}
