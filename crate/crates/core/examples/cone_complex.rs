//! Reduction of a cone complex that is not a fan: two half lines glued at
//! the origin, mapped to a half line by 1 and by 2.

use semistable::complex::{reduce_complex, ComplexMorphism, ConeComplex, Gluing};
use semistable::cone::Cone;
use semistable::fixtures::half_line;
use semistable::lattice::LatticeMap;

fn main() {
    let ray = Cone::from_i64(1, &[[1]]);
    let gluings = (1..3)
        .map(|cell| Gluing { cell, face: Cone::zero(1), target: 0, map: LatticeMap::zero(0, 1) })
        .collect();
    let source = ConeComplex::new(vec![Cone::zero(0), ray.clone(), ray], gluings).unwrap();
    let (target, _) = ConeComplex::from_fan(&half_line()).unwrap();
    let r = target.cells().iter().position(|c| c.dim() == 1).unwrap();
    let maps = vec![LatticeMap::zero(0, 0), LatticeMap::from_i64(&[[1]], 1), LatticeMap::from_i64(&[[2]], 1)];
    let m = ComplexMorphism::new(source, target, maps, vec![1 - r, r, r]).unwrap();

    let red = reduce_complex(&m).unwrap();
    for (i, (c, q)) in red.base.cells().iter().zip(&red.base_sublattices).enumerate() {
        println!("base cell {i}: {c:?} with {q:?}");
    }
    for (i, (c, n)) in red.total.cells().iter().zip(&red.total_sublattices).enumerate() {
        println!("total cell {i}: {c:?} with {n:?} from cell {}", red.total_origin[i].0);
    }
}
