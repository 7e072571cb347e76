//! Hermite and Smith forms, kernels, fiber products and pushouts.

use semistable::lattice::{
    dual_map, fiber_product_lattice, kernel_lattice, lattice_index, pushout_lattice, saturate,
    LatticeMap, Sublattice,
};
use semistable::matrix::{hermite_with_transform, smith_normal_form, IntMatrix};

fn main() {
    let a = IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3);
    let (h, _, rank) = hermite_with_transform(&a);
    println!("hermite form (rank {rank}): {:?}", h.rows_vec());
    let snf = smith_normal_form(&a);
    let diagonal: Vec<String> = snf.diagonal().iter().map(ToString::to_string).collect();
    println!("invariant factors: {}", diagonal.join(", "));

    let sum = LatticeMap::from_i64(&[[1, 1, 1]], 3);
    println!("kernel of (1,1,1): {:?}", kernel_lattice(&sum));

    let even = Sublattice::from_i64(2, &[[1, 1], [0, 2]]);
    println!("{even:?} has index {:?} in its saturation", lattice_index(&even, &saturate(&even)).unwrap());

    let (two, three) = (LatticeMap::from_i64(&[[2]], 1), LatticeMap::from_i64(&[[3]], 1));
    let fp = fiber_product_lattice(&two, &three).unwrap();
    println!("Z x_Z Z along 2 and 3 is spanned by {:?}", fp.basis);
    let po = pushout_lattice(&dual_map(&two), &dual_map(&three)).unwrap();
    println!("dual pushout has rank {} and torsion {}", po.lattice.rank, po.torsion_order);
}
