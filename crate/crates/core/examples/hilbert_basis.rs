//! Hilbert bases of `σ ∩ N`, membership and saturation.

use semistable::cone::Cone;
use semistable::lattice::Sublattice;
use semistable::matrix::ivec;
use semistable::monoid::{hilbert_basis, is_saturated, monoid_membership, AffineMonoid};

fn main() {
    let sigma = Cone::from_i64(2, &[[1, 0], [1, 3]]);
    for sub in [Sublattice::full(2), Sublattice::from_i64(2, &[[1, 1], [0, 2]])] {
        println!("{sigma:?} in {sub:?}: {:?}", hilbert_basis(&sigma, &sub).unwrap());
    }

    let numerical = AffineMonoid::from_i64(1, &[[2], [3]]);
    for k in 0..6 {
        let w = monoid_membership(&ivec(&[k]), &numerical).unwrap();
        println!("{k} in <2, 3>: {w:?}");
    }
    println!("<2, 3> saturated: {}", is_saturated(&numerical).unwrap());
}
