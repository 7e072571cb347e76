//! Objects of the category of weakly semistable models over a family, and
//! their factorization through the reduction.

use semistable::fan::FanMorphism;
use semistable::fixtures::{fix_semi_proper, half_line};
use semistable::lattice::LatticeMap;
use semistable::reduction::{
    factor_through, reduce, universal_minimal_modification, validate_category_object,
};

fn main() {
    let p = fix_semi_proper();
    let red = reduce(&p).unwrap();
    for k in [2, 4, 6] {
        let i = FanMorphism::new(half_line(), half_line(), LatticeMap::from_i64(&[[k]], 1)).unwrap();
        let obj = universal_minimal_modification(&red, &p, &i).unwrap();
        let valid = validate_category_object(&obj, &p, false).unwrap();
        println!("base change by {k}: total space with {} cones, valid: {:?}", obj.j.source().len(), valid);
        let f = factor_through(&obj, &red).unwrap();
        println!("  factors uniquely: {}", f.unique);
        for (from, to) in &f.total_assignment {
            println!("    {from:?} -> {to:?}");
        }
    }
    let i = FanMorphism::identity(&half_line());
    match universal_minimal_modification(&red, &p, &i) {
        Ok(_) => println!("identity base change unexpectedly accepted"),
        Err(e) => println!("identity base change: {e}"),
    }
}
