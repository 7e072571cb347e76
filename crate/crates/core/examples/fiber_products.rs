//! Toric fiber products and the cartesian check against monoid pushouts.

use semistable::fan::{cartesian_check, toric_fiber_product};
use semistable::fixtures::{fix_23, fix_blowup, p1_bundle};
use semistable::fan::FanMorphism;
use semistable::lattice::LatticeMap;

fn report(name: &str, p: &FanMorphism, q: &FanMorphism) {
    let fp = toric_fiber_product(p, q).unwrap();
    println!("{name}: lattice basis {:?}", fp.lattice.basis);
    for c in fp.fan.maximal_cones() {
        println!("  maximal cone {c:?}");
    }
    for t in cartesian_check(p, q).unwrap().into_iter().filter(|t| !t.fiber.is_zero()) {
        println!("  chart {:?}: cartesian {}", t.fiber, t.cartesian);
    }
}

fn main() {
    let (a, b) = fix_blowup();
    report("blowup charts", &a, &b);
    let (two, three) = fix_23();
    report("x2 and x3", &two, &three);
    let base = FanMorphism::new(two.source().clone(), two.target().clone(), LatticeMap::from_i64(&[[2]], 1)).unwrap();
    report("P1 bundle base changed by x2", &p1_bundle(), &base);
}
