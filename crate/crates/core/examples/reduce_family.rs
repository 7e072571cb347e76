//! Weak semistable reduction of every fixture morphism.

use semistable::fixtures::corpus;
use semistable::reduction::reduce;

fn main() {
    for (name, p) in corpus() {
        let red = reduce(&p).unwrap();
        println!("{name} (proper input: {})", red.input_proper);
        println!("  base:");
        for (c, q) in red.base.fan().cones().iter().zip(red.base.sublattices()) {
            println!("    {c:?} with {q:?}");
        }
        println!("  total space has {} cones", red.total.fan().len());
        for label in &red.labels {
            println!("    over {:?}: {} source cones", label.cone, label.members.len());
        }
        let ws = red.stacky_map.is_weakly_semistable().unwrap().holds();
        println!("  weakly semistable: {ws}, representable: {}", red.stacky_map.is_representable().unwrap());
    }
}
