//! Weak semistability reports over the fixture corpus.

use semistable::fan::is_weakly_semistable;
use semistable::fixtures::corpus;

fn main() {
    for (name, p) in corpus() {
        let report = is_weakly_semistable(&p).unwrap();
        println!("{name}: {}", if report.holds() { "weakly semistable" } else { "not weakly semistable" });
        for f in &report.failures {
            println!("  {:?} at {:?}", f.condition, f.cone);
        }
    }
}
