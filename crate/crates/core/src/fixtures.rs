//! Small worked examples used by the tests, the examples and the CLI
//! fixtures.

use crate::fan::{Fan, FanMorphism};
use crate::lattice::LatticeMap;

fn morphism(source: Fan, target: Fan, rows: &[&[i64]], domain: usize) -> FanMorphism {
    FanMorphism::new(source, target, LatticeMap::from_i64(rows, domain)).expect("fixture morphism")
}

/// The half line `{0, R+}` in `Z`.
pub fn half_line() -> Fan {
    Fan::from_i64(1, &[&[&[1]]])
}

/// The positive quadrant with its faces.
pub fn quadrant() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0], &[0, 1]]])
}

/// The quadrant subdivided along the diagonal.
pub fn blowup_fan() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]])
}

/// `(a, b) ↦ a + b` from the subdivided quadrant onto the half line.
pub fn fix_semi() -> FanMorphism {
    morphism(blowup_fan(), half_line(), &[&[1, 1]], 2)
}

/// `(a, b) ↦ a + b` from the half plane `a + b >= 0`, subdivided by the
/// coordinate axes and the diagonal, onto the half line. This is a proper
/// variant of [`fix_semi`].
pub fn fix_semi_proper() -> FanMorphism {
    let source = Fan::from_i64(
        2,
        &[
            &[&[1, -1], &[1, 0]],
            &[&[1, 0], &[1, 1]],
            &[&[1, 1], &[0, 1]],
            &[&[0, 1], &[-1, 1]],
        ],
    );
    morphism(source, half_line(), &[&[1, 1]], 2)
}

/// Multiplication by two on the half line.
pub fn fix_double() -> FanMorphism {
    morphism(half_line(), half_line(), &[&[2]], 1)
}

/// The identity lattice map from the subdivided quadrant to the quadrant.
pub fn fix_subdiv() -> FanMorphism {
    morphism(blowup_fan(), quadrant(), &[&[1, 0], &[0, 1]], 2)
}

/// The two affine charts of the blowup of the plane, both over the quadrant.
pub fn fix_blowup() -> (FanMorphism, FanMorphism) {
    (
        morphism(quadrant(), quadrant(), &[&[1, 0], &[1, 1]], 2),
        morphism(quadrant(), quadrant(), &[&[1, 1], &[0, 1]], 2),
    )
}

/// `a ↦ 2a` and `b ↦ 3b` on the half line.
pub fn fix_23() -> (FanMorphism, FanMorphism) {
    (
        morphism(half_line(), half_line(), &[&[2]], 1),
        morphism(half_line(), half_line(), &[&[3]], 1),
    )
}

/// The projection `(a, b) ↦ a` of the quadrant onto the half line.
pub fn ws_proj() -> FanMorphism {
    morphism(quadrant(), half_line(), &[&[1, 0]], 2)
}

/// The projection `(a, b) ↦ a` of the right half plane, cut along the
/// horizontal axis, onto the half line: a proper semistable family.
pub fn p1_bundle() -> FanMorphism {
    let source = Fan::from_i64(2, &[&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, -1]]]);
    morphism(source, half_line(), &[&[1, 0]], 2)
}

/// Every single-morphism fixture with a short name.
pub fn corpus() -> Vec<(&'static str, FanMorphism)> {
    vec![
        ("semi", fix_semi()),
        ("semi-proper", fix_semi_proper()),
        ("double", fix_double()),
        ("subdiv", fix_subdiv()),
        ("proj", ws_proj()),
        ("p1-bundle", p1_bundle()),
    ]
}
