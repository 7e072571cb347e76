use super::*;
use crate::fixtures::*;
use crate::matrix::ivec;
use crate::reduction::reduce;

fn ray() -> Cone {
    Cone::from_i64(1, &[[1]])
}

/// Two half lines glued at their common origin.
fn two_copies() -> ConeComplex {
    let cells = vec![Cone::zero(0), ray(), ray()];
    let gluings = (1..3)
        .map(|i| Gluing {
            cell: i,
            face: Cone::zero(1),
            target: 0,
            map: LatticeMap::zero(0, 1),
        })
        .collect();
    ConeComplex::new(cells, gluings).unwrap()
}

fn half_line_complex() -> ConeComplex {
    ConeComplex::from_fan(&half_line()).unwrap().0
}

fn two_copies_over_line(a: i64, b: i64) -> ComplexMorphism {
    let target = half_line_complex();
    let r = target.cells().iter().position(|c| c.dim() == 1).unwrap();
    let z = 1 - r;
    ComplexMorphism::new(
        two_copies(),
        target,
        vec![
            LatticeMap::zero(0, 0),
            LatticeMap::from_i64(&[[a]], 1),
            LatticeMap::from_i64(&[[b]], 1),
        ],
        vec![z, r, r],
    )
    .unwrap()
}

#[test]
fn fans_are_complexes() {
    for f in [half_line(), quadrant(), blowup_fan()] {
        let (c, e) = ConeComplex::from_fan(&f).unwrap();
        assert_eq!(c.len(), f.len());
        for (i, cell) in c.cells().iter().enumerate() {
            assert_eq!(image_cone(&e[i], cell).unwrap(), f.cones()[i]);
        }
    }
    assert_eq!(two_copies().maximal_cells(), vec![1, 2]);
}

#[test]
fn bad_gluings_are_reported() {
    let cells = vec![Cone::from_i64(1, &[[1]]), Cone::from_i64(2, &[[1, 0], [0, 1]])];
    let mut gluings = vec![Gluing {
        cell: 1,
        face: Cone::from_i64(2, &[[1, 0]]),
        target: 0,
        map: LatticeMap::from_i64(&[[2], [0]], 1),
    }];
    let v = validate_complex(&cells, &gluings).unwrap_err();
    assert_eq!((v.cell, v.other), (1, Some(0)));
    assert!(v.detail.contains("saturated"), "{v}");
    gluings[0].map = LatticeMap::from_i64(&[[1], [0]], 1);
    let v = validate_complex(&cells, &gluings).unwrap_err();
    assert!(v.detail.contains("not glued"), "{v}");
}

#[test]
fn n0_on_complexes() {
    let (m, _, _) = ComplexMorphism::from_fan_morphism(&fix_semi()).unwrap();
    let r = m.target().cells().iter().position(|c| c.dim() == 1).unwrap();
    assert_eq!(complex_n0(&m, r, &ivec(&[1])).unwrap().len(), 5);
    let zero = complex_n0(&m, r, &ivec(&[0])).unwrap();
    assert_eq!(zero.len(), 1);
    assert_eq!(m.source().cells()[*zero.first().unwrap()].dim(), 0);
    let m = two_copies_over_line(1, 1);
    assert_eq!(complex_n0(&m, 1 - m.assignment()[0], &ivec(&[1])).unwrap(), BTreeSet::from([1, 2]));
}

#[test]
fn two_copies_reduction() {
    let m = two_copies_over_line(1, 2);
    let red = reduce_complex(&m).unwrap();
    let r = red.base.cells().iter().position(|c| c.dim() == 1).unwrap();
    assert_eq!(red.base_sublattices[r], Sublattice::from_i64(1, &[[2]]));
    // lattice generated by the common values of the two image monoids
    let common: Vec<i64> = (1..=12).filter(|k| k % 2 == 0).collect();
    let oracle = Sublattice::from_i64(1, &common.iter().map(|&k| [k]).collect::<Vec<_>>());
    assert_eq!(red.base_sublattices[r], oracle);
    let subs: Vec<&Sublattice> = red
        .total
        .cells()
        .iter()
        .zip(&red.total_sublattices)
        .filter(|(c, _)| c.dim() == 1)
        .map(|(_, s)| s)
        .collect();
    assert_eq!(subs.len(), 2);
    assert!(subs.contains(&&Sublattice::from_i64(1, &[[2]])));
    assert!(subs.contains(&&Sublattice::full(1)));
}

#[test]
fn semistable_complex_is_fixed() {
    let m = two_copies_over_line(1, 1);
    assert!(is_weakly_semistable_complex(&m).unwrap());
    let red = reduce_complex(&m).unwrap();
    assert_eq!(red.base.len(), m.target().len());
    assert_eq!(red.total.len(), m.source().len());
    assert!(red.base_sublattices.iter().all(Sublattice::is_full));
    assert!(red.total_sublattices.iter().all(Sublattice::is_full));
}

#[test]
fn agrees_with_fan_reduction() {
    for (name, p) in corpus() {
        let (m, se, te) = ComplexMorphism::from_fan_morphism(&p).unwrap();
        let red = reduce_complex(&m).unwrap();
        let realized = red.realize(&m, &se, &te).unwrap();
        let fan = reduce(&p).unwrap();
        assert_eq!(realized.base, fan.base, "{name}");
        assert_eq!(realized.total, fan.total, "{name}");
        assert_eq!(realized.labels, fan.labels, "{name}");
    }
}

#[test]
fn lifts_are_flagged() {
    let (m, _, _) = ComplexMorphism::from_fan_morphism(&fix_semi()).unwrap();
    let red = reduce_complex(&m).unwrap();
    // the two dimensional cones have one dimensional fibres over the ray
    assert_eq!(red.positive_dimensional_lifts.len(), 2);
}
