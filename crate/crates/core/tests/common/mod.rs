//! Brute-force references shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use semistable::cone::Cone;
use semistable::lattice::{LatticeMap, Sublattice};
use semistable::matrix::{ivec, IVec};
use num_traits::ToPrimitive;

pub fn small(v: &IVec) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("small entry")).collect()
}

/// All integer vectors with entries in `[-bound, bound]`.
pub fn box_points(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Nonzero lattice points of `c ∩ sub` in the box.
pub fn cone_points(c: &Cone, sub: &Sublattice, bound: i64) -> Vec<Vec<i64>> {
    box_points(c.ambient(), bound)
        .into_iter()
        .filter(|p| p.iter().any(|&x| x != 0))
        .filter(|p| {
            let v = ivec(p);
            c.contains(&v) && sub.contains(&v)
        })
        .collect()
}

/// The first positive multiple of `r` lying in `sub`.
pub fn primitive_in(r: &IVec, sub: &Sublattice) -> Vec<i64> {
    let r = small(r);
    (1..)
        .map(|k| r.iter().map(|x| k * x).collect::<Vec<i64>>())
        .find(|v| sub.contains(&ivec(v)))
        .unwrap()
}

/// Irreducible elements of `c ∩ sub`: every element of the Hilbert basis
/// lies in the box spanned by the summed primitive ray generators of `sub`.
pub fn hilbert_basis_oracle(c: &Cone, sub: &Sublattice) -> BTreeSet<Vec<i64>> {
    let bound = c
        .rays()
        .iter()
        .map(|r| primitive_in(r, sub).iter().map(|x| x.abs()).max().unwrap_or(0))
        .sum::<i64>()
        .max(1);
    let points = cone_points(c, sub, bound);
    let set: BTreeSet<Vec<i64>> = points.iter().cloned().collect();
    points
        .iter()
        .filter(|v| {
            !points.iter().any(|u| {
                let d: Vec<i64> = v.iter().zip(u.iter()).map(|(a, b)| a - b).collect();
                d.iter().any(|&x| x != 0) && (set.contains(&d) || {
                    let dv = ivec(&d);
                    c.contains(&dv) && sub.contains(&dv)
                })
            })
        })
        .cloned()
        .collect()
}

/// Sums of at most `height` generators.
pub fn monoid_elements(generators: &[Vec<i64>], height: usize) -> BTreeSet<Vec<i64>> {
    let n = generators.first().map_or(0, Vec::len);
    let mut all = BTreeSet::from([vec![0; n]]);
    let mut frontier = all.clone();
    for _ in 0..height {
        let mut next = BTreeSet::new();
        for f in &frontier {
            for g in generators {
                let s: Vec<i64> = f.iter().zip(g).map(|(a, b)| a + b).collect();
                if all.insert(s.clone()) {
                    next.insert(s);
                }
            }
        }
        frontier = next;
    }
    all
}

pub fn apply(p: &LatticeMap, v: &[i64]) -> Vec<i64> {
    small(&p.apply(&ivec(v)))
}

/// The lattice generated by the values below `height` that every image
/// monoid `p(σ ∩ N_σ)` attains.
pub fn q_kappa_oracle(
    p: &LatticeMap,
    kappa: &Cone,
    contributing: &[(Cone, Sublattice)],
    height: i64,
) -> Sublattice {
    let mut common: Option<BTreeSet<Vec<i64>>> = None;
    for (sigma, sub) in contributing {
        let local = semistable::lattice::intersect_sublattices(sub, &sigma.span_lattice()).unwrap();
        let image: BTreeSet<Vec<i64>> = cone_points(sigma, &local, height)
            .iter()
            .map(|v| apply(p, v))
            .filter(|w| w.iter().all(|x| x.abs() <= height) && kappa.contains(&ivec(w)))
            .collect();
        common = Some(match common {
            None => image,
            Some(c) => c.intersection(&image).cloned().collect(),
        });
    }
    let gens: Vec<IVec> = common.unwrap_or_default().iter().map(|v| ivec(v)).collect();
    Sublattice::from_generators(kappa.ambient(), &gens).unwrap()
}

/// `p(σ ∩ N) = κ ∩ Q` on lattice points of bounded size.
pub fn image_monoid_oracle(
    p: &LatticeMap,
    sigma: &Cone,
    kappa: &Cone,
    n_sub: &Sublattice,
    q_sub: &Sublattice,
    bound: i64,
) -> bool {
    let image: BTreeSet<Vec<i64>> = cone_points(sigma, n_sub, 3 * bound)
        .iter()
        .map(|v| apply(p, v))
        .collect();
    let target: BTreeSet<Vec<i64>> = cone_points(kappa, q_sub, bound).into_iter().collect();
    target.iter().all(|t| image.contains(t))
        && image
            .iter()
            .filter(|w| w.iter().all(|x| x.abs() <= bound))
            .filter(|w| w.iter().any(|&x| x != 0))
            .all(|w| target.contains(w))
}
