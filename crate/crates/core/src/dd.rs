//! Fraction-free double description: inequalities to generators.

use num_traits::{Signed, Zero};

use crate::matrix::{dot, is_zero_vec, primitive, scale_vec, sub_vec, IVec, IntMatrix};

#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
}

struct State {
    lineality: Vec<IVec>,
    rays: Vec<IVec>,
    inequalities: Vec<IVec>,
}

fn bitset(constraints: &[IVec], v: &[num_bigint::BigInt]) -> Vec<u64> {
    let mut bits = vec![0u64; constraints.len().div_ceil(64)];
    for (i, c) in constraints.iter().enumerate() {
        if dot(c, v).is_zero() {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl State {
    fn step(&mut self, a: &IVec, equality: bool) {
        if let Some(k) = self.lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = self.lineality.remove(k);
            let mut a0 = dot(a, &l0);
            if a0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                a0 = -a0;
            }
            let project = |v: &IVec| primitive(&sub_vec(&scale_vec(&a0, v), &scale_vec(&dot(a, v), &l0)));
            self.lineality = self.lineality.iter().map(project).collect();
            self.rays = self.rays.iter().map(project).collect();
            if !equality {
                self.rays.push(primitive(&l0));
                self.inequalities.push(a.clone());
            }
            return;
        }
        let values: Vec<_> = self.rays.iter().map(|r| dot(a, r)).collect();
        let zsets: Vec<Vec<u64>> = self
            .rays
            .iter()
            .map(|r| bitset(&self.inequalities, r))
            .collect();
        let mut next: Vec<IVec> = Vec::new();
        for (r, v) in self.rays.iter().zip(&values) {
            if v.is_zero() || (!equality && v.is_positive()) {
                next.push(r.clone());
            }
        }
        for (i, vp) in values.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (j, vn) in values.iter().enumerate() {
                if !vn.is_negative() {
                    continue;
                }
                let common: Vec<u64> = zsets[i].iter().zip(&zsets[j]).map(|(x, y)| x & y).collect();
                let blocked = zsets
                    .iter()
                    .enumerate()
                    .any(|(t, z)| t != i && t != j && subset(&common, z));
                if blocked {
                    continue;
                }
                let combo = sub_vec(
                    &scale_vec(vp, &self.rays[j]),
                    &scale_vec(vn, &self.rays[i]),
                );
                if !is_zero_vec(&combo) {
                    next.push(primitive(&combo));
                }
            }
        }
        next.sort();
        next.dedup();
        self.rays = next;
        if !equality {
            self.inequalities.push(a.clone());
        }
    }
}

/// Generators of `{x : a.x >= 0 for a in inequalities, e.x = 0 for e in equations}`.
pub(crate) fn h_to_v(n: usize, inequalities: &[IVec], equations: &[IVec]) -> Generators {
    let mut state = State {
        lineality: IntMatrix::identity(n).rows_vec(),
        rays: Vec::new(),
        inequalities: Vec::new(),
    };
    let mut eqs: Vec<IVec> = equations.iter().filter(|e| !is_zero_vec(e)).map(|e| primitive(e)).collect();
    eqs.sort();
    eqs.dedup();
    let mut ineqs: Vec<IVec> = inequalities
        .iter()
        .filter(|a| !is_zero_vec(a))
        .map(|a| primitive(a))
        .collect();
    ineqs.sort();
    ineqs.dedup();
    for e in &eqs {
        state.step(e, true);
    }
    for a in &ineqs {
        state.step(a, false);
    }
    Generators {
        rays: state.rays,
        lineality: state.lineality,
    }
}
