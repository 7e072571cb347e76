//! Fans, KM (stacky) fans and their morphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cone::{image_cone, preimage_cone, Cone};
use crate::error::{Error, Result};
use crate::lattice::{
    fiber_product_lattice, intersect_sublattices, lattice_index, preimage_sublattice,
    FiberProduct, Lattice, LatticeIndex, LatticeMap, Sublattice,
};
use crate::matrix::{dot, ivec, IVec};
use crate::monoid::image_monoid_equals_cone_monoid;

use num_traits::{One, Signed};

/// A finite face-closed collection of strictly convex cones meeting along
/// common faces. Cones are kept sorted (dimension, then rays).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    lattice: Lattice,
    cones: Vec<Cone>,
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.maximal_cones()).finish()
    }
}

/// Checks the fan axioms for the face closure of `cones`.
pub fn validate_fan(n: usize, cones: &[Cone]) -> Result<()> {
    for c in cones {
        if c.ambient() != n {
            return Err(Error::InvalidFan(format!("{c:?} is not in Q^{n}")));
        }
        if !c.is_strictly_convex() {
            return Err(Error::InvalidFan(format!("{c:?} contains a line")));
        }
    }
    let maximal = maximal_of(cones);
    for (i, a) in maximal.iter().enumerate() {
        for b in &maximal[i + 1..] {
            let m = a.intersect(b)?;
            if !m.is_face_of(a) || !m.is_face_of(b) {
                return Err(Error::InvalidFan(format!(
                    "{a:?} and {b:?} meet in {m:?}, which is not a common face"
                )));
            }
        }
    }
    Ok(())
}

fn maximal_of(cones: &[Cone]) -> Vec<Cone> {
    let set: BTreeSet<Cone> = cones.iter().cloned().collect();
    let all: Vec<Cone> = set.into_iter().collect();
    all.iter()
        .filter(|c| !all.iter().any(|d| d != *c && d.contains_cone(c)))
        .cloned()
        .collect()
}

impl Fan {
    /// The fan generated by `cones` and all their faces.
    pub fn new(n: usize, cones: &[Cone]) -> Result<Fan> {
        validate_fan(n, cones)?;
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        all.insert(Cone::zero(n));
        for c in maximal_of(cones) {
            all.extend(c.faces());
        }
        Ok(Fan {
            lattice: Lattice::new(n),
            cones: all.into_iter().collect(),
        })
    }

    pub fn from_i64(n: usize, maximal: &[&[&[i64]]]) -> Fan {
        let cones: Vec<Cone> = maximal
            .iter()
            .map(|rays| {
                let r: Vec<IVec> = rays.iter().map(|x| ivec(x)).collect();
                Cone::from_generators(n, &r).expect("literal cone")
            })
            .collect();
        Fan::new(n, &cones).expect("literal fan")
    }

    /// The fan of a single cone.
    pub fn of_cone(c: &Cone) -> Result<Fan> {
        Fan::new(c.ambient(), std::slice::from_ref(c))
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn ambient(&self) -> usize {
        self.lattice.rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.cones.binary_search(c).ok()
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.index_of(c).is_some()
    }

    pub fn maximal_cones(&self) -> Vec<Cone> {
        maximal_of(&self.cones)
    }

    pub fn rays(&self) -> Vec<Cone> {
        self.cones.iter().filter(|c| c.dim() == 1).cloned().collect()
    }

    pub fn support_contains(&self, v: &[crate::matrix::Int]) -> bool {
        self.cones.iter().any(|c| c.contains(v))
    }

    /// Index of the cone whose relative interior contains `v`.
    pub fn cell_of(&self, v: &[crate::matrix::Int]) -> Option<usize> {
        self.cones.iter().position(|c| c.relint_contains(v))
    }

    /// Whether every point of `region` lies in the support.
    pub fn covers(&self, region: &Cone) -> bool {
        covered(region, &self.maximal_cones())
    }

    pub fn same_support(&self, other: &Fan) -> bool {
        self.ambient() == other.ambient()
            && other.maximal_cones().iter().all(|c| self.covers(c))
            && self.maximal_cones().iter().all(|c| other.covers(c))
    }

    /// `f^{-1}(self)` for a finite-index injection `f`.
    pub fn pull_back(&self, f: &LatticeMap) -> Result<Fan> {
        if !f.is_finite_index_injection() || f.codomain() != self.lattice {
            return Err(Error::Precondition(
                "pull-back fans need a finite-index injection into the fan's lattice".into(),
            ));
        }
        let cones: Vec<Cone> = self
            .maximal_cones()
            .iter()
            .map(|c| preimage_cone(f, c))
            .collect::<Result<_>>()?;
        Fan::new(f.domain().rank, &cones)
    }
}

pub fn support_contains(f: &Fan, v: &[crate::matrix::Int]) -> bool {
    f.support_contains(v)
}

/// Whether `region` is covered by the union of `cones`: the region is cut by
/// every facet and span hyperplane of the cones, and one relative-interior
/// sample per full-dimensional cell decides membership.
pub fn covered(region: &Cone, cones: &[Cone]) -> bool {
    let mut hyperplanes: BTreeSet<IVec> = BTreeSet::new();
    for c in cones {
        hyperplanes.extend(c.facets().iter().cloned());
        hyperplanes.extend(c.span_equations().iter().cloned());
    }
    let cells = subdivide(region, &hyperplanes);
    cells.iter().all(|cell| {
        let s = cell.interior_sample();
        cones.iter().any(|c| c.contains(&s))
    })
}

/// Full-dimensional cells of `region` cut by all `hyperplanes`.
pub fn subdivide(region: &Cone, hyperplanes: &BTreeSet<IVec>) -> Vec<Cone> {
    let mut cells = vec![region.clone()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        for c in cells {
            let values: Vec<_> = c.generators().iter().map(|g| dot(h, g)).collect();
            let cuts = values.iter().any(|v| v.is_positive()) && values.iter().any(|v| v.is_negative());
            if cuts {
                let (lo, hi) = c.split_by_hyperplane(h).expect("same space");
                next.push(lo);
                next.push(hi);
            } else {
                next.push(c);
            }
        }
        cells = next;
    }
    cells
}

/// A lattice map carrying every source cone into a target cone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FanMorphism {
    source: Fan,
    target: Fan,
    map: LatticeMap,
    assignment: Vec<usize>,
}

impl fmt::Debug for FanMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FanMorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("map", &self.map)
            .finish()
    }
}

impl FanMorphism {
    pub fn new(source: Fan, target: Fan, map: LatticeMap) -> Result<FanMorphism> {
        if map.domain() != source.lattice || map.codomain() != target.lattice {
            return Err(Error::Dimension(format!(
                "map Z^{} -> Z^{} between fans in Z^{} and Z^{}",
                map.domain().rank,
                map.codomain().rank,
                source.ambient(),
                target.ambient()
            )));
        }
        let mut assignment = Vec::with_capacity(source.len());
        for sigma in &source.cones {
            let image = map.apply(&sigma.interior_sample());
            let k = target.cell_of(&image).ok_or_else(|| {
                Error::NotAMorphism(format!("{sigma:?} leaves the target support"))
            })?;
            if !target.cones[k].contains_cone(&image_cone(&map, sigma)?) {
                return Err(Error::NotAMorphism(format!(
                    "{sigma:?} does not map into a single cone"
                )));
            }
            assignment.push(k);
        }
        Ok(FanMorphism {
            source,
            target,
            map,
            assignment,
        })
    }

    pub fn identity(f: &Fan) -> FanMorphism {
        FanMorphism::new(f.clone(), f.clone(), LatticeMap::identity(f.ambient())).expect("identity")
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    pub fn lattice_map(&self) -> &LatticeMap {
        &self.map
    }

    /// Index (in the target) of the smallest cone containing the image of
    /// source cone `i`.
    pub fn assignment(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn assigned_cone(&self, sigma: &Cone) -> Option<&Cone> {
        self.source
            .index_of(sigma)
            .map(|i| &self.target.cones[self.assignment[i]])
    }

    pub fn compose(&self, inner: &FanMorphism) -> Result<FanMorphism> {
        if inner.target != self.source {
            return Err(Error::NotAMorphism("composable morphisms must share a fan".into()));
        }
        FanMorphism::new(inner.source.clone(), self.target.clone(), self.map.compose(&inner.map)?)
    }

    /// `p^{-1}(Supp G) = Supp F`.
    pub fn is_proper(&self) -> bool {
        let sources = self.source.maximal_cones();
        self.target.maximal_cones().iter().all(|kappa| {
            let pre = preimage_cone(&self.map, kappa).expect("shapes checked");
            covered(&pre, &sources)
        })
    }

    /// `p(Supp F) = Supp G`.
    pub fn is_surjective(&self) -> bool {
        let images: Vec<Cone> = self
            .source
            .maximal_cones()
            .iter()
            .map(|s| image_cone(&self.map, s).expect("shapes checked"))
            .collect();
        self.target
            .maximal_cones()
            .iter()
            .all(|kappa| covered(kappa, &images))
    }

    pub fn is_modification(&self) -> bool {
        self.map.is_identity() && self.is_proper()
    }

    pub fn is_alteration(&self) -> bool {
        self.map.is_finite_index_injection() && self.is_proper()
    }
}

pub fn is_proper(m: &FanMorphism) -> bool {
    m.is_proper()
}

pub fn is_modification(m: &FanMorphism) -> bool {
    m.is_modification()
}

pub fn is_alteration(m: &FanMorphism) -> bool {
    m.is_alteration()
}

/// `(G',Q') -> (j^{-1}G, Q') -> (G, Q)`.
pub fn factor_alteration(m: &FanMorphism) -> Result<(FanMorphism, FanMorphism)> {
    if !m.is_alteration() {
        return Err(Error::Precondition("not an alteration".into()));
    }
    let pulled = m.target.pull_back(&m.map)?;
    let modification = FanMorphism::new(
        m.source.clone(),
        pulled.clone(),
        LatticeMap::identity(m.source.ambient()),
    )?;
    let inclusion = FanMorphism::new(pulled, m.target.clone(), m.map.clone())?;
    Ok((modification, inclusion))
}

/// `{p^{-1}(κ) ∩ σ}` with its morphism to `G`.
pub fn minimal_modification(p: &LatticeMap, f: &Fan, g: &Fan) -> Result<(Fan, FanMorphism)> {
    let mut cones = Vec::new();
    let pre: Vec<Cone> = g
        .maximal_cones()
        .iter()
        .map(|k| preimage_cone(p, k))
        .collect::<Result<_>>()?;
    for sigma in f.maximal_cones() {
        for k in &pre {
            cones.push(k.intersect(&sigma)?);
        }
    }
    let fan = Fan::new(f.ambient(), &cones)?;
    let m = FanMorphism::new(fan.clone(), g.clone(), p.clone())?;
    Ok((fan, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemistabilityCondition {
    /// The image of the cone is not itself a cone of the target fan.
    ImageNotACone,
    /// The lattice points of the cone do not surject onto those of its image.
    MonoidNotSurjective,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistabilityFailure {
    pub cone: Cone,
    pub condition: SemistabilityCondition,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemistabilityReport {
    pub failures: Vec<SemistabilityFailure>,
}

impl SemistabilityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn semistability(
    m: &FanMorphism,
    n_sub: impl Fn(usize) -> Sublattice,
    q_sub: impl Fn(usize) -> Sublattice,
) -> Result<SemistabilityReport> {
    let mut report = SemistabilityReport::default();
    for (i, sigma) in m.source.cones.iter().enumerate() {
        let image = image_cone(&m.map, sigma)?;
        let Some(k) = m.target.index_of(&image) else {
            report.failures.push(SemistabilityFailure {
                cone: sigma.clone(),
                condition: SemistabilityCondition::ImageNotACone,
            });
            continue;
        };
        if !image_monoid_equals_cone_monoid(&m.map, sigma, &image, &n_sub(i), &q_sub(k))? {
            report.failures.push(SemistabilityFailure {
                cone: sigma.clone(),
                condition: SemistabilityCondition::MonoidNotSurjective,
            });
        }
    }
    Ok(report)
}

pub fn is_weakly_semistable(m: &FanMorphism) -> Result<SemistabilityReport> {
    let (n, q) = (m.source.ambient(), m.target.ambient());
    semistability(m, |_| Sublattice::full(n), |_| Sublattice::full(q))
}

/// Generators of the rays of `sigma` that are primitive in `lattice`.
fn ray_generators(sigma: &Cone, lattice: &Sublattice) -> Result<Vec<IVec>> {
    let n = sigma.ambient();
    sigma
        .rays()
        .iter()
        .map(|r| {
            let line = Sublattice::saturated_span(n, std::slice::from_ref(r))?;
            let b = intersect_sublattices(lattice, &line)?;
            let v = b.basis().first().cloned().ok_or_else(|| {
                Error::InvalidStackyFan(format!("ray {r:?} meets the lattice only in 0"))
            })?;
            Ok(if dot(&v, r).is_negative() {
                crate::matrix::neg_vec(&v)
            } else {
                v
            })
        })
        .collect()
}

fn is_smooth_cone(sigma: &Cone, lattice: &Sublattice) -> Result<bool> {
    if sigma.rays().len() != sigma.dim() {
        return Ok(false);
    }
    let gens = ray_generators(sigma, lattice)?;
    let spanned = Sublattice::from_generators(sigma.ambient(), &gens)?;
    let local = intersect_sublattices(lattice, &sigma.span_lattice())?;
    Ok(lattice_index(&spanned, &local)? == LatticeIndex::Finite(1.into()))
}

pub fn is_smooth_fan(f: &Fan) -> Result<bool> {
    let full = Sublattice::full(f.ambient());
    for c in &f.cones {
        if !is_smooth_cone(c, &full)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_semistable(m: &FanMorphism) -> Result<bool> {
    Ok(is_weakly_semistable(m)?.holds() && is_smooth_fan(&m.source)? && is_smooth_fan(&m.target)?)
}

/// `F ×_G H` inside `N ×_Q L`.
#[derive(Clone, Debug)]
pub struct FanFiberProduct {
    pub lattice: FiberProduct,
    pub fan: Fan,
    pub proj_f: FanMorphism,
    pub proj_h: FanMorphism,
}

/// The cone `{x ∈ K : proj_n(x) ∈ σ, proj_l(x) ∈ λ}`.
pub fn fiber_cone(fp: &FiberProduct, sigma: &Cone, lambda: &Cone) -> Result<Cone> {
    preimage_cone(&fp.proj_n, sigma)?.intersect(&preimage_cone(&fp.proj_l, lambda)?)
}

pub fn toric_fiber_product(p: &FanMorphism, q: &FanMorphism) -> Result<FanFiberProduct> {
    if p.target != q.target {
        return Err(Error::Precondition("fiber product needs a shared target fan".into()));
    }
    let fp = fiber_product_lattice(&p.map, &q.map)?;
    let k = fp.lattice.rank;
    let mut cones = Vec::new();
    for sigma in p.source.maximal_cones() {
        for lambda in q.source.maximal_cones() {
            cones.push(fiber_cone(&fp, &sigma, &lambda)?);
        }
    }
    let fan = Fan::new(k, &cones)?;
    let proj_f = FanMorphism::new(fan.clone(), p.source.clone(), fp.proj_n.clone())?;
    let proj_h = FanMorphism::new(fan.clone(), q.source.clone(), fp.proj_l.clone())?;
    Ok(FanFiberProduct {
        lattice: fp,
        fan,
        proj_f,
        proj_h,
    })
}

/// `(F ×_Q Q', proj) -> (j^{-1}G, Q')`, the minimal modification of `F`
/// pulled back to `N ×_Q Q'`.
pub fn base_change_along_alteration(p: &FanMorphism, j: &LatticeMap) -> Result<(Fan, FanMorphism)> {
    if !j.is_finite_index_injection() || j.codomain() != p.target.lattice {
        return Err(Error::Precondition("base change needs a finite-index inclusion".into()));
    }
    let fp = fiber_product_lattice(&p.map, j)?;
    let k = fp.lattice.rank;
    let pulled: Vec<Cone> = p
        .source
        .maximal_cones()
        .iter()
        .map(|s| preimage_cone(&fp.proj_n, s))
        .collect::<Result<_>>()?;
    let pulled = Fan::new(k, &pulled)?;
    let base = p.target.pull_back(j)?;
    minimal_modification(&fp.proj_l, &pulled, &base)
}

/// A KM fan: a fan with a finite-index sublattice of `N ∩ Span σ` per cone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StackyFan {
    fan: Fan,
    sublattices: Vec<Sublattice>,
}

impl fmt::Debug for StackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (c, s) in self.fan.cones.iter().zip(&self.sublattices) {
            m.entry(c, s);
        }
        m.finish()
    }
}

pub fn validate_stacky_fan(fan: &Fan, sublattices: &[Sublattice]) -> Result<()> {
    if sublattices.len() != fan.len() {
        return Err(Error::InvalidStackyFan(format!(
            "{} sublattices for {} cones",
            sublattices.len(),
            fan.len()
        )));
    }
    for (sigma, n_sigma) in fan.cones.iter().zip(sublattices) {
        let local = sigma.span_lattice();
        if n_sigma.ambient() != fan.ambient()
            || !n_sigma.is_sublattice_of(&local)
            || n_sigma.rank() != local.rank()
        {
            return Err(Error::InvalidStackyFan(format!(
                "sublattice {n_sigma:?} of {sigma:?} is not of finite index in N ∩ Span"
            )));
        }
    }
    for (sigma, n_sigma) in fan.cones.iter().zip(sublattices) {
        for tau in sigma.proper_faces() {
            let t = fan.index_of(&tau).expect("fans are face closed");
            let restricted = intersect_sublattices(n_sigma, &tau.span_lattice())?;
            if restricted != sublattices[t] {
                return Err(Error::InvalidStackyFan(format!(
                    "face {tau:?} of {sigma:?}: restriction {restricted:?} differs from {:?}",
                    sublattices[t]
                )));
            }
        }
    }
    Ok(())
}

impl StackyFan {
    pub fn new(fan: Fan, sublattices: Vec<Sublattice>) -> Result<StackyFan> {
        validate_stacky_fan(&fan, &sublattices)?;
        Ok(StackyFan { fan, sublattices })
    }

    /// `N_σ = N ∩ Span σ` for every cone.
    pub fn trivial(fan: &Fan) -> StackyFan {
        let sublattices = fan.cones.iter().map(|c| c.span_lattice()).collect();
        StackyFan {
            fan: fan.clone(),
            sublattices,
        }
    }

    /// Sublattices supplied per cone; missing cones default to `N ∩ Span σ`.
    pub fn from_map(fan: &Fan, given: &BTreeMap<Cone, Sublattice>) -> Result<StackyFan> {
        let sublattices = fan
            .cones
            .iter()
            .map(|c| given.get(c).cloned().unwrap_or_else(|| c.span_lattice()))
            .collect();
        StackyFan::new(fan.clone(), sublattices)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn sublattices(&self) -> &[Sublattice] {
        &self.sublattices
    }

    pub fn sublattice(&self, c: &Cone) -> Option<&Sublattice> {
        self.fan.index_of(c).map(|i| &self.sublattices[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.fan
            .cones
            .iter()
            .zip(&self.sublattices)
            .all(|(c, s)| *s == c.span_lattice())
    }
}

/// A fan morphism with `p(N_σ) ⊆ Q_κ` whenever `σ ↦ κ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StackyMorphism {
    source: StackyFan,
    target: StackyFan,
    underlying: FanMorphism,
}

impl StackyMorphism {
    pub fn new(source: StackyFan, target: StackyFan, map: LatticeMap) -> Result<StackyMorphism> {
        let underlying = FanMorphism::new(source.fan.clone(), target.fan.clone(), map)?;
        for (i, n_sigma) in source.sublattices.iter().enumerate() {
            let k = underlying.assignment[i];
            if !n_sigma.image(&underlying.map)?.is_sublattice_of(&target.sublattices[k]) {
                return Err(Error::NotAMorphism(format!(
                    "N_σ of {:?} does not map into Q_κ of {:?}",
                    source.fan.cones[i], target.fan.cones[k]
                )));
            }
        }
        Ok(StackyMorphism {
            source,
            target,
            underlying,
        })
    }

    pub fn source(&self) -> &StackyFan {
        &self.source
    }

    pub fn target(&self) -> &StackyFan {
        &self.target
    }

    pub fn underlying(&self) -> &FanMorphism {
        &self.underlying
    }

    pub fn lattice_map(&self) -> &LatticeMap {
        &self.underlying.map
    }

    /// `p^{-1}(Q_κ) ∩ (N ∩ Span σ) = N_σ` for every assigned pair.
    pub fn is_representable(&self) -> Result<bool> {
        for (i, sigma) in self.source.fan.cones.iter().enumerate() {
            let q = &self.target.sublattices[self.underlying.assignment[i]];
            let pre = preimage_sublattice(&self.underlying.map, q)?;
            if intersect_sublattices(&pre, &sigma.span_lattice())? != self.source.sublattices[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_weakly_semistable(&self) -> Result<SemistabilityReport> {
        semistability(
            &self.underlying,
            |i| self.source.sublattices[i].clone(),
            |k| self.target.sublattices[k].clone(),
        )
    }

    pub fn is_semistable(&self) -> Result<bool> {
        Ok(self.is_weakly_semistable()?.holds()
            && is_smooth_stacky_fan(&self.source)?
            && is_smooth_stacky_fan(&self.target)?)
    }
}

pub fn is_representable(m: &StackyMorphism) -> Result<bool> {
    m.is_representable()
}

pub fn is_smooth_stacky_fan(f: &StackyFan) -> Result<bool> {
    for (c, s) in f.fan.cones.iter().zip(&f.sublattices) {
        if !is_smooth_cone(c, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Star subdivision of `f` at the primitive vector `v`.
pub fn stellar_subdivision(f: &Fan, v: &[crate::matrix::Int]) -> Result<Fan> {
    let n = f.ambient();
    let mut cones = Vec::new();
    for sigma in f.maximal_cones() {
        if !sigma.contains(v) {
            cones.push(sigma);
            continue;
        }
        for tau in sigma.faces() {
            if tau.dim() + 1 == sigma.dim() && !tau.contains(v) {
                let mut gens = tau.rays().to_vec();
                gens.push(v.to_vec());
                cones.push(Cone::from_generators(n, &gens)?);
            }
        }
    }
    Fan::new(n, &cones)
}

/// One affine chart `σ ×_κ λ` of a fiber product and whether its dual
/// monoid is the monoid pushout of the duals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartesianTriple {
    pub sigma: Cone,
    pub kappa: Cone,
    pub lambda: Cone,
    pub fiber: Cone,
    pub cartesian: bool,
}

/// Checks `N_σ^∨ ⊕_{Q_κ^∨} L_λ^∨ ≅ (σ ×_κ λ)^∨ ∩ (N ×_Q L)^∨` for every
/// pair of source cones over a common target cone.
pub fn cartesian_check(p: &FanMorphism, b: &FanMorphism) -> Result<Vec<CartesianTriple>> {
    if p.target != b.target {
        return Err(Error::Precondition("cartesian check needs a shared target fan".into()));
    }
    let fp = fiber_product_lattice(&p.map, &b.map)?;
    let mut out = Vec::new();
    for (i, sigma) in p.source.cones.iter().enumerate() {
        for (j, lambda) in b.source.cones.iter().enumerate() {
            let k1 = &p.target.cones[p.assignment[i]];
            let k2 = &p.target.cones[b.assignment[j]];
            let sample = crate::matrix::add_vec(&k1.interior_sample(), &k2.interior_sample());
            let Some(k) = p.target.cell_of(&sample) else {
                continue;
            };
            let kappa = &p.target.cones[k];
            if !kappa.contains_cone(k1) || !kappa.contains_cone(k2) {
                continue;
            }
            let fiber = fiber_cone(&fp, sigma, lambda)?;
            let cartesian = chart_is_cartesian(&fp, p, b, sigma, kappa, lambda, &fiber)?;
            out.push(CartesianTriple {
                sigma: sigma.clone(),
                kappa: kappa.clone(),
                lambda: lambda.clone(),
                fiber,
                cartesian,
            });
        }
    }
    Ok(out)
}

/// Height up to which pairs of elements are tested for identification in the
/// monoid pushout.
pub const INTEGRALITY_HEIGHT: usize = 2;

fn chart_is_cartesian(
    fp: &FiberProduct,
    p: &FanMorphism,
    b: &FanMorphism,
    sigma: &Cone,
    kappa: &Cone,
    lambda: &Cone,
    fiber: &Cone,
) -> Result<bool> {
    use crate::lattice::{dual_map, right_inverse};
    use crate::monoid::{
        dual_monoid, pushout_integrality_witness, pushout_monoid, AffineMonoid, MonoidMap,
    };

    let s = dual_monoid(sigma, p.source.lattice)?;
    let k = dual_monoid(kappa, p.target.lattice)?;
    let l = dual_monoid(lambda, b.source.lattice)?;
    let u = MonoidMap::new(k.clone(), s, dual_map(&p.map))?;
    let v = MonoidMap::new(k, l, dual_map(&b.map))?;
    let (po, pushout) = pushout_monoid(&u, &v)?;
    if !po.torsion_order.is_one() || po.lattice != fp.lattice {
        return Ok(false);
    }
    if pushout_integrality_witness(&u, &v, INTEGRALITY_HEIGHT, 2 * INTEGRALITY_HEIGHT + 2)?.is_some() {
        return Ok(false);
    }
    let section = right_inverse(&po.quotient())
        .ok_or_else(|| Error::Validation("pushout quotient is not surjective".into()))?;
    let phi = dual_map(&fp.inclusion()).compose(&section)?;
    if !phi.is_injective() {
        return Ok(false);
    }
    let dual = dual_monoid(fiber, fp.lattice)?;
    let images: Vec<IVec> = pushout.generators().iter().map(|g| phi.apply(g)).collect();
    if images.iter().any(|w| dual.contains(w).is_none()) {
        return Ok(false);
    }
    let image = AffineMonoid::new(fp.lattice.rank, &images)?;
    Ok(dual.generators().iter().all(|g| image.contains(g).is_some()))
}
