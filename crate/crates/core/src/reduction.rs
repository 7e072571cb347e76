//! Universal weak semistable reduction of a toric morphism: the base
//! subdivision `G'` by level sets of `N0`, the lattices `Q_κ` and `N_σ`, and
//! the category of base changes through which everything factors.

use std::collections::{BTreeMap, BTreeSet};

use crate::cone::{image_cone, Cone};
use crate::error::{Error, Result};
use crate::fan::{
    fiber_cone, minimal_modification, subdivide, Fan, FanMorphism, StackyFan, StackyMorphism,
};
use crate::lattice::{
    fiber_product_lattice, image_lattice, intersect_sublattices, kernel_lattice,
    preimage_sublattice, LatticeMap, Sublattice,
};
use crate::matrix::{add_vec, IVec, Int};
use crate::monoid::q_kappa_lattice;

/// A cell of `G'` with the source cones whose relative interiors map over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N0Label {
    pub cone: Cone,
    pub members: Vec<Cone>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    /// `(G', Q, {Q_κ})`
    pub base: StackyFan,
    /// `(F', N, {N_σ})`
    pub total: StackyFan,
    pub stacky_map: StackyMorphism,
    /// `F' -> F`
    pub total_modification: FanMorphism,
    /// `G' -> G`
    pub base_modification: FanMorphism,
    pub labels: Vec<N0Label>,
    /// Whether the input satisfied `p^{-1}(Supp G) = Supp F`.
    pub input_proper: bool,
}

impl ReductionResult {
    /// No subdivision and no change of lattices.
    pub fn is_identity_for(&self, m: &StackyMorphism) -> bool {
        self.base == *m.target()
            && self.total == *m.source()
            && self.base_modification.source() == self.base_modification.target()
            && self.total_modification.source() == self.total_modification.target()
    }

    pub fn label_of(&self, c: &Cone) -> Option<&N0Label> {
        self.labels.iter().find(|l| l.cone == *c)
    }
}

/// Source cones `σ` with `w ∈ relint p(σ)`.
pub fn n0(p: &FanMorphism, w: &[Int]) -> Result<BTreeSet<usize>> {
    let images = images(p)?;
    Ok(label_at(&images, w))
}

fn images(p: &FanMorphism) -> Result<Vec<Cone>> {
    p.source()
        .cones()
        .iter()
        .map(|s| image_cone(p.lattice_map(), s))
        .collect()
}

fn label_at(images: &[Cone], w: &[Int]) -> BTreeSet<usize> {
    (0..images.len()).filter(|&i| images[i].relint_contains(w)).collect()
}

struct Cell {
    cone: Cone,
    owner: usize,
    label: BTreeSet<usize>,
}

fn second_sample(c: &Cone) -> IVec {
    let s = c.interior_sample();
    match c.rays().first() {
        Some(r) => add_vec(&s, r),
        None => s,
    }
}

/// Subdivides `g` into the level sets of `w ↦ {i : w ∈ relint images[i]}`.
/// Returns the cells with their labels, sorted by cone.
pub(crate) fn refine_by_images(
    g: &Fan,
    images: &[Cone],
) -> Result<Vec<(Cone, BTreeSet<usize>)>> {
    let mut hyperplanes: BTreeSet<IVec> = BTreeSet::new();
    for image in images {
        hyperplanes.extend(image.facets().iter().cloned());
        hyperplanes.extend(image.span_equations().iter().cloned());
    }
    let mut pieces: BTreeSet<Cone> = BTreeSet::new();
    for kappa in g.maximal_cones() {
        for piece in subdivide(&kappa, &hyperplanes) {
            pieces.extend(piece.faces());
        }
    }
    let mut cells = Vec::with_capacity(pieces.len());
    for cone in pieces {
        let s = cone.interior_sample();
        let owner = g
            .cell_of(&s)
            .ok_or_else(|| Error::Validation(format!("cell {cone:?} leaves Supp G")))?;
        let label = label_at(images, &s);
        if label_at(images, &second_sample(&cone)) != label {
            return Err(Error::Validation(format!("N0 is not constant on {cone:?}")));
        }
        cells.push(Cell { cone, owner, label });
    }
    let mut groups: BTreeMap<(usize, BTreeSet<usize>), Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        groups.entry((c.owner, c.label.clone())).or_default().push(i);
    }
    let n = g.ambient();
    let mut hulls: Vec<(Cone, BTreeSet<usize>)> = Vec::new();
    for ((_, label), members) in groups {
        let rays: Vec<IVec> = members
            .iter()
            .flat_map(|&i| cells[i].cone.rays().iter().cloned())
            .collect();
        let hull = Cone::from_generators(n, &rays)?;
        if !hull.is_strictly_convex() {
            return Err(Error::Validation(format!("level set hull {hull:?} contains a line")));
        }
        for (i, c) in cells.iter().enumerate() {
            let inside = hull.relint_contains(&c.cone.interior_sample());
            if inside != members.contains(&i) {
                return Err(Error::Validation(format!(
                    "level set {label:?} is not the relative interior of {hull:?}"
                )));
            }
        }
        hulls.push((hull, label));
    }
    hulls.sort();
    let cones: Vec<Cone> = hulls.iter().map(|(h, _)| h.clone()).collect();
    let refined = Fan::new(n, &cones)?;
    if refined.len() != hulls.len() {
        return Err(Error::Validation("level sets do not form a fan".into()));
    }
    Ok(hulls)
}

/// The coarsest subdivision of `G` on whose open cells `N0` is constant.
pub fn image_refinement(p: &FanMorphism) -> Result<(Fan, Vec<N0Label>)> {
    if !p.is_surjective() {
        return Err(Error::Precondition("the morphism is not surjective onto Supp G".into()));
    }
    let g = p.target();
    let cells = refine_by_images(g, &images(p)?)?;
    let cones: Vec<Cone> = cells.iter().map(|(c, _)| c.clone()).collect();
    let refined = Fan::new(g.ambient(), &cones)?;
    let modification =
        FanMorphism::new(refined.clone(), g.clone(), LatticeMap::identity(g.ambient()))?;
    if !modification.is_modification() {
        return Err(Error::Validation("G' is not a modification of G".into()));
    }
    let labels = cells
        .into_iter()
        .map(|(cone, label)| N0Label {
            cone,
            members: label.iter().map(|&k| p.source().cones()[k].clone()).collect(),
        })
        .collect();
    Ok((refined, labels))
}

/// `Q_κ' = Q_{κ0} ∩ Span κ' ∩ ⋂_{σ ∈ N0(κ')} p(N_σ ∩ Span σ)` where `κ0` is the
/// cone of `G` containing `κ'`.
pub fn base_lattices(m: &StackyMorphism, refined: &Fan, labels: &[N0Label]) -> Result<StackyFan> {
    let p = m.underlying();
    let mut sublattices = Vec::with_capacity(refined.len());
    for kappa in refined.cones() {
        let label = labels
            .iter()
            .find(|l| l.cone == *kappa)
            .ok_or_else(|| Error::Validation(format!("no label for {kappa:?}")))?;
        let contributing: Vec<(Cone, Sublattice)> = label
            .members
            .iter()
            .map(|s| (s.clone(), m.source().sublattice(s).expect("source cone").clone()))
            .collect();
        let q = q_kappa_lattice(p.lattice_map(), kappa, &contributing)?;
        let k0 = p
            .target()
            .cell_of(&kappa.interior_sample())
            .expect("G' refines G");
        let q = intersect_sublattices(&q, &m.target().sublattices()[k0])?;
        sublattices.push(q);
    }
    StackyFan::new(refined.clone(), sublattices)
}

/// `F'` = minimal modification of `F` over `G'`, with
/// `N_σ' = N_{σ0} ∩ Span σ' ∩ p^{-1}(Q_κ')`.
pub fn total_refinement(m: &StackyMorphism, base: &StackyFan) -> Result<(StackyFan, StackyMorphism)> {
    let p = m.lattice_map();
    let f = m.source().fan();
    let (refined, to_base) = minimal_modification(p, f, base.fan())?;
    let mut sublattices = Vec::with_capacity(refined.len());
    for (i, sigma) in refined.cones().iter().enumerate() {
        let s0 = f
            .cell_of(&sigma.interior_sample())
            .expect("F' refines F");
        let q = &base.sublattices()[to_base.assignment(i)];
        let local = intersect_sublattices(&m.source().sublattices()[s0], &sigma.span_lattice())?;
        sublattices.push(intersect_sublattices(&local, &preimage_sublattice(p, q)?)?);
    }
    let total = StackyFan::new(refined, sublattices)?;
    let map = StackyMorphism::new(total.clone(), base.clone(), p.clone())?;
    Ok((total, map))
}

pub fn reduce(p: &FanMorphism) -> Result<ReductionResult> {
    let m = StackyMorphism::new(
        StackyFan::trivial(p.source()),
        StackyFan::trivial(p.target()),
        p.lattice_map().clone(),
    )?;
    reduce_stacky(&m)
}

/// Reduction of a morphism of KM fans; for trivial sublattices this is
/// [`reduce`].
pub fn reduce_stacky(m: &StackyMorphism) -> Result<ReductionResult> {
    let p = m.underlying();
    let (refined, labels) = image_refinement(p)?;
    let base = base_lattices(m, &refined, &labels)?;
    let (total, stacky_map) = total_refinement(m, &base)?;
    let report = stacky_map.is_weakly_semistable()?;
    if !report.holds() {
        return Err(Error::Validation(format!(
            "reduced morphism is not weakly semistable: {:?}",
            report.failures
        )));
    }
    if !stacky_map.is_representable()? {
        return Err(Error::Validation("reduced morphism is not representable".into()));
    }
    let n = p.source().ambient();
    let total_modification =
        FanMorphism::new(total.fan().clone(), p.source().clone(), LatticeMap::identity(n))?;
    if !total_modification.is_modification() {
        return Err(Error::Validation("F' is not a modification of F".into()));
    }
    let base_modification = FanMorphism::new(
        base.fan().clone(),
        p.target().clone(),
        LatticeMap::identity(p.target().ambient()),
    )?;
    Ok(ReductionResult {
        base,
        total,
        stacky_map,
        total_modification,
        base_modification,
        labels,
        input_proper: p.is_proper(),
    })
}

/// An object of the category of base changes: an alteration `i: (Γ,Q') -> (G,Q)`,
/// a family `π: (Φ,N') -> (Γ,Q')` and `j: (Φ,N') -> (F,N)` over `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryCObject {
    pub i: FanMorphism,
    pub j: FanMorphism,
    pub pi: FanMorphism,
}

/// Which defining condition an object violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CategoryCondition {
    Alteration,
    FiberProduct,
    Modification,
    WeaklySemistable,
    Commutativity,
    Kernels,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryViolation {
    pub condition: CategoryCondition,
    pub detail: String,
}

/// Checks the defining conditions. With `relaxed`, the alteration and fiber
/// product conditions are replaced by `j(ker π) = ker p`.
pub fn validate_category_object(
    obj: &CategoryCObject,
    p: &FanMorphism,
    relaxed: bool,
) -> Result<std::result::Result<(), CategoryViolation>> {
    let fail = |condition, detail: String| Ok(Err(CategoryViolation { condition, detail }));
    if obj.i.target() != p.target() || obj.j.target() != p.source() {
        return fail(CategoryCondition::Commutativity, "object does not sit over p".into());
    }
    if obj.pi.source() != obj.j.source() || obj.pi.target() != obj.i.source() {
        return fail(CategoryCondition::Commutativity, "π does not join Φ and Γ".into());
    }
    let pj = p.lattice_map().compose(obj.j.lattice_map())?;
    let ipi = obj.i.lattice_map().compose(obj.pi.lattice_map())?;
    if pj != ipi {
        return fail(CategoryCondition::Commutativity, "p ∘ j differs from i ∘ π".into());
    }
    if relaxed {
        let k = kernel_lattice(obj.pi.lattice_map()).image(obj.j.lattice_map())?;
        if k != kernel_lattice(p.lattice_map()) {
            return fail(CategoryCondition::Kernels, "j(ker π) differs from ker p".into());
        }
    } else {
        if !obj.i.is_alteration() {
            return fail(CategoryCondition::Alteration, "i is not an alteration".into());
        }
        let fp = fiber_product_lattice(p.lattice_map(), obj.i.lattice_map())?;
        let joint = LatticeMap::new(
            obj.j.lattice_map().matrix().vstack(obj.pi.lattice_map().matrix()),
        );
        let expected = Sublattice::from_generators(
            p.source().ambient() + obj.i.source().ambient(),
            &fp.basis,
        )?;
        if !joint.is_injective() || image_lattice(&joint) != expected {
            return fail(
                CategoryCondition::FiberProduct,
                "N' is not the fiber product N ×_Q Q'".into(),
            );
        }
    }
    if !obj.j.is_proper() {
        return fail(
            CategoryCondition::Modification,
            "Φ is not a modification of the pull-back of F".into(),
        );
    }
    let report = crate::fan::is_weakly_semistable(&obj.pi)?;
    if let Some(f) = report.failures.first() {
        return fail(
            CategoryCondition::WeaklySemistable,
            format!("π fails at {:?} ({:?})", f.cone, f.condition),
        );
    }
    Ok(Ok(()))
}

/// The maps `(Γ,Q') -> (G',Q,Q_κ)` and `(Φ,N') -> (F',N,N_σ)` through which an
/// object factors, with the cone assignments they force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub base: StackyMorphism,
    pub total: StackyMorphism,
    pub base_assignment: Vec<(Cone, Cone)>,
    pub total_assignment: Vec<(Cone, Cone)>,
    /// Every cone has exactly one candidate target cell.
    pub unique: bool,
}

fn forced(m: &FanMorphism) -> (Vec<(Cone, Cone)>, bool) {
    let mut unique = true;
    let mut out = Vec::new();
    for (i, c) in m.source().cones().iter().enumerate() {
        let image = m.lattice_map().apply(&c.interior_sample());
        let candidates = m
            .target()
            .cones()
            .iter()
            .filter(|k| k.relint_contains(&image))
            .count();
        unique &= candidates == 1;
        out.push((c.clone(), m.target().cones()[m.assignment(i)].clone()));
    }
    (out, unique)
}

pub fn factor_through(obj: &CategoryCObject, red: &ReductionResult) -> Result<Factorization> {
    let base = StackyMorphism::new(
        StackyFan::trivial(obj.i.source()),
        red.base.clone(),
        obj.i.lattice_map().clone(),
    )
    .map_err(|e| {
        Error::Validation(format!(
            "Γ does not factor through (G', Q, Q_κ): {e}; re-check that π is weakly semistable and Φ is a modification"
        ))
    })?;
    let total = StackyMorphism::new(
        StackyFan::trivial(obj.j.source()),
        red.total.clone(),
        obj.j.lattice_map().clone(),
    )
    .map_err(|e| {
        Error::Validation(format!(
            "Φ does not factor through (F', N, N_σ): {e}; re-check the fiber product and modification conditions"
        ))
    })?;
    let (base_assignment, u1) = forced(base.underlying());
    let (total_assignment, u2) = forced(total.underlying());
    Ok(Factorization {
        base,
        total,
        base_assignment,
        total_assignment,
        unique: u1 && u2,
    })
}

/// The fiber product of `(Γ,Q')` with `(F',N,N_σ)` over `(G',Q,Q_κ)`, after
/// subdividing `Γ` to map into `G'`.
pub fn universal_minimal_modification(
    red: &ReductionResult,
    p: &FanMorphism,
    i: &FanMorphism,
) -> Result<CategoryCObject> {
    if !i.is_alteration() || i.target() != p.target() {
        return Err(Error::Precondition("i must be an alteration onto the base of p".into()));
    }
    let (gamma, _) = minimal_modification(i.lattice_map(), i.source(), red.base.fan())?;
    let to_refined = FanMorphism::new(gamma.clone(), red.base.fan().clone(), i.lattice_map().clone())?;
    for (k, g) in gamma.cones().iter().enumerate() {
        let q = &red.base.sublattices()[to_refined.assignment(k)];
        if !g.span_lattice().image(i.lattice_map())?.is_sublattice_of(q) {
            return Err(Error::Precondition(format!(
                "i(Q' ∩ Span {g:?}) is not contained in Q_κ"
            )));
        }
    }
    let fp = fiber_product_lattice(p.lattice_map(), i.lattice_map())?;
    let k = fp.lattice.rank;
    let mut cones = Vec::new();
    for sigma in red.total.fan().maximal_cones() {
        for g in gamma.maximal_cones() {
            cones.push(fiber_cone(&fp, &sigma, &g)?);
        }
    }
    let phi = Fan::new(k, &cones)?;
    for c in phi.cones() {
        let s0 = red.total.fan().cell_of(&fp.proj_n.apply(&c.interior_sample())).expect("F' cone");
        let g0 = gamma.cell_of(&fp.proj_l.apply(&c.interior_sample())).expect("Γ cone");
        let n_sigma = preimage_sublattice(&fp.proj_n, &red.total.sublattices()[s0])?;
        let q_gamma = preimage_sublattice(&fp.proj_l, &gamma.cones()[g0].span_lattice())?;
        let local = intersect_sublattices(&intersect_sublattices(&n_sigma, &q_gamma)?, &c.span_lattice())?;
        if local != c.span_lattice() {
            return Err(Error::Validation(format!(
                "fiber sublattice of {c:?} is a proper sublattice"
            )));
        }
    }
    let obj = CategoryCObject {
        i: FanMorphism::new(gamma.clone(), i.target().clone(), i.lattice_map().clone())?,
        j: FanMorphism::new(phi.clone(), p.source().clone(), fp.proj_n.clone())?,
        pi: FanMorphism::new(phi, gamma, fp.proj_l.clone())?,
    };
    if let Err(v) = validate_category_object(&obj, p, false)? {
        return Err(Error::Validation(format!(
            "fiber product is not an object of the category: {v:?}"
        )));
    }
    Ok(obj)
}
