//! Cone complexes: cones in their own lattices glued along faces, morphisms
//! between them, and the reduction computed star by star.

use std::collections::{BTreeMap, BTreeSet};

use crate::cone::{image_cone, preimage_cone, Cone};
use crate::error::{Error, Result};
use crate::fan::{covered, Fan, FanMorphism, SemistabilityCondition, StackyFan};
use crate::lattice::{intersect_sublattices, preimage_sublattice, LatticeMap, Sublattice};
use crate::matrix::{solve_in_lattice, IVec, IntMatrix};
use crate::monoid::image_monoid_equals_cone_monoid;
use crate::reduction::{refine_by_images, N0Label};

/// Identifies the face `face` of `cells[cell]` with `cells[target]`; `map`
/// goes from the lattice of `target` into the lattice of `cell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub cell: usize,
    pub face: Cone,
    pub target: usize,
    pub map: LatticeMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeComplex {
    cells: Vec<Cone>,
    gluings: Vec<Gluing>,
}

/// The first inconsistency found by [`validate_complex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingViolation {
    pub cell: usize,
    pub face: Option<Cone>,
    pub other: Option<usize>,
    pub detail: String,
}

impl std::fmt::Display for GluingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cell {}", self.cell)?;
        if let Some(face) = &self.face {
            write!(f, ", face {face:?}")?;
        }
        if let Some(o) = self.other {
            write!(f, ", cell {o}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

fn violation(cell: usize, face: Option<&Cone>, other: Option<usize>, detail: &str) -> GluingViolation {
    GluingViolation {
        cell,
        face: face.cloned(),
        other,
        detail: detail.to_string(),
    }
}

pub fn validate_complex(cells: &[Cone], gluings: &[Gluing]) -> std::result::Result<(), GluingViolation> {
    for (i, c) in cells.iter().enumerate() {
        if !c.is_strictly_convex() || !c.is_full_dimensional() {
            return Err(violation(i, None, None, "cell is not a full dimensional strictly convex cone"));
        }
    }
    let mut by_cell: BTreeMap<usize, BTreeMap<Cone, &Gluing>> = BTreeMap::new();
    for g in gluings {
        if g.cell >= cells.len() || g.target >= cells.len() {
            return Err(violation(g.cell, Some(&g.face), Some(g.target), "index out of range"));
        }
        let (outer, inner) = (&cells[g.cell], &cells[g.target]);
        if g.map.domain().rank != inner.ambient() || g.map.codomain().rank != outer.ambient() {
            return Err(violation(g.cell, Some(&g.face), Some(g.target), "map has the wrong shape"));
        }
        if g.face == *outer || !g.face.is_face_of(outer) {
            return Err(violation(g.cell, Some(&g.face), Some(g.target), "not a proper face"));
        }
        if !g.map.is_injective() {
            return Err(violation(g.cell, Some(&g.face), Some(g.target), "map is not injective"));
        }
        let image = Sublattice::full(inner.ambient())
            .image(&g.map)
            .map_err(|e| violation(g.cell, Some(&g.face), Some(g.target), &e.to_string()))?;
        if image != g.face.span_lattice() {
            return Err(violation(
                g.cell,
                Some(&g.face),
                Some(g.target),
                "image is not the saturated span of the face",
            ));
        }
        let glued = image_cone(&g.map, inner)
            .map_err(|e| violation(g.cell, Some(&g.face), Some(g.target), &e.to_string()))?;
        if glued != g.face {
            return Err(violation(g.cell, Some(&g.face), Some(g.target), "cell is not mapped onto the face"));
        }
        if by_cell.entry(g.cell).or_default().insert(g.face.clone(), g).is_some() {
            return Err(violation(g.cell, Some(&g.face), None, "face glued twice"));
        }
    }
    let empty = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        let glued = by_cell.get(&i).unwrap_or(&empty);
        for f in c.proper_faces() {
            if !glued.contains_key(&f) {
                return Err(violation(i, Some(&f), None, "face is not glued"));
            }
        }
        let targets: BTreeSet<usize> = glued.values().map(|g| g.target).collect();
        if targets.len() != glued.len() || targets.contains(&i) {
            return Err(violation(i, None, None, "self intersection"));
        }
        for g in glued.values() {
            for f in g.face.proper_faces() {
                let direct = glued[&f];
                let pulled = preimage_cone(&g.map, &f)
                    .map_err(|e| violation(i, Some(&f), Some(g.target), &e.to_string()))?;
                let inner = by_cell.get(&g.target).and_then(|m| m.get(&pulled));
                let consistent = inner.is_some_and(|h| {
                    h.target == direct.target
                        && g.map.compose(&h.map).is_ok_and(|m| m == direct.map)
                });
                if !consistent {
                    return Err(GluingViolation {
                        cell: i,
                        face: Some(f.clone()),
                        other: Some(g.target),
                        detail: format!(
                            "gluings through cell {} and directly to cell {} disagree",
                            g.target, direct.target
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

impl ConeComplex {
    pub fn new(cells: Vec<Cone>, mut gluings: Vec<Gluing>) -> Result<ConeComplex> {
        validate_complex(&cells, &gluings).map_err(|v| Error::InvalidComplex(v.to_string()))?;
        gluings.sort_by(|a, b| (a.cell, &a.face, a.target).cmp(&(b.cell, &b.face, b.target)));
        Ok(ConeComplex { cells, gluings })
    }

    /// Every cone of `f` as a cell in the saturated lattice of its span, with
    /// the embedding of that lattice into `Z^n`.
    pub fn from_fan(f: &Fan) -> Result<(ConeComplex, Vec<LatticeMap>)> {
        let n = f.ambient();
        let bases: Vec<Vec<IVec>> = f
            .cones()
            .iter()
            .map(|c| c.span_lattice().basis().to_vec())
            .collect();
        let mut cells = Vec::with_capacity(f.len());
        let mut embeddings = Vec::with_capacity(f.len());
        for (c, basis) in f.cones().iter().zip(&bases) {
            let rays = coordinates_all(basis, c.rays())?;
            cells.push(Cone::from_generators(basis.len(), &rays)?);
            embeddings.push(LatticeMap::new(IntMatrix::from_columns(basis, n)?));
        }
        let mut gluings = Vec::new();
        for (i, c) in f.cones().iter().enumerate() {
            for face in c.proper_faces() {
                let j = f.index_of(&face).expect("fans are closed under faces");
                let columns = coordinates_all(&bases[i], &bases[j])?;
                let map = LatticeMap::new(IntMatrix::from_columns(&columns, bases[i].len())?);
                let face = image_cone(&map, &cells[j])?;
                gluings.push(Gluing { cell: i, face, target: j, map });
            }
        }
        Ok((ConeComplex::new(cells, gluings)?, embeddings))
    }

    pub fn cells(&self) -> &[Cone] {
        &self.cells
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn gluings_of(&self, cell: usize) -> impl Iterator<Item = &Gluing> {
        self.gluings.iter().filter(move |g| g.cell == cell)
    }

    /// The embedding of the lattice of `face` into that of `cell`, when `face`
    /// is `cell` or one of its faces.
    pub fn face_embedding(&self, cell: usize, face: usize) -> Option<LatticeMap> {
        if cell == face {
            return Some(LatticeMap::identity(self.cells[cell].ambient()));
        }
        self.gluings_of(cell).find(|g| g.target == face).map(|g| g.map.clone())
    }

    /// Cells that are not a face of another cell.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let faces: BTreeSet<usize> = self.gluings.iter().map(|g| g.target).collect();
        (0..self.cells.len()).filter(|i| !faces.contains(i)).collect()
    }

    /// The cell whose relative interior contains `v ∈ cells[cell]`, with the
    /// embedding of its lattice.
    pub fn home_of(&self, cell: usize, v: &[crate::matrix::Int]) -> Option<(usize, LatticeMap)> {
        if self.cells[cell].relint_contains(v) {
            return Some((cell, LatticeMap::identity(self.cells[cell].ambient())));
        }
        self.gluings_of(cell)
            .find(|g| g.face.relint_contains(v))
            .map(|g| (g.target, g.map.clone()))
    }
}

fn coordinates_all(basis: &[IVec], vs: &[IVec]) -> Result<Vec<IVec>> {
    vs.iter()
        .map(|v| {
            solve_in_lattice(basis, v)
                .ok_or_else(|| Error::Validation(format!("{v:?} is not in the lattice {basis:?}")))
        })
        .collect()
}

fn map_in_bases(f: &LatticeMap, source: &[IVec], target: &[IVec], rows: usize) -> Result<LatticeMap> {
    let images: Vec<IVec> = source.iter().map(|b| f.apply(b)).collect();
    let columns = coordinates_all(target, &images)?;
    Ok(LatticeMap::new(IntMatrix::from_columns(&columns, rows)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMorphism {
    source: ConeComplex,
    target: ConeComplex,
    maps: Vec<LatticeMap>,
    assignment: Vec<usize>,
}

impl ComplexMorphism {
    /// `maps[i]` sends the lattice of source cell `i` to that of target cell
    /// `assignment[i]`, whose relative interior must contain the image of the
    /// relative interior of cell `i`.
    pub fn new(
        source: ConeComplex,
        target: ConeComplex,
        maps: Vec<LatticeMap>,
        assignment: Vec<usize>,
    ) -> Result<ComplexMorphism> {
        let bad = |msg: String| Err(Error::NotAMorphism(msg));
        if maps.len() != source.len() || assignment.len() != source.len() {
            return bad("one map and one target cell per source cell".into());
        }
        for (i, sigma) in source.cells().iter().enumerate() {
            let k = assignment[i];
            if k >= target.len() {
                return bad(format!("cell {i} is assigned to a missing cell"));
            }
            let kappa = &target.cells()[k];
            let f = &maps[i];
            if f.domain().rank != sigma.ambient() || f.codomain().rank != kappa.ambient() {
                return bad(format!("map of cell {i} has the wrong shape"));
            }
            if !kappa.relint_contains(&f.apply(&sigma.interior_sample())) {
                return bad(format!("cell {i} is not mapped into the interior of cell {k}"));
            }
            if !kappa.contains_cone(&image_cone(f, sigma)?) {
                return bad(format!("cell {i} is not mapped into cell {k}"));
            }
        }
        for g in source.gluings() {
            let (outer, inner) = (assignment[g.cell], assignment[g.target]);
            let Some(e) = target.face_embedding(outer, inner) else {
                return bad(format!(
                    "cell {} lies on cell {} but their targets {inner} and {outer} are not nested",
                    g.target, g.cell
                ));
            };
            if maps[g.cell].compose(&g.map)? != e.compose(&maps[g.target])? {
                return bad(format!("maps of cells {} and {} disagree on the gluing", g.cell, g.target));
            }
        }
        Ok(ComplexMorphism {
            source,
            target,
            maps,
            assignment,
        })
    }

    /// The complex morphism of a fan morphism, with the cell embeddings of
    /// source and target.
    pub fn from_fan_morphism(
        p: &FanMorphism,
    ) -> Result<(ComplexMorphism, Vec<LatticeMap>, Vec<LatticeMap>)> {
        let (source, se) = ConeComplex::from_fan(p.source())?;
        let (target, te) = ConeComplex::from_fan(p.target())?;
        let mut maps = Vec::with_capacity(source.len());
        let mut assignment = Vec::with_capacity(source.len());
        for (i, embedding) in se.iter().enumerate() {
            let k = p.assignment(i);
            let kappa = &p.target().cones()[k];
            let composite = p.lattice_map().compose(embedding)?;
            let d = embedding.domain().rank;
            let unit: Vec<IVec> = (0..d).map(|j| unit_vector(d, j)).collect();
            maps.push(map_in_bases(
                &composite,
                &unit,
                kappa.span_lattice().basis(),
                kappa.span_lattice().rank(),
            )?);
            assignment.push(k);
        }
        Ok((ComplexMorphism::new(source, target, maps, assignment)?, se, te))
    }

    pub fn source(&self) -> &ConeComplex {
        &self.source
    }

    pub fn target(&self) -> &ConeComplex {
        &self.target
    }

    pub fn maps(&self) -> &[LatticeMap] {
        &self.maps
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Source cells over `kappa` or one of its faces, with their maps into the
    /// lattice of `kappa`.
    fn star(&self, kappa: usize) -> Result<Vec<(usize, LatticeMap)>> {
        let mut out = Vec::new();
        for (i, f) in self.maps.iter().enumerate() {
            if let Some(e) = self.target.face_embedding(kappa, self.assignment[i]) {
                out.push((i, e.compose(f)?));
            }
        }
        Ok(out)
    }
}

fn unit_vector(n: usize, j: usize) -> IVec {
    (0..n).map(|i| crate::matrix::int(i64::from(i == j))).collect()
}

/// Source cells `σ` with `w ∈ relint p(σ)`, for `w` in target cell `kappa`.
pub fn complex_n0(m: &ComplexMorphism, kappa: usize, w: &[crate::matrix::Int]) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for (i, f) in m.star(kappa)? {
        if image_cone(&f, &m.source().cells()[i])?.relint_contains(w) {
            out.insert(i);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexReduction {
    pub base: ConeComplex,
    /// `Q_κ` in the lattice of each base cell.
    pub base_sublattices: Vec<Sublattice>,
    /// Original target cell and the embedding of the new cell's lattice in it.
    pub base_origin: Vec<(usize, LatticeMap)>,
    pub total: ConeComplex,
    pub total_sublattices: Vec<Sublattice>,
    pub total_origin: Vec<(usize, LatticeMap)>,
    pub map: ComplexMorphism,
    /// Source cells contributing to each base cell.
    pub labels: Vec<BTreeSet<usize>>,
    /// `(base cell, source cell)` pairs whose fibre over an interior point of
    /// the base cell is positive dimensional.
    pub positive_dimensional_lifts: Vec<(usize, usize)>,
}

/// Cells given as cones in the lattice of an original cell, assembled into a
/// complex with their own lattices.
fn assemble(original: &ConeComplex, keys: &[(usize, Cone)]) -> Result<(ConeComplex, Vec<(usize, LatticeMap)>, Vec<Vec<IVec>>)> {
    let index: BTreeMap<&(usize, Cone), usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let bases: Vec<Vec<IVec>> = keys.iter().map(|(_, c)| c.span_lattice().basis().to_vec()).collect();
    let mut cells = Vec::with_capacity(keys.len());
    let mut origin = Vec::with_capacity(keys.len());
    for ((home, c), basis) in keys.iter().zip(&bases) {
        cells.push(Cone::from_generators(basis.len(), &coordinates_all(basis, c.rays())?)?);
        let n = original.cells()[*home].ambient();
        origin.push((*home, LatticeMap::new(IntMatrix::from_columns(basis, n)?)));
    }
    let mut gluings = Vec::new();
    for (i, (home, c)) in keys.iter().enumerate() {
        for f in c.proper_faces() {
            let (h, e) = original
                .home_of(*home, &f.interior_sample())
                .ok_or_else(|| Error::Validation(format!("face {f:?} leaves cell {home}")))?;
            let key = (h, preimage_cone(&e, &f)?);
            let &j = index.get(&key).ok_or_else(|| {
                Error::Validation(format!("face {f:?} of a cell in cell {home} is missing from cell {h}"))
            })?;
            let embedded: Vec<IVec> = bases[j].iter().map(|b| e.apply(b)).collect();
            let columns = coordinates_all(&bases[i], &embedded)?;
            let map = LatticeMap::new(IntMatrix::from_columns(&columns, bases[i].len())?);
            let face = image_cone(&map, &cells[j])?;
            gluings.push(Gluing { cell: i, face, target: j, map });
        }
    }
    Ok((ConeComplex::new(cells, gluings)?, origin, bases))
}

/// Full dimensional cells sharing a home cell must not overlap.
fn check_tiling(original: &ConeComplex, keys: &[(usize, Cone)]) -> Result<()> {
    for (i, (h1, a)) in keys.iter().enumerate() {
        for (h2, b) in &keys[i + 1..] {
            let d = original.cells()[*h1].dim();
            if h1 == h2 && a.dim() == d && b.dim() == d && a.intersect(b)?.dim() == d {
                return Err(Error::Validation(format!(
                    "subdivisions of cell {h1} disagree: {a:?} overlaps {b:?}"
                )));
            }
        }
    }
    Ok(())
}

struct BaseCell {
    q: Sublattice,
    label: BTreeSet<usize>,
    from: usize,
}

pub fn reduce_complex(m: &ComplexMorphism) -> Result<ComplexReduction> {
    let (src, tgt) = (m.source(), m.target());
    let mut base: BTreeMap<(usize, Cone), BaseCell> = BTreeMap::new();
    for k in tgt.maximal_cells() {
        let kappa = &tgt.cells()[k];
        let star = m.star(k)?;
        let images = star
            .iter()
            .map(|(i, f)| image_cone(f, &src.cells()[*i]))
            .collect::<Result<Vec<_>>>()?;
        if !covered(kappa, &images) {
            return Err(Error::Precondition(format!("cell {k} is not covered by images")));
        }
        for (c, label) in refine_by_images(&Fan::of_cone(kappa)?, &images)? {
            if label.is_empty() {
                return Err(Error::Validation(format!("empty label on {c:?} in cell {k}")));
            }
            let mut q = c.span_lattice();
            for &l in &label {
                let (i, f) = &star[l];
                q = intersect_sublattices(&q, &Sublattice::full(src.cells()[*i].ambient()).image(f)?)?;
            }
            let (h, e) = tgt.home_of(k, &c.interior_sample()).expect("cell of the star");
            let key = (h, preimage_cone(&e, &c)?);
            let cell = BaseCell {
                q: preimage_sublattice(&e, &q)?,
                label: label.iter().map(|&l| star[l].0).collect(),
                from: k,
            };
            if let Some(old) = base.get(&key) {
                if old.q != cell.q || old.label != cell.label {
                    return Err(Error::Validation(format!(
                        "stars of cells {} and {k} disagree on {:?} in cell {h}",
                        old.from, key.1
                    )));
                }
            } else {
                base.insert(key, cell);
            }
        }
    }
    let base_keys: Vec<(usize, Cone)> = base.keys().cloned().collect();
    check_tiling(tgt, &base_keys)?;
    let (base_complex, base_origin, base_bases) = assemble(tgt, &base_keys)?;
    let mut base_sublattices = Vec::with_capacity(base_keys.len());
    let mut labels = Vec::with_capacity(base_keys.len());
    for (key, basis) in base_keys.iter().zip(&base_bases) {
        let cell = &base[key];
        let coords = coordinates_all(basis, cell.q.basis())?;
        base_sublattices.push(Sublattice::from_generators(basis.len(), &coords)?);
        labels.push(cell.label.clone());
    }

    let mut total: BTreeMap<(usize, Cone), (Sublattice, usize)> = BTreeMap::new();
    for s in src.maximal_cells() {
        let sigma = &src.cells()[s];
        let k = m.assignment()[s];
        let f = &m.maps()[s];
        let mut over: Vec<(Cone, usize)> = Vec::new();
        for (b, (h, c)) in base_keys.iter().enumerate() {
            if let Some(e) = tgt.face_embedding(k, *h) {
                over.push((image_cone(&e, c)?, b));
            }
        }
        let mut pieces: BTreeSet<Cone> = BTreeSet::new();
        for (c, _) in &over {
            pieces.extend(preimage_cone(f, c)?.intersect(sigma)?.faces());
        }
        for piece in pieces {
            let w = f.apply(&piece.interior_sample());
            let (_, b) = over
                .iter()
                .find(|(c, _)| c.relint_contains(&w))
                .ok_or_else(|| Error::Validation(format!("{piece:?} maps outside the base cells")))?;
            let e = tgt.face_embedding(k, base_keys[*b].0).expect("base cell over k");
            let q = Sublattice::full(e.domain().rank).image(&e)?;
            let q = intersect_sublattices(&q, &base[&base_keys[*b]].q.image(&e)?)?;
            let n = intersect_sublattices(&piece.span_lattice(), &preimage_sublattice(f, &q)?)?;
            let (h, e) = src.home_of(s, &piece.interior_sample()).expect("piece of a cell");
            let key = (h, preimage_cone(&e, &piece)?);
            let value = (preimage_sublattice(&e, &n)?, *b);
            match total.get(&key) {
                Some(old) if *old != value => {
                    return Err(Error::Validation(format!(
                        "lattices on {:?} in cell {h} disagree between stars",
                        key.1
                    )));
                }
                _ => {
                    total.insert(key, value);
                }
            }
        }
    }
    let total_keys: Vec<(usize, Cone)> = total.keys().cloned().collect();
    check_tiling(src, &total_keys)?;
    let (total_complex, total_origin, total_bases) = assemble(src, &total_keys)?;
    let mut total_sublattices = Vec::with_capacity(total_keys.len());
    let mut maps = Vec::with_capacity(total_keys.len());
    let mut assignment = Vec::with_capacity(total_keys.len());
    for (key, basis) in total_keys.iter().zip(&total_bases) {
        let (n, b) = &total[key];
        let coords = coordinates_all(basis, n.basis())?;
        total_sublattices.push(Sublattice::from_generators(basis.len(), &coords)?);
        let f = &m.maps()[key.0];
        if m.assignment()[key.0] != base_keys[*b].0 {
            return Err(Error::Validation(format!(
                "interior of {:?} in cell {} maps into a face of its target",
                key.1, key.0
            )));
        }
        maps.push(map_in_bases(f, basis, &base_bases[*b], base_bases[*b].len())?);
        assignment.push(*b);
    }
    let map = ComplexMorphism::new(total_complex.clone(), base_complex.clone(), maps, assignment)?;
    let mut positive_dimensional_lifts = Vec::new();
    for (b, label) in labels.iter().enumerate() {
        for &s in label {
            let image = image_cone(&m.maps()[s], &src.cells()[s])?;
            if image.dim() < src.cells()[s].dim() {
                positive_dimensional_lifts.push((b, s));
            }
        }
    }
    let red = ComplexReduction {
        base: base_complex,
        base_sublattices,
        base_origin,
        total: total_complex,
        total_sublattices,
        total_origin,
        map,
        labels,
        positive_dimensional_lifts,
    };
    let failures = complex_semistability_failures(
        &red.map,
        &red.total_sublattices,
        &red.base_sublattices,
    )?;
    if let Some((cell, condition)) = failures.first() {
        return Err(Error::Validation(format!(
            "reduced complex morphism fails at cell {cell} ({condition:?})"
        )));
    }
    Ok(red)
}

/// Per-cell weak semistability: each cell maps onto its target cell, and
/// lattice points onto lattice points.
pub fn complex_semistability_failures(
    m: &ComplexMorphism,
    source_sublattices: &[Sublattice],
    target_sublattices: &[Sublattice],
) -> Result<Vec<(usize, SemistabilityCondition)>> {
    let mut out = Vec::new();
    for (i, sigma) in m.source().cells().iter().enumerate() {
        let k = m.assignment()[i];
        let kappa = &m.target().cells()[k];
        let f = &m.maps()[i];
        if image_cone(f, sigma)? != *kappa {
            out.push((i, SemistabilityCondition::ImageNotACone));
        } else if !image_monoid_equals_cone_monoid(
            f,
            sigma,
            kappa,
            &source_sublattices[i],
            &target_sublattices[k],
        )? {
            out.push((i, SemistabilityCondition::MonoidNotSurjective));
        }
    }
    Ok(out)
}

pub fn is_weakly_semistable_complex(m: &ComplexMorphism) -> Result<bool> {
    let full = |c: &ConeComplex| -> Vec<Sublattice> {
        c.cells().iter().map(|x| Sublattice::full(x.ambient())).collect()
    };
    Ok(complex_semistability_failures(m, &full(m.source()), &full(m.target()))?.is_empty())
}

/// A complex reduction of a fan morphism drawn back into the ambient
/// lattices, for comparison with the fan reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realized {
    pub base: StackyFan,
    pub total: StackyFan,
    pub labels: Vec<N0Label>,
}

impl ComplexReduction {
    pub fn realize(
        &self,
        original: &ComplexMorphism,
        source_embeddings: &[LatticeMap],
        target_embeddings: &[LatticeMap],
    ) -> Result<Realized> {
        let draw = |complex: &ConeComplex,
                    subs: &[Sublattice],
                    origin: &[(usize, LatticeMap)],
                    embeddings: &[LatticeMap]|
         -> Result<(Vec<Cone>, BTreeMap<Cone, Sublattice>)> {
            let mut cones = Vec::new();
            let mut given = BTreeMap::new();
            for (i, c) in complex.cells().iter().enumerate() {
                let (h, b) = &origin[i];
                let e = embeddings[*h].compose(b)?;
                let cone = image_cone(&e, c)?;
                given.insert(cone.clone(), subs[i].image(&e)?);
                cones.push(cone);
            }
            Ok((cones, given))
        };
        let n = target_embeddings.first().map_or(0, |e| e.codomain().rank);
        let (cones, given) = draw(&self.base, &self.base_sublattices, &self.base_origin, target_embeddings)?;
        let base = StackyFan::from_map(&Fan::new(n, &cones)?, &given)?;
        let labels = cones
            .iter()
            .zip(&self.labels)
            .map(|(cone, label)| {
                let mut members = label
                    .iter()
                    .map(|&s| image_cone(&source_embeddings[s], &original.source().cells()[s]))
                    .collect::<Result<Vec<Cone>>>()?;
                members.sort();
                Ok(N0Label { cone: cone.clone(), members })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut labels: Vec<N0Label> = labels;
        labels.sort_by(|a, b| a.cone.cmp(&b.cone));
        let n = source_embeddings.first().map_or(0, |e| e.codomain().rank);
        let (cones, given) = draw(&self.total, &self.total_sublattices, &self.total_origin, source_embeddings)?;
        let total = StackyFan::from_map(&Fan::new(n, &cones)?, &given)?;
        Ok(Realized { base, total, labels })
    }
}

#[cfg(test)]
mod tests;
