//! JSON documents: `{version, kind, payload}` with canonical emission.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;

use crate::complex::{ComplexMorphism, ComplexReduction, ConeComplex, Gluing};
use crate::cone::Cone;
use crate::error::Error;
use crate::fan::{Fan, FanMorphism, StackyFan, StackyMorphism};
use crate::lattice::{LatticeMap, Sublattice};
use crate::matrix::{IVec, Int, IntMatrix};
use crate::reduction::{N0Label, ReductionResult};

pub const VERSION: &str = "1";

/// Integers above this magnitude are written as decimal strings.
const SAFE: i64 = 1 << 53;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub Int);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= SAFE => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = JsonInt;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse().map(JsonInt).map_err(|_| E::custom(format!("{v:?} is not an integer")))
            }
        }
        d.deserialize_any(Visitor)
    }
}

/// A list of integer rows of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Rows(Vec<Vec<JsonInt>>);

impl std::ops::Deref for Rows {
    type Target = Vec<Vec<JsonInt>>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl<'de> Deserialize<'de> for Rows {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<JsonInt>>::deserialize(d)?;
        if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(de::Error::custom("ragged matrix: rows have different lengths"));
        }
        Ok(Rows(rows))
    }
}

fn rows_of(vs: &[IVec]) -> Rows {
    Rows(vs.iter().map(|v| v.iter().cloned().map(JsonInt).collect()).collect())
}

fn matrix_rows(m: &IntMatrix) -> Rows {
    rows_of(&m.rows_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Fan,
    StackyFan,
    FanMorphism,
    StackyMorphism,
    ConeComplex,
    ComplexMorphism,
    ReductionResult,
    Report,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    #[serde(default)]
    pub details: Vec<String>,
}

/// Outcome of a predicate or a computation without a richer document kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub holds: bool,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Fan { input: FanMorphism, result: ReductionResult },
    Complex { input: ComplexMorphism, result: ComplexReduction },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Fan(Fan),
    StackyFan(StackyFan),
    FanMorphism(FanMorphism),
    StackyMorphism(StackyMorphism),
    ConeComplex(ConeComplex),
    ComplexMorphism(ComplexMorphism),
    ReductionResult(Box<Reduction>),
    Report(Report),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Fan(_) => Kind::Fan,
            Document::StackyFan(_) => Kind::StackyFan,
            Document::FanMorphism(_) => Kind::FanMorphism,
            Document::StackyMorphism(_) => Kind::StackyMorphism,
            Document::ConeComplex(_) => Kind::ConeComplex,
            Document::ComplexMorphism(_) => Kind::ComplexMorphism,
            Document::ReductionResult(_) => Kind::ReductionResult,
            Document::Report(_) => Kind::Report,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}, at {path}: {message}")]
    Schema { line: usize, column: usize, path: String, message: String },
    #[error("at {path}: {source}")]
    Invalid { path: String, source: Error },
}

// ---- payload shapes

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDto {
    rays: Rows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanDto {
    lattice_rank: usize,
    cones: Vec<ConeDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SublatticeDto {
    cone_index: usize,
    basis: Rows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackyFanDto {
    lattice_rank: usize,
    cones: Vec<ConeDto>,
    #[serde(default)]
    sublattices: Vec<SublatticeDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDto<F> {
    matrix: Rows,
    source: F,
    target: F,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDto {
    rank: usize,
    rays: Rows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingDto {
    cell: usize,
    face: Rows,
    target: usize,
    map: Rows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDto {
    cells: Vec<CellDto>,
    gluings: Vec<GluingDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexMorphismDto {
    source: ComplexDto,
    target: ComplexDto,
    maps: Vec<Rows>,
    assignment: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelDto {
    cone: Rows,
    members: Vec<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanReductionDto {
    input: MorphismDto<FanDto>,
    base: StackyFanDto,
    total: StackyFanDto,
    labels: Vec<LabelDto>,
    input_proper: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OriginDto {
    cell: usize,
    embedding: Rows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexReductionDto {
    input: ComplexMorphismDto,
    base: ComplexDto,
    base_sublattices: Vec<Rows>,
    base_origin: Vec<OriginDto>,
    total: ComplexDto,
    total_sublattices: Vec<Rows>,
    total_origin: Vec<OriginDto>,
    map: ComplexMorphismDto,
    labels: Vec<Vec<usize>>,
    positive_dimensional_lifts: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ReductionDto {
    Fan(Box<FanReductionDto>),
    Complex(Box<ComplexReductionDto>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    version: String,
    kind: Kind,
    #[serde(borrow)]
    payload: &'a RawValue,
}

// ---- emission

fn fan_dto(f: &Fan) -> FanDto {
    FanDto {
        lattice_rank: f.ambient(),
        cones: f.cones().iter().map(|c| ConeDto { rays: rows_of(c.rays()) }).collect(),
    }
}

fn stacky_dto(f: &StackyFan) -> StackyFanDto {
    let base = fan_dto(f.fan());
    StackyFanDto {
        lattice_rank: base.lattice_rank,
        cones: base.cones,
        sublattices: f
            .sublattices()
            .iter()
            .enumerate()
            .map(|(i, s)| SublatticeDto { cone_index: i, basis: rows_of(s.basis()) })
            .collect(),
    }
}

fn fan_morphism_dto(m: &FanMorphism) -> MorphismDto<FanDto> {
    MorphismDto {
        matrix: matrix_rows(m.lattice_map().matrix()),
        source: fan_dto(m.source()),
        target: fan_dto(m.target()),
    }
}

fn complex_dto(c: &ConeComplex) -> ComplexDto {
    ComplexDto {
        cells: c
            .cells()
            .iter()
            .map(|x| CellDto { rank: x.ambient(), rays: rows_of(x.rays()) })
            .collect(),
        gluings: c
            .gluings()
            .iter()
            .map(|g| GluingDto {
                cell: g.cell,
                face: rows_of(g.face.rays()),
                target: g.target,
                map: matrix_rows(g.map.matrix()),
            })
            .collect(),
    }
}

fn complex_morphism_dto(m: &ComplexMorphism) -> ComplexMorphismDto {
    ComplexMorphismDto {
        source: complex_dto(m.source()),
        target: complex_dto(m.target()),
        maps: m.maps().iter().map(|f| matrix_rows(f.matrix())).collect(),
        assignment: m.assignment().to_vec(),
    }
}

fn origin_dto(o: &[(usize, LatticeMap)]) -> Vec<OriginDto> {
    o.iter()
        .map(|(cell, e)| OriginDto { cell: *cell, embedding: matrix_rows(e.matrix()) })
        .collect()
}

fn reduction_dto(r: &Reduction) -> ReductionDto {
    match r {
        Reduction::Fan { input, result } => ReductionDto::Fan(Box::new(FanReductionDto {
            input: fan_morphism_dto(input),
            base: stacky_dto(&result.base),
            total: stacky_dto(&result.total),
            labels: result
                .labels
                .iter()
                .map(|l| LabelDto {
                    cone: rows_of(l.cone.rays()),
                    members: l.members.iter().map(|m| rows_of(m.rays())).collect(),
                })
                .collect(),
            input_proper: result.input_proper,
        })),
        Reduction::Complex { input, result } => {
            ReductionDto::Complex(Box::new(ComplexReductionDto {
                input: complex_morphism_dto(input),
                base: complex_dto(&result.base),
                base_sublattices: result.base_sublattices.iter().map(|s| rows_of(s.basis())).collect(),
                base_origin: origin_dto(&result.base_origin),
                total: complex_dto(&result.total),
                total_sublattices: result.total_sublattices.iter().map(|s| rows_of(s.basis())).collect(),
                total_origin: origin_dto(&result.total_origin),
                map: complex_morphism_dto(&result.map),
                labels: result.labels.iter().map(|l| l.iter().copied().collect()).collect(),
                positive_dimensional_lifts: result.positive_dimensional_lifts.clone(),
            }))
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payloads serialize")
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn emit(doc: &Document) -> String {
    let payload = match doc {
        Document::Fan(f) => to_value(&fan_dto(f)),
        Document::StackyFan(f) => to_value(&stacky_dto(f)),
        Document::FanMorphism(m) => to_value(&fan_morphism_dto(m)),
        Document::StackyMorphism(m) => to_value(&MorphismDto {
            matrix: matrix_rows(m.lattice_map().matrix()),
            source: stacky_dto(m.source()),
            target: stacky_dto(m.target()),
        }),
        Document::ConeComplex(c) => to_value(&complex_dto(c)),
        Document::ComplexMorphism(m) => to_value(&complex_morphism_dto(m)),
        Document::ReductionResult(r) => to_value(&reduction_dto(r)),
        Document::Report(r) => to_value(r),
    };
    let mut envelope = serde_json::Map::new();
    envelope.insert("kind".into(), to_value(&doc.kind()));
    envelope.insert("payload".into(), payload);
    envelope.insert("version".into(), Value::String(VERSION.into()));
    let mut text = String::new();
    write_value(&Value::Object(envelope), 0, &mut text);
    text.push('\n');
    text
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Pretty printing that keeps arrays of scalars on one line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// A list of integers for report values.
pub fn int_list(v: &[Int]) -> Value {
    to_value(&v.iter().cloned().map(JsonInt).collect::<Vec<_>>())
}

pub fn int_rows(vs: &[IVec]) -> Value {
    to_value(&rows_of(vs))
}

// ---- parsing

struct Ctx {
    path: String,
}

impl Ctx {
    fn at(&self, field: &str) -> Ctx {
        Ctx { path: format!("{}.{field}", self.path) }
    }

    fn index(&self, i: usize) -> Ctx {
        Ctx { path: format!("{}[{i}]", self.path) }
    }

    fn fail<T>(&self, e: Error) -> Result<T, ParseError> {
        Err(ParseError::Invalid { path: self.path.clone(), source: e })
    }

    fn check<T>(&self, r: crate::Result<T>) -> Result<T, ParseError> {
        r.or_else(|e| self.fail(e))
    }
}

fn vectors(rows: &Rows, n: usize, ctx: &Ctx) -> Result<Vec<IVec>, ParseError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != n {
                return ctx.index(i).fail(Error::Dimension(format!(
                    "row of length {} where {n} entries are expected",
                    r.len()
                )));
            }
            Ok(r.iter().map(|x| x.0.clone()).collect())
        })
        .collect()
}

fn lattice_map(rows: &Rows, domain: usize, codomain: usize, ctx: &Ctx) -> Result<LatticeMap, ParseError> {
    if rows.len() != codomain {
        return ctx.fail(Error::Dimension(format!(
            "{} rows where {codomain} are expected",
            rows.len()
        )));
    }
    let rows = vectors(rows, domain, ctx)?;
    Ok(LatticeMap::new(ctx.check(IntMatrix::from_rows(rows, domain))?))
}

fn cone(rows: &Rows, n: usize, ctx: &Ctx) -> Result<Cone, ParseError> {
    let rays = vectors(rows, n, ctx)?;
    let c = ctx.check(Cone::from_generators(n, &rays))?;
    if !c.is_strictly_convex() {
        return ctx.fail(Error::NotStrictlyConvex(format!("{c:?}")));
    }
    Ok(c)
}

fn fan_cones(n: usize, cones: &[ConeDto], ctx: &Ctx) -> Result<Vec<Cone>, ParseError> {
    let ctx = ctx.at("cones");
    cones
        .iter()
        .enumerate()
        .map(|(i, c)| cone(&c.rays, n, &ctx.index(i).at("rays")))
        .collect()
}

fn fan(d: &FanDto, ctx: &Ctx) -> Result<Fan, ParseError> {
    let cones = fan_cones(d.lattice_rank, &d.cones, ctx)?;
    ctx.check(Fan::new(d.lattice_rank, &cones))
}

fn stacky_fan(d: &StackyFanDto, ctx: &Ctx) -> Result<StackyFan, ParseError> {
    let n = d.lattice_rank;
    let cones = fan_cones(n, &d.cones, ctx)?;
    let f = ctx.check(Fan::new(n, &cones))?;
    let mut given = BTreeMap::new();
    let sctx = ctx.at("sublattices");
    for (i, s) in d.sublattices.iter().enumerate() {
        let c = sctx.index(i);
        let Some(cone) = cones.get(s.cone_index) else {
            return c.at("cone_index").fail(Error::Validation(format!(
                "no cone with index {}",
                s.cone_index
            )));
        };
        let basis = vectors(&s.basis, n, &c.at("basis"))?;
        let sub = c.check(Sublattice::from_generators(n, &basis))?;
        if given.insert(cone.clone(), sub).is_some() {
            return c.fail(Error::Validation("cone given two sublattices".into()));
        }
    }
    ctx.check(StackyFan::from_map(&f, &given))
}

fn fan_morphism(d: &MorphismDto<FanDto>, ctx: &Ctx) -> Result<FanMorphism, ParseError> {
    let source = fan(&d.source, &ctx.at("source"))?;
    let target = fan(&d.target, &ctx.at("target"))?;
    let map = lattice_map(&d.matrix, source.ambient(), target.ambient(), &ctx.at("matrix"))?;
    ctx.check(FanMorphism::new(source, target, map))
}

fn complex(d: &ComplexDto, ctx: &Ctx) -> Result<ConeComplex, ParseError> {
    let cctx = ctx.at("cells");
    let cells = d
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| cone(&c.rays, c.rank, &cctx.index(i).at("rays")))
        .collect::<Result<Vec<_>, _>>()?;
    let gctx = ctx.at("gluings");
    let mut gluings = Vec::with_capacity(d.gluings.len());
    for (i, g) in d.gluings.iter().enumerate() {
        let c = gctx.index(i);
        let (Some(outer), Some(inner)) = (cells.get(g.cell), cells.get(g.target)) else {
            return c.fail(Error::InvalidComplex("cell index out of range".into()));
        };
        gluings.push(Gluing {
            cell: g.cell,
            face: cone(&g.face, outer.ambient(), &c.at("face"))?,
            target: g.target,
            map: lattice_map(&g.map, inner.ambient(), outer.ambient(), &c.at("map"))?,
        });
    }
    ctx.check(ConeComplex::new(cells, gluings))
}

fn complex_morphism(d: &ComplexMorphismDto, ctx: &Ctx) -> Result<ComplexMorphism, ParseError> {
    let source = complex(&d.source, &ctx.at("source"))?;
    let target = complex(&d.target, &ctx.at("target"))?;
    let actx = ctx.at("assignment");
    if d.assignment.len() != source.len() || d.maps.len() != source.len() {
        return actx.fail(Error::Validation("one map and one target per source cell".into()));
    }
    let mctx = ctx.at("maps");
    let mut maps = Vec::with_capacity(d.maps.len());
    for (i, rows) in d.maps.iter().enumerate() {
        let Some(k) = target.cells().get(d.assignment[i]) else {
            return actx.index(i).fail(Error::Validation("no such target cell".into()));
        };
        maps.push(lattice_map(rows, source.cells()[i].ambient(), k.ambient(), &mctx.index(i))?);
    }
    ctx.check(ComplexMorphism::new(source, target, maps, d.assignment.clone()))
}

fn sublattices(rows: &[Rows], c: &ConeComplex, ctx: &Ctx) -> Result<Vec<Sublattice>, ParseError> {
    if rows.len() != c.len() {
        return ctx.fail(Error::Validation("one sublattice per cell".into()));
    }
    rows.iter()
        .zip(c.cells())
        .enumerate()
        .map(|(i, (r, cell))| {
            let n = cell.ambient();
            let v = vectors(r, n, &ctx.index(i))?;
            ctx.index(i).check(Sublattice::from_generators(n, &v))
        })
        .collect()
}

fn origins(
    d: &[OriginDto],
    c: &ConeComplex,
    original: &ConeComplex,
    ctx: &Ctx,
) -> Result<Vec<(usize, LatticeMap)>, ParseError> {
    if d.len() != c.len() {
        return ctx.fail(Error::Validation("one origin per cell".into()));
    }
    d.iter()
        .enumerate()
        .map(|(i, o)| {
            let Some(home) = original.cells().get(o.cell) else {
                return ctx.index(i).fail(Error::Validation("no such cell".into()));
            };
            let e = lattice_map(&o.embedding, c.cells()[i].ambient(), home.ambient(), &ctx.index(i))?;
            Ok((o.cell, e))
        })
        .collect()
}

fn reduction(d: &ReductionDto, ctx: &Ctx) -> Result<Reduction, ParseError> {
    match d {
        ReductionDto::Fan(d) => {
            let input = fan_morphism(&d.input, &ctx.at("input"))?;
            let base = stacky_fan(&d.base, &ctx.at("base"))?;
            let total = stacky_fan(&d.total, &ctx.at("total"))?;
            let n = input.source().ambient();
            let q = input.target().ambient();
            let lctx = ctx.at("labels");
            let mut labels = Vec::with_capacity(d.labels.len());
            for (i, l) in d.labels.iter().enumerate() {
                let c = lctx.index(i);
                let members = l
                    .members
                    .iter()
                    .enumerate()
                    .map(|(j, m)| cone(m, n, &c.at("members").index(j)))
                    .collect::<Result<Vec<_>, _>>()?;
                labels.push(N0Label { cone: cone(&l.cone, q, &c.at("cone"))?, members });
            }
            let stacky_map = ctx.check(StackyMorphism::new(
                total.clone(),
                base.clone(),
                input.lattice_map().clone(),
            ))?;
            let total_modification = ctx.check(FanMorphism::new(
                total.fan().clone(),
                input.source().clone(),
                LatticeMap::identity(n),
            ))?;
            let base_modification = ctx.check(FanMorphism::new(
                base.fan().clone(),
                input.target().clone(),
                LatticeMap::identity(q),
            ))?;
            let result = ReductionResult {
                base,
                total,
                stacky_map,
                total_modification,
                base_modification,
                labels,
                input_proper: d.input_proper,
            };
            Ok(Reduction::Fan { input, result })
        }
        ReductionDto::Complex(d) => {
            let input = complex_morphism(&d.input, &ctx.at("input"))?;
            let map = complex_morphism(&d.map, &ctx.at("map"))?;
            let base = complex(&d.base, &ctx.at("base"))?;
            let total = complex(&d.total, &ctx.at("total"))?;
            if base != *map.target() || total != *map.source() {
                return ctx.at("map").fail(Error::Validation("map does not join total and base".into()));
            }
            let result = ComplexReduction {
                base_sublattices: sublattices(&d.base_sublattices, &base, &ctx.at("base_sublattices"))?,
                base_origin: origins(&d.base_origin, &base, input.target(), &ctx.at("base_origin"))?,
                total_sublattices: sublattices(&d.total_sublattices, &total, &ctx.at("total_sublattices"))?,
                total_origin: origins(&d.total_origin, &total, input.source(), &ctx.at("total_origin"))?,
                base,
                total,
                map,
                labels: d.labels.iter().map(|l| l.iter().copied().collect::<BTreeSet<_>>()).collect(),
                positive_dimensional_lifts: d.positive_dimensional_lifts.clone(),
            };
            Ok(Reduction::Complex { input, result })
        }
    }
}

/// The message of a serde_json error without its trailing position.
fn bare(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn typed<'a, T: Deserialize<'a>>(text: &str, raw: &'a RawValue) -> Result<T, ParseError> {
    let start = raw.get().as_ptr() as usize - text.as_ptr() as usize;
    let mut de = serde_json::Deserializer::from_str(raw.get());
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = format!("payload.{}", e.path());
        let inner = e.into_inner();
        let (l0, c0) = line_column(text, start);
        let (line, column) = if inner.line() <= 1 {
            (l0, c0 + inner.column().saturating_sub(1))
        } else {
            (l0 + inner.line() - 1, inner.column())
        };
        ParseError::Schema { line, column, path, message: bare(&inner) }
    })
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let envelope: Envelope = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            ParseError::Syntax { line: inner.line(), column: inner.column(), message: bare(&inner) }
        } else {
            ParseError::Schema { line: inner.line(), column: inner.column(), path, message: bare(&inner) }
        }
    })?;
    de.end().map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: bare(&e),
    })?;
    if envelope.version != VERSION {
        return Err(ParseError::Invalid {
            path: "version".into(),
            source: Error::Validation(format!("unsupported version {:?}", envelope.version)),
        });
    }
    let ctx = Ctx { path: "payload".into() };
    let raw = envelope.payload;
    Ok(match envelope.kind {
        Kind::Fan => Document::Fan(fan(&typed(text, raw)?, &ctx)?),
        Kind::StackyFan => Document::StackyFan(stacky_fan(&typed(text, raw)?, &ctx)?),
        Kind::FanMorphism => Document::FanMorphism(fan_morphism(&typed(text, raw)?, &ctx)?),
        Kind::StackyMorphism => {
            let d: MorphismDto<StackyFanDto> = typed(text, raw)?;
            let source = stacky_fan(&d.source, &ctx.at("source"))?;
            let target = stacky_fan(&d.target, &ctx.at("target"))?;
            let map = lattice_map(
                &d.matrix,
                source.fan().ambient(),
                target.fan().ambient(),
                &ctx.at("matrix"),
            )?;
            Document::StackyMorphism(ctx.check(StackyMorphism::new(source, target, map))?)
        }
        Kind::ConeComplex => Document::ConeComplex(complex(&typed(text, raw)?, &ctx)?),
        Kind::ComplexMorphism => {
            Document::ComplexMorphism(complex_morphism(&typed(text, raw)?, &ctx)?)
        }
        Kind::ReductionResult => {
            Document::ReductionResult(Box::new(reduction(&typed(text, raw)?, &ctx)?))
        }
        Kind::Report => Document::Report(typed(text, raw)?),
    })
}

/// Parses a bare JSON matrix such as `[[1, 0], [0, 2]]`.
pub fn parse_rows(text: &str) -> Result<Vec<IVec>, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let rows: Rows = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ParseError::Schema { line: inner.line(), column: inner.column(), path, message: bare(&inner) }
    })?;
    let n = rows.first().map_or(0, Vec::len);
    vectors(&rows, n, &Ctx { path: "$".into() })
}
