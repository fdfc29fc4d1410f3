//! Versioned JSON documents. Rationals are `"p/q"` strings, series carry explicit `lo`/`prec`
//! windows, and tensor-valued data is stored sparsely as index tuples.

use std::str::FromStr;
use std::sync::Arc;

use cybe_core::curve::MultiplierLattice;
use cybe_core::equivalence::Equivalence;
use cybe_core::expansion::TensorSeries;
use cybe_core::subalgebra::ComplementSubalgebra;
use cybe_core::{Grid, LieAlgebra, MatSeries, Matrix, RMatrixSeries, Series, Tensor2, VecSeries, Vector, Q};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use num_traits::Zero;
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: &str = "cybe/1";

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema version mismatch: expected {SCHEMA_VERSION}, found {found}")]
    SchemaVersionMismatch { found: String },
    #[error("expected a document of kind {expected}, found {found}")]
    WrongKind { expected: String, found: &'static str },
    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },
    #[error(transparent)]
    Core(#[from] cybe_core::Error),
}

fn invalid(what: &'static str, message: impl Into<String>) -> DocError {
    DocError::Invalid { what, message: message.into() }
}

/// An exact rational written as `"p/q"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(Rational).map_err(de::Error::custom)
    }
}

pub fn parse_rational(text: &str) -> Result<Q, String> {
    let t = text.trim();
    if let Some((_, den)) = t.split_once('/') {
        if den.trim_start_matches('+').chars().all(|c| c == '0') {
            return Err(format!("zero denominator in {text:?}"));
        }
    }
    Q::from_str(t).map_err(|_| format!("not a rational: {text:?}"))
}

fn r(q: &Q) -> Rational {
    Rational(q.clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub lo: i64,
    pub prec: i64,
    /// Coefficients of `z^lo, z^(lo+1), ...`; missing ones below `prec` are zero.
    pub coeffs: Vec<Rational>,
}

/// Sparse series with vector, matrix or tensor coefficients: `[n, i, (j,) c]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseSeriesDoc<T> {
    pub lo: i64,
    pub prec: i64,
    pub terms: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraDoc {
    pub basis: Vec<String>,
    /// `[i, j, k, c]`: `[b_i, b_j]` has coefficient `c` at `b_k`.
    pub structure_constants: Vec<(usize, usize, usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub nx: usize,
    pub ny: usize,
    /// `[m, k, i, j, c]`: coefficient of `x^m y^k b_i ⊗ b_j`.
    pub entries: Vec<(usize, usize, usize, usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RMatrixDoc {
    pub lie: LieAlgebraDoc,
    pub lambda: SeriesDoc,
    pub r0: GridDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraDoc {
    pub lie: LieAlgebraDoc,
    pub depth: usize,
    pub tail_prec: usize,
    /// `[k, i, n, p, c]`: the tail of `b_i z^{-k-1}` has coefficient `c` at `z^n b_p`.
    pub tails: Vec<(usize, usize, usize, usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub max_pole: usize,
    pub generators: Vec<SeriesDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceDoc {
    pub lie: LieAlgebraDoc,
    pub mu: SeriesDoc,
    pub w: SeriesDoc,
    pub phi: SparseSeriesDoc<(i64, usize, usize, Rational)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Fails,
    Undetermined,
    InputError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub command: String,
    pub status: Status,
    pub certified_window: serde_json::Value,
    pub result: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    LieAlgebra(LieAlgebraDoc),
    Rmatrix(RMatrixDoc),
    Subalgebra(SubalgebraDoc),
    Lattice(LatticeDoc),
    Equivalence(EquivalenceDoc),
    Report(ReportDoc),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    schema_version: String,
    kind: String,
    #[serde(borrow)]
    body: &'a RawValue,
}

#[derive(Serialize)]
struct EnvelopeOut<'a> {
    schema_version: &'a str,
    kind: &'a str,
    body: Body<'a>,
}

struct Body<'a>(&'a Document);

impl Serialize for Body<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Document::LieAlgebra(b) => b.serialize(s),
            Document::Rmatrix(b) => b.serialize(s),
            Document::Subalgebra(b) => b.serialize(s),
            Document::Lattice(b) => b.serialize(s),
            Document::Equivalence(b) => b.serialize(s),
            Document::Report(b) => b.serialize(s),
        }
    }
}

fn parse_error(e: serde_json::Error) -> DocError {
    DocError::Parse { line: e.line(), column: e.column(), message: strip_position(&e.to_string()) }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Report a body error at its position in the whole document.
fn body_error(text: &str, body: &str, e: serde_json::Error) -> DocError {
    let offset = body.as_ptr() as usize - text.as_ptr() as usize;
    let before = &text[..offset];
    let start_line = before.matches('\n').count() + 1;
    let start_col = offset - before.rfind('\n').map_or(0, |i| i + 1);
    let (line, column) = if e.line() <= 1 { (start_line, start_col + e.column()) } else { (start_line + e.line() - 1, e.column()) };
    DocError::Parse { line, column, message: strip_position(&e.to_string()) }
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::LieAlgebra(_) => "lie_algebra",
            Document::Rmatrix(_) => "rmatrix",
            Document::Subalgebra(_) => "subalgebra",
            Document::Lattice(_) => "lattice",
            Document::Equivalence(_) => "equivalence",
            Document::Report(_) => "report",
        }
    }

    pub fn parse(text: &str) -> Result<Document, DocError> {
        let env: Envelope = serde_json::from_str(text).map_err(parse_error)?;
        if env.schema_version != SCHEMA_VERSION {
            return Err(DocError::SchemaVersionMismatch { found: env.schema_version });
        }
        let body = env.body.get();
        let err = |e| body_error(text, body, e);
        Ok(match env.kind.as_str() {
            "lie_algebra" => Document::LieAlgebra(serde_json::from_str(body).map_err(err)?),
            "rmatrix" => Document::Rmatrix(serde_json::from_str(body).map_err(err)?),
            "subalgebra" => Document::Subalgebra(serde_json::from_str(body).map_err(err)?),
            "lattice" => Document::Lattice(serde_json::from_str(body).map_err(err)?),
            "equivalence" => Document::Equivalence(serde_json::from_str(body).map_err(err)?),
            "report" => Document::Report(serde_json::from_str(body).map_err(err)?),
            other => return Err(invalid("kind", format!("unknown document kind {other:?}"))),
        })
    }

    fn envelope(&self) -> EnvelopeOut<'_> {
        EnvelopeOut { schema_version: SCHEMA_VERSION, kind: self.kind(), body: Body(self) }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.envelope()).expect("documents serialize")
    }

    /// Indented text with fields in declaration order, arrays of scalars on one line and a
    /// trailing newline.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_value(), 0);
        out.push('\n');
        out
    }
}

fn write_value(out: &mut String, v: &serde_json::Value, indent: usize) {
    use serde_json::Value;
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat(' ').take(2 * n));
    let scalar = |v: &Value| !matches!(v, Value::Array(_) | Value::Object(_));
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

impl SeriesDoc {
    pub fn from_series(s: &Series) -> Self {
        SeriesDoc { lo: s.lo(), prec: s.prec(), coeffs: s.terms().map(|(_, c)| r(c)).collect() }
    }

    pub fn to_series(&self) -> Result<Series, DocError> {
        check_window("series", self.lo, self.prec, self.coeffs.len())?;
        Ok(Series::scalar(self.lo, self.prec, self.coeffs.iter().map(|c| c.0.clone()).collect()))
    }
}

fn check_window(what: &'static str, lo: i64, prec: i64, len: usize) -> Result<(), DocError> {
    if lo > prec {
        return Err(invalid(what, format!("lo {lo} exceeds prec {prec}")));
    }
    if len as i128 > (prec as i128 - lo as i128) {
        return Err(invalid(what, format!("{len} coefficients do not fit in [{lo}, {prec})")));
    }
    if prec - lo > 1 << 20 {
        return Err(invalid(what, "window too large"));
    }
    Ok(())
}

fn tensor_entries(t: &Tensor2) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
    t.nonzeros().into_iter().map(|(i, j, c)| (i, j, r(c)))
}

pub fn tensor_series_doc(s: &TensorSeries) -> SparseSeriesDoc<(i64, usize, usize, Rational)> {
    let terms = s.terms().flat_map(|(n, t)| tensor_entries(t).map(move |(i, j, c)| (n, i, j, c)).collect::<Vec<_>>()).collect();
    SparseSeriesDoc { lo: s.lo(), prec: s.prec(), terms }
}

pub fn mat_series_doc(s: &MatSeries) -> SparseSeriesDoc<(i64, usize, usize, Rational)> {
    let (rows, cols) = s.shape();
    let terms = s
        .terms()
        .flat_map(|(n, m)| {
            (0..rows).flat_map(move |i| (0..cols).map(move |j| (i, j))).filter(|&(i, j)| !m.get(i, j).is_zero()).map(move |(i, j)| (n, i, j, r(m.get(i, j)))).collect::<Vec<_>>()
        })
        .collect();
    SparseSeriesDoc { lo: s.lo(), prec: s.prec(), terms }
}

pub fn mat_series_from_doc(d: usize, doc: &SparseSeriesDoc<(i64, usize, usize, Rational)>) -> Result<MatSeries, DocError> {
    check_window("matrix series", doc.lo, doc.prec, 0)?;
    let mut coeffs = vec![Matrix::zeros((d, d)); (doc.prec - doc.lo) as usize];
    for (n, i, j, c) in &doc.terms {
        if *n < doc.lo || *n >= doc.prec || *i >= d || *j >= d {
            return Err(invalid("matrix series", format!("term ({n}, {i}, {j}) outside the window")));
        }
        coeffs[(n - doc.lo) as usize].set(*i, *j, c.0.clone());
    }
    Ok(MatSeries::new((d, d), doc.lo, doc.prec, coeffs))
}

pub fn lie_doc(lie: &LieAlgebra) -> LieAlgebraDoc {
    let d = lie.dim();
    let mut structure_constants = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let c = lie.structure_constant(i, j, k);
                if !c.is_zero() {
                    structure_constants.push((i, j, k, r(c)));
                }
            }
        }
    }
    LieAlgebraDoc { basis: lie.names().to_vec(), structure_constants }
}

pub fn lie_from_doc(doc: &LieAlgebraDoc) -> Result<Arc<LieAlgebra>, DocError> {
    let d = doc.basis.len();
    if d == 0 {
        return Err(invalid("lie algebra", "empty basis"));
    }
    let mut structure = vec![Q::zero(); d * d * d];
    for (i, j, k, c) in &doc.structure_constants {
        if *i >= d || *j >= d || *k >= d {
            return Err(invalid("lie algebra", format!("index ({i}, {j}, {k}) out of range")));
        }
        structure[(i * d + j) * d + k] = c.0.clone();
    }
    Ok(Arc::new(LieAlgebra::from_structure_constants(d, structure, doc.basis.clone())?))
}

pub fn rmatrix_doc(r: &RMatrixSeries) -> RMatrixDoc {
    let entries = r
        .r0()
        .entries()
        .flat_map(|(m, k, t)| tensor_entries(t).map(move |(i, j, c)| (m, k, i, j, c)).collect::<Vec<_>>())
        .collect();
    RMatrixDoc {
        lie: lie_doc(r.lie()),
        lambda: SeriesDoc::from_series(r.lambda()),
        r0: GridDoc { nx: r.r0().nx(), ny: r.r0().ny(), entries },
    }
}

pub fn rmatrix_from_doc(doc: &RMatrixDoc) -> Result<RMatrixSeries, DocError> {
    let lie = lie_from_doc(&doc.lie)?;
    let d = lie.dim();
    let (nx, ny) = (doc.r0.nx, doc.r0.ny);
    if nx.saturating_mul(ny) > 1 << 16 {
        return Err(invalid("r0", "grid too large"));
    }
    let mut grid: Grid<Tensor2> = Grid::zeros(d, nx, ny);
    for (m, k, i, j, c) in &doc.r0.entries {
        if *m >= nx || *k >= ny || *i >= d || *j >= d {
            return Err(invalid("r0", format!("entry ({m}, {k}, {i}, {j}) out of range")));
        }
        *grid.at_mut(*m, *k).get_mut(*i, *j) = c.0.clone();
    }
    Ok(RMatrixSeries::new(lie, doc.lambda.to_series()?, grid)?)
}

pub fn subalgebra_doc(w: &ComplementSubalgebra) -> SubalgebraDoc {
    let d = w.lie().dim();
    let mut tails = Vec::new();
    for k in 0..w.depth() {
        for i in 0..d {
            for (n, v) in w.tail(k, i).terms() {
                for (p, c) in v.data.iter().enumerate() {
                    if !c.is_zero() {
                        tails.push((k, i, n as usize, p, r(c)));
                    }
                }
            }
        }
    }
    SubalgebraDoc { lie: lie_doc(w.lie()), depth: w.depth(), tail_prec: w.tail_prec(), tails }
}

pub fn subalgebra_from_doc(doc: &SubalgebraDoc) -> Result<ComplementSubalgebra, DocError> {
    let lie = lie_from_doc(&doc.lie)?;
    let d = lie.dim();
    let (depth, prec) = (doc.depth, doc.tail_prec);
    if depth.saturating_mul(prec) > 1 << 16 {
        return Err(invalid("subalgebra", "window too large"));
    }
    let mut coeffs = vec![vec![Vector::zeros(d); prec]; depth * d];
    for (k, i, n, p, c) in &doc.tails {
        if *k >= depth || *i >= d || *n >= prec || *p >= d {
            return Err(invalid("subalgebra", format!("tail entry ({k}, {i}, {n}, {p}) out of range")));
        }
        coeffs[k * d + i][*n].data[*p] = c.0.clone();
    }
    let tails = coeffs.into_iter().map(|c| VecSeries::new(d, 0, prec as i64, c)).collect();
    Ok(ComplementSubalgebra::new(lie, depth, prec, tails)?)
}

/// Lattice documents list generators; multiplier outputs list their echelon basis.
pub fn lattice_doc(o: &MultiplierLattice) -> LatticeDoc {
    let generators = o.basis().iter().filter(|b| b.lo() < 0).map(SeriesDoc::from_series).collect();
    LatticeDoc { max_pole: o.max_pole(), generators }
}

pub fn lattice_from_doc(doc: &LatticeDoc) -> Result<MultiplierLattice, DocError> {
    let gens = doc.generators.iter().map(|g| g.to_series()).collect::<Result<Vec<_>, _>>()?;
    if gens.is_empty() {
        return Err(invalid("lattice", "no generators"));
    }
    Ok(MultiplierLattice::from_generators(&gens, doc.max_pole)?)
}

pub fn equivalence_doc(lie: &LieAlgebra, e: &Equivalence) -> EquivalenceDoc {
    EquivalenceDoc {
        lie: lie_doc(lie),
        mu: SeriesDoc::from_series(e.mu()),
        w: SeriesDoc::from_series(e.w()),
        phi: mat_series_doc(e.phi()),
    }
}

pub fn equivalence_from_doc(doc: &EquivalenceDoc) -> Result<(Arc<LieAlgebra>, Equivalence), DocError> {
    let lie = lie_from_doc(&doc.lie)?;
    let phi = mat_series_from_doc(lie.dim(), &doc.phi)?;
    let e = Equivalence::new(&lie, doc.mu.to_series()?, doc.w.to_series()?, phi)?;
    Ok((lie, e))
}

pub fn tensor_doc(t: &Tensor2) -> Vec<(usize, usize, Rational)> {
    tensor_entries(t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use cybe_core::{q, qf, Coeff};

    fn sl2() -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::sl(2).unwrap())
    }

    #[test]
    fn rationals_round_trip() {
        let x: Rational = serde_json::from_str("\"1/3\"").unwrap();
        assert_eq!(x.0, qf(1, 3));
        assert_eq!(serde_json::to_string(&x).unwrap(), "\"1/3\"");
        assert_eq!(serde_json::to_string(&Rational(q(-2))).unwrap(), "\"-2/1\"");
        assert_eq!(serde_json::from_str::<Rational>("\"4\"").unwrap().0, q(4));
        assert!(serde_json::from_str::<Rational>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<Rational>("\"0.5\"").is_err());
    }

    #[test]
    fn rmatrix_documents_round_trip() {
        let lie = sl2();
        let r = RMatrixSeries::rescaled_yang(lie.clone(), &[q(1), qf(1, 3)], 4, 3).unwrap();
        let r = r.add_constant(&lie.casimir().scale(&qf(1, 2)));
        let text = Document::Rmatrix(rmatrix_doc(&r)).emit();
        let doc = Document::parse(&text).unwrap();
        assert_eq!(doc.emit(), text);
        let Document::Rmatrix(body) = doc else { panic!("kind") };
        assert_eq!(rmatrix_from_doc(&body).unwrap(), r);
    }

    #[test]
    fn sl2_document_passes_lie_checks() {
        let text = Document::LieAlgebra(lie_doc(&sl2())).emit();
        let Document::LieAlgebra(body) = Document::parse(&text).unwrap() else { panic!("kind") };
        let lie = lie_from_doc(&body).unwrap();
        assert_eq!(*lie, *sl2());
        let mut broken = body.clone();
        broken.structure_constants.pop();
        assert!(matches!(lie_from_doc(&broken), Err(DocError::Core(_))));
    }

    #[test]
    fn subalgebra_and_equivalence_round_trip() {
        let lie = sl2();
        let r = cybe_core::fixtures::gauge_twisted_yang(&lie, &lie.basis_vector(0), &[q(0), q(1)], 4, 4).unwrap();
        let w = ComplementSubalgebra::extract(&r).unwrap();
        let text = Document::Subalgebra(subalgebra_doc(&w)).emit();
        let Document::Subalgebra(body) = Document::parse(&text).unwrap() else { panic!("kind") };
        assert_eq!(subalgebra_from_doc(&body).unwrap(), w);

        let phi = lie.exp_ad(&lie.basis_vector(2), 6).unwrap();
        let e = Equivalence::new(&lie, Series::one(6), Series::polynomial(&[q(0), q(1), q(2)], 6), phi).unwrap();
        let text = Document::Equivalence(equivalence_doc(&lie, &e)).emit();
        let Document::Equivalence(body) = Document::parse(&text).unwrap() else { panic!("kind") };
        assert_eq!(equivalence_from_doc(&body).unwrap().1, e);
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let text = Document::Lattice(LatticeDoc { max_pole: 4, generators: vec![] }).emit();
        let extra = text.replacen("\"max_pole\"", "\"colour\": 1,\n    \"max_pole\"", 1);
        match Document::parse(&extra) {
            Err(DocError::Parse { line, message, .. }) => {
                assert_eq!(line, 5);
                assert!(message.contains("unknown field"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let old = text.replace(SCHEMA_VERSION, "cybe/0");
        assert!(matches!(Document::parse(&old), Err(DocError::SchemaVersionMismatch { .. })));
        let top = text.replacen("{", "{\n  \"extra\": true,", 1);
        assert!(matches!(Document::parse(&top), Err(DocError::Parse { line: 2, .. })));
    }
}
