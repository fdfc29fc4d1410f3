//! One function per CLI command. Each parses its input documents, delegates to one library
//! operation and returns an [`Outcome`] that becomes a report document.

use std::sync::Arc;

use cybe_core::curve::{classify_lattice, classify_rmatrix, multipliers, subalgebra_index, ClassifyOptions, CubicKind, LatticeIndex, MultiplierLattice, OrderStatus};
use cybe_core::equivalence::{apply_equivalence, difference_normalize, normalize};
use cybe_core::subalgebra::{cobracket_check, ComplementSubalgebra};
use cybe_core::ybe::{is_generalized_rmatrix, is_rmatrix};
use cybe_core::{Error, RMatrixSeries, Q};
use serde_json::{json, Value};

use crate::document::*;

pub struct Outcome {
    pub status: Status,
    pub window: Value,
    pub result: Value,
    pub witness: Option<Value>,
    pub message: Option<String>,
    /// Document produced by a transforming command.
    pub output: Option<Document>,
}

impl Outcome {
    fn new(status: Status, window: Value, result: Value) -> Self {
        Outcome { status, window, result, witness: None, message: None, output: None }
    }

    fn verdict(ok: bool, window: Value, result: Value) -> Self {
        Self::new(if ok { Status::Verified } else { Status::Fails }, window, result)
    }

    fn with_witness(mut self, w: Option<Value>) -> Self {
        self.witness = w;
        self
    }

    fn with_output(mut self, d: Document) -> Self {
        self.result["document"] = d.to_value();
        self.output = Some(d);
        self
    }

    pub fn from_error(e: &DocError) -> Self {
        let status = match e {
            DocError::Core(Error::WindowTooNarrow { .. }) => Status::Undetermined,
            _ => Status::InputError,
        };
        let window = match e {
            DocError::Core(Error::WindowTooNarrow { deficit, .. }) => json!({ "missing": deficit.0 }),
            _ => Value::Null,
        };
        Outcome { status, window, result: Value::Null, witness: None, message: Some(e.to_string()), output: None }
    }

    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Verified => 0,
            Status::Fails => 1,
            Status::Undetermined => 2,
            Status::InputError => 3,
        }
    }

    pub fn report(&self, command: &str) -> Document {
        Document::Report(ReportDoc {
            command: command.to_string(),
            status: self.status,
            certified_window: self.window.clone(),
            result: self.result.clone(),
            witness: self.witness.clone(),
            message: self.message.clone(),
        })
    }
}

type Res<T> = Result<T, DocError>;

fn q(x: &Q) -> Value {
    serde_json::to_value(Rational(x.clone())).expect("rationals serialize")
}

fn opt_q(x: &Option<Q>) -> Value {
    x.as_ref().map_or(Value::Null, q)
}

fn wrong_kind(expected: &str, d: &Document) -> DocError {
    DocError::WrongKind { expected: expected.to_string(), found: d.kind() }
}

pub fn rmatrix(d: &Document) -> Res<RMatrixSeries> {
    match d {
        Document::Rmatrix(b) => rmatrix_from_doc(b),
        other => Err(wrong_kind("rmatrix", other)),
    }
}

fn subalgebra(d: &Document) -> Res<ComplementSubalgebra> {
    match d {
        Document::Subalgebra(b) => subalgebra_from_doc(b),
        Document::Rmatrix(b) => Ok(ComplementSubalgebra::extract(&rmatrix_from_doc(b)?)?),
        other => Err(wrong_kind("subalgebra or rmatrix", other)),
    }
}

fn caps(r: &RMatrixSeries) -> Value {
    json!({ "nx": r.nx(), "ny": r.ny(), "lambda_prec": r.lambda().prec() })
}

fn index_value(i: &LatticeIndex) -> Value {
    json!({ "h0": i.h0, "h1": i.h1, "stale": i.stale })
}

#[derive(Clone, Copy, Debug)]
pub enum Equation {
    Generalized,
    Classical,
}

pub fn verify(d: &Document, equation: Equation, order: Option<usize>, kx: usize) -> Res<Outcome> {
    let r = rmatrix(d)?;
    let n = order.unwrap_or_else(|| r.max_ybe_order());
    let (name, rep) = match equation {
        Equation::Generalized => ("gcybe", is_generalized_rmatrix(&r, n, kx)?),
        Equation::Classical => ("cybe", is_rmatrix(&r, n, kx)?),
    };
    let witness = rep.first_nonzero.map(|(a, b, c)| {
        let entries: Vec<Value> = rep.witness.as_ref().map_or(vec![], |t| t.nonzeros().iter().map(|(i, j, k, v)| json!([i, j, k, q(v)])).collect());
        json!({ "exponents": [a, b, c], "entries": entries })
    });
    let result = json!({
        "equation": name,
        "holds": rep.holds,
        "laurent_cancelled": rep.laurent_cancelled,
        "first_nonzero": rep.first_nonzero.map(|(a, b, c)| json!([a, b, c])),
    });
    let window = json!({ "order": rep.order, "pole_window": rep.pole_window });
    Ok(Outcome::verdict(rep.holds, window, result).with_witness(witness))
}

pub fn skew_check(d: &Document) -> Res<Outcome> {
    let r = rmatrix(d)?;
    let rep = r.is_skew();
    let bar = r.bar();
    let witness = rep.first_difference.map(|(m, k)| {
        json!({
            "m": m,
            "k": k,
            "r0": tensor_doc(r.r0().at(m, k)),
            "bar": tensor_doc(bar.r0().at(m, k)),
        })
    });
    let window = json!({ "nx": rep.window.0, "ny": rep.window.1 });
    Ok(Outcome::verdict(rep.skew, window, json!({ "skew": rep.skew })).with_witness(witness))
}

pub fn extract(d: &Document) -> Res<Outcome> {
    let w = ComplementSubalgebra::extract(&rmatrix(d)?)?;
    let window = json!({ "depth": w.depth(), "tail_prec": w.tail_prec() });
    Ok(Outcome::new(Status::Verified, window, json!({})).with_output(Document::Subalgebra(subalgebra_doc(&w))))
}

pub fn reconstruct(d: &Document) -> Res<Outcome> {
    let w = match d {
        Document::Subalgebra(b) => subalgebra_from_doc(b)?,
        other => return Err(wrong_kind("subalgebra", other)),
    };
    let r = w.reconstruct();
    Ok(Outcome::new(Status::Verified, caps(&r), json!({})).with_output(Document::Rmatrix(rmatrix_doc(&r))))
}

pub fn normalize_cmd(d: &Document) -> Res<Outcome> {
    let r = rmatrix(d)?;
    let (n, e) = normalize(&r)?;
    let result = json!({
        "normalized": n.is_normalized(),
        "equivalence": Document::Equivalence(equivalence_doc(n.lie(), &e)).to_value(),
    });
    Ok(Outcome::new(Status::Verified, caps(&n), result).with_output(Document::Rmatrix(rmatrix_doc(&n))))
}

pub fn equiv_apply(d: &Document, e: &Document) -> Res<Outcome> {
    let r = rmatrix(d)?;
    let (lie, e) = match e {
        Document::Equivalence(b) => equivalence_from_doc(b)?,
        other => return Err(wrong_kind("equivalence", other)),
    };
    if *lie != **r.lie() {
        return Err(DocError::Invalid { what: "equivalence", message: "Lie algebra differs from the r-matrix's".into() });
    }
    let out = apply_equivalence(&r, &e)?;
    Ok(Outcome::new(Status::Verified, caps(&out), json!({})).with_output(Document::Rmatrix(rmatrix_doc(&out))))
}

pub fn diff_normalize(d: &Document) -> Res<Outcome> {
    let r = rmatrix(d)?;
    let form = difference_normalize(&r)?;
    let ok = form.matches && form.derivative_closure.member;
    let result = json!({
        "matches": form.matches,
        "s": serde_json::to_value(tensor_series_doc(&form.s)).expect("series serialize"),
        "phi": serde_json::to_value(mat_series_doc(&form.phi)).expect("series serialize"),
        "derivative_closure": {
            "member": form.derivative_closure.member,
            "window": form.derivative_closure.window,
            "first_residual": form.derivative_closure.first_residual,
        },
    });
    let witness = form.first_mismatch.map(|(a, b)| json!({ "a": a, "b": b }));
    let out = Outcome::verdict(ok, json!({ "order": form.order }), result).with_witness(witness);
    Ok(out.with_output(Document::Rmatrix(rmatrix_doc(&form.r_tilde))))
}

pub fn cobracket(d: &Document, depth: usize) -> Res<Outcome> {
    let r = rmatrix(d)?;
    let rep = cobracket_check(&r, depth)?;
    let result = json!({ "membership": rep.membership, "cocycle": rep.cocycle, "dual_bracket": rep.dual_bracket });
    let witness = rep.first_failure.clone().map(Value::String);
    Ok(Outcome::verdict(rep.passes(), json!({ "depth": rep.depth }), result).with_witness(witness))
}

fn status_value(s: &OrderStatus) -> Value {
    match s {
        OrderStatus::Found => json!("found"),
        OrderStatus::Absent => json!("absent"),
        OrderStatus::Underdetermined { free } => json!({ "underdetermined": free }),
    }
}

fn lattice_summary(o: &MultiplierLattice) -> Value {
    let c = o.closure();
    json!({
        "orders": o.orders(),
        "statuses": o.statuses().iter().map(|(n, s)| json!([n, status_value(s)])).collect::<Vec<_>>(),
        "index": index_value(&o.index()),
        "closure": {
            "closed": c.closed,
            "checked_products": c.checked_products,
            "unverified_products": c.unverified_products,
            "witness": c.witness.map(|(n, m)| json!([n, m])),
        },
    })
}

pub fn multipliers_cmd(d: &Document, max_pole: usize) -> Res<Outcome> {
    let w = subalgebra(d)?;
    let o = multipliers(&w, max_pole)?;
    let undecided = o.statuses().iter().any(|(_, s)| matches!(s, OrderStatus::Underdetermined { .. }));
    let status = if !o.closure().closed {
        Status::Fails
    } else if undecided {
        Status::Undetermined
    } else {
        Status::Verified
    };
    let window = json!({ "max_pole": max_pole, "prec": o.prec() });
    Ok(Outcome::new(status, window, lattice_summary(&o)).with_output(Document::Lattice(lattice_doc(&o))))
}

pub fn classify(d: &Document, window: usize, max_pole: usize) -> Res<Outcome> {
    let (class, extra) = match d {
        Document::Lattice(b) => {
            let o = lattice_from_doc(b)?;
            (classify_lattice(&o, window), lattice_summary(&o))
        }
        other => {
            let r = rmatrix(other)?;
            let c = classify_rmatrix(&r, ClassifyOptions { max_pole, window })?;
            let extra = json!({
                "branch": format!("{:?}", c.branch),
                "skew": c.skew,
                "multiplier_orders": c.multiplier_orders,
                "index": index_value(&c.index),
                "closed": c.closure.closed,
            });
            (c.class, extra)
        }
    };
    let result = json!({
        "kind": class.kind.name(),
        "a": opt_q(&class.a),
        "b": opt_q(&class.b),
        "discriminant": opt_q(&class.discriminant),
        "note": class.note,
        "details": extra,
    });
    let status = if class.kind == CubicKind::Undetermined { Status::Undetermined } else { Status::Verified };
    let certified = class.certified.map(|c| json!([-6, c]));
    Ok(Outcome::new(status, json!({ "window": window, "certified": certified }), result))
}

pub fn lattice_index(d: &Document) -> Res<Outcome> {
    let (idx, window) = match d {
        Document::Lattice(b) => {
            let o = lattice_from_doc(b)?;
            (o.index(), json!({ "max_pole": o.max_pole(), "prec": o.prec() }))
        }
        other => {
            let w = subalgebra(other)?;
            (subalgebra_index(&w), json!({ "depth": w.depth(), "tail_prec": w.tail_prec() }))
        }
    };
    let status = if idx.stale { Status::Undetermined } else { Status::Verified };
    Ok(Outcome::new(status, window, index_value(&idx)))
}

pub fn lie_algebra(name: &str) -> Res<Arc<cybe_core::LieAlgebra>> {
    let bad = || DocError::Invalid { what: "algebra", message: format!("expected sl<n> or so<n>, got {name:?}") };
    let (family, n) = name.split_at(name.len().min(2));
    let n: usize = n.parse().map_err(|_| bad())?;
    let lie = match family {
        "sl" => cybe_core::LieAlgebra::sl(n)?,
        "so" => cybe_core::LieAlgebra::so(n)?,
        _ => return Err(bad()),
    };
    Ok(Arc::new(lie))
}

pub fn rationals(text: &str) -> Res<Vec<Q>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_rational(s).map_err(|m| DocError::Invalid { what: "rational list", message: m }))
        .collect()
}
