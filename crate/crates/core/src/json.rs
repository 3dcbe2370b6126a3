//! JSON documents exchanged by the command-line tool.
//!
//! Rationals are strings (`"p/q"` or `"p"`, integers also accepted on input)
//! and matrices are lists of columns. Every document written carries
//! `"schema": 1`; documents read may omit it but must not name another
//! version.
//!
//! ```json
//! {"schema": 1,
//!  "space": {"dim": 4, "norm": "l1"},
//!  "subspace": {"basis": [["1","-1","0","0"], ["1","0","-1","0"], ["1","0","0","-1"]]},
//!  "op": [["1/2","1/2","-1/2"], ["1/2","-1/2","1/2"], ["1/2","-1/2","-1/2"]]}
//! ```

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extend::{ExtensionProblem, ExtensionResult, LowerBoundCertificate, LyapunovInstance, LyapunovReport};
use crate::lp::{Constraint, LinearProgram, LpSolution};
use crate::matrix::{Mat, QVec};
use crate::r3::R3Outcome;
use crate::rational::{format_rational, serde_rational, Rational};
use crate::se::SearchReport;
use crate::spaces::{NormRep, PolyhedralSpace, Subspace};

pub const SCHEMA: u64 = 1;

pub fn check_schema(doc: &Value) -> Result<()> {
    match doc.get("schema") {
        None => Ok(()),
        Some(v) if v.as_u64() == Some(SCHEMA) => Ok(()),
        Some(v) => Err(Error::input(format!("unsupported schema {v}; expected {SCHEMA}"))),
    }
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| Error::input(format!("missing field \"{key}\"")))
}

pub fn mat_to_json(m: &Mat) -> Value {
    serde_json::to_value(m).expect("matrices serialise")
}

pub fn mat_from_json(v: &Value) -> Result<Mat> {
    serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("bad matrix: {e}")))
}

pub fn vec_to_json(x: &[Rational]) -> Value {
    Value::Array(x.iter().map(|v| Value::String(format_rational(v))).collect())
}

pub fn vec_from_json(v: &Value) -> Result<QVec> {
    v.as_array()
        .ok_or_else(|| Error::input("expected a list of rationals"))?
        .iter()
        .map(serde_rational::from_value)
        .collect()
}

/// `"l1:4"`, `"linf:3"`.
pub fn parse_space_label(s: &str) -> Result<PolyhedralSpace> {
    let (kind, dim) = s
        .split_once(':')
        .ok_or_else(|| Error::input(format!("space \"{s}\" should look like l1:4 or linf:3")))?;
    let dim: usize = dim.trim().parse().map_err(|_| Error::input(format!("bad dimension in \"{s}\"")))?;
    if dim == 0 {
        return Err(Error::input("dimension must be positive"));
    }
    match kind.trim().to_ascii_lowercase().as_str() {
        "l1" => Ok(PolyhedralSpace::l1(dim)),
        "linf" => Ok(PolyhedralSpace::linf(dim)),
        other => Err(Error::input(format!("unknown norm \"{other}\"; use l1, linf or a JSON max_abs space"))),
    }
}

pub fn space_to_json(s: &PolyhedralSpace) -> Value {
    let norm = match s.norm_rep() {
        NormRep::L1 => json!("l1"),
        NormRep::Linf => json!("linf"),
        NormRep::MaxAbs(u) => json!({ "max_abs": u.to_rows().iter().map(|r| vec_to_json(r)).collect::<Vec<_>>() }),
    };
    json!({ "dim": s.dim(), "norm": norm })
}

/// Accepts the object form or a label string such as `"l1:4"`.
pub fn space_from_json(v: &Value) -> Result<PolyhedralSpace> {
    if let Some(label) = v.as_str() {
        return parse_space_label(label);
    }
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| Error::input("\"dim\" must be a positive integer"))? as usize;
    let norm = field(v, "norm")?;
    let space = match norm {
        Value::String(s) => parse_space_label(&format!("{s}:{dim}"))?,
        Value::Object(_) => {
            let rows = field(norm, "max_abs")?
                .as_array()
                .ok_or_else(|| Error::input("\"max_abs\" must be a list of rows"))?
                .iter()
                .map(vec_from_json)
                .collect::<Result<Vec<_>>>()?;
            PolyhedralSpace::max_abs(Mat::from_rows(rows)?)?
        }
        _ => return Err(Error::input("\"norm\" must be \"l1\", \"linf\" or {\"max_abs\": rows}")),
    };
    if space.dim() != dim {
        return Err(Error::dims("space dimension", dim, space.dim()));
    }
    Ok(space)
}

/// `{"basis": columns}`, or one of the names `"sum-zero"` and `"full"`, or
/// `{"kernel_of": f}` for the hyperplane `ker f`.
pub fn subspace_from_json(v: &Value, ambient: &PolyhedralSpace) -> Result<Subspace> {
    if let Some(name) = v.as_str() {
        return subspace_by_name(name, ambient);
    }
    if let Some(f) = v.get("kernel_of") {
        return Subspace::kernel_of(ambient.clone(), &vec_from_json(f)?);
    }
    Subspace::new(ambient.clone(), mat_from_json(field(v, "basis")?)?)
}

pub fn subspace_by_name(name: &str, ambient: &PolyhedralSpace) -> Result<Subspace> {
    match name {
        "sum-zero" | "sum_zero" => Subspace::sum_zero(ambient.clone()),
        "full" => Ok(Subspace::full(ambient.clone())),
        other => Err(Error::input(format!("unknown subspace \"{other}\"; use sum-zero, full or a JSON basis"))),
    }
}

pub fn subspace_to_json(y: &Subspace) -> Value {
    json!({ "basis": mat_to_json(y.basis()) })
}

pub fn problem_from_json(doc: &Value) -> Result<ExtensionProblem> {
    check_schema(doc)?;
    let space = space_from_json(field(doc, "space")?)?;
    let y = subspace_from_json(field(doc, "subspace")?, &space)?;
    ExtensionProblem::new(space, y, mat_from_json(field(doc, "op")?)?)
}

pub fn problem_to_json(p: &ExtensionProblem) -> Value {
    json!({
        "schema": SCHEMA,
        "space": space_to_json(p.space()),
        "subspace": subspace_to_json(p.subspace()),
        "op": mat_to_json(p.op()),
    })
}

pub fn certificate_to_json(c: &LowerBoundCertificate) -> Value {
    serde_json::to_value(c).expect("certificates serialise")
}

pub fn certificate_from_json(v: &Value) -> Result<LowerBoundCertificate> {
    serde_json::from_value(v.clone()).map_err(|e| Error::input(format!("bad certificate: {e}")))
}

pub fn result_to_json(r: &ExtensionResult) -> Value {
    json!({
        "schema": SCHEMA,
        "value": format_rational(&r.value),
        "t_norm": format_rational(&r.t_norm),
        "extension": mat_to_json(&r.extension),
        "certificate": certificate_to_json(&r.certificate),
    })
}

pub fn lyapunov_from_json(doc: &Value) -> Result<LyapunovInstance> {
    check_schema(doc)?;
    let norm = space_from_json(field(doc, "norm")?)?;
    LyapunovInstance::new(mat_from_json(field(doc, "W")?)?, mat_from_json(field(doc, "F")?)?, norm)
}

pub fn lyapunov_report_to_json(r: &LyapunovReport, full: &ExtensionResult) -> Value {
    json!({
        "schema": SCHEMA,
        "q": mat_to_json(&r.q),
        "q_norm": format_rational(&r.q_norm),
        "induced_norm": format_rational(&r.induced_norm),
        "decays": r.decays,
        "certificate": certificate_to_json(&full.certificate),
    })
}

pub fn search_report_to_json(r: &SearchReport) -> Value {
    json!({
        "schema": SCHEMA,
        "space": r.space,
        "subspace": { "basis": mat_to_json(&r.subspace_basis) },
        "best_ratio": format_rational(&r.best_ratio),
        "witness": r.witness.as_ref().map(mat_to_json),
        "candidates_evaluated": r.candidates_evaluated,
        "strategy": r.strategy,
        "seed": r.seed,
    })
}

pub fn r3_outcome_to_json(o: &R3Outcome, with_trace: bool) -> Value {
    let mut doc = result_to_json(&o.result);
    doc["case"] = json!(o.case);
    doc["params"] = json!(o.params);
    doc["basis"] = mat_to_json(&o.params.basis());
    if with_trace {
        doc["trace"] = json!(o.trace);
    }
    doc
}

fn optional_bounds(doc: &Value, key: &str, n: usize) -> Result<Vec<Option<Rational>>> {
    let Some(v) = doc.get(key) else {
        return Ok(vec![None; n]);
    };
    let list = v.as_array().ok_or_else(|| Error::input(format!("\"{key}\" must be a list")))?;
    if list.len() != n {
        return Err(Error::dims(key, n, list.len()));
    }
    list.iter().map(|x| if x.is_null() { Ok(None) } else { serde_rational::from_value(x).map(Some) }).collect()
}

/// `{"objective": c, "constraints": [{"coeffs", "relation", "rhs"}],
/// "lower": [..], "upper": [..]}`; `null` bounds and missing bound lists
/// mean free.
pub fn lp_from_json(doc: &Value) -> Result<LinearProgram> {
    check_schema(doc)?;
    let objective = vec_from_json(field(doc, "objective")?)?;
    let n = objective.len();
    let constraints: Vec<Constraint> = match doc.get("constraints") {
        None => Vec::new(),
        Some(c) => serde_json::from_value(c.clone()).map_err(|e| Error::input(format!("bad constraints: {e}")))?,
    };
    let lp = LinearProgram {
        objective,
        constraints,
        lower: optional_bounds(doc, "lower", n)?,
        upper: optional_bounds(doc, "upper", n)?,
    };
    lp.validate()?;
    Ok(lp)
}

pub fn lp_solution_to_json(s: &LpSolution) -> Value {
    let mut doc = serde_json::to_value(s).expect("solutions serialise");
    doc["schema"] = json!(SCHEMA);
    doc
}
