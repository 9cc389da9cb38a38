//! Deterministic JSON reports.
//!
//! Object keys are sorted, except inside Laurent-series maps, whose
//! exponents appear in ascending numeric order. Rationals print as `a/b`
//! and Witt classes as canonical literals `<a1,...,an>`.

use serde_json::Value;

use crate::engine::{degree, Assembly, EngineError, LocalizationProblem};
use crate::euler::{EulerEntry, EulerTable, RepLabel};
use crate::localized::LocalizedClass;
use crate::problem::sorted_object;
use crate::scalar::LocScalar;
use crate::witt::WittClass;

/// A scalar as text: the Witt literal when it has no denominators,
/// otherwise `a/b` plus any torsion literal.
pub fn scalar_text(s: &LocScalar) -> String {
    match s.to_witt() {
        Some(w) => w.to_literal(),
        None => s.to_string(),
    }
}

/// `{"precision": p | null, "tag": ..., "terms": {exp: coeff}}`.
pub fn class_value(x: &LocalizedClass) -> Value {
    let terms: serde_json::Map<String, Value> =
        x.terms().map(|(i, c)| (i.to_string(), Value::from(scalar_text(c)))).collect();
    sorted_object(vec![
        ("precision".into(), x.precision().map_or(Value::Null, Value::from)),
        ("tag".into(), x.tag().to_string().into()),
        ("terms".into(), Value::Object(terms)),
    ])
}

/// JSON object with keys in sorted order.
pub fn sorted(pairs: Vec<(String, Value)>) -> Value {
    sorted_object(pairs)
}

pub fn witt_value(w: &WittClass) -> Value {
    Value::from(w.to_literal())
}

pub fn entry_value(rep: RepLabel, entry: &EulerEntry) -> Value {
    sorted_object(vec![
        ("rep".into(), rep.to_string().into()),
        ("tag".into(), entry.tag().to_string().into()),
        ("value".into(), entry.to_string().into()),
    ])
}

pub fn table_value(table: &EulerTable) -> Value {
    sorted_object(vec![
        ("etilde_square".into(), table.etilde_square().to_string().into()),
        ("sign_flip".into(), table.sign_flip().into()),
        ("theory".into(), table.theory().to_string().into()),
    ])
}

/// Outcome of the degree extraction, for the report.
pub struct DegreeOutcome {
    pub value: Value,
    pub diagnostic: Value,
    pub error: Option<EngineError>,
}

pub fn degree_outcome(total: &LocalizedClass) -> DegreeOutcome {
    match degree(total) {
        Ok(d) => DegreeOutcome { value: scalar_text(&d).into(), diagnostic: Value::Null, error: None },
        Err(e) => DegreeOutcome { value: Value::Null, diagnostic: e.to_string().into(), error: Some(e) },
    }
}

/// Full report of a localization run.
pub fn localize_report(
    problem: &LocalizationProblem,
    table: &EulerTable,
    extra_invert: u64,
    assembly: &Assembly,
) -> (Value, Option<EngineError>) {
    let outcome = degree_outcome(&assembly.total);
    let inputs = sorted_object(vec![
        ("char_p".into(), problem.char_p.into()),
        ("components".into(), problem.components.len().into()),
        ("field".into(), problem.field.to_string().into()),
        ("invert".into(), extra_invert.into()),
        ("table".into(), table_value(table)),
        ("truncation".into(), problem.truncation.into()),
    ]);
    let contributions: Vec<Value> = assembly
        .contributions
        .iter()
        .map(|(id, x)| sorted_object(vec![("class".into(), class_value(x)), ("id".into(), id.clone().into())]))
        .collect();
    let matches = match (&problem.expected_degree, outcome.error.is_none()) {
        (Some(exp), true) => {
            // Compare in W(k)[1/M], where e.g. torsion dies once 2 is inverted.
            let d = degree(&assembly.total).expect("checked above");
            Value::from(d == LocScalar::from_witt(exp, d.two_inverted()))
        }
        _ => Value::Null,
    };
    let report = sorted_object(vec![
        ("assembled".into(), class_value(&assembly.total)),
        ("command".into(), "localize".into()),
        ("contributions".into(), Value::Array(contributions)),
        ("degree".into(), outcome.value),
        ("diagnostic".into(), outcome.diagnostic),
        ("expected_degree".into(), problem.expected_degree.as_ref().map_or(Value::Null, witt_value)),
        ("inputs".into(), inputs),
        ("matches_expected".into(), matches),
        ("modulus".into(), assembly.modulus.into()),
    ]);
    (report, outcome.error)
}

/// Pretty-printed report text with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
