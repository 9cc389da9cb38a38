//! Problem files: JSON descriptions of fixed-point data.
//!
//! ```json
//! {
//!   "version": 1,
//!   "field": "Q",
//!   "theory": "HW",
//!   "truncation": 16,
//!   "components": [
//!     {"id": "p", "kind": "n-fixed", "class": {"1": "<1>"}, "tangent": [[1, "+"]]},
//!     {"id": "q", "kind": "induced:c-", "m": 3}
//!   ]
//! }
//! ```
//!
//! Optional keys: `char_p` (defaults to the field's characteristic),
//! `custom_table` (path, required for theory `custom`), `expected_degree`
//! (Witt literal), and per component `twisted` (bool) and `virtual`
//! (`{"E0": [...], "E1": [...]}`). Unknown keys are rejected and every
//! problem in the file is reported, not just the first.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::bn::{CoeffTheory, DegreeSet};
use crate::engine::{ComponentKind, FixedComponent, LocalizationProblem, VirtualData};
use crate::euler::{CaseType, RepLabel, Sign};
use crate::expr;
use crate::localized::{LocalizedClass, Twist};
use crate::scalar::LocScalar;
use crate::series::DEFAULT_TRUNCATION;
use crate::witt::FieldSpec;

/// One schema violation, located by a JSON path such as
/// `components[2].tangent[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{} schema error(s):\n{}", .0.len(), .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Schema(Vec<SchemaIssue>),
}

/// A parsed problem together with the custom table it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub problem: LocalizationProblem,
    pub custom_table: Option<String>,
}

struct Issues(Vec<SchemaIssue>);

impl Issues {
    fn push(&mut self, path: &str, message: impl Into<String>) {
        self.0.push(SchemaIssue { path: path.to_string(), message: message.into() });
    }

    fn check_keys(&mut self, obj: &Map<String, Value>, path: &str, allowed: &[&str]) {
        for k in obj.keys() {
            if !allowed.contains(&k.as_str()) {
                let at = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                self.push(&at, "unknown key");
            }
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| ProblemError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    let mut issues = Issues(Vec::new());
    let out = read_problem(&v, &mut issues);
    match out {
        Some(p) if issues.0.is_empty() => Ok(p),
        _ => Err(ProblemError::Schema(issues.0)),
    }
}

fn read_problem(v: &Value, issues: &mut Issues) -> Option<ProblemFile> {
    let Some(obj) = v.as_object() else {
        issues.push("$", "top level must be an object");
        return None;
    };
    issues.check_keys(
        obj,
        "",
        &["version", "field", "theory", "truncation", "char_p", "custom_table", "expected_degree", "components"],
    );
    match obj.get("version") {
        Some(Value::Number(n)) if n.as_u64() == Some(1) => {}
        Some(_) => issues.push("version", "only version 1 is supported"),
        None => issues.push("version", "missing"),
    }
    let field = match obj.get("field").map(|f| f.as_str().ok_or("must be a string").and_then(|s| s.parse::<FieldSpec>().map_err(|_| "expected Q, R, F_p or closed"))) {
        Some(Ok(f)) => Some(f),
        Some(Err(m)) => {
            issues.push("field", m);
            None
        }
        None => {
            issues.push("field", "missing");
            None
        }
    };
    let custom_table = match obj.get("custom_table") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            issues.push("custom_table", "must be a string path");
            None
        }
    };
    let theory = match obj.get("theory").and_then(Value::as_str) {
        Some("HW") => Some(CoeffTheory::HW),
        Some("KW") => Some(CoeffTheory::KW),
        Some("custom") => {
            if custom_table.is_none() {
                issues.push("custom_table", "required when theory is \"custom\"");
            }
            let name = custom_table.clone().unwrap_or_default();
            Some(CoeffTheory::Custom { name, degrees: DegreeSet { modulus: 0, residues: vec![0] } })
        }
        Some(other) => {
            issues.push("theory", format!("unknown theory {other:?} (expected HW, KW or custom)"));
            None
        }
        None => {
            issues.push("theory", "missing or not a string");
            None
        }
    };
    if custom_table.is_some() && !matches!(theory, Some(CoeffTheory::Custom { .. }) | None) {
        issues.push("custom_table", "only allowed with theory \"custom\"");
    }
    let truncation = match obj.get("truncation") {
        None => DEFAULT_TRUNCATION,
        Some(t) => match t.as_u64() {
            Some(t) if (1..=4096).contains(&t) => t as usize,
            _ => {
                issues.push("truncation", "must be an integer between 1 and 4096");
                DEFAULT_TRUNCATION
            }
        },
    };
    let char_p = match (obj.get("char_p"), field) {
        (None, f) => f.map_or(0, |f| f.characteristic()),
        (Some(c), f) => match (c.as_u64(), f) {
            (None, _) => {
                issues.push("char_p", "must be a nonnegative integer");
                0
            }
            (Some(p), Some(f)) if f != FieldSpec::QuadraticallyClosed && p != f.characteristic() => {
                issues.push("char_p", format!("field {f} has characteristic {}", f.characteristic()));
                p
            }
            (Some(p), _) => {
                if p == 2 || (p > 0 && FieldSpec::finite_prime(p).is_err()) {
                    issues.push("char_p", "must be 0 or an odd prime");
                }
                p
            }
        },
    };
    let field = field?;
    let expected_degree = match obj.get("expected_degree") {
        None => None,
        Some(Value::String(s)) => match expr::parse_witt(s, field) {
            Ok(w) => Some(w),
            Err(e) => {
                issues.push("expected_degree", e.to_string());
                None
            }
        },
        Some(_) => {
            issues.push("expected_degree", "must be a Witt-class literal string");
            None
        }
    };
    let mut components = Vec::new();
    match obj.get("components").and_then(Value::as_array) {
        Some(list) if !list.is_empty() => {
            let mut seen = BTreeMap::new();
            for (i, c) in list.iter().enumerate() {
                let path = format!("components[{i}]");
                if let Some(comp) = read_component(c, &path, field, issues) {
                    if let Some(j) = seen.insert(comp.id.clone(), i) {
                        issues.push(&join(&path, "id"), format!("duplicate id (also components[{j}])"));
                    }
                    components.push(comp);
                }
            }
        }
        Some(_) => issues.push("components", "needs at least one component"),
        None => issues.push("components", "missing or not a list"),
    }
    Some(ProblemFile {
        problem: LocalizationProblem { field, theory: theory?, components, truncation, char_p, expected_degree },
        custom_table,
    })
}

fn read_component(v: &Value, path: &str, field: FieldSpec, issues: &mut Issues) -> Option<FixedComponent> {
    let Some(obj) = v.as_object() else {
        issues.push(path, "component must be an object");
        return None;
    };
    issues.check_keys(obj, path, &["id", "kind", "m", "class", "twisted", "tangent", "virtual"]);
    let id = match obj.get("id").and_then(Value::as_str) {
        Some(s) if !s.is_empty() => Some(s.to_string()),
        _ => {
            issues.push(&join(path, "id"), "missing or not a nonempty string");
            None
        }
    };
    let m = match obj.get("m") {
        None => None,
        Some(m) => match m.as_u64() {
            Some(m) if m >= 1 && m <= u32::MAX as u64 => Some(m as u32),
            _ => {
                issues.push(&join(path, "m"), "must be a positive integer");
                None
            }
        },
    };
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("n-fixed") => Some(ComponentKind::NFixed),
        Some("free-pair") => Some(ComponentKind::FreePair),
        Some(k) if k.starts_with("induced:") => {
            let case = &k["induced:".len()..];
            match m {
                Some(m) => match CaseType::new(case, m) {
                    Ok(c) => Some(ComponentKind::Induced(c)),
                    Err(e) => {
                        issues.push(&join(path, "kind"), e.to_string());
                        None
                    }
                },
                None => {
                    if !obj.contains_key("m") {
                        issues.push(&join(path, "m"), "required for induced components");
                    }
                    None
                }
            }
        }
        Some(k) => {
            issues.push(&join(path, "kind"), format!("unknown kind {k:?} (expected n-fixed, free-pair or induced:a|b|c+|c-)"));
            None
        }
        None => {
            issues.push(&join(path, "kind"), "missing or not a string");
            None
        }
    };
    if obj.contains_key("m") && matches!(kind, Some(ComponentKind::NFixed | ComponentKind::FreePair)) {
        issues.push(&join(path, "m"), "only induced components take a weight");
    }
    let twisted = match obj.get("twisted") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => {
            issues.push(&join(path, "twisted"), "must be a boolean");
            false
        }
    };
    let class = read_class(obj.get("class"), &join(path, "class"), field, twisted, issues);
    let tangent = match obj.get("tangent") {
        None => Vec::new(),
        Some(t) => read_reps(t, &join(path, "tangent"), true, issues),
    };
    let virtual_data = match obj.get("virtual") {
        None => None,
        Some(Value::Object(o)) => {
            let vp = join(path, "virtual");
            issues.check_keys(o, &vp, &["E0", "E1"]);
            let e0 = o.get("E0").map_or_else(Vec::new, |x| read_reps(x, &join(&vp, "E0"), false, issues));
            let e1 = o.get("E1").map_or_else(Vec::new, |x| read_reps(x, &join(&vp, "E1"), true, issues));
            Some(VirtualData { e0, e1 })
        }
        Some(_) => {
            issues.push(&join(path, "virtual"), "must be an object with keys E0, E1");
            None
        }
    };
    Some(FixedComponent { id: id?, kind: kind?, local_class: class?, tangent_moving: tangent, virtual_data })
}

fn read_class(v: Option<&Value>, path: &str, field: FieldSpec, twisted: bool, issues: &mut Issues) -> Option<LocalizedClass> {
    let tag = Twist::from_parity(twisted);
    let Some(v) = v else {
        return Some(LocalizedClass::zero(field, 1, None).with_tag(tag));
    };
    let Some(obj) = v.as_object() else {
        issues.push(path, "must map exponents to Witt-class literals");
        return None;
    };
    let mut terms = Vec::new();
    let mut ok = true;
    for (k, lit) in obj {
        let at = format!("{path}[{k:?}]");
        let Ok(exp) = k.trim().parse::<i64>() else {
            issues.push(&at, "exponent must be an integer");
            ok = false;
            continue;
        };
        match lit.as_str().map(|s| expr::parse_witt(s, field)) {
            Some(Ok(w)) => terms.push((exp, LocScalar::from_witt(&w, false))),
            Some(Err(e)) => {
                issues.push(&at, e.to_string());
                ok = false;
            }
            None => {
                issues.push(&at, "coefficient must be a string literal");
                ok = false;
            }
        }
    }
    ok.then(|| LocalizedClass::from_terms(field, 1, tag, terms, None))
}

fn read_reps(v: &Value, path: &str, denominator: bool, issues: &mut Issues) -> Vec<RepLabel> {
    let Some(list) = v.as_array() else {
        issues.push(path, "must be a list of [m, \"+\"|\"-\"] pairs");
        return Vec::new();
    };
    let mut out = Vec::new();
    for (i, r) in list.iter().enumerate() {
        let at = format!("{path}[{i}]");
        let pair = r.as_array().filter(|p| p.len() == 2);
        let weight = pair.and_then(|p| p[0].as_u64()).filter(|m| *m <= u32::MAX as u64);
        let sign = pair.and_then(|p| p[1].as_str()).and_then(|s| s.parse::<Sign>().ok());
        match (weight, sign) {
            (Some(m), Some(sign)) => {
                if m == 0 && denominator {
                    issues.push(&at, "rank-one representation in a denominator: its Euler class vanishes");
                }
                out.push(RepLabel { weight: m as u32, sign });
            }
            _ => issues.push(&at, "expected [m, \"+\"] or [m, \"-\"] with m >= 0"),
        }
    }
    out
}

fn reps_value(reps: &[RepLabel]) -> Value {
    Value::Array(reps.iter().map(|r| Value::Array(vec![r.weight.into(), r.sign.to_string().into()])).collect())
}

/// JSON object with keys in sorted order.
pub(crate) fn sorted_object(pairs: Vec<(String, Value)>) -> Value {
    let mut pairs = pairs;
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Value::Object(pairs.into_iter().collect())
}

/// Writes a problem back out; `parse_problem` of the result gives the
/// same problem. Class coefficients must be honest Witt classes.
pub fn serialize_problem(file: &ProblemFile) -> String {
    let p = &file.problem;
    let theory = match &p.theory {
        CoeffTheory::HW => "HW",
        CoeffTheory::KW => "KW",
        CoeffTheory::Custom { .. } => "custom",
    };
    let mut top = vec![
        ("version".to_string(), Value::from(1)),
        ("field".to_string(), Value::from(p.field.to_string())),
        ("theory".to_string(), Value::from(theory)),
        ("truncation".to_string(), Value::from(p.truncation)),
        ("char_p".to_string(), Value::from(p.char_p)),
    ];
    if let Some(t) = &file.custom_table {
        top.push(("custom_table".to_string(), t.clone().into()));
    }
    if let Some(d) = &p.expected_degree {
        top.push(("expected_degree".to_string(), d.to_literal().into()));
    }
    let comps = p
        .components
        .iter()
        .map(|c| {
            let mut o = vec![("id".to_string(), Value::from(c.id.clone()))];
            let kind = match c.kind {
                ComponentKind::NFixed => "n-fixed".to_string(),
                ComponentKind::FreePair => "free-pair".to_string(),
                ComponentKind::Induced(case) => {
                    o.push(("m".to_string(), case.weight().into()));
                    format!("induced:{}", case.name())
                }
            };
            o.push(("kind".to_string(), kind.into()));
            let class: Map<String, Value> = c
                .local_class
                .terms()
                .map(|(i, s)| {
                    let w = s.to_witt().expect("problem classes have integral coefficients");
                    (i.to_string(), Value::from(w.to_literal()))
                })
                .collect();
            o.push(("class".to_string(), Value::Object(class)));
            if c.local_class.tag().is_twisted() {
                o.push(("twisted".to_string(), true.into()));
            }
            o.push(("tangent".to_string(), reps_value(&c.tangent_moving)));
            if let Some(v) = &c.virtual_data {
                let vo = sorted_object(vec![("E0".into(), reps_value(&v.e0)), ("E1".into(), reps_value(&v.e1))]);
                o.push(("virtual".to_string(), vo));
            }
            sorted_object(o)
        })
        .collect();
    top.push(("components".to_string(), Value::Array(comps)));
    let mut s = serde_json::to_string_pretty(&sorted_object(top)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema_paths(text: &str) -> Vec<String> {
        match parse_problem(text) {
            Err(ProblemError::Schema(issues)) => issues.into_iter().map(|i| i.path).collect(),
            other => panic!("expected schema errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let f = parse_problem(r#"{"version":1,"field":"Q","theory":"HW","components":[{"id":"p","kind":"n-fixed","class":{"1":"<1>"},"tangent":[[1,"+"]]}]}"#).unwrap();
        assert_eq!(f.problem.truncation, 16);
        assert_eq!(f.problem.char_p, 0);
        let g = parse_problem(r#"{"version":1,"field":"F_5","theory":"KW","components":[{"id":"p","kind":"free-pair"}]}"#).unwrap();
        assert_eq!(g.problem.char_p, 5);
    }

    #[test]
    fn schema_errors_are_collected() {
        let paths = schema_paths(
            r#"{"version":2,"field":"Q","theory":"HW","bogus":0,"components":[
                {"id":"a","kind":"induced:c-","m":2},
                {"id":"b","kind":"n-fixed","tangent":[[1,"+"]],"virtual":{"E0":[[0,"+"]],"E1":[[0,"+"]]}}]}"#,
        );
        assert_eq!(paths, vec!["bogus", "version", "components[0].kind", "components[1].virtual.E1[0]"]);
        assert_eq!(
            schema_paths(r#"{"version":1,"field":"Q","theory":"HW","components":[{"id":"b","kind":"n-fixed","tangent":[[0,"+"]]}]}"#),
            vec!["components[0].tangent[0]"]
        );
    }

    #[test]
    fn parse_errors_carry_location() {
        match parse_problem("{\n  \"version\": 1,\n  oops\n}") {
            Err(ProblemError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let text = r#"{"version":1,"field":"Q","theory":"HW","expected_degree":"<1>","components":[
            {"id":"p","kind":"n-fixed","class":{"0":"<2,-1>","-1":"3"},"twisted":true,"tangent":[[2,"+"]]},
            {"id":"q","kind":"induced:b","m":4},
            {"id":"r","kind":"free-pair","virtual":{"E0":[[3,"+"]],"E1":[[1,"-"]]}}]}"#;
        let f = parse_problem(text).unwrap();
        let s = serialize_problem(&f);
        assert_eq!(parse_problem(&s).unwrap(), f);
        assert_eq!(serialize_problem(&parse_problem(&s).unwrap()), s);
    }
}
