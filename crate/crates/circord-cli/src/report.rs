//! Report assembly: JSON objects with sorted keys and CSV rotation tables.
//! Identical inputs produce identical bytes; wall-clock timings only enter
//! when explicitly requested.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use circord::descriptor::element_to_value;
use circord::groups::Element;
use circord::orders::ValidationReport;
use circord::semiconj::{RotationResult, RotationValue, Verdict, Witness};

pub const SCHEMA_VERSION: &str = "1.0.0";

/// The envelope every report shares: schema version, the subcommand, and
/// the seed that determined all sampling.
pub fn envelope(command: &str, seed: u64, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(seed));
    for (k, v) in body {
        m.insert(k, v);
    }
    Value::Object(m)
}

pub fn rational_value(r: &BigRational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
    })
}

pub fn rotation_value(v: &RotationValue) -> Value {
    match v {
        RotationValue::Exact(r) => json!({"kind": "exact", "value": rational_value(r)}),
        RotationValue::Certified { center, radius } => json!({
            "kind": "certified",
            "center": rational_value(center),
            "radius": rational_value(radius),
        }),
    }
}

pub fn witness_value(w: &Witness) -> Value {
    json!({
        "quantity": w.quantity,
        "elements": w.elements.iter().map(element_to_value).collect::<Vec<_>>(),
        "left": rotation_value(&w.left),
        "right": rotation_value(&w.right),
    })
}

pub fn verdict_value(v: &Verdict) -> Value {
    match v {
        Verdict::CertifiedEqual => json!({"verdict": "certified_equal"}),
        Verdict::Refuted(w) => json!({"verdict": "refuted", "witness": witness_value(w)}),
        Verdict::Inconclusive { closest_separation } => json!({
            "verdict": "inconclusive",
            "closest_separation": rational_value(closest_separation),
        }),
    }
}

/// The exit code of a verdict: equality 0, refutation 1, open 2.
pub fn verdict_exit(v: &Verdict) -> i32 {
    match v {
        Verdict::CertifiedEqual => 0,
        Verdict::Refuted(_) => 1,
        Verdict::Inconclusive { .. } => 2,
    }
}

pub fn validation_value(r: &ValidationReport) -> Value {
    json!({
        "passed": r.passed(),
        "radius": r.radius,
        "exhaustive": r.exhaustive,
        "checked_triples": r.checked_triples,
        "checked_quadruples": r.checked_quadruples,
        "checked_translations": r.checked_translations,
        "violation_count": r.violation_count,
        "violations": r.violations.iter().map(|v| json!({
            "axiom": v.axiom.label(),
            "witness": v.witness.iter().map(element_to_value).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn rotation_row_value(element: &Element, r: &RotationResult) -> Value {
    json!({
        "element": element_to_value(element),
        "path": r.path.label(),
        "value": rotation_value(&r.value),
    })
}

/// One CSV line per rotation result, preceded by a schema comment and the
/// column header.
pub fn rotation_csv(rows: &[(Element, RotationResult)]) -> String {
    let mut out = format!("# schema_version={SCHEMA_VERSION}\n");
    out.push_str("element,path,value_num,value_den,radius_num,radius_den\n");
    for (element, r) in rows {
        let center = r.value.center();
        let radius = r.value.radius();
        let coords = serde_json::to_string(&element_to_value(element))
            .expect("serializable element")
            .replace('"', "\"\"");
        out.push_str(&format!(
            "\"{}\",{},{},{},{},{}\n",
            coords,
            r.path.label(),
            center.numer(),
            center.denom(),
            radius.numer(),
            radius.denom(),
        ));
    }
    out
}
