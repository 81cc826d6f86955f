use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::Element;
use crate::differential::{ChainMapReport, DSquaredReport, StructureReport};
use crate::index::AlgebraSignature;
use crate::io::InputFile;
use crate::theorem::{Classification, PrimitiveCertificate, SearchOutcome, SEMIDECISION_CAVEAT};

/// A machine-readable command report. Keys are sorted and nothing depends
/// on the clock, so identical inputs give identical bytes.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    body: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, inputs: &[InputFile]) -> Self {
        let mut body = Map::new();
        body.insert("command".into(), json!(command));
        let inputs: Vec<Value> = inputs
            .iter()
            .map(|f| json!({"path": f.path.display().to_string(), "sha256": f.sha256}))
            .collect();
        body.insert("inputs".into(), Value::Array(inputs));
        Report { body }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.body.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.body.get(key)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.body).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn element(e: &Element, sig: &AlgebraSignature) -> Value {
    json!(e.display(sig).to_string())
}

pub fn certificate(cert: &PrimitiveCertificate) -> Value {
    let qualifier = if cert.is_exact() {
        "exact".to_string()
    } else {
        format!("verified to weight {}", cert.verified_to_weight)
    };
    json!({
        "flavor": cert.flavor,
        "element": element(&cert.element, cert.spec.sig()),
        "verifiedToWeight": cert.verified_to_weight,
        "verification": qualifier,
        "policy": cert.policy,
    })
}

pub fn search(outcome: &SearchOutcome) -> Value {
    match outcome {
        SearchOutcome::Found(cert) => json!({"found": true, "certificate": certificate(cert)}),
        SearchOutcome::NotFound { basis_size, reason } => json!({
            "found": false,
            "basisSize": basis_size,
            "reason": reason,
            "caveat": SEMIDECISION_CAVEAT,
        }),
    }
}

pub fn d_squared(report: &DSquaredReport, sig: &AlgebraSignature) -> Value {
    let residuals: Vec<Value> = report
        .residuals
        .iter()
        .map(|(x, e)| json!({"generator": sig.var_name(*x), "residual": element(e, sig)}))
        .collect();
    json!({"passed": report.passed(), "verification": "exact", "residuals": residuals})
}

pub fn structure(report: &StructureReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({"kind": v.kind.to_string(), "generator": v.generator, "detail": v.detail}))
        .collect();
    json!({"status": report.status.to_string(), "violations": violations})
}

pub fn chain_map(report: &ChainMapReport, sig: &AlgebraSignature) -> Value {
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|(what, e)| json!({"input": what, "difference": element(e, sig)}))
        .collect();
    json!({"passed": report.passed(), "checked": report.checked, "mismatches": mismatches})
}

pub fn classification(c: &Classification) -> Value {
    let certificates: Map<String, Value> =
        c.certificates.iter().map(|(f, cert)| (f.to_string(), certificate(cert))).collect();
    let flavors: Map<String, Value> = c
        .outcomes
        .iter()
        .map(|(f, o)| {
            (
                f.to_string(),
                json!({
                    "supplied": o.supplied,
                    "search": o.search.as_ref().map(search),
                    "failure": o.failure,
                }),
            )
        })
        .collect();
    let mut v = json!({
        "verdict": c.verdict.to_string(),
        "foundIn": c.found_in,
        "certificates": certificates,
        "flavors": flavors,
    });
    if c.found_in.is_none() {
        v["caveat"] = json!(SEMIDECISION_CAVEAT);
    }
    v
}
