//! JSON reports.

use multitile_core::synth::{DifferenceSet, SynthesisFailure};
use multitile_core::verify::Evidence;
use multitile_core::{
    ConnectivityVerdict, Discrepancy, Lattice, PipelineOutcome, RefinementResult, Synthesis, TilingCertificate,
    Verification,
};
use serde_json::{json, Map, Value};

use crate::codec::{rational, value, vector};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// How a finished command maps onto the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Disproof,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Disproof => 1,
            Status::Inconclusive => 2,
        }
    }

    /// The weaker of two outcomes.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            (Status::Disproof, _) | (_, Status::Disproof) => Status::Disproof,
            _ => Status::Ok,
        }
    }
}

pub fn envelope(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(REPORT_SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        m.extend(fields);
    }
    Value::Object(m)
}

pub fn lattice(l: &Lattice) -> Value {
    Value::Array(l.basis().iter().map(|c| vector(c)).collect())
}

pub fn evidence(e: &Evidence) -> Value {
    match e {
        Evidence::Torus(s) => json!({
            "kind": "torus",
            "translates": s.translates,
            "segments": s.segments,
            "event_lines": s.event_lines,
            "evaluations": s.evaluations,
        }),
        Evidence::Samples(n) => json!({"kind": "samples", "count": n}),
    }
}

pub fn certificate(c: &TilingCertificate) -> Value {
    json!({
        "status": "certified",
        "m": c.multiplicity,
        "exact": c.exact,
        "evidence": evidence(&c.evidence),
        "period": c.period.as_ref().map(lattice),
    })
}

pub fn discrepancy(d: &Discrepancy) -> Value {
    json!({
        "status": "discrepancy",
        "observed": d.observed(),
        "witnesses": d.witnesses.iter().map(|(v, x)| json!({"value": v, "point": vector(x)})).collect::<Vec<_>>(),
        "evidence": evidence(&d.evidence),
    })
}

pub fn verification(v: &Verification) -> (Value, Status) {
    match v {
        Verification::Certified(c) => (certificate(c), Status::Ok),
        Verification::Discrepancy(d) => (discrepancy(d), Status::Disproof),
    }
}

pub fn connectivity(v: &ConnectivityVerdict) -> (Value, Status) {
    match v {
        ConnectivityVerdict::Connected => (json!({"verdict": "connected"}), Status::Ok),
        ConnectivityVerdict::Disconnected(sep) => (
            json!({
                "verdict": "disconnected",
                "components": sep.components,
                "reason": sep.reason,
                "lines": sep.lines.iter().map(|f| json!({"normal": vector(&f.normal), "offset": value(&f.offset)})).collect::<Vec<_>>(),
                "segments": sep.segments.iter().map(|s| json!({"start": vector(&s.start), "end": vector(&s.end)})).collect::<Vec<_>>(),
            }),
            Status::Disproof,
        ),
        ConnectivityVerdict::Inconclusive(why) => {
            (json!({"verdict": "inconclusive", "reason": why}), Status::Inconclusive)
        }
    }
}

pub fn pipeline(o: &PipelineOutcome) -> (Value, Status) {
    match o {
        PipelineOutcome::Tiles(c) => (json!({"outcome": "tiles", "result": certificate(c)}), Status::Ok),
        PipelineOutcome::NotConnected(v) => {
            let (body, status) = connectivity(v);
            (json!({"outcome": "not_connected", "connectivity": body}), status)
        }
        PipelineOutcome::NotConstant(d) => (
            json!({"outcome": "not_constant", "result": discrepancy(d)}),
            Status::Disproof,
        ),
    }
}

fn differences(d: &DifferenceSet) -> Value {
    json!({
        "vectors": d.vectors,
        "values": d.values,
        "rank": d.rank,
        "exact": d.exact,
        "sweep": d.sweep.as_ref().map(|s| evidence(&Evidence::Torus(s.clone()))),
        "samples": d.samples,
    })
}

pub fn synthesis(s: &Synthesis) -> (Value, Status) {
    match s {
        Synthesis::Solved(sol) => (
            json!({
                "status": "solved",
                "weights": sol.weights,
                "m": sol.multiplicity,
                "reference": vector(&sol.reference),
                "checked": sol.checked,
                "evidence": differences(&sol.differences),
            }),
            Status::Ok,
        ),
        Synthesis::Failed(SynthesisFailure::NoNonnegativeVector { differences: d }) => (
            json!({"status": "no_nonnegative_vector", "evidence": differences(d)}),
            Status::Disproof,
        ),
        Synthesis::Failed(SynthesisFailure::Violated {
            weights,
            multiplicity,
            point,
            value,
        }) => (
            json!({
                "status": "violated",
                "weights": weights,
                "m": multiplicity,
                "point": vector(point),
                "value": value,
            }),
            Status::Disproof,
        ),
    }
}

pub fn refinement(r: &RefinementResult) -> (Value, Status) {
    let (candidate, status) = verification(&r.verification);
    let (input, _) = verification(&r.input);
    let coordinates: Vec<Value> = r
        .decomposition
        .coordinates
        .iter()
        .map(|e| {
            let terms: Map<String, Value> = e.terms.iter().map(|(g, c)| (g.key(), rational(c))).collect();
            json!({"rat": e.constant.to_string(), "irr": terms})
        })
        .collect();
    (
        json!({
            "n": r.n.to_string(),
            "irrational_rank": r.decomposition.irrational_rank,
            "offset_coordinates": coordinates,
            "candidate": {
                "lattice": lattice(&r.candidate.lattice),
                "translation": vector(&r.candidate.translation),
                "weight": r.candidate.weight,
            },
            "verification": candidate,
            "input": input,
        }),
        status,
    )
}
