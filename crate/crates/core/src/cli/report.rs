//! JSON renderings of library results, using point labels.

use serde_json::{json, Map, Value};

use super::document::{rational_value, rationals_value, SpaceDocument};
use crate::cone::{ConeExtremality, Semimetric};
use crate::constructions::ExtensionTrace;
use crate::lipschitz::LipschitzFunction;
use crate::metric::{FiniteMetricSpace, Lemma1Report, MetricFault, SignedMeasure};
use crate::norms::{Certificate, NormReport};
use crate::rigidity::{RigidityReport, Witness};

pub fn labels_of(labels: &[String], points: &[usize]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|&i| Value::String(labels[i].clone()))
            .collect(),
    )
}

pub fn measure(labels: &[String], mu: &SignedMeasure) -> Value {
    let m: Map<String, Value> = mu
        .entries()
        .map(|(i, c)| (labels[i].clone(), rational_value(c)))
        .collect();
    Value::Object(m)
}

/// Values keyed by label; `points[k]` is the point carrying `f[k]`.
pub fn function(labels: &[String], points: &[usize], f: &LipschitzFunction) -> Value {
    let m: Map<String, Value> = points
        .iter()
        .zip(f.values())
        .map(|(&i, v)| (labels[i].clone(), rational_value(v)))
        .collect();
    Value::Object(m)
}

pub fn norm(labels: &[String], r: &NormReport) -> (Value, Value) {
    let cert = match &r.certificate {
        Certificate::Zero => json!({"kind": "zero"}),
        Certificate::Coupling(plan) => json!({
            "kind": "coupling",
            "transfers": plan.iter().map(|t| json!({
                "from": labels[t.from],
                "to": labels[t.to],
                "mass": rational_value(&t.mass),
            })).collect::<Vec<_>>(),
        }),
        Certificate::DualFunction(u) => json!({
            "kind": "dual-function",
            "values": function(labels, &(0..labels.len()).collect::<Vec<_>>(), u),
        }),
        Certificate::Point { point, positive } => json!({
            "kind": "point",
            "point": labels[*point],
            "sign": if *positive { "+" } else { "-" },
        }),
        Certificate::Pair { x, y } => json!({"kind": "pair", "x": labels[*x], "y": labels[*y]}),
        Certificate::Member { index, positive } => json!({
            "kind": "member",
            "index": index,
            "sign": if *positive { "+" } else { "-" },
        }),
    };
    (rational_value(&r.value), cert)
}

fn witness(labels: &[String], points: &[usize], w: &Witness) -> Value {
    let mut m = Map::new();
    m.insert("function".into(), function(labels, points, &w.function));
    if let Some(r) = &w.representation {
        m.insert(
            "representation".into(),
            json!({
                "point": labels[r.point],
                "shift": rational_value(&r.shift),
                "defect": rational_value(&r.defect),
            }),
        );
    }
    if let Some(mu) = &w.measure {
        m.insert("measure".into(), measure(labels, mu));
    }
    if let Some((small, kr)) = &w.norms {
        m.insert("smaller_norm".into(), rational_value(small));
        m.insert("kr_norm".into(), rational_value(kr));
    }
    Value::Object(m)
}

/// `(results, certificate)` for a rigidity report on `space`.
pub fn rigidity(space: &FiniteMetricSpace, r: &RigidityReport) -> (Value, Value) {
    let labels = space.labels();
    let points: Vec<usize> = if r.subset.is_empty() {
        (0..space.len()).collect()
    } else {
        r.subset.clone()
    };
    let mut res = Map::new();
    res.insert("property".into(), Value::from(r.property.name()));
    res.insert("verdict".into(), Value::Bool(r.verdict));
    res.insert("functions_checked".into(), Value::from(r.functions_checked));
    if let Some(d) = &r.defect {
        res.insert("defect".into(), rational_value(d));
        res.insert("lower_bound".into(), Value::Bool(r.lower_bound));
    }
    if !r.subset.is_empty() {
        res.insert("subset".into(), labels_of(labels, &r.subset));
    }
    let cert = r
        .certificate
        .as_ref()
        .map_or(Value::Null, |w| witness(labels, &points, w));
    (Value::Object(res), cert)
}

fn fault(labels: &[String], f: &MetricFault) -> Value {
    match f {
        MetricFault::Diagonal { i } => json!({"kind": "diagonal", "points": [labels[*i]]}),
        MetricFault::Symmetry { i, j } => {
            json!({"kind": "symmetry", "points": [labels[*i], labels[*j]]})
        }
        MetricFault::NonPositive { i, j } => {
            json!({"kind": "non-positive", "points": [labels[*i], labels[*j]]})
        }
        MetricFault::Triangle { i, j, k } => {
            json!({"kind": "triangle", "points": [labels[*i], labels[*j], labels[*k]]})
        }
    }
}

pub fn lemma1(labels: &[String], r: &Lemma1Report) -> (Value, Value) {
    let results = json!({
        "is_metric": r.is_metric,
        "hull_condition": r.hull_condition,
        "agreement": r.agreement,
    });
    let cert = r.witness.as_ref().map_or(Value::Null, |w| {
        let mut m = Map::new();
        if let Some(t) = &w.triangle {
            m.insert("triangle".into(), fault(labels, t));
        }
        if let Some((x, y)) = w.vertex {
            m.insert("vertex".into(), labels_of(labels, &[x, y]));
        }
        if let Some(s) = &w.coefficient_sum {
            m.insert("coefficient_sum".into(), rational_value(s));
        }
        Value::Object(m)
    });
    (results, cert)
}

pub fn matrix(d: &[Vec<crate::Rational>]) -> Value {
    Value::Array(d.iter().map(|r| rationals_value(r)).collect())
}

pub fn cone(r: &ConeExtremality) -> (Value, Value) {
    (
        json!({"extremal": r.extremal, "face_dimension": r.face_dimension}),
        json!({"basis": r.basis.iter().map(|b| matrix(b)).collect::<Vec<_>>()}),
    )
}

pub fn semimetric(d: &Semimetric) -> Value {
    matrix(d.matrix())
}

pub fn space(s: &FiniteMetricSpace) -> Value {
    SpaceDocument::from_space(s).to_value()
}

pub fn trace(t: &ExtensionTrace) -> Value {
    let labels = t.space.labels();
    json!({
        "constraint": t.constraint.name(),
        "epsilon": t.epsilon.as_ref().map_or(Value::Null, rational_value),
        "seed": t.seed,
        "initial_subset": labels_of(labels, &t.initial_subset),
        "rounds": t.rounds.iter().map(|r| json!({
            "round": r.round,
            "snapshot_id": r.snapshot_id,
            "added": labels_of(labels, &r.added),
            "defect": rational_value(&r.defect),
            "initial_defect": rational_value(&r.initial_defect),
            "diameter": rational_value(&r.diameter),
        })).collect::<Vec<_>>(),
    })
}
