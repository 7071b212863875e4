//! Report serialisation.
//!
//! Reports are JSON with a fixed key order (struct declaration order)
//! and floats rounded to 9 significant digits, so identical runs
//! produce byte-identical output.

use crate::bounds::TruthState;
use crate::graph::{NeuronGraph, NodeKind};
use crate::inference::{ConvergenceReport, Engine, ModelParams};
use crate::learning::{ConstraintCheck, TrainReport};
use crate::Real;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Round to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let k = 8 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(k);
    (x * scale).round() / scale
}

fn num<T: Real>(x: T) -> Value {
    let f = sig9(x.to_f64().unwrap_or(f64::NAN));
    serde_json::Number::from_f64(f)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn rounded<T: Serialize>(value: &T) -> Value {
    round_value(serde_json::to_value(value).expect("serializable"))
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    return serde_json::Number::from_f64(sig9(f))
                        .map(Value::Number)
                        .unwrap_or(Value::Null);
                }
            }
            Value::Number(n)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => {
            let mut out = Map::new();
            for (k, v) in map {
                out.insert(k, round_value(v));
            }
            Value::Object(out)
        }
        other => other,
    }
}

/// Inference report as a JSON document.
pub fn infer_report_json<T: Real>(
    graph: &NeuronGraph<T>,
    report: &ConvergenceReport<T>,
    query_filter: Option<&str>,
) -> Value {
    let queries: Vec<Value> = report
        .queries
        .iter()
        .filter(|q| query_filter.map(|f| q.id == f).unwrap_or(true))
        .map(rounded)
        .collect();
    json!({
        "semantics": graph.config.family.name(),
        "alpha": num(graph.config.alpha),
        "iterations": report.iterations,
        "converged": report.converged,
        "deltas": report.deltas.iter().map(|&d| num(d)).collect::<Vec<_>>(),
        "contradiction_count": report.contradiction_count,
        "contradiction_sum": num(report.contradiction_sum),
        "contradictions": rounded(&report.contradictions),
        "axioms": rounded(&report.axioms),
        "queries": queries,
    })
}

pub fn train_report_json<T: Real>(graph: &NeuronGraph<T>, report: &TrainReport<T>) -> Value {
    json!({
        "semantics": graph.config.family.name(),
        "alpha": num(graph.config.alpha),
        "seed": report.seed,
        "epochs": rounded(&report.epochs),
        "final_loss": rounded(&report.final_loss),
        "final_contradiction_count": report.final_contradiction_count,
        "final_params": rounded(&report.final_params),
    })
}

pub fn constraints_json<T: Real>(checks: &[ConstraintCheck<T>]) -> Value {
    json!({
        "violations": checks.iter().filter(|c| !c.satisfied).count(),
        "checks": rounded(&checks),
    })
}

/// Full graph dump: node id, kind, parameters, per-grounding bounds
/// and state.
pub fn graph_dump_json<T: Real>(eng: &Engine<'_, T>, model: &ModelParams<T>) -> Value {
    let graph = eng.graph;
    let alpha = graph.config.alpha;
    let nodes: Vec<Value> = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(id, node)| {
            let entries: Vec<Value> = node
                .tuples
                .iter()
                .enumerate()
                .map(|(t, tuple)| {
                    let b = eng.bounds(id, t);
                    json!({
                        "grounding": graph.tuple_names(tuple),
                        "lower": num(b.lower),
                        "upper": num(b.upper),
                        "state": state_label(b.classify(alpha)),
                    })
                })
                .collect();
            json!({
                "id": id,
                "kind": kind_label(node.kind),
                "label": node.label,
                "vars": node.vars,
                "operands": node.operands.iter().map(|o| o.node).collect::<Vec<_>>(),
                "weights": model.weights[id].iter().map(|&w| num(w)).collect::<Vec<_>>(),
                "bias": num(model.biases[id]),
                "entries": entries,
            })
        })
        .collect();
    json!({
        "constants": graph.constants,
        "nodes": nodes,
        "roots": graph
            .roots
            .iter()
            .map(|r| json!({"id": r.id, "node": r.node}))
            .collect::<Vec<_>>(),
    })
}

/// Versioned checkpoint carrying every parameter; field order is part
/// of the format.
pub fn checkpoint_json<T: Real>(graph: &NeuronGraph<T>, model: &ModelParams<T>) -> Value {
    json!({
        "format": "logicnet-checkpoint",
        "version": 1,
        "weights": model
            .weights
            .iter()
            .enumerate()
            .filter(|(_, ws)| !ws.is_empty())
            .map(|(node, ws)| json!({
                "node": node,
                "weights": ws.iter().map(|&w| num(w)).collect::<Vec<_>>(),
                "bias": num(model.biases[node]),
            }))
            .collect::<Vec<_>>(),
        "axiom_bounds": graph
            .roots
            .iter()
            .zip(&model.axiom_bounds)
            .filter_map(|(r, b)| {
                b.map(|b| json!({"id": r.id, "lower": num(b.lower), "upper": num(b.upper)}))
            })
            .collect::<Vec<_>>(),
        "fact_bounds": graph
            .facts
            .iter()
            .zip(&model.fact_bounds)
            .map(|(f, b)| {
                let node = &graph.nodes[f.node];
                json!({
                    "pred": node.label,
                    "args": graph.tuple_names(&node.tuples[f.entry]),
                    "lower": num(b.lower),
                    "upper": num(b.upper),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn kind_label(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Atom => "atom",
        NodeKind::Alias => "alias",
        NodeKind::Not => "not",
        NodeKind::And => "and",
        NodeKind::Or => "or",
        NodeKind::Implies => "implies",
        NodeKind::ForAll => "forall",
        NodeKind::Exists => "exists",
    }
}

fn state_label(s: TruthState) -> &'static str {
    s.label()
}

/// Render a JSON value with stable formatting.
pub fn to_string_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("valid json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_rounds() {
        assert_eq!(sig9(0.123456789123), 0.123456789);
        assert_eq!(sig9(123456789.123), 123456789.0);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(1.0), 1.0);
        assert_eq!(sig9(-0.9999999999), -1.0);
    }
}
