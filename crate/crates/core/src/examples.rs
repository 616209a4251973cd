//! Reference problem instances.

use std::collections::BTreeMap;

use crate::model::{AdversarySpec, HyperedgeSpec, ProblemSpec, SourceSpec};

fn edge(id: &str, tail: &str, head: &[&str]) -> HyperedgeSpec {
    HyperedgeSpec {
        id: id.into(),
        tail: tail.into(),
        head: head.iter().map(|h| h.to_string()).collect(),
    }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// The butterfly network: one source at `s`, sinks `t1` and `t2`, unit
/// capacities on all nine links.
pub fn butterfly_spec() -> ProblemSpec {
    let edges = vec![
        edge("s-a", "s", &["a"]),
        edge("s-b", "s", &["b"]),
        edge("a-c", "a", &["c"]),
        edge("b-c", "b", &["c"]),
        edge("c-d", "c", &["d"]),
        edge("a-t1", "a", &["t1"]),
        edge("b-t2", "b", &["t2"]),
        edge("d-t1", "d", &["t1"]),
        edge("d-t2", "d", &["t2"]),
    ];
    let capacities: BTreeMap<String, String> =
        edges.iter().map(|e| (e.id.clone(), "1".to_string())).collect();
    ProblemSpec {
        nodes: strings(&["s", "a", "b", "c", "d", "t1", "t2"]),
        edges,
        sources: vec![SourceSpec { id: "1".into(), at: strings(&["s"]), sinks: strings(&["t1", "t2"]) }],
        capacities: Some(capacities),
        ..Default::default()
    }
}

/// Two parallel unit links from `s` to `t`, one adversary per link.
pub fn secure_two_path_spec() -> ProblemSpec {
    let edges = vec![edge("e1", "s", &["t"]), edge("e2", "s", &["t"])];
    let capacities: BTreeMap<String, String> =
        edges.iter().map(|e| (e.id.clone(), "1".to_string())).collect();
    ProblemSpec {
        nodes: strings(&["s", "t"]),
        edges,
        sources: vec![SourceSpec { id: "1".into(), at: strings(&["s"]), sinks: strings(&["t"]) }],
        wiretap: Some(vec![
            AdversarySpec { targets: strings(&["1"]), taps: strings(&["e1"]) },
            AdversarySpec { targets: strings(&["1"]), taps: strings(&["e2"]) },
        ]),
        capacities: Some(capacities),
        ..Default::default()
    }
}

/// A single link `s → u` carrying one source to its only sink.
pub fn single_edge_spec() -> ProblemSpec {
    ProblemSpec {
        nodes: strings(&["s", "u"]),
        edges: vec![edge("e", "s", &["u"])],
        sources: vec![SourceSpec { id: "1".into(), at: strings(&["s"]), sinks: strings(&["u"]) }],
        ..Default::default()
    }
}
