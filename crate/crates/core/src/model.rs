//! Network coding problems on acyclic hypergraphs.
//!
//! A [`ProblemSpec`] is the raw, serializable description (the JSON problem
//! file). [`Problem`] is the validated form: identifiers are mapped to dense
//! indices once and incidence sets are cached.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperedgeSpec {
    pub id: String,
    pub tail: String,
    pub head: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub id: String,
    /// Origin nodes `O(s)`.
    pub at: Vec<String>,
    /// Sink nodes `D(s)`.
    pub sinks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub targets: Vec<String>,
    pub taps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct ProblemSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<HyperedgeSpec>,
    pub sources: Vec<SourceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wiretap: Option<Vec<AdversarySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub routing_links: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacities: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<BTreeMap<String, String>>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem spec serializes")
    }
}

/// A variable of the problem: an (imaginary) source edge, a link, or a node key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Source(usize),
    Edge(usize),
    Node(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub id: String,
    pub tail: usize,
    pub head: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    pub id: String,
    pub origin: Vec<usize>,
    pub sinks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adversary {
    pub targets: Vec<usize>,
    pub taps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateNode(String),
    DuplicateEdge(String),
    DuplicateSource(String),
    UnknownNode { context: String, node: String },
    UnknownEdge { context: String, edge: String },
    UnknownSource { context: String, source: String },
    EmptyHead(String),
    SelfLoop(String),
    EmptyOrigin(String),
    NoSinks(String),
    EmptyAdversary(usize),
    BadRational { context: String, value: String },
    NegativeValue { context: String },
    Cycle(Vec<String>),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateNode(n) => write!(f, "duplicate node {n:?}"),
            Diagnostic::DuplicateEdge(e) => write!(f, "duplicate edge {e:?}"),
            Diagnostic::DuplicateSource(s) => write!(f, "duplicate source {s:?}"),
            Diagnostic::UnknownNode { context, node } => write!(f, "{context}: unknown node {node:?}"),
            Diagnostic::UnknownEdge { context, edge } => write!(f, "{context}: unknown edge {edge:?}"),
            Diagnostic::UnknownSource { context, source } => {
                write!(f, "{context}: unknown source {source:?}")
            }
            Diagnostic::EmptyHead(e) => write!(f, "edge {e:?} has an empty head"),
            Diagnostic::SelfLoop(e) => write!(f, "edge {e:?} has its tail in its head"),
            Diagnostic::EmptyOrigin(s) => write!(f, "source {s:?} has no origin node"),
            Diagnostic::NoSinks(s) => write!(f, "source {s:?} has no sink"),
            Diagnostic::EmptyAdversary(r) => write!(f, "adversary #{r} has no targets or no taps"),
            Diagnostic::BadRational { context, value } => {
                write!(f, "{context}: invalid rational {value:?}")
            }
            Diagnostic::NegativeValue { context } => write!(f, "{context}: negative value"),
            Diagnostic::Cycle(links) => write!(f, "cycle: {}", links.join("→")),
        }
    }
}

/// Checks every structural invariant of a problem description. Returns one
/// diagnostic per violation; an empty list means the problem is well formed.
pub fn validate(spec: &ProblemSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut nodes = HashMap::new();
    for (i, n) in spec.nodes.iter().enumerate() {
        if nodes.insert(n.as_str(), i).is_some() {
            out.push(Diagnostic::DuplicateNode(n.clone()));
        }
    }
    let mut edges = HashMap::new();
    for (i, e) in spec.edges.iter().enumerate() {
        if edges.insert(e.id.as_str(), i).is_some() {
            out.push(Diagnostic::DuplicateEdge(e.id.clone()));
        }
        let ctx = format!("edge {:?}", e.id);
        if !nodes.contains_key(e.tail.as_str()) {
            out.push(Diagnostic::UnknownNode { context: ctx.clone(), node: e.tail.clone() });
        }
        if e.head.is_empty() {
            out.push(Diagnostic::EmptyHead(e.id.clone()));
        }
        for h in &e.head {
            if !nodes.contains_key(h.as_str()) {
                out.push(Diagnostic::UnknownNode { context: ctx.clone(), node: h.clone() });
            }
        }
        if e.head.contains(&e.tail) {
            out.push(Diagnostic::SelfLoop(e.id.clone()));
        }
    }
    let mut sources = HashMap::new();
    for (i, s) in spec.sources.iter().enumerate() {
        if sources.insert(s.id.as_str(), i).is_some() {
            out.push(Diagnostic::DuplicateSource(s.id.clone()));
        }
        let ctx = format!("source {:?}", s.id);
        if s.at.is_empty() {
            out.push(Diagnostic::EmptyOrigin(s.id.clone()));
        }
        if s.sinks.is_empty() {
            out.push(Diagnostic::NoSinks(s.id.clone()));
        }
        for n in s.at.iter().chain(&s.sinks) {
            if !nodes.contains_key(n.as_str()) {
                out.push(Diagnostic::UnknownNode { context: ctx.clone(), node: n.clone() });
            }
        }
    }
    if let Some(adversaries) = &spec.wiretap {
        for (r, a) in adversaries.iter().enumerate() {
            if a.targets.is_empty() || a.taps.is_empty() {
                out.push(Diagnostic::EmptyAdversary(r));
            }
            let ctx = format!("adversary #{r}");
            for s in &a.targets {
                if !sources.contains_key(s.as_str()) {
                    out.push(Diagnostic::UnknownSource { context: ctx.clone(), source: s.clone() });
                }
            }
            for e in &a.taps {
                if !edges.contains_key(e.as_str()) {
                    out.push(Diagnostic::UnknownEdge { context: ctx.clone(), edge: e.clone() });
                }
            }
        }
    }
    if let Some(links) = &spec.routing_links {
        for e in links {
            if !edges.contains_key(e.as_str()) {
                out.push(Diagnostic::UnknownEdge { context: "routing_links".into(), edge: e.clone() });
            }
        }
    }
    for (field, map, known) in [
        ("capacities", &spec.capacities, &edges),
        ("rates", &spec.rates, &sources),
    ] {
        let Some(map) = map else { continue };
        for (k, v) in map {
            let context = format!("{field}[{k:?}]");
            if !known.contains_key(k.as_str()) {
                if field == "capacities" {
                    out.push(Diagnostic::UnknownEdge { context: field.into(), edge: k.clone() });
                } else {
                    out.push(Diagnostic::UnknownSource { context: field.into(), source: k.clone() });
                }
            }
            match rational::parse_rational(v) {
                Ok(r) if !rational::is_nonnegative(&r) => {
                    out.push(Diagnostic::NegativeValue { context })
                }
                Ok(_) => {}
                Err(_) => out.push(Diagnostic::BadRational { context, value: v.clone() }),
            }
        }
    }
    if let Some(cycle) = find_link_cycle(spec, &nodes) {
        out.push(Diagnostic::Cycle(cycle));
    }
    out
}

/// A directed cycle of links `f_1 … f_k` with `tail(f_i) ∈ head(f_{i-1})`,
/// returned with the first link repeated at the end.
fn find_link_cycle(spec: &ProblemSpec, nodes: &HashMap<&str, usize>) -> Option<Vec<String>> {
    let n = spec.edges.len();
    // successors: f -> e whenever tail(e) ∈ head(f)
    let mut out_of_node: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, e) in spec.edges.iter().enumerate() {
        if nodes.contains_key(e.tail.as_str()) {
            out_of_node.entry(e.tail.as_str()).or_default().push(i);
        }
    }
    let succ: Vec<Vec<usize>> = spec
        .edges
        .iter()
        .map(|f| {
            let mut s: Vec<usize> = f
                .head
                .iter()
                .flat_map(|h| out_of_node.get(h.as_str()).into_iter().flatten().copied())
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, next) = stack[top];
            if next == succ[v].len() {
                state[v] = 2;
                stack.pop();
                continue;
            }
            stack[top].1 += 1;
            let w = succ[v][next];
            match state[w] {
                0 => {
                    state[w] = 1;
                    stack.push((w, 0));
                }
                1 => {
                    let pos = stack.iter().position(|&(x, _)| x == w).expect("on stack");
                    let mut names: Vec<String> =
                        stack[pos..].iter().map(|&(i, _)| spec.edges[i].id.clone()).collect();
                    names.push(names[0].clone());
                    return Some(names);
                }
                _ => {}
            }
        }
    }
    None
}

/// A validated, indexed network coding problem `(G, M[, W][, ϱ])`.
#[derive(Clone, Debug)]
pub struct Problem {
    pub nodes: Vec<String>,
    pub edges: Vec<Hyperedge>,
    pub sources: Vec<Source>,
    pub wiretap: Option<Vec<Adversary>>,
    pub routing_links: Option<Vec<usize>>,
    pub capacities: Option<Vec<Rational>>,
    pub rates: Option<Vec<Rational>>,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    source_index: HashMap<String, usize>,
    in_edge: Vec<Vec<Element>>,
    in_node: Vec<Vec<Element>>,
    topo: Vec<usize>,
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.to_spec() == other.to_spec()
    }
}

impl Problem {
    pub fn from_spec(spec: &ProblemSpec) -> Result<Self> {
        let diags = validate(spec);
        if let Some(Diagnostic::Cycle(c)) = diags.iter().find(|d| matches!(d, Diagnostic::Cycle(_))) {
            return Err(Error::Cycle(c.clone()));
        }
        if !diags.is_empty() {
            let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(Error::InvalidProblem(text.join("; ")));
        }
        let node_index: HashMap<String, usize> =
            spec.nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edge_index: HashMap<String, usize> =
            spec.edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let source_index: HashMap<String, usize> =
            spec.sources.iter().enumerate().map(|(i, s)| (s.id.clone(), i)).collect();
        let nodes_of = |v: &[String]| -> Vec<usize> {
            let set: BTreeSet<usize> = v.iter().map(|n| node_index[n]).collect();
            set.into_iter().collect()
        };
        let edges: Vec<Hyperedge> = spec
            .edges
            .iter()
            .map(|e| Hyperedge { id: e.id.clone(), tail: node_index[&e.tail], head: nodes_of(&e.head) })
            .collect();
        let sources: Vec<Source> = spec
            .sources
            .iter()
            .map(|s| Source { id: s.id.clone(), origin: nodes_of(&s.at), sinks: nodes_of(&s.sinks) })
            .collect();
        let wiretap = spec.wiretap.as_ref().map(|adv| {
            adv.iter()
                .map(|a| {
                    let t: BTreeSet<usize> = a.targets.iter().map(|s| source_index[s]).collect();
                    let b: BTreeSet<usize> = a.taps.iter().map(|e| edge_index[e]).collect();
                    Adversary { targets: t.into_iter().collect(), taps: b.into_iter().collect() }
                })
                .collect()
        });
        let routing_links = spec.routing_links.as_ref().map(|l| {
            let set: BTreeSet<usize> = l.iter().map(|e| edge_index[e]).collect();
            set.into_iter().collect()
        });
        let parse_map = |map: &Option<BTreeMap<String, String>>, index: &HashMap<String, usize>, len: usize| {
            map.as_ref().map(|m| {
                let mut v = vec![rational::zero(); len];
                for (k, val) in m {
                    v[index[k]] = rational::parse_rational(val).expect("validated");
                }
                v
            })
        };
        let capacities = parse_map(&spec.capacities, &edge_index, edges.len());
        let rates = parse_map(&spec.rates, &source_index, sources.len());

        let mut in_node: Vec<Vec<Element>> = vec![Vec::new(); node_index.len()];
        for (s, src) in sources.iter().enumerate() {
            for &u in &src.origin {
                in_node[u].push(Element::Source(s));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            for &u in &e.head {
                in_node[u].push(Element::Edge(i));
            }
        }
        let in_edge: Vec<Vec<Element>> = edges.iter().map(|e| in_node[e.tail].clone()).collect();

        let mut p = Problem {
            nodes: spec.nodes.clone(),
            edges,
            sources,
            wiretap,
            routing_links,
            capacities,
            rates,
            node_index,
            edge_index,
            source_index,
            in_edge,
            in_node,
            topo: Vec::new(),
        };
        p.topo = p.compute_topological_order()?;
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&ProblemSpec::from_json(text)?)
    }

    pub fn to_spec(&self) -> ProblemSpec {
        let names = |v: &[usize], pool: &[String]| v.iter().map(|&i| pool[i].clone()).collect::<Vec<_>>();
        let edge_ids: Vec<String> = self.edges.iter().map(|e| e.id.clone()).collect();
        let source_ids: Vec<String> = self.sources.iter().map(|s| s.id.clone()).collect();
        ProblemSpec {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| HyperedgeSpec {
                    id: e.id.clone(),
                    tail: self.nodes[e.tail].clone(),
                    head: names(&e.head, &self.nodes),
                })
                .collect(),
            sources: self
                .sources
                .iter()
                .map(|s| SourceSpec {
                    id: s.id.clone(),
                    at: names(&s.origin, &self.nodes),
                    sinks: names(&s.sinks, &self.nodes),
                })
                .collect(),
            wiretap: self.wiretap.as_ref().map(|adv| {
                adv.iter()
                    .map(|a| AdversarySpec {
                        targets: names(&a.targets, &source_ids),
                        taps: names(&a.taps, &edge_ids),
                    })
                    .collect()
            }),
            routing_links: self.routing_links.as_ref().map(|l| names(l, &edge_ids)),
            capacities: self.capacities.as_ref().map(|c| {
                c.iter()
                    .zip(&edge_ids)
                    .map(|(v, k)| (k.clone(), rational::format_rational(v)))
                    .collect()
            }),
            rates: self.rates.as_ref().map(|r| {
                r.iter()
                    .zip(&source_ids)
                    .map(|(v, k)| (k.clone(), rational::format_rational(v)))
                    .collect()
            }),
        }
    }

    pub fn node(&self, id: &str) -> Result<usize> {
        self.node_index.get(id).copied().ok_or_else(|| Error::UnknownNode(id.into()))
    }

    pub fn edge(&self, id: &str) -> Result<usize> {
        self.edge_index.get(id).copied().ok_or_else(|| Error::UnknownEdge(id.into()))
    }

    pub fn source(&self, id: &str) -> Result<usize> {
        self.source_index.get(id).copied().ok_or_else(|| Error::UnknownSource(id.into()))
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn is_secure(&self) -> bool {
        self.wiretap.is_some()
    }

    pub fn adversaries(&self) -> &[Adversary] {
        self.wiretap.as_deref().unwrap_or(&[])
    }

    pub fn is_routing_link(&self, e: usize) -> bool {
        self.routing_links.as_ref().is_some_and(|l| l.binary_search(&e).is_ok())
    }

    pub fn label(&self, el: Element) -> &str {
        match el {
            Element::Source(s) => &self.sources[s].id,
            Element::Edge(e) => &self.edges[e].id,
            Element::Node(u) => &self.nodes[u],
        }
    }

    /// `in(e)`: sources and links whose head contains `tail(e)`, sources
    /// first, each group in declaration order.
    pub fn in_edge_of(&self, e: usize) -> &[Element] {
        &self.in_edge[e]
    }

    /// `in(u)`: sources and links whose head contains `u`.
    pub fn in_node_of(&self, u: usize) -> &[Element] {
        &self.in_node[u]
    }

    /// Head set of a source or link (`head(s) = O(s)`).
    pub fn head_of(&self, el: Element) -> &[usize] {
        match el {
            Element::Source(s) => &self.sources[s].origin,
            Element::Edge(e) => &self.edges[e].head,
            Element::Node(_) => &[],
        }
    }

    /// Edges in a deterministic topological order of the link relation.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Capacities from the problem file, defaulting to 1 per edge.
    pub fn capacities_or_unit(&self) -> Vec<Rational> {
        self.capacities.clone().unwrap_or_else(|| vec![rational::one(); self.edges.len()])
    }

    /// Rates from the problem file, defaulting to 1 per source.
    pub fn rates_or_unit(&self) -> Vec<Rational> {
        self.rates.clone().unwrap_or_else(|| vec![rational::one(); self.sources.len()])
    }

    fn compute_topological_order(&self) -> Result<Vec<usize>> {
        let n = self.edges.len();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in 0..n {
            for el in &self.in_edge[e] {
                if let Element::Edge(f) = *el {
                    succ[f].push(e);
                    indeg[e] += 1;
                }
            }
        }
        let mut ready: BTreeSet<(&str, usize)> = (0..n)
            .filter(|&e| indeg[e] == 0)
            .map(|e| (self.edges[e].id.as_str(), e))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(first) = ready.pop_first() {
            let e = first.1;
            order.push(e);
            for &g in &succ[e] {
                indeg[g] -= 1;
                if indeg[g] == 0 {
                    ready.insert((self.edges[g].id.as_str(), g));
                }
            }
        }
        if order.len() != n {
            return Err(Error::Cycle(Vec::new()));
        }
        Ok(order)
    }
}

/// `in(e)` by identifier.
pub fn in_edge(problem: &Problem, edge_id: &str) -> Result<Vec<Element>> {
    let e = problem.edge(edge_id)?;
    Ok(problem.in_edge_of(e).to_vec())
}

/// `in(u)` by identifier.
pub fn in_node(problem: &Problem, node_id: &str) -> Result<Vec<Element>> {
    let u = problem.node(node_id)?;
    Ok(problem.in_node_of(u).to_vec())
}

/// Topological edge order, ties broken by edge identifier.
pub fn topological_edge_order(problem: &Problem) -> Vec<String> {
    problem.topological_order().iter().map(|&e| problem.edges[e].id.clone()).collect()
}

/// Source rates and edge capacities `(λ, ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateCapacityTuple {
    pub rates: Vec<Rational>,
    pub capacities: Vec<Rational>,
}

impl RateCapacityTuple {
    pub fn new(problem: &Problem, rates: Vec<Rational>, capacities: Vec<Rational>) -> Result<Self> {
        if rates.len() != problem.num_sources() || capacities.len() != problem.num_edges() {
            return Err(Error::Shape("rate-capacity tuple length does not match problem".into()));
        }
        if rates.iter().chain(&capacities).any(|v| !rational::is_nonnegative(v)) {
            return Err(Error::InvalidArgument("rates and capacities must be nonnegative".into()));
        }
        Ok(Self { rates, capacities })
    }

    pub fn zero(problem: &Problem) -> Self {
        Self {
            rates: vec![rational::zero(); problem.num_sources()],
            capacities: vec![rational::zero(); problem.num_edges()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::butterfly_spec;

    fn spec(edges: &[(&str, &str, &[&str])], nodes: &[&str]) -> ProblemSpec {
        ProblemSpec {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(id, t, h)| HyperedgeSpec {
                    id: id.to_string(),
                    tail: t.to_string(),
                    head: h.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
            sources: vec![SourceSpec { id: "1".into(), at: vec![nodes[0].into()], sinks: vec![nodes[nodes.len() - 1].into()] }],
            ..Default::default()
        }
    }

    #[test]
    fn butterfly_incidence() {
        let p = Problem::from_spec(&butterfly_spec()).unwrap();
        let names = |v: Vec<Element>| v.into_iter().map(|e| p.label(e).to_string()).collect::<Vec<_>>();
        assert_eq!(names(in_edge(&p, "s-a").unwrap()), ["1"]);
        assert_eq!(names(in_edge(&p, "c-d").unwrap()), ["a-c", "b-c"]);
        assert_eq!(names(in_node(&p, "t1").unwrap()), ["a-t1", "d-t1"]);
        assert!(in_edge(&p, "zz").is_err());
        assert!(in_node(&p, "zz").is_err());
    }

    #[test]
    fn origin_and_isolated_nodes() {
        let mut sp = spec(&[("x", "u", &["v"])], &["o", "u", "v", "iso"]);
        sp.sources[0].sinks = vec!["v".into()];
        let p = Problem::from_spec(&sp).unwrap();
        assert_eq!(in_node(&p, "o").unwrap(), vec![Element::Source(0)]);
        assert!(in_node(&p, "iso").unwrap().is_empty());
        assert!(in_edge(&p, "x").unwrap().is_empty());
    }

    #[test]
    fn validate_reports_cycle_and_unknowns() {
        assert!(validate(&butterfly_spec()).is_empty());
        let sp = spec(&[("ab", "a", &["b"]), ("ba", "b", &["a"])], &["a", "b"]);
        let d = validate(&sp);
        assert_eq!(d.len(), 1);
        match &d[0] {
            Diagnostic::Cycle(c) => {
                assert_eq!(c.len(), 3);
                assert_eq!(c.first(), c.last());
            }
            other => panic!("expected cycle, got {other}"),
        }
        assert!(matches!(Problem::from_spec(&sp), Err(Error::Cycle(_))));

        let mut sp = butterfly_spec();
        sp.sources[0].sinks.push("nowhere".into());
        let d = validate(&sp);
        assert!(matches!(&d[..], [Diagnostic::UnknownNode { node, .. }] if node == "nowhere"));
    }

    #[test]
    fn validate_rejects_self_loop_and_empty_head() {
        let sp = spec(&[("x", "a", &["a", "b"]), ("y", "a", &[])], &["a", "b"]);
        let d = validate(&sp);
        assert!(d.contains(&Diagnostic::SelfLoop("x".into())));
        assert!(d.contains(&Diagnostic::EmptyHead("y".into())));
    }

    #[test]
    fn topological_order_is_deterministic() {
        let p = Problem::from_spec(&butterfly_spec()).unwrap();
        let order = topological_edge_order(&p);
        let pos = |id: &str| order.iter().position(|x| x == id).unwrap();
        assert!(pos("s-a") < pos("a-c") && pos("s-b") < pos("b-c"));
        assert!(pos("a-c") < pos("c-d") && pos("b-c") < pos("c-d"));
        assert!(pos("c-d") < pos("d-t1") && pos("c-d") < pos("d-t2"));
        assert_eq!(order, topological_edge_order(&Problem::from_spec(&butterfly_spec()).unwrap()));

        let sp = spec(&[("z", "a", &["b"]), ("m", "a", &["b"])], &["a", "b"]);
        let p = Problem::from_spec(&sp).unwrap();
        assert_eq!(topological_edge_order(&p), ["m", "z"]);
    }

    #[test]
    fn spec_round_trips() {
        let sp = butterfly_spec();
        let p = Problem::from_spec(&sp).unwrap();
        let back = ProblemSpec::from_json(&p.to_spec().to_json()).unwrap();
        assert_eq!(Problem::from_spec(&back).unwrap(), p);
    }
}
