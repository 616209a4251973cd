//! The linear constraint sets tying a rank function to a problem.

use std::fmt;

use num_traits::Zero;

use super::distribution::Distribution;
use super::{GroundSet, RankFunction, Subset};
use crate::error::{Error, Result};
use crate::model::{Element, Problem};

/// Zero-tests on conditional entropy, mutual information and independence.
/// Implemented exactly for rational rank functions and for distributions.
pub trait EntropyOracle {
    fn ground(&self) -> &GroundSet;
    /// `h(a | b) = 0`
    fn conditional_is_zero(&self, a: Subset, b: Subset) -> bool;
    /// `h(a ∧ b) = 0`
    fn mutual_is_zero(&self, a: Subset, b: Subset) -> bool;
    /// `h(∪ parts) = Σ h(part)` for pairwise disjoint parts.
    fn mutually_independent(&self, parts: &[Subset]) -> bool;
}

impl EntropyOracle for RankFunction {
    fn ground(&self) -> &GroundSet {
        RankFunction::ground(self)
    }

    fn conditional_is_zero(&self, a: Subset, b: Subset) -> bool {
        self.conditional(a, b).is_zero()
    }

    fn mutual_is_zero(&self, a: Subset, b: Subset) -> bool {
        self.mutual(a, b).is_zero()
    }

    fn mutually_independent(&self, parts: &[Subset]) -> bool {
        let union = parts.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
        let sum = parts.iter().fold(crate::rational::zero(), |acc, p| acc + self.get(*p));
        *self.get(union) == sum
    }
}

impl EntropyOracle for Distribution {
    fn ground(&self) -> &GroundSet {
        Distribution::ground(self)
    }

    fn conditional_is_zero(&self, a: Subset, b: Subset) -> bool {
        self.determines(b, a).is_ok()
    }

    fn mutual_is_zero(&self, a: Subset, b: Subset) -> bool {
        self.independent(a, b)
    }

    fn mutually_independent(&self, parts: &[Subset]) -> bool {
        Distribution::mutually_independent(self, parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintSet {
    /// Sources (and node keys) mutually independent.
    Independence,
    /// Every edge a function of its inputs (and its tail key).
    Transmission,
    /// Every sink recovers its sources.
    Decoding,
    /// Every adversary learns nothing about its targets.
    Secrecy,
}

impl ConstraintSet {
    pub const ALL: [ConstraintSet; 4] =
        [ConstraintSet::Independence, ConstraintSet::Transmission, ConstraintSet::Decoding, ConstraintSet::Secrecy];

    pub fn name(self) -> &'static str {
        match self {
            ConstraintSet::Independence => "independence",
            ConstraintSet::Transmission => "transmission",
            ConstraintSet::Decoding => "decoding",
            ConstraintSet::Secrecy => "secrecy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintViolation {
    Independence,
    Transmission { edge: String },
    Decoding { source: String, sink: String },
    Secrecy { adversary: usize },
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintViolation::Independence => write!(f, "sources are not mutually independent"),
            ConstraintViolation::Transmission { edge } => write!(f, "edge {edge} is not determined by its inputs"),
            ConstraintViolation::Decoding { source, sink } => write!(f, "sink {sink} cannot recover source {source}"),
            ConstraintViolation::Secrecy { adversary } => write!(f, "adversary {adversary} observes leakage"),
        }
    }
}

/// Positions of sources, edges and (in secure mode) node keys inside a
/// ground set built for a problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemGround {
    pub ground: GroundSet,
    pub sources: Vec<usize>,
    pub edges: Vec<usize>,
    pub nodes: Option<Vec<usize>>,
}

impl ProblemGround {
    /// Sources, then edges, then nodes when `with_nodes`. Labels are the raw
    /// ids; if two kinds share an id every label gets a kind prefix.
    pub fn new(p: &Problem, with_nodes: bool) -> Result<Self> {
        Self::with_cap(p, with_nodes, super::DEFAULT_GROUND_CAP)
    }

    /// As [`ProblemGround::new`] with an explicit element cap, for oracles
    /// such as distributions that never enumerate all subsets.
    pub fn with_cap(p: &Problem, with_nodes: bool, cap: usize) -> Result<Self> {
        let sources: Vec<String> = p.sources.iter().map(|s| s.id.clone()).collect();
        let edges: Vec<String> = p.edges.iter().map(|e| e.id.clone()).collect();
        let nodes: Vec<String> = if with_nodes { p.nodes.clone() } else { Vec::new() };
        let mut labels: Vec<String> = sources.iter().chain(&edges).chain(&nodes).cloned().collect();
        let unique: std::collections::HashSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            labels = sources
                .iter()
                .map(|s| format!("s:{s}"))
                .chain(edges.iter().map(|e| format!("e:{e}")))
                .chain(nodes.iter().map(|v| format!("v:{v}")))
                .collect();
        }
        let ground = GroundSet::with_cap(labels, cap)?;
        let (ns, ne) = (sources.len(), edges.len());
        Ok(Self {
            ground,
            sources: (0..ns).collect(),
            edges: (ns..ns + ne).collect(),
            nodes: with_nodes.then(|| (ns + ne..ns + ne + nodes.len()).collect()),
        })
    }

    /// Matches an oracle's labels against the problem in either mode.
    pub fn for_oracle(p: &Problem, ground: &GroundSet) -> Result<Self> {
        for with_nodes in [false, true] {
            if let Ok(pg) = ProblemGround::with_cap(p, with_nodes, ground.len().max(super::DEFAULT_GROUND_CAP)) {
                if pg.ground.len() == ground.len() {
                    return pg.remap(ground);
                }
            }
        }
        Err(Error::GroundMismatch(format!(
            "{} elements match neither S∪E ({}) nor S∪E∪V ({})",
            ground.len(),
            p.num_sources() + p.num_edges(),
            p.num_sources() + p.num_edges() + p.num_nodes()
        )))
    }

    /// Re-expresses positions in `ground`, which must hold the same labels.
    fn remap(&self, ground: &GroundSet) -> Result<Self> {
        let map = |i: &usize| {
            let label = &self.ground.labels()[*i];
            ground.position(label).ok_or_else(|| Error::GroundMismatch(format!("label {label:?} missing")))
        };
        Ok(Self {
            ground: ground.clone(),
            sources: self.sources.iter().map(map).collect::<Result<_>>()?,
            edges: self.edges.iter().map(map).collect::<Result<_>>()?,
            nodes: self.nodes.as_ref().map(|v| v.iter().map(map).collect::<Result<_>>()).transpose()?,
        })
    }

    pub fn is_secure(&self) -> bool {
        self.nodes.is_some()
    }

    pub fn element(&self, el: Element) -> usize {
        match el {
            Element::Source(s) => self.sources[s],
            Element::Edge(e) => self.edges[e],
            Element::Node(v) => self.nodes.as_ref().expect("ground set has no nodes")[v],
        }
    }

    pub fn set_of(&self, els: &[Element]) -> Subset {
        Subset::from_indices(els.iter().map(|&el| self.element(el)))
    }

    pub fn all_sources(&self) -> Subset {
        Subset::from_indices(self.sources.iter().copied())
    }

    pub fn all_nodes(&self) -> Subset {
        self.nodes.as_ref().map_or(Subset::EMPTY, |v| Subset::from_indices(v.iter().copied()))
    }

    /// Conditioning set of edge `e`: `in(e)`, plus `tail(e)` in secure mode.
    pub fn edge_inputs(&self, p: &Problem, e: usize) -> Subset {
        let mut s = self.set_of(p.in_edge_of(e));
        if self.is_secure() {
            s = s.with(self.element(Element::Node(p.edges[e].tail)));
        }
        s
    }
}

/// Checks one constraint set; the mode follows the oracle's ground set.
pub fn constraint_membership<O: EntropyOracle>(
    oracle: &O,
    p: &Problem,
    which: ConstraintSet,
) -> Result<std::result::Result<(), ConstraintViolation>> {
    let pg = ProblemGround::for_oracle(p, oracle.ground())?;
    Ok(check_with(oracle, p, &pg, which))
}

pub fn check_with<O: EntropyOracle>(
    oracle: &O,
    p: &Problem,
    pg: &ProblemGround,
    which: ConstraintSet,
) -> std::result::Result<(), ConstraintViolation> {
    match which {
        ConstraintSet::Independence => {
            let mut parts: Vec<Subset> = pg.sources.iter().map(|&i| Subset::singleton(i)).collect();
            if let Some(nodes) = &pg.nodes {
                parts.extend(nodes.iter().map(|&i| Subset::singleton(i)));
            }
            if oracle.mutually_independent(&parts) {
                Ok(())
            } else {
                Err(ConstraintViolation::Independence)
            }
        }
        ConstraintSet::Transmission => {
            for e in 0..p.num_edges() {
                let target = Subset::singleton(pg.edges[e]);
                if !oracle.conditional_is_zero(target, pg.edge_inputs(p, e)) {
                    return Err(ConstraintViolation::Transmission { edge: p.edges[e].id.clone() });
                }
            }
            Ok(())
        }
        ConstraintSet::Decoding => {
            for (si, s) in p.sources.iter().enumerate() {
                for &u in &s.sinks {
                    let observed = pg.set_of(p.in_node_of(u));
                    if !oracle.conditional_is_zero(Subset::singleton(pg.sources[si]), observed) {
                        return Err(ConstraintViolation::Decoding {
                            source: s.id.clone(),
                            sink: p.nodes[u].clone(),
                        });
                    }
                }
            }
            Ok(())
        }
        ConstraintSet::Secrecy => {
            for (r, adv) in p.adversaries().iter().enumerate() {
                let a = Subset::from_indices(adv.targets.iter().map(|&s| pg.sources[s]));
                let b = Subset::from_indices(adv.taps.iter().map(|&e| pg.edges[e]));
                if !oracle.mutual_is_zero(a, b) {
                    return Err(ConstraintViolation::Secrecy { adversary: r });
                }
            }
            Ok(())
        }
    }
}
