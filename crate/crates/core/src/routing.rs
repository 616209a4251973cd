//! Routing subnetworks and fractional packing bounds.

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense, SolverOptions};
use crate::model::{Element, Problem};
use crate::rank::constraints::ProblemGround;
use crate::rank::{almost_atomic_sum, RankFunction, Subset};
use crate::rational::{self, Rational};
use crate::shannon::BoundMode;

pub const MAX_ROUTING_EDGES: usize = 20;

/// A source together with the links carrying its data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoutingSubnetwork {
    pub source: usize,
    /// Edge indices, sorted.
    pub edges: Vec<usize>,
}

impl RoutingSubnetwork {
    fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, &e| m | 1 << e)
    }

    fn from_mask(source: usize, mask: u64) -> Self {
        Self { source, edges: Subset(mask).iter().collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub require_sink_coverage: bool,
    pub minimal: bool,
}

/// Whether an edge may join a subnetwork already holding `mask`.
fn fed(p: &Problem, source: usize, mask: u64, e: usize) -> bool {
    p.in_edge_of(e).iter().any(|el| match *el {
        Element::Source(s) => s == source,
        Element::Edge(f) => mask >> f & 1 == 1,
        Element::Node(_) => false,
    })
}

fn valid(p: &Problem, source: usize, mask: u64) -> bool {
    Subset(mask).iter().all(|e| fed(p, source, mask, e))
}

/// Sinks of `source` reached by the subnetwork, as a bitmask over its sink list.
fn touched(p: &Problem, source: usize, mask: u64) -> u64 {
    let s = &p.sources[source];
    s.sinks.iter().enumerate().fold(0, |acc, (k, &u)| {
        let hit = s.origin.contains(&u) || Subset(mask).iter().any(|e| p.edges[e].head.contains(&u));
        if hit {
            acc | 1 << k
        } else {
            acc
        }
    })
}

fn covers_all(p: &Problem, source: usize, mask: u64) -> bool {
    touched(p, source, mask).count_ones() as usize == p.sources[source].sinks.len()
}

/// All subnetworks rooted at `source`, grown edge by edge from the source's
/// outgoing links, in sorted order.
pub fn enumerate_subnetworks(p: &Problem, source: usize, opts: EnumerateOptions) -> Result<Vec<RoutingSubnetwork>> {
    if p.num_edges() > MAX_ROUTING_EDGES {
        return Err(Error::InvalidArgument(format!(
            "{} edges exceed the routing enumeration cap of {MAX_ROUTING_EDGES}",
            p.num_edges()
        )));
    }
    if source >= p.num_sources() {
        return Err(Error::UnknownSource(source.to_string()));
    }
    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack = vec![0u64];
    seen.insert(0);
    while let Some(mask) = stack.pop() {
        for e in 0..p.num_edges() {
            if mask >> e & 1 == 0 && fed(p, source, mask, e) {
                let next = mask | 1 << e;
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    let mut out: Vec<u64> = seen
        .into_iter()
        .filter(|&m| !opts.require_sink_coverage || covers_all(p, source, m))
        .filter(|&m| {
            if !opts.minimal {
                return true;
            }
            // removing the topologically latest extra edge always stays valid,
            // so single-edge removals decide inclusion-minimality
            let t = touched(p, source, m);
            !Subset(m).iter().any(|e| {
                let smaller = m & !(1 << e);
                valid(p, source, smaller) && touched(p, source, smaller) & t == t
            })
        })
        .collect();
    out.sort_unstable_by_key(|&m| (m.count_ones(), m));
    Ok(out.into_iter().map(|m| RoutingSubnetwork::from_mask(source, m)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Packing {
    pub entries: Vec<(RoutingSubnetwork, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingEntryExport {
    pub source: String,
    pub edges: Vec<String>,
    pub c: String,
}

impl Packing {
    pub fn to_export(&self, p: &Problem) -> Vec<PackingEntryExport> {
        self.entries
            .iter()
            .map(|(t, c)| PackingEntryExport {
                source: p.sources[t.source].id.clone(),
                edges: t.edges.iter().map(|&e| p.edges[e].id.clone()).collect(),
                c: rational::format_rational(c),
            })
            .collect()
    }

    pub fn from_export(p: &Problem, entries: &[PackingEntryExport]) -> Result<Self> {
        let entries = entries
            .iter()
            .map(|x| {
                let source = p.source(&x.source)?;
                let mut edges = x.edges.iter().map(|e| p.edge(e)).collect::<Result<Vec<_>>>()?;
                edges.sort_unstable();
                let c = rational::parse_rational(&x.c)?;
                if c.is_negative() {
                    return Err(Error::InvalidArgument("negative packing weight".into()));
                }
                Ok((RoutingSubnetwork { source, edges }, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// Load `Σ c_T` on every edge.
    pub fn edge_loads(&self, p: &Problem) -> Vec<Rational> {
        let mut load = vec![rational::zero(); p.num_edges()];
        for (t, c) in &self.entries {
            for &e in &t.edges {
                load[e] += c;
            }
        }
        load
    }

    pub fn satisfies_capacities(&self, p: &Problem, capacities: &[Rational]) -> bool {
        self.edge_loads(p).iter().zip(capacities).all(|(l, c)| l <= c)
    }
}

/// Def-14 test on a subset of `S∪E`: exactly one source, and every edge has an
/// input inside the subset.
pub fn is_routing_subnetwork(p: &Problem, pg: &ProblemGround, t: Subset) -> bool {
    let sources: Vec<usize> = (0..p.num_sources()).filter(|&s| t.contains(pg.sources[s])).collect();
    if sources.len() != 1 {
        return false;
    }
    (0..p.num_edges())
        .filter(|&e| t.contains(pg.edges[e]))
        .all(|e| p.in_edge_of(e).iter().any(|&el| t.contains(pg.element(el))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingMode {
    Strict,
    Generalised,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingResult {
    pub mode: RoutingMode,
    pub status: RoutingStatus,
    pub value: Option<Rational>,
    pub packing: Packing,
    pub rates: Vec<Rational>,
    /// Sources with positive demand but no sink-covering subnetwork (strict).
    pub structurally_zero: Vec<usize>,
    pub columns: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingExport {
    pub mode: RoutingMode,
    pub status: RoutingStatus,
    pub value: Option<String>,
    pub packing: Vec<PackingEntryExport>,
    pub structurally_zero: Vec<String>,
    pub columns: usize,
}

impl RoutingResult {
    pub fn to_export(&self, p: &Problem) -> RoutingExport {
        RoutingExport {
            mode: self.mode,
            status: self.status,
            value: self.value.as_ref().map(rational::format_rational),
            packing: self.packing.to_export(p),
            structurally_zero: self.structurally_zero.iter().map(|&s| p.sources[s].id.clone()).collect(),
            columns: self.columns,
        }
    }
}

/// Packing LP over explicitly enumerated subnetworks.
///
/// Strict: sink-covering columns, `Σ_{T∋e} c_T ≤ ω(e)`, `Σ_{ν(T)=s} c_T = λ(s)`.
/// Generalised: all columns, and `Σ_{ν(T)=s, T∩in(u)≠∅} c_T ≥ λ(s)` per sink.
/// `λ` is fixed, `t·λ0`, or free with objective `Σ w_s λ(s)` per `mode`.
pub fn routing_capacity(
    p: &Problem,
    mode: RoutingMode,
    capacities: &[Rational],
    rates: &BoundMode,
    minimal: bool,
) -> Result<RoutingResult> {
    if capacities.len() != p.num_edges() {
        return Err(Error::Shape(format!("{} capacities for {} edges", capacities.len(), p.num_edges())));
    }
    let opts = EnumerateOptions { require_sink_coverage: mode == RoutingMode::Strict, minimal };
    let mut columns = Vec::new();
    for s in 0..p.num_sources() {
        columns.extend(enumerate_subnetworks(p, s, opts)?);
    }
    let mut lp = LinearProgram::new(Sense::Max);
    let cvars: Vec<usize> = (0..columns.len()).map(|i| lp.add_var(format!("c{i}"))).collect();
    let rvars: Vec<usize> = (0..p.num_sources()).map(|s| lp.add_var(format!("rate({})", p.sources[s].id))).collect();
    for e in 0..p.num_edges() {
        let coeffs: Vec<(usize, Rational)> = columns
            .iter()
            .zip(&cvars)
            .filter(|(t, _)| t.edges.contains(&e))
            .map(|(_, &v)| (v, rational::one()))
            .collect();
        if !coeffs.is_empty() {
            lp.add_row(coeffs, Relation::Le, capacities[e].clone());
        }
    }
    for s in 0..p.num_sources() {
        match mode {
            RoutingMode::Strict => {
                let mut coeffs: Vec<(usize, Rational)> = columns
                    .iter()
                    .zip(&cvars)
                    .filter(|(t, _)| t.source == s)
                    .map(|(_, &v)| (v, rational::one()))
                    .collect();
                coeffs.push((rvars[s], -rational::one()));
                lp.add_row(coeffs, Relation::Eq, rational::zero());
            }
            RoutingMode::Generalised => {
                for k in 0..p.sources[s].sinks.len() {
                    let mut coeffs: Vec<(usize, Rational)> = columns
                        .iter()
                        .zip(&cvars)
                        .filter(|(t, _)| t.source == s && touched(p, s, t.mask()) >> k & 1 == 1)
                        .map(|(_, &v)| (v, rational::one()))
                        .collect();
                    coeffs.push((rvars[s], -rational::one()));
                    lp.add_row(coeffs, Relation::Ge, rational::zero());
                }
            }
        }
    }
    let vector = match rates {
        BoundMode::Feasibility { rates } => rates,
        BoundMode::Throughput { direction } => direction,
        BoundMode::Weighted { weights } => weights,
    };
    if vector.len() != p.num_sources() || vector.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidArgument("rate vector must be nonnegative with one entry per source".into()));
    }
    let feasibility = matches!(rates, BoundMode::Feasibility { .. });
    match rates {
        BoundMode::Feasibility { rates } => {
            for (s, r) in rates.iter().enumerate() {
                lp.add_row(vec![(rvars[s], rational::one())], Relation::Eq, r.clone());
            }
            lp.set_objective(Vec::new(), Sense::Max);
        }
        BoundMode::Throughput { direction } => {
            let t = lp.add_var("t");
            for (s, d) in direction.iter().enumerate() {
                lp.add_row(vec![(rvars[s], rational::one()), (t, -d.clone())], Relation::Eq, rational::zero());
            }
            lp.set_objective(vec![(t, rational::one())], Sense::Max);
        }
        BoundMode::Weighted { weights } => {
            lp.set_objective(rvars.iter().zip(weights).map(|(&v, w)| (v, w.clone())).collect(), Sense::Max);
        }
    }
    let structurally_zero = if mode == RoutingMode::Strict {
        (0..p.num_sources())
            .filter(|&s| vector[s].is_positive() && !columns.iter().any(|t| t.source == s))
            .collect()
    } else {
        Vec::new()
    };
    let sol = lp::solve_with(&lp, SolverOptions::default());
    let status = match sol.status {
        LpStatus::Optimal if feasibility => RoutingStatus::Feasible,
        LpStatus::Optimal => RoutingStatus::Optimal,
        LpStatus::Infeasible => RoutingStatus::Infeasible,
        LpStatus::Unbounded => RoutingStatus::Unbounded,
        LpStatus::BudgetExhausted => return Err(Error::BudgetExhausted),
    };
    let mut packing = Packing::default();
    let mut out_rates = Vec::new();
    if sol.status == LpStatus::Optimal {
        for (t, &v) in columns.iter().zip(&cvars) {
            if !sol.primal[v].is_zero() {
                packing.entries.push((t.clone(), sol.primal[v].clone()));
            }
        }
        out_rates = rvars.iter().map(|&v| sol.primal[v].clone()).collect();
    }
    Ok(RoutingResult {
        mode,
        status,
        value: if feasibility { None } else { sol.optimum },
        packing,
        rates: out_rates,
        structurally_zero,
        columns: columns.len(),
    })
}

/// `Σ c_T · atomic(T ∪ {ν(T)})` on `S∪E`.
pub fn packing_to_rank_function(p: &Problem, packing: &Packing) -> Result<RankFunction> {
    let pg = ProblemGround::new(p, false)?;
    let terms: Vec<(Rational, Subset)> = packing
        .entries
        .iter()
        .map(|(t, c)| {
            let set = t
                .edges
                .iter()
                .fold(Subset::singleton(pg.sources[t.source]), |acc, &e| acc.with(pg.edges[e]));
            (c.clone(), set)
        })
        .collect();
    almost_atomic_sum(&pg.ground, &terms)
}
