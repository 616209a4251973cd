//! Polymatroid (Shannon) outer bound.
//!
//! The LP ranges over rank functions `h` on `S∪E` (or `S∪E∪V` in secure mode)
//! satisfying the elemental inequalities and the independence, transmission,
//! decoding (and secrecy) constraints, with `h(e) ≤ ω(e)`.
//!
//! `build_lp` emits the full LP. `outer_bound` solves an equivalent smaller
//! one: transmission and decoding equalities force `h(α) = h(cl α)` where `cl`
//! adds every edge whose inputs are present and every source decodable at a
//! sink whose inputs are present, so only closed sets need variables.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense, SolverOptions};
use crate::model::{Element, Problem};
use crate::rank::constraints::{check_with, ConstraintSet, ConstraintViolation, ProblemGround};
use crate::rank::{elemental_inequalities, Elemental, PolymatroidViolation, RankFunction, Subset};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundMode {
    /// Is `(λ, ω)` inside the bound?
    Feasibility { rates: Vec<Rational> },
    /// Largest `t` with `(t·λ0, ω)` inside the bound.
    Throughput { direction: Vec<Rational> },
    /// Largest `Σ w_s h(s)`.
    Weighted { weights: Vec<Rational> },
}

impl BoundMode {
    pub fn name(&self) -> &'static str {
        match self {
            BoundMode::Feasibility { .. } => "feasibility",
            BoundMode::Throughput { .. } => "throughput",
            BoundMode::Weighted { .. } => "weighted",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundQuery {
    pub problem: Problem,
    pub capacities: Vec<Rational>,
    pub mode: BoundMode,
    pub secure: bool,
}

impl BoundQuery {
    /// Validates lengths and signs; capacities default to the problem's.
    pub fn new(problem: Problem, capacities: Option<Vec<Rational>>, mode: BoundMode, secure: bool) -> Result<Self> {
        let capacities = capacities.unwrap_or_else(|| problem.capacities_or_unit());
        if capacities.len() != problem.num_edges() {
            return Err(Error::Shape(format!("{} capacities for {} edges", capacities.len(), problem.num_edges())));
        }
        if capacities.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidArgument("negative capacity".into()));
        }
        let vector = match &mode {
            BoundMode::Feasibility { rates } => rates,
            BoundMode::Throughput { direction } => direction,
            BoundMode::Weighted { weights } => weights,
        };
        if vector.len() != problem.num_sources() {
            return Err(Error::Shape(format!("{} rates for {} sources", vector.len(), problem.num_sources())));
        }
        if vector.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidArgument("negative rate, direction or weight".into()));
        }
        if !matches!(mode, BoundMode::Feasibility { .. }) && vector.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidArgument("direction or weights are all zero".into()));
        }
        if secure && !problem.is_secure() {
            return Err(Error::InvalidArgument("secure bound needs a wiretap pattern".into()));
        }
        Ok(Self { problem, capacities, mode, secure })
    }

    pub fn throughput(problem: Problem) -> Result<Self> {
        let direction = vec![rational::one(); problem.num_sources()];
        Self::new(problem, None, BoundMode::Throughput { direction }, false)
    }

    pub fn ground(&self) -> Result<ProblemGround> {
        ProblemGround::new(&self.problem, self.secure)
    }

    /// Rates checked by `check_point`: `λ`, the direction `λ0`, or none.
    fn point_rates(&self) -> Option<&[Rational]> {
        match &self.mode {
            BoundMode::Feasibility { rates } => Some(rates),
            BoundMode::Throughput { direction } => Some(direction),
            BoundMode::Weighted { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundOptions {
    /// Solve over closed sets only.
    pub reduced: bool,
    pub pivot_budget: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self { reduced: true, pivot_budget: lp::DEFAULT_PIVOT_BUDGET }
    }
}

/// Variable layout of the full LP: `h(α)` sits at column `α − 1`, then `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpLayout {
    pub ground: ProblemGround,
    pub t: Option<usize>,
}

struct Builder<'a> {
    q: &'a BoundQuery,
    pg: ProblemGround,
}

impl Builder<'_> {
    fn sources(&self) -> Vec<Subset> {
        self.pg.sources.iter().map(|&i| Subset::singleton(i)).collect()
    }

    /// Every row as signed subset terms plus extra terms on `t`.
    fn rows(&self) -> Vec<(Vec<(Subset, Rational)>, Rational, Relation, Rational)> {
        let p = &self.q.problem;
        let n = self.pg.ground.len();
        let mut rows = Vec::new();
        let one = rational::one;
        let minus = || -rational::one();
        for ineq in elemental_inequalities(n) {
            let terms = ineq.terms(n).into_iter().map(|(s, c)| (s, rational::q(c))).collect();
            rows.push((terms, rational::zero(), Relation::Ge, rational::zero()));
        }
        // independence
        let mut parts = self.sources();
        if let Some(nodes) = &self.pg.nodes {
            parts.extend(nodes.iter().map(|&i| Subset::singleton(i)));
        }
        let union = parts.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
        let mut terms = vec![(union, one())];
        terms.extend(parts.iter().map(|s| (*s, minus())));
        rows.push((terms, rational::zero(), Relation::Eq, rational::zero()));
        // transmission
        for e in 0..p.num_edges() {
            let cond = self.pg.edge_inputs(p, e);
            let terms = vec![(cond.with(self.pg.edges[e]), one()), (cond, minus())];
            rows.push((terms, rational::zero(), Relation::Eq, rational::zero()));
        }
        // decoding
        for (si, s) in p.sources.iter().enumerate() {
            for &u in &s.sinks {
                let obs = self.pg.set_of(p.in_node_of(u));
                let terms = vec![(obs.with(self.pg.sources[si]), one()), (obs, minus())];
                rows.push((terms, rational::zero(), Relation::Eq, rational::zero()));
            }
        }
        if self.q.secure {
            for adv in p.adversaries() {
                let a = Subset::from_indices(adv.targets.iter().map(|&s| self.pg.sources[s]));
                let b = Subset::from_indices(adv.taps.iter().map(|&e| self.pg.edges[e]));
                let terms = vec![(a, one()), (b, one()), (a.union(b), minus())];
                rows.push((terms, rational::zero(), Relation::Eq, rational::zero()));
            }
        }
        for e in 0..p.num_edges() {
            let terms = vec![(Subset::singleton(self.pg.edges[e]), one())];
            rows.push((terms, rational::zero(), Relation::Le, self.q.capacities[e].clone()));
        }
        match &self.q.mode {
            BoundMode::Feasibility { rates } => {
                for (s, r) in self.sources().into_iter().zip(rates) {
                    rows.push((vec![(s, one())], rational::zero(), Relation::Ge, r.clone()));
                }
            }
            BoundMode::Throughput { direction } => {
                for (s, d) in self.sources().into_iter().zip(direction) {
                    rows.push((vec![(s, one())], -d.clone(), Relation::Ge, rational::zero()));
                }
            }
            BoundMode::Weighted { .. } => {}
        }
        rows
    }

    fn objective(&self) -> (Vec<(Subset, Rational)>, Rational) {
        match &self.q.mode {
            BoundMode::Feasibility { .. } => (Vec::new(), rational::zero()),
            BoundMode::Throughput { .. } => (Vec::new(), rational::one()),
            BoundMode::Weighted { weights } => {
                (self.sources().into_iter().zip(weights.iter().cloned()).collect(), rational::zero())
            }
        }
    }

    fn has_t(&self) -> bool {
        matches!(self.q.mode, BoundMode::Throughput { .. })
    }

    /// Closure under the transmission and decoding rules.
    fn closure_table(&self) -> Vec<u64> {
        let p = &self.q.problem;
        let mut rules: Vec<(Subset, usize)> = Vec::new();
        for e in 0..p.num_edges() {
            rules.push((self.pg.edge_inputs(p, e), self.pg.edges[e]));
        }
        for (si, s) in p.sources.iter().enumerate() {
            for &u in &s.sinks {
                rules.push((self.pg.set_of(p.in_node_of(u)), self.pg.sources[si]));
            }
        }
        (0..self.pg.ground.num_subsets() as u64)
            .map(|m| {
                let mut x = Subset(m);
                loop {
                    let before = x;
                    for (premise, c) in &rules {
                        if premise.is_subset_of(x) {
                            x = x.with(*c);
                        }
                    }
                    if x == before {
                        return x.0;
                    }
                }
            })
            .collect()
    }
}

pub fn build_lp(q: &BoundQuery) -> Result<(LinearProgram, LpLayout)> {
    let b = Builder { q, pg: q.ground()? };
    let n = b.pg.ground.len();
    let mut lp = LinearProgram::new(Sense::Max);
    for m in 1..(1u64 << n) {
        lp.add_var(format!("h({})", b.pg.ground.subset_key(Subset(m))));
    }
    let t = b.has_t().then(|| lp.add_var("t"));
    let col = |s: Subset| s.index() - 1;
    for (terms, tc, rel, rhs) in b.rows() {
        let mut coeffs: Vec<(usize, Rational)> =
            terms.into_iter().filter(|(s, _)| !s.is_empty()).map(|(s, c)| (col(s), c)).collect();
        if let Some(t) = t {
            coeffs.push((t, tc));
        }
        lp.add_row(coeffs, rel, rhs);
    }
    let (obj, tc) = b.objective();
    let mut coeffs: Vec<(usize, Rational)> = obj.into_iter().map(|(s, c)| (col(s), c)).collect();
    if let Some(t) = t {
        coeffs.push((t, tc));
    }
    lp.set_objective(coeffs, Sense::Max);
    Ok((lp, LpLayout { ground: b.pg, t }))
}

/// Reduced LP over closed sets. Returns the LP, the closure table, the
/// variable of each closed set and the `t` column.
fn build_reduced(b: &Builder) -> (LinearProgram, Vec<u64>, HashMap<u64, usize>, Option<usize>) {
    let cl = b.closure_table();
    let zero_set = cl[0];
    let mut lp = LinearProgram::new(Sense::Max);
    let mut var_of: HashMap<u64, usize> = HashMap::new();
    let mut closed: Vec<u64> = cl.iter().copied().filter(|&c| c != zero_set).collect::<HashSet<_>>().into_iter().collect();
    closed.sort_unstable();
    for c in closed {
        var_of.insert(c, lp.add_var(format!("h({})", b.pg.ground.subset_key(Subset(c)))));
    }
    let t = b.has_t().then(|| lp.add_var("t"));
    let substitute = |terms: Vec<(Subset, Rational)>| -> Vec<(usize, Rational)> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (s, c) in terms {
            let target = cl[s.index()];
            if let Some(&v) = var_of.get(&target) {
                *acc.entry(v).or_insert_with(rational::zero) += c;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    };
    let mut seen: HashSet<(Vec<(usize, Rational)>, Rational, u8, Rational)> = HashSet::new();
    for (terms, tc, rel, rhs) in b.rows() {
        let mut coeffs = substitute(terms);
        if let Some(t) = t {
            if !tc.is_zero() {
                coeffs.push((t, tc.clone()));
            }
        }
        if coeffs.is_empty() {
            let holds = match rel {
                Relation::Le => !rhs.is_negative(),
                Relation::Ge => !rhs.is_positive(),
                Relation::Eq => rhs.is_zero(),
            };
            if holds {
                continue;
            }
        }
        let tag = match rel {
            Relation::Le => 0,
            Relation::Eq => 1,
            Relation::Ge => 2,
        };
        if seen.insert((coeffs.clone(), tc, tag, rhs.clone())) {
            lp.add_row(coeffs, rel, rhs);
        }
    }
    let (obj, tc) = b.objective();
    let mut coeffs = substitute(obj);
    if let Some(t) = t {
        coeffs.push((t, tc));
    }
    lp.set_objective(coeffs, Sense::Max);
    (lp, cl, var_of, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub mode: &'static str,
    pub status: BoundStatus,
    pub value: Option<Rational>,
    pub witness: Option<RankFunction>,
    pub dual: Vec<Rational>,
    pub lp_vars: usize,
    pub lp_rows: usize,
    pub pivots: u64,
}

impl BoundResult {
    pub fn dual_rows(&self) -> usize {
        self.dual.iter().filter(|y| !y.is_zero()).count()
    }

    /// Whether the queried tuple lies inside the bound.
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, BoundStatus::Optimal | BoundStatus::Feasible | BoundStatus::Unbounded)
    }

    pub fn to_export(&self) -> BoundExport {
        BoundExport {
            mode: self.mode.to_string(),
            status: self.status,
            value: self.value.as_ref().map(rational::format_rational),
            witness: self.witness.as_ref().map(|h| {
                let g = h.ground();
                WitnessExport {
                    singletons: (0..g.len())
                        .map(|i| (g.labels()[i].clone(), rational::format_rational(h.get(Subset::singleton(i)))))
                        .collect(),
                }
            }),
            dual_rows: self.dual_rows(),
            lp_vars: self.lp_vars,
            lp_rows: self.lp_rows,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessExport {
    pub singletons: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundExport {
    pub mode: String,
    pub status: BoundStatus,
    pub value: Option<String>,
    pub witness: Option<WitnessExport>,
    pub dual_rows: usize,
    pub lp_vars: usize,
    pub lp_rows: usize,
}

pub fn outer_bound(q: &BoundQuery) -> Result<BoundResult> {
    outer_bound_with(q, BoundOptions::default())
}

pub fn outer_bound_with(q: &BoundQuery, opts: BoundOptions) -> Result<BoundResult> {
    let b = Builder { q, pg: q.ground()? };
    let solver = SolverOptions { pivot_budget: opts.pivot_budget };
    let (lp, sol, witness) = if opts.reduced {
        let (lp, cl, var_of, _) = build_reduced(&b);
        let sol = lp::solve_with(&lp, solver);
        let witness = (sol.status == LpStatus::Optimal).then(|| {
            RankFunction::from_fn(b.pg.ground.clone(), |s| {
                var_of.get(&cl[s.index()]).map_or_else(rational::zero, |&v| sol.primal[v].clone())
            })
        });
        (lp, sol, witness)
    } else {
        let (lp, layout) = build_lp(q)?;
        let sol = lp::solve_with(&lp, solver);
        let witness = (sol.status == LpStatus::Optimal).then(|| {
            let mut values = vec![rational::zero()];
            values.extend(sol.primal[..(1usize << layout.ground.ground.len()) - 1].iter().cloned());
            RankFunction::from_values(layout.ground.ground.clone(), values).expect("layout matches ground")
        });
        (lp, sol, witness)
    };
    let feasibility = matches!(q.mode, BoundMode::Feasibility { .. });
    let status = match sol.status {
        LpStatus::Optimal if feasibility => BoundStatus::Feasible,
        LpStatus::Optimal => BoundStatus::Optimal,
        LpStatus::Infeasible => BoundStatus::Infeasible,
        LpStatus::Unbounded => BoundStatus::Unbounded,
        LpStatus::BudgetExhausted => return Err(Error::BudgetExhausted),
    };
    Ok(BoundResult {
        mode: q.mode.name(),
        status,
        value: if feasibility { None } else { sol.optimum.clone() },
        witness,
        dual: sol.dual,
        lp_vars: lp.num_vars(),
        lp_rows: lp.num_rows(),
        pivots: sol.pivots,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionViolation {
    Capacity { edge: String },
    Rate { source: String },
}

/// Per-constraint verdicts for a supplied rank function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub polymatroid: std::result::Result<(), PolymatroidViolation>,
    pub independence: std::result::Result<(), ConstraintViolation>,
    pub transmission: std::result::Result<(), ConstraintViolation>,
    pub decoding: std::result::Result<(), ConstraintViolation>,
    pub secrecy: Option<std::result::Result<(), ConstraintViolation>>,
    pub projection: std::result::Result<(), ProjectionViolation>,
}

impl PointReport {
    pub fn all_pass(&self) -> bool {
        self.polymatroid.is_ok()
            && self.independence.is_ok()
            && self.transmission.is_ok()
            && self.decoding.is_ok()
            && self.secrecy.as_ref().map_or(true, |r| r.is_ok())
            && self.projection.is_ok()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(w) = &self.polymatroid {
            out.push(format!("polymatroid: {w:?}"));
        }
        for r in [&self.independence, &self.transmission, &self.decoding].into_iter().chain(self.secrecy.as_ref()) {
            if let Err(w) = r {
                out.push(w.to_string());
            }
        }
        if let Err(w) = &self.projection {
            out.push(format!("projection: {w:?}"));
        }
        out
    }
}

/// Checks `h` against every constraint of the query's LP, using the query's
/// rates (or direction at `t = 1`) for the source-side projection.
pub fn check_point(h: &RankFunction, q: &BoundQuery) -> Result<PointReport> {
    let pg = ProblemGround::for_oracle(&q.problem, h.ground())?;
    if pg.is_secure() != q.secure {
        return Err(Error::GroundMismatch("rank function mode differs from the query".into()));
    }
    let p = &q.problem;
    let projection = (|| {
        for e in 0..p.num_edges() {
            if h.get(Subset::singleton(pg.element(Element::Edge(e)))) > &q.capacities[e] {
                return Err(ProjectionViolation::Capacity { edge: p.edges[e].id.clone() });
            }
        }
        if let Some(rates) = q.point_rates() {
            for (s, r) in rates.iter().enumerate() {
                if h.get(Subset::singleton(pg.element(Element::Source(s)))) < r {
                    return Err(ProjectionViolation::Rate { source: p.sources[s].id.clone() });
                }
            }
        }
        Ok(())
    })();
    Ok(PointReport {
        polymatroid: h.is_polymatroid(),
        independence: check_with(h, p, &pg, ConstraintSet::Independence),
        transmission: check_with(h, p, &pg, ConstraintSet::Transmission),
        decoding: check_with(h, p, &pg, ConstraintSet::Decoding),
        secrecy: q.secure.then(|| check_with(h, p, &pg, ConstraintSet::Secrecy)),
        projection,
    })
}

/// Number of submodularity rows in the full LP over `n` elements.
pub fn submodular_row_count(n: usize) -> usize {
    elemental_inequalities(n).iter().filter(|e| matches!(e, Elemental::Submodular { .. })).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{butterfly_spec, secure_two_path_spec, single_edge_spec};
    use crate::rank::atomic_function;
    use crate::rational::q;

    fn problem(spec: crate::model::ProblemSpec) -> Problem {
        Problem::from_spec(&spec).unwrap()
    }

    #[test]
    fn full_lp_dimensions_on_butterfly() {
        let query = BoundQuery::throughput(problem(butterfly_spec())).unwrap();
        let (lp, layout) = build_lp(&query).unwrap();
        assert_eq!(layout.ground.ground.len(), 10);
        assert_eq!(lp.num_vars(), 1023 + 1);
        assert_eq!(submodular_row_count(10), 11520);
    }

    #[test]
    fn secure_two_path_ground() {
        let p = problem(secure_two_path_spec());
        let query = BoundQuery::new(p, None, BoundMode::Throughput { direction: vec![q(1)] }, true).unwrap();
        assert_eq!(query.ground().unwrap().ground.len(), 5);
    }

    #[test]
    fn single_edge_throughput_full_and_reduced_agree() {
        let query = BoundQuery::throughput(problem(single_edge_spec())).unwrap();
        let reduced = outer_bound(&query).unwrap();
        let full = outer_bound_with(&query, BoundOptions { reduced: false, ..Default::default() }).unwrap();
        assert_eq!(reduced.value, Some(q(1)));
        assert_eq!(full.value, Some(q(1)));
        assert!(check_point(reduced.witness.as_ref().unwrap(), &query).unwrap().all_pass());
    }

    #[test]
    fn zero_rate_is_feasible_with_zero_witness() {
        let p = problem(single_edge_spec());
        let query = BoundQuery::new(p, None, BoundMode::Feasibility { rates: vec![q(0)] }, false).unwrap();
        let r = outer_bound(&query).unwrap();
        assert_eq!(r.status, BoundStatus::Feasible);
        let zero = RankFunction::zero(query.ground().unwrap().ground);
        assert!(check_point(&zero, &query).unwrap().all_pass());
    }

    #[test]
    fn routing_tree_point_fails_only_the_rate() {
        let p = problem(butterfly_spec());
        let pg = ProblemGround::new(&p, false).unwrap();
        let t = pg.ground.subset_of(&["1", "s-a", "a-t1", "a-c", "c-d", "d-t2"]).unwrap();
        let h = atomic_function(&pg.ground, t).unwrap();
        let query = BoundQuery::new(p, None, BoundMode::Feasibility { rates: vec![q(2)] }, false).unwrap();
        let report = check_point(&h, &query).unwrap();
        assert!(report.independence.is_ok() && report.transmission.is_ok());
        assert_eq!(report.projection, Err(ProjectionViolation::Rate { source: "1".into() }));
    }

    #[test]
    fn rejects_bad_queries() {
        let p = problem(single_edge_spec());
        assert!(BoundQuery::new(p.clone(), None, BoundMode::Throughput { direction: vec![q(0)] }, false).is_err());
        assert!(BoundQuery::new(p.clone(), None, BoundMode::Throughput { direction: vec![q(1)] }, true).is_err());
        assert!(BoundQuery::new(p, Some(vec![q(-1)]), BoundMode::Throughput { direction: vec![q(1)] }, false).is_err());
    }

    #[test]
    fn butterfly_throughput_is_two() {
        let query = BoundQuery::throughput(problem(butterfly_spec())).unwrap();
        let r = outer_bound(&query).unwrap();
        assert_eq!(r.value, Some(q(2)));
        assert!(check_point(r.witness.as_ref().unwrap(), &query).unwrap().all_pass());
    }
}
