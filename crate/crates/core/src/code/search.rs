//! Exhaustive depth-first code search in topological edge order.
//!
//! Table codes: only the table rows that occur on the current support are
//! enumerated (the rest are fixed to 0), and each edge's values are taken in
//! restricted-growth order so that codes differing by a relabelling of an
//! edge alphabet are visited once. Linear codes: each edge takes one
//! representative per column space reachable from its inputs. Both reductions
//! preserve existence, decodability, secrecy and fitness.
//!
//! After every edge a cut test prunes: for each sink, everything it will ever
//! observe is a function of the sources, keys and assigned edges still
//! feeding unassigned edges or the sink itself, so that set must already
//! determine the demanded sources. Secrecy is necessary on every subset of an
//! adversary's taps and is tested on the assigned ones.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use super::eval::{self, worlds};
use super::{GeneralCode, LinearCode, RoutedPart, MAX_TABLE_ENTRIES};
use crate::error::{Error, Result};
use crate::model::{Element, Problem};
use crate::rank::gf::{Field, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub strong_secrecy: bool,
    /// Maximum number of edge assignments tried, over all workers.
    pub budget: u64,
    /// Workers split the first edge's choices. With more than one worker the
    /// code returned is still the first in enumeration order, but budget
    /// exhaustion may be reported differently between runs.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { strong_secrecy: false, budget: 10_000_000, workers: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<C> {
    Found(C),
    /// The whole space was enumerated without success.
    NotFound,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport<C> {
    pub outcome: SearchOutcome<C>,
    /// Edge assignments tried.
    pub nodes: u64,
}

/// Alphabet sizes of a table-code search. For a routing link the edge entry
/// is the alphabet of each routed part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSpace {
    pub source_alphabets: Vec<u32>,
    pub edge_alphabets: Vec<u32>,
    pub key_alphabets: Option<Vec<u32>>,
}

impl GeneralSpace {
    pub fn uniform(p: &Problem, source: u32, edge: u32) -> Self {
        Self {
            source_alphabets: vec![source; p.num_sources()],
            edge_alphabets: vec![edge; p.num_edges()],
            key_alphabets: None,
        }
    }
}

/// Dimensions of a linear-code search over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpace {
    pub q: u32,
    pub lengths: Vec<usize>,
    pub widths: Vec<usize>,
    pub key_lengths: Option<Vec<usize>>,
}

impl LinearSpace {
    pub fn uniform(p: &Problem, q: u32, length: usize, width: usize) -> Self {
        Self { q, lengths: vec![length; p.num_sources()], widths: vec![width; p.num_edges()], key_lengths: None }
    }
}

/// A search problem as a sequence of per-edge choices.
trait Engine: Sync {
    type State: Clone + Send + Sync;
    type Cursor;
    type Code: Send;
    fn depths(&self) -> usize;
    fn initial(&self) -> Self::State;
    fn start(&self, k: usize, st: &Self::State) -> Result<Self::Cursor>;
    /// Moves to the next choice; false when none is left.
    fn advance(&self, c: &mut Self::Cursor) -> bool;
    fn apply(&self, k: usize, st: &mut Self::State, c: &Self::Cursor);
    /// Cut and secrecy tests after the first `assigned` edges.
    fn feasible(&self, assigned: usize, st: &Self::State) -> bool;
    fn finish(&self, st: &Self::State) -> Self::Code;
}

struct Shared {
    counter: AtomicU64,
    budget: u64,
    budget_hit: AtomicBool,
    /// Lowest first-edge choice index with a known solution.
    best: AtomicUsize,
}

impl Shared {
    fn new(budget: u64) -> Self {
        Self { counter: AtomicU64::new(0), budget, budget_hit: AtomicBool::new(false), best: AtomicUsize::new(usize::MAX) }
    }

    /// Charges one assignment; false once the budget is spent.
    fn charge(&self) -> bool {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.budget_hit.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Returns true when the search should stop.
fn dfs<E: Engine>(
    e: &E,
    k: usize,
    st: &mut E::State,
    shared: &Shared,
    root: usize,
    leaf: &mut dyn FnMut(E::Code) -> bool,
) -> Result<bool> {
    if k == e.depths() {
        return Ok(leaf(e.finish(st)));
    }
    let mut cur = e.start(k, st)?;
    loop {
        if shared.best.load(Ordering::Relaxed) < root || !shared.charge() {
            return Ok(true);
        }
        e.apply(k, st, &cur);
        if e.feasible(k + 1, st) && dfs(e, k + 1, st, shared, root, leaf)? {
            return Ok(true);
        }
        if !e.advance(&mut cur) {
            return Ok(false);
        }
    }
}

fn run_first<E: Engine>(e: &E, opts: &SearchOptions) -> Result<SearchReport<E::Code>> {
    let shared = Shared::new(opts.budget);
    let init = e.initial();
    if !e.feasible(0, &init) {
        return Ok(SearchReport { outcome: SearchOutcome::NotFound, nodes: 0 });
    }
    if e.depths() == 0 {
        return Ok(SearchReport { outcome: SearchOutcome::Found(e.finish(&init)), nodes: 0 });
    }
    let workers = opts.workers.max(1);
    let found: Mutex<Vec<(usize, E::Code)>> = Mutex::new(Vec::new());
    let errors: Mutex<Vec<Error>> = Mutex::new(Vec::new());
    let work = |w: usize| -> Result<()> {
        let mut st = init.clone();
        let mut cur = e.start(0, &st)?;
        let mut i = 0usize;
        loop {
            if i % workers == w {
                if shared.best.load(Ordering::Relaxed) < i || !shared.charge() {
                    return Ok(());
                }
                e.apply(0, &mut st, &cur);
                if e.feasible(1, &st) {
                    let mut leaf = |code: E::Code| {
                        found.lock().expect("lock").push((i, code));
                        shared.best.fetch_min(i, Ordering::Relaxed);
                        true
                    };
                    dfs(e, 1, &mut st, &shared, i, &mut leaf)?;
                }
            }
            if !e.advance(&mut cur) {
                return Ok(());
            }
            i += 1;
        }
    };
    if workers == 1 {
        work(0)?;
    } else {
        std::thread::scope(|scope| {
            for w in 0..workers {
                let work = &work;
                let errors = &errors;
                scope.spawn(move || {
                    if let Err(err) = work(w) {
                        errors.lock().expect("lock").push(err);
                    }
                });
            }
        });
        if let Some(err) = errors.into_inner().expect("lock").pop() {
            return Err(err);
        }
    }
    let nodes = shared.counter.load(Ordering::Relaxed).min(opts.budget);
    let mut found = found.into_inner().expect("lock");
    found.sort_by_key(|(i, _)| *i);
    let outcome = match found.into_iter().next() {
        Some((_, code)) => SearchOutcome::Found(code),
        None if shared.budget_hit.load(Ordering::Relaxed) => SearchOutcome::BudgetExhausted,
        None => SearchOutcome::NotFound,
    };
    Ok(SearchReport { outcome, nodes })
}

fn run_each<E: Engine>(
    e: &E,
    opts: &SearchOptions,
    visit: &mut dyn FnMut(E::Code) -> ControlFlow<()>,
) -> Result<SearchReport<()>> {
    let shared = Shared::new(opts.budget);
    let mut st = e.initial();
    let mut stopped = false;
    if e.feasible(0, &st) {
        let mut leaf = |code: E::Code| {
            stopped = visit(code).is_break();
            stopped
        };
        dfs(e, 0, &mut st, &shared, 0, &mut leaf)?;
    }
    let outcome = if shared.budget_hit.load(Ordering::Relaxed) {
        SearchOutcome::BudgetExhausted
    } else if stopped {
        SearchOutcome::Found(())
    } else {
        SearchOutcome::NotFound
    };
    Ok(SearchReport { outcome, nodes: shared.counter.load(Ordering::Relaxed).min(opts.budget) })
}

/// What must be tested once the first `j` edges (in search order) are fixed.
#[derive(Clone, Debug, Default)]
struct Checks {
    /// Per sink: the elements it can still learn from, and the demanded
    /// sources not already among them.
    sinks: Vec<(Vec<Element>, Vec<usize>)>,
    /// Per adversary: targets and already assigned taps.
    adversaries: Vec<(Vec<usize>, Vec<usize>)>,
}

fn build_checks(p: &Problem, order: &[usize], keyed: bool, secrecy: bool) -> Vec<Checks> {
    let mut demands: Vec<Vec<usize>> = vec![Vec::new(); p.num_nodes()];
    for (s, src) in p.sources.iter().enumerate() {
        for &u in &src.sinks {
            demands[u].push(s);
        }
    }
    (0..=order.len())
        .map(|j| {
            let assigned: HashSet<usize> = order[..j].iter().copied().collect();
            let mut frontier: Vec<Element> = Vec::new();
            for &e in &order[j..] {
                frontier.extend(p.in_edge_of(e));
                if keyed {
                    frontier.push(Element::Node(p.edges[e].tail));
                }
            }
            let mut checks = Checks::default();
            for (u, want) in demands.iter().enumerate() {
                if want.is_empty() {
                    continue;
                }
                let mut info: Vec<Element> = frontier.iter().chain(p.in_node_of(u)).copied().collect();
                info.retain(|el| match el {
                    Element::Edge(f) => assigned.contains(f),
                    _ => true,
                });
                info.sort();
                info.dedup();
                let open: Vec<usize> = want.iter().copied().filter(|&s| !info.contains(&Element::Source(s))).collect();
                if !open.is_empty() {
                    checks.sinks.push((info, open));
                }
            }
            if secrecy {
                for adv in p.adversaries() {
                    let taps: Vec<usize> = adv.taps.iter().copied().filter(|e| assigned.contains(e)).collect();
                    if !taps.is_empty() {
                        checks.adversaries.push((adv.targets.clone(), taps));
                    }
                }
            }
            checks
        })
        .collect()
}

// ---------------------------------------------------------------------------
// table codes

/// Restricted growth strings of a given length over an alphabet, in
/// lexicographic order starting from all zeros.
#[derive(Clone, Debug)]
struct Rgs {
    alphabet: u32,
    cur: Vec<u32>,
}

impl Rgs {
    fn new(len: usize, alphabet: u32) -> Self {
        Self { alphabet, cur: vec![0; len] }
    }

    fn advance(&mut self) -> bool {
        let n = self.cur.len();
        let mut prefix_max = vec![0u32; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.cur[i - 1]);
        }
        for i in (1..n).rev() {
            if self.cur[i] <= prefix_max[i] && self.cur[i] + 1 < self.alphabet {
                self.cur[i] += 1;
                self.cur[i + 1..].iter_mut().for_each(|x| *x = 0);
                return true;
            }
        }
        false
    }
}

/// One group of enumerated table rows: the rows `used` (first occurrence
/// order) and, per world, which of them it hits.
#[derive(Clone, Debug)]
struct Group {
    rows: usize,
    used: Vec<usize>,
    slot: Vec<usize>,
    rgs: Rgs,
}

impl Group {
    fn new(rows: usize, index: impl Iterator<Item = usize>, worlds: usize, alphabet: u32) -> Self {
        let mut pos = std::collections::HashMap::new();
        let mut used = Vec::new();
        let mut slot = Vec::with_capacity(worlds);
        for r in index {
            let next = used.len();
            let j = *pos.entry(r).or_insert_with(|| {
                used.push(r);
                next
            });
            slot.push(j);
        }
        let rgs = Rgs::new(used.len(), alphabet);
        Self { rows, used, slot, rgs }
    }

    fn table(&self) -> Vec<u32> {
        let mut t = vec![0; self.rows];
        for (j, &r) in self.used.iter().enumerate() {
            t[r] = self.rgs.cur[j];
        }
        t
    }
}

struct GeneralEngine<'a> {
    p: &'a Problem,
    space: &'a GeneralSpace,
    order: Vec<usize>,
    worlds: usize,
    sources: Vec<Vec<u32>>,
    keys: Vec<Vec<u32>>,
    checks: Vec<Checks>,
}

#[derive(Clone)]
struct GeneralState {
    values: Vec<Vec<u32>>,
    tables: Vec<Vec<u32>>,
    routed: Vec<Option<Vec<RoutedPart>>>,
}

impl<'a> GeneralEngine<'a> {
    fn new(p: &'a Problem, space: &'a GeneralSpace, opts: &SearchOptions) -> Result<Self> {
        if space.source_alphabets.len() != p.num_sources() || space.edge_alphabets.len() != p.num_edges() {
            return Err(Error::Shape("search alphabets do not match the problem".into()));
        }
        if let Some(k) = &space.key_alphabets {
            if k.len() != p.num_nodes() {
                return Err(Error::Shape("key alphabets do not match the problem".into()));
            }
        }
        if space.source_alphabets.iter().chain(&space.edge_alphabets).chain(space.key_alphabets.iter().flatten()).any(|&a| a == 0) {
            return Err(Error::InvalidArgument("alphabet sizes must be at least 1".into()));
        }
        if opts.strong_secrecy && !p.is_secure() {
            return Err(Error::InvalidArgument("strong secrecy needs a wiretap pattern".into()));
        }
        let keys: Vec<u32> = (0..p.num_nodes()).map(|u| space.key_alphabets.as_ref().map_or(1, |k| k[u])).collect();
        let (n, sources, keys) = worlds(&space.source_alphabets, &keys)?;
        let order = p.topological_order().to_vec();
        let checks = build_checks(p, &order, space.key_alphabets.is_some(), opts.strong_secrecy);
        Ok(Self { p, space, order, worlds: n, sources, keys, checks })
    }

    fn input_alphabet(&self, el: Element) -> u32 {
        match el {
            Element::Source(s) => self.space.source_alphabets[s],
            Element::Edge(f) => self.edge_alphabet(f),
            Element::Node(u) => self.space.key_alphabets.as_ref().map_or(1, |k| k[u]),
        }
    }

    /// Full alphabet of an edge value.
    fn edge_alphabet(&self, e: usize) -> u32 {
        let a = self.space.edge_alphabets[e];
        if self.p.is_routing_link(e) {
            a.saturating_pow(self.p.in_edge_of(e).len() as u32)
        } else {
            a
        }
    }

    fn column<'s>(&'s self, st: &'s GeneralState, el: Element) -> &'s [u32] {
        match el {
            Element::Source(s) => &self.sources[s],
            Element::Edge(f) => &st.values[f],
            Element::Node(u) => &self.keys[u],
        }
    }
}

impl Engine for GeneralEngine<'_> {
    type State = GeneralState;
    type Cursor = Vec<Group>;
    type Code = GeneralCode;

    fn depths(&self) -> usize {
        self.order.len()
    }

    fn initial(&self) -> GeneralState {
        let m = self.p.num_edges();
        GeneralState { values: vec![vec![0; self.worlds]; m], tables: vec![Vec::new(); m], routed: vec![None; m] }
    }

    fn start(&self, k: usize, st: &GeneralState) -> Result<Vec<Group>> {
        let e = self.order[k];
        let ins = self.p.in_edge_of(e);
        let a = self.space.edge_alphabets[e];
        if self.p.is_routing_link(e) {
            return Ok(ins
                .iter()
                .map(|&el| {
                    let col = self.column(st, el);
                    Group::new(self.input_alphabet(el) as usize, col.iter().map(|&x| x as usize), self.worlds, a)
                })
                .collect());
        }
        let mut radices: Vec<u32> = ins.iter().map(|&el| self.input_alphabet(el)).collect();
        let mut cols: Vec<&[u32]> = ins.iter().map(|&el| self.column(st, el)).collect();
        let tail = self.p.edges[e].tail;
        radices.push(self.input_alphabet(Element::Node(tail)));
        cols.push(&self.keys[tail]);
        let rows = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r as usize))
            .filter(|&n| n <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| Error::InvalidArgument(format!("table of {} is too large", self.p.edges[e].id)))?;
        let index = (0..self.worlds).map(|w| cols.iter().zip(&radices).fold(0usize, |acc, (c, &r)| acc * r as usize + c[w] as usize));
        Ok(vec![Group::new(rows, index, self.worlds, a)])
    }

    fn advance(&self, c: &mut Vec<Group>) -> bool {
        for g in c.iter_mut().rev() {
            if g.rgs.advance() {
                return true;
            }
            let len = g.rgs.cur.len();
            g.rgs = Rgs::new(len, g.rgs.alphabet);
        }
        false
    }

    fn apply(&self, k: usize, st: &mut GeneralState, c: &Vec<Group>) {
        let e = self.order[k];
        let a = self.space.edge_alphabets[e];
        let vals = &mut st.values[e];
        for (w, v) in vals.iter_mut().enumerate() {
            *v = c.iter().fold(0, |acc, g| acc * a + g.rgs.cur[g.slot[w]]);
        }
        if self.p.is_routing_link(e) {
            st.routed[e] = Some(c.iter().map(|g| RoutedPart { alphabet: a, table: g.table() }).collect());
        } else {
            st.tables[e] = c[0].table();
        }
    }

    fn feasible(&self, assigned: usize, st: &GeneralState) -> bool {
        let checks = &self.checks[assigned];
        for (info, open) in &checks.sinks {
            let obs: Vec<&[u32]> = info.iter().map(|&el| self.column(st, el)).collect();
            let target: Vec<&[u32]> = open.iter().map(|&s| self.sources[s].as_slice()).collect();
            if eval::determines(&obs, &target, self.worlds).is_some() {
                return false;
            }
        }
        for (targets, taps) in &checks.adversaries {
            let a: Vec<&[u32]> = targets.iter().map(|&s| self.sources[s].as_slice()).collect();
            let b: Vec<&[u32]> = taps.iter().map(|&e| st.values[e].as_slice()).collect();
            if !eval::independent(&a, &b, self.worlds) {
                return false;
            }
        }
        true
    }

    fn finish(&self, st: &GeneralState) -> GeneralCode {
        GeneralCode {
            source_alphabets: self.space.source_alphabets.clone(),
            edge_alphabets: (0..self.p.num_edges()).map(|e| self.edge_alphabet(e)).collect(),
            key_alphabets: self.space.key_alphabets.clone(),
            tables: st.tables.clone(),
            routed: st.routed.clone(),
        }
    }
}

/// First zero-error (and, if asked, strongly secure) table code in the
/// canonical enumeration order.
pub fn search_general(p: &Problem, space: &GeneralSpace, opts: &SearchOptions) -> Result<SearchReport<GeneralCode>> {
    let engine = GeneralEngine::new(p, space, opts)?;
    run_first(&engine, opts)
}

/// Visits every canonical zero-error table code until the visitor breaks.
/// Single-threaded; `opts.workers` is ignored.
pub fn search_general_each(
    p: &Problem,
    space: &GeneralSpace,
    opts: &SearchOptions,
    mut visit: impl FnMut(GeneralCode) -> ControlFlow<()>,
) -> Result<SearchReport<()>> {
    let engine = GeneralEngine::new(p, space, opts)?;
    run_each(&engine, opts, &mut visit)
}

// ---------------------------------------------------------------------------
// linear codes

struct LinearEngine<'a> {
    p: &'a Problem,
    space: &'a LinearSpace,
    field: Field,
    template: LinearCode,
    order: Vec<usize>,
    checks: Vec<Checks>,
}

/// Candidate kernels for one edge, distinct column spaces, highest rank first.
struct LinearCursor {
    options: Vec<Matrix>,
    at: usize,
}

impl<'a> LinearEngine<'a> {
    fn new(p: &'a Problem, space: &'a LinearSpace, opts: &SearchOptions) -> Result<Self> {
        let field = Field::new(space.q)?;
        if space.lengths.len() != p.num_sources() || space.widths.len() != p.num_edges() {
            return Err(Error::Shape("search dimensions do not match the problem".into()));
        }
        if let Some(k) = &space.key_lengths {
            if k.len() != p.num_nodes() {
                return Err(Error::Shape("key lengths do not match the problem".into()));
            }
        }
        if opts.strong_secrecy && !p.is_secure() {
            return Err(Error::InvalidArgument("strong secrecy needs a wiretap pattern".into()));
        }
        let mut template = LinearCode {
            q: space.q,
            lengths: space.lengths.clone(),
            key_lengths: space.key_lengths.clone(),
            kernels: Vec::new(),
        };
        let dim = template.total_dim();
        template.kernels = space.widths.iter().map(|&w| Matrix::zeros(dim, w)).collect();
        let order = p.topological_order().to_vec();
        let checks = build_checks(p, &order, space.key_lengths.is_some(), opts.strong_secrecy);
        Ok(Self { p, space, field, template, order, checks })
    }
}

impl Engine for LinearEngine<'_> {
    type State = LinearCode;
    type Cursor = LinearCursor;
    type Code = LinearCode;

    fn depths(&self) -> usize {
        self.order.len()
    }

    fn initial(&self) -> LinearCode {
        self.template.clone()
    }

    fn start(&self, k: usize, st: &LinearCode) -> Result<LinearCursor> {
        let e = self.order[k];
        let width = self.space.widths[e];
        let input = st.input_kernel(self.p, e).column_space(&self.field);
        let entries = input.cols() * width;
        let q = self.space.q as usize;
        let count = q
            .checked_pow(entries as u32)
            .filter(|&n| n <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| Error::InvalidArgument(format!("too many local kernels for {}", self.p.edges[e].id)))?;
        let mut seen = HashSet::new();
        let mut options: Vec<(usize, Matrix)> = Vec::new();
        for idx in 0..count {
            let mut psi = Matrix::zeros(input.cols(), width);
            let mut rest = idx;
            for r in 0..input.cols() {
                for c in 0..width {
                    psi.set(r, c, (rest % q) as u32);
                    rest /= q;
                }
            }
            let g = input.mul(&psi, &self.field)?;
            let basis = g.column_space(&self.field);
            if seen.insert(basis.clone()) {
                let rank = basis.cols();
                let mut kernel = Matrix::zeros(input.rows(), width);
                for r in 0..basis.rows() {
                    for c in 0..rank {
                        kernel.set(r, c, basis.get(r, c));
                    }
                }
                options.push((rank, kernel));
            }
        }
        options.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(LinearCursor { options: options.into_iter().map(|(_, m)| m).collect(), at: 0 })
    }

    fn advance(&self, c: &mut LinearCursor) -> bool {
        c.at += 1;
        c.at < c.options.len()
    }

    fn apply(&self, k: usize, st: &mut LinearCode, c: &LinearCursor) {
        st.kernels[self.order[k]] = c.options[c.at].clone();
    }

    fn feasible(&self, assigned: usize, st: &LinearCode) -> bool {
        let checks = &self.checks[assigned];
        for (info, open) in &checks.sinks {
            let obs = st.kernel_of_set(info);
            for &s in open {
                if !st.source_kernel(s).columns_in_span_of(&obs, &self.field).expect("same ambient dimension") {
                    return false;
                }
            }
        }
        for (targets, taps) in &checks.adversaries {
            let a: Vec<Element> = targets.iter().map(|&s| Element::Source(s)).collect();
            let b: Vec<Element> = taps.iter().map(|&e| Element::Edge(e)).collect();
            let ra = st.kernel_of_set(&a).rank(&self.field);
            let rb = st.kernel_of_set(&b).rank(&self.field);
            let rab = st.kernel_of_set(&[a, b].concat()).rank(&self.field);
            if ra + rb != rab {
                return false;
            }
        }
        true
    }

    fn finish(&self, st: &LinearCode) -> LinearCode {
        st.clone()
    }
}

/// First linear code over GF(q) with the given dimensions that is zero-error
/// (and, if asked, strongly secure).
pub fn search_linear(p: &Problem, space: &LinearSpace, opts: &SearchOptions) -> Result<SearchReport<LinearCode>> {
    let engine = LinearEngine::new(p, space, opts)?;
    run_first(&engine, opts)
}

/// Visits every canonical zero-error linear code until the visitor breaks.
pub fn search_linear_each(
    p: &Problem,
    space: &LinearSpace,
    opts: &SearchOptions,
    mut visit: impl FnMut(LinearCode) -> ControlFlow<()>,
) -> Result<SearchReport<()>> {
    let engine = LinearEngine::new(p, space, opts)?;
    run_each(&engine, opts, &mut visit)
}
