//! Problem transformations with their rate-capacity maps, and liftings of
//! block-length-one codes across them.
//!
//! Generated elements carry structured identifiers ("a:<s>", "d:<s>:<u>",
//! "V:[<j>,<e>]", ...) so that their construction role is readable from the
//! id alone; any clash with an existing label is an error.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::code::eval::{self, Evaluation};
use crate::code::{verify, Code, GeneralCode, MAX_TABLE_ENTRIES};
use crate::error::{Error, Result};
use crate::model::{AdversarySpec, Element, HyperedgeSpec, Problem, ProblemSpec, RateCapacityTuple, SourceSpec};
use crate::rational::{self, Rational};

pub const SUPERNODE: &str = "v*";

/// One coordinate of a rate-capacity tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coordinate {
    Rate(usize),
    Capacity(usize),
}

/// A linear map between rate-capacity tuples of two problems: every output
/// coordinate is a nonnegative combination of input coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleMap {
    pub input_sources: usize,
    pub input_edges: usize,
    pub rates: Vec<Vec<(Coordinate, Rational)>>,
    pub capacities: Vec<Vec<(Coordinate, Rational)>>,
}

impl TupleMap {
    pub fn apply(&self, t: &RateCapacityTuple) -> Result<RateCapacityTuple> {
        if t.rates.len() != self.input_sources || t.capacities.len() != self.input_edges {
            return Err(Error::Shape("tuple does not match the map's input problem".into()));
        }
        let eval = |terms: &Vec<(Coordinate, Rational)>| {
            terms.iter().fold(rational::zero(), |acc, (c, k)| {
                acc + k * match *c {
                    Coordinate::Rate(s) => &t.rates[s],
                    Coordinate::Capacity(e) => &t.capacities[e],
                }
            })
        };
        Ok(RateCapacityTuple {
            rates: self.rates.iter().map(eval).collect(),
            capacities: self.capacities.iter().map(eval).collect(),
        })
    }

    /// `{"rates": {id: [{"coefficient", "rate"|"capacity"}]}, "capacities": ...}`
    /// with labels of the input problem inside and of the output outside.
    pub fn to_json(&self, input: &Problem, output: &Problem) -> serde_json::Value {
        let terms = |v: &Vec<(Coordinate, Rational)>| {
            v.iter()
                .map(|(c, k)| {
                    let (kind, id) = match *c {
                        Coordinate::Rate(s) => ("rate", input.sources[s].id.clone()),
                        Coordinate::Capacity(e) => ("capacity", input.edges[e].id.clone()),
                    };
                    serde_json::json!({ kind: id, "coefficient": rational::format_rational(k) })
                })
                .collect::<Vec<_>>()
        };
        let rates: serde_json::Map<String, serde_json::Value> =
            self.rates.iter().enumerate().map(|(s, v)| (output.sources[s].id.clone(), terms(v).into())).collect();
        let capacities: serde_json::Map<String, serde_json::Value> =
            self.capacities.iter().enumerate().map(|(e, v)| (output.edges[e].id.clone(), terms(v).into())).collect();
        serde_json::json!({ "rates": rates, "capacities": capacities })
    }
}

/// Construction role of a generated element and the input labels it derives from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub role: String,
    pub of: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TransformOutput {
    /// Carries `map(rates_or_unit, capacities_or_unit)` of the input.
    pub problem: Problem,
    pub map: TupleMap,
    pub provenance: BTreeMap<String, Provenance>,
}

/// Grows a problem spec with collision checks and records provenance.
struct Builder {
    spec: ProblemSpec,
    nodes: HashSet<String>,
    edges: HashSet<String>,
    sources: HashSet<String>,
    provenance: BTreeMap<String, Provenance>,
    rates: Vec<Vec<(Coordinate, Rational)>>,
    capacities: Vec<Vec<(Coordinate, Rational)>>,
}

fn same(c: Coordinate) -> Vec<(Coordinate, Rational)> {
    vec![(c, rational::one())]
}

fn rate_sum(sources: impl Iterator<Item = usize>) -> Vec<(Coordinate, Rational)> {
    sources.map(|s| (Coordinate::Rate(s), rational::one())).collect()
}

impl Builder {
    /// Starts from `p`'s graph; original edges keep their capacities. Sources
    /// are added by the caller.
    fn from_graph(p: &Problem) -> Self {
        let spec = p.to_spec();
        Self {
            nodes: spec.nodes.iter().cloned().collect(),
            edges: spec.edges.iter().map(|e| e.id.clone()).collect(),
            sources: HashSet::new(),
            spec: ProblemSpec { sources: Vec::new(), rates: None, capacities: None, ..spec },
            provenance: BTreeMap::new(),
            rates: Vec::new(),
            capacities: (0..p.num_edges()).map(|e| same(Coordinate::Capacity(e))).collect(),
        }
    }

    fn record(&mut self, id: &str, role: &str, of: &[&str]) {
        let of = of.iter().map(|s| s.to_string()).collect();
        self.provenance.insert(id.to_string(), Provenance { role: role.into(), of });
    }

    fn node(&mut self, id: String, role: &str, of: &[&str]) -> Result<String> {
        if !self.nodes.insert(id.clone()) {
            return Err(Error::NameCollision(id));
        }
        self.spec.nodes.push(id.clone());
        self.record(&id, role, of);
        Ok(id)
    }

    fn edge(
        &mut self,
        id: String,
        tail: &str,
        head: Vec<String>,
        cap: Vec<(Coordinate, Rational)>,
        role: &str,
        of: &[&str],
    ) -> Result<String> {
        if !self.edges.insert(id.clone()) {
            return Err(Error::NameCollision(id));
        }
        self.spec.edges.push(HyperedgeSpec { id: id.clone(), tail: tail.to_string(), head });
        self.capacities.push(cap);
        self.record(&id, role, of);
        Ok(id)
    }

    fn source(&mut self, spec: SourceSpec, rate: Vec<(Coordinate, Rational)>) -> Result<()> {
        if !self.sources.insert(spec.id.clone()) {
            return Err(Error::NameCollision(spec.id));
        }
        self.spec.sources.push(spec);
        self.rates.push(rate);
        Ok(())
    }

    fn finish(mut self, input: &Problem) -> Result<TransformOutput> {
        let map = TupleMap {
            input_sources: input.num_sources(),
            input_edges: input.num_edges(),
            rates: self.rates,
            capacities: self.capacities,
        };
        let own = RateCapacityTuple { rates: input.rates_or_unit(), capacities: input.capacities_or_unit() };
        let t = map.apply(&own)?;
        let fmt = |ids: Vec<String>, vals: &[Rational]| -> BTreeMap<String, String> {
            ids.into_iter().zip(vals).map(|(k, v)| (k, rational::format_rational(v))).collect()
        };
        self.spec.rates = Some(fmt(self.spec.sources.iter().map(|s| s.id.clone()).collect(), &t.rates));
        self.spec.capacities = Some(fmt(self.spec.edges.iter().map(|e| e.id.clone()).collect(), &t.capacities));
        let problem = Problem::from_spec(&self.spec)?;
        Ok(TransformOutput { problem, map, provenance: self.provenance })
    }
}

fn names(p: &Problem, nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&u| p.nodes[u].clone()).collect()
}

fn require_plain(p: &Problem, what: &str) -> Result<()> {
    if p.is_secure() || p.routing_links.is_some() {
        return Err(Error::InvalidArgument(format!(
            "{what} applies to problems without wiretap pattern or routing links"
        )));
    }
    Ok(())
}

/// Adds a super node `v*` with a link `f:<s>` to `O(s)` per source.
/// Variation 1 also makes every source available at `v*` and maps `ω(f_s)`
/// to 0; variation 2 moves every source to `v*`, adds `O(s)` to its sinks
/// and maps `ω(f_s)` to `λ(s)`.
pub fn supernode_variation(p: &Problem, which: u8) -> Result<TransformOutput> {
    if which != 1 && which != 2 {
        return Err(Error::InvalidArgument(format!("supernode variation must be 1 or 2, not {which}")));
    }
    let mut b = Builder::from_graph(p);
    let star = b.node(SUPERNODE.to_string(), "supernode", &[])?;
    for (s, src) in p.sources.iter().enumerate() {
        let cap = if which == 1 { Vec::new() } else { same(Coordinate::Rate(s)) };
        b.edge(format!("f:{}", src.id), &star, names(p, &src.origin), cap, "f_s", &[&src.id])?;
        let spec = if which == 1 {
            let mut at = names(p, &src.origin);
            at.push(star.clone());
            SourceSpec { id: src.id.clone(), at, sinks: names(p, &src.sinks) }
        } else {
            let mut sinks: Vec<String> = names(p, &src.sinks);
            for o in names(p, &src.origin) {
                if !sinks.contains(&o) {
                    sinks.push(o);
                }
            }
            SourceSpec { id: src.id.clone(), at: vec![star.clone()], sinks }
        };
        b.source(spec, same(Coordinate::Rate(s)))?;
    }
    b.finish(p)
}

/// Replaces every routing link `e` by its own forwarding stage: a node
/// `V:[j,e]` and a link `[j,e]` into `tail(e)` per input `j ∈ in(e)`, with
/// `j` redirected from `tail(e)` to `V:[j,e]`. Each `ω([j,e])` is a share of
/// `ω(e)`; `split` gives the shares per routing link id in `in(e)` order
/// (nonnegative, summing to 1), defaulting to equal shares.
pub fn remove_partial_routing(p: &Problem, split: Option<&BTreeMap<String, Vec<Rational>>>) -> Result<TransformOutput> {
    let rho: Vec<usize> = match &p.routing_links {
        Some(l) if !l.is_empty() => l.clone(),
        _ => return Err(Error::InvalidArgument("problem has no routing links".into())),
    };
    let mut b = Builder::from_graph(p);
    // redirections: (element, routing tail) -> new node
    let mut redirect: BTreeMap<(Element, usize), Vec<String>> = BTreeMap::new();
    for &e in &rho {
        let ins = p.in_edge_of(e);
        let eid = &p.edges[e].id;
        if ins.is_empty() {
            return Err(Error::InvalidArgument(format!("routing link {eid} has no inputs")));
        }
        let shares: Vec<Rational> = match split.and_then(|m| m.get(eid)) {
            Some(w) => {
                if w.len() != ins.len() || w.iter().any(|x| !rational::is_nonnegative(x)) {
                    return Err(Error::InvalidArgument(format!("bad capacity split for {eid}")));
                }
                if w.iter().fold(rational::zero(), |a, x| a + x) != rational::one() {
                    return Err(Error::InvalidArgument(format!("capacity split for {eid} does not sum to 1")));
                }
                w.clone()
            }
            None => vec![rational::frac(1, ins.len() as i64); ins.len()],
        };
        let tail = p.nodes[p.edges[e].tail].clone();
        for (&j, share) in ins.iter().zip(shares) {
            let jid = p.label(j).to_string();
            let v = b.node(format!("V:[{jid},{eid}]"), "split_node", &[&jid, eid])?;
            b.edge(
                format!("[{jid},{eid}]"),
                &v,
                vec![tail.clone()],
                vec![(Coordinate::Capacity(e), share)],
                "split_link",
                &[&jid, eid],
            )?;
            redirect.entry((j, p.edges[e].tail)).or_default().push(v);
        }
    }
    let retarget = |el: Element, head: &[usize]| -> Vec<String> {
        let mut out = Vec::new();
        for &u in head {
            match redirect.get(&(el, u)) {
                Some(vs) => out.extend(vs.iter().cloned()),
                None => out.push(p.nodes[u].clone()),
            }
        }
        out
    };
    for (f, edge) in p.edges.iter().enumerate() {
        b.spec.edges[f].head = retarget(Element::Edge(f), &edge.head);
    }
    for (s, src) in p.sources.iter().enumerate() {
        let spec = SourceSpec { id: src.id.clone(), at: retarget(Element::Source(s), &src.origin), sinks: names(p, &src.sinks) };
        b.source(spec, same(Coordinate::Rate(s)))?;
    }
    b.spec.routing_links = None;
    b.finish(p)
}

/// Two-layer incremental multicast problem with sources `1'` and `2'` at a
/// new node `phi`.
pub fn incremental_transform(p: &Problem) -> Result<TransformOutput> {
    require_plain(p, "the incremental transform")?;
    let mut b = Builder::from_graph(p);
    let ids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
    let mut gamma = Vec::new();
    let mut tau: Vec<Vec<String>> = Vec::new();
    for (s, src) in p.sources.iter().enumerate() {
        gamma.push(b.node(format!("gamma:{}", ids[s]), "gamma_s", &[ids[s]])?);
        let mut row = Vec::new();
        for &u in &src.sinks {
            let un = &p.nodes[u];
            row.push(b.node(format!("tau:{}:{un}", ids[s]), "tau_su", &[ids[s], un])?);
        }
        tau.push(row);
    }
    let psi = b.node("psi".into(), "psi", &[])?;
    let phi = b.node("phi".into(), "phi", &[])?;
    let eta = b.node("eta".into(), "eta", &[])?;
    let eta_star = b.node("eta*".into(), "eta_star", &[])?;
    for (s, src) in p.sources.iter().enumerate() {
        let lam = same(Coordinate::Rate(s));
        let mut head = names(p, &src.origin);
        head.extend([gamma[s].clone(), eta_star.clone()]);
        b.edge(format!("a:{}", ids[s]), &phi, head, lam.clone(), "a_s", &[ids[s]])?;
        let mut head = vec![gamma[s].clone(), eta.clone(), psi.clone()];
        for (j, row) in tau.iter().enumerate() {
            if j != s {
                head.extend(row.iter().cloned());
            }
        }
        b.edge(format!("b:{}", ids[s]), &phi, head, lam.clone(), "b_s", &[ids[s]])?;
        let mut head = vec![eta.clone(), eta_star.clone()];
        head.extend(tau[s].iter().cloned());
        b.edge(format!("c:{}", ids[s]), &gamma[s], head, lam.clone(), "c_s", &[ids[s]])?;
    }
    for (s, src) in p.sources.iter().enumerate() {
        for (k, &u) in src.sinks.iter().enumerate() {
            let un = &p.nodes[u];
            let lam = same(Coordinate::Rate(s));
            b.edge(format!("d:{}:{un}", ids[s]), un, vec![tau[s][k].clone()], lam, "d_su", &[ids[s], un])?;
        }
    }
    let mut first: Vec<String> = tau.iter().flatten().cloned().collect();
    first.extend([eta.clone(), eta_star.clone(), psi.clone()]);
    let all = rate_sum(0..p.num_sources());
    b.source(SourceSpec { id: "1'".into(), at: vec![phi.clone()], sinks: first }, all.clone())?;
    b.source(SourceSpec { id: "2'".into(), at: vec![phi], sinks: vec![eta, eta_star] }, all)?;
    b.finish(p)
}

/// Single-source secure problem with source `1'` at `phi` and two
/// adversaries, one tapping every `a:<s>` and one every `b:<s>`.
///
/// Each `theta:<s>:<u>` receives `b:<s>` and `d:<s>:<u>` and forwards
/// `w:<s>:<u>` to `tau:<s>:<u>`, which also receives `e:<s>`.
pub fn secure_transform(p: &Problem) -> Result<TransformOutput> {
    require_plain(p, "the secure transform")?;
    let mut b = Builder::from_graph(p);
    let ids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
    let (mut psi, mut gamma, mut theta, mut tau) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (s, src) in p.sources.iter().enumerate() {
        psi.push(b.node(format!("psi:{}", ids[s]), "psi_s", &[ids[s]])?);
        gamma.push(b.node(format!("gamma:{}", ids[s]), "gamma_s", &[ids[s]])?);
        let (mut th, mut ta) = (Vec::new(), Vec::new());
        for &u in &src.sinks {
            let un = &p.nodes[u];
            th.push(b.node(format!("theta:{}:{un}", ids[s]), "theta_su", &[ids[s], un])?);
            ta.push(b.node(format!("tau:{}:{un}", ids[s]), "tau_su", &[ids[s], un])?);
        }
        theta.push(th);
        tau.push(ta);
    }
    let phi = b.node("phi".into(), "phi", &[])?;
    let eta = b.node("eta".into(), "eta", &[])?;
    let (mut a_ids, mut b_ids) = (Vec::new(), Vec::new());
    for (s, src) in p.sources.iter().enumerate() {
        let lam = same(Coordinate::Rate(s));
        let mut head = names(p, &src.origin);
        head.extend([eta.clone(), gamma[s].clone()]);
        a_ids.push(b.edge(format!("a:{}", ids[s]), &phi, head, lam.clone(), "a_s", &[ids[s]])?);
        let mut head = vec![gamma[s].clone(), eta.clone()];
        head.extend(theta[s].iter().cloned());
        b_ids.push(b.edge(format!("b:{}", ids[s]), &phi, head, lam.clone(), "b_s", &[ids[s]])?);
        b.edge(format!("c:{}", ids[s]), &gamma[s], vec![psi[s].clone()], lam, "c_s", &[ids[s]])?;
        let mut head = vec![psi[s].clone()];
        head.extend(tau[s].iter().cloned());
        let others = rate_sum((0..p.num_sources()).filter(|&i| i != s));
        b.edge(format!("e:{}", ids[s]), &phi, head, others, "e_s", &[ids[s]])?;
    }
    for (s, src) in p.sources.iter().enumerate() {
        for (k, &u) in src.sinks.iter().enumerate() {
            let un = &p.nodes[u];
            let lam = same(Coordinate::Rate(s));
            b.edge(format!("d:{}:{un}", ids[s]), un, vec![theta[s][k].clone()], lam.clone(), "d_su", &[ids[s], un])?;
            b.edge(format!("w:{}:{un}", ids[s]), &theta[s][k], vec![tau[s][k].clone()], lam, "w_su", &[ids[s], un])?;
        }
    }
    let mut sinks: Vec<String> = tau.iter().flatten().cloned().collect();
    sinks.extend(psi.iter().cloned());
    sinks.push(eta);
    b.source(SourceSpec { id: "1'".into(), at: vec![phi], sinks }, rate_sum(0..p.num_sources()))?;
    b.spec.wiretap = Some(vec![
        AdversarySpec { targets: vec!["1'".into()], taps: a_ids },
        AdversarySpec { targets: vec!["1'".into()], taps: b_ids },
    ]);
    b.finish(p)
}

/// Secret sharing among `users` with legitimate groups `access` as a secure
/// network coding problem: the secret `1` at `u*`, a share link `e:<i>` to
/// each user, links `f:<i>` from each user to the sinks `v:<group>` of the
/// groups containing it. Every nonempty user set that contains no legitimate
/// group taps its share links; a set containing a legitimate group could
/// reconstruct the secret, so it is never an eavesdropper.
pub fn secret_sharing_to_snc(users: &[String], access: &[Vec<String>]) -> Result<Problem> {
    if users.is_empty() {
        return Err(Error::InvalidArgument("no users".into()));
    }
    if access.is_empty() {
        return Err(Error::InvalidArgument("no legitimate groups".into()));
    }
    if users.len() > 20 {
        return Err(Error::InvalidArgument("at most 20 users".into()));
    }
    let index: BTreeMap<&str, usize> = users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    if index.len() != users.len() {
        return Err(Error::InvalidArgument("duplicate user".into()));
    }
    let mut groups: Vec<u32> = Vec::new();
    for g in access {
        let mut mask = 0u32;
        for u in g {
            let i = index.get(u.as_str()).ok_or_else(|| Error::UnknownNode(u.clone()))?;
            mask |= 1 << i;
        }
        if mask == 0 {
            return Err(Error::InvalidArgument("empty legitimate group".into()));
        }
        if !groups.contains(&mask) {
            groups.push(mask);
        }
    }
    let group_name = |mask: u32| -> String {
        let members: Vec<&str> = (0..users.len()).filter(|i| mask >> i & 1 == 1).map(|i| users[i].as_str()).collect();
        format!("v:{}", members.join(","))
    };
    let hub = "u*".to_string();
    if index.contains_key(hub.as_str()) {
        return Err(Error::NameCollision(hub));
    }
    let mut nodes = vec![hub.clone()];
    nodes.extend(users.iter().cloned());
    nodes.extend(groups.iter().map(|&g| group_name(g)));
    let mut edges = Vec::new();
    for (i, u) in users.iter().enumerate() {
        edges.push(HyperedgeSpec { id: format!("e:{u}"), tail: hub.clone(), head: vec![u.clone()] });
        let head: Vec<String> = groups.iter().filter(|&&g| g >> i & 1 == 1).map(|&g| group_name(g)).collect();
        if !head.is_empty() {
            edges.push(HyperedgeSpec { id: format!("f:{u}"), tail: u.clone(), head });
        }
    }
    let wiretap: Vec<AdversarySpec> = (1u32..1 << users.len())
        .filter(|&beta| !groups.iter().any(|&g| beta & g == g))
        .map(|beta| AdversarySpec {
            targets: vec!["1".into()],
            taps: (0..users.len()).filter(|i| beta >> i & 1 == 1).map(|i| format!("e:{}", users[i])).collect(),
        })
        .collect();
    let spec = ProblemSpec {
        nodes,
        edges,
        sources: vec![SourceSpec { id: "1".into(), at: vec![hub], sinks: groups.iter().map(|&g| group_name(g)).collect() }],
        wiretap: Some(wiretap),
        ..Default::default()
    };
    Problem::from_spec(&spec)
}

// ---------------------------------------------------------------------------
// code liftings

/// Builds tables for `p` from the value of every element in every world.
/// Rows that never occur are 0; a row hit with two values is an error.
fn tabulate(
    p: &Problem,
    source_alphabets: Vec<u32>,
    edge_alphabets: Vec<u32>,
    key_alphabets: Option<Vec<u32>>,
    sources: &[Vec<u32>],
    keys: &[Vec<u32>],
    edges: &[Vec<u32>],
) -> Result<GeneralCode> {
    let n = sources.first().or(keys.first()).map_or(1, Vec::len);
    let key_alpha = |u: usize| key_alphabets.as_ref().map_or(1, |k| k[u]);
    let alpha = |el: Element| match el {
        Element::Source(s) => source_alphabets[s],
        Element::Edge(f) => edge_alphabets[f],
        Element::Node(u) => key_alpha(u),
    };
    let column = |el: Element| -> &[u32] {
        match el {
            Element::Source(s) => &sources[s],
            Element::Edge(f) => &edges[f],
            Element::Node(u) => &keys[u],
        }
    };
    let mut tables = Vec::with_capacity(p.num_edges());
    for (e, edge) in p.edges.iter().enumerate() {
        let mut ins: Vec<Element> = p.in_edge_of(e).to_vec();
        ins.push(Element::Node(edge.tail));
        let rows = ins
            .iter()
            .try_fold(1usize, |acc, &el| acc.checked_mul(alpha(el) as usize))
            .filter(|&r| r <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| Error::InvalidArgument(format!("lifted table of {} is too large", edge.id)))?;
        let mut table: Vec<Option<u32>> = vec![None; rows];
        for w in 0..n {
            let idx = ins.iter().fold(0usize, |acc, &el| acc * alpha(el) as usize + column(el)[w] as usize);
            let v = edges[e][w];
            match table[idx] {
                Some(old) if old != v => {
                    return Err(Error::Unverified(format!("lifted edge {} is not a function of its inputs", edge.id)))
                }
                _ => table[idx] = Some(v),
            }
        }
        tables.push(table.into_iter().map(|x| x.unwrap_or(0)).collect());
    }
    let routed = vec![None; p.num_edges()];
    Ok(GeneralCode { source_alphabets, edge_alphabets, key_alphabets, tables, routed })
}

/// The verified table form of a code on a plain problem.
fn verified_table_code(code: &Code, p: &Problem) -> Result<GeneralCode> {
    let report = verify(code, p, false)?;
    if !report.zero_error() {
        return Err(Error::Unverified("input code is not zero-error".into()));
    }
    let general = match code {
        Code::General(c) => c.clone(),
        Code::Linear(c) => c.to_general(p)?,
    };
    if general.routed.iter().any(Option::is_some) {
        return Err(Error::InvalidArgument("input code has routed links".into()));
    }
    Ok(general)
}

fn split_radix(mut x: u32, radices: &[u32]) -> Vec<u32> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        out[i] = x % radices[i];
        x /= radices[i];
    }
    out
}

fn join_radix(digits: impl Iterator<Item = (u32, u32)>) -> u32 {
    digits.fold(0, |acc, (d, r)| acc * r + d)
}

fn product(v: &[u32]) -> Result<u32> {
    v.iter()
        .try_fold(1u32, |acc, &x| acc.checked_mul(x))
        .ok_or_else(|| Error::InvalidArgument("source alphabet product overflows".into()))
}

/// World index of the input code for given source values and original keys.
fn inner_world(code: &GeneralCode, p: &Problem, source_values: &[u32], keys: impl Iterator<Item = u32>) -> usize {
    let radices = code.source_alphabets.iter().copied().chain((0..p.num_nodes()).map(|u| code.key_alphabet(u)));
    source_values.iter().copied().chain(keys).zip(radices).fold(0usize, |acc, (d, r)| acc * r as usize + d as usize)
}

fn edge_index(out: &Problem, id: &str) -> usize {
    out.edge(id).expect("generated edge exists")
}

/// Lifts a zero-error code for `p` to `incremental_transform(p)`: `a:<s>`
/// carries `Y_s` (the digit of `2'`), `b:<s>` an independent uniform digit
/// of `1'`, `c:<s> = a + b mod |Y_s|` and `d:<s>:<u>` the value of `s`
/// decoded at `u`. Original links keep their tables with `a:<s>` in place of `s`.
pub fn lift_code_incremental(code: &Code, p: &Problem) -> Result<(TransformOutput, GeneralCode)> {
    let out = incremental_transform(p)?;
    let inner = verified_table_code(code, p)?;
    let ev = Evaluation::of(&inner, p)?;
    let q = &out.problem;
    let ys = inner.source_alphabets.clone();
    let big = product(&ys)?;
    let keys: Vec<u32> = (0..q.num_nodes()).map(|u| if u < p.num_nodes() { inner.key_alphabet(u) } else { 1 }).collect();
    let (n, scols, kcols) = eval::worlds(&[big, big], &keys)?;
    let mut edge_alphabets = inner.edge_alphabets.clone();
    edge_alphabets.resize(q.num_edges(), 0);
    let mut cols: Vec<Vec<u32>> = vec![Vec::with_capacity(n); q.num_edges()];
    let ids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
    let mut layout: Vec<(usize, usize, usize)> = Vec::new();
    for s in 0..p.num_sources() {
        let abc = ["a", "b", "c"].map(|x| edge_index(q, &format!("{x}:{}", ids[s])));
        for &e in &abc {
            edge_alphabets[e] = ys[s];
        }
        layout.push((abc[0], abc[1], abc[2]));
    }
    let mut ds = Vec::new();
    for (s, src) in p.sources.iter().enumerate() {
        for &u in &src.sinks {
            let d = edge_index(q, &format!("d:{}:{}", ids[s], p.nodes[u]));
            edge_alphabets[d] = ys[s];
            ds.push((d, s));
        }
    }
    for w in 0..n {
        let bv = split_radix(scols[0][w], &ys);
        let av = split_radix(scols[1][w], &ys);
        let w0 = inner_world(&inner, p, &av, (0..p.num_nodes()).map(|u| kcols[u][w]));
        for e in 0..p.num_edges() {
            cols[e].push(ev.edges[e][w0]);
        }
        for (s, &(a, b, c)) in layout.iter().enumerate() {
            cols[a].push(av[s]);
            cols[b].push(bv[s]);
            cols[c].push((av[s] + bv[s]) % ys[s]);
        }
        for &(d, s) in &ds {
            cols[d].push(av[s]);
        }
    }
    let key_alphabets = inner.key_alphabets.as_ref().map(|_| keys.clone());
    let lifted = tabulate(q, vec![big, big], edge_alphabets, key_alphabets, &scols, &kcols, &cols)?;
    Ok((out, lifted))
}

/// Lifts a zero-error code for `p` to a strongly secure stochastic code for
/// `secure_transform(p)`. The key of `phi` plays the original sources:
/// `a:<s>` carries its digit `k_s`, `b:<s> = m_s - k_s` where `m_s` is the
/// digit of `1'`, so `c:<s>` and `w:<s>:<u>` recover `m_s`, and `e:<s>`
/// carries the other digits of `1'`. Keys of all other new nodes are constant.
pub fn lift_code_secure(code: &Code, p: &Problem) -> Result<(TransformOutput, GeneralCode)> {
    let out = secure_transform(p)?;
    let inner = verified_table_code(code, p)?;
    let ev = Evaluation::of(&inner, p)?;
    let q = &out.problem;
    let ys = inner.source_alphabets.clone();
    let big = product(&ys)?;
    let phi = q.node("phi")?;
    let mut keys: Vec<u32> = (0..q.num_nodes()).map(|u| if u < p.num_nodes() { inner.key_alphabet(u) } else { 1 }).collect();
    keys[phi] = big;
    let (n, scols, kcols) = eval::worlds(&[big], &keys)?;
    let ids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
    let mut edge_alphabets = inner.edge_alphabets.clone();
    edge_alphabets.resize(q.num_edges(), 0);
    let mut per_source = Vec::new();
    for s in 0..p.num_sources() {
        let abce = ["a", "b", "c", "e"].map(|x| edge_index(q, &format!("{x}:{}", ids[s])));
        for &e in &abce[..3] {
            edge_alphabets[e] = ys[s];
        }
        let others: Vec<u32> = (0..ys.len()).filter(|&i| i != s).map(|i| ys[i]).collect();
        edge_alphabets[abce[3]] = product(&others)?;
        per_source.push(abce);
    }
    let mut dw = Vec::new();
    for (s, src) in p.sources.iter().enumerate() {
        for &u in &src.sinks {
            let d = edge_index(q, &format!("d:{}:{}", ids[s], p.nodes[u]));
            let w = edge_index(q, &format!("w:{}:{}", ids[s], p.nodes[u]));
            edge_alphabets[d] = ys[s];
            edge_alphabets[w] = ys[s];
            dw.push((d, w, s));
        }
    }
    let mut cols: Vec<Vec<u32>> = vec![Vec::with_capacity(n); q.num_edges()];
    for w in 0..n {
        let m = split_radix(scols[0][w], &ys);
        let k = split_radix(kcols[phi][w], &ys);
        let w0 = inner_world(&inner, p, &k, (0..p.num_nodes()).map(|u| kcols[u][w]));
        for e in 0..p.num_edges() {
            cols[e].push(ev.edges[e][w0]);
        }
        for (s, &[a, b, c, e]) in per_source.iter().enumerate() {
            cols[a].push(k[s]);
            cols[b].push((m[s] + ys[s] - k[s]) % ys[s]);
            cols[c].push(m[s]);
            cols[e].push(join_radix((0..ys.len()).filter(|&i| i != s).map(|i| (m[i], ys[i]))));
        }
        for &(d, wl, s) in &dw {
            cols[d].push(k[s]);
            cols[wl].push(m[s]);
        }
    }
    let lifted = tabulate(q, vec![big], edge_alphabets, Some(keys), &scols, &kcols, &cols)?;
    Ok((out, lifted))
}

/// Lifts a code whose routing links are routed to the problem produced by
/// [`remove_partial_routing`]: each `[j,e]` carries the part of `e` computed
/// from `j`, and `e` forwards the tuple of its parts.
///
/// Every out-link of a routing tail must itself be a routing link and no
/// routing tail may be a sink; otherwise the redirected inputs would be
/// needed in raw form.
pub fn lift_code_routing(code: &GeneralCode, p: &Problem, out: &TransformOutput) -> Result<GeneralCode> {
    code.check_shape(p)?;
    let rho = p.routing_links.clone().unwrap_or_default();
    let tails: HashSet<usize> = rho.iter().map(|&e| p.edges[e].tail).collect();
    for (e, edge) in p.edges.iter().enumerate() {
        if tails.contains(&edge.tail) && !p.is_routing_link(e) {
            return Err(Error::InvalidArgument(format!("{} leaves a routing node but is not routed", edge.id)));
        }
    }
    if p.sources.iter().any(|s| s.sinks.iter().any(|u| tails.contains(u))) {
        return Err(Error::InvalidArgument("a routing node is also a sink".into()));
    }
    let ev = Evaluation::of(code, p)?;
    let q = &out.problem;
    let keys: Vec<u32> = (0..q.num_nodes()).map(|u| if u < p.num_nodes() { code.key_alphabet(u) } else { 1 }).collect();
    let mut edge_alphabets = code.edge_alphabets.clone();
    edge_alphabets.resize(q.num_edges(), 0);
    let mut cols: Vec<Vec<u32>> = ev.edges.clone();
    cols.resize(q.num_edges(), Vec::new());
    for &e in &rho {
        let parts = code.routed[e].as_ref().ok_or_else(|| Error::Shape(format!("{} is not routed", p.edges[e].id)))?;
        let values = ev.parts[e].as_ref().expect("routed parts evaluated");
        for (k, &j) in p.in_edge_of(e).iter().enumerate() {
            let link = edge_index(q, &format!("[{},{}]", p.label(j), p.edges[e].id));
            edge_alphabets[link] = parts[k].alphabet;
            cols[link] = values[k].clone();
        }
    }
    // new nodes have constant keys, so worlds line up with the input's
    let mut key_cols = ev.keys.clone();
    key_cols.resize(q.num_nodes(), vec![0; ev.worlds]);
    let key_alphabets = code.key_alphabets.as_ref().map(|_| keys);
    tabulate(q, code.source_alphabets.clone(), edge_alphabets, key_alphabets, &ev.sources, &key_cols, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{butterfly_xor_code, fitness_envelope, search_general, GeneralSpace, SearchOptions, SearchOutcome};
    use crate::examples::{butterfly_spec, single_edge_spec};
    use crate::rational::{frac, q as r};

    fn butterfly() -> Problem {
        Problem::from_spec(&butterfly_spec()).unwrap()
    }

    /// Two sources sharing a bottleneck: s1 at x to y, s2 at x to z.
    fn two_source() -> Problem {
        let spec: ProblemSpec = serde_json::from_value(serde_json::json!({
            "nodes": ["x", "m", "y", "z"],
            "edges": [
                {"id": "x-m", "tail": "x", "head": ["m"]},
                {"id": "m-yz", "tail": "m", "head": ["y", "z"]}
            ],
            "sources": [
                {"id": "1", "at": ["x"], "sinks": ["y"]},
                {"id": "2", "at": ["x"], "sinks": ["z"]}
            ]
        }))
        .unwrap();
        Problem::from_spec(&spec).unwrap()
    }

    fn unit(p: &Problem) -> RateCapacityTuple {
        RateCapacityTuple { rates: vec![r(1); p.num_sources()], capacities: vec![r(1); p.num_edges()] }
    }

    #[test]
    fn supernode_variations() {
        let p = butterfly();
        let one = supernode_variation(&p, 1).unwrap();
        assert_eq!(one.problem.num_nodes(), p.num_nodes() + 1);
        assert_eq!(one.problem.num_edges(), p.num_edges() + 1);
        let f = one.problem.edge("f:1").unwrap();
        assert_eq!(one.problem.capacities.as_ref().unwrap()[f], r(0));
        let v = one.problem.node(SUPERNODE).unwrap();
        assert!(one.problem.sources[0].origin.contains(&v));

        let two = supernode_variation(&p, 2).unwrap();
        let mut sinks: Vec<&str> = two.problem.sources[0].sinks.iter().map(|&u| two.problem.nodes[u].as_str()).collect();
        sinks.sort();
        assert_eq!(sinks, vec!["s", "t1", "t2"]);
        assert_eq!(two.problem.sources[0].origin, vec![v]);
        let t = two.map.apply(&RateCapacityTuple { rates: vec![r(3)], capacities: vec![r(1); 9] }).unwrap();
        assert_eq!(t.capacities[f], r(3));

        assert_eq!(supernode_variation(&two_source(), 1).unwrap().problem.num_edges(), 4);
        assert!(matches!(supernode_variation(&p, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn supernode_collision_is_reported() {
        let mut spec = single_edge_spec();
        spec.nodes.push(SUPERNODE.into());
        let p = Problem::from_spec(&spec).unwrap();
        assert_eq!(supernode_variation(&p, 1).unwrap_err(), Error::NameCollision(SUPERNODE.into()));
    }

    #[test]
    fn incremental_counts_and_map() {
        let p = two_source();
        let out = incremental_transform(&p).unwrap();
        let q = &out.problem;
        assert_eq!(q.num_sources(), 2);
        let sinks: usize = p.sources.iter().map(|s| s.sinks.len()).sum();
        assert_eq!(q.num_edges() - p.num_edges(), 3 * 2 + sinks);
        let two = q.source("2'").unwrap();
        let mut d2: Vec<&str> = q.sources[two].sinks.iter().map(|&u| q.nodes[u].as_str()).collect();
        d2.sort();
        assert_eq!(d2, vec!["eta", "eta*"]);
        let t = out.map.apply(&unit(&p)).unwrap();
        assert_eq!(t.rates, vec![r(2), r(2)]);
        assert_eq!(t.capacities[q.edge("d:1:y").unwrap()], r(1));
        assert_eq!(out.provenance["a:1"].role, "a_s");
    }

    #[test]
    fn secure_counts_and_map() {
        let p = two_source();
        let out = secure_transform(&p).unwrap();
        let q = &out.problem;
        assert_eq!(q.adversaries().len(), 2);
        assert_eq!(q.num_sources(), 1);
        let t = out.map.apply(&unit(&p)).unwrap();
        assert_eq!(t.rates, vec![r(2)]);
        assert_eq!(t.capacities[q.edge("e:1").unwrap()], r(1));
        assert_eq!(t.capacities[q.edge("e:2").unwrap()], r(1));
        assert_eq!(secure_transform(&butterfly()).unwrap().problem.adversaries().len(), 2);
    }

    #[test]
    fn maps_are_linear_and_vanish_at_zero() {
        let p = two_source();
        for out in [incremental_transform(&p).unwrap(), secure_transform(&p).unwrap(), supernode_variation(&p, 2).unwrap()] {
            let z = out.map.apply(&RateCapacityTuple::zero(&p)).unwrap();
            assert!(z.rates.iter().chain(&z.capacities).all(|x| *x == r(0)));
            let a = RateCapacityTuple { rates: vec![r(1), r(2)], capacities: vec![r(3), r(5)] };
            let b = RateCapacityTuple { rates: vec![r(2), r(4)], capacities: vec![r(6), r(10)] };
            let (ta, tb) = (out.map.apply(&a).unwrap(), out.map.apply(&b).unwrap());
            assert!(ta.rates.iter().zip(&tb.rates).all(|(x, y)| x * r(2) == *y));
            assert!(ta.capacities.iter().zip(&tb.capacities).all(|(x, y)| x * r(2) == *y));
        }
    }

    #[test]
    fn plain_transforms_reject_secure_inputs() {
        let p = Problem::from_spec(&crate::examples::secure_two_path_spec()).unwrap();
        assert!(matches!(incremental_transform(&p), Err(Error::InvalidArgument(_))));
        assert!(matches!(secure_transform(&p), Err(Error::InvalidArgument(_))));
    }

    fn routed_fan_in() -> Problem {
        let spec: ProblemSpec = serde_json::from_value(serde_json::json!({
            "nodes": ["s1", "s2", "r", "t"],
            "edges": [
                {"id": "p", "tail": "s1", "head": ["r"]},
                {"id": "q", "tail": "s2", "head": ["r"]},
                {"id": "e", "tail": "r", "head": ["t"]}
            ],
            "sources": [
                {"id": "1", "at": ["s1"], "sinks": ["t"]},
                {"id": "2", "at": ["s2"], "sinks": ["t"]}
            ],
            "routing_links": ["e"],
            "capacities": {"p": "1", "q": "1", "e": "2"}
        }))
        .unwrap();
        Problem::from_spec(&spec).unwrap()
    }

    #[test]
    fn routing_removal_adds_a_stage_per_input() {
        let p = routed_fan_in();
        let out = remove_partial_routing(&p, None).unwrap();
        let q = &out.problem;
        assert_eq!(q.num_nodes(), p.num_nodes() + 2);
        assert_eq!(q.num_edges(), p.num_edges() + 2);
        assert!(q.routing_links.is_none());
        let caps = q.capacities.as_ref().unwrap();
        assert_eq!(caps[q.edge("[p,e]").unwrap()], r(1));
        assert_eq!(caps[q.edge("e").unwrap()], r(2));
        let pe = q.edge("p").unwrap();
        assert_eq!(q.edges[pe].head, vec![q.node("V:[p,e]").unwrap()]);
        // the shares always add back up to the routed capacity
        let mut split = BTreeMap::new();
        split.insert("e".to_string(), vec![frac(1, 3), frac(2, 3)]);
        let out = remove_partial_routing(&p, Some(&split)).unwrap();
        let t = out.map.apply(&unit(&p)).unwrap();
        let q = &out.problem;
        assert_eq!(t.capacities[q.edge("[p,e]").unwrap()].clone() + &t.capacities[q.edge("[q,e]").unwrap()], r(1));
        assert!(remove_partial_routing(&butterfly(), None).is_err());
    }

    #[test]
    fn single_input_routing_is_a_node_split() {
        let mut spec = single_edge_spec();
        spec.nodes.push("w".into());
        spec.edges.push(HyperedgeSpec { id: "g".into(), tail: "u".into(), head: vec!["w".into()] });
        spec.sources[0].sinks = vec!["w".into()];
        spec.routing_links = Some(vec!["g".into()]);
        let p = Problem::from_spec(&spec).unwrap();
        let out = remove_partial_routing(&p, None).unwrap();
        let t = out.map.apply(&unit(&p)).unwrap();
        let q = &out.problem;
        assert_eq!(t.capacities[q.edge("[e,g]").unwrap()], r(1));
        assert_eq!(t.capacities[q.edge("g").unwrap()], r(1));
    }

    #[test]
    fn routed_code_lifts_to_the_split_network() {
        let p = routed_fan_in();
        let mut space = GeneralSpace::uniform(&p, 2, 2);
        space.edge_alphabets[p.edge("e").unwrap()] = 2;
        let code = match search_general(&p, &space, &SearchOptions::default()).unwrap().outcome {
            SearchOutcome::Found(c) => c,
            _ => panic!("fan-in has a routed code"),
        };
        let out = remove_partial_routing(&p, None).unwrap();
        let lifted = lift_code_routing(&code, &p, &out).unwrap();
        let report = verify(&Code::General(lifted), &out.problem, false).unwrap();
        assert!(report.zero_error());
    }

    #[test]
    fn secret_sharing_adversaries() {
        let users = |n: usize| (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
        let g = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let p = secret_sharing_to_snc(&users(2), &[g(&["1", "2"])]).unwrap();
        assert_eq!(p.adversaries().len(), 2);
        let p = secret_sharing_to_snc(&users(2), &[g(&["1"]), g(&["2"])]).unwrap();
        assert_eq!(p.adversaries().len(), 0);
        let access = [g(&["1", "2"]), g(&["1", "3"]), g(&["2", "3"]), g(&["1", "2", "3"])];
        let p = secret_sharing_to_snc(&users(3), &access).unwrap();
        assert_eq!(p.adversaries().len(), 3);
        assert!(p.adversaries().iter().all(|a| a.taps.len() == 1));
        assert!(secret_sharing_to_snc(&[], &[g(&["1"])]).is_err());
    }

    #[test]
    fn incremental_lift_of_the_xor_code() {
        let p = butterfly();
        let code = Code::Linear(butterfly_xor_code());
        let (out, lifted) = lift_code_incremental(&code, &p).unwrap();
        let lifted = Code::General(lifted);
        assert!(verify(&lifted, &out.problem, false).unwrap().zero_error());
        let before = fitness_envelope(&code, &p).unwrap().exact().unwrap();
        let after = fitness_envelope(&lifted, &out.problem).unwrap().exact().unwrap();
        assert_eq!(out.map.apply(&before).unwrap(), after);
    }

    #[test]
    fn incremental_lift_of_one_edge_is_a_pad() {
        let p = Problem::from_spec(&single_edge_spec()).unwrap();
        let code = Code::General(GeneralCode {
            source_alphabets: vec![2],
            edge_alphabets: vec![2],
            key_alphabets: None,
            tables: vec![vec![0, 1]],
            routed: vec![None],
        });
        let (out, lifted) = lift_code_incremental(&code, &p).unwrap();
        let c = out.problem.edge("c:1").unwrap();
        // in(c) = {a, b}: the table is a XOR b
        assert_eq!(lifted.tables[c], vec![0, 1, 1, 0]);
        assert!(verify(&Code::General(lifted), &out.problem, false).unwrap().zero_error());
    }

    #[test]
    fn secure_lift_is_strongly_secure() {
        let p = butterfly();
        let code = Code::Linear(butterfly_xor_code());
        let (out, lifted) = lift_code_secure(&code, &p).unwrap();
        let lifted = Code::General(lifted);
        let report = verify(&lifted, &out.problem, true).unwrap();
        assert!(report.zero_error());
        assert_eq!(report.strongly_secure(), Some(true));
        let before = fitness_envelope(&code, &p).unwrap().exact().unwrap();
        let after = fitness_envelope(&lifted, &out.problem).unwrap().exact().unwrap();
        assert_eq!(out.map.apply(&before).unwrap(), after);
    }

    #[test]
    fn lifting_rejects_broken_codes() {
        let p = butterfly();
        let mut code = butterfly_xor_code();
        code.kernels[p.edge("c-d").unwrap()] = code.kernels[p.edge("s-a").unwrap()].clone();
        let code = Code::Linear(code);
        assert!(matches!(lift_code_incremental(&code, &p), Err(Error::Unverified(_))));
        assert!(matches!(lift_code_secure(&code, &p), Err(Error::Unverified(_))));
    }
}
