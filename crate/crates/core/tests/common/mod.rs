//! Shared fixtures: the small-network corpus and an LP oracle that works by
//! enumerating vertices.

#![allow(dead_code)]

use netcap::lp::{LinearProgram, Relation, Sense};
use netcap::model::{HyperedgeSpec, SourceSpec};
use netcap::rational::{self, Rational};
use netcap::{Problem, ProblemSpec};
use num_traits::{Signed, Zero};
use rand::Rng;

pub const MAX_NODES: usize = 4;
pub const MAX_EDGES: usize = 4;

fn node(i: usize) -> String {
    format!("v{i}")
}

/// Every hyperedge `v_i → H` with `|H| ∈ {1, 2}` and all of `H` after `v_i`.
fn candidate_edges(n: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for tail in 0..n {
        for a in tail + 1..n {
            out.push((tail, vec![a]));
            for b in a + 1..n {
                out.push((tail, vec![a, b]));
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A source: origin node and a sorted sink set, all sinks after the origin.
type SourceShape = (usize, Vec<usize>);

fn source_shapes(n: usize) -> Vec<SourceShape> {
    let mut out = Vec::new();
    for o in 0..n {
        for a in o + 1..n {
            out.push((o, vec![a]));
            for b in a + 1..n {
                out.push((o, vec![a, b]));
            }
        }
    }
    out
}

/// The corpus of small acyclic networks.
///
/// Nodes `v0 … v{n-1}` with `2 ≤ n ≤ 4` are numbered topologically. There are
/// one to four distinct hyperedges, each with a head of one or two later
/// nodes, and one or two sources, each at a single node with one or two
/// later sinks. Every node touches an edge, so no network is a smaller one
/// with an idle node added.
pub fn corpus() -> Vec<Problem> {
    let mut out = Vec::new();
    for n in 2..=MAX_NODES {
        let cands = candidate_edges(n);
        let shapes = source_shapes(n);
        let mut source_sets: Vec<Vec<usize>> = (0..shapes.len()).map(|i| vec![i]).collect();
        for i in 0..shapes.len() {
            for j in i..shapes.len() {
                source_sets.push(vec![i, j]);
            }
        }
        for k in 1..=MAX_EDGES.min(cands.len()) {
            for pick in combinations(cands.len(), k) {
                let mut touched = vec![false; n];
                for &c in &pick {
                    touched[cands[c].0] = true;
                    for &h in &cands[c].1 {
                        touched[h] = true;
                    }
                }
                if touched.iter().any(|t| !t) {
                    continue;
                }
                for set in &source_sets {
                    out.push(build(n, &cands, &pick, set.iter().map(|&i| &shapes[i])));
                }
            }
        }
    }
    out
}

fn build<'a>(
    n: usize,
    cands: &[(usize, Vec<usize>)],
    pick: &[usize],
    sources: impl Iterator<Item = &'a SourceShape>,
) -> Problem {
    let spec = ProblemSpec {
        nodes: (0..n).map(node).collect(),
        edges: pick
            .iter()
            .enumerate()
            .map(|(i, &c)| HyperedgeSpec {
                id: format!("e{i}"),
                tail: node(cands[c].0),
                head: cands[c].1.iter().map(|&h| node(h)).collect(),
            })
            .collect(),
        sources: sources
            .enumerate()
            .map(|(i, (o, sinks))| SourceSpec {
                id: format!("x{}", i + 1),
                at: vec![node(*o)],
                sinks: sinks.iter().map(|&t| node(t)).collect(),
            })
            .collect(),
        ..Default::default()
    };
    Problem::from_spec(&spec).expect("corpus instance is valid")
}

/// Whether every sink can be reached from its source's origin.
pub fn all_sinks_reachable(p: &Problem) -> bool {
    p.sources.iter().all(|s| {
        let mut reach = vec![false; p.num_nodes()];
        for &o in &s.origin {
            reach[o] = true;
        }
        for &e in p.topological_order() {
            if reach[p.edges[e].tail] {
                for &h in &p.edges[e].head {
                    reach[h] = true;
                }
            }
        }
        s.sinks.iter().all(|&t| reach[t])
    })
}

/// The same network with one adversary per edge, each targeting every source.
pub fn with_single_edge_taps(p: &Problem) -> Problem {
    let mut spec = p.to_spec();
    let targets: Vec<String> = p.sources.iter().map(|s| s.id.clone()).collect();
    spec.wiretap = Some(
        p.edges
            .iter()
            .map(|e| netcap::model::AdversarySpec { targets: targets.clone(), taps: vec![e.id.clone()] })
            .collect(),
    );
    Problem::from_spec(&spec).expect("tapped instance is valid")
}

/// Optimum of an LP found independently of the simplex code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Oracle {
    Optimal(Rational),
    Infeasible,
    Unbounded,
}

/// Rows as `a·x ≤ b` over nonnegative variables (no free variables).
fn as_le_rows(lp: &LinearProgram) -> Vec<(Vec<Rational>, Rational)> {
    let n = lp.num_vars();
    let mut out = Vec::new();
    for r in lp.rows() {
        let mut a = vec![rational::zero(); n];
        for (j, c) in &r.coeffs {
            a[*j] += c;
        }
        let neg = |v: &[Rational]| v.iter().map(|x| -x.clone()).collect::<Vec<_>>();
        match r.relation {
            Relation::Le => out.push((a, r.rhs.clone())),
            Relation::Ge => out.push((neg(&a), -r.rhs.clone())),
            Relation::Eq => {
                out.push((neg(&a), -r.rhs.clone()));
                out.push((a, r.rhs.clone()));
            }
        }
    }
    for j in 0..n {
        let mut a = vec![rational::zero(); n];
        a[j] = -rational::one();
        out.push((a, rational::zero()));
    }
    out
}

/// Solves the square system `A x = b` by Gauss–Jordan; `None` if singular.
fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(row, rhs)| {
        let mut r = row.clone();
        r.push(rhs.clone());
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = rational::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let d = &m[col][c] * &f;
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

/// Best objective over the vertices of `{x : a·x ≤ b}`, or `None` if there
/// are none. The region always sits inside `x ≥ 0`, so it is pointed and a
/// nonempty region has a vertex.
fn best_vertex(rows: &[(Vec<Rational>, Rational)], c: &[Rational], n: usize) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for pick in combinations(rows.len(), n) {
        let a: Vec<Vec<Rational>> = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Rational> = pick.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve_square(&a, &b) else { continue };
        if rows.iter().all(|(a, b)| dot(a, &x) <= *b) {
            let v = dot(c, &x);
            if best.as_ref().map_or(true, |b| v > *b) {
                best = Some(v);
            }
        }
    }
    best
}

/// Vertex-enumeration oracle for LPs over nonnegative variables.
///
/// Unboundedness is decided on the recession cone: the LP is unbounded
/// exactly when it is feasible and some `d ≥ 0` with `A d ≤ 0`, `Σ d = 1` has
/// a positive objective.
pub fn vertex_oracle(lp: &LinearProgram) -> Oracle {
    assert!((0..lp.num_vars()).all(|j| !lp.is_free(j)), "oracle handles nonnegative variables only");
    let n = lp.num_vars();
    let mut c = vec![rational::zero(); n];
    for (j, v) in lp.objective() {
        c[*j] += v;
    }
    if lp.sense() == Sense::Min {
        c.iter_mut().for_each(|x| *x = -x.clone());
    }
    let rows = as_le_rows(lp);
    let Some(best) = best_vertex(&rows, &c, n) else { return Oracle::Infeasible };
    let mut cone: Vec<(Vec<Rational>, Rational)> = rows.iter().map(|(a, _)| (a.clone(), rational::zero())).collect();
    cone.push((vec![rational::one(); n], rational::one()));
    cone.push((vec![-rational::one(); n], -rational::one()));
    if best_vertex(&cone, &c, n).is_some_and(|v| v.is_positive()) {
        return Oracle::Unbounded;
    }
    Oracle::Optimal(if lp.sense() == Sense::Min { -best } else { best })
}

/// A random LP with small integer data over `2..=4` nonnegative variables.
pub fn random_lp<R: Rng>(rng: &mut R) -> LinearProgram {
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=4);
    let sense = if rng.gen_bool(0.5) { Sense::Max } else { Sense::Min };
    let mut lp = LinearProgram::new(sense);
    let vars: Vec<usize> = (0..n).map(|j| lp.add_var(format!("x{j}"))).collect();
    for _ in 0..m {
        let coeffs: Vec<(usize, Rational)> =
            vars.iter().map(|&j| (j, rational::q(rng.gen_range(-3..=4)))).filter(|(_, c)| !c.is_zero()).collect();
        let relation = match rng.gen_range(0..5) {
            0 => Relation::Ge,
            1 => Relation::Eq,
            _ => Relation::Le,
        };
        lp.add_row(coeffs, relation, rational::q(rng.gen_range(-2..=6)));
    }
    let obj: Vec<(usize, Rational)> = vars.iter().map(|&j| (j, rational::q(rng.gen_range(-3..=3)))).collect();
    lp.set_objective(obj, sense);
    lp
}
