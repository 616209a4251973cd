//! Exhaustive evaluation of a table code over every equiprobable world
//! (joint choice of source values and node keys).

use std::collections::HashMap;
use std::hash::Hash;

use super::GeneralCode;
use crate::error::{Error, Result};
use crate::model::{Element, Problem};

/// Upper limit on the number of worlds a code may induce.
pub const MAX_WORLDS: usize = 1 << 22;

/// Every element's value in every world. World `w` lists the source values
/// then the node keys in mixed radix, first source most significant.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub worlds: usize,
    pub sources: Vec<Vec<u32>>,
    pub edges: Vec<Vec<u32>>,
    pub keys: Vec<Vec<u32>>,
    /// Per routed edge, per part, the part value in each world.
    pub parts: Vec<Option<Vec<Vec<u32>>>>,
}

/// Source and key values of every world.
pub fn worlds(source_alphabets: &[u32], key_alphabets: &[u32]) -> Result<(usize, Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    let radices: Vec<u32> = source_alphabets.iter().chain(key_alphabets).copied().collect();
    let n = radices
        .iter()
        .try_fold(1usize, |acc, &a| acc.checked_mul(a as usize))
        .filter(|&n| n <= MAX_WORLDS)
        .ok_or_else(|| Error::InvalidArgument(format!("more than {MAX_WORLDS} source and key combinations")))?;
    let mut cols: Vec<Vec<u32>> = radices.iter().map(|_| Vec::with_capacity(n)).collect();
    for w in 0..n {
        let mut rest = w;
        for i in (0..radices.len()).rev() {
            let a = radices[i] as usize;
            cols[i].push((rest % a) as u32);
            rest /= a;
        }
    }
    let keys = cols.split_off(source_alphabets.len());
    Ok((n, cols, keys))
}

impl Evaluation {
    pub fn of(code: &GeneralCode, p: &Problem) -> Result<Evaluation> {
        code.check_shape(p)?;
        let key_alphabets: Vec<u32> = (0..p.num_nodes()).map(|u| code.key_alphabet(u)).collect();
        let (n, sources, keys) = worlds(&code.source_alphabets, &key_alphabets)?;
        let mut edges: Vec<Vec<u32>> = vec![Vec::new(); p.num_edges()];
        let mut parts: Vec<Option<Vec<Vec<u32>>>> = vec![None; p.num_edges()];
        for &e in p.topological_order() {
            let ins = p.in_edge_of(e);
            let tail = p.edges[e].tail;
            let mut vals = Vec::with_capacity(n);
            let mut buf = vec![0u32; ins.len()];
            for w in 0..n {
                for (b, &el) in buf.iter_mut().zip(ins) {
                    *b = match el {
                        Element::Source(s) => sources[s][w],
                        Element::Edge(f) => edges[f][w],
                        Element::Node(_) => unreachable!(),
                    };
                }
                vals.push(code.edge_value(p, e, &buf, keys[tail][w]));
            }
            if let Some(rp) = &code.routed[e] {
                let per_part = rp
                    .iter()
                    .zip(ins)
                    .map(|(part, &el)| {
                        (0..n)
                            .map(|w| {
                                let x = match el {
                                    Element::Source(s) => sources[s][w],
                                    Element::Edge(f) => edges[f][w],
                                    Element::Node(_) => unreachable!(),
                                };
                                part.table[x as usize]
                            })
                            .collect()
                    })
                    .collect();
                parts[e] = Some(per_part);
            }
            edges[e] = vals;
        }
        Ok(Evaluation { worlds: n, sources, edges, keys, parts })
    }

    pub fn column(&self, el: Element) -> &[u32] {
        match el {
            Element::Source(s) => &self.sources[s],
            Element::Edge(e) => &self.edges[e],
            Element::Node(u) => &self.keys[u],
        }
    }

    /// The full world (sources then keys) as a point.
    pub fn world_point(&self, w: usize) -> Vec<u32> {
        self.sources.iter().chain(&self.keys).map(|c| c[w]).collect()
    }
}

/// Number of distinct values of a column.
pub fn support_of(col: &[u32]) -> u64 {
    let mut v = col.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len() as u64
}

/// Whether the `obs` columns determine the `target` columns across worlds.
/// On failure returns two worlds that agree on `obs` and differ on `target`.
pub fn determines(obs: &[&[u32]], target: &[&[u32]], worlds: usize) -> Option<(usize, usize)> {
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    for w in 0..worlds {
        let key: Vec<u32> = obs.iter().map(|c| c[w]).collect();
        match seen.get(&key) {
            Some(&v) => {
                if target.iter().any(|c| c[v] != c[w]) {
                    return Some((v, w));
                }
            }
            None => {
                seen.insert(key, w);
            }
        }
    }
    None
}

fn counts<K: Eq + Hash>(keys: impl Iterator<Item = K>) -> HashMap<K, u64> {
    let mut m = HashMap::new();
    for k in keys {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

/// Exact independence of two column groups under the uniform law on worlds:
/// `N · c(a,b) = c(a) · c(b)` for every pair of support values.
pub fn independent(a: &[&[u32]], b: &[&[u32]], worlds: usize) -> bool {
    let key = |cols: &[&[u32]], w: usize| -> Vec<u32> { cols.iter().map(|c| c[w]).collect() };
    let ca = counts((0..worlds).map(|w| key(a, w)));
    let cb = counts((0..worlds).map(|w| key(b, w)));
    let cab = counts((0..worlds).map(|w| (key(a, w), key(b, w))));
    if (cab.len() as u128) != (ca.len() as u128) * (cb.len() as u128) {
        return false;
    }
    let n = worlds as u128;
    cab.iter().all(|((x, y), &c)| n * c as u128 == ca[x] as u128 * cb[y] as u128)
}

/// Entropy in bits of a column group, for reporting only.
pub fn entropy_bits(cols: &[&[u32]], worlds: usize) -> f64 {
    let c = counts((0..worlds).map(|w| cols.iter().map(|col| col[w]).collect::<Vec<u32>>()));
    let n = worlds as f64;
    c.values().map(|&k| {
        let p = k as f64 / n;
        -p * p.log2()
    }).sum::<f64>().max(0.0)
}
