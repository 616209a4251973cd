//! Regular partition sets: per-source block partitions of the supports such
//! that every tuple of blocks meets the joint support.

use std::collections::HashSet;

use super::distribution::Distribution;
use super::Subset;
use crate::error::{Error, Result};

/// `blocks[s][b]` lists the values of source `s` in block `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularPartitionSet {
    pub blocks: Vec<Vec<Vec<u32>>>,
}

impl RegularPartitionSet {
    fn block_index(&self) -> Vec<std::collections::HashMap<u32, usize>> {
        self.blocks
            .iter()
            .map(|bs| bs.iter().enumerate().flat_map(|(i, b)| b.iter().map(move |&x| (x, i))).collect())
            .collect()
    }
}

fn support_values(d: &Distribution, var: usize) -> Vec<u32> {
    let mut v: Vec<u32> = d.atoms().iter().map(|(x, _)| x[var]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Whether every tuple of block indices meets the joint support. On failure
/// returns the lexicographically first missed tuple (0-based).
pub fn is_regular_partition(ps: &RegularPartitionSet, d: &Distribution) -> Result<std::result::Result<(), Vec<usize>>> {
    if ps.blocks.len() != d.num_vars() {
        return Err(Error::Shape(format!("{} partitions for {} sources", ps.blocks.len(), d.num_vars())));
    }
    for (s, bs) in ps.blocks.iter().enumerate() {
        let support = support_values(d, s);
        let mut seen = HashSet::new();
        for x in bs.iter().flatten() {
            if !seen.insert(*x) || support.binary_search(x).is_err() {
                return Err(Error::InvalidArgument(format!("blocks of source {s} overlap or leave its support")));
            }
        }
    }
    Ok(first_missing(ps, d, d.num_vars()))
}

/// Checks the condition on the first `prefix` sources only.
fn first_missing(ps: &RegularPartitionSet, d: &Distribution, prefix: usize) -> std::result::Result<(), Vec<usize>> {
    let index = ps.block_index();
    let hit: HashSet<Vec<usize>> = d
        .atoms()
        .iter()
        .filter_map(|(x, _)| (0..prefix).map(|s| index[s].get(&x[s]).copied()).collect::<Option<Vec<_>>>())
        .collect();
    let radices: Vec<usize> = ps.blocks[..prefix].iter().map(|b| b.len()).collect();
    if radices.contains(&0) {
        return Err(vec![0; prefix]);
    }
    let mut tuple = vec![0usize; prefix];
    loop {
        if !hit.contains(&tuple) {
            return Err(tuple);
        }
        let mut i = prefix;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < radices[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// All partitions of `values` into `k` blocks of equal size, blocks ordered by
/// their least element and each block sorted.
fn equal_partitions(values: &[u32], k: usize) -> Vec<Vec<Vec<u32>>> {
    fn rec(rest: &[u32], size: usize, acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rest[0];
        let others = &rest[1..];
        // choose size-1 companions for the least remaining element
        let mut pick = Vec::with_capacity(size);
        choose(others, size - 1, 0, &mut pick, &mut |chosen| {
            let mut block = vec![first];
            block.extend_from_slice(chosen);
            let remaining: Vec<u32> = others.iter().copied().filter(|x| !chosen.contains(x)).collect();
            acc.push(block);
            rec(&remaining, size, acc, out);
            acc.pop();
        });
    }
    fn choose(pool: &[u32], k: usize, start: usize, pick: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if pick.len() == k {
            f(pick);
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - pick.len() {
                break;
            }
            pick.push(pool[i]);
            choose(pool, k, i + 1, pick, f);
            pick.pop();
        }
    }
    let mut out = Vec::new();
    rec(values, values.len() / k, &mut Vec::new(), &mut out);
    out
}

/// Backtracking search over equal-size partitions in canonical order.
pub fn find_regular_partition(d: &Distribution, block_counts: &[usize]) -> Result<Option<RegularPartitionSet>> {
    if block_counts.len() != d.num_vars() {
        return Err(Error::Shape(format!("{} block counts for {} sources", block_counts.len(), d.num_vars())));
    }
    let mut options = Vec::new();
    for (s, &k) in block_counts.iter().enumerate() {
        let support = support_values(d, s);
        if k == 0 || k > support.len() || support.len() % k != 0 {
            return Err(Error::InvalidArgument(format!(
                "block count {k} does not divide the support size {} of source {s}",
                support.len()
            )));
        }
        options.push(equal_partitions(&support, k));
    }
    let mut chosen = RegularPartitionSet { blocks: Vec::new() };
    Ok(search(d, &options, &mut chosen).then_some(chosen))
}

fn search(d: &Distribution, options: &[Vec<Vec<Vec<u32>>>], chosen: &mut RegularPartitionSet) -> bool {
    let depth = chosen.blocks.len();
    if depth == options.len() {
        return true;
    }
    for part in &options[depth] {
        chosen.blocks.push(part.clone());
        if first_missing(chosen, d, depth + 1).is_ok() && search(d, options, chosen) {
            return true;
        }
        chosen.blocks.pop();
    }
    false
}

/// Block counts `2^{H(U_s | U_<s)} / H(U_≤s)^2`, floored and clamped to
/// `1..=|SP(U_s)|`.
pub fn default_block_counts(d: &Distribution) -> Vec<usize> {
    (0..d.num_vars())
        .map(|s| {
            let prefix = Subset::full(s);
            let upto = prefix.with(s);
            let cond = d.entropy_bits(upto) - d.entropy_bits(prefix);
            let joint = d.entropy_bits(upto);
            let support = d.support_size(Subset::singleton(s)) as usize;
            let raw = if joint > 0.0 { 2f64.powf(cond) / (joint * joint) } else { 1.0 };
            (raw.floor() as usize).clamp(1, support.max(1))
        })
        .collect()
}
