//! Rank functions on subset lattices.
//!
//! A rank function assigns an exact rational to every subset of a small ground
//! set. Entropy functions, polymatroids, atomic functions and representable
//! functions all live here, together with the constraint sets that tie a rank
//! function to a network coding problem.

pub mod constraints;
pub mod distribution;
pub mod gf;
pub mod partition;
pub mod representable;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_GROUND_CAP: usize = 16;

/// Bitmask over ground-set positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn full(n: usize) -> Self {
        Subset(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Subset(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersection(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn minus(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        Self::with_cap(labels, DEFAULT_GROUND_CAP)
    }

    pub fn with_cap(labels: Vec<String>, cap: usize) -> Result<Self> {
        if labels.len() > cap || labels.len() > 63 {
            return Err(Error::GroundTooLarge { size: labels.len(), cap: cap.min(63) });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidArgument(format!("duplicate ground label {l:?}")));
            }
        }
        Ok(Self { labels })
    }

    pub fn from_strs(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn subset_of(&self, labels: &[&str]) -> Result<Subset> {
        let mut m = Subset::EMPTY;
        for l in labels {
            let i = self
                .position(l)
                .ok_or_else(|| Error::InvalidArgument(format!("label {l:?} not in ground set")))?;
            m = m.with(i);
        }
        Ok(m)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn num_subsets(&self) -> usize {
        1 << self.len()
    }

    /// Sorted labels joined by `,` — the key used in JSON exports.
    pub fn subset_key(&self, s: Subset) -> String {
        let mut names: Vec<&str> = s.iter().map(|i| self.labels[i].as_str()).collect();
        names.sort_unstable();
        names.join(",")
    }
}

/// One elemental Shannon inequality, stated as `expr ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elemental {
    /// `h(N) − h(N∖{i}) ≥ 0`
    Monotone { i: usize },
    /// `h(K∪i) + h(K∪j) − h(K∪i∪j) − h(K) ≥ 0`
    Submodular { i: usize, j: usize, rest: Subset },
}

impl Elemental {
    /// Signed terms of the inequality over an `n`-element ground set.
    pub fn terms(&self, n: usize) -> Vec<(Subset, i64)> {
        match *self {
            Elemental::Monotone { i } => {
                let full = Subset::full(n);
                vec![(full, 1), (full.without(i), -1)]
            }
            Elemental::Submodular { i, j, rest } => vec![
                (rest.with(i), 1),
                (rest.with(j), 1),
                (rest.with(i).with(j), -1),
                (rest, -1),
            ],
        }
    }
}

impl fmt::Display for Elemental {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elemental::Monotone { i } => write!(f, "h(N) ≥ h(N∖{{{i}}})"),
            Elemental::Submodular { i, j, rest } => {
                write!(f, "h(K∪{{{i}}}) + h(K∪{{{j}}}) ≥ h(K∪{{{i},{j}}}) + h(K), K = {:#b}", rest.0)
            }
        }
    }
}

/// The minimal generating set: `n` monotonicity rows followed by
/// `C(n,2)·2^(n−2)` submodularity rows.
pub fn elemental_inequalities(n: usize) -> Vec<Elemental> {
    let mut out: Vec<Elemental> = (0..n).map(|i| Elemental::Monotone { i }).collect();
    for i in 0..n {
        for j in i + 1..n {
            let others = Subset::full(n).without(i).without(j);
            for rest in subsets_of(others) {
                out.push(Elemental::Submodular { i, j, rest });
            }
        }
    }
    out
}

/// All subsets of `mask`, in increasing numeric order.
pub fn subsets_of(mask: Subset) -> impl Iterator<Item = Subset> {
    let m = mask.0;
    let mut cur: Option<u64> = Some(0);
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == m { None } else { Some(((c | !m).wrapping_add(1)) & m) };
        Some(Subset(c))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolymatroidViolation {
    NonzeroEmpty,
    Elemental(Elemental),
    /// Full-mode witness: `h(a∪b) + h(a∩b) > h(a) + h(b)` or `h(a) > h(b)` for `a ⊆ b`.
    Submodular { a: Subset, b: Subset },
    Monotone { smaller: Subset, larger: Subset },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFunction {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl RankFunction {
    pub fn zero(ground: GroundSet) -> Self {
        let n = ground.num_subsets();
        Self { ground, values: vec![rational::zero(); n] }
    }

    pub fn from_values(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.num_subsets() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                ground.num_subsets(),
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidArgument("h(∅) must be 0".into()));
        }
        Ok(Self { ground, values })
    }

    pub fn from_fn(ground: GroundSet, f: impl Fn(Subset) -> Rational) -> Self {
        let values = (0..ground.num_subsets() as u64).map(|m| f(Subset(m))).collect();
        Self { ground, values }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn get(&self, s: Subset) -> &Rational {
        &self.values[s.index()]
    }

    pub fn set(&mut self, s: Subset, v: Rational) {
        self.values[s.index()] = v;
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `h(α | β) = h(α∪β) − h(β)`
    pub fn conditional(&self, alpha: Subset, beta: Subset) -> Rational {
        self.get(alpha.union(beta)) - self.get(beta)
    }

    /// `h(α ∧ β) = h(α) + h(β) − h(α∪β)`
    pub fn mutual(&self, alpha: Subset, beta: Subset) -> Rational {
        self.get(alpha) + self.get(beta) - self.get(alpha.union(beta))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self { ground: self.ground.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ground != other.ground {
            return Err(Error::Shape("ground sets differ".into()));
        }
        Ok(Self {
            ground: self.ground.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    /// Checks `h(∅)=0` and the minimal elemental inequalities exactly.
    pub fn is_polymatroid(&self) -> std::result::Result<(), PolymatroidViolation> {
        if !self.values[0].is_zero() {
            return Err(PolymatroidViolation::NonzeroEmpty);
        }
        let n = self.ground.len();
        for ineq in elemental_inequalities(n) {
            let total: Rational = ineq
                .terms(n)
                .into_iter()
                .map(|(s, c)| self.get(s) * rational::q(c))
                .fold(rational::zero(), |a, b| a + b);
            if total.is_negative() {
                return Err(PolymatroidViolation::Elemental(ineq));
            }
        }
        Ok(())
    }

    /// Checks monotonicity and submodularity over every pair of subsets.
    /// Quadratic in `2^n`; used to cross-check the elemental test.
    pub fn is_polymatroid_full(&self) -> std::result::Result<(), PolymatroidViolation> {
        if !self.values[0].is_zero() {
            return Err(PolymatroidViolation::NonzeroEmpty);
        }
        let m = self.ground.num_subsets() as u64;
        for a in 0..m {
            for b in 0..m {
                let (a, b) = (Subset(a), Subset(b));
                if a.is_subset_of(b) && self.get(a) > self.get(b) {
                    return Err(PolymatroidViolation::Monotone { smaller: a, larger: b });
                }
                if self.get(a.union(b)) + self.get(a.intersection(b)) > self.get(a) + self.get(b) {
                    return Err(PolymatroidViolation::Submodular { a, b });
                }
            }
        }
        Ok(())
    }

    pub fn to_export(&self) -> RankFunctionExport {
        let values = (0..self.ground.num_subsets() as u64)
            .skip(1)
            .map(|m| {
                let s = Subset(m);
                (self.ground.subset_key(s), rational::format_rational(self.get(s)))
            })
            .collect();
        RankFunctionExport { ground: self.ground.labels().to_vec(), values }
    }

    pub fn from_export(export: &RankFunctionExport) -> Result<Self> {
        let ground = GroundSet::new(export.ground.clone())?;
        let mut h = RankFunction::zero(ground.clone());
        let mut seen = 0usize;
        for (key, val) in &export.values {
            let labels: Vec<&str> = if key.is_empty() { Vec::new() } else { key.split(',').collect() };
            let s = ground.subset_of(&labels)?;
            let v = rational::parse_rational(val)?;
            if s.is_empty() {
                if !v.is_zero() {
                    return Err(Error::InvalidArgument("h(∅) must be 0".into()));
                }
                continue;
            }
            h.set(s, v);
            seen += 1;
        }
        if seen != ground.num_subsets() - 1 {
            return Err(Error::Shape(format!(
                "rank function export lists {seen} of {} nonempty subsets",
                ground.num_subsets() - 1
            )));
        }
        Ok(h)
    }
}

/// JSON form: `{"ground":[labels], "values":{"a,b": "3/2", …}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFunctionExport {
    pub ground: Vec<String>,
    pub values: BTreeMap<String, String>,
}

/// `h(β) = 1` if `β ∩ T ≠ ∅`, else `0`.
pub fn atomic_function(ground: &GroundSet, t: Subset) -> Result<RankFunction> {
    if t.is_empty() {
        return Err(Error::InvalidArgument("atomic function needs a nonempty set".into()));
    }
    if !t.is_subset_of(ground.full()) {
        return Err(Error::InvalidArgument("set outside the ground set".into()));
    }
    Ok(RankFunction::from_fn(ground.clone(), |b| {
        if b.intersection(t).is_empty() {
            rational::zero()
        } else {
            rational::one()
        }
    }))
}

/// Nonnegative combination `Σ c_i · atomic(T_i)`.
pub fn almost_atomic_sum(ground: &GroundSet, terms: &[(Rational, Subset)]) -> Result<RankFunction> {
    let mut h = RankFunction::zero(ground.clone());
    for (c, t) in terms {
        if c.is_negative() {
            return Err(Error::InvalidArgument("negative weight in almost atomic sum".into()));
        }
        let a = atomic_function(ground, *t)?;
        h = h.add(&a.scaled(c))?;
    }
    Ok(h)
}
