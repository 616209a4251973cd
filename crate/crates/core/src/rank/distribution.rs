//! Finite joint distributions with exact rational masses.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GroundSet, RankFunction, Subset};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Distributions may carry more variables than a rank function can index;
/// only full entropy functions are capped.
pub const DISTRIBUTION_VAR_CAP: usize = 63;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub alphabet: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    vars: Vec<Variable>,
    ground: GroundSet,
    /// Support points with their (positive) masses, sorted by point.
    atoms: Vec<(Vec<u32>, Rational)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PmfEntry {
    point: Vec<u32>,
    p: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DistributionFile {
    vars: Vec<Variable>,
    pmf: Vec<PmfEntry>,
}

/// A subset whose marginal is not uniform on its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonUniformWitness {
    pub subset: Subset,
    pub heavier: (Vec<u32>, Rational),
    pub lighter: (Vec<u32>, Rational),
}

impl Distribution {
    pub fn new(vars: Vec<Variable>, pmf: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        let ground = GroundSet::with_cap(vars.iter().map(|v| v.name.clone()).collect(), DISTRIBUTION_VAR_CAP)?;
        let mut merged: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (point, p) in pmf {
            if point.len() != vars.len() {
                return Err(Error::Shape(format!("point of length {} for {} variables", point.len(), vars.len())));
            }
            if let Some((x, v)) = point.iter().zip(&vars).find(|(x, v)| **x >= v.alphabet) {
                return Err(Error::InvalidArgument(format!("value {x} outside alphabet of {}", v.name)));
            }
            if p.is_negative() {
                return Err(Error::InvalidArgument("negative probability".into()));
            }
            *merged.entry(point).or_insert_with(rational::zero) += p;
        }
        let total: Rational = merged.values().fold(rational::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {}",
                rational::format_rational(&total)
            )));
        }
        let atoms = merged.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Self { vars, ground, atoms })
    }

    /// Equiprobable mixture over the listed points (repeats add mass).
    pub fn uniform_over(vars: Vec<Variable>, points: Vec<Vec<u32>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty support".into()));
        }
        let p = Rational::new(BigInt::one(), BigInt::from(points.len()));
        Self::new(vars, points.into_iter().map(|x| (x, p.clone())).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DistributionFile = serde_json::from_str(text)?;
        let pmf = file
            .pmf
            .into_iter()
            .map(|e| Ok((e.point, rational::parse_rational(&e.p)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.vars, pmf)
    }

    pub fn to_json(&self) -> String {
        let file = DistributionFile {
            vars: self.vars.clone(),
            pmf: self
                .atoms
                .iter()
                .map(|(x, p)| PmfEntry { point: x.clone(), p: rational::format_rational(p) })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn atoms(&self) -> &[(Vec<u32>, Rational)] {
        &self.atoms
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn project(point: &[u32], s: Subset) -> Vec<u32> {
        s.iter().map(|i| point[i]).collect()
    }

    pub fn marginal(&self, s: Subset) -> HashMap<Vec<u32>, Rational> {
        let mut m: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (x, p) in &self.atoms {
            *m.entry(Self::project(x, s)).or_insert_with(rational::zero) += p;
        }
        m
    }

    pub fn support_size(&self, s: Subset) -> u64 {
        let set: HashSet<Vec<u32>> = self.atoms.iter().map(|(x, _)| Self::project(x, s)).collect();
        set.len() as u64
    }

    pub fn entropy_bits(&self, s: Subset) -> f64 {
        self.marginal(s)
            .values()
            .map(|p| {
                let p = rational::to_f64(p);
                -p * p.log2()
            })
            .sum::<f64>()
            .max(0.0)
    }

    /// Full entropy profile; refused above the rank-function cap.
    pub fn entropy_function(&self) -> Result<EntropyProfile> {
        let ground = GroundSet::new(self.ground.labels().to_vec())?;
        let n = ground.num_subsets();
        let mut bits = Vec::with_capacity(n);
        let mut support = Vec::with_capacity(n);
        let mut quasi = true;
        for m in 0..n as u64 {
            let marg = self.marginal(Subset(m));
            let size = marg.len() as u64;
            let expected = Rational::new(BigInt::one(), BigInt::from(size));
            quasi &= marg.values().all(|p| *p == expected);
            bits.push(if m == 0 { 0.0 } else { self.entropy_bits(Subset(m)) });
            support.push(size);
        }
        Ok(EntropyProfile { ground, bits, support, quasi_uniform: quasi })
    }

    /// Exact check that every marginal is uniform on its support.
    pub fn is_quasi_uniform(&self) -> std::result::Result<(), NonUniformWitness> {
        for m in 1..(1u64 << self.num_vars()) {
            let s = Subset(m);
            let marg = self.marginal(s);
            let mut entries: Vec<(Vec<u32>, Rational)> = marg.into_iter().collect();
            entries.sort();
            let hi = entries.iter().max_by(|a, b| a.1.cmp(&b.1)).unwrap();
            let lo = entries.iter().min_by(|a, b| a.1.cmp(&b.1)).unwrap();
            if hi.1 != lo.1 {
                return Err(NonUniformWitness { subset: s, heavier: hi.clone(), lighter: lo.clone() });
            }
        }
        Ok(())
    }

    /// Whether the `b`-projection determines the `a`-projection on the support,
    /// i.e. `H(A | B) = 0`. On failure returns two support points that agree on
    /// `b` and differ on `a`.
    pub fn determines(&self, b: Subset, a: Subset) -> std::result::Result<(), (Vec<u32>, Vec<u32>)> {
        let mut seen: HashMap<Vec<u32>, &Vec<u32>> = HashMap::new();
        for (x, _) in &self.atoms {
            let key = Self::project(x, b);
            match seen.get(&key) {
                Some(y) if Self::project(y, a) != Self::project(x, a) => return Err(((*y).clone(), x.clone())),
                Some(_) => {}
                None => {
                    seen.insert(key, x);
                }
            }
        }
        Ok(())
    }

    /// Exact factorization `P(x_1,…,x_k) = Π P(x_i)` over disjoint parts.
    pub fn mutually_independent(&self, parts: &[Subset]) -> bool {
        let parts: Vec<Subset> = parts.iter().copied().filter(|p| !p.is_empty()).collect();
        if parts.len() < 2 {
            return true;
        }
        let union = parts.iter().fold(Subset::EMPTY, |a, b| a.union(*b));
        let joint = self.marginal(union);
        let margs: Vec<HashMap<Vec<u32>, Rational>> = parts.iter().map(|p| self.marginal(*p)).collect();
        let product_size: u128 = margs.iter().map(|m| m.len() as u128).product();
        if joint.len() as u128 != product_size {
            return false;
        }
        // positions of each part's variables inside the union's projection
        let union_idx: Vec<usize> = union.iter().collect();
        let locate: Vec<Vec<usize>> = parts
            .iter()
            .map(|p| p.iter().map(|i| union_idx.iter().position(|&j| j == i).unwrap()).collect())
            .collect();
        joint.iter().all(|(x, p)| {
            let prod = locate.iter().zip(&margs).fold(rational::one(), |acc, (pos, m)| {
                let key: Vec<u32> = pos.iter().map(|&i| x[i]).collect();
                acc * &m[&key]
            });
            *p == prod
        })
    }

    pub fn independent(&self, a: Subset, b: Subset) -> bool {
        if !a.intersection(b).is_empty() {
            // overlap: independent only if the shared part is constant
            let shared = a.intersection(b);
            if self.support_size(shared) != 1 {
                return false;
            }
            return self.mutually_independent(&[a.minus(shared), b.minus(shared)]);
        }
        self.mutually_independent(&[a, b])
    }

    /// Appends a variable `W` indexing, for each value of `b`, the support
    /// points of `a` in lexicographic order, so that `(B, W)` determines `A`.
    pub fn index_variable(&self, a: Subset, b: Subset, name: &str) -> Result<Distribution> {
        if self.is_quasi_uniform().is_err() {
            return Err(Error::NotQuasiUniform);
        }
        let mut fibres: HashMap<Vec<u32>, Vec<Vec<u32>>> = HashMap::new();
        for (x, _) in &self.atoms {
            fibres.entry(Self::project(x, b)).or_default().push(Self::project(x, a));
        }
        for f in fibres.values_mut() {
            f.sort();
            f.dedup();
        }
        let width = fibres.values().map(|f| f.len()).max().unwrap_or(1) as u32;
        let mut vars = self.vars.clone();
        vars.push(Variable { name: name.to_string(), alphabet: width });
        let pmf = self
            .atoms
            .iter()
            .map(|(x, p)| {
                let fibre = &fibres[&Self::project(x, b)];
                let w = fibre.binary_search(&Self::project(x, a)).unwrap() as u32;
                let mut y = x.clone();
                y.push(w);
                (y, p.clone())
            })
            .collect();
        Distribution::new(vars, pmf)
    }

    pub fn rename(&self, names: &[String]) -> Result<Distribution> {
        if names.len() != self.vars.len() {
            return Err(Error::Shape("name count differs from variable count".into()));
        }
        let vars = self
            .vars
            .iter()
            .zip(names)
            .map(|(v, n)| Variable { name: n.clone(), alphabet: v.alphabet })
            .collect();
        Distribution::new(vars, self.atoms.clone())
    }
}

/// Independent coupling of two quasi-uniform collections of equal arity:
/// coordinate `i` of the result is the pair `(A_i, B_i)`.
pub fn sum_quasi_uniform(d1: &Distribution, d2: &Distribution) -> Result<Distribution> {
    if d1.num_vars() != d2.num_vars() {
        return Err(Error::Shape(format!("arity {} vs {}", d1.num_vars(), d2.num_vars())));
    }
    if d1.is_quasi_uniform().is_err() || d2.is_quasi_uniform().is_err() {
        return Err(Error::NotQuasiUniform);
    }
    let vars: Vec<Variable> = d1
        .vars
        .iter()
        .zip(&d2.vars)
        .map(|(a, b)| Variable { name: a.name.clone(), alphabet: a.alphabet * b.alphabet })
        .collect();
    let mut pmf = Vec::with_capacity(d1.atoms.len() * d2.atoms.len());
    for (x, p) in &d1.atoms {
        for (y, r) in &d2.atoms {
            let point = x.iter().zip(y).zip(&d2.vars).map(|((a, b), v)| a * v.alphabet + b).collect();
            pmf.push((point, p * r));
        }
    }
    Distribution::new(vars, pmf)
}

/// Entropies of every marginal: floating-point bits for reporting, exact
/// support sizes for decisions.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProfile {
    pub ground: GroundSet,
    pub bits: Vec<f64>,
    pub support: Vec<u64>,
    pub quasi_uniform: bool,
}

impl EntropyProfile {
    pub fn bits_of(&self, s: Subset) -> f64 {
        self.bits[s.index()]
    }

    pub fn support_of(&self, s: Subset) -> u64 {
        self.support[s.index()]
    }

    /// Exact rank function, available when every marginal is uniform on a
    /// support whose size is a power of two.
    pub fn exact(&self) -> Option<RankFunction> {
        if !self.quasi_uniform {
            return None;
        }
        let values = self.support.iter().map(|&n| rational::exact_log2(n)).collect::<Option<Vec<_>>>()?;
        RankFunction::from_values(self.ground.clone(), values).ok()
    }

    /// Whether `bits` agrees with `log2 |SP|` everywhere within `tol`.
    pub fn matches_log_support(&self, tol: f64) -> bool {
        self.bits.iter().zip(&self.support).all(|(b, &n)| (b - (n as f64).log2()).abs() <= tol)
    }
}
