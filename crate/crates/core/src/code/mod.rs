//! Zero-error network codes at block length one: table codes (optionally
//! keyed, optionally with routed links), linear codes over GF(q), their
//! verification, fitness and search.

pub(crate) mod eval;
pub mod search;
pub mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Element, Problem};
use crate::rank::gf::{Field, Matrix};

pub use search::{search_general, search_general_each, search_linear, search_linear_each, GeneralSpace, LinearSpace, SearchOptions, SearchOutcome, SearchReport};
pub use verify::{
    extract_rank_function, fitness_envelope, induced_distribution, verify, verify_linear_by_scan, verify_with_entropy, Fitness,
    SecrecyVerdict, SinkVerdict, VerificationReport,
};

/// Largest table a single edge may carry.
pub const MAX_TABLE_ENTRIES: usize = 1 << 24;

/// One component `Y_{f,e}` of a routed link: a function of the single input
/// `f` (the `k`-th element of `in(e)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RoutedPart {
    pub alphabet: u32,
    pub table: Vec<u32>,
}

/// A table code. With `key_alphabets` it is stochastic: every node draws an
/// independent uniform key and each edge also reads the key of its tail.
///
/// `tables[e]` is flat row-major over the values of `in(e)` (in
/// [`Problem::in_edge_of`] order, first input most significant) followed by
/// the tail key. A routed link has an empty table and one part per input; its
/// value is the mixed-radix tuple of the part values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralCode {
    pub source_alphabets: Vec<u32>,
    pub edge_alphabets: Vec<u32>,
    pub key_alphabets: Option<Vec<u32>>,
    pub tables: Vec<Vec<u32>>,
    pub routed: Vec<Option<Vec<RoutedPart>>>,
}

/// A linear code: the ambient vector is all source symbols followed by all
/// node key symbols, and `kernels[e]` (ambient × width) maps it to `Y_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    pub q: u32,
    pub lengths: Vec<usize>,
    pub key_lengths: Option<Vec<usize>>,
    pub kernels: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Code {
    General(GeneralCode),
    Linear(LinearCode),
}

impl From<GeneralCode> for Code {
    fn from(c: GeneralCode) -> Self {
        Code::General(c)
    }
}

impl From<LinearCode> for Code {
    fn from(c: LinearCode) -> Self {
        Code::Linear(c)
    }
}

fn alphabet_of(_p: &Problem, sources: &[u32], edges: &[u32], el: Element) -> u32 {
    match el {
        Element::Source(s) => sources[s],
        Element::Edge(f) => edges[f],
        Element::Node(_) => unreachable!("nodes are never edge inputs"),
    }
}

fn checked_product<I: IntoIterator<Item = u32>>(it: I) -> Option<usize> {
    it.into_iter().try_fold(1usize, |acc, a| acc.checked_mul(a as usize))
}

impl GeneralCode {
    pub fn is_stochastic(&self) -> bool {
        self.key_alphabets.is_some()
    }

    pub fn key_alphabet(&self, u: usize) -> u32 {
        self.key_alphabets.as_ref().map_or(1, |k| k[u])
    }

    /// Number of table rows of edge `e`.
    pub fn table_len(&self, p: &Problem, e: usize) -> Option<usize> {
        let inputs = p.in_edge_of(e).iter().map(|&el| alphabet_of(p, &self.source_alphabets, &self.edge_alphabets, el));
        checked_product(inputs.chain(std::iter::once(self.key_alphabet(p.edges[e].tail))))
    }

    pub fn check_shape(&self, p: &Problem) -> Result<()> {
        let shape = |m: String| Err(Error::Shape(m));
        if self.source_alphabets.len() != p.num_sources() {
            return shape(format!("{} source alphabets for {} sources", self.source_alphabets.len(), p.num_sources()));
        }
        if self.edge_alphabets.len() != p.num_edges()
            || self.tables.len() != p.num_edges()
            || self.routed.len() != p.num_edges()
        {
            return shape(format!("code does not describe all {} edges", p.num_edges()));
        }
        if let Some(k) = &self.key_alphabets {
            if k.len() != p.num_nodes() {
                return shape(format!("{} key alphabets for {} nodes", k.len(), p.num_nodes()));
            }
            if k.contains(&0) {
                return shape("key alphabets must be at least 1".into());
            }
        }
        if self.source_alphabets.contains(&0) || self.edge_alphabets.contains(&0) {
            return shape("alphabet sizes must be at least 1".into());
        }
        for e in 0..p.num_edges() {
            let id = &p.edges[e].id;
            match &self.routed[e] {
                Some(parts) => {
                    if !p.is_routing_link(e) {
                        return shape(format!("edge {id} has routed parts but is not a routing link"));
                    }
                    let inputs = p.in_edge_of(e);
                    if parts.len() != inputs.len() || !self.tables[e].is_empty() {
                        return shape(format!("routed edge {id} needs one part per input and no table"));
                    }
                    for (part, &el) in parts.iter().zip(inputs) {
                        let want = alphabet_of(p, &self.source_alphabets, &self.edge_alphabets, el) as usize;
                        if part.alphabet == 0 || part.table.len() != want || part.table.iter().any(|&v| v >= part.alphabet) {
                            return shape(format!("malformed part of routed edge {id}"));
                        }
                    }
                    if checked_product(parts.iter().map(|q| q.alphabet)) != Some(self.edge_alphabets[e] as usize) {
                        return shape(format!("alphabet of routed edge {id} is not the product of its parts"));
                    }
                }
                None => {
                    if p.is_routing_link(e) {
                        return shape(format!("routing link {id} has no routed parts"));
                    }
                    let len = self.table_len(p, e).filter(|&n| n <= MAX_TABLE_ENTRIES);
                    if len != Some(self.tables[e].len()) {
                        return shape(format!("table of edge {id} has {} entries", self.tables[e].len()));
                    }
                    if self.tables[e].iter().any(|&v| v >= self.edge_alphabets[e]) {
                        return shape(format!("table of edge {id} leaves its alphabet"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Value on edge `e` given the values of `in(e)` and the tail key.
    pub fn edge_value(&self, p: &Problem, e: usize, inputs: &[u32], key: u32) -> u32 {
        let els = p.in_edge_of(e);
        if let Some(parts) = &self.routed[e] {
            return parts.iter().zip(inputs).fold(0, |acc, (part, &x)| acc * part.alphabet + part.table[x as usize]);
        }
        let mut idx = 0usize;
        for (&el, &x) in els.iter().zip(inputs) {
            idx = idx * alphabet_of(p, &self.source_alphabets, &self.edge_alphabets, el) as usize + x as usize;
        }
        idx = idx * self.key_alphabet(p.edges[e].tail) as usize + key as usize;
        self.tables[e][idx]
    }
}

fn encode_vector(v: &[u32], q: u32) -> u32 {
    v.iter().fold(0, |acc, &x| acc * q + x)
}

fn decode_vector(mut x: u32, q: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    for i in (0..len).rev() {
        v[i] = x % q;
        x /= q;
    }
    v
}

impl LinearCode {
    pub fn field(&self) -> Result<Field> {
        Field::new(self.q)
    }

    pub fn source_dim(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn total_dim(&self) -> usize {
        self.source_dim() + self.key_lengths.as_ref().map_or(0, |k| k.iter().sum())
    }

    fn selector(&self, offset: usize, len: usize) -> Matrix {
        let mut m = Matrix::zeros(self.total_dim(), len);
        for i in 0..len {
            m.set(offset + i, i, 1);
        }
        m
    }

    /// The block selector `G_s`.
    pub fn source_kernel(&self, s: usize) -> Matrix {
        self.selector(self.lengths[..s].iter().sum(), self.lengths[s])
    }

    /// The block selector of node `u`'s key (zero columns without keys).
    pub fn key_kernel(&self, u: usize) -> Matrix {
        match &self.key_lengths {
            Some(k) => self.selector(self.source_dim() + k[..u].iter().sum::<usize>(), k[u]),
            None => Matrix::zeros(self.total_dim(), 0),
        }
    }

    pub fn kernel_of(&self, el: Element) -> Matrix {
        match el {
            Element::Source(s) => self.source_kernel(s),
            Element::Edge(e) => self.kernels[e].clone(),
            Element::Node(u) => self.key_kernel(u),
        }
    }

    pub fn kernel_of_set(&self, els: &[Element]) -> Matrix {
        let parts: Vec<Matrix> = els.iter().map(|&el| self.kernel_of(el)).collect();
        let refs: Vec<&Matrix> = parts.iter().collect();
        Matrix::hconcat(self.total_dim(), &refs).expect("kernels share the ambient dimension")
    }

    /// `[G_f : f ∈ in(e)]` followed by the tail key selector.
    pub fn input_kernel(&self, p: &Problem, e: usize) -> Matrix {
        let mut els = p.in_edge_of(e).to_vec();
        els.push(Element::Node(p.edges[e].tail));
        self.kernel_of_set(&els)
    }

    pub fn check_shape(&self, p: &Problem) -> Result<()> {
        let field = self.field()?;
        if self.lengths.len() != p.num_sources() {
            return Err(Error::Shape(format!("{} source lengths for {} sources", self.lengths.len(), p.num_sources())));
        }
        if let Some(k) = &self.key_lengths {
            if k.len() != p.num_nodes() {
                return Err(Error::Shape(format!("{} key lengths for {} nodes", k.len(), p.num_nodes())));
            }
        }
        if self.kernels.len() != p.num_edges() {
            return Err(Error::Shape(format!("{} kernels for {} edges", self.kernels.len(), p.num_edges())));
        }
        for (e, g) in self.kernels.iter().enumerate() {
            if g.rows() != self.total_dim() {
                return Err(Error::Shape(format!(
                    "kernel of {} has {} rows, ambient dimension is {}",
                    p.edges[e].id,
                    g.rows(),
                    self.total_dim()
                )));
            }
            g.check_entries(&field)?;
        }
        Ok(())
    }

    /// Alphabet size `q^width` of an element's value.
    fn alphabet(&self, width: usize) -> Result<u32> {
        u32::try_from((self.q as u64).pow(width as u32))
            .map_err(|_| Error::InvalidArgument(format!("q^{width} does not fit an alphabet")))
    }

    /// The equivalent table code: `Y_e = [Y_f, f ∈ in(e), key] · Ψ_e` with
    /// `Ψ_e` solved from `[G_in] Ψ_e = G_e`. Vectors are encoded base `q`,
    /// first coordinate most significant.
    pub fn to_general(&self, p: &Problem) -> Result<GeneralCode> {
        self.check_shape(p)?;
        let field = self.field()?;
        let source_alphabets = self.lengths.iter().map(|&l| self.alphabet(l)).collect::<Result<Vec<_>>>()?;
        let edge_alphabets = self.kernels.iter().map(|g| self.alphabet(g.cols())).collect::<Result<Vec<_>>>()?;
        let key_alphabets = self
            .key_lengths
            .as_ref()
            .map(|k| k.iter().map(|&l| self.alphabet(l)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let width = |el: Element| -> usize {
            match el {
                Element::Source(s) => self.lengths[s],
                Element::Edge(f) => self.kernels[f].cols(),
                Element::Node(u) => self.key_lengths.as_ref().map_or(0, |k| k[u]),
            }
        };
        let mut tables = Vec::with_capacity(p.num_edges());
        for e in 0..p.num_edges() {
            let mut els = p.in_edge_of(e).to_vec();
            els.push(Element::Node(p.edges[e].tail));
            let psi = self.input_kernel(p, e).solve_right(&self.kernels[e], &field).ok_or_else(|| {
                Error::Unverified(format!("kernel of {} is not a function of its inputs", p.edges[e].id))
            })?;
            let widths: Vec<usize> = els.iter().map(|&el| width(el)).collect();
            let total: usize = widths.iter().sum();
            let rows = (self.q as usize)
                .checked_pow(total as u32)
                .filter(|&n| n <= MAX_TABLE_ENTRIES)
                .ok_or_else(|| Error::InvalidArgument(format!("table of {} is too large", p.edges[e].id)))?;
            let mut table = Vec::with_capacity(rows);
            for idx in 0..rows {
                // mixed radix over the inputs equals base q over the concatenation
                let x = decode_vector(idx as u32, self.q, total);
                table.push(encode_vector(&psi.apply_row(&x, &field), self.q));
            }
            tables.push(table);
        }
        Ok(GeneralCode {
            source_alphabets,
            edge_alphabets,
            key_alphabets,
            tables,
            routed: vec![None; p.num_edges()],
        })
    }
}

/// JSON code file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeFile {
    General {
        alphabets: AlphabetsFile,
        tables: BTreeMap<String, Vec<u32>>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        routed: BTreeMap<String, Vec<RoutedPartFile>>,
    },
    Stochastic {
        alphabets: AlphabetsFile,
        tables: BTreeMap<String, Vec<u32>>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        routed: BTreeMap<String, Vec<RoutedPartFile>>,
    },
    Linear {
        q: u32,
        lengths: BTreeMap<String, usize>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        key_lengths: BTreeMap<String, usize>,
        kernels: BTreeMap<String, Vec<Vec<u32>>>,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AlphabetsFile {
    pub sources: BTreeMap<String, u32>,
    pub edges: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub keys: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoutedPartFile {
    pub alphabet: u32,
    pub table: Vec<u32>,
}

fn lookup<T: Copy>(map: &BTreeMap<String, T>, id: &str, what: &str) -> Result<T> {
    map.get(id).copied().ok_or_else(|| Error::Parse(format!("missing {what} for {id:?}")))
}

fn reject_unknown<T>(map: &BTreeMap<String, T>, known: &[&str], what: &str) -> Result<()> {
    match map.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(Error::Parse(format!("{what} names unknown id {k:?}"))),
        None => Ok(()),
    }
}

impl Code {
    pub fn from_json(text: &str, p: &Problem) -> Result<Code> {
        let file: CodeFile = serde_json::from_str(text)?;
        Code::from_file(&file, p)
    }

    pub fn to_json(&self, p: &Problem) -> String {
        serde_json::to_string_pretty(&self.to_file(p)).expect("code serializes")
    }

    pub fn check_shape(&self, p: &Problem) -> Result<()> {
        match self {
            Code::General(c) => c.check_shape(p),
            Code::Linear(c) => c.check_shape(p),
        }
    }

    pub fn from_file(file: &CodeFile, p: &Problem) -> Result<Code> {
        let source_ids: Vec<&str> = p.sources.iter().map(|s| s.id.as_str()).collect();
        let edge_ids: Vec<&str> = p.edges.iter().map(|e| e.id.as_str()).collect();
        let node_ids: Vec<&str> = p.nodes.iter().map(|s| s.as_str()).collect();
        let code = match file {
            CodeFile::General { alphabets, tables, routed } | CodeFile::Stochastic { alphabets, tables, routed } => {
                let stochastic = matches!(file, CodeFile::Stochastic { .. });
                reject_unknown(&alphabets.sources, &source_ids, "source alphabets")?;
                reject_unknown(&alphabets.edges, &edge_ids, "edge alphabets")?;
                reject_unknown(&alphabets.keys, &node_ids, "key alphabets")?;
                reject_unknown(tables, &edge_ids, "tables")?;
                reject_unknown(routed, &edge_ids, "routed parts")?;
                if !stochastic && !alphabets.keys.is_empty() {
                    return Err(Error::Parse("key alphabets need \"kind\": \"stochastic\"".into()));
                }
                let source_alphabets =
                    source_ids.iter().map(|s| lookup(&alphabets.sources, s, "source alphabet")).collect::<Result<_>>()?;
                let edge_alphabets =
                    edge_ids.iter().map(|e| lookup(&alphabets.edges, e, "edge alphabet")).collect::<Result<_>>()?;
                let key_alphabets =
                    stochastic.then(|| node_ids.iter().map(|u| alphabets.keys.get(*u).copied().unwrap_or(1)).collect());
                let mut code_tables = Vec::new();
                let mut code_routed = Vec::new();
                for e in &edge_ids {
                    match routed.get(*e) {
                        Some(parts) => {
                            code_tables.push(tables.get(*e).cloned().unwrap_or_default());
                            code_routed.push(Some(
                                parts.iter().map(|q| RoutedPart { alphabet: q.alphabet, table: q.table.clone() }).collect(),
                            ));
                        }
                        None => {
                            code_tables.push(
                                tables.get(*e).cloned().ok_or_else(|| Error::Parse(format!("missing table for {e:?}")))?,
                            );
                            code_routed.push(None);
                        }
                    }
                }
                Code::General(GeneralCode {
                    source_alphabets,
                    edge_alphabets,
                    key_alphabets,
                    tables: code_tables,
                    routed: code_routed,
                })
            }
            CodeFile::Linear { q, lengths, key_lengths, kernels } => {
                reject_unknown(lengths, &source_ids, "lengths")?;
                reject_unknown(key_lengths, &node_ids, "key lengths")?;
                let lengths: Vec<usize> =
                    source_ids.iter().map(|s| lookup(lengths, s, "source length")).collect::<Result<_>>()?;
                let key_lengths = (!key_lengths.is_empty())
                    .then(|| node_ids.iter().map(|u| key_lengths.get(*u).copied().unwrap_or(0)).collect::<Vec<_>>());
                let mut code = LinearCode { q: *q, lengths, key_lengths, kernels: Vec::new() };
                let dim = code.total_dim();
                let to_matrix = |rows: &Vec<Vec<u32>>| -> Result<Matrix> {
                    let cols = rows.first().map_or(0, |r| r.len());
                    if rows.is_empty() && dim == 0 {
                        return Ok(Matrix::zeros(0, 0));
                    }
                    Matrix::from_rows(rows.len(), cols, rows)
                };
                for e in &edge_ids {
                    let rows = kernels.get(*e).ok_or_else(|| Error::Parse(format!("missing kernel for {e:?}")))?;
                    code.kernels.push(to_matrix(rows)?);
                }
                // source kernels may be listed; they must be the block selectors
                for (id, rows) in kernels {
                    if edge_ids.contains(&id.as_str()) {
                        continue;
                    }
                    let s = source_ids
                        .iter()
                        .position(|s| s == id)
                        .ok_or_else(|| Error::Parse(format!("kernel for unknown id {id:?}")))?;
                    if to_matrix(rows)? != code.source_kernel(s) {
                        return Err(Error::Parse(format!("kernel of source {id:?} is not its block selector")));
                    }
                }
                Code::Linear(code)
            }
        };
        code.check_shape(p)?;
        Ok(code)
    }

    pub fn to_file(&self, p: &Problem) -> CodeFile {
        match self {
            Code::General(c) => {
                let alphabets = AlphabetsFile {
                    sources: p.sources.iter().zip(&c.source_alphabets).map(|(s, &a)| (s.id.clone(), a)).collect(),
                    edges: p.edges.iter().zip(&c.edge_alphabets).map(|(e, &a)| (e.id.clone(), a)).collect(),
                    keys: c
                        .key_alphabets
                        .iter()
                        .flat_map(|k| p.nodes.iter().zip(k).filter(|(_, &a)| a > 1).map(|(u, &a)| (u.clone(), a)))
                        .collect(),
                };
                let tables = p
                    .edges
                    .iter()
                    .zip(&c.tables)
                    .zip(&c.routed)
                    .filter(|(_, r)| r.is_none())
                    .map(|((e, t), _)| (e.id.clone(), t.clone()))
                    .collect();
                let routed = p
                    .edges
                    .iter()
                    .zip(&c.routed)
                    .filter_map(|(e, r)| {
                        r.as_ref().map(|parts| {
                            (
                                e.id.clone(),
                                parts.iter().map(|q| RoutedPartFile { alphabet: q.alphabet, table: q.table.clone() }).collect(),
                            )
                        })
                    })
                    .collect();
                if c.is_stochastic() {
                    CodeFile::Stochastic { alphabets, tables, routed }
                } else {
                    CodeFile::General { alphabets, tables, routed }
                }
            }
            Code::Linear(c) => CodeFile::Linear {
                q: c.q,
                lengths: p.sources.iter().zip(&c.lengths).map(|(s, &l)| (s.id.clone(), l)).collect(),
                key_lengths: c
                    .key_lengths
                    .iter()
                    .flat_map(|k| p.nodes.iter().zip(k).filter(|(_, &l)| l > 0).map(|(u, &l)| (u.clone(), l)))
                    .collect(),
                kernels: p.edges.iter().zip(&c.kernels).map(|(e, g)| (e.id.clone(), g.to_rows())).collect(),
            },
        }
    }
}

/// The classical rate-2 butterfly code over GF(2): `s-a` and `s-b` carry the
/// two source bits, `c-d` their sum.
pub fn butterfly_xor_code() -> LinearCode {
    let b1 = vec![vec![1], vec![0]];
    let b2 = vec![vec![0], vec![1]];
    let sum = vec![vec![1], vec![1]];
    let m = |rows: &Vec<Vec<u32>>| Matrix::from_rows(2, 1, rows).expect("2x1");
    // edge order of the reference butterfly: s-a s-b a-c b-c c-d a-t1 b-t2 d-t1 d-t2
    let kernels = [&b1, &b2, &b1, &b2, &sum, &b1, &b2, &sum, &sum].iter().map(|r| m(r)).collect();
    LinearCode { q: 2, lengths: vec![2], key_lengths: None, kernels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{butterfly_spec, single_edge_spec};

    fn butterfly() -> Problem {
        Problem::from_spec(&butterfly_spec()).unwrap()
    }

    #[test]
    fn linear_code_round_trips_through_json() {
        let p = butterfly();
        let code = Code::Linear(butterfly_xor_code());
        let text = code.to_json(&p);
        assert_eq!(Code::from_json(&text, &p).unwrap(), code);
    }

    #[test]
    fn xor_code_converts_to_tables() {
        let p = butterfly();
        let g = butterfly_xor_code().to_general(&p).unwrap();
        assert_eq!(g.source_alphabets, vec![4]);
        let cd = p.edge("c-d").unwrap();
        // in(c-d) = (a-c, b-c): the table is their sum
        assert_eq!(g.tables[cd], vec![0, 1, 1, 0]);
        let sa = p.edge("s-a").unwrap();
        // source value 2 = (1,0) sends its first bit
        assert_eq!(g.tables[sa], vec![0, 0, 1, 1]);
        let round = Code::from_json(&Code::General(g.clone()).to_json(&p), &p).unwrap();
        assert_eq!(round, Code::General(g));
    }

    #[test]
    fn shape_errors_are_reported() {
        let p = Problem::from_spec(&single_edge_spec()).unwrap();
        let bad = GeneralCode {
            source_alphabets: vec![2],
            edge_alphabets: vec![2],
            key_alphabets: None,
            tables: vec![vec![0, 1, 1]],
            routed: vec![None],
        };
        assert!(matches!(bad.check_shape(&p), Err(Error::Shape(_))));
        let out_of_range = GeneralCode { tables: vec![vec![0, 2]], ..bad };
        assert!(out_of_range.check_shape(&p).is_err());
        let text = r#"{"kind":"general","alphabets":{"sources":{"1":2},"edges":{"e":2,"x":2}},"tables":{"e":[0,1]}}"#;
        assert!(matches!(Code::from_json(text, &p), Err(Error::Parse(_))));
    }

    #[test]
    fn non_functional_kernel_is_rejected() {
        let p = Problem::from_spec(&single_edge_spec()).unwrap();
        // the edge claims the second coordinate which its tail never sees
        let code = LinearCode {
            q: 2,
            lengths: vec![1],
            key_lengths: Some(vec![0, 1]),
            kernels: vec![Matrix::from_rows(2, 1, &[vec![0], vec![1]]).unwrap()],
        };
        assert!(matches!(code.to_general(&p), Err(Error::Unverified(_))));
    }
}
