//! Zero-error and secrecy verification, fitness, induced distributions and
//! entropy extraction.

use num_traits::FromPrimitive;
use serde::Serialize;

use super::eval::{self, Evaluation};
use super::{Code, GeneralCode, LinearCode};
use crate::error::{Error, Result};
use crate::model::{Element, Problem, RateCapacityTuple};
use crate::rank::constraints::ProblemGround;
use crate::rank::distribution::{Distribution, Variable, DISTRIBUTION_VAR_CAP};
use crate::rank::gf::Matrix;
use crate::rank::representable::{representable_function, SubspaceFamily};
use crate::rank::{RankFunction, RankFunctionExport, Subset, DEFAULT_GROUND_CAP};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinkVerdict {
    pub source: String,
    pub sink: String,
    pub decodable: bool,
    /// Two worlds (source values, then node keys) that the sink cannot tell
    /// apart although they differ on the source.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Vec<u32>, Vec<u32>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecrecyVerdict {
    pub adversary: usize,
    /// Exact: targets and taps are independent.
    pub independent: bool,
    /// Informational: `I(targets; taps)` in bits.
    pub leakage_bits: f64,
    /// Informational: leakage divided by `H(targets)`.
    pub normalized_leakage: f64,
}

/// Support sizes `|SP(Y_s)|` and `|SP(Y_e)|`; for routed links the product of
/// the part supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fitness {
    pub source_support: Vec<u64>,
    pub edge_support: Vec<u64>,
}

impl Fitness {
    pub fn rate_bits(&self) -> Vec<f64> {
        self.source_support.iter().map(|&n| (n as f64).log2()).collect()
    }

    pub fn capacity_bits(&self) -> Vec<f64> {
        self.edge_support.iter().map(|&n| (n as f64).log2()).collect()
    }

    /// The tuple `(log2 |SP(Y_s)|, log2 |SP(Y_e)|)`, when every support is a
    /// power of two.
    pub fn exact(&self) -> Option<RateCapacityTuple> {
        let logs = |v: &[u64]| v.iter().map(|&n| rational::exact_log2(n)).collect::<Option<Vec<_>>>();
        Some(RateCapacityTuple { rates: logs(&self.source_support)?, capacities: logs(&self.edge_support)? })
    }

    /// Whether the code is fit for `t`: rates at most and capacities at least
    /// the logged supports. Exact comparisons via `2^r ≤ n` on rationals are
    /// only available for power-of-two supports; otherwise `None`.
    pub fn is_fit_for(&self, t: &RateCapacityTuple) -> Option<bool> {
        let own = self.exact()?;
        Some(
            t.rates.iter().zip(&own.rates).all(|(r, o)| r <= o)
                && t.capacities.iter().zip(&own.capacities).all(|(c, o)| c >= o),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Every edge is a function of its inputs (and its tail key). Table codes
    /// satisfy this by construction; linear codes need the span condition.
    pub deterministic: bool,
    pub nondeterministic_edges: Vec<String>,
    pub decoding: Vec<SinkVerdict>,
    /// Present when secrecy was requested.
    pub secrecy: Option<Vec<SecrecyVerdict>>,
    pub fitness: Fitness,
    /// Exact entropy function when the ground set is small and every
    /// marginal has a power-of-two support.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<RankFunctionExport>,
}

impl VerificationReport {
    pub fn zero_error(&self) -> bool {
        self.deterministic && self.decoding.iter().all(|v| v.decodable)
    }

    pub fn strongly_secure(&self) -> Option<bool> {
        self.secrecy.as_ref().map(|v| v.iter().all(|s| s.independent))
    }

    /// Zero-error and, when requested, strongly secure.
    pub fn passed(&self) -> bool {
        self.zero_error() && self.strongly_secure().unwrap_or(true)
    }
}

/// Node keys enter the ground set in secure problems and for keyed codes.
fn with_nodes(code: &Code, p: &Problem) -> bool {
    p.is_secure()
        || match code {
            Code::General(c) => c.is_stochastic(),
            Code::Linear(c) => c.key_lengths.is_some(),
        }
}

fn code_ground(code: &Code, p: &Problem) -> Result<ProblemGround> {
    ProblemGround::with_cap(p, with_nodes(code, p), DISTRIBUTION_VAR_CAP)
}

/// Verifies a code; `strong_secrecy` adds the exact independence test per
/// adversary.
pub fn verify(code: &Code, p: &Problem, strong_secrecy: bool) -> Result<VerificationReport> {
    match code {
        Code::General(c) => verify_general(c, p, strong_secrecy),
        Code::Linear(c) => verify_linear(c, p, strong_secrecy),
    }
}

/// As [`verify`], and also attaches the exact entropy function when the
/// ground set is small enough to tabulate.
pub fn verify_with_entropy(code: &Code, p: &Problem, strong_secrecy: bool) -> Result<VerificationReport> {
    let mut report = verify(code, p, strong_secrecy)?;
    let pg = code_ground(code, p)?;
    if pg.ground.len() <= DEFAULT_GROUND_CAP && report.deterministic {
        report.entropy = extract_rank_function(code, p).ok().map(|h| h.to_export());
    }
    Ok(report)
}

fn verify_general(c: &GeneralCode, p: &Problem, strong: bool) -> Result<VerificationReport> {
    let ev = Evaluation::of(c, p)?;
    let mut decoding = Vec::new();
    for (si, s) in p.sources.iter().enumerate() {
        for &u in &s.sinks {
            let obs: Vec<&[u32]> = p.in_node_of(u).iter().map(|&el| ev.column(el)).collect();
            let target = [ev.column(Element::Source(si))];
            let witness = eval::determines(&obs, &target, ev.worlds).map(|(a, b)| (ev.world_point(a), ev.world_point(b)));
            decoding.push(SinkVerdict {
                source: s.id.clone(),
                sink: p.nodes[u].clone(),
                decodable: witness.is_none(),
                witness,
            });
        }
    }
    let secrecy = strong.then(|| {
        p.adversaries()
            .iter()
            .enumerate()
            .map(|(r, adv)| {
                let a: Vec<&[u32]> = adv.targets.iter().map(|&s| ev.column(Element::Source(s))).collect();
                let b: Vec<&[u32]> = adv.taps.iter().map(|&e| ev.column(Element::Edge(e))).collect();
                let ab: Vec<&[u32]> = a.iter().chain(&b).copied().collect();
                let ha = eval::entropy_bits(&a, ev.worlds);
                let leak = (ha + eval::entropy_bits(&b, ev.worlds) - eval::entropy_bits(&ab, ev.worlds)).max(0.0);
                SecrecyVerdict {
                    adversary: r,
                    independent: eval::independent(&a, &b, ev.worlds),
                    leakage_bits: leak,
                    normalized_leakage: if ha > 0.0 { leak / ha } else { 0.0 },
                }
            })
            .collect()
    });
    Ok(VerificationReport {
        deterministic: true,
        nondeterministic_edges: Vec::new(),
        decoding,
        secrecy,
        fitness: general_fitness(c, &ev),
        entropy: None,
    })
}

fn general_fitness(c: &GeneralCode, ev: &Evaluation) -> Fitness {
    Fitness {
        source_support: ev.sources.iter().map(|col| eval::support_of(col)).collect(),
        edge_support: (0..c.edge_alphabets.len())
            .map(|e| match &ev.parts[e] {
                Some(parts) => parts.iter().map(|col| eval::support_of(col)).product(),
                None => eval::support_of(&ev.edges[e]),
            })
            .collect(),
    }
}

fn linear_fitness(c: &LinearCode) -> Result<Fitness> {
    let field = c.field()?;
    let pow = |r: usize| (c.q as u64).checked_pow(r as u32).ok_or_else(|| Error::InvalidArgument("support overflows".into()));
    Ok(Fitness {
        source_support: c.lengths.iter().map(|&l| pow(l)).collect::<Result<_>>()?,
        edge_support: c.kernels.iter().map(|g| pow(g.rank(&field))).collect::<Result<_>>()?,
    })
}

fn verify_linear(c: &LinearCode, p: &Problem, strong: bool) -> Result<VerificationReport> {
    c.check_shape(p)?;
    let field = c.field()?;
    let mut nondeterministic_edges = Vec::new();
    for e in 0..p.num_edges() {
        if !c.kernels[e].columns_in_span_of(&c.input_kernel(p, e), &field)? {
            nondeterministic_edges.push(p.edges[e].id.clone());
        }
    }
    let mut decoding = Vec::new();
    for (si, s) in p.sources.iter().enumerate() {
        for &u in &s.sinks {
            let obs = c.kernel_of_set(p.in_node_of(u));
            let decodable = c.source_kernel(si).columns_in_span_of(&obs, &field)?;
            decoding.push(SinkVerdict { source: s.id.clone(), sink: p.nodes[u].clone(), decodable, witness: None });
        }
    }
    let log_q = (c.q as f64).log2();
    let secrecy = strong.then(|| {
        p.adversaries()
            .iter()
            .enumerate()
            .map(|(r, adv)| {
                let a: Vec<Element> = adv.targets.iter().map(|&s| Element::Source(s)).collect();
                let b: Vec<Element> = adv.taps.iter().map(|&e| Element::Edge(e)).collect();
                let ra = c.kernel_of_set(&a).rank(&field);
                let rb = c.kernel_of_set(&b).rank(&field);
                let rab = c.kernel_of_set(&[a.clone(), b].concat()).rank(&field);
                let leak = (ra + rb - rab) as f64 * log_q;
                SecrecyVerdict {
                    adversary: r,
                    independent: ra + rb == rab,
                    leakage_bits: leak,
                    normalized_leakage: if ra > 0 { leak / (ra as f64 * log_q) } else { 0.0 },
                }
            })
            .collect()
    });
    Ok(VerificationReport {
        deterministic: nondeterministic_edges.is_empty(),
        nondeterministic_edges,
        decoding,
        secrecy,
        fitness: linear_fitness(c)?,
        entropy: None,
    })
}

/// Cross-oracle for linear codes: the same verdicts computed by scanning the
/// directly induced distribution `Y_f = x · G_f` instead of span and rank
/// tests.
pub fn verify_linear_by_scan(c: &LinearCode, p: &Problem, strong: bool) -> Result<VerificationReport> {
    c.check_shape(p)?;
    let code = Code::Linear(c.clone());
    let d = linear_distribution(c, p)?;
    let pg = code_ground(&code, p)?;
    let mut nondeterministic_edges = Vec::new();
    for e in 0..p.num_edges() {
        let mut inputs = pg.set_of(p.in_edge_of(e));
        if pg.is_secure() {
            inputs = inputs.with(pg.element(Element::Node(p.edges[e].tail)));
        }
        if d.determines(inputs, Subset::singleton(pg.edges[e])).is_err() {
            nondeterministic_edges.push(p.edges[e].id.clone());
        }
    }
    let mut decoding = Vec::new();
    for (si, s) in p.sources.iter().enumerate() {
        for &u in &s.sinks {
            let res = d.determines(pg.set_of(p.in_node_of(u)), Subset::singleton(pg.sources[si]));
            decoding.push(SinkVerdict {
                source: s.id.clone(),
                sink: p.nodes[u].clone(),
                decodable: res.is_ok(),
                witness: res.err(),
            });
        }
    }
    let secrecy = strong.then(|| {
        p.adversaries()
            .iter()
            .enumerate()
            .map(|(r, adv)| {
                let a = Subset::from_indices(adv.targets.iter().map(|&s| pg.sources[s]));
                let b = Subset::from_indices(adv.taps.iter().map(|&e| pg.edges[e]));
                let leak = (d.entropy_bits(a) + d.entropy_bits(b) - d.entropy_bits(a.union(b))).max(0.0);
                let ha = d.entropy_bits(a);
                SecrecyVerdict {
                    adversary: r,
                    independent: d.independent(a, b),
                    leakage_bits: leak,
                    normalized_leakage: if ha > 0.0 { leak / ha } else { 0.0 },
                }
            })
            .collect()
    });
    let fitness = Fitness {
        source_support: pg.sources.iter().map(|&i| d.support_size(Subset::singleton(i))).collect(),
        edge_support: pg.edges.iter().map(|&i| d.support_size(Subset::singleton(i))).collect(),
    };
    Ok(VerificationReport {
        deterministic: nondeterministic_edges.is_empty(),
        nondeterministic_edges,
        decoding,
        secrecy,
        fitness,
        entropy: None,
    })
}

/// Fitness envelope of a verified code.
pub fn fitness_envelope(code: &Code, p: &Problem) -> Result<Fitness> {
    let report = match code {
        Code::General(c) => verify_general(c, p, false)?,
        Code::Linear(c) => verify_linear(c, p, false)?,
    };
    if !report.zero_error() {
        return Err(Error::Unverified("the code is not a zero-error code for this problem".into()));
    }
    Ok(report.fitness)
}

fn uniform_mass(n: usize) -> Rational {
    Rational::new(1.into(), n.into())
}

/// Joint law of `(Y_s, Y_e[, key_u])` with sources and keys uniform and
/// independent. Variables are named as in [`ProblemGround`].
pub fn induced_distribution(code: &Code, p: &Problem) -> Result<Distribution> {
    match code {
        Code::Linear(c) => linear_distribution(c, p),
        Code::General(c) => {
            let pg = code_ground(code, p)?;
            let ev = Evaluation::of(c, p)?;
            let mut vars: Vec<Variable> = Vec::new();
            let labels = pg.ground.labels();
            let mut cols: Vec<&[u32]> = Vec::new();
            for (s, &a) in c.source_alphabets.iter().enumerate() {
                vars.push(Variable { name: labels[pg.sources[s]].clone(), alphabet: a });
                cols.push(&ev.sources[s]);
            }
            for (e, &a) in c.edge_alphabets.iter().enumerate() {
                vars.push(Variable { name: labels[pg.edges[e]].clone(), alphabet: a });
                cols.push(&ev.edges[e]);
            }
            if let Some(nodes) = &pg.nodes {
                for (u, &i) in nodes.iter().enumerate() {
                    vars.push(Variable { name: labels[i].clone(), alphabet: c.key_alphabet(u) });
                    cols.push(&ev.keys[u]);
                }
            }
            let mass = uniform_mass(ev.worlds);
            let pmf = (0..ev.worlds).map(|w| (cols.iter().map(|col| col[w]).collect(), mass.clone())).collect();
            Distribution::new(vars, pmf)
        }
    }
}

fn linear_distribution(c: &LinearCode, p: &Problem) -> Result<Distribution> {
    c.check_shape(p)?;
    let field = c.field()?;
    let code = Code::Linear(c.clone());
    let pg = code_ground(&code, p)?;
    let labels = pg.ground.labels();
    let mut vars = Vec::new();
    let mut kernels: Vec<Matrix> = Vec::new();
    for s in 0..p.num_sources() {
        kernels.push(c.source_kernel(s));
        vars.push(labels[pg.sources[s]].clone());
    }
    for e in 0..p.num_edges() {
        kernels.push(c.kernels[e].clone());
        vars.push(labels[pg.edges[e]].clone());
    }
    if let Some(nodes) = &pg.nodes {
        for (u, &i) in nodes.iter().enumerate() {
            kernels.push(c.key_kernel(u));
            vars.push(labels[i].clone());
        }
    }
    let vars: Vec<Variable> = vars
        .into_iter()
        .zip(&kernels)
        .map(|(name, g)| {
            Ok(Variable {
                name,
                alphabet: u32::try_from((c.q as u64).pow(g.cols() as u32))
                    .map_err(|_| Error::InvalidArgument("alphabet overflows".into()))?,
            })
        })
        .collect::<Result<_>>()?;
    let dim = c.total_dim();
    let n = (c.q as usize)
        .checked_pow(dim as u32)
        .filter(|&n| n <= eval::MAX_WORLDS)
        .ok_or_else(|| Error::InvalidArgument(format!("q^{dim} ambient vectors are too many")))?;
    let mass = uniform_mass(n);
    let pmf = (0..n)
        .map(|i| {
            let x = super::decode_vector(i as u32, c.q, dim);
            let point = kernels.iter().map(|g| super::encode_vector(&g.apply_row(&x, &field), c.q)).collect();
            (point, mass.clone())
        })
        .collect();
    Distribution::new(vars, pmf)
}

/// Ranks `dim span{G_f : f ∈ α}` over the code's ground set, in units of
/// `log2 q` bits.
pub fn linear_rank_function(c: &LinearCode, p: &Problem) -> Result<RankFunction> {
    c.check_shape(p)?;
    let code = Code::Linear(c.clone());
    let pg = ProblemGround::new(p, with_nodes(&code, p))?;
    let mut spans = vec![Matrix::zeros(c.total_dim(), 0); pg.ground.len()];
    for s in 0..p.num_sources() {
        spans[pg.sources[s]] = c.source_kernel(s);
    }
    for e in 0..p.num_edges() {
        spans[pg.edges[e]] = c.kernels[e].clone();
    }
    if let Some(nodes) = &pg.nodes {
        for (u, &i) in nodes.iter().enumerate() {
            spans[i] = c.key_kernel(u);
        }
    }
    let family = SubspaceFamily::new(c.q, c.total_dim(), pg.ground, spans)?;
    Ok(representable_function(&family))
}

/// The entropy function (in bits) induced by a code. Linear codes use the
/// representable function of their kernels, which is exact when `q` is a
/// power of two; table codes use the induced distribution, which is exact
/// when it is quasi-uniform with power-of-two supports.
pub fn extract_rank_function(code: &Code, p: &Problem) -> Result<RankFunction> {
    match code {
        Code::Linear(c) => {
            let field = c.field()?;
            if field.characteristic() != 2 {
                return Err(Error::InvalidArgument(format!("log2({}) is irrational", c.q)));
            }
            let scale = Rational::from_u32(field.degree()).expect("small");
            Ok(linear_rank_function(c, p)?.scaled(&scale))
        }
        Code::General(_) => {
            let d = induced_distribution(code, p)?;
            d.entropy_function()?
                .exact()
                .ok_or_else(|| Error::InvalidArgument("entropy function is not rational".into()))
        }
    }
}
