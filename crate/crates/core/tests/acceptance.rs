//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use netcap::code::{
    extract_rank_function, fitness_envelope, search_general_each, search_linear, verify, verify_linear_by_scan, Code,
    GeneralSpace, LinearCode, LinearSpace, SearchOptions, SearchOutcome, VerificationReport,
};
use netcap::examples::{butterfly_spec, secure_two_path_spec};
use netcap::lp::{check_certificate, solve, LpStatus};
use netcap::rank::constraints::{check_with, ConstraintSet, ProblemGround};
use netcap::rank::gf::{Field, Matrix};
use netcap::rank::representable::{representable_function, SubspaceFamily};
use netcap::rank::{atomic_function, GroundSet, Subset};
use netcap::rational::{self, frac, q, Rational};
use netcap::routing::{
    enumerate_subnetworks, is_routing_subnetwork, routing_capacity, EnumerateOptions, RoutingMode, RoutingStatus,
};
use netcap::shannon::{check_point, outer_bound, BoundMode, BoundQuery, BoundStatus};
use netcap::transform::{lift_code_incremental, lift_code_secure};
use netcap::{Problem, RateCapacityTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, vertex_oracle, with_single_edge_taps, Oracle};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))?;
    Ok(t)
}

fn butterfly() -> Problem {
    Problem::from_spec(&butterfly_spec()).unwrap()
}

fn ones(n: usize) -> Vec<Rational> {
    vec![rational::one(); n]
}

/// Fewest edges whose removal cuts every path from `from` to `to`.
fn min_edge_cut(p: &Problem, from: usize, to: usize) -> usize {
    let reaches = |removed: u64| {
        let mut reach = vec![false; p.num_nodes()];
        reach[from] = true;
        for &e in p.topological_order() {
            if removed >> e & 1 == 0 && reach[p.edges[e].tail] {
                for &h in &p.edges[e].head {
                    reach[h] = true;
                }
            }
        }
        reach[to]
    };
    (0u64..1 << p.num_edges()).filter(|&m| !reaches(m)).map(|m| m.count_ones() as usize).min().unwrap()
}

fn a1() -> Check {
    let p = butterfly();
    let start = Instant::now();
    let query = BoundQuery::throughput(p.clone()).map_err(|e| e.to_string())?;
    let res = outer_bound(&query).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(60), start)?;
    ensure(res.status == BoundStatus::Optimal, || format!("status {:?}", res.status))?;
    ensure(res.value == Some(q(2)), || format!("value {:?}", res.value))?;
    let s = &p.sources[0];
    let cut = s.sinks.iter().map(|&u| min_edge_cut(&p, s.origin[0], u)).min().unwrap();
    ensure(cut == 2, || format!("min cut {cut}"))?;
    let witness = res.witness.as_ref().ok_or("no witness")?;
    let report = check_point(witness, &query).map_err(|e| e.to_string())?;
    ensure(report.all_pass(), || format!("witness fails {:?}", report.failures()))?;
    Ok(format!("butterfly Shannon bound = 2 = min cut, {} LP rows, {t:.1?}", res.lp_rows))
}

fn a2() -> Check {
    let p = butterfly();
    let caps = p.capacities_or_unit();
    let start = Instant::now();
    let res = routing_capacity(&p, RoutingMode::Strict, &caps, &BoundMode::Throughput { direction: ones(1) }, true)
        .map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(5), start)?;
    ensure(res.status == RoutingStatus::Optimal, || format!("status {:?}", res.status))?;
    ensure(res.value == Some(frac(3, 2)), || format!("value {:?}", res.value))?;
    let trees = enumerate_subnetworks(&p, 0, EnumerateOptions { require_sink_coverage: true, minimal: true })
        .map_err(|e| e.to_string())?;
    let total: Rational = res.packing.entries.iter().map(|(_, c)| c.clone()).sum();
    ensure(total == frac(3, 2), || format!("packing carries {total}"))?;
    ensure(res.packing.satisfies_capacities(&p, &caps), || "packing overloads a link".into())?;
    ensure(res.packing.entries.iter().all(|(t, _)| trees.contains(t)), || {
        "packing uses a subnetwork that is not a minimal sink-covering tree".into()
    })?;
    // every covering tree crosses two of s-a, s-b, c-d, so 2·rate ≤ 3
    let cut: Vec<usize> = ["s-a", "s-b", "c-d"].iter().map(|id| p.edge(id).unwrap()).collect();
    ensure(trees.iter().all(|t| t.edges.iter().filter(|e| cut.contains(e)).count() >= 2), || {
        "a covering tree meets fewer than two of s-a, s-b, c-d".into()
    })?;
    Ok(format!(
        "strict routing = 3/2 on {} of the {} minimal sink-covering trees, {t:.1?}",
        res.packing.entries.len(),
        trees.len()
    ))
}

fn a3() -> Check {
    let p = butterfly();
    let start = Instant::now();
    let report = search_linear(&p, &LinearSpace::uniform(&p, 2, 2, 1), &SearchOptions::default())
        .map_err(|e| e.to_string())?;
    let SearchOutcome::Found(code) = report.outcome else { return Err(format!("{:?}", report.outcome)) };
    let code = Code::Linear(code);
    let v = verify(&code, &p, false).map_err(|e| e.to_string())?;
    ensure(v.zero_error(), || "found code is not zero-error".into())?;
    let h = extract_rank_function(&code, &p).map_err(|e| e.to_string())?;
    let query = BoundQuery::new(p.clone(), Some(ones(p.num_edges())), BoundMode::Feasibility { rates: vec![q(2)] }, false)
        .map_err(|e| e.to_string())?;
    let point = check_point(&h, &query).map_err(|e| e.to_string())?;
    ensure(point.all_pass(), || format!("entropy function fails {:?}", point.failures()))?;
    let t = within(Duration::from_secs(30), start)?;
    Ok(format!("GF(2) rate-2 code found after {} assignments and certified at (2, 1…1), {t:.1?}", report.nodes))
}

fn a4() -> Check {
    let p = Problem::from_spec(&secure_two_path_spec()).unwrap();
    let s = p.node("s").unwrap();
    let mut keys = vec![0; p.num_nodes()];
    keys[s] = 1;
    let space = LinearSpace { q: 2, lengths: vec![1], widths: vec![1; p.num_edges()], key_lengths: Some(keys) };
    let opts = SearchOptions { strong_secrecy: true, ..Default::default() };
    let report = search_linear(&p, &space, &opts).map_err(|e| e.to_string())?;
    let SearchOutcome::Found(code) = report.outcome else { return Err(format!("{:?}", report.outcome)) };
    let v = verify(&Code::Linear(code), &p, true).map_err(|e| e.to_string())?;
    ensure(v.zero_error(), || "pad code is not zero-error".into())?;
    let verdicts = v.secrecy.as_ref().ok_or("no secrecy verdicts")?;
    ensure(verdicts.len() == 2 && verdicts.iter().all(|s| s.independent), || format!("{verdicts:?}"))?;
    let bound = |rate: i64| -> Result<BoundStatus, String> {
        let query = BoundQuery::new(p.clone(), None, BoundMode::Feasibility { rates: vec![q(rate)] }, true)
            .map_err(|e| e.to_string())?;
        Ok(outer_bound(&query).map_err(|e| e.to_string())?.status)
    };
    let (one, two) = (bound(1)?, bound(2)?);
    ensure(one == BoundStatus::Feasible, || format!("rate 1 is {one:?}"))?;
    ensure(two == BoundStatus::Infeasible, || format!("rate 2 is {two:?}"))?;
    Ok("pad code found and exactly independent of both taps; secure bound admits rate 1, rejects rate 2".into())
}

/// Every zero-error binary table code of `p`, one per alphabet relabelling.
fn binary_codes(p: &Problem) -> Result<Vec<Code>, String> {
    let mut codes = Vec::new();
    let report = search_general_each(p, &GeneralSpace::uniform(p, 2, 2), &SearchOptions::default(), |c| {
        codes.push(Code::General(c));
        ControlFlow::Continue(())
    })
    .map_err(|e| e.to_string())?;
    ensure(report.outcome != SearchOutcome::BudgetExhausted, || "search budget exhausted".into())?;
    Ok(codes)
}

fn exact_fitness(code: &Code, p: &Problem) -> Result<RateCapacityTuple, String> {
    fitness_envelope(code, p).map_err(|e| e.to_string())?.exact().ok_or_else(|| "support is not a power of two".into())
}

fn a5(corpus: &[Problem]) -> Check {
    let mut lifted = 0usize;
    for (i, p) in corpus.iter().enumerate() {
        let fail = |what: &str, e: String| format!("instance {i}: {what}: {e}\n{}", p.to_spec().to_json());
        for code in binary_codes(p).map_err(|e| fail("search", e))? {
            let before = exact_fitness(&code, p).map_err(|e| fail("input fitness", e))?;

            let (out, c) = lift_code_incremental(&code, p).map_err(|e| fail("incremental lift", e.to_string()))?;
            let c = Code::General(c);
            let v = verify(&c, &out.problem, false).map_err(|e| fail("incremental verify", e.to_string()))?;
            ensure(v.zero_error(), || fail("incremental lift", "not zero-error".into()))?;
            let expect = out.map.apply(&before).map_err(|e| fail("incremental map", e.to_string()))?;
            let after = exact_fitness(&c, &out.problem).map_err(|e| fail("incremental fitness", e))?;
            ensure(after == expect, || fail("incremental fitness", format!("{after:?} != {expect:?}")))?;

            let (out, c) = lift_code_secure(&code, p).map_err(|e| fail("secure lift", e.to_string()))?;
            let c = Code::General(c);
            let v = verify(&c, &out.problem, true).map_err(|e| fail("secure verify", e.to_string()))?;
            ensure(v.passed(), || fail("secure lift", "not zero-error and strongly secure".into()))?;
            let expect = out.map.apply(&before).map_err(|e| fail("secure map", e.to_string()))?;
            let after = exact_fitness(&c, &out.problem).map_err(|e| fail("secure fitness", e))?;
            ensure(after == expect, || fail("secure fitness", format!("{after:?} != {expect:?}")))?;
            lifted += 1;
        }
    }
    Ok(format!("{lifted} binary codes over {} networks lift soundly both ways", corpus.len()))
}

/// One source in `t`, and every edge in `t` fed by something in `t`.
fn routing_by_definition(p: &Problem, pg: &ProblemGround, t: Subset) -> bool {
    pg.sources.iter().filter(|&&i| t.contains(i)).count() == 1
        && (0..p.num_edges())
            .filter(|&e| t.contains(pg.edges[e]))
            .all(|e| p.in_edge_of(e).iter().any(|&el| t.contains(pg.element(el))))
}

fn a6(corpus: &[Problem]) -> Check {
    let mut subsets = 0usize;
    for (i, p) in corpus.iter().enumerate() {
        let pg = ProblemGround::new(p, false).map_err(|e| e.to_string())?;
        for mask in 1..pg.ground.num_subsets() as u64 {
            let t = Subset(mask);
            let h = atomic_function(&pg.ground, t).map_err(|e| e.to_string())?;
            let member = check_with(&h, p, &pg, ConstraintSet::Transmission).is_ok()
                && check_with(&h, p, &pg, ConstraintSet::Independence).is_ok();
            let routing = is_routing_subnetwork(p, &pg, t);
            ensure(routing == routing_by_definition(p, &pg, t), || {
                format!("instance {i}, set {}: predicate disagrees with the definition", pg.ground.subset_key(t))
            })?;
            ensure(member == routing, || {
                format!("instance {i}, set {}: membership {member}, routing {routing}", pg.ground.subset_key(t))
            })?;
            subsets += 1;
        }
    }
    Ok(format!("{subsets} subsets over {} networks agree", corpus.len()))
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, q: u32) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(0..q));
        }
    }
    m
}

/// A random linear code with ambient dimension at most 3 and unit widths.
/// Half of the edges take a combination of their inputs, the rest anything.
fn random_linear_code<R: Rng>(rng: &mut R, p: &Problem, q: u32) -> LinearCode {
    let field = Field::new(q).unwrap();
    let lengths = vec![1; p.num_sources()];
    let key_lengths = (p.num_sources() < 3 && rng.gen_bool(0.5)).then(|| {
        let mut k = vec![0; p.num_nodes()];
        k[rng.gen_range(0..p.num_nodes())] = 1;
        k
    });
    let dim = lengths.len() + key_lengths.as_ref().map_or(0, |k| k.iter().sum());
    let mut code = LinearCode { q, lengths, key_lengths, kernels: vec![Matrix::zeros(dim, 1); p.num_edges()] };
    for &e in p.topological_order() {
        code.kernels[e] = if rng.gen_bool(0.5) {
            let inputs = code.input_kernel(p, e);
            let mix = random_matrix(rng, inputs.cols(), 1, q);
            inputs.mul(&mix, &field).unwrap()
        } else {
            random_matrix(rng, dim, 1, q)
        };
    }
    code
}

fn verdicts(r: &VerificationReport) -> (bool, Vec<String>, Vec<bool>, Option<Vec<bool>>, Vec<u64>, Vec<u64>) {
    (
        r.deterministic,
        r.nondeterministic_edges.clone(),
        r.decoding.iter().map(|d| d.decodable).collect(),
        r.secrecy.as_ref().map(|s| s.iter().map(|v| v.independent).collect()),
        r.fitness.source_support.clone(),
        r.fitness.edge_support.clone(),
    )
}

fn a7_lp() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut optimal = 0;
    for i in 0..200 {
        let lp = common::random_lp(&mut rng);
        let sol = solve(&lp);
        let got = match sol.status {
            LpStatus::Optimal => Oracle::Optimal(sol.optimum.clone().unwrap()),
            LpStatus::Infeasible => Oracle::Infeasible,
            LpStatus::Unbounded => Oracle::Unbounded,
            LpStatus::BudgetExhausted => return Err(format!("LP {i}: budget exhausted")),
        };
        let want = vertex_oracle(&lp);
        ensure(got == want, || format!("LP {i}: simplex {got:?}, vertices {want:?}\n{}", lp.to_cplex_lp()))?;
        if sol.status == LpStatus::Optimal {
            check_certificate(&lp, &sol).map_err(|e| format!("LP {i}: certificate {e:?}"))?;
            optimal += 1;
        }
    }
    Ok(optimal)
}

fn a7_linear(corpus: &[Problem]) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for (i, plain) in corpus.iter().enumerate() {
        let tapped = with_single_edge_taps(plain);
        for qf in [2, 3] {
            for _ in 0..3 {
                let secure = rng.gen_bool(0.5);
                let p = if secure { &tapped } else { plain };
                let code = random_linear_code(&mut rng, p, qf);
                let by_rank = verify(&Code::Linear(code.clone()), p, secure).map_err(|e| e.to_string())?;
                let by_scan = verify_linear_by_scan(&code, p, secure).map_err(|e| e.to_string())?;
                ensure(verdicts(&by_rank) == verdicts(&by_scan), || {
                    format!("instance {i}, q = {qf}: {:?} vs {:?}", verdicts(&by_rank), verdicts(&by_scan))
                })?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn a7_representable() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..300 {
        let qf = [2, 3, 4, 5][rng.gen_range(0..4)];
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=5);
        let labels: Vec<String> = (0..n).map(|j| format!("u{j}")).collect();
        let spans = (0..n).map(|_| { let k = rng.gen_range(0..=2); random_matrix(&mut rng, dim, k, qf) }).collect();
        let family = SubspaceFamily::new(qf, dim, GroundSet::new(labels).unwrap(), spans).map_err(|e| e.to_string())?;
        let h = representable_function(&family);
        h.is_polymatroid().map_err(|v| format!("family {i}: {v:?}"))?;
    }
    Ok(300)
}

fn a7(corpus: &[Problem]) -> Check {
    let optimal = a7_lp()?;
    let codes = a7_linear(corpus)?;
    let families = a7_representable()?;
    Ok(format!(
        "200 LPs match vertex enumeration ({optimal} optimal); {codes} linear codes agree with the scan; {families} representable functions are polymatroids"
    ))
}

fn throughput(res_value: Option<Rational>, what: &str) -> Result<Rational, String> {
    res_value.ok_or_else(|| format!("{what} has no value"))
}

fn a8(corpus: &[Problem]) -> Check {
    let (mut tuples, mut extremes) = (0usize, 0usize);
    for (i, p) in corpus.iter().enumerate() {
        let fail = |e: String| format!("instance {i}: {e}\n{}", p.to_spec().to_json());
        let caps = p.capacities_or_unit();
        let dir = BoundMode::Throughput { direction: ones(p.num_sources()) };
        let strict = routing_capacity(p, RoutingMode::Strict, &caps, &dir, true).map_err(|e| fail(e.to_string()))?;
        let general =
            routing_capacity(p, RoutingMode::Generalised, &caps, &dir, true).map_err(|e| fail(e.to_string()))?;
        let shannon = outer_bound(&BoundQuery::throughput(p.clone()).map_err(|e| fail(e.to_string()))?)
            .map_err(|e| fail(e.to_string()))?;
        let (a, b, c) = (
            throughput(strict.value, "strict routing").map_err(fail)?,
            throughput(general.value, "generalised routing").map_err(fail)?,
            throughput(shannon.value, "Shannon bound").map_err(fail)?,
        );
        ensure(a <= b && b <= c, || fail(format!("strict {a}, generalised {b}, Shannon {c}")))?;

        let mut seen = BTreeSet::new();
        for code in binary_codes(p).map_err(fail)? {
            let t = exact_fitness(&code, p).map_err(fail)?;
            seen.insert((t.rates, t.capacities));
        }
        // lowering rates or raising capacities stays inside the bound, so
        // only tuples no other tuple dominates need an LP
        let extreme: Vec<RateCapacityTuple> = seen
            .iter()
            .filter(|(r, c)| {
                !seen.iter().any(|(r2, c2)| {
                    (r2, c2) != (r, c)
                        && r2.iter().zip(r.iter()).all(|(a, b)| a >= b)
                        && c2.iter().zip(c.iter()).all(|(a, b)| a <= b)
                })
            })
            .map(|(r, c)| RateCapacityTuple { rates: r.clone(), capacities: c.clone() })
            .collect();
        tuples += seen.len();
        for t in extreme {
            let query = BoundQuery::new(p.clone(), Some(t.capacities.clone()), BoundMode::Feasibility { rates: t.rates.clone() }, false)
                .map_err(|e| fail(e.to_string()))?;
            let res = outer_bound(&query).map_err(|e| fail(e.to_string()))?;
            ensure(res.is_feasible(), || fail(format!("fitness {t:?} lies outside the bound")))?;
            extremes += 1;
        }
    }
    Ok(format!("routing ≤ generalised ≤ Shannon on {} networks; {tuples} distinct code fitness tuples inside the bound ({extremes} checked by LP)", corpus.len()))
}

fn main() {
    let corpus = corpus();
    let criteria: [(&str, &dyn Fn() -> Check); 8] = [
        ("A1", &a1),
        ("A2", &a2),
        ("A3", &a3),
        ("A4", &a4),
        ("A5", &|| a5(&corpus)),
        ("A6", &|| a6(&corpus)),
        ("A7", &|| a7(&corpus)),
        ("A8", &|| a8(&corpus)),
    ];
    // ACCEPTANCE_ONLY=A5,A8 runs a subset
    let only: Option<Vec<String>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').map(|s| s.trim().to_string()).collect());
    let mut failed = 0;
    for (name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|n| n == name)) {
            continue;
        }
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("{name} PASS {detail} [{:.1?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("{name} FAIL {why} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
