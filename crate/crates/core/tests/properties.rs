mod common;

use std::sync::OnceLock;

use netcap::code::{fitness_envelope, verify, Code, GeneralCode};
use netcap::lp::{check_certificate, solve, LpStatus};
use netcap::model::validate;
use netcap::rank::gf::{Field, Matrix};
use netcap::rank::representable::{representable_function, SubspaceFamily};
use netcap::rank::{atomic_function, GroundSet, Subset};
use netcap::rational::{format_rational, frac, parse_rational, q, Rational};
use netcap::routing::{routing_capacity, RoutingMode};
use netcap::shannon::{outer_bound, BoundMode, BoundQuery};
use netcap::transform::{incremental_transform, secure_transform, supernode_variation, TransformOutput};
use netcap::{Problem, RateCapacityTuple};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{vertex_oracle, Oracle};

fn corpus() -> &'static [Problem] {
    static CORPUS: OnceLock<Vec<Problem>> = OnceLock::new();
    CORPUS.get_or_init(common::corpus)
}

fn instance() -> impl Strategy<Value = &'static Problem> {
    (0..corpus().len()).prop_map(|i| &corpus()[i])
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (0i64..6, 1i64..4).prop_map(|(n, d)| frac(n, d))
}

fn tuple_for(p: &Problem) -> impl Strategy<Value = RateCapacityTuple> {
    (
        proptest::collection::vec(small_rational(), p.num_sources()),
        proptest::collection::vec(small_rational(), p.num_edges()),
    )
        .prop_map(|(rates, capacities)| RateCapacityTuple { rates, capacities })
}

fn with_two_tuples() -> impl Strategy<Value = (&'static Problem, RateCapacityTuple, RateCapacityTuple)> {
    instance().prop_flat_map(|p| (Just(p), tuple_for(p), tuple_for(p)))
}

fn transforms(p: &Problem) -> Vec<TransformOutput> {
    vec![
        supernode_variation(p, 1).unwrap(),
        supernode_variation(p, 2).unwrap(),
        incremental_transform(p).unwrap(),
        secure_transform(p).unwrap(),
    ]
}

fn combine(a: &Rational, x: &RateCapacityTuple, b: &Rational, y: &RateCapacityTuple) -> RateCapacityTuple {
    let mix = |u: &[Rational], v: &[Rational]| u.iter().zip(v).map(|(p, q)| a * p + b * q).collect();
    RateCapacityTuple { rates: mix(&x.rates, &y.rates), capacities: mix(&x.capacities, &y.capacities) }
}

fn dominated(x: &RateCapacityTuple, y: &RateCapacityTuple) -> bool {
    x.rates.iter().zip(&y.rates).all(|(a, b)| a <= b) && x.capacities.iter().zip(&y.capacities).all(|(a, b)| a <= b)
}

fn random_matrix(seed: u64, rows: usize, cols: usize, q: u32) -> Matrix {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(0..q));
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_outputs_are_well_formed(p in instance()) {
        for out in transforms(p) {
            let diags = validate(&out.problem.to_spec());
            prop_assert!(diags.is_empty(), "{:?}", diags);
            prop_assert_eq!(out.map.rates.len(), out.problem.num_sources());
            prop_assert_eq!(out.map.capacities.len(), out.problem.num_edges());
        }
    }

    #[test]
    fn tuple_maps_are_linear_and_monotone((p, x, y) in with_two_tuples(), a in small_rational(), b in small_rational()) {
        for out in transforms(p) {
            let m = &out.map;
            prop_assert!(m.rates.iter().chain(&m.capacities).flatten().all(|(_, k)| !k.is_negative()));
            let lhs = m.apply(&combine(&a, &x, &b, &y)).unwrap();
            let rhs = combine(&a, &m.apply(&x).unwrap(), &b, &m.apply(&y).unwrap());
            prop_assert_eq!(lhs, rhs);
            let zero = m.apply(&RateCapacityTuple::zero(p)).unwrap();
            prop_assert!(zero.rates.iter().chain(&zero.capacities).all(|v| *v == q(0)));
            let bigger = combine(&q(1), &x, &q(1), &y);
            prop_assert!(dominated(&m.apply(&x).unwrap(), &m.apply(&bigger).unwrap()));
        }
    }

    #[test]
    fn routing_is_dominated_by_the_shannon_bound(p in instance(), caps in proptest::collection::vec(small_rational(), 4)) {
        let caps: Vec<Rational> = caps.into_iter().take(p.num_edges()).collect();
        let dir = BoundMode::Throughput { direction: vec![q(1); p.num_sources()] };
        let strict = routing_capacity(p, RoutingMode::Strict, &caps, &dir, true).unwrap().value.unwrap();
        let general = routing_capacity(p, RoutingMode::Generalised, &caps, &dir, false).unwrap().value.unwrap();
        let query = BoundQuery::new(p.clone(), Some(caps), dir, false).unwrap();
        let shannon = outer_bound(&query).unwrap().value.unwrap();
        prop_assert!(strict <= general, "{} > {}", strict, general);
        prop_assert!(general <= shannon, "{} > {}", general, shannon);
    }

    #[test]
    fn routing_packings_fit_their_capacities(p in instance(), caps in proptest::collection::vec(small_rational(), 4)) {
        let caps: Vec<Rational> = caps.into_iter().take(p.num_edges()).collect();
        let dir = BoundMode::Throughput { direction: vec![q(1); p.num_sources()] };
        for mode in [RoutingMode::Strict, RoutingMode::Generalised] {
            let res = routing_capacity(p, mode, &caps, &dir, true).unwrap();
            prop_assert!(res.packing.satisfies_capacities(p, &caps));
        }
    }

    #[test]
    fn simplex_matches_vertex_enumeration(seed in any::<u64>()) {
        let lp = common::random_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        let sol = solve(&lp);
        let got = match sol.status {
            LpStatus::Optimal => Oracle::Optimal(sol.optimum.clone().unwrap()),
            LpStatus::Infeasible => Oracle::Infeasible,
            LpStatus::Unbounded => Oracle::Unbounded,
            LpStatus::BudgetExhausted => panic!("tiny LP exhausted the pivot budget"),
        };
        prop_assert_eq!(got, vertex_oracle(&lp));
        if sol.status == LpStatus::Optimal {
            prop_assert!(check_certificate(&lp, &sol).is_ok());
        }
    }

    #[test]
    fn representable_functions_are_polymatroids(
        qi in 0usize..4, dim in 1usize..4, widths in proptest::collection::vec(0usize..3, 2..6), seed in any::<u64>()
    ) {
        let qf = [2, 3, 4, 7][qi];
        let labels: Vec<String> = (0..widths.len()).map(|i| format!("u{i}")).collect();
        let spans = widths.iter().enumerate().map(|(i, &w)| random_matrix(seed ^ i as u64, dim, w, qf)).collect();
        let family = SubspaceFamily::new(qf, dim, GroundSet::new(labels).unwrap(), spans).unwrap();
        let h = representable_function(&family);
        prop_assert!(h.is_polymatroid().is_ok());
        prop_assert!(h.is_polymatroid_full().is_ok());
    }

    #[test]
    fn atomic_functions_are_polymatroids(n in 1usize..6, mask in 1u64..64) {
        let labels: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let ground = GroundSet::new(labels).unwrap();
        let t = Subset(mask & ground.full().0);
        prop_assume!(!t.is_empty());
        let h = atomic_function(&ground, t).unwrap();
        prop_assert!(h.is_polymatroid_full().is_ok());
    }

    #[test]
    fn rank_is_submultiplicative(qi in 0usize..3, r in 1usize..4, k in 1usize..4, c in 1usize..4, seed in any::<u64>()) {
        let qf = [2, 3, 4][qi];
        let field = Field::new(qf).unwrap();
        let a = random_matrix(seed, r, k, qf);
        let b = random_matrix(seed.wrapping_add(1), k, c, qf);
        let ab = a.mul(&b, &field).unwrap();
        prop_assert!(ab.rank(&field) <= a.rank(&field).min(b.rank(&field)));
        prop_assert_eq!(a.rank(&field), a.transpose().rank(&field));
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = frac(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn problems_round_trip_through_json(p in instance()) {
        let again = Problem::from_json(&p.to_spec().to_json()).unwrap();
        prop_assert_eq!(again.to_spec(), p.to_spec());
    }

    #[test]
    fn identity_forwarding_codes_have_unit_fitness(p in instance()) {
        // forward the first input on every edge: zero-error exactly when it decodes
        let code = GeneralCode {
            source_alphabets: vec![2; p.num_sources()],
            edge_alphabets: vec![2; p.num_edges()],
            key_alphabets: None,
            tables: (0..p.num_edges())
                .map(|e| {
                    let k = p.in_edge_of(e).len();
                    (0..1u32 << k).map(|row| if k == 0 { 0 } else { row >> (k - 1) & 1 }).collect()
                })
                .collect(),
            routed: vec![None; p.num_edges()],
        };
        let code = Code::General(code);
        let report = verify(&code, p, false).unwrap();
        prop_assert!(report.fitness.edge_support.iter().all(|&s| s <= 2));
        if report.zero_error() {
            prop_assert_eq!(fitness_envelope(&code, p).unwrap(), report.fitness);
        } else {
            prop_assert!(fitness_envelope(&code, p).is_err());
        }
    }
}
