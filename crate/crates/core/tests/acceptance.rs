//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use prn::algebra::{self, ProbabilityCombiner};
use prn::exact::ratio;
use prn::format::{parse_map, parse_network};
use prn::linear::{companion_matrix, enumerate_linear_fds, MonicPolynomial};
use prn::markov::{power_deviation_profile, SteadyStateOptions, StochasticMatrix};
use prn::morphism::{self, compose, Morphism, DEFAULT_SEARCH_BUDGET};
use prn::pbn::{Pbn, Predictor};
use prn::structure::{self, check_product_decomposition, Decomposition, DecompositionOptions};
use prn::{fixtures, Prn, Rational, State, StateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn network(name: &str) -> Arc<Prn> {
    Arc::new(parse_network(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}")))
}

fn grid(rows: &[[&str; 4]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|s| ratio(s)).collect()).collect()
}

fn printed_reference_matrix() -> Vec<Vec<Rational>> {
    grid(&[[".67", "0", ".33", "0"], [".21", ".46", ".11", ".22"], ["0", "0", "1", "0"], ["0", "0", ".32", ".68"]])
}

fn reference_matrix_reproduced() -> Outcome {
    let t = StochasticMatrix::of(&network("reference.prn"));
    ensure!(t.rows() == printed_reference_matrix(), "matrix differs:\n{t}");
    Ok(())
}

fn reduced_network_and_its_epsilon() -> Outcome {
    let x1 = network("reduced.prn");
    let xb = network("reference.prn");
    let t1 = StochasticMatrix::of(&x1);
    let printed =
        grid(&[[".75", "0", ".25", "0"], [".28", ".47", "0", ".25"], ["0", "0", "1", "0"], ["0", "0", ".28", ".72"]]);
    ensure!(t1.rows() == printed, "T_1 differs:\n{t1}");
    let diff = t1.difference(&StochasticMatrix::of(&xb)).map_err(|e| e.to_string())?;
    let printed_diff = grid(&[
        [".08", "0", "-.08", "0"],
        [".07", ".01", "-.11", ".03"],
        ["0", "0", "0", "0"],
        ["0", "0", "-.04", ".04"],
    ]);
    ensure!(diff == printed_diff, "difference differs: {diff:?}");
    let phi = parse_map(&fixture("maps/identity.map"), x1, xb).map_err(|e| e.to_string())?;
    let eps = phi.epsilon().map_err(|e| e.to_string())?;
    ensure!(eps == ratio("11/100"), "epsilon = {eps}");
    Ok(())
}

fn projections_and_their_epsilons() -> Outcome {
    let xb = network("reference.prn");
    for (file, expected) in [("maps/pi1.map", ".68"), ("maps/pi2.map", ".67")] {
        let pi = parse_map(&fixture(file), xb.clone(), xb.clone()).map_err(|e| e.to_string())?;
        let report = pi.is_projection().map_err(|e| e.to_string())?;
        ensure!(report.is_projection, "{file} is not idempotent");
        let inv = structure::is_invariant(&xb, &report.image).map_err(|e| e.to_string())?;
        ensure!(inv.invariant, "image of {file} is not invariant");
        let eps = pi.epsilon().map_err(|e| e.to_string())?;
        ensure!(eps == ratio(expected), "{file}: epsilon = {eps}, expected {expected}");
    }
    Ok(())
}

fn decomposition_found() -> Outcome {
    let xb = network("reference.prn");
    let subset = |s: &str| prn::format::parse_subset(xb.space(), s).unwrap();
    let report = check_product_decomposition(
        &xb,
        &subset("(0,0),(1,0)"),
        &subset("(1,0),(1,1)"),
        DecompositionOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let Decomposition::Isomorphic { map, epsilon } = &report.outcome else {
        return Err(format!("unexpected outcome: {}", report.render()));
    };
    let expected = Morphism::from_fn(xb.clone(), report.product.clone(), |s| {
        let c = s.as_coords().unwrap();
        State::pair(State::coords([c[0], 0]), State::coords([1, c[1]]))
    })
    .map_err(|e| e.to_string())?;
    ensure!(*map == expected, "map is {map}");
    // oracle: both matrices, compared entrywise under the map
    let ts = StochasticMatrix::of(&xb);
    let tp = StochasticMatrix::of(&report.product);
    let mut worst = Rational::zero();
    for u in 0..4 {
        for v in 0..4 {
            worst = worst.max((ts.entry(u, v) - tp.entry(map.apply(u), map.apply(v))).abs());
        }
    }
    ensure!(worst == ratio("44/10000") && *epsilon == worst, "epsilon = {epsilon}, oracle = {worst}");
    Ok(())
}

fn power_deviation_diagnostic() -> Outcome {
    let t1 = StochasticMatrix::of(&network("reduced.prn"));
    let tb = StochasticMatrix::of(&network("reference.prn"));
    let profile = power_deviation_profile(&t1, &tb, 2).map_err(|e| e.to_string())?;
    ensure!(profile == [ratio("11/100"), ratio("16030/100000")], "profile = {profile:?}");
    // the uniform bound fails at n = 2
    ensure!(profile[1] > ratio(".11"), "d_2 within epsilon");
    let opts = SteadyStateOptions::default();
    let a = t1.steady_state(&opts).map_err(|e| e.to_string())?;
    let b = tb.steady_state(&opts).map_err(|e| e.to_string())?;
    let target = tb.space().index_of(&State::coords([1, 0])).unwrap();
    for d in [&a, &b] {
        ensure!((d.mass()[target] - 1.0).abs() < 1e-9, "steady state {d}");
    }
    ensure!(a.max_distance(&b) < 1e-9, "steady states differ by {}", a.max_distance(&b));
    Ok(())
}

fn sum_is_block_diagonal() -> Outcome {
    for x in [network("cascade.prn"), network("reference.prn")] {
        let s = algebra::sum(&x, &x).map_err(|e| e.to_string())?;
        ensure!(s.state_count() == 8, "{} states", s.state_count());
        let t = StochasticMatrix::of(&x);
        let mut expected = vec![vec![Rational::zero(); 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                expected[i][j] = t.entry(i, j).clone();
                expected[i + 4][j + 4] = t.entry(i, j).clone();
            }
        }
        ensure!(StochasticMatrix::of(&s).rows() == expected, "sum matrix is not diag(T, T)");
    }
    Ok(())
}

fn product_of_z2_networks() -> Outcome {
    let a = parse_network(&fixture("z2_identity_one.prn")).map_err(|e| e.to_string())?;
    let b = parse_network(&fixture("z2_identity_zero.prn")).map_err(|e| e.to_string())?;
    let p = algebra::product(&a, &b, &ProbabilityCombiner::multiply()).map_err(|e| e.to_string())?;
    let names: Vec<&str> = p.functions().map(|f| f.name()).collect();
    ensure!(names == ["(f1,f1)", "(f1,f3)", "(f2,f1)", "(f2,f3)"], "names {names:?}");
    let (p1, p2, q1, q2) = (ratio(".6"), ratio(".4"), ratio(".7"), ratio(".3"));
    let (p11, p13, p21, p23) = (&p1 * &q1, &p1 * &q2, &p2 * &q1, &p2 * &q2);
    let z = Rational::zero;
    let symbolic = vec![
        vec![&p11 + &p13, z(), &p23 + &p21, z()],
        vec![p13.clone(), p11.clone(), p23.clone(), p21.clone()],
        vec![z(), z(), Rational::one(), z()],
        vec![z(), z(), &p13 + &p23, &p11 + &p21],
    ];
    ensure!(StochasticMatrix::of(&p).rows() == symbolic, "matrix differs");
    let avg = algebra::product(&a, &b, &ProbabilityCombiner::average());
    ensure!(
        matches!(avg, Err(algebra::AlgebraError::CombinerNotStochastic { .. })),
        "average combiner accepted: {avg:?}"
    );
    Ok(())
}

fn block_matrix_invariance() -> Outcome {
    let order: Vec<State> = [[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 0], [0, 0, 1], [0, 1, 1], [1, 0, 1], [1, 1, 1]]
        .into_iter()
        .map(State::coords)
        .collect();
    let space = StateSpace::new(order).unwrap();
    let block = fixtures::lower_invariant_block();
    let mut rows = vec![vec![Rational::zero(); 8]; 8];
    for i in 0..4 {
        rows[i][i] = ratio(".5");
        for j in 4..8 {
            rows[i][j] = ratio(".125");
        }
        for j in 0..4 {
            rows[i + 4][j + 4] = block[i][j].clone();
        }
    }
    let t = StochasticMatrix::from_rows(space, rows).map_err(|e| e.to_string())?;
    let last: BTreeSet<usize> = (4..8).collect();
    ensure!(structure::matrix_invariance(&t, &last).unwrap(), "last block not invariant");
    for bits in 0u32..256 {
        let s: BTreeSet<usize> = (0..8).filter(|i| bits >> i & 1 == 1).collect();
        let mixes = s.iter().any(|&i| i < 4) && s.iter().any(|&i| i >= 4);
        if mixes && !last.is_subset(&s) {
            ensure!(!structure::matrix_invariance(&t, &s).unwrap(), "{s:?} reported invariant");
        }
    }
    Ok(())
}

fn superposition_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..200 {
        let p = random_probs(&mut rng, 4);
        let (space, maps) = fixtures::z2_maps();
        let prn = algebra::superpose(space, maps.to_vec(), probabilities(p.clone())).map_err(|e| e.to_string())?;
        let expected = vec![vec![&p[0] + &p[2], &p[1] + &p[3]], vec![&p[2] + &p[3], &p[0] + &p[1]]];
        ensure!(StochasticMatrix::of(&prn).rows() == expected, "case {case}: p = {p:?}");
    }
    Ok(())
}

const CASES: usize = 500;

fn stochastic_constructions(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let a = random_prn(rng, 1..=4, 1..=3);
        let b = random_prn(rng, 1..=4, 1..=3);
        let closed = structure::closure(&a, &random_subset(rng, a.state_count())).unwrap();
        let mut built = vec![
            a.clone(),
            algebra::sum(&a, &b).map_err(|e| e.to_string())?,
            algebra::product(&a, &b, &ProbabilityCombiner::multiply()).map_err(|e| e.to_string())?,
        ];
        if !closed.is_empty() {
            built.push(algebra::restrict(&a, &closed).map_err(|e| e.to_string())?);
        }
        for prn in &built {
            let oracle = matrix_oracle(prn);
            ensure!(rows_sum_to_one(&oracle), "case {case}: oracle rows do not sum to one");
            ensure!(StochasticMatrix::of(prn).rows() == oracle, "case {case}: matrix differs from definition");
        }
    }
    Ok(())
}

fn epsilon_composition_bound(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0;
    let mut attempts = 0;
    while checked < CASES {
        attempts += 1;
        ensure!(attempts < 200 * CASES, "only {checked} composable pairs found");
        let nets: Vec<Arc<Prn>> = (0..3).map(|_| Arc::new(random_prn(rng, 1..=3, 1..=3))).collect();
        let first = morphism::enumerate_homomorphisms(&nets[0], &nets[1], DEFAULT_SEARCH_BUDGET).unwrap();
        let second = morphism::enumerate_homomorphisms(&nets[1], &nets[2], DEFAULT_SEARCH_BUDGET).unwrap();
        for (f, e1) in first.iter().take(3) {
            for (g, e2) in second.iter().take(3) {
                let c = compose(f, g).map_err(|e| e.to_string())?;
                let e = c.epsilon().map_err(|e| format!("composite is not a homomorphism: {e}"))?;
                ensure!(e <= e1 + e2, "ε({c}) = {e} > {e1} + {e2}");
                checked += 1;
            }
        }
    }
    Ok(())
}

fn universal_maps_commute(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let a = Arc::new(random_prn(rng, 1..=3, 1..=2));
        let b = Arc::new(random_prn(rng, 1..=3, 1..=2));
        let x = Arc::new(random_prn(rng, 1..=3, 1..=2));
        let map_to = |rng: &mut ChaCha8Rng, s: &Arc<Prn>, t: &Arc<Prn>| {
            let m = (0..s.state_count()).map(|_| rng.gen_range(0..t.state_count())).collect();
            Morphism::new(s.clone(), t.clone(), m).unwrap()
        };

        let product = Arc::new(algebra::product(&a, &b, &ProbabilityCombiner::multiply()).unwrap());
        let (d1, d2) = (map_to(rng, &x, &a), map_to(rng, &x, &b));
        let delta = morphism::pairing(&d1, &d2, product.clone()).map_err(|e| e.to_string())?;
        let (p1, p2) = algebra::coordinate_projections(&a, &b, &product).map_err(|e| e.to_string())?;
        ensure!(compose(&delta, &p1).unwrap() == d1, "case {case}: π1 ∘ δ ≠ δ1");
        ensure!(compose(&delta, &p2).unwrap() == d2, "case {case}: π2 ∘ δ ≠ δ2");

        let sum = Arc::new(algebra::sum(&a, &b).unwrap());
        let (g1, g2) = (map_to(rng, &a, &x), map_to(rng, &b, &x));
        let gamma = morphism::copairing(&g1, &g2, sum.clone()).map_err(|e| e.to_string())?;
        let (i1, i2) = algebra::injections(&a, &b, &sum).map_err(|e| e.to_string())?;
        ensure!(compose(&i1, &gamma).unwrap() == g1, "case {case}: γ ∘ ι1 ≠ γ1");
        ensure!(compose(&i2, &gamma).unwrap() == g2, "case {case}: γ ∘ ι2 ≠ γ2");
    }
    Ok(())
}

fn search_matches_brute_force(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let src = Arc::new(random_prn(rng, 1..=4, 1..=3));
        let dst = Arc::new(random_prn(rng, 1..=4, 1..=4));
        let found: Vec<Vec<usize>> = morphism::enumerate_homomorphisms(&src, &dst, DEFAULT_SEARCH_BUDGET)
            .unwrap()
            .into_iter()
            .map(|(m, _)| m.map().to_vec())
            .collect();
        let oracle: Vec<Vec<usize>> =
            all_maps(src.state_count(), dst.state_count()).into_iter().filter(|m| commutes(&src, &dst, m)).collect();
        ensure!(found == oracle, "case {case}: search {found:?} vs brute force {oracle:?}");
    }
    Ok(())
}

fn invariance_agrees(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let prn = random_prn(rng, 1..=6, 1..=3);
        let s = random_subset(rng, prn.state_count());
        let by_functions = structure::is_invariant(&prn, &s).unwrap().invariant;
        let by_matrix = structure::matrix_invariance(&StochasticMatrix::of(&prn), &s).unwrap();
        ensure!(by_functions == by_matrix, "case {case}: {s:?}");
    }
    Ok(())
}

fn pbn_expansion_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..CASES {
        let n = rng.gen_range(1..=3);
        let space = StateSpace::binary(n).unwrap();
        let genes: Vec<Vec<(Predictor, prn::Probability)>> = (0..n)
            .map(|g| {
                let l = rng.gen_range(1..=3);
                let probs = probabilities(random_probs(rng, l));
                probs
                    .into_iter()
                    .enumerate()
                    .map(|(k, p)| {
                        let table = (0..space.len()).map(|_| rng.gen_bool(0.5)).collect();
                        (Predictor::new(format!("g{g}p{k}"), table), p)
                    })
                    .collect()
            })
            .collect();
        let pbn = Pbn::new(genes.clone()).unwrap();
        let expanded = pbn.expand().unwrap();

        // oracle: every index tuple, probability = product of per-gene picks
        let mut oracle: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        let lengths: Vec<usize> = genes.iter().map(Vec::len).collect();
        let mut k = vec![0usize; n];
        loop {
            let table: Vec<usize> = (0..space.len())
                .map(|u| {
                    let bits: Vec<u32> = (0..n).map(|i| genes[i][k[i]].0.table()[u] as u32).collect();
                    space.index_of(&State::coords(bits)).unwrap()
                })
                .collect();
            let p: Rational = (0..n).map(|i| genes[i][k[i]].1.value().clone()).product();
            *oracle.entry(table).or_insert_with(Rational::zero) += p;
            let Some(pos) = (0..n).rev().find(|&i| k[i] + 1 < lengths[i]) else { break };
            k[pos] += 1;
            for x in &mut k[pos + 1..] {
                *x = 0;
            }
        }
        let got: BTreeMap<Vec<usize>, Rational> =
            expanded.entries().iter().map(|(f, p)| (f.table().to_vec(), p.value().clone())).collect();
        ensure!(got.len() == expanded.function_count(), "case {case}: duplicate functions survived");
        ensure!(got == oracle, "case {case}: expansion differs from the index-tuple oracle");
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    stochastic_constructions(&mut rng)?;
    epsilon_composition_bound(&mut rng)?;
    universal_maps_commute(&mut rng)?;
    search_matches_brute_force(&mut rng)?;
    invariance_agrees(&mut rng)?;
    pbn_expansion_oracle(&mut rng)
}

fn linear_classification() -> Outcome {
    let q: MonicPolynomial = "x^2+x+1 mod 2".parse().unwrap();
    let c = companion_matrix(&q).map_err(|e| e.to_string())?;
    ensure!(c.to_string() == "[[0,1],[1,1]] mod 2", "companion is {c}");
    let space = StateSpace::binary(2).unwrap();
    let fds: Vec<Arc<Prn>> = enumerate_linear_fds(2, 2, 16)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|f| Arc::new(Prn::fds(space.clone(), f).unwrap()))
        .collect();
    ensure!(fds.len() == 16, "{} maps", fds.len());
    let classes = morphism::isomorphism_classes(&fds, DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    ensure!(classes.len() == 4, "{} isomorphism classes (sizes {sizes:?}), expected 4", classes.len());
    Ok(())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("reference network matrix", reference_matrix_reproduced),
        ("reduced network, difference matrix, epsilon 11/100", reduced_network_and_its_epsilon),
        ("projections pi1/pi2 with epsilon 68/100 and 67/100", projections_and_their_epsilons),
        ("product decomposition with epsilon 44/10000", decomposition_found),
        ("power deviation profile and steady states", power_deviation_diagnostic),
        ("sum is block diagonal", sum_is_block_diagonal),
        ("product matrix and rejected average combiner", product_of_z2_networks),
        ("matrix invariance of the lower block", block_matrix_invariance),
        ("Z_2 superposition formula, 200 cases", superposition_formula),
        ("property suites, 500 cases each", property_suites),
        ("16 linear maps on Z_2^2 in 4 classes; companion of x^2+x+1", linear_classification),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
