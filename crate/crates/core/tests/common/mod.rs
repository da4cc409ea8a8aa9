#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_traits::Zero;
use prn::network::{Prn, Probability, StateFunction, StateSpace};
use prn::Rational;
use rand::Rng;

/// `k` positive probabilities with exact sum one.
pub fn random_probs(rng: &mut impl Rng, k: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| Rational::new(w.into(), total.into())).collect()
}

pub fn probabilities(values: Vec<Rational>) -> Vec<Probability> {
    values.into_iter().map(|r| Probability::new(r).unwrap()).collect()
}

/// A network on `{0..n-1}` with `k` uniformly random functions, `n` and `k`
/// drawn from the given ranges.
pub fn random_prn(rng: &mut impl Rng, states: RangeInclusive<usize>, functions: RangeInclusive<usize>) -> Prn {
    let n = rng.gen_range(states);
    let k = rng.gen_range(functions);
    let space = StateSpace::product(&[n as u32]).unwrap();
    let probs = probabilities(random_probs(rng, k));
    let entries = probs
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let table = (0..n).map(|_| rng.gen_range(0..n)).collect();
            (StateFunction::new(format!("f{}", i + 1), table, n).unwrap(), p)
        })
        .collect();
    Prn::new(space, entries).unwrap()
}

pub fn random_subset(rng: &mut impl Rng, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Transition matrix straight from the definition: `p(u,v)` is the total
/// probability of the functions sending `u` to `v`.
pub fn matrix_oracle(prn: &Prn) -> Vec<Vec<Rational>> {
    let n = prn.state_count();
    let mut t = vec![vec![Rational::zero(); n]; n];
    for (f, p) in prn.entries() {
        for (u, &v) in f.table().iter().enumerate() {
            t[u][v] += p.value();
        }
    }
    t
}

pub fn rows_sum_to_one(rows: &[Vec<Rational>]) -> bool {
    rows.iter().all(|r| r.iter().sum::<Rational>() == Rational::from_integer(1.into()))
}

/// Every map `src -> dst` as an index vector, lexicographic.
pub fn all_maps(src: usize, dst: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = vec![0usize; src];
    loop {
        out.push(map.clone());
        let Some(k) = (0..src).rev().find(|&k| map[k] + 1 < dst) else { return out };
        map[k] += 1;
        for x in &mut map[k + 1..] {
            *x = 0;
        }
    }
}

/// Condition (1) of a homomorphism, checked directly.
pub fn commutes(src: &Prn, dst: &Prn, map: &[usize]) -> bool {
    src.functions().all(|f| dst.functions().any(|g| (0..src.state_count()).all(|u| map[f.apply(u)] == g.apply(map[u]))))
}
