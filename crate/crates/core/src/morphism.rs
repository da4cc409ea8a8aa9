//! Maps between networks: homomorphism checks, ε measurement, composition,
//! backtracking search, projections, and the pairing/copairing maps into
//! products and out of sums.
//!
//! A map `φ: X1 -> X2` is a homomorphism when every source function `f_i`
//! has a target function `g_j` with
//!
//! 1. `φ ∘ f_i = g_j ∘ φ`, and
//! 2. `χ(d_{g_j}(φ(u), φ(v))) >= χ(c_{f_i}(u, v))` for all `u, v`,
//!
//! where `c_{f_i}(u, v)` is `c_i` when `f_i(u) = v` and `0` otherwise, and
//! `χ` is the support indicator. Networks never carry zero-probability
//! functions, so (2) follows from (1): if `f_i(u) = v` then
//! `g_j(φ(u)) = φ(v)` and `d_j > 0`. Both conditions are still checked.
//!
//! The distortion ε of a map compares arrows. Each source arrow `u -> v`
//! (`p(u, v) > 0`) contributes `|p(u, v) - p(φ(u), φ(v))|`. A target arrow
//! between image states that is the image of no source arrow contributes
//! its own probability. For an injective map this is exactly
//! `max |p(u, v) - p(φ(u), φ(v))|` over all ordered pairs of source states.
//! For a map that merges states, a source non-arrow whose image pair is
//! already the image of some source arrow is not compared: otherwise every
//! projection onto an absorbing state would have ε = 1.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra;
use crate::exact::{format_rational, Rational};
use crate::markov::StochasticMatrix;
use crate::network::{NetworkError, Prn, State};

/// Default node-expansion budget for map searches.
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorphismError {
    #[error("map assigns {found} images for {expected} source states")]
    Totality { expected: usize, found: usize },
    #[error("state #{state} is sent to #{image}, outside the target space")]
    ImageOutOfRange { state: usize, image: usize },
    #[error("source state {0} has no image")]
    Unassigned(State),
    #[error("source state {0} is assigned twice")]
    DuplicateAssignment(State),
    #[error("spaces do not match: {0}")]
    SpaceMismatch(String),
    #[error("map is not a homomorphism ({0} violations)")]
    NotHomomorphism(usize),
    #[error("map is not an endomorphism")]
    NotEndomorphism,
    #[error("search exceeded its budget of {budget} node expansions")]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// A total map between the state spaces of two networks.
#[derive(Debug, Clone)]
pub struct Morphism {
    source: Arc<Prn>,
    target: Arc<Prn>,
    map: Vec<usize>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_network(&self.source, &other.source) && same_network(&self.target, &other.target)
    }
}

fn same_network(a: &Arc<Prn>, b: &Arc<Prn>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Which homomorphism condition a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Commutation,
    Support,
}

/// Source function `function` sends `state` to `image`, and no target
/// function reproduces that arrow through the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub function: usize,
    pub state: usize,
    pub image: usize,
    pub condition: Condition,
}

/// Outcome of [`Morphism::check_homomorphism`].
#[derive(Debug, Clone, PartialEq)]
pub struct HomReport {
    pub is_homomorphism: bool,
    /// For each source function, the first target function satisfying both
    /// conditions.
    pub witnesses: Vec<Option<usize>>,
    pub failures: Vec<Violation>,
    /// Distortion of the map; present only for homomorphisms.
    pub epsilon: Option<Rational>,
}

impl HomReport {
    pub fn render(&self, phi: &Morphism) -> String {
        let src = phi.source();
        let dst = phi.target();
        let mut out = format!("homomorphism: {}\n", if self.is_homomorphism { "yes" } else { "no" });
        for (i, w) in self.witnesses.iter().enumerate() {
            let name = src.function(i).name();
            match w {
                Some(j) => out.push_str(&format!("  {name} -> {}\n", dst.function(*j).name())),
                None => out.push_str(&format!("  {name} -> (none)\n")),
            }
        }
        for v in &self.failures {
            out.push_str(&format!(
                "  violation: {} sends {} to {} ({:?})\n",
                src.function(v.function).name(),
                src.space().state(v.state),
                src.space().state(v.image),
                v.condition
            ));
        }
        if let Some(eps) = &self.epsilon {
            out.push_str(&format!("epsilon: {}\n", crate::exact::WithDecimal(eps)));
        }
        out
    }
}

/// Result of [`Morphism::is_projection`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub is_projection: bool,
    pub image: BTreeSet<usize>,
}

impl Morphism {
    pub fn new(source: Arc<Prn>, target: Arc<Prn>, map: Vec<usize>) -> Result<Self, MorphismError> {
        if map.len() != source.state_count() {
            return Err(MorphismError::Totality { expected: source.state_count(), found: map.len() });
        }
        if let Some((state, &image)) = map.iter().enumerate().find(|(_, &t)| t >= target.state_count()) {
            return Err(MorphismError::ImageOutOfRange { state, image });
        }
        Ok(Morphism { source, target, map })
    }

    /// Tabulates a state map.
    pub fn from_fn(
        source: Arc<Prn>,
        target: Arc<Prn>,
        mut f: impl FnMut(&State) -> State,
    ) -> Result<Self, MorphismError> {
        let map = source
            .space()
            .states()
            .iter()
            .map(|s| {
                let image = f(s);
                target.space().index_of(&image).ok_or(MorphismError::Network(NetworkError::UnknownState(image)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Morphism::new(source, target, map)
    }

    /// Builds a map from `(source state, target state)` pairs; every source
    /// state must appear exactly once.
    pub fn from_pairs(source: Arc<Prn>, target: Arc<Prn>, pairs: &[(State, State)]) -> Result<Self, MorphismError> {
        let mut map = vec![None; source.state_count()];
        for (s, t) in pairs {
            let i = source.space().index_of(s).ok_or_else(|| NetworkError::UnknownState(s.clone()))?;
            let j = target.space().index_of(t).ok_or_else(|| NetworkError::UnknownState(t.clone()))?;
            if map[i].replace(j).is_some() {
                return Err(MorphismError::DuplicateAssignment(s.clone()));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| MorphismError::Unassigned(source.space().state(i).clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Morphism::new(source, target, map)
    }

    pub fn identity(prn: Arc<Prn>) -> Self {
        let map = (0..prn.state_count()).collect();
        Morphism { source: prn.clone(), target: prn, map }
    }

    pub fn source(&self) -> &Arc<Prn> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Prn> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, state: usize) -> usize {
        self.map[state]
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.map.iter().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.map.len() == self.target.state_count()
    }

    /// `(source state, image)` pairs in source order.
    pub fn pairs(&self) -> Vec<(State, State)> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.source.space().state(i).clone(), self.target.space().state(j).clone()))
            .collect()
    }

    /// Checks both homomorphism conditions for every source function.
    ///
    /// Witnesses are the first target function, in target order, that
    /// satisfies both conditions.
    pub fn check_homomorphism(&self) -> HomReport {
        let src = &*self.source;
        let dst = &*self.target;
        let mut witnesses = Vec::with_capacity(src.function_count());
        let mut failures = Vec::new();

        for (i, (f, c)) in src.entries().iter().enumerate() {
            let mut witness = None;
            // (target function, states where commutation fails)
            let mut best: Option<(usize, Vec<usize>)> = None;
            for (j, (g, d)) in dst.entries().iter().enumerate() {
                let disagree: Vec<usize> =
                    (0..src.state_count()).filter(|&u| self.map[f.apply(u)] != g.apply(self.map[u])).collect();
                if disagree.is_empty() {
                    // χ(d_g(φu, φv)) >= χ(c_f(u, v)) over all pairs; only pairs with
                    // v = f(u) can have positive source support.
                    let support_ok = (0..src.state_count()).all(|u| {
                        let source_arrow = !c.value().is_zero();
                        let target_arrow = g.apply(self.map[u]) == self.map[f.apply(u)] && !d.value().is_zero();
                        target_arrow || !source_arrow
                    });
                    debug_assert!(support_ok, "support condition failed although commutation holds");
                    if support_ok {
                        witness = Some(j);
                        break;
                    }
                    failures.extend((0..src.state_count()).map(|u| Violation {
                        function: i,
                        state: u,
                        image: f.apply(u),
                        condition: Condition::Support,
                    }));
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| disagree.len() < b.len()) {
                    best = Some((j, disagree));
                }
            }
            if witness.is_none() {
                if let Some((_, states)) = best {
                    failures.extend(states.into_iter().map(|u| Violation {
                        function: i,
                        state: u,
                        image: f.apply(u),
                        condition: Condition::Commutation,
                    }));
                }
            }
            witnesses.push(witness);
        }
        let is_homomorphism = witnesses.iter().all(Option::is_some);
        if is_homomorphism {
            failures.clear();
        }
        let epsilon = is_homomorphism.then(|| self.distortion());
        HomReport { is_homomorphism, witnesses, failures, epsilon }
    }

    /// The arrow distortion described in the module docs, whether or not the
    /// map is a homomorphism.
    pub fn distortion(&self) -> Rational {
        let ts = StochasticMatrix::of(&self.source);
        let tt = StochasticMatrix::of(&self.target);
        distortion_between(&ts, &tt, &self.map)
    }

    /// The ε of a homomorphism.
    pub fn epsilon(&self) -> Result<Rational, MorphismError> {
        let report = self.check_homomorphism();
        match report.epsilon {
            Some(eps) => Ok(eps),
            None => Err(MorphismError::NotHomomorphism(report.failures.len())),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism, MorphismError> {
        compose(self, next)
    }

    /// Checks idempotence of an endomorphism homomorphism.
    pub fn is_projection(&self) -> Result<ProjectionReport, MorphismError> {
        if !same_network(&self.source, &self.target) {
            return Err(MorphismError::NotEndomorphism);
        }
        let report = self.check_homomorphism();
        if !report.is_homomorphism {
            return Err(MorphismError::NotHomomorphism(report.failures.len()));
        }
        let is_projection = self.map.iter().all(|&x| self.map[x] == x);
        Ok(ProjectionReport { is_projection, image: self.image() })
    }

    /// Serializes as `src -> dst` lines.
    pub fn to_map_text(&self) -> String {
        self.pairs().iter().map(|(s, t)| format!("{s} -> {t}\n")).collect()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().iter().map(|(s, t)| format!("{s} -> {t}")).collect();
        f.write_str(&pairs.join(", "))
    }
}

pub(crate) fn distortion_between(ts: &StochasticMatrix, tt: &StochasticMatrix, map: &[usize]) -> Rational {
    let n = ts.order();
    let m = tt.order();
    let mut best = Rational::zero();
    let mut matched = vec![false; m * m];
    for u in 0..n {
        for v in 0..n {
            let p = ts.entry(u, v);
            if p.is_zero() {
                continue;
            }
            matched[map[u] * m + map[v]] = true;
            let d = (p - tt.entry(map[u], map[v])).abs();
            if d > best {
                best = d;
            }
        }
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    for &w in &image {
        for &z in &image {
            let q = tt.entry(w, z);
            if !matched[w * m + z] && *q > best {
                best = q.clone();
            }
        }
    }
    best
}

/// `second ∘ first`; the target of `first` must be the source of `second`.
pub fn compose(first: &Morphism, second: &Morphism) -> Result<Morphism, MorphismError> {
    if !same_network(&first.target, &second.source) {
        return Err(MorphismError::SpaceMismatch("target of the first map is not the source of the second".into()));
    }
    let map = first.map.iter().map(|&x| second.map[x]).collect();
    Ok(Morphism { source: first.source.clone(), target: second.target.clone(), map })
}

/// Backtracking search for homomorphisms.
///
/// Source states are assigned in order and candidate images are tried in
/// target order, so results come out lexicographically by map. A partial
/// map is abandoned as soon as some source function has no target function
/// consistent with every arrow whose endpoints are both assigned.
struct Search<'a> {
    src: &'a Prn,
    dst: &'a Prn,
    domains: Vec<Vec<usize>>,
    injective: bool,
    budget: usize,
    expansions: usize,
    /// For each source state s: the (function, state) arrows whose endpoints
    /// are both assigned once s is.
    ready: Vec<Vec<(usize, usize)>>,
    results: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(src: &'a Prn, dst: &'a Prn, domains: Vec<Vec<usize>>, injective: bool, budget: usize) -> Self {
        let n = src.state_count();
        let mut ready = vec![Vec::new(); n];
        for (i, f) in src.functions().enumerate() {
            for u in 0..n {
                ready[u.max(f.apply(u))].push((i, u));
            }
        }
        Search { src, dst, domains, injective, budget, expansions: 0, ready, results: Vec::new() }
    }

    fn run(mut self) -> Result<Vec<Vec<usize>>, MorphismError> {
        let n = self.src.state_count();
        let candidates = vec![vec![true; self.dst.function_count()]; self.src.function_count()];
        let mut map = Vec::with_capacity(n);
        let mut used = vec![false; self.dst.state_count()];
        self.extend(&mut map, &mut used, &candidates)?;
        Ok(self.results)
    }

    fn extend(
        &mut self,
        map: &mut Vec<usize>,
        used: &mut [bool],
        candidates: &[Vec<bool>],
    ) -> Result<(), MorphismError> {
        let s = map.len();
        if s == self.src.state_count() {
            self.results.push(map.clone());
            return Ok(());
        }
        for k in 0..self.domains[s].len() {
            let t = self.domains[s][k];
            if self.injective && used[t] {
                continue;
            }
            self.expansions += 1;
            if self.expansions > self.budget {
                return Err(MorphismError::BudgetExceeded { budget: self.budget });
            }
            map.push(t);
            let mut next = candidates.to_vec();
            let mut alive = true;
            for &(i, u) in &self.ready[s] {
                let want = map[self.src.function(i).apply(u)];
                let from = map[u];
                let row = &mut next[i];
                for (j, ok) in row.iter_mut().enumerate() {
                    if *ok && self.dst.function(j).apply(from) != want {
                        *ok = false;
                    }
                }
                if !row.iter().any(|&b| b) {
                    alive = false;
                    break;
                }
            }
            if alive {
                used[t] = true;
                self.extend(map, used, &next)?;
                used[t] = false;
            }
            map.pop();
        }
        Ok(())
    }
}

fn search(
    src: &Arc<Prn>,
    dst: &Arc<Prn>,
    domains: Vec<Vec<usize>>,
    injective: bool,
    budget: usize,
) -> Result<Vec<(Morphism, Rational)>, MorphismError> {
    let maps = Search::new(src, dst, domains, injective, budget).run()?;
    let ts = StochasticMatrix::of(src);
    let tt = StochasticMatrix::of(dst);
    Ok(maps
        .into_iter()
        .map(|map| {
            let eps = distortion_between(&ts, &tt, &map);
            (Morphism { source: src.clone(), target: dst.clone(), map }, eps)
        })
        .collect())
}

/// All homomorphisms `src -> dst` with their ε, in lexicographic map order.
pub fn enumerate_homomorphisms(
    src: &Arc<Prn>,
    dst: &Arc<Prn>,
    budget: usize,
) -> Result<Vec<(Morphism, Rational)>, MorphismError> {
    let domains = vec![(0..dst.state_count()).collect(); src.state_count()];
    search(src, dst, domains, false, budget)
}

/// All bijective homomorphisms `src -> dst`; empty when the sizes differ.
pub fn enumerate_isomorphisms(
    src: &Arc<Prn>,
    dst: &Arc<Prn>,
    budget: usize,
) -> Result<Vec<(Morphism, Rational)>, MorphismError> {
    if src.state_count() != dst.state_count() {
        return Ok(Vec::new());
    }
    let domains = vec![(0..dst.state_count()).collect(); src.state_count()];
    search(src, dst, domains, true, budget)
}

/// All injective homomorphisms `src -> dst`.
pub fn enumerate_embeddings(
    src: &Arc<Prn>,
    dst: &Arc<Prn>,
    budget: usize,
) -> Result<Vec<(Morphism, Rational)>, MorphismError> {
    if src.state_count() > dst.state_count() {
        return Ok(Vec::new());
    }
    let domains = vec![(0..dst.state_count()).collect(); src.state_count()];
    search(src, dst, domains, true, budget)
}

/// Idempotent endomorphism homomorphisms of `prn` with image exactly `image`.
///
/// Every such map fixes `image` pointwise and sends the remaining states into
/// it, which is what the search domains encode.
pub fn enumerate_projections(
    prn: &Arc<Prn>,
    image: &BTreeSet<usize>,
    budget: usize,
) -> Result<Vec<(Morphism, Rational)>, MorphismError> {
    let inside: Vec<usize> = image.iter().copied().collect();
    let domains = (0..prn.state_count()).map(|s| if image.contains(&s) { vec![s] } else { inside.clone() }).collect();
    search(prn, prn, domains, false, budget)
}

/// Partitions `networks` into isomorphism classes. Classes are ordered by
/// their first member and list members in input order.
pub fn isomorphism_classes(networks: &[Arc<Prn>], budget: usize) -> Result<Vec<Vec<usize>>, MorphismError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for (i, prn) in networks.iter().enumerate() {
        for class in classes.iter_mut() {
            if !enumerate_isomorphisms(prn, &networks[class[0]], budget)?.is_empty() {
                class.push(i);
                continue 'next;
            }
        }
        classes.push(vec![i]);
    }
    Ok(classes)
}

/// The map `x -> (δ1(x), δ2(x))` into the product of the two targets.
///
/// `product` must be a product network of `first.target()` and
/// `second.target()`, in that order.
pub fn pairing(first: &Morphism, second: &Morphism, product: Arc<Prn>) -> Result<Morphism, MorphismError> {
    if !same_network(&first.source, &second.source) {
        return Err(MorphismError::SpaceMismatch("the two maps have different sources".into()));
    }
    let expected = algebra::product_space(first.target.space(), second.target.space())?;
    if *product.space() != expected {
        return Err(MorphismError::SpaceMismatch("network is not a product of the two targets".into()));
    }
    let right = second.target.state_count();
    let map = first.map.iter().zip(&second.map).map(|(&a, &b)| a * right + b).collect();
    Ok(Morphism { source: first.source.clone(), target: product, map })
}

/// The map out of the sum that acts as `first` on the first summand and as
/// `second` on the second.
pub fn copairing(first: &Morphism, second: &Morphism, sum: Arc<Prn>) -> Result<Morphism, MorphismError> {
    if !same_network(&first.target, &second.target) {
        return Err(MorphismError::SpaceMismatch("the two maps have different targets".into()));
    }
    let expected = algebra::sum_space(first.source.space(), second.source.space())?;
    if *sum.space() != expected {
        return Err(MorphismError::SpaceMismatch("network is not a sum of the two sources".into()));
    }
    let map = first.map.iter().chain(&second.map).copied().collect();
    Ok(Morphism { source: sum, target: first.target.clone(), map })
}

/// Renders a list of maps with their ε, one per line.
pub fn render_search(results: &[(Morphism, Rational)]) -> String {
    if results.is_empty() {
        return "none\n".into();
    }
    results.iter().map(|(m, eps)| format!("{m}  epsilon={}\n", format_rational(eps))).collect()
}
