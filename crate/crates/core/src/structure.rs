//! Invariant subnetworks, closures, irreducible parts, projections, and
//! product decompositions.
//!
//! A subset `Y` is invariant when every function maps `Y` into itself. It is
//! irreducible when it has no proper nonempty invariant subset; these are
//! exactly the terminal strongly connected components of the union digraph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{self, AlgebraError, ProbabilityCombiner};
use crate::exact::{Rational, WithDecimal};
use crate::graph::terminal_components;
use crate::markov::StochasticMatrix;
use crate::morphism::{self, Morphism, MorphismError, DEFAULT_SEARCH_BUDGET};
use crate::network::{Prn, State};

/// Default bound on `|Y1| * |Y2|` for decomposition attempts.
pub const DEFAULT_DECOMPOSITION_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("state #{index} is not in a space of {size} states")]
    UnknownState { index: usize, size: usize },
    #[error("enumeration would exceed the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("subset {subset} is not invariant: {}", .escapes.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotInvariant { subset: String, escapes: Vec<Escape> },
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A function carrying a member of the subset outside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Escape {
    pub function: String,
    pub state: State,
    pub image: State,
}

impl fmt::Display for Escape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} sends {} to {}", self.function, self.state, self.image)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubnetworkReport {
    pub subset: BTreeSet<usize>,
    pub invariant: bool,
    pub escapes: Vec<Escape>,
}

fn check_indices(size: usize, subset: &BTreeSet<usize>) -> Result<(), StructureError> {
    match subset.iter().find(|&&i| i >= size) {
        Some(&index) => Err(StructureError::UnknownState { index, size }),
        None => Ok(()),
    }
}

/// Escapes in function order, then state order. Indices must be valid.
pub(crate) fn escapes_of(prn: &Prn, subset: &BTreeSet<usize>) -> Vec<Escape> {
    let mut out = Vec::new();
    for f in prn.functions() {
        for &u in subset {
            let v = f.apply(u);
            if !subset.contains(&v) {
                out.push(Escape {
                    function: f.name().to_string(),
                    state: prn.space().state(u).clone(),
                    image: prn.space().state(v).clone(),
                });
            }
        }
    }
    out
}

/// Checks closure of `subset` under every function and lists every escape.
pub fn is_invariant(prn: &Prn, subset: &BTreeSet<usize>) -> Result<SubnetworkReport, StructureError> {
    check_indices(prn.state_count(), subset)?;
    let escapes = escapes_of(prn, subset);
    Ok(SubnetworkReport { subset: subset.clone(), invariant: escapes.is_empty(), escapes })
}

/// Smallest invariant superset of `subset`.
pub fn closure(prn: &Prn, subset: &BTreeSet<usize>) -> Result<BTreeSet<usize>, StructureError> {
    check_indices(prn.state_count(), subset)?;
    Ok(closure_unchecked(prn, subset.iter().copied()))
}

fn closure_unchecked(prn: &Prn, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for s in seeds {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for f in prn.functions() {
            let v = f.apply(u);
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Minimal nonempty invariant subsets: terminal components of the union
/// digraph, ordered by smallest state.
pub fn irreducible_subnetworks(prn: &Prn) -> Vec<BTreeSet<usize>> {
    terminal_components(&prn.union_successors()).into_iter().map(|c| c.into_iter().collect()).collect()
}

/// True when some nonempty proper subset is invariant.
pub fn is_reducible(prn: &Prn) -> bool {
    (0..prn.state_count()).any(|s| closure_unchecked(prn, [s]).len() < prn.state_count())
}

/// The nonempty invariant subsets of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantLattice {
    /// Ordered by size, then lexicographically.
    pub closed_sets: Vec<BTreeSet<usize>>,
    /// The irreducible members.
    pub minimal: Vec<BTreeSet<usize>>,
}

impl InvariantLattice {
    pub fn contains(&self, set: &BTreeSet<usize>) -> bool {
        self.closed_sets.binary_search_by(|m| order_key(m).cmp(&order_key(set))).is_ok()
    }

    /// Pairwise unions are members; so are pairwise intersections unless
    /// they are empty (the empty set is left out of the listing).
    pub fn is_lattice(&self) -> bool {
        self.closed_sets.iter().all(|a| {
            self.closed_sets.iter().all(|b| {
                let union: BTreeSet<usize> = a.union(b).copied().collect();
                let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
                self.contains(&union) && (meet.is_empty() || self.contains(&meet))
            })
        })
    }
}

fn order_key(set: &BTreeSet<usize>) -> (usize, Vec<usize>) {
    (set.len(), set.iter().copied().collect())
}

/// Every nonempty invariant subset.
///
/// Invariant sets are exactly the unions of single-state closures, so the
/// lattice is generated from those; `cap` bounds the number of members.
pub fn all_invariant_subnetworks(prn: &Prn, cap: usize) -> Result<InvariantLattice, StructureError> {
    let generators: BTreeSet<BTreeSet<usize>> = (0..prn.state_count()).map(|s| closure_unchecked(prn, [s])).collect();
    let mut members: BTreeSet<BTreeSet<usize>> = generators.clone();
    if members.len() > cap {
        return Err(StructureError::CapExceeded { cap });
    }
    let mut frontier: Vec<BTreeSet<usize>> = members.iter().cloned().collect();
    while let Some(m) = frontier.pop() {
        for g in &generators {
            if g.is_subset(&m) {
                continue;
            }
            let u: BTreeSet<usize> = m.union(g).copied().collect();
            if members.insert(u.clone()) {
                if members.len() > cap {
                    return Err(StructureError::CapExceeded { cap });
                }
                frontier.push(u);
            }
        }
    }
    let mut closed_sets: Vec<BTreeSet<usize>> = members.into_iter().collect();
    closed_sets.sort_by_key(order_key);
    let lattice = InvariantLattice { closed_sets, minimal: irreducible_subnetworks(prn) };
    debug_assert!(lattice.is_lattice());
    Ok(lattice)
}

/// True iff every row indexed by `subset` puts zero mass outside `subset`.
pub fn matrix_invariance(t: &StochasticMatrix, subset: &BTreeSet<usize>) -> Result<bool, StructureError> {
    check_indices(t.order(), subset)?;
    Ok(subset.iter().all(|&i| t.row(i).iter().enumerate().all(|(j, x)| subset.contains(&j) || x.is_zero())))
}

/// Projections with a prescribed image.
#[derive(Debug, Clone)]
pub struct ProjectionSearch {
    /// Present when the image is not invariant; no projection can exist then.
    pub not_invariant: Option<Vec<Escape>>,
    pub projections: Vec<(Morphism, Rational)>,
}

/// All idempotent endomorphism homomorphisms with image exactly `image`,
/// each with its ε, in lexicographic map order.
pub fn projections_onto(prn: &Arc<Prn>, image: &BTreeSet<usize>) -> Result<ProjectionSearch, StructureError> {
    let report = is_invariant(prn, image)?;
    if !report.invariant {
        return Ok(ProjectionSearch { not_invariant: Some(report.escapes), projections: Vec::new() });
    }
    if image.is_empty() {
        return Ok(ProjectionSearch { not_invariant: None, projections: Vec::new() });
    }
    let projections = morphism::enumerate_projections(prn, image, DEFAULT_SEARCH_BUDGET)?;
    Ok(ProjectionSearch { not_invariant: None, projections })
}

/// What [`check_product_decomposition`] found.
#[derive(Debug, Clone)]
pub enum Decomposition {
    /// The network has no nonempty proper invariant subset.
    Irreducible,
    /// A support-preserving isomorphism onto the product of the two
    /// subnetworks.
    Isomorphic {
        map: Morphism,
        epsilon: Rational,
    },
    /// A support-preserving embedding onto an invariant subnetwork of the
    /// product.
    Embedded {
        map: Morphism,
        epsilon: Rational,
    },
    NotFound,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub product: Arc<Prn>,
    pub outcome: Decomposition,
}

impl DecompositionReport {
    pub fn render(&self) -> String {
        match &self.outcome {
            Decomposition::Irreducible => "irreducible, no decomposition\n".into(),
            Decomposition::NotFound => "no decomposition found\n".into(),
            Decomposition::Isomorphic { map, epsilon } => {
                format!("isomorphic to the product\nmap: {map}\nepsilon: {}\n", WithDecimal(epsilon))
            }
            Decomposition::Embedded { map, epsilon } => {
                let image = map.target().space().describe(&map.image());
                format!("embeds in the product onto {image}\nmap: {map}\nepsilon: {}\n", WithDecimal(epsilon))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionOptions {
    pub cap: usize,
    pub budget: usize,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions { cap: DEFAULT_DECOMPOSITION_CAP, budget: DEFAULT_SEARCH_BUDGET }
    }
}

/// Compares `prn` with the product of its restrictions to `first` and
/// `second`.
///
/// Candidate maps are homomorphisms that also preserve the support of the
/// transition matrix in both directions (`T(u,v) > 0` iff
/// `T'(φu, φv) > 0`). Among them the one with least ε is reported, ties
/// going to the lexicographically first map. Equal supports do not mean
/// equal probabilities; ε measures the difference.
pub fn check_product_decomposition(
    prn: &Arc<Prn>,
    first: &BTreeSet<usize>,
    second: &BTreeSet<usize>,
    options: DecompositionOptions,
) -> Result<DecompositionReport, StructureError> {
    for subset in [first, second] {
        let report = is_invariant(prn, subset)?;
        if !report.invariant {
            return Err(StructureError::NotInvariant { subset: prn.space().describe(subset), escapes: report.escapes });
        }
    }
    if first.len().saturating_mul(second.len()) > options.cap {
        return Err(StructureError::CapExceeded { cap: options.cap });
    }
    let left = algebra::restrict(prn, first)?;
    let right = algebra::restrict(prn, second)?;
    let product = Arc::new(algebra::product(&left, &right, &ProbabilityCombiner::multiply())?);

    if !is_reducible(prn) {
        return Ok(DecompositionReport { product, outcome: Decomposition::Irreducible });
    }

    let ts = StochasticMatrix::of(prn);
    let tp = StochasticMatrix::of(&product);
    let n = prn.state_count();
    let preserves_support = |m: &Morphism| {
        (0..n).all(|u| (0..n).all(|v| ts.entry(u, v).is_zero() == tp.entry(m.apply(u), m.apply(v)).is_zero()))
    };
    let best = |found: Vec<(Morphism, Rational)>| {
        found.into_iter().filter(|(m, _)| preserves_support(m)).fold(None::<(Morphism, Rational)>, |acc, (m, e)| {
            match acc {
                Some((am, ae)) if ae <= e => Some((am, ae)),
                _ => Some((m, e)),
            }
        })
    };

    let outcome = if n == product.state_count() {
        match best(morphism::enumerate_isomorphisms(prn, &product, options.budget)?) {
            Some((map, epsilon)) => Decomposition::Isomorphic { map, epsilon },
            None => Decomposition::NotFound,
        }
    } else if n < product.state_count() {
        let found: Vec<_> = morphism::enumerate_embeddings(prn, &product, options.budget)?
            .into_iter()
            .filter(|(m, _)| escapes_of(&product, &m.image()).is_empty())
            .collect();
        match best(found) {
            Some((map, epsilon)) => Decomposition::Embedded { map, epsilon },
            None => Decomposition::NotFound,
        }
    } else {
        Decomposition::NotFound
    };
    Ok(DecompositionReport { product, outcome })
}
