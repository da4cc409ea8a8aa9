//! Sums, products, superpositions, and restrictions of networks.
//!
//! * The sum lives on the disjoint union. Its function `f_i | g_j` acts as
//!   `f_i` on the first summand and as `g_j` on the second, with
//!   probability `c_i * d_j`. These probabilities sum to one and marginalize
//!   to `c_i` and `d_j`, so the transition matrix is `diag(T_1, T_2)`.
//! * The product lives on the cartesian product with functions
//!   `(f_i, g_j)(x_1, x_2) = (f_i(x_1), g_j(x_2))`, weighted by a
//!   [`ProbabilityCombiner`] (multiplication by default).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{format_rational, Rational};
use crate::morphism::{Morphism, MorphismError};
use crate::network::{NetworkError, Prn, Probability, State, StateFunction, StateSpace};
use crate::structure::{self, Escape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("combiner `{combiner}` is not stochastic: weights sum to {}", format_rational(.total))]
    CombinerNotStochastic { combiner: String, total: Rational },
    #[error("subset is not invariant: {}", .escapes.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotInvariant { escapes: Vec<Escape> },
    #[error("state #{index} is not in a space of {size} states")]
    UnknownState { index: usize, size: usize },
    #[error("unknown combiner `{0}` (expected `multiply` or `average`)")]
    UnknownCombiner(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// A rule turning a pair of selection probabilities into the probability of
/// the paired product function.
#[derive(Clone)]
pub struct ProbabilityCombiner {
    name: String,
    rule: fn(&Rational, &Rational) -> Rational,
}

impl fmt::Debug for ProbabilityCombiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ProbabilityCombiner").field(&self.name).finish()
    }
}

impl Default for ProbabilityCombiner {
    fn default() -> Self {
        ProbabilityCombiner::multiply()
    }
}

impl ProbabilityCombiner {
    pub fn new(name: impl Into<String>, rule: fn(&Rational, &Rational) -> Rational) -> Self {
        ProbabilityCombiner { name: name.into(), rule }
    }

    /// `c * d`: the two selections are independent.
    pub fn multiply() -> Self {
        ProbabilityCombiner::new("multiply", |c, d| c * d)
    }

    /// `(c + d) / 2`. Only stochastic when both networks have one function.
    pub fn average() -> Self {
        ProbabilityCombiner::new("average", |c, d| (c + d) / Rational::from_integer(2.into()))
    }

    pub fn by_name(name: &str) -> Result<Self, AlgebraError> {
        match name {
            "multiply" => Ok(ProbabilityCombiner::multiply()),
            "average" => Ok(ProbabilityCombiner::average()),
            other => Err(AlgebraError::UnknownCombiner(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn combine(&self, c: &Rational, d: &Rational) -> Rational {
        (self.rule)(c, d)
    }
}

/// The carrier of a sum.
///
/// When both spaces are coordinate tuples of one common length, the summand
/// is recorded as an extra last coordinate (`(x,y,0)` and `(x,y,1)`);
/// otherwise states are tagged `0:s` and `1:s`. The first summand's states
/// come first.
pub fn sum_space(a: &StateSpace, b: &StateSpace) -> Result<StateSpace, NetworkError> {
    let arity = |s: &StateSpace| {
        let first = s.states()[0].as_coords()?.len();
        s.states().iter().all(|x| x.as_coords().is_some_and(|c| c.len() == first)).then_some(first)
    };
    match (arity(a), arity(b)) {
        (Some(n), Some(m)) if n == m => {
            let tag = |s: &State, t: u32| {
                let mut c = s.as_coords().expect("coordinate state").to_vec();
                c.push(t);
                State::Coords(c)
            };
            let states: Vec<State> =
                a.states().iter().map(|s| tag(s, 0)).chain(b.states().iter().map(|s| tag(s, 1))).collect();
            let widest = |pos: usize| states.iter().map(|s| s.as_coords().expect("coords")[pos] + 1).max().unwrap_or(1);
            let mut alphabets: Vec<u32> = (0..n).map(widest).collect();
            alphabets.push(2);
            StateSpace::with_alphabets(states, alphabets)
        }
        _ => {
            let states = a
                .states()
                .iter()
                .map(|s| State::tagged(0, s.clone()))
                .chain(b.states().iter().map(|s| State::tagged(1, s.clone())))
                .collect();
            StateSpace::new(states)
        }
    }
}

/// The sum network on the disjoint union.
pub fn sum(a: &Prn, b: &Prn) -> Result<Prn, NetworkError> {
    let space = sum_space(a.space(), b.space())?;
    let offset = a.state_count();
    let mut entries = Vec::with_capacity(a.function_count() * b.function_count());
    for (f, c) in a.entries() {
        for (g, d) in b.entries() {
            let table = f.table().iter().copied().chain(g.table().iter().map(|&t| t + offset)).collect();
            let h = StateFunction::new(format!("{}|{}", f.name(), g.name()), table, space.len())?;
            entries.push((h, Probability::new(c.value() * d.value())?));
        }
    }
    Prn::new(space, entries)
}

/// The carrier of a product: pairs `(u, v)` in left-major order.
pub fn product_space(a: &StateSpace, b: &StateSpace) -> Result<StateSpace, NetworkError> {
    let states =
        a.states().iter().flat_map(|u| b.states().iter().map(move |v| State::pair(u.clone(), v.clone()))).collect();
    StateSpace::new(states)
}

/// The product network.
///
/// Pairs `(i, j)` are visited in left-major order; pairs that yield the same
/// function on the product are merged, keeping the first name.
pub fn product(a: &Prn, b: &Prn, combiner: &ProbabilityCombiner) -> Result<Prn, AlgebraError> {
    let mut total = Rational::zero();
    let mut weights = Vec::with_capacity(a.function_count() * b.function_count());
    for (_, c) in a.entries() {
        for (_, d) in b.entries() {
            let w = combiner.combine(c.value(), d.value());
            total += &w;
            weights.push(w);
        }
    }
    if !total.is_one() {
        return Err(AlgebraError::CombinerNotStochastic { combiner: combiner.name().to_string(), total });
    }

    let space = product_space(a.space(), b.space())?;
    let width = b.state_count();
    let mut merged: Vec<(StateFunction, Rational)> = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut weights = weights.into_iter();
    for (f, _) in a.entries() {
        for (g, _) in b.entries() {
            let w = weights.next().expect("one weight per pair");
            let table: Vec<usize> = (0..space.len()).map(|k| f.apply(k / width) * width + g.apply(k % width)).collect();
            match seen.get(&table) {
                Some(&at) => merged[at].1 += w,
                None => {
                    seen.insert(table.clone(), merged.len());
                    let name = format!("({},{})", f.name(), g.name());
                    merged.push((StateFunction::new(name, table, space.len())?, w));
                }
            }
        }
    }
    let entries =
        merged.into_iter().map(|(f, w)| Ok((f, Probability::new(w)?))).collect::<Result<Vec<_>, NetworkError>>()?;
    Ok(Prn::new(space, entries)?)
}

/// A network assembled from several single functions on one space.
pub fn superpose(
    space: StateSpace,
    functions: Vec<StateFunction>,
    probs: Vec<Probability>,
) -> Result<Prn, NetworkError> {
    if functions.len() != probs.len() {
        return Err(NetworkError::PartialFunction {
            function: "probabilities".into(),
            expected: functions.len(),
            found: probs.len(),
        });
    }
    Prn::new(space, functions.into_iter().zip(probs).collect())
}

/// The subnetwork on an invariant subset, probabilities unchanged.
pub fn restrict(prn: &Prn, subset: &BTreeSet<usize>) -> Result<Prn, AlgebraError> {
    if let Some(&index) = subset.iter().find(|&&i| i >= prn.state_count()) {
        return Err(AlgebraError::UnknownState { index, size: prn.state_count() });
    }
    let escapes = structure::escapes_of(prn, subset);
    if !escapes.is_empty() {
        return Err(AlgebraError::NotInvariant { escapes });
    }
    let members: Vec<usize> = subset.iter().copied().collect();
    let states: Vec<State> = members.iter().map(|&i| prn.space().state(i).clone()).collect();
    let space = match prn.space().alphabets() {
        Some(a) => StateSpace::with_alphabets(states, a.to_vec())?,
        None => StateSpace::new(states)?,
    };
    let position: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let entries = prn
        .entries()
        .iter()
        .map(|(f, p)| {
            let table = members.iter().map(|&u| position[&f.apply(u)]).collect();
            Ok((StateFunction::new(f.name(), table, members.len())?, p.clone()))
        })
        .collect::<Result<Vec<_>, NetworkError>>()?;
    Ok(Prn::new(space, entries)?)
}

/// The injections of the two summands into their sum.
pub fn injections(a: &Arc<Prn>, b: &Arc<Prn>, sum: &Arc<Prn>) -> Result<(Morphism, Morphism), MorphismError> {
    if *sum.space() != sum_space(a.space(), b.space())? {
        return Err(MorphismError::SpaceMismatch("network is not a sum of the two summands".into()));
    }
    let offset = a.state_count();
    let first = Morphism::new(a.clone(), sum.clone(), (0..a.state_count()).collect())?;
    let second = Morphism::new(b.clone(), sum.clone(), (0..b.state_count()).map(|j| j + offset).collect())?;
    Ok((first, second))
}

/// The coordinate projections `(u, v) -> u` and `(u, v) -> v` out of a product.
pub fn coordinate_projections(
    a: &Arc<Prn>,
    b: &Arc<Prn>,
    product: &Arc<Prn>,
) -> Result<(Morphism, Morphism), MorphismError> {
    if *product.space() != product_space(a.space(), b.space())? {
        return Err(MorphismError::SpaceMismatch("network is not a product of the two factors".into()));
    }
    let width = b.state_count();
    let n = product.state_count();
    let left = Morphism::new(product.clone(), a.clone(), (0..n).map(|k| k / width).collect())?;
    let right = Morphism::new(product.clone(), b.clone(), (0..n).map(|k| k % width).collect())?;
    Ok((left, right))
}
