//! States, state spaces, deterministic functions, and probabilistic
//! regulatory networks.
//!
//! A [`Prn`] is a finite state space together with an ordered list of total
//! functions on it, each chosen with a positive exact probability. The
//! probabilities always sum to exactly one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, ParseRationalError, Rational};

/// Upper bound on the number of states a product space may enumerate.
pub const MAX_STATES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("a network needs at least one function")]
    EmptyNetwork,
    #[error("a state space needs at least one state")]
    EmptySpace,
    #[error("selection probabilities sum to {}, expected exactly 1", format_rational(.total))]
    ProbabilitySum { total: Rational },
    #[error("function `{function}` has probability 0")]
    ZeroProbability { function: String },
    #[error("probability {} is outside [0, 1]", format_rational(.value))]
    ProbabilityOutOfRange { value: Rational },
    #[error("function `{function}` defines {found} images for {expected} states")]
    PartialFunction { function: String, expected: usize, found: usize },
    #[error("function `{function}` sends state #{state} to #{target}, which is out of range")]
    TargetOutOfRange { function: String, state: usize, target: usize },
    #[error("function `{function}` sends {state} to {image}, which is not in the state space")]
    LeavesStateSpace { function: String, state: State, image: State },
    #[error("function `{function}` assigns {state} twice")]
    DuplicateAssignment { function: String, state: State },
    #[error("duplicate state {0}")]
    DuplicateState(State),
    #[error("state {0} is not in the state space")]
    UnknownState(State),
    #[error("state {state} violates the coordinate alphabets {alphabets:?}")]
    AlphabetViolation { state: State, alphabets: Vec<u32> },
    #[error("alphabet sizes must be positive and the product must not exceed {MAX_STATES} states")]
    InvalidAlphabet,
    #[error("predictor `{predictor}` is not Boolean at state {state}")]
    NonBooleanPredictor { predictor: String, state: State },
    #[error("gene {gene} has no predictors")]
    NoPredictors { gene: usize },
    #[error("gene {gene}: {source}")]
    GeneProbabilities { gene: usize, source: Box<NetworkError> },
    #[error("expected {expected} genes, found {found}")]
    GeneCount { expected: usize, found: usize },
    #[error("cannot parse state `{text}`: {reason}")]
    ParseState { text: String, reason: String },
    #[error(transparent)]
    Number(#[from] ParseRationalError),
}

/// A single state.
///
/// Coordinate tuples are the common case (`(0,1)`); sums and products of
/// networks produce tagged and paired states. Ordering is lexicographic
/// within each variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Coords(Vec<u32>),
    Label(String),
    Pair(Box<State>, Box<State>),
    Tagged(u8, Box<State>),
}

impl State {
    pub fn coords(coords: impl Into<Vec<u32>>) -> State {
        State::Coords(coords.into())
    }

    pub fn pair(left: State, right: State) -> State {
        State::Pair(Box::new(left), Box::new(right))
    }

    pub fn tagged(tag: u8, inner: State) -> State {
        State::Tagged(tag, Box::new(inner))
    }

    pub fn as_coords(&self) -> Option<&[u32]> {
        match self {
            State::Coords(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Coords(c) => {
                f.write_str("(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            State::Label(l) => f.write_str(l),
            State::Pair(a, b) => write!(f, "({a},{b})"),
            State::Tagged(t, s) => write!(f, "{t}:{s}"),
        }
    }
}

impl FromStr for State {
    type Err = NetworkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cursor = StateCursor::new(s);
        let state = cursor.state()?;
        cursor.skip_ws();
        if !cursor.at_end() {
            return Err(cursor.error("trailing characters"));
        }
        Ok(state)
    }
}

/// Parses a whitespace-separated sequence of states, e.g. `(0,0) (0,1) a`.
pub fn parse_state_list(s: &str) -> Result<Vec<State>, NetworkError> {
    let mut cursor = StateCursor::new(s);
    let mut out = Vec::new();
    loop {
        cursor.skip_ws();
        if cursor.at_end() {
            return Ok(out);
        }
        out.push(cursor.state()?);
    }
}

struct StateCursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> StateCursor<'a> {
    fn new(text: &'a str) -> Self {
        StateCursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn error(&self, reason: &str) -> NetworkError {
        NetworkError::ParseState { text: self.text.to_string(), reason: format!("{reason} at offset {}", self.pos) }
    }

    fn expect(&mut self, c: char) -> Result<(), NetworkError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        (len > 0).then(|| {
            self.pos += len;
            &rest[..len]
        })
    }

    fn state(&mut self) -> Result<State, NetworkError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek().is_some_and(|c| c.is_ascii_digit()) && !self.tag_ahead() {
                    self.coords()
                } else {
                    let left = self.state()?;
                    self.expect(',')?;
                    let right = self.state()?;
                    self.expect(')')?;
                    Ok(State::pair(left, right))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let tag = self.digits().unwrap_or_default();
                let tag: u8 = tag.parse().map_err(|_| self.error("tag out of range"))?;
                self.expect(':')?;
                Ok(State::tagged(tag, self.state()?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let rest = self.rest();
                let len = rest
                    .char_indices()
                    .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
                    .map_or(rest.len(), |(i, _)| i);
                self.pos += len;
                Ok(State::Label(rest[..len].to_string()))
            }
            _ => Err(self.error("expected a state")),
        }
    }

    /// True when the digits at the cursor are a tag (`0:`) rather than a coordinate.
    fn tag_ahead(&self) -> bool {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        rest[len..].trim_start().starts_with(':')
    }

    fn coords(&mut self) -> Result<State, NetworkError> {
        let mut coords = Vec::new();
        loop {
            self.skip_ws();
            let d = self.digits().ok_or_else(|| self.error("expected a coordinate"))?;
            coords.push(d.parse().map_err(|_| self.error("coordinate out of range"))?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(State::Coords(coords));
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
    }
}

/// An ordered finite set of states.
///
/// Position in [`StateSpace::states`] is the row/column order of every
/// matrix built over the space.
#[derive(Debug, Clone)]
pub struct StateSpace {
    states: Vec<State>,
    index: HashMap<State, usize>,
    alphabets: Option<Vec<u32>>,
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states && self.alphabets == other.alphabets
    }
}

impl Eq for StateSpace {}

impl StateSpace {
    /// An explicit list of states, kept in the given order.
    pub fn new(states: Vec<State>) -> Result<Self, NetworkError> {
        if states.is_empty() {
            return Err(NetworkError::EmptySpace);
        }
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(NetworkError::DuplicateState(s.clone()));
            }
        }
        Ok(StateSpace { states, index, alphabets: None })
    }

    /// A list of coordinate tuples, each drawn from the given per-position
    /// alphabets `{0, .., a_k - 1}`.
    pub fn with_alphabets(states: Vec<State>, alphabets: Vec<u32>) -> Result<Self, NetworkError> {
        if alphabets.is_empty() || alphabets.contains(&0) {
            return Err(NetworkError::InvalidAlphabet);
        }
        for s in &states {
            let ok = s
                .as_coords()
                .is_some_and(|c| c.len() == alphabets.len() && c.iter().zip(&alphabets).all(|(x, a)| x < a));
            if !ok {
                return Err(NetworkError::AlphabetViolation { state: s.clone(), alphabets });
            }
        }
        let mut space = StateSpace::new(states)?;
        space.alphabets = Some(alphabets);
        Ok(space)
    }

    /// The full product `{0..a_1-1} x ... x {0..a_n-1}` in lexicographic order.
    pub fn product(alphabets: &[u32]) -> Result<Self, NetworkError> {
        if alphabets.is_empty() || alphabets.contains(&0) {
            return Err(NetworkError::InvalidAlphabet);
        }
        let total = alphabets
            .iter()
            .try_fold(1usize, |acc, &a| acc.checked_mul(a as usize).filter(|&t| t <= MAX_STATES))
            .ok_or(NetworkError::InvalidAlphabet)?;
        let mut states = Vec::with_capacity(total);
        let mut current = vec![0u32; alphabets.len()];
        for _ in 0..total {
            states.push(State::Coords(current.clone()));
            for pos in (0..current.len()).rev() {
                current[pos] += 1;
                if current[pos] < alphabets[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
        StateSpace::with_alphabets(states, alphabets.to_vec())
    }

    /// `{0,1}^n` in lexicographic order.
    pub fn binary(n: usize) -> Result<Self, NetworkError> {
        StateSpace::product(&vec![2; n])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &State {
        &self.states[index]
    }

    pub fn index_of(&self, state: &State) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn alphabets(&self) -> Option<&[u32]> {
        self.alphabets.as_deref()
    }

    /// True for a complete product space listed in lexicographic order.
    pub fn is_full_product(&self) -> bool {
        match &self.alphabets {
            Some(a) => StateSpace::product(a).is_ok_and(|full| full.states == self.states),
            None => false,
        }
    }

    /// Resolves states to their indices.
    pub fn subset(&self, states: &[State]) -> Result<BTreeSet<usize>, NetworkError> {
        states.iter().map(|s| self.index_of(s).ok_or_else(|| NetworkError::UnknownState(s.clone()))).collect()
    }

    /// Renders an index set as `{(0,0), (1,0)}`.
    pub fn describe(&self, subset: &BTreeSet<usize>) -> String {
        let names: Vec<String> = subset.iter().map(|&i| self.states[i].to_string()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// A total map from a state space to itself, stored as target indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateFunction {
    name: String,
    table: Vec<usize>,
}

impl StateFunction {
    /// Builds a function from its table; `space_len` is the size of the
    /// space it acts on.
    pub fn new(name: impl Into<String>, table: Vec<usize>, space_len: usize) -> Result<Self, NetworkError> {
        let name = name.into();
        if table.len() != space_len {
            return Err(NetworkError::PartialFunction { function: name, expected: space_len, found: table.len() });
        }
        if let Some((state, &target)) = table.iter().enumerate().find(|(_, &t)| t >= space_len) {
            return Err(NetworkError::TargetOutOfRange { function: name, state, target });
        }
        Ok(StateFunction { name, table })
    }

    /// Tabulates `f` over every state of `space`.
    pub fn from_fn(
        name: impl Into<String>,
        space: &StateSpace,
        mut f: impl FnMut(&State) -> State,
    ) -> Result<Self, NetworkError> {
        let name = name.into();
        let mut table = Vec::with_capacity(space.len());
        for s in space.states() {
            let image = f(s);
            match space.index_of(&image) {
                Some(i) => table.push(i),
                None => return Err(NetworkError::LeavesStateSpace { function: name, state: s.clone(), image }),
            }
        }
        Ok(StateFunction { name, table })
    }

    /// Tabulates a map on coordinate tuples.
    pub fn from_coords(
        name: impl Into<String>,
        space: &StateSpace,
        mut f: impl FnMut(&[u32]) -> Vec<u32>,
    ) -> Result<Self, NetworkError> {
        let name = name.into();
        let mut table = Vec::with_capacity(space.len());
        for s in space.states() {
            let coords = s.as_coords().ok_or_else(|| NetworkError::ParseState {
                text: s.to_string(),
                reason: "expected a coordinate tuple".into(),
            })?;
            let image = State::Coords(f(coords));
            match space.index_of(&image) {
                Some(i) => table.push(i),
                None => return Err(NetworkError::LeavesStateSpace { function: name, state: s.clone(), image }),
            }
        }
        Ok(StateFunction { name, table })
    }

    pub fn identity(name: impl Into<String>, space: &StateSpace) -> Self {
        StateFunction { name: name.into(), table: (0..space.len()).collect() }
    }

    pub fn constant(name: impl Into<String>, space: &StateSpace, target: usize) -> Result<Self, NetworkError> {
        StateFunction::new(name, vec![target; space.len()], space.len())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, state: usize) -> usize {
        self.table[state]
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        StateFunction { name: name.into(), table: self.table.clone() }
    }
}

/// A selection probability in `[0, 1]`, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Probability(Rational);

impl Probability {
    pub fn new(value: Rational) -> Result<Self, NetworkError> {
        if value < Rational::zero() || value > Rational::one() {
            return Err(NetworkError::ProbabilityOutOfRange { value });
        }
        Ok(Probability(value))
    }

    pub fn one() -> Self {
        Probability(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl FromStr for Probability {
    type Err = NetworkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Probability::new(parse_rational(s)?)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// A probabilistic regulatory network: a state space, functions on it, and
/// positive selection probabilities summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prn {
    space: StateSpace,
    entries: Vec<(StateFunction, Probability)>,
}

impl Prn {
    /// Validates and builds a network; entry order is preserved.
    pub fn new(space: StateSpace, entries: Vec<(StateFunction, Probability)>) -> Result<Self, NetworkError> {
        if entries.is_empty() {
            return Err(NetworkError::EmptyNetwork);
        }
        let mut total = Rational::zero();
        for (f, p) in &entries {
            if f.table.len() != space.len() {
                return Err(NetworkError::PartialFunction {
                    function: f.name.clone(),
                    expected: space.len(),
                    found: f.table.len(),
                });
            }
            if let Some((state, &target)) = f.table.iter().enumerate().find(|(_, &t)| t >= space.len()) {
                return Err(NetworkError::TargetOutOfRange { function: f.name.clone(), state, target });
            }
            if p.0.is_zero() {
                return Err(NetworkError::ZeroProbability { function: f.name.clone() });
            }
            total += &p.0;
        }
        if !total.is_one() {
            return Err(NetworkError::ProbabilitySum { total });
        }
        Ok(Prn { space, entries })
    }

    /// A finite dynamical system viewed as a one-function network.
    pub fn fds(space: StateSpace, f: StateFunction) -> Result<Self, NetworkError> {
        Prn::new(space, vec![(f, Probability::one())])
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn entries(&self) -> &[(StateFunction, Probability)] {
        &self.entries
    }

    pub fn functions(&self) -> impl ExactSizeIterator<Item = &StateFunction> + '_ {
        self.entries.iter().map(|(f, _)| f)
    }

    pub fn function(&self, i: usize) -> &StateFunction {
        &self.entries[i].0
    }

    pub fn probability(&self, i: usize) -> &Rational {
        &self.entries[i].1 .0
    }

    pub fn function_count(&self) -> usize {
        self.entries.len()
    }

    pub fn state_count(&self) -> usize {
        self.space.len()
    }

    /// The weighted state-space digraph: one arc per state per function,
    /// parallel arcs kept apart.
    pub fn state_digraph(&self) -> WeightedDigraph {
        let mut arcs = Vec::with_capacity(self.space.len() * self.entries.len());
        for u in 0..self.space.len() {
            for (f, p) in &self.entries {
                arcs.push(LabeledArc { from: u, to: f.apply(u), probability: p.0.clone(), function: f.name.clone() });
            }
        }
        WeightedDigraph { space: self.space.clone(), arcs }
    }

    /// Successor lists of the union digraph (all arcs of all functions),
    /// deduplicated and sorted.
    pub fn union_successors(&self) -> Vec<Vec<usize>> {
        (0..self.space.len())
            .map(|u| {
                let set: BTreeSet<usize> = self.functions().map(|f| f.apply(u)).collect();
                set.into_iter().collect()
            })
            .collect()
    }
}

/// An arc `from -> to` contributed by one function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledArc {
    pub from: usize,
    pub to: usize,
    pub probability: Rational,
    pub function: String,
}

/// The labeled state-space digraph of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    pub space: StateSpace,
    pub arcs: Vec<LabeledArc>,
}
