//! Exact transition matrices, their powers, and steady states.
//!
//! Entry `(u, v)` of the transition matrix is the total probability of the
//! functions sending `u` to `v`. Everything here is exact except the steady
//! state, which is found by power iteration in `f64`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, to_f64, Rational};
use crate::graph::terminal_components;
use crate::network::{parse_state_list, Prn, StateSpace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarkovError {
    #[error("matrix orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("expected a square matrix of order {order}, row {row} has {len} entries")]
    NotSquare { order: usize, row: usize, len: usize },
    #[error("row {row} sums to {}, expected exactly 1", format_rational(.total))]
    RowSum { row: usize, total: Rational },
    #[error("entry ({row}, {col}) is outside [0, 1]")]
    EntryOutOfRange { row: usize, col: usize },
    #[error("matrix powers start at 1")]
    ZeroPower,
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("stationary distribution is not unique: {} recurrent classes {}", .classes.len(), .classes.join(" "))]
    MultipleRecurrentClasses { classes: Vec<String> },
    #[error("power iteration did not converge in {iterations} steps (last change {change:e})")]
    NoConvergence { iterations: usize, change: f64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A row-stochastic matrix with exact entries, labeled by a state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticMatrix {
    space: StateSpace,
    rows: Vec<Vec<Rational>>,
}

impl StochasticMatrix {
    /// Validates squareness, entry range, and exact unit row sums.
    pub fn from_rows(space: StateSpace, rows: Vec<Vec<Rational>>) -> Result<Self, MarkovError> {
        let order = space.len();
        if rows.len() != order {
            return Err(MarkovError::OrderMismatch { left: order, right: rows.len() });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(MarkovError::NotSquare { order, row: i, len: row.len() });
            }
            if let Some(j) = row.iter().position(|x| x.is_negative() || *x > Rational::one()) {
                return Err(MarkovError::EntryOutOfRange { row: i, col: j });
            }
            let total: Rational = row.iter().sum();
            if !total.is_one() {
                return Err(MarkovError::RowSum { row: i, total });
            }
        }
        Ok(StochasticMatrix { space, rows })
    }

    /// Transition matrix of a network.
    pub fn of(prn: &Prn) -> Self {
        let n = prn.state_count();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (f, p) in prn.entries() {
            for (u, row) in rows.iter_mut().enumerate() {
                row[f.apply(u)] += p.value();
            }
        }
        StochasticMatrix { space: prn.space().clone(), rows }
    }

    pub fn identity(space: StateSpace) -> Self {
        let n = space.len();
        let rows =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        StochasticMatrix { space, rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    fn check_order(&self, other: &Self) -> Result<(), MarkovError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(MarkovError::OrderMismatch { left: self.order(), right: other.order() })
        }
    }

    /// Matrix product `self * other`, labeled by `self`'s space.
    pub fn multiply(&self, other: &Self) -> Result<Self, MarkovError> {
        self.check_order(other)?;
        let n = self.order();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, out) in rows.iter_mut().enumerate() {
            for (k, a) in self.rows[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.rows[k].iter().enumerate() {
                    if !b.is_zero() {
                        out[j] += a * b;
                    }
                }
            }
        }
        Ok(StochasticMatrix { space: self.space.clone(), rows })
    }

    /// Exact `T^n` for `n >= 1`, by repeated squaring.
    pub fn power(&self, n: u32) -> Result<Self, MarkovError> {
        if n == 0 {
            return Err(MarkovError::ZeroPower);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.multiply(&base)?,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.multiply(&base)?;
        }
        Ok(result.expect("n >= 1"))
    }

    /// Entrywise `self - other`.
    pub fn difference(&self, other: &Self) -> Result<Vec<Vec<Rational>>, MarkovError> {
        self.check_order(other)?;
        Ok(self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect())
    }

    /// `max |A_ij - B_ij|` over all entries, exact.
    pub fn max_entry_distance(&self, other: &Self) -> Result<Rational, MarkovError> {
        let diff = self.difference(other)?;
        Ok(diff.iter().flatten().map(Signed::abs).max().unwrap_or_else(Rational::zero))
    }

    /// Successor lists of the positive-entry digraph.
    pub fn support_successors(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|row| (0..row.len()).filter(|&j| !row[j].is_zero()).collect()).collect()
    }

    /// Recurrent classes: terminal strongly connected components of the
    /// positive-entry digraph.
    pub fn recurrent_classes(&self) -> Vec<Vec<usize>> {
        terminal_components(&self.support_successors())
    }

    /// Stationary distribution of a chain with exactly one recurrent class.
    ///
    /// Iterates the lazy chain `(I + T) / 2` from the uniform distribution.
    /// It has the same stationary vectors as `T` and is aperiodic, so
    /// periodic chains converge too. Stops when successive iterates differ by
    /// less than `options.tolerance` in max norm.
    pub fn steady_state(&self, options: &SteadyStateOptions) -> Result<Distribution, MarkovError> {
        if options.tolerance.is_nan() || options.tolerance <= 0.0 {
            return Err(MarkovError::InvalidTolerance);
        }
        let classes = self.recurrent_classes();
        if classes.len() != 1 {
            return Err(MarkovError::MultipleRecurrentClasses {
                classes: classes.iter().map(|c| self.space.describe(&c.iter().copied().collect())).collect(),
            });
        }
        let n = self.order();
        let dense: Vec<Vec<f64>> = self.rows.iter().map(|r| r.iter().map(to_f64).collect()).collect();
        let mut x = vec![1.0 / n as f64; n];
        let mut change = f64::INFINITY;
        for _ in 0..options.max_iterations {
            let mut y = vec![0.0; n];
            for (i, row) in dense.iter().enumerate() {
                let xi = x[i];
                if xi == 0.0 {
                    continue;
                }
                for (j, &t) in row.iter().enumerate() {
                    y[j] += xi * t;
                }
            }
            for (yj, xj) in y.iter_mut().zip(&x) {
                *yj = 0.5 * (*yj + xj);
            }
            let total: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= total);
            change = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = y;
            if change < options.tolerance {
                return Ok(Distribution { space: self.space.clone(), mass: x });
            }
        }
        Err(MarkovError::NoConvergence { iterations: options.max_iterations, change })
    }

    /// Writes the plain-text matrix form:
    ///
    /// ```text
    /// order=2
    /// states (0) (1)
    /// 0.5 0.5
    /// 0 1
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("order={}\n", self.order());
        let states: Vec<String> = self.space.states().iter().map(ToString::to_string).collect();
        out.push_str(&format!("states {}\n", states.join(" ")));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the form written by [`StochasticMatrix::to_text`].
    pub fn parse_text(text: &str) -> Result<Self, MarkovError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, reason: String| MarkovError::Parse { line, reason };

        let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty matrix".into()))?;
        let order: usize = header
            .strip_prefix("order=")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| parse_err(line, "expected `order=<n>`".into()))?;
        let (line, states) = lines.next().ok_or_else(|| parse_err(line, "missing `states` line".into()))?;
        let states = states.strip_prefix("states").ok_or_else(|| parse_err(line, "expected `states ...`".into()))?;
        let states = parse_state_list(states).map_err(|e| parse_err(line, e.to_string()))?;
        if states.len() != order {
            return Err(parse_err(line, format!("{} states listed for order {order}", states.len())));
        }
        let space = StateSpace::new(states).map_err(|e| parse_err(line, e.to_string()))?;
        let mut rows = Vec::with_capacity(order);
        for (line, text) in lines {
            let row = text
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err(line, e.to_string()))?;
            rows.push(row);
        }
        StochasticMatrix::from_rows(space, rows)
    }
}

impl fmt::Display for StochasticMatrix {
    /// Aligned exact decimals, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", padded.join(" "))?;
        }
        Ok(())
    }
}

/// Transition matrix of a network.
pub fn transition_matrix(prn: &Prn) -> StochasticMatrix {
    StochasticMatrix::of(prn)
}

/// `[d_1, .., d_n]` with `d_k = max |(A^k)_ij - (B^k)_ij|`.
///
/// Diagnostic only: the deviation need not stay below the one-step value.
pub fn power_deviation_profile(
    a: &StochasticMatrix,
    b: &StochasticMatrix,
    n: u32,
) -> Result<Vec<Rational>, MarkovError> {
    if n == 0 {
        return Err(MarkovError::ZeroPower);
    }
    a.check_order(b)?;
    let mut pa = a.clone();
    let mut pb = b.clone();
    let mut out = Vec::with_capacity(n as usize);
    for k in 1..=n {
        if k > 1 {
            pa = pa.multiply(a)?;
            pb = pb.multiply(b)?;
        }
        out.push(pa.max_entry_distance(&pb)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        SteadyStateOptions { tolerance: 1e-12, max_iterations: 100_000 }
    }
}

/// A probability vector over a state space.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    space: StateSpace,
    mass: Vec<f64>,
}

impl Distribution {
    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// `max_i |self_i - other_i|`; both vectors are read positionally.
    pub fn max_distance(&self, other: &Distribution) -> f64 {
        self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `max |(x T)_j - x_j|`.
    pub fn residual(&self, t: &StochasticMatrix) -> f64 {
        let n = self.mass.len();
        (0..n)
            .map(|j| {
                let xt: f64 = (0..n).map(|i| self.mass[i] * to_f64(t.entry(i, j))).sum();
                (xt - self.mass[j]).abs()
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, m) in self.space.states().iter().zip(&self.mass) {
            // nine places hides iteration noise
            let fixed = format!("{:.9}", m.max(0.0));
            let trimmed = fixed.trim_end_matches('0');
            let shown = if trimmed.ends_with('.') { format!("{trimmed}0") } else { trimmed.to_string() };
            writeln!(f, "{s} {shown}")?;
        }
        Ok(())
    }
}
