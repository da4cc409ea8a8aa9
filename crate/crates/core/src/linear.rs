//! Linear networks over prime fields `Z_p`.
//!
//! States of `Z_p^n` are coordinate vectors in lexicographic order, and a
//! matrix `M` acts as `x -> Mx mod p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::network::{NetworkError, Prn, Probability, StateFunction, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("matrix must be square and nonempty, got {rows} rows with lengths {lengths:?}")]
    NotSquare { rows: usize, lengths: Vec<usize> },
    #[error("polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("matrices disagree on field or size: {0}")]
    FieldMismatch(String),
    #[error("enumeration of {count} matrices exceeds the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("cannot parse `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// The field of integers modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, LinearError> {
        let prime = p >= 2 && (2..).take_while(|d: &u64| d * d <= p as u64).all(|d| !(p as u64).is_multiple_of(d));
        if prime {
            Ok(PrimeField { p })
        } else {
            Err(LinearError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        let (mut base, mut exp, mut acc) = (a as u64 % self.p as u64, self.p as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            exp >>= 1;
        }
        acc as u32
    }
}

/// A square matrix over `Z_p`, entries reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldMatrix {
    field: PrimeField,
    n: usize,
    entries: Vec<u32>,
}

impl FieldMatrix {
    pub fn new(p: u32, rows: Vec<Vec<i64>>) -> Result<Self, LinearError> {
        let field = PrimeField::new(p)?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(LinearError::NotSquare { rows: n, lengths: rows.iter().map(Vec::len).collect() });
        }
        let entries = rows.iter().flatten().map(|&x| field.reduce(x)).collect();
        Ok(FieldMatrix { field, n, entries })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        FieldMatrix { field, n, entries: vec![0; n * n] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    /// `M x` for a column vector `x`.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        let f = self.field;
        (0..self.n).map(|i| (0..self.n).fold(0, |acc, j| f.add(acc, f.mul(self.entry(i, j), x[j])))).collect()
    }

    pub fn multiply(&self, other: &FieldMatrix) -> Result<FieldMatrix, LinearError> {
        if self.field != other.field || self.n != other.n {
            return Err(LinearError::FieldMismatch(format!("{self} times {other}")));
        }
        let f = self.field;
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).fold(0, |acc, k| f.add(acc, f.mul(self.entry(i, k), other.entry(k, j))));
            }
        }
        Ok(FieldMatrix { field: f, n, entries })
    }

    /// `det(λI - M)`, by reduction to Hessenberg form.
    pub fn characteristic_polynomial(&self) -> MonicPolynomial {
        let f = self.field;
        let n = self.n;
        let mut h: Vec<Vec<u32>> = self.rows();
        for m in 1..n.saturating_sub(1) {
            let Some(pivot) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
            if pivot != m {
                h.swap(pivot, m);
                for row in h.iter_mut() {
                    row.swap(pivot, m);
                }
            }
            let inv = f.inv(h[m][m - 1]);
            for j in m + 1..n {
                let u = f.mul(h[j][m - 1], inv);
                if u == 0 {
                    continue;
                }
                for k in 0..n {
                    h[j][k] = f.sub(h[j][k], f.mul(u, h[m][k]));
                }
                for row in h.iter_mut() {
                    row[m] = f.add(row[m], f.mul(u, row[j]));
                }
            }
        }
        // polys[k] is the characteristic polynomial of the leading k×k block,
        // coefficients low degree first, monic.
        let mut polys: Vec<Vec<u32>> = vec![vec![1]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![0; m + 2];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = f.add(next[k + 1], c);
                next[k] = f.sub(next[k], f.mul(h[m][m], c));
            }
            let mut chain = 1;
            for i in (0..m).rev() {
                chain = f.mul(chain, h[i + 1][i]);
                let t = f.mul(h[i][m], chain);
                for (k, &c) in polys[i].iter().enumerate() {
                    next[k] = f.sub(next[k], f.mul(t, c));
                }
            }
            polys.push(next);
        }
        let mut coeffs = polys.pop().expect("at least one polynomial");
        coeffs.pop();
        MonicPolynomial { field: f, coeffs }
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}] mod {}", rows.join(","), self.field.p)
    }
}

fn parse_error(text: &str, reason: impl Into<String>) -> LinearError {
    LinearError::Parse { text: text.to_string(), reason: reason.into() }
}

fn split_modulus(text: &str) -> Result<(&str, u32), LinearError> {
    let (body, p) = text.rsplit_once("mod").ok_or_else(|| parse_error(text, "missing `mod p`"))?;
    let p = p.trim().parse::<u32>().map_err(|e| parse_error(text, format!("bad modulus: {e}")))?;
    Ok((body.trim(), p))
}

/// Parses `[[0,1],[1,1]] mod 2`.
impl FromStr for FieldMatrix {
    type Err = LinearError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (body, p) = split_modulus(text)?;
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| parse_error(text, "expected [[...],...]"))?
            .trim();
        let mut rows = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let open = rest.strip_prefix('[').ok_or_else(|| parse_error(text, "expected `[` to open a row"))?;
            let close = open.find(']').ok_or_else(|| parse_error(text, "unclosed row"))?;
            let row = open[..close]
                .split(',')
                .map(|x| {
                    x.trim().parse::<i64>().map_err(|e| parse_error(text, format!("bad entry `{}`: {e}", x.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
            rest = open[close + 1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        FieldMatrix::new(p, rows)
    }
}

/// `λ^n + a_{n-1} λ^{n-1} + ... + a_0` over `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonicPolynomial {
    field: PrimeField,
    /// `a_0 .. a_{n-1}`
    coeffs: Vec<u32>,
}

impl MonicPolynomial {
    pub fn new(p: u32, coeffs: Vec<i64>) -> Result<Self, LinearError> {
        let field = PrimeField::new(p)?;
        Ok(MonicPolynomial { field, coeffs: coeffs.into_iter().map(|c| field.reduce(c)).collect() })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_0 .. a_{n-1}`; the leading 1 is implicit.
    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }
}

impl fmt::Display for MonicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |k: usize| match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let mut parts = vec![term(self.degree())];
        for k in (0..self.degree()).rev() {
            let c = self.coeffs[k];
            match (c, k) {
                (0, _) => {}
                (c, 0) => parts.push(c.to_string()),
                (1, k) => parts.push(term(k)),
                (c, k) => parts.push(format!("{c}{}", term(k))),
            }
        }
        let body = if self.degree() == 0 { "1".to_string() } else { parts.join("+") };
        write!(f, "{body} mod {}", self.field.p)
    }
}

/// Parses `x^2+x+1 mod 2`; `λ` may stand for `x`, and coefficients may be
/// negative or repeated.
impl FromStr for MonicPolynomial {
    type Err = LinearError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (body, p) = split_modulus(text)?;
        let field = PrimeField::new(p)?;
        let body: String = body.replace('λ', "x").chars().filter(|c| !c.is_whitespace()).collect();
        if body.is_empty() {
            return Err(parse_error(text, "empty polynomial"));
        }
        let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
        let mut i = 0;
        let bytes = body.as_bytes();
        while i < bytes.len() {
            let start = i;
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            }
            let end = body[i..].find(['+', '-']).map_or(body.len(), |k| i + k);
            let term = &body[i..end];
            if term.is_empty() {
                return Err(parse_error(text, format!("empty term at {start}")));
            }
            let (coef, power) = match term.find('x') {
                None => (term, 0usize),
                Some(k) => {
                    let power = match &term[k + 1..] {
                        "" => 1,
                        rest => rest
                            .strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(|| parse_error(text, format!("bad exponent in `{term}`")))?,
                    };
                    (term[..k].trim_end_matches('*'), power)
                }
            };
            let coef: i64 = if coef.is_empty() {
                1
            } else {
                coef.parse().map_err(|_| parse_error(text, format!("bad coefficient in `{term}`")))?
            };
            *terms.entry(power).or_default() += sign * coef;
            i = end;
        }
        let degree = terms.iter().rev().find(|(_, &c)| field.reduce(c) != 0).map_or(0, |(&k, _)| k);
        if field.reduce(terms[&degree]) != 1 {
            return Err(parse_error(text, "leading coefficient must be 1"));
        }
        let coeffs = (0..degree).map(|k| field.reduce(terms.get(&k).copied().unwrap_or(0))).collect();
        Ok(MonicPolynomial { field, coeffs })
    }
}

/// Standard companion form: ones on the subdiagonal and
/// `(-a_0, ..., -a_{n-1})` down the last column.
pub fn companion_matrix(q: &MonicPolynomial) -> Result<FieldMatrix, LinearError> {
    let n = q.degree();
    if n == 0 {
        return Err(LinearError::ZeroDegree);
    }
    let f = q.field;
    let mut m = FieldMatrix::zero(f, n);
    for i in 1..n {
        m.entries[i * n + i - 1] = 1;
    }
    for (i, &a) in q.coeffs.iter().enumerate() {
        m.entries[i * n + n - 1] = f.neg(a);
    }
    Ok(m)
}

/// `Z_p^n` in lexicographic order.
pub fn vector_space(field: PrimeField, n: usize) -> Result<StateSpace, LinearError> {
    Ok(StateSpace::product(&vec![field.modulus(); n])?)
}

/// The function `x -> Mx` on `Z_p^n`.
pub fn linear_map_fds(m: &FieldMatrix, name: &str) -> Result<StateFunction, LinearError> {
    let space = vector_space(m.field, m.n)?;
    Ok(StateFunction::from_coords(name, &space, |x| m.apply(x))?)
}

/// The network whose `i`-th function is `x -> M_i x`, named `f1, f2, ...`.
pub fn linear_prn(matrices: &[FieldMatrix], probs: Vec<Probability>) -> Result<Prn, LinearError> {
    let first = matrices.first().ok_or(NetworkError::EmptyNetwork)?;
    if let Some(m) = matrices.iter().find(|m| m.field != first.field || m.n != first.n) {
        return Err(LinearError::FieldMismatch(format!("{m} next to {first}")));
    }
    let space = vector_space(first.field, first.n)?;
    let functions = matrices
        .iter()
        .enumerate()
        .map(|(i, m)| linear_map_fds(m, &format!("f{}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(crate::algebra::superpose(space, functions, probs)?)
}

/// Every `n×n` matrix over `Z_p` in lexicographic order of row-major entries.
pub fn enumerate_matrices(p: u32, n: usize, cap: u128) -> Result<Vec<FieldMatrix>, LinearError> {
    let field = PrimeField::new(p)?;
    let count = (p as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(LinearError::CapExceeded { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut entries = vec![0u32; n * n];
    loop {
        out.push(FieldMatrix { field, n, entries: entries.clone() });
        let Some(k) = (0..n * n).rev().find(|&k| entries[k] + 1 < p) else { break };
        entries[k] += 1;
        for e in &mut entries[k + 1..] {
            *e = 0;
        }
    }
    Ok(out)
}

/// One FDS per matrix, in [`enumerate_matrices`] order, named by the matrix.
pub fn enumerate_linear_fds(p: u32, n: usize, cap: u128) -> Result<Vec<StateFunction>, LinearError> {
    enumerate_matrices(p, n, cap)?.iter().map(|m| linear_map_fds(m, &m.to_string())).collect()
}

/// Matrices grouped by characteristic polynomial.
pub fn classify_by_characteristic_polynomial(
    p: u32,
    n: usize,
    cap: u128,
) -> Result<BTreeMap<MonicPolynomial, Vec<FieldMatrix>>, LinearError> {
    let mut classes: BTreeMap<MonicPolynomial, Vec<FieldMatrix>> = BTreeMap::new();
    for m in enumerate_matrices(p, n, cap)? {
        classes.entry(m.characteristic_polynomial()).or_default().push(m);
    }
    Ok(classes)
}

/// One matrix over `Z_2` for each monic quadratic: the zero matrix for `x^2`,
/// `diag(0,1)` for `x^2+x`, the identity for `x^2+1`, and `[[0,1],[1,1]]`
/// for `x^2+x+1`. Only the last is in companion form.
pub fn quadratic_representatives() -> Vec<(MonicPolynomial, FieldMatrix)> {
    [
        ("x^2 mod 2", "[[0,0],[0,0]] mod 2"),
        ("x^2+x mod 2", "[[0,0],[0,1]] mod 2"),
        ("x^2+1 mod 2", "[[1,0],[0,1]] mod 2"),
        ("x^2+x+1 mod 2", "[[0,1],[1,1]] mod 2"),
    ]
    .iter()
    .map(|(q, m)| (q.parse().expect("valid polynomial"), m.parse().expect("valid matrix")))
    .collect()
}
