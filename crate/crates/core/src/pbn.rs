//! Probabilistic Boolean networks and their expansion into flat networks.
//!
//! Each gene `i` carries an ordered list of Boolean predictors with selection
//! probabilities summing to one. A transition picks one predictor per gene
//! independently, so the vector function `(f_{k_1}, .., f_{k_n})` is used with
//! probability `c_{k_1} * .. * c_{k_n}`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::exact::Rational;
use crate::network::{NetworkError, Prn, Probability, State, StateFunction, StateSpace};

/// A Boolean predictor for one gene, tabulated over the network's states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predictor {
    name: String,
    table: Vec<bool>,
}

impl Predictor {
    pub fn new(name: impl Into<String>, table: Vec<bool>) -> Self {
        Predictor { name: name.into(), table }
    }

    /// Tabulates `f` over the coordinate tuples of `space`.
    pub fn from_fn(name: impl Into<String>, space: &StateSpace, mut f: impl FnMut(&[u32]) -> bool) -> Self {
        let table = space.states().iter().map(|s| f(s.as_coords().unwrap_or(&[]))).collect();
        Predictor { name: name.into(), table }
    }

    /// Reads a predictor from a string of `0`/`1` digits, one per state.
    pub fn from_bits(name: impl Into<String>, bits: &str) -> Option<Self> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Predictor { name: name.into(), table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn bits(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// A probabilistic Boolean network over a subset of `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pbn {
    space: StateSpace,
    genes: Vec<Vec<(Predictor, Probability)>>,
}

impl Pbn {
    /// A network over the full cube `{0,1}^n`, `n = genes.len()`.
    pub fn new(genes: Vec<Vec<(Predictor, Probability)>>) -> Result<Self, NetworkError> {
        let space = StateSpace::binary(genes.len())?;
        Pbn::on_space(space, genes)
    }

    /// A network over an explicit subset of the cube. Every vector function
    /// must map the subset into itself; this is checked on expansion.
    pub fn on_space(space: StateSpace, genes: Vec<Vec<(Predictor, Probability)>>) -> Result<Self, NetworkError> {
        let n = match space.alphabets() {
            Some(a) if a.iter().all(|&x| x == 2) => a.len(),
            _ => return Err(NetworkError::InvalidAlphabet),
        };
        if genes.len() != n {
            return Err(NetworkError::GeneCount { expected: n, found: genes.len() });
        }
        for (gene, predictors) in genes.iter().enumerate() {
            if predictors.is_empty() {
                return Err(NetworkError::NoPredictors { gene: gene + 1 });
            }
            let mut total = Rational::zero();
            for (pred, p) in predictors {
                if pred.table.len() != space.len() {
                    return Err(NetworkError::PartialFunction {
                        function: pred.name.clone(),
                        expected: space.len(),
                        found: pred.table.len(),
                    });
                }
                if p.value().is_zero() {
                    return Err(NetworkError::GeneProbabilities {
                        gene: gene + 1,
                        source: Box::new(NetworkError::ZeroProbability { function: pred.name.clone() }),
                    });
                }
                total += p.value();
            }
            if !total.is_one() {
                return Err(NetworkError::GeneProbabilities {
                    gene: gene + 1,
                    source: Box::new(NetworkError::ProbabilitySum { total }),
                });
            }
        }
        Ok(Pbn { space, genes })
    }

    pub fn gene_count(&self) -> usize {
        self.genes.len()
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn genes(&self) -> &[Vec<(Predictor, Probability)>] {
        &self.genes
    }

    /// Number of index tuples `k`, i.e. the product of the per-gene
    /// predictor counts.
    pub fn selection_count(&self) -> usize {
        self.genes.iter().map(Vec::len).product()
    }

    /// Expands into a flat network of vector functions.
    ///
    /// Index tuples are visited in lexicographic order; tuples that produce
    /// the same vector function are merged, keeping the first name and
    /// summing probabilities.
    pub fn expand(&self) -> Result<Prn, NetworkError> {
        let mut entries: Vec<(StateFunction, Rational)> = Vec::new();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut k = vec![0usize; self.genes.len()];
        loop {
            let chosen: Vec<&(Predictor, Probability)> = k.iter().zip(&self.genes).map(|(&ki, g)| &g[ki]).collect();
            let prob = chosen.iter().fold(Rational::one(), |acc, (_, p)| acc * p.value());
            let name = format!("({})", chosen.iter().map(|(pred, _)| pred.name.as_str()).collect::<Vec<_>>().join(","));
            let table = self.vector_table(&name, &chosen)?;
            match seen.get(&table) {
                Some(&at) => entries[at].1 += prob,
                None => {
                    seen.insert(table.clone(), entries.len());
                    entries.push((StateFunction::new(name, table, self.space.len())?, prob));
                }
            }
            if !advance(&mut k, &self.genes) {
                break;
            }
        }
        let entries = entries
            .into_iter()
            .map(|(f, p)| Ok((f, Probability::new(p)?)))
            .collect::<Result<Vec<_>, NetworkError>>()?;
        Prn::new(self.space.clone(), entries)
    }

    fn vector_table(&self, name: &str, chosen: &[&(Predictor, Probability)]) -> Result<Vec<usize>, NetworkError> {
        (0..self.space.len())
            .map(|u| {
                let image: Vec<u32> = chosen.iter().map(|(pred, _)| u32::from(pred.table[u])).collect();
                let image = State::Coords(image);
                self.space.index_of(&image).ok_or_else(|| NetworkError::LeavesStateSpace {
                    function: name.to_string(),
                    state: self.space.state(u).clone(),
                    image,
                })
            })
            .collect()
    }
}

/// Odometer step over per-gene predictor indices; false once exhausted.
fn advance<T>(k: &mut [usize], genes: &[Vec<T>]) -> bool {
    for pos in (0..k.len()).rev() {
        k[pos] += 1;
        if k[pos] < genes[pos].len() {
            return true;
        }
        k[pos] = 0;
    }
    false
}
