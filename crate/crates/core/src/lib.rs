//! Probabilistic regulatory networks: finite state sets carrying a family of
//! functions, each selected with a fixed probability.
//!
//! A network induces a Markov chain whose transition probability from `u` to
//! `v` is the total probability of the functions sending `u` to `v`. This
//! crate builds networks exactly (rational probabilities), computes their
//! transition matrices and long-run behaviour, and studies maps between
//! them: homomorphisms, their distortion ε, projections, invariant
//! subnetworks, sums, and products.
//!
//! ```
//! use prn::network::{Prn, Probability, StateFunction, StateSpace};
//! use prn::markov::StochasticMatrix;
//!
//! let space = StateSpace::binary(1)?;
//! let stay = StateFunction::identity("stay", &space);
//! let flip = StateFunction::from_coords("flip", &space, |x| vec![1 - x[0]])?;
//! let prn = Prn::new(space, vec![(stay, ".75".parse()?), (flip, ".25".parse()?)])?;
//! let t = StochasticMatrix::of(&prn);
//! assert_eq!(t.to_string(), "0.75 0.25\n0.25 0.75\n");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod algebra;
pub mod dot;
pub mod exact;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod linear;
pub mod markov;
pub mod morphism;
pub mod network;
pub mod pbn;
pub mod structure;

pub use exact::Rational;
pub use markov::StochasticMatrix;
pub use morphism::Morphism;
pub use network::{Prn, Probability, State, StateFunction, StateSpace};
pub use pbn::{Pbn, Predictor};
