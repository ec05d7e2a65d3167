//! Sparse quantum stabilizer codes decoded by quaternary belief propagation.
//!
//! The crate covers the whole pipeline:
//!
//! - [`pauli`]: phase-free Pauli operators in the binary symplectic picture.
//! - [`code`]: validated stabilizer codes, decorated Tanner graphs, syndromes,
//!   pure errors and logical operators.
//! - [`analysis`]: 4-loops, degree distributions, ensemble rate and the
//!   erasure-channel threshold condition.
//! - [`constructions`]: bicycle codes, CSS codes from self-orthogonal matrices
//!   and a couple of small built-in codes.
//! - [`bp`]: the belief propagation decoder itself.
//! - [`heuristics`]: freezing, random perturbation and collision targeting to
//!   break the symmetries degenerate errors impose on BP.
//! - [`oracle`]: exhaustive marginals, MAP and coset decoding for small codes.
//! - [`sim`]: Monte Carlo block error rates with detected/logical failure split.
//!
//! ```
//! use qldpc_bp::{bp::{ChannelPrior, DecodeConfig, Heuristic}, constructions::builtin, heuristics};
//!
//! let code = builtin("two_qubit_toy").unwrap();
//! let prior = ChannelPrior::depolarizing(2, 0.1).unwrap();
//! let syndrome = code.syndrome(&"IX".parse().unwrap()).unwrap();
//! let config = DecodeConfig { heuristic: Heuristic::Freeze, ..Default::default() };
//! let out = heuristics::decode_with_heuristics(&code, &prior, &syndrome, &config).unwrap();
//! assert!(out.result.converged);
//! ```

pub mod analysis;
pub mod bp;
pub mod code;
pub mod constructions;
pub mod error;
pub mod gf2;
pub mod heuristics;
pub mod oracle;
pub mod pauli;
pub mod sim;

pub use code::{ResidualClass, StabilizerCode, Syndrome};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliOperator, Sign};
