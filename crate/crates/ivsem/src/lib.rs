//! Exact finite probability spaces over boolean random-choice identifiers,
//! ordered resource algebras built on top of them, an indexed-valuation
//! collecting semantics for a small probabilistic heap language, and semantic
//! checkers for the associated separation-logic proof rules and Hoare
//! triples.
//!
//! All arithmetic is exact rational; distributions compare for equality
//! bit-for-bit.

pub mod error;
pub mod oracle;
pub mod prob;

pub use error::ProbError;
pub use prob::{Cylinder, Event, FinDist, FinProbSpace, Outcome, Prob, RandVar, Rid, RidSupply};
