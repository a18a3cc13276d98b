//! Exact arithmetic for quantum cluster algebras.
//!
//! The crate mutates seeds, multiplies and divides elements of quantum torus
//! algebras exactly, transports elements along mutation paths, tracks C- and
//! G-matrices, and certifies when an element is universally polynomial.
//!
//! Everything here is `no_std` with `alloc`; IO, JSON and the command line
//! live in the companion `qcluster` crate.

#![no_std]

extern crate alloc;

pub mod cg;
pub mod classical;
pub mod error;
pub mod folding;
pub mod matrix;
pub mod mutation;
pub mod polycheck;
pub mod qtorus;
pub mod scenarios;
pub mod seed;

pub use cg::{CGState, SignCoherenceReport};
pub use classical::{LaurentPoly, SfFraction};
pub use error::{Error, Result};
pub use folding::FoldingSpec;
pub use mutation::{Limits, TrackedElement};
pub use polycheck::{ExchangeGraph, ExchangeGraphNode, Status, Verdict};
pub use qtorus::{CoefficientClass, Exponent, QCoeff, QElement, QuantumTorus};
pub use seed::{MutationPath, Seed};
