//! Exact additive combinatorics over prime fields.
//!
//! * [`field`]: primes, dense subsets of `Z_p`, set algebra, exact convolution.
//! * [`energy`]: additive and multiplicative energies and the shift-energy sum
//!   `sum_{b in B} E+(A, bA)`.
//! * [`lemmas`]: constructive algorithms and inequality checkers for the Ruzsa,
//!   popular-sum, dilate-selection, quotient-set, covering, Garaev and BSG toolkit.
//! * [`harness`]: set families, parameter sweeps, exponent fitting, CSV/JSONL output.
//! * [`cli`]: the `afc` command-line front end.

pub mod cli;
pub mod energy;
pub mod error;
pub mod field;
pub mod harness;
pub mod lemmas;
pub mod rational;

pub use error::{Error, Result};
pub use field::{FpSet, PairGraph, Prime, RepFn};

/// Modulus cap, honouring the `AFC_MAX_P` environment override.
pub fn modulus_cap() -> u64 {
    std::env::var("AFC_MAX_P")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(field::DEFAULT_MAX_P)
}
