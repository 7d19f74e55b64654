//! Experiment harness: set families, parameter sweeps measuring
//! `sum_{b in B} E+(A, bA)` against the `C p^{-gamma c}` bound, exponent
//! fitting and record output.

mod emit;
mod family;
mod fit;
mod sweep;

pub use emit::{emit_records, read_records, Format, CSV_COLUMNS};
pub use family::Family;
pub use fit::{fit_exponent, FitResult};
pub use sweep::{
    mix_seed, planned_size, run_sweep, toml_pairs, CellFailure, ExperimentRecord, SweepConfig, SweepOutput,
    Theorem,
};

use crate::error::Result;
use crate::field::{setspec, FpSet, Prime};

/// Materializes a set literal or generator spec (see [`setspec`]); `seed`
/// drives `random:` specs that omit their own seed.
pub fn generate_set(p: &Prime, spec: &str, seed: u64) -> Result<FpSet> {
    setspec::parse_set(p, spec, seed)
}
