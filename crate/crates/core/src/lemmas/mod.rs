//! Constructive algorithms and checkable reports for the sumset toolkit:
//! Ruzsa's inequalities, popular-sum graphs, dilate selection, quotient-set
//! membership, greedy covering by translates, the Garaev ratio, BSG witness
//! verification and high-energy shift extraction.

mod bsg;
mod cover;
mod dilate;
mod garaev;
mod popular;
mod ruzsa;
mod shifts;

pub use bsg::{verify_bsg_witness, BsgWitness};
pub use cover::{greedy_cover, verify_cover, CoverResult, CoverSign};
pub use dilate::{best_dilate, in_quotient_set, verify_quotient_membership};
pub use garaev::{garaev_ratio, GaraevReport};
pub use popular::popular_sum_graph;
pub use ruzsa::{verify_ruzsa_sums, verify_ruzsa_triangle};
pub use shifts::select_high_energy_shifts;

use serde::{Deserialize, Serialize};

use crate::rational::{Quantity, Rational};

/// Relative slack used whenever an inequality involves floating point
/// (square roots, logarithms, fractional powers).
pub const REAL_SLACK: f64 = 1.0 / (1u64 << 40) as f64;

/// One inequality, normalized to `lhs <= rhs` (or `lhs < rhs` when strict).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub strict: bool,
    pub holds: bool,
}

impl Check {
    pub fn exact(label: &str, lhs: Rational, rhs: Rational, strict: bool) -> Check {
        let holds = if strict { lhs < rhs } else { lhs <= rhs };
        Check {
            label: label.to_string(),
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            strict,
            holds,
        }
    }

    /// Non-strict comparison of floating quantities with [`REAL_SLACK`].
    pub fn real(label: &str, lhs: f64, rhs: f64) -> Check {
        let scale = lhs.abs().max(rhs.abs());
        let holds = lhs.is_finite() && rhs.is_finite() && lhs - rhs <= REAL_SLACK * scale;
        Check {
            label: label.to_string(),
            lhs: Quantity::Real(lhs),
            rhs: Quantity::Real(rhs),
            strict: false,
            holds,
        }
    }
}

/// Outcome of checking one lemma instance. The headline `lhs`/`rhs` pair is
/// the first check; `holds` is the conjunction of all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub name: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub holds: bool,
    pub checks: Vec<Check>,
    /// Relative slack applied to floating comparisons, if any were made.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<serde_json::Value>,
}

impl LemmaReport {
    pub fn new(name: &str, checks: Vec<Check>) -> LemmaReport {
        let first = checks.first().expect("a report carries at least one check");
        let slack = checks
            .iter()
            .any(|c| matches!(c.lhs, Quantity::Real(_)) || matches!(c.rhs, Quantity::Real(_)))
            .then_some(REAL_SLACK);
        LemmaReport {
            name: name.to_string(),
            lhs: first.lhs.clone(),
            rhs: first.rhs.clone(),
            holds: checks.iter().all(|c| c.holds),
            checks,
            slack,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: serde_json::Value) -> LemmaReport {
        self.witness = Some(witness);
        self
    }

    pub fn check(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }
}
