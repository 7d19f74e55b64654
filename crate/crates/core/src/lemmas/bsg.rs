use serde::Serialize;

use super::{Check, LemmaReport};
use crate::error::{Error, Result};
use crate::field::{partial_sumset, sumset, FpSet, PairGraph};
use crate::rational::{self, int, Rational};

/// A candidate conclusion of the Balog-Szemerédi-Gowers step: subsets
/// `A' ⊆ A`, `B' ⊆ B` and a number `Q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsgWitness {
    pub a_prime: FpSet,
    pub b_prime: FpSet,
    pub q: u64,
}

/// Checks the four BSG conclusions for a supplied witness, given
/// `|G| >= |A||B| / K`:
///
/// 1. `|A'| >= |A| / (4 sqrt2 K)`
/// 2. `|A| / (8 sqrt2 K^2 ln(e|A|)) <= Q <= 2|A'|`
/// 3. `|B'| >= |A||B| / (8 sqrt2 Q K^2 ln(e|A|))`
/// 4. `|A +_G B|^3 >= |A' + B'| Q |B| / (256 K^3 ln(e|A|))`
///
/// A failed conclusion yields `holds = false`, not an error.
pub fn verify_bsg_witness(
    a: &FpSet,
    b: &FpSet,
    g: &PairGraph,
    k: &Rational,
    w: &BsgWitness,
) -> Result<LemmaReport> {
    a.ensure_same(b)?;
    a.ensure_nonempty("A")?;
    b.ensure_nonempty("B")?;
    if g.left() != a || g.right() != b {
        return Err(Error::Precondition("graph ground sets must be A and B".into()));
    }
    if *k <= int(0u32) {
        return Err(Error::Precondition(format!("K must be positive, got {k}")));
    }
    let (na, nb) = (a.len() as u128, b.len() as u128);
    if int(g.edge_count()) * k < int(na * nb) {
        return Err(Error::Precondition(format!(
            "BSG hypothesis fails: |G| = {} < |A||B|/K",
            g.edge_count()
        )));
    }

    let kf = rational::to_f64(k);
    let sqrt2 = std::f64::consts::SQRT_2;
    let log_term = 1.0 + (na as f64).ln(); // ln(e|A|)
    let a_p = w.a_prime.len() as f64;
    let b_p = w.b_prime.len() as f64;
    let q = w.q as f64;
    let (naf, nbf) = (na as f64, nb as f64);
    let partial = partial_sumset(g).len() as f64;
    let sum_prime = sumset(&w.a_prime, &w.b_prime)?.len() as f64;

    let checks = vec![
        Check::real("|A|/(4sqrt2 K) <= |A'|", naf / (4.0 * sqrt2 * kf), a_p),
        Check::real(
            "|A|/(8sqrt2 K^2 ln(e|A|)) <= Q",
            naf / (8.0 * sqrt2 * kf * kf * log_term),
            q,
        ),
        Check::exact("Q <= 2|A'|", int(w.q), int(2 * w.a_prime.len()), false),
        Check::real(
            "|A||B|/(8sqrt2 Q K^2 ln(e|A|)) <= |B'|",
            if w.q == 0 {
                f64::INFINITY
            } else {
                naf * nbf / (8.0 * sqrt2 * q * kf * kf * log_term)
            },
            b_p,
        ),
        Check::real(
            "|A'+B'| Q|B|/(256K^3 ln(e|A|)) <= |A+_G B|^3",
            sum_prime * q * nbf / (256.0 * kf.powi(3) * log_term),
            partial.powi(3),
        ),
        Check::exact("A' ⊆ A", int(!w.a_prime.is_subset(a) as u32), int(0u32), false),
        Check::exact("B' ⊆ B", int(!w.b_prime.is_subset(b) as u32), int(0u32), false),
    ];
    Ok(
        LemmaReport::new("bsg-witness", checks).with_witness(serde_json::json!({
            "Aprime": w.a_prime.len(),
            "Bprime": w.b_prime.len(),
            "Q": w.q,
            "K": rational::format_rational(k),
            "partial_sumset": partial as u64,
            "sumset_prime": sum_prime as u64,
        })),
    )
}
