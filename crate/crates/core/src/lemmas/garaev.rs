use serde::{Deserialize, Serialize};

use crate::energy::multiplicative_energy;
use crate::error::{Error, Result};
use crate::field::{diffset, FpSet};
use crate::rational::{self, frac, int, Rational};

/// The sum-product quantity `|A-A|^2 |A|^2 |B|^2 / E_x(A, B)` against
/// `|A|^3 L^{1/9} / log2 L`, `L = min(|B|, p/|A|)`. The constant is not
/// known, so this only reports the empirical constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaraevReport {
    #[serde(with = "rational::as_string")]
    pub lhs: Rational,
    #[serde(rename = "L", with = "rational::as_string")]
    pub l: Rational,
    /// `lhs * log2(L) / (|A|^3 L^{1/9})`; absent when `L < 2`, where
    /// `log2 L < 1` and the normalization is meaningless.
    pub empirical_c: Option<f64>,
    pub degenerate_l: bool,
    pub difference_set: usize,
    pub multiplicative_energy: u128,
}

pub fn garaev_ratio(a: &FpSet, b: &FpSet) -> Result<GaraevReport> {
    a.ensure_same(b)?;
    a.ensure_nonempty("A")?;
    b.ensure_nonempty("B")?;
    let (na, nb) = (a.len() as u128, b.len() as u128);
    let dd = diffset(a, a)?.len() as u128;
    let e = multiplicative_energy(a, b)?.value;
    if e == 0 {
        return Err(Error::Internal(
            "multiplicative energy of nonempty sets is positive".into(),
        ));
    }
    let lhs = frac(dd * dd * na * na * nb * nb, e);
    let l = int(nb).min(frac(a.p(), na));
    let degenerate_l = l < int(2u32);
    let empirical_c = (!degenerate_l).then(|| {
        let lf = rational::to_f64(&l);
        rational::round_real(rational::to_f64(&lhs) * lf.log2() / ((na as f64).powi(3) * lf.powf(1.0 / 9.0)))
    });
    Ok(GaraevReport {
        lhs,
        l,
        empirical_c,
        degenerate_l,
        difference_set: dd as usize,
        multiplicative_energy: e,
    })
}
