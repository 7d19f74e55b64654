use crate::energy::shift_energy_sum;
use crate::error::Result;
use crate::field::FpSet;

/// `B_1 = {b ∈ B : E+(A, bA) > threshold}`.
pub fn select_high_energy_shifts(a: &FpSet, b: &FpSet, threshold: u128) -> Result<FpSet> {
    let sums = shift_energy_sum(a, b)?;
    FpSet::from_elements(
        a.modulus(),
        sums.per_shift
            .into_iter()
            .filter(|&(_, e)| e > threshold)
            .map(|(s, _)| s),
    )
}
