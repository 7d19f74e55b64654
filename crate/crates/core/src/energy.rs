//! Additive and multiplicative energy, representation functions and the
//! shift-energy aggregate `S = sum_{b in B} E+(A, bA)`.
//!
//! Every fast routine has a brute-force counterpart (`*_naive`) that counts
//! quadruples directly; the two are kept independent so tests can compare
//! them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::conv::cyclic_convolve;
use crate::field::{FpSet, RepFn};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Convolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnergyValue {
    pub value: u128,
    pub method: Method,
}

/// How a representation function is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepRoute {
    /// Pick by cost.
    Auto,
    /// Enumerate all pairs.
    Pairs,
    /// Convolve indicator vectors.
    Convolution,
}

fn pairs_cheaper(pairs: usize, n: usize) -> bool {
    let log = usize::BITS - n.leading_zeros();
    pairs <= n.saturating_mul(log as usize).saturating_mul(4)
}

/// `counts[d] = #{(x, y) in X × Y : x - y = d}`.
pub fn rep_fn_diff(x: &FpSet, y: &FpSet) -> Result<RepFn> {
    rep_fn_diff_via(x, y, RepRoute::Auto)
}

pub fn rep_fn_diff_via(x: &FpSet, y: &FpSet, route: RepRoute) -> Result<RepFn> {
    x.ensure_same(y)?;
    let p = x.modulus();
    let n = p.size();
    let use_pairs = match route {
        RepRoute::Auto => pairs_cheaper(x.len() * y.len(), n),
        RepRoute::Pairs => true,
        RepRoute::Convolution => false,
    };
    if use_pairs {
        let mut counts = vec![0u64; n];
        let ys = y.to_vec();
        for a in x.iter() {
            for &b in &ys {
                counts[p.sub(a, b) as usize] += 1;
            }
        }
        Ok(RepFn::new(counts))
    } else {
        let neg_y = crate::field::negate(y);
        Ok(RepFn::new(cyclic_convolve(&x.indicator(), &neg_y.indicator())?))
    }
}

/// `counts[s] = #{(x, y) in X × Y : x + y = s}`.
pub fn rep_fn_sum(x: &FpSet, y: &FpSet) -> Result<RepFn> {
    x.ensure_same(y)?;
    rep_fn_diff(x, &crate::field::negate(y))
}

/// Fibers of `(x, y) -> x + xi*y`: `f(s) = #{(x, y) : x + y xi = s}`.
pub fn fiber_counts(x: &FpSet, y: &FpSet, xi: u64) -> Result<RepFn> {
    x.ensure_same(y)?;
    let p = x.modulus();
    let xi = p.check_element(xi)?;
    let mut counts = vec![0u64; p.size()];
    let scaled: Vec<u64> = y.iter().map(|v| p.mul(v, xi)).collect();
    for a in x.iter() {
        for &t in &scaled {
            counts[p.add(a, t) as usize] += 1;
        }
    }
    Ok(RepFn::new(counts))
}

/// `sum_{s in Z_p} f(s)^2` for the fibers of `x + xi*y`. For `xi != 0` this
/// is `E+(X, xi Y)`.
pub fn collision_count(x: &FpSet, y: &FpSet, xi: u64) -> Result<u128> {
    Ok(fiber_counts(x, y, xi)?.sum_squares())
}

fn ensure_nonempty(a: &FpSet, b: &FpSet) -> Result<()> {
    a.ensure_same(b)?;
    a.ensure_nonempty("A")?;
    b.ensure_nonempty("B")
}

/// `E+(A, B) = sum_d r_{A-A}(d) r_{B-B}(d)`.
pub fn additive_energy(a: &FpSet, b: &FpSet) -> Result<EnergyValue> {
    ensure_nonempty(a, b)?;
    let ra = rep_fn_diff(a, a)?;
    let rb = if a == b { ra.clone() } else { rep_fn_diff(b, b)? };
    Ok(EnergyValue {
        value: ra.dot(&rb)?,
        method: Method::Convolution,
    })
}

/// Second formula for the same quantity: `E+(A, B) = sum_s r_{A-B}(s)^2`.
pub fn additive_energy_cross(a: &FpSet, b: &FpSet) -> Result<u128> {
    ensure_nonempty(a, b)?;
    Ok(rep_fn_diff(a, b)?.sum_squares())
}

/// Counts quadruples `a1 - a2 = b1 - b2` directly, in `O(|A|^2 |B|)`.
pub fn additive_energy_naive(a: &FpSet, b: &FpSet) -> Result<EnergyValue> {
    ensure_nonempty(a, b)?;
    let p = a.modulus();
    let av = a.to_vec();
    let bv = b.to_vec();
    let mut count = 0u128;
    for &a1 in &av {
        for &a2 in &av {
            let d = p.sub(a1, a2);
            for &b1 in &bv {
                if b.contains(p.sub(b1, d)) {
                    count += 1;
                }
            }
        }
    }
    Ok(EnergyValue {
        value: count,
        method: Method::Naive,
    })
}

/// Number of ordered pairs in `X × X` with product zero.
fn zero_product_pairs(x: &FpSet) -> u128 {
    if x.contains(0) {
        2 * x.len() as u128 - 1
    } else {
        0
    }
}

/// Product representation function of `X^* · X^*` in discrete-log
/// coordinates: `c[k] = #{(x1, x2) : log x1 + log x2 = k mod (p - 1)}`.
fn log_square_counts(x: &FpSet) -> Result<Vec<u64>> {
    let p = x.modulus();
    let logs = p.log_table();
    let order = p.size() - 1;
    let nz: Vec<usize> = x
        .iter()
        .filter(|&v| v != 0)
        .map(|v| logs.log[v as usize] as usize)
        .collect();
    if pairs_cheaper(nz.len() * nz.len(), order) {
        let mut c = vec![0u64; order];
        for &i in &nz {
            for &j in &nz {
                let k = i + j;
                c[if k >= order { k - order } else { k }] += 1;
            }
        }
        Ok(c)
    } else {
        let mut ind = vec![0u64; order];
        for &i in &nz {
            ind[i] = 1;
        }
        cyclic_convolve(&ind, &ind)
    }
}

/// `E_x(A, B) = #{a1 a2 = b1 b2}`, including the zero-product quadruples.
pub fn multiplicative_energy(a: &FpSet, b: &FpSet) -> Result<EnergyValue> {
    ensure_nonempty(a, b)?;
    let zero = zero_product_pairs(a) * zero_product_pairs(b);
    let ca = log_square_counts(a)?;
    let cb = if a == b { ca.clone() } else { log_square_counts(b)? };
    let nonzero: u128 = ca.iter().zip(&cb).map(|(&x, &y)| x as u128 * y as u128).sum();
    Ok(EnergyValue {
        value: zero + nonzero,
        method: Method::Convolution,
    })
}

/// Counts quadruples `a1 a2 = b1 b2` directly.
pub fn multiplicative_energy_naive(a: &FpSet, b: &FpSet) -> Result<EnergyValue> {
    ensure_nonempty(a, b)?;
    let p = a.modulus();
    let av = a.to_vec();
    let bv = b.to_vec();
    let mut count = 0u128;
    for &a1 in &av {
        for &a2 in &av {
            let t = p.mul(a1, a2);
            for &b1 in &bv {
                count += match p.inv(b1) {
                    Some(inv) => b.contains(p.mul(t, inv)) as u128,
                    None if t == 0 => bv.len() as u128,
                    None => 0,
                };
            }
        }
    }
    Ok(EnergyValue {
        value: count,
        method: Method::Naive,
    })
}

/// `S = sum_{b in B} E+(A, bA)` with the per-shift breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftEnergySum {
    pub total: u128,
    pub per_shift: BTreeMap<u64, u128>,
    /// `S / (|A|^3 |B|)`.
    #[serde(with = "rational::as_string")]
    pub normalized: Rational,
}

fn check_shift_inputs(a: &FpSet, b: &FpSet) -> Result<()> {
    ensure_nonempty(a, b)?;
    if b.contains(0) {
        return Err(Error::Precondition(
            "shift set B must lie in Z_p^* (0 in B)".into(),
        ));
    }
    Ok(())
}

fn assemble(a: &FpSet, b: &FpSet, per_shift: BTreeMap<u64, u128>) -> ShiftEnergySum {
    let total: u128 = per_shift.values().sum();
    let n = a.len() as u128;
    let normalized = rational::frac(total, n * n * n * b.len() as u128);
    ShiftEnergySum {
        total,
        per_shift,
        normalized,
    }
}

/// One representation function `r = r_{A-A}`, then
/// `E+(A, bA) = sum_d r(d) r(d / b)` for each shift, in `O(|supp r|)`.
pub fn shift_energy_sum(a: &FpSet, b: &FpSet) -> Result<ShiftEnergySum> {
    check_shift_inputs(a, b)?;
    let p = a.modulus();
    let r = rep_fn_diff(a, a)?;
    let support: Vec<(u64, u64)> = r
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| (d as u64, c))
        .collect();
    let counts = r.counts();
    let shifts = b.to_vec();
    let energies: Vec<u128> = shifts
        .par_iter()
        .map(|&s| {
            let s_inv = p.inv(s).expect("B excludes 0");
            support
                .iter()
                .map(|&(d, c)| c as u128 * counts[p.mul(d, s_inv) as usize] as u128)
                .sum()
        })
        .collect();
    Ok(assemble(a, b, shifts.into_iter().zip(energies).collect()))
}

/// Reference: a full naive energy computation for each shift.
pub fn shift_energy_sum_naive(a: &FpSet, b: &FpSet) -> Result<ShiftEnergySum> {
    check_shift_inputs(a, b)?;
    let mut per_shift = BTreeMap::new();
    for s in b.iter() {
        let sa = crate::field::dilate(s, a)?;
        per_shift.insert(s, additive_energy_naive(a, &sa)?.value);
    }
    Ok(assemble(a, b, per_shift))
}
