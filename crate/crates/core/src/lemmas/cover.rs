use serde::{Deserialize, Serialize};

use super::{Check, LemmaReport};
use crate::energy::rep_fn_diff;
use crate::error::{Error, Result};
use crate::field::{diffset, sumset, translate, FpSet};
use crate::rational::{self, frac, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverSign {
    /// `|X1 + X2| <= |X1 - X2|`.
    Plus,
    Minus,
}

/// Translates `t_1, ..., t_n` such that `∪ (t_i + X2)` meets all but an
/// `eps` fraction of `X1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverResult {
    pub translates: Vec<u64>,
    pub sign: CoverSign,
    /// `|X1 ∩ ∪ (t_i + X2)|`.
    pub covered: usize,
    pub target: usize,
    #[serde(with = "rational::as_string")]
    pub epsilon: Rational,
    /// `min(|X1 + X2|, |X1 - X2|) / |X2|`.
    #[serde(with = "rational::as_string")]
    pub doubling: Rational,
    /// `ln(1/eps) * doubling`.
    #[serde(with = "rational::as_real")]
    pub bound: f64,
}

impl CoverResult {
    pub fn bound_ceiling(&self) -> u64 {
        self.bound.ceil() as u64
    }
}

/// Greedy peeling: while more than an `eps` fraction of `X1` is uncovered,
/// add the translate `t + X2` that meets the most uncovered points (smallest
/// `t` on ties). Each round removes at least a `1/K` fraction of what is
/// left, `K = min(|X1+X2|, |X1-X2|) / |X2|`, so at most
/// `ceil(K ln(1/eps))` rounds run.
pub fn greedy_cover(x1: &FpSet, x2: &FpSet, eps: &Rational) -> Result<CoverResult> {
    x1.ensure_same(x2)?;
    x1.ensure_nonempty("X1")?;
    x2.ensure_nonempty("X2")?;
    if *eps <= int(0u32) || *eps >= int(1u32) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    let plus = sumset(x1, x2)?.len();
    let minus = diffset(x1, x2)?.len();
    let sign = if plus <= minus {
        CoverSign::Plus
    } else {
        CoverSign::Minus
    };
    let doubling = frac(plus.min(minus), x2.len());
    let bound = (1.0 / rational::to_f64(eps)).ln() * rational::to_f64(&doubling);

    let stop_below = eps * int(x1.len());
    let mut remaining = x1.clone();
    let mut translates = Vec::new();
    while int(remaining.len()) >= stop_below {
        // r(t) = |remaining ∩ (t + X2)|; the first maximum is the smallest t.
        let r = rep_fn_diff(&remaining, x2)?;
        let (t, best) =
            r.counts().iter().enumerate().fold(
                (0usize, 0u64),
                |acc, (t, &c)| if c > acc.1 { (t, c) } else { acc },
            );
        if best == 0 {
            return Err(Error::Internal("greedy cover made no progress".into()));
        }
        translates.push(t as u64);
        remaining = remaining.difference(&translate(t as u64, x2)?)?;
    }
    Ok(CoverResult {
        translates,
        sign,
        covered: x1.len() - remaining.len(),
        target: x1.len(),
        epsilon: eps.clone(),
        doubling,
        bound,
    })
}

/// Runs [`greedy_cover`] and checks its two guarantees independently of
/// the loop: the recomputed union covers at least `(1 - eps)|X1|`, and the
/// number of translates is at most `ceil(bound)`.
pub fn verify_cover(x1: &FpSet, x2: &FpSet, eps: &Rational) -> Result<(CoverResult, LemmaReport)> {
    let cover = greedy_cover(x1, x2, eps)?;
    let mut union = FpSet::empty(x1.modulus());
    for &t in &cover.translates {
        union = union.union(&translate(t, x2)?)?;
    }
    let covered = x1.intersection_len(&union)?;
    let checks = vec![
        Check::exact(
            "#translates <= ceil(ln(1/eps) min(|X1+X2|,|X1-X2|)/|X2|)",
            int(cover.translates.len()),
            int(cover.bound_ceiling()),
            false,
        ),
        Check::exact(
            "(1-eps)|X1| <= |X1 ∩ ∪(t+X2)|",
            (int(1u32) - eps) * int(x1.len()),
            int(covered),
            false,
        ),
    ];
    let report = LemmaReport::new("cover", checks)
        .with_witness(serde_json::to_value(&cover).expect("cover result serializes"));
    Ok((cover, report))
}
