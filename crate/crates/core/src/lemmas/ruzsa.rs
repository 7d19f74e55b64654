use num_bigint::BigInt;
use num_traits::One;

use super::{Check, LemmaReport};
use crate::error::{Error, Result};
use crate::field::{diffset, sumset, FpSet};
use crate::rational::{frac, int};

/// `|X - Z| <= |X - Y| |Y - Z| / |Y|`.
pub fn verify_ruzsa_triangle(x: &FpSet, y: &FpSet, z: &FpSet) -> Result<LemmaReport> {
    x.ensure_same(y)?;
    y.ensure_same(z)?;
    x.ensure_nonempty("X")?;
    y.ensure_nonempty("Y")?;
    z.ensure_nonempty("Z")?;
    let xz = diffset(x, z)?.len();
    let xy = diffset(x, y)?.len();
    let yz = diffset(y, z)?.len();
    let check = Check::exact("|X-Z| <= |X-Y||Y-Z|/|Y|", int(xz), frac(xy * yz, y.len()), false);
    Ok(LemmaReport::new("ruzsa-triangle", vec![check]))
}

/// `|X_1 + ... + X_k| <= prod |Y + X_i| / |Y|^{k-1}`.
pub fn verify_ruzsa_sums(y: &FpSet, xs: &[FpSet]) -> Result<LemmaReport> {
    let (first, rest) = xs.split_first().ok_or(Error::Empty("X list"))?;
    y.ensure_nonempty("Y")?;
    for x in xs {
        y.ensure_same(x)?;
        x.ensure_nonempty("X_i")?;
    }
    let mut total = first.clone();
    for x in rest {
        total = sumset(&total, x)?;
    }
    let mut num = BigInt::one();
    for x in xs {
        num *= sumset(y, x)?.len();
    }
    let den = BigInt::from(y.len()).pow(xs.len() as u32 - 1);
    let check = Check::exact(
        "|X_1+...+X_k| <= prod|Y+X_i|/|Y|^(k-1)",
        int(total.len()),
        crate::rational::Rational::new(num, den),
        false,
    );
    Ok(LemmaReport::new("ruzsa-sums", vec![check]).with_witness(serde_json::json!({ "k": xs.len() })))
}
