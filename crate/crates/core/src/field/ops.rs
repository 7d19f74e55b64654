//! Set algebra over `Z_p`: sums, differences, products, dilates, translates
//! and the quotient set `Q[X, Y]`.

use crate::error::{Error, Result};
use crate::field::bitmap::Bitmap;
use crate::field::conv::cyclic_convolve;
use crate::field::set::FpSet;

/// Above this many shifts, a cyclic sum of bitmaps goes through
/// convolution instead of repeated rotate-and-or.
const ROTATE_MAX_SHIFTS: usize = 4096;

/// Support of the cyclic sum of two bitmaps of the same length `n`.
pub(crate) fn cyclic_sum(a: &Bitmap, b: &Bitmap) -> Bitmap {
    let n = a.len();
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca == 0 || cb == 0 {
        return Bitmap::new(n);
    }
    // Any s has s - b meeting a once |a| + |b| > n.
    if ca + cb > n {
        return Bitmap::full(n);
    }
    let (small, large) = if ca <= cb { (a, b) } else { (b, a) };
    let small_len = ca.min(cb);
    let mut out = Bitmap::new(n);
    if ca.saturating_mul(cb) <= n / 8 + 64 {
        let ys: Vec<usize> = large.iter_ones().collect();
        for x in small.iter_ones() {
            for &y in &ys {
                let s = x + y;
                out.set(if s >= n { s - n } else { s });
            }
        }
    } else if small_len <= ROTATE_MAX_SHIFTS {
        for x in small.iter_ones() {
            out.or_rotated(large, x);
        }
    } else {
        let ua = bitmap_indicator(a);
        let ub = bitmap_indicator(b);
        let w = cyclic_convolve(&ua, &ub).expect("indicator convolution fits in u64");
        for (s, &c) in w.iter().enumerate() {
            if c != 0 {
                out.set(s);
            }
        }
    }
    out
}

fn bitmap_indicator(b: &Bitmap) -> Vec<u64> {
    let mut v = vec![0u64; b.len()];
    for i in b.iter_ones() {
        v[i] = 1;
    }
    v
}

/// `X + Y = {x + y}`.
pub fn sumset(x: &FpSet, y: &FpSet) -> Result<FpSet> {
    x.ensure_same(y)?;
    Ok(FpSet::from_bitmap(
        x.modulus(),
        cyclic_sum(x.bitmap(), y.bitmap()),
    ))
}

/// `-X`.
pub fn negate(x: &FpSet) -> FpSet {
    let p = x.modulus();
    let mut m = Bitmap::new(p.size());
    for v in x.iter() {
        m.set(p.neg(v) as usize);
    }
    FpSet::from_bitmap(p, m)
}

/// `X - Y = {x - y}`.
pub fn diffset(x: &FpSet, y: &FpSet) -> Result<FpSet> {
    x.ensure_same(y)?;
    sumset(x, &negate(y))
}

/// `b * X = {b x}`. For `b = 0` the result is `{0}` (or empty for empty `X`).
pub fn dilate(b: u64, x: &FpSet) -> Result<FpSet> {
    let p = x.modulus();
    let b = p.check_element(b)?;
    let mut m = Bitmap::new(p.size());
    if b == 0 {
        if !x.is_empty() {
            m.set(0);
        }
    } else {
        for v in x.iter() {
            m.set(p.mul(b, v) as usize);
        }
    }
    Ok(FpSet::from_bitmap(p, m))
}

/// `h + X = {h + x}`.
pub fn translate(h: u64, x: &FpSet) -> Result<FpSet> {
    let p = x.modulus();
    let h = p.check_element(h)?;
    let mut m = Bitmap::new(p.size());
    m.or_rotated(x.bitmap(), h as usize);
    Ok(FpSet::from_bitmap(p, m))
}

/// `{x^{-1} : x in X, x != 0}`.
pub fn reciprocals(x: &FpSet) -> FpSet {
    let p = x.modulus();
    let mut m = Bitmap::new(p.size());
    for v in x.iter().filter(|&v| v != 0) {
        m.set(p.inv(v).expect("nonzero") as usize);
    }
    FpSet::from_bitmap(p, m)
}

/// `XY = {x y}`. Nonzero products are computed as a cyclic sum of discrete
/// logarithms in `Z_{p-1}` once the pair count is large.
pub fn prodset(x: &FpSet, y: &FpSet) -> Result<FpSet> {
    x.ensure_same(y)?;
    let p = x.modulus();
    let mut out = Bitmap::new(p.size());
    if x.is_empty() || y.is_empty() {
        return Ok(FpSet::from_bitmap(p, out));
    }
    if x.contains(0) || y.contains(0) {
        out.set(0);
    }
    let (xs, ys) = (x.without_zero(), y.without_zero());
    if xs.len().saturating_mul(ys.len()) <= p.size() / 8 + 64 {
        let yv = ys.to_vec();
        for a in xs.iter() {
            for &b in &yv {
                out.set(p.mul(a, b) as usize);
            }
        }
    } else {
        let logs = p.log_table();
        let order = p.size() - 1;
        let to_log = |s: &FpSet| {
            let mut m = Bitmap::new(order);
            for v in s.iter() {
                m.set(logs.log[v as usize] as usize);
            }
            m
        };
        let sum = cyclic_sum(&to_log(&xs), &to_log(&ys));
        for k in sum.iter_ones() {
            out.set(logs.exp[k] as usize);
        }
    }
    Ok(FpSet::from_bitmap(p, out))
}

/// `Q[X, Y] = {(x1 - x2) / (y1 - y2) : y1 != y2}`, computed as the union of
/// the dilates `d^{-1} (X - X)` over `d` in `(Y - Y) \ {0}`.
pub fn quotient_set(x: &FpSet, y: &FpSet) -> Result<FpSet> {
    x.ensure_same(y)?;
    if y.len() <= 1 {
        return Err(Error::Precondition(format!(
            "quotient set needs |Y| > 1, got |Y| = {}",
            y.len()
        )));
    }
    let dx = diffset(x, x)?;
    let dy_inv = reciprocals(&diffset(y, y)?);
    prodset(&dx, &dy_inv)
}
