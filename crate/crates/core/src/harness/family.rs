use std::fmt;

use crate::error::{Error, Result};
use crate::field::setspec::{random_set, subgroup};
use crate::field::{FpSet, Prime};

/// A set family whose size is chosen by the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `{start, ..., start + n - 1}`.
    Interval { start: u64 },
    /// `{start + i * step}`.
    Progression { start: u64, step: u64 },
    /// `{g^0, ..., g^(n-1)}`; `None` means the primitive root.
    Geometric { ratio: Option<u64> },
    /// The subgroup of `Z_p^*` whose order is the divisor of `p - 1` nearest
    /// to `n` (the smaller one on ties).
    Subgroup,
    /// Uniform without replacement.
    Random,
}

impl Family {
    /// `interval[:start]`, `ap:start,step`, `gp[:g]`, `subgroup`, `random`.
    pub fn parse(s: &str) -> Result<Family> {
        let s = s.trim();
        let (head, body) = match s.split_once(':') {
            Some((h, b)) => (h.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::spec(s, format!("`{t}` is not a nonnegative integer")))
        };
        Ok(match (head, body) {
            ("interval", None) => Family::Interval { start: 0 },
            ("interval", Some(b)) => Family::Interval { start: num(b)? },
            ("ap", Some(b)) => match b.split_once(',') {
                Some((st, step)) => Family::Progression {
                    start: num(st)?,
                    step: num(step)?,
                },
                None => return Err(Error::spec(s, "expected ap:start,step")),
            },
            ("gp", None) => Family::Geometric { ratio: None },
            ("gp", Some(b)) => Family::Geometric { ratio: Some(num(b)?) },
            ("subgroup", None) => Family::Subgroup,
            ("random", None) => Family::Random,
            _ => return Err(Error::spec(s, "unknown set family")),
        })
    }

    /// Builds a member of the family with (about) `n` elements.
    pub fn instantiate(&self, p: &Prime, n: usize, seed: u64) -> Result<FpSet> {
        let pv = p.get();
        if n as u64 > pv {
            return Err(Error::InvalidSpec {
                spec: self.to_string(),
                reason: format!("size {n} exceeds p = {pv}"),
            });
        }
        match *self {
            Family::Interval { start } => Ok(FpSet::from_residues(
                p,
                (0..n as i64).map(|i| (start % pv) as i64 + i),
            )),
            Family::Progression { start, step } => {
                let (start, step) = (start % pv, step % pv);
                let mut out = FpSet::empty(p);
                let mut x = start;
                for _ in 0..n {
                    out.insert(x)?;
                    x = p.add(x, step);
                }
                Ok(out)
            }
            Family::Geometric { ratio } => {
                let g = ratio.map(|g| g % pv).unwrap_or_else(|| p.generator());
                let mut out = FpSet::empty(p);
                let mut x = 1 % pv;
                for _ in 0..n {
                    out.insert(x)?;
                    x = p.mul(x, g);
                }
                Ok(out)
            }
            Family::Subgroup => subgroup(p, nearest_divisor(pv - 1, n as u64)),
            Family::Random => random_set(p, n, seed),
        }
    }
}

fn nearest_divisor(m: u64, target: u64) -> u64 {
    let mut best = 1u64;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            for c in [d, m / d] {
                let (dc, db) = (c.abs_diff(target), best.abs_diff(target));
                if dc < db || (dc == db && c < best) {
                    best = c;
                }
            }
        }
        d += 1;
    }
    best
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Interval { start: 0 } => write!(f, "interval"),
            Family::Interval { start } => write!(f, "interval:{start}"),
            Family::Progression { start, step } => write!(f, "ap:{start},{step}"),
            Family::Geometric { ratio: None } => write!(f, "gp"),
            Family::Geometric { ratio: Some(g) } => write!(f, "gp:{g}"),
            Family::Subgroup => write!(f, "subgroup"),
            Family::Random => write!(f, "random"),
        }
    }
}
