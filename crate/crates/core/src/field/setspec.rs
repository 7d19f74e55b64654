//! Text literal grammar for sets, shared by the command line and file input.
//!
//! ```text
//! 1,5,9              explicit elements
//! 0..100             half-open range (may be mixed with elements: 0..5,9)
//! ap:start,step,len  arithmetic progression
//! gp:g,len           geometric progression g^0 .. g^(len-1)
//! subgroup:d         the order-d subgroup of Z_p^*, d | p - 1
//! random:size,seed   uniform sample without replacement (also `seed=7`;
//!                    the seed may be omitted and supplied by the caller)
//! ```

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::prime::Prime;
use crate::field::set::FpSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    /// Comma list of elements and half-open ranges.
    Literal(Vec<Item>),
    Arithmetic {
        start: u64,
        step: u64,
        len: u64,
    },
    Geometric {
        ratio: u64,
        len: u64,
    },
    Subgroup {
        order: u64,
    },
    Random {
        size: u64,
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    Single(u64),
    Range(u64, u64),
}

fn int(spec: &str, s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::spec(spec, format!("`{}` is not a nonnegative integer", s.trim())))
}

fn args<const N: usize>(spec: &str, body: &str) -> Result<[u64; N]> {
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != N {
        return Err(Error::spec(
            spec,
            format!("expected {N} comma-separated arguments"),
        ));
    }
    let mut out = [0u64; N];
    for (o, s) in out.iter_mut().zip(parts) {
        *o = int(spec, s)?;
    }
    Ok(out)
}

impl SetSpec {
    pub fn parse(spec: &str) -> Result<SetSpec> {
        let s = spec.trim();
        if let Some((head, body)) = s.split_once(':') {
            return match head.trim() {
                "ap" => {
                    let [start, step, len] = args::<3>(spec, body)?;
                    Ok(SetSpec::Arithmetic { start, step, len })
                }
                "gp" => {
                    let [ratio, len] = args::<2>(spec, body)?;
                    Ok(SetSpec::Geometric { ratio, len })
                }
                "subgroup" => {
                    let [order] = args::<1>(spec, body)?;
                    Ok(SetSpec::Subgroup { order })
                }
                "random" => {
                    let mut parts = body.split(',');
                    let size = int(spec, parts.next().unwrap_or(""))?;
                    let seed = match parts.next() {
                        None => None,
                        Some(t) => {
                            let t = t.trim();
                            Some(int(spec, t.strip_prefix("seed=").unwrap_or(t))?)
                        }
                    };
                    if parts.next().is_some() {
                        return Err(Error::spec(spec, "expected random:size[,seed]"));
                    }
                    Ok(SetSpec::Random { size, seed })
                }
                other => Err(Error::spec(spec, format!("unknown generator `{other}`"))),
            };
        }
        let mut items = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some((lo, hi)) = tok.split_once("..") {
                let (lo, hi) = (int(spec, lo)?, int(spec, hi)?);
                if lo > hi {
                    return Err(Error::spec(spec, format!("empty range {lo}..{hi} is reversed")));
                }
                items.push(Item::Range(lo, hi));
            } else {
                items.push(Item::Single(int(spec, tok)?));
            }
        }
        Ok(SetSpec::Literal(items))
    }

    /// Materializes the set. `seed` is used by `random:` specs that do not
    /// carry their own seed.
    pub fn realize(&self, p: &Prime, seed: u64) -> Result<FpSet> {
        let pv = p.get();
        match *self {
            SetSpec::Literal(ref items) => {
                let mut out = FpSet::empty(p);
                for item in items {
                    match *item {
                        Item::Single(x) => out.insert(x)?,
                        Item::Range(lo, hi) => {
                            if hi > pv {
                                return Err(Error::OutOfRange { value: hi - 1, p: pv });
                            }
                            for x in lo..hi {
                                out.insert(x)?;
                            }
                        }
                    }
                }
                Ok(out)
            }
            SetSpec::Arithmetic { start, step, len } => {
                let (start, step) = (start % pv, step % pv);
                let mut x = start;
                let mut out = FpSet::empty(p);
                for _ in 0..len.min(pv) {
                    out.insert(x)?;
                    x = p.add(x, step);
                }
                Ok(out)
            }
            SetSpec::Geometric { ratio, len } => {
                let ratio = ratio % pv;
                let mut x = 1 % pv;
                let mut out = FpSet::empty(p);
                for _ in 0..len.min(pv) {
                    out.insert(x)?;
                    x = p.mul(x, ratio);
                }
                Ok(out)
            }
            SetSpec::Subgroup { order } => {
                if order == 0 || !(pv - 1).is_multiple_of(order) {
                    return Err(Error::InvalidSpec {
                        spec: format!("subgroup:{order}"),
                        reason: format!("order must divide p - 1 = {}", pv - 1),
                    });
                }
                subgroup(p, order)
            }
            SetSpec::Random { size, seed: own } => {
                if size > pv {
                    return Err(Error::InvalidSpec {
                        spec: format!("random:{size}"),
                        reason: format!("size exceeds p = {pv}"),
                    });
                }
                random_set(p, size as usize, own.unwrap_or(seed))
            }
        }
    }
}

/// The unique subgroup of `Z_p^*` of the given order.
pub fn subgroup(p: &Prime, order: u64) -> Result<FpSet> {
    let pv = p.get();
    let h = p.pow(p.generator(), (pv - 1) / order);
    let mut out = FpSet::empty(p);
    let mut x = 1;
    for _ in 0..order {
        out.insert(x)?;
        x = p.mul(x, h);
    }
    Ok(out)
}

/// Uniform `size`-subset of `Z_p`, fully determined by `seed`.
pub fn random_set(p: &Prime, size: usize, seed: u64) -> Result<FpSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FpSet::from_elements(p, sample(&mut rng, p.size(), size).into_iter().map(|x| x as u64))
}

/// Parses and realizes a spec in one step.
pub fn parse_set(p: &Prime, spec: &str, seed: u64) -> Result<FpSet> {
    SetSpec::parse(spec)?.realize(p, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn literals_and_ranges() {
        assert_eq!(parse_set(&p(11), "1,5,9", 0).unwrap().to_vec(), vec![1, 5, 9]);
        assert_eq!(
            parse_set(&p(101), "0..10", 0).unwrap().to_vec(),
            (0..10).collect::<Vec<_>>()
        );
        assert_eq!(
            parse_set(&p(11), "0..3, 7", 0).unwrap().to_vec(),
            vec![0, 1, 2, 7]
        );
        assert!(parse_set(&p(11), "", 0).unwrap().is_empty());
        assert!(parse_set(&p(11), "0..12", 0).is_err());
        assert!(parse_set(&p(11), "11", 0).is_err());
        assert!(parse_set(&p(11), "-1", 0).is_err());
        assert!(parse_set(&p(11), "5..2", 0).is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(
            parse_set(&p(101), "ap:3,10,4", 0).unwrap().to_vec(),
            vec![3, 13, 23, 33]
        );
        assert_eq!(parse_set(&p(13), "gp:2,4", 0).unwrap().to_vec(), vec![1, 2, 4, 8]);
        assert_eq!(
            parse_set(&p(13), "subgroup:4", 0).unwrap().to_vec(),
            vec![1, 5, 8, 12]
        );
        assert!(matches!(
            parse_set(&p(13), "subgroup:5", 0),
            Err(Error::InvalidSpec { .. })
        ));
        assert!(matches!(
            parse_set(&p(13), "cube:5", 0),
            Err(Error::InvalidSpec { .. })
        ));
        assert!(matches!(
            parse_set(&p(13), "random:14,1", 0),
            Err(Error::InvalidSpec { .. })
        ));
    }

    #[test]
    fn random_is_deterministic() {
        let a = parse_set(&p(1009), "random:20,seed=7", 0).unwrap();
        let b = parse_set(&p(1009), "random:20,7", 99).unwrap();
        let c = parse_set(&p(1009), "random:20", 7).unwrap();
        assert_eq!(a.len(), 20);
        assert_eq!(a, b);
        assert_eq!(a, c);
        let handles: Vec<_> = (0..4)
            .map(|_| std::thread::spawn(|| parse_set(&p(1009), "random:20,seed=7", 0).unwrap()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), a);
        }
        assert_ne!(parse_set(&p(1009), "random:20,8", 0).unwrap(), a);
    }
}
