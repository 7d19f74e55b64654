use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::Family;
use crate::energy::shift_energy_sum;
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::rational::{self, frac, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Requires `|B| / |A| >= 1/4`; exponent `1/308`, constant 15.
    Thm3,
    /// No size-ratio condition; exponent `1/2240`, constant unspecified.
    Thm4,
}

impl Theorem {
    pub fn default_exponent(self) -> Rational {
        match self {
            Theorem::Thm3 => frac(1u32, 308u32),
            Theorem::Thm4 => frac(1u32, 2240u32),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    /// `|A| = max(1, round(p^alpha))`.
    pub alpha: Rational,
    /// `|B| = max(1, round(p^beta))`, before removing 0.
    pub beta: Rational,
    pub families: Vec<(Family, Family)>,
    pub seeds: Vec<u64>,
    pub exponent_c: Rational,
    pub constant_c: Rational,
    pub theorem: Theorem,
    pub workers: usize,
    pub master_seed: u64,
    pub modulus_cap: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: vec![1009],
            alpha: frac(1u32, 2u32),
            beta: frac(1u32, 2u32),
            families: vec![(Family::Random, Family::Random)],
            seeds: vec![0],
            exponent_c: frac(1u32, 308u32),
            constant_c: frac(15u32, 1u32),
            theorem: Theorem::Thm3,
            workers: 1,
            master_seed: 0,
            modulus_cap: crate::field::DEFAULT_MAX_P,
        }
    }
}

pub fn planned_size(p: u64, exponent: &Rational) -> usize {
    let n = (p as f64).powf(rational::to_f64(exponent)).round() as u64;
    n.clamp(1, p) as usize
}

fn parse_list<T>(key: &str, value: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| f(t).map_err(|e| Error::Config(format!("{key}: {e}"))))
        .collect()
}

fn parse_u64s(key: &str, value: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for chunk in parse_list(key, value, |t| Ok(t.to_string()))? {
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("{key}: `{s}` is not a nonnegative integer")))
        };
        match chunk.split_once("..") {
            Some((lo, hi)) => out.extend(num(lo)?..num(hi)?),
            None => out.push(num(&chunk)?),
        }
    }
    Ok(out)
}

impl SweepConfig {
    /// Builds a config from `key = value` pairs. Keys are the command-line
    /// flag names without dashes: `primes`, `alpha`, `beta`, `family-a`,
    /// `family-b`, `seeds`, `exponent-c`, `constant-c`, `theorem`, `workers`,
    /// `master-seed`. Several families are separated by `;` and zipped
    /// pairwise (a single entry is broadcast).
    pub fn from_pairs(pairs: &BTreeMap<String, String>, modulus_cap: u64) -> Result<SweepConfig> {
        let mut cfg = SweepConfig {
            modulus_cap,
            ..SweepConfig::default()
        };
        let mut exponent_given = false;
        let mut fam_a = vec![Family::Random];
        let mut fam_b = vec![Family::Random];
        for (key, value) in pairs {
            let rat = |v: &str| parse_rational(v).map_err(|e| Error::Config(format!("{key}: {e}")));
            let fams = |v: &str| -> Result<Vec<Family>> {
                v.split(';')
                    .map(|s| Family::parse(s).map_err(|e| Error::Config(format!("{key}: {e}"))))
                    .collect()
            };
            match key.as_str() {
                "primes" => cfg.primes = parse_u64s(key, value)?,
                "alpha" => cfg.alpha = rat(value)?,
                "beta" => cfg.beta = rat(value)?,
                "family-a" => fam_a = fams(value)?,
                "family-b" => fam_b = fams(value)?,
                "seeds" => cfg.seeds = parse_u64s(key, value)?,
                "exponent-c" => {
                    cfg.exponent_c = rat(value)?;
                    exponent_given = true;
                }
                "constant-c" => cfg.constant_c = rat(value)?,
                "theorem" => {
                    cfg.theorem = match value.trim() {
                        "thm3" => Theorem::Thm3,
                        "thm4" => Theorem::Thm4,
                        other => return Err(Error::Config(format!("theorem: unknown `{other}`"))),
                    }
                }
                "workers" => {
                    cfg.workers = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("workers: `{value}` is not a count")))?
                }
                "master-seed" => {
                    cfg.master_seed = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("master-seed: `{value}` is not an integer")))?
                }
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        if !exponent_given {
            cfg.exponent_c = cfg.theorem.default_exponent();
        }
        cfg.families = match (fam_a.len(), fam_b.len()) {
            (x, y) if x == y => fam_a.into_iter().zip(fam_b).collect(),
            (1, _) => fam_b.into_iter().map(|b| (fam_a[0].clone(), b)).collect(),
            (_, 1) => fam_a.into_iter().map(|a| (a, fam_b[0].clone())).collect(),
            (x, y) => {
                return Err(Error::Config(format!(
                    "family-a has {x} entries, family-b has {y}"
                )))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses a `key = value` config file (TOML syntax). Values may be
    /// strings, numbers or arrays; arrays are joined with commas.
    pub fn from_toml(text: &str, modulus_cap: u64) -> Result<SweepConfig> {
        Self::from_pairs(&toml_pairs(text)?, modulus_cap)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = frac(0u32, 1u32);
        let one = frac(1u32, 1u32);
        for (name, e) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if *e <= zero || *e > one {
                return Err(Error::Config(format!("{name} must lie in (0, 1], got {e}")));
            }
        }
        if self.primes.is_empty() || self.seeds.is_empty() || self.families.is_empty() {
            return Err(Error::Config(
                "primes, seeds and families must be nonempty".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        for &p in &self.primes {
            Prime::with_cap(p, self.modulus_cap).map_err(|e| Error::Config(e.to_string()))?;
            if self.theorem == Theorem::Thm3 {
                let (na, nb) = (planned_size(p, &self.alpha), planned_size(p, &self.beta));
                if 4 * nb < na {
                    return Err(Error::Config(format!(
                        "thm3 needs |B|/|A| >= 1/4, but p = {p} gives |A| = {na}, |B| = {nb}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub p: u64,
    #[serde(with = "rational::as_real")]
    pub alpha_realized: f64,
    #[serde(with = "rational::as_real")]
    pub beta_realized: f64,
    #[serde(with = "rational::as_real")]
    pub gamma: f64,
    pub family: String,
    pub seed: u64,
    #[serde(rename = "sizeA")]
    pub size_a: usize,
    #[serde(rename = "sizeB")]
    pub size_b: usize,
    #[serde(rename = "S")]
    pub s: u128,
    #[serde(with = "rational::as_string")]
    pub normalized: Rational,
    #[serde(with = "rational::as_real")]
    pub bound: f64,
    #[serde(with = "rational::as_real")]
    pub ratio: f64,
}

/// A cell whose sets could not be generated or measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub p: u64,
    pub family: String,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<ExperimentRecord>,
    pub failures: Vec<CellFailure>,
    /// Free-form remarks about the configuration (e.g. defaulted constants).
    pub notes: Vec<String>,
}

/// SplitMix64 finalizer folded over the parts.
/// Flattens a TOML config into the `key = value` pairs accepted by
/// [`SweepConfig::from_pairs`]; underscores in keys become dashes.
pub fn toml_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    let render = |v: &toml::Value| -> String {
        match v {
            toml::Value::String(s) => s.clone(),
            toml::Value::Array(xs) => xs
                .iter()
                .map(|x| match x {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        }
    };
    Ok(table
        .iter()
        .map(|(k, v)| (k.replace('_', "-"), render(v)))
        .collect())
}

pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    for &x in parts {
        let mut z = h ^ x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

struct Cell {
    p_index: usize,
    family_index: usize,
    seed_index: usize,
}

fn run_cell(cfg: &SweepConfig, cell: &Cell) -> std::result::Result<ExperimentRecord, CellFailure> {
    let pv = cfg.primes[cell.p_index];
    let (fa, fb) = &cfg.families[cell.family_index];
    let seed = cfg.seeds[cell.seed_index];
    let family = format!("{fa}/{fb}");
    let fail = |e: Error| CellFailure {
        p: pv,
        family: family.clone(),
        seed,
        error: format!("{}: {e}", e.code()),
    };
    let p = Prime::with_cap(pv, cfg.modulus_cap).map_err(fail)?;
    let base = [
        cfg.master_seed,
        pv,
        cell.family_index as u64,
        cell.seed_index as u64,
    ];
    let seed_a = mix_seed(&[base[0], base[1], base[2], base[3], 0]);
    let seed_b = mix_seed(&[base[0], base[1], base[2], base[3], 1]);
    let a = fa
        .instantiate(&p, planned_size(pv, &cfg.alpha), seed_a)
        .map_err(fail)?;
    let b = fb
        .instantiate(&p, planned_size(pv, &cfg.beta), seed_b)
        .map_err(fail)?
        .without_zero();
    if b.is_empty() {
        return Err(fail(Error::Empty("B after removing 0")));
    }
    let sum = shift_energy_sum(&a, &b).map_err(fail)?;

    let lp = (pv as f64).ln();
    let alpha = (a.len() as f64).ln() / lp;
    let beta = (b.len() as f64).ln() / lp;
    let gamma = beta.min(1.0 - alpha);
    let bound =
        rational::to_f64(&cfg.constant_c) * (pv as f64).powf(-gamma * rational::to_f64(&cfg.exponent_c));
    let ratio = rational::to_f64(&sum.normalized) / bound;
    Ok(ExperimentRecord {
        p: pv,
        alpha_realized: rational::round_real(alpha),
        beta_realized: rational::round_real(beta),
        gamma: rational::round_real(gamma),
        family,
        seed,
        size_a: a.len(),
        size_b: b.len(),
        s: sum.total,
        normalized: sum.normalized,
        bound: rational::round_real(bound),
        ratio: rational::round_real(ratio),
    })
}

/// Runs every `(prime, family pair, seed)` cell. Output order is the config
/// order regardless of `workers`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for p_index in 0..cfg.primes.len() {
        for family_index in 0..cfg.families.len() {
            for seed_index in 0..cfg.seeds.len() {
                cells.push(Cell {
                    p_index,
                    family_index,
                    seed_index,
                });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let outcomes: Vec<_> = pool.install(|| cells.par_iter().map(|c| run_cell(cfg, c)).collect());

    let mut out = SweepOutput {
        records: Vec::new(),
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for o in outcomes {
        match o {
            Ok(r) => out.records.push(r),
            Err(f) => out.failures.push(f),
        }
    }
    if cfg.theorem == Theorem::Thm4 {
        out.notes.push(format!(
            "thm4: the constant C is unspecified; bound uses constant_c = {}",
            rational::format_rational(&cfg.constant_c)
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
        kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn config_from_pairs() {
        let cfg = SweepConfig::from_pairs(
            &pairs(&[
                ("primes", "101,257"),
                ("seeds", "0..3,9"),
                ("family-a", "random;interval"),
                ("family-b", "subgroup"),
                ("theorem", "thm4"),
            ]),
            1 << 24,
        )
        .unwrap();
        assert_eq!(cfg.primes, vec![101, 257]);
        assert_eq!(cfg.seeds, vec![0, 1, 2, 9]);
        assert_eq!(cfg.families.len(), 2);
        assert_eq!(cfg.exponent_c, frac(1u32, 2240u32));
        assert!(SweepConfig::from_pairs(&pairs(&[("primes", "100")]), 1 << 24).is_err());
        assert!(SweepConfig::from_pairs(&pairs(&[("alpha", "0")]), 1 << 24).is_err());
        assert!(SweepConfig::from_pairs(&pairs(&[("bogus", "1")]), 1 << 24).is_err());
        // |B|/|A| = 10/1009 violates the thm3 ratio condition.
        assert!(SweepConfig::from_pairs(&pairs(&[("alpha", "1"), ("beta", "1/3")]), 1 << 24).is_err());
    }

    #[test]
    fn config_from_toml() {
        let cfg = SweepConfig::from_toml(
            "primes = [101, 257]\nalpha = \"1/2\"\nseeds = \"0..4\"\nworkers = 2\nfamily_a = \"gp\"\n",
            1 << 24,
        )
        .unwrap();
        assert_eq!(cfg.primes, vec![101, 257]);
        assert_eq!(cfg.seeds.len(), 4);
        assert_eq!(cfg.workers, 2);
        assert_eq!(cfg.families[0].0, Family::Geometric { ratio: None });
    }

    #[test]
    fn ceiling_cell_is_exactly_one() {
        let cfg = SweepConfig {
            primes: vec![101],
            alpha: frac(1u32, 1u32),
            beta: frac(1u32, 1u32),
            families: vec![(Family::Interval { start: 0 }, Family::Interval { start: 0 })],
            ..SweepConfig::default()
        };
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 1);
        let r = &out.records[0];
        assert_eq!((r.size_a, r.size_b), (101, 100));
        assert_eq!(r.normalized, frac(1u32, 1u32));
        assert_eq!(r.s, 101u128.pow(3) * 100);
    }

    #[test]
    fn failures_are_in_band() {
        // |B| = round(101^(1/100)) = 1 and the interval {0} loses its only element.
        let cfg = SweepConfig {
            primes: vec![101],
            beta: frac(1u32, 100u32),
            families: vec![
                (Family::Random, Family::Interval { start: 0 }),
                (Family::Random, Family::Interval { start: 1 }),
            ],
            theorem: Theorem::Thm4,
            ..SweepConfig::default()
        };
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].family, "random/interval");
        assert!(out.failures[0].error.starts_with("empty-input"));
        assert_eq!(out.notes.len(), 1);
    }

    #[test]
    fn mix_seed_separates_cells() {
        let a = mix_seed(&[0, 1009, 0, 0, 0]);
        assert_ne!(a, mix_seed(&[0, 1009, 0, 0, 1]));
        assert_ne!(a, mix_seed(&[0, 1009, 0, 1, 0]));
        assert_eq!(a, mix_seed(&[0, 1009, 0, 0, 0]));
    }
}
