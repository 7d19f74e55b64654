//! The `afc` command line. [`dispatch`] is the whole program minus process
//! plumbing, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 usage or contract violation (one line
//! `error: <code>: <message>` on stderr), 2 I/O failure.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::energy::{additive_energy, multiplicative_energy, shift_energy_sum};
use crate::error::{Error, Result};
use crate::field::{self, setspec::parse_set, FpSet, PairGraph, Prime};
use crate::harness::{self, emit_records, fit_exponent, read_records, Format, SweepConfig};
use crate::lemmas::{self, BsgWitness};
use crate::rational::{format_rational, parse_rational};

#[derive(Parser, Debug)]
#[command(
    name = "afc",
    version,
    about = "Exact additive combinatorics over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Modulus {
    /// Prime modulus.
    #[arg(long)]
    p: u64,
    /// Seed for `random:` set specs that do not carry one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Set algebra: X+Y, X-Y, XY or Q[X,Y].
    Sumset {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// sum, diff, prod or quotient.
        #[arg(long, default_value = "sum")]
        op: String,
    },
    /// Additive and multiplicative energy, optionally the shift-energy sum.
    Energy {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        a: String,
        /// Defaults to A.
        #[arg(long)]
        b: Option<String>,
        /// Also compute S = sum_{b in B} E+(A, bA).
        #[arg(long)]
        shift_sum: bool,
    },
    /// Greedy covering of X1 by translates of X2.
    Cover {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
        #[arg(long)]
        eps: String,
    },
    /// Check one lemma instance and print its report.
    Verify {
        #[command(subcommand)]
        lemma: Lemma,
    },
    /// Parameter sweep of the normalized shift-energy sum.
    Sweep(SweepArgs),
    /// Fit the decay exponent of normalized S against p.
    Fit {
        /// Records file (stdin when omitted).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

#[derive(Subcommand, Debug)]
enum Lemma {
    /// |X-Z| <= |X-Y||Y-Z|/|Y|.
    Ruzsa3 {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// |X1+...+Xk| <= prod|Y+Xi|/|Y|^(k-1); repeat --x for each Xi.
    #[command(name = "ruzsaK")]
    RuzsaK {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        y: String,
        #[arg(long, required = true)]
        x: Vec<String>,
    },
    /// Best dilate xi in G for |X + xi Y|.
    Dilate {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        g: String,
    },
    /// Greedy covering bound and coverage.
    Cover {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
        #[arg(long)]
        eps: String,
    },
    /// Collapse criterion against explicit quotient-set membership.
    Quotient {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Check a single xi instead of all of Z_p.
        #[arg(long)]
        xi: Option<u64>,
    },
    /// Popular-sum graph for a given K.
    Popular {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: String,
    },
    /// Verify a BSG witness (A', B', Q) for G ⊆ A×B.
    Bsg {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: String,
        #[arg(long = "a-prime")]
        a_prime: String,
        #[arg(long = "b-prime")]
        b_prime: String,
        #[arg(long)]
        q: u64,
        /// Edges `a:b;a:b;...`; the complete graph when omitted.
        #[arg(long)]
        edges: Option<String>,
    },
    /// Garaev sum-product ratio and empirical constant.
    Garaev {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Shifts b in B with E+(A, bA) > tau.
    Shifts {
        #[command(flatten)]
        m: Modulus,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        tau: u128,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    primes: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long = "family-a")]
    family_a: Option<String>,
    #[arg(long = "family-b")]
    family_b: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long = "exponent-c")]
    exponent_c: Option<String>,
    #[arg(long = "constant-c")]
    constant_c: Option<String>,
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long = "master-seed")]
    master_seed: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Serialize)]
struct EnergyLine {
    p: u64,
    #[serde(rename = "EA_add")]
    ea_add: u128,
    #[serde(rename = "E_mul")]
    e_mul: u128,
    #[serde(rename = "S")]
    s: Option<u128>,
    normalized: Option<String>,
}

fn prime(m: &Modulus) -> Result<Prime> {
    Prime::with_cap(m.p, crate::modulus_cap())
}

fn set(p: &Prime, m: &Modulus, spec: &str) -> Result<FpSet> {
    parse_set(p, spec, m.seed)
}

fn line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let s = serde_json::to_string(value).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn parse_edges(spec: &str) -> Result<Vec<(u64, u64)>> {
    spec.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| Error::spec(spec, format!("edge `{t}` is not a:b")))?;
            let n = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::spec(spec, format!("bad edge `{t}`")))
            };
            Ok((n(a)?, n(b)?))
        })
        .collect()
}

fn run_lemma(lemma: &Lemma, out: &mut dyn Write) -> Result<()> {
    match lemma {
        Lemma::Ruzsa3 { m, x, y, z } => {
            let p = prime(m)?;
            let r = lemmas::verify_ruzsa_triangle(&set(&p, m, x)?, &set(&p, m, y)?, &set(&p, m, z)?)?;
            line(out, &r)
        }
        Lemma::RuzsaK { m, y, x } => {
            let p = prime(m)?;
            let xs = x.iter().map(|s| set(&p, m, s)).collect::<Result<Vec<_>>>()?;
            line(out, &lemmas::verify_ruzsa_sums(&set(&p, m, y)?, &xs)?)
        }
        Lemma::Dilate { m, x, y, g } => {
            let p = prime(m)?;
            let (_, r) = lemmas::best_dilate(&set(&p, m, x)?, &set(&p, m, y)?, &set(&p, m, g)?)?;
            line(out, &r)
        }
        Lemma::Cover { m, x1, x2, eps } => {
            let p = prime(m)?;
            let (_, r) = lemmas::verify_cover(&set(&p, m, x1)?, &set(&p, m, x2)?, &parse_rational(eps)?)?;
            line(out, &r)
        }
        Lemma::Quotient { m, x, y, xi } => {
            let p = prime(m)?;
            line(
                out,
                &lemmas::verify_quotient_membership(&set(&p, m, x)?, &set(&p, m, y)?, *xi)?,
            )
        }
        Lemma::Popular { m, a, b, k } => {
            let p = prime(m)?;
            let (_, r) = lemmas::popular_sum_graph(&set(&p, m, a)?, &set(&p, m, b)?, &parse_rational(k)?)?;
            line(out, &r)
        }
        Lemma::Bsg {
            m,
            a,
            b,
            k,
            a_prime,
            b_prime,
            q,
            edges,
        } => {
            let p = prime(m)?;
            let (sa, sb) = (set(&p, m, a)?, set(&p, m, b)?);
            let g = match edges {
                Some(e) => PairGraph::from_edges(&sa, &sb, parse_edges(e)?)?,
                None => PairGraph::full(&sa, &sb)?,
            };
            let w = BsgWitness {
                a_prime: set(&p, m, a_prime)?,
                b_prime: set(&p, m, b_prime)?,
                q: *q,
            };
            line(
                out,
                &lemmas::verify_bsg_witness(&sa, &sb, &g, &parse_rational(k)?, &w)?,
            )
        }
        Lemma::Garaev { m, a, b } => {
            let p = prime(m)?;
            line(out, &lemmas::garaev_ratio(&set(&p, m, a)?, &set(&p, m, b)?)?)
        }
        Lemma::Shifts { m, a, b, tau } => {
            let p = prime(m)?;
            let b1 = lemmas::select_high_energy_shifts(&set(&p, m, a)?, &set(&p, m, b)?, *tau)?;
            line(out, &b1)
        }
    }
}

fn run_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut pairs: BTreeMap<String, String> = BTreeMap::new();
    if let Some(path) = &args.config {
        pairs = harness::toml_pairs(&std::fs::read_to_string(path)?)?;
    }
    let flags = [
        ("primes", &args.primes),
        ("alpha", &args.alpha),
        ("beta", &args.beta),
        ("family-a", &args.family_a),
        ("family-b", &args.family_b),
        ("seeds", &args.seeds),
        ("exponent-c", &args.exponent_c),
        ("constant-c", &args.constant_c),
        ("theorem", &args.theorem),
        ("workers", &args.workers),
        ("master-seed", &args.master_seed),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            pairs.insert(k.to_string(), v.clone());
        }
    }
    let format: Format = args.format.parse()?;
    let cfg = SweepConfig::from_pairs(&pairs, crate::modulus_cap())?;
    let result = harness::run_sweep(&cfg)?;
    for note in &result.notes {
        writeln!(err, "# {note}")?;
    }
    for f in &result.failures {
        writeln!(
            err,
            "{}",
            serde_json::to_string(f).map_err(|e| Error::Internal(e.to_string()))?
        )?;
    }
    let write_all = |w: &mut dyn Write| -> Result<()> {
        emit_records(&result.records, format, &mut *w)?;
        if format == Format::Jsonl {
            for f in &result.failures {
                line(w, f)?;
            }
        }
        Ok(())
    };
    match &args.out {
        Some(path) => {
            let mut file = File::create(path)?;
            write_all(&mut file)
        }
        None => write_all(out),
    }
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Sumset { m, x, y, op } => {
            let p = prime(&m)?;
            let (sx, sy) = (set(&p, &m, &x)?, set(&p, &m, &y)?);
            let r = match op.as_str() {
                "sum" => field::sumset(&sx, &sy)?,
                "diff" => field::diffset(&sx, &sy)?,
                "prod" => field::prodset(&sx, &sy)?,
                "quotient" => field::quotient_set(&sx, &sy)?,
                other => return Err(Error::Precondition(format!("unknown --op `{other}`"))),
            };
            line(out, &r)
        }
        Command::Energy { m, a, b, shift_sum } => {
            let p = prime(&m)?;
            let sa = set(&p, &m, &a)?;
            let sb = match &b {
                Some(b) => set(&p, &m, b)?,
                None => sa.clone(),
            };
            let add = additive_energy(&sa, &sb)?.value;
            let mul = multiplicative_energy(&sa, &sb)?.value;
            let (s, normalized) = if shift_sum {
                let s = shift_energy_sum(&sa, &sb)?;
                (Some(s.total), Some(format_rational(&s.normalized)))
            } else {
                (None, None)
            };
            line(
                out,
                &EnergyLine {
                    p: p.get(),
                    ea_add: add,
                    e_mul: mul,
                    s,
                    normalized,
                },
            )
        }
        Command::Cover { m, x1, x2, eps } => {
            let p = prime(&m)?;
            let c = lemmas::greedy_cover(&set(&p, &m, &x1)?, &set(&p, &m, &x2)?, &parse_rational(&eps)?)?;
            line(out, &c)
        }
        Command::Verify { lemma } => run_lemma(&lemma, out),
        Command::Sweep(args) => run_sweep(&args, out, err),
        Command::Fit { input, format } => {
            let format: Format = format.parse()?;
            let records = match input {
                Some(path) => read_records(BufReader::new(File::open(path)?), format)?,
                None => read_records(std::io::stdin().lock(), format)?,
            };
            line(out, &fit_exponent(&records)?)
        }
    }
}

/// Parses `argv` (including the program name) and runs one subcommand.
/// Returns the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let mut lines = text.lines();
                    let first = lines.next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(err, "error: usage: {first}");
                    for l in lines {
                        let _ = writeln!(err, "{l}");
                    }
                    1
                }
            };
        }
    };
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {}: {msg}", e.code());
            match e {
                Error::Io(_) => 2,
                _ => 1,
            }
        }
    }
}
