//! Acceptance suite: one PASS/FAIL line per criterion. Runs with
//! `cargo test --test acceptance` (release mode recommended for the timing
//! criteria).

use std::time::{Duration, Instant};

use afc::energy::{
    additive_energy, additive_energy_naive, multiplicative_energy, multiplicative_energy_naive,
    shift_energy_sum, shift_energy_sum_naive,
};
use afc::field::setspec::random_set;
use afc::field::{dilate, partial_sumset, quotient_set, sumset};
use afc::harness::{emit_records, fit_exponent, run_sweep, Family, Format, SweepConfig, Theorem};
use afc::lemmas::{
    best_dilate, greedy_cover, in_quotient_set, popular_sum_graph, verify_cover, verify_ruzsa_sums,
    verify_ruzsa_triangle,
};
use afc::rational::{frac, int, to_f64, Rational};
use afc::{FpSet, Prime};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_INSTANCES: usize = 500;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const RUZSA3_TRIPLES: usize = 1000;
const RUZSA_K_TUPLES: usize = 500;
const DILATE_INSTANCES: usize = 500;
const COVER_INSTANCES: usize = 500;
const QUOTIENT_SAMPLES_PER_PRIME: usize = 40;
const POPULAR_INSTANCES: usize = 200;
const RANDOM_FAMILY_SEEDS: u64 = 200;
const RANDOM_FAMILY_BAND: (f64, f64) = (0.5, 2.0);
const SLOPE_TARGET: f64 = -0.5;
const SLOPE_TOLERANCE: f64 = 0.1;
const PROBE_SEEDS: u64 = 20;
const SHIFT_SUM_BUDGET: Duration = Duration::from_secs(10);
const SWEEP_BUDGET: Duration = Duration::from_secs(600);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_nonempty(rng: &mut ChaCha8Rng, p: &Prime, max: usize) -> FpSet {
    let cap = max.min(p.get() as usize);
    let n = rng.gen_range(1..=cap);
    random_set(p, n, rng.gen()).unwrap()
}

fn random_units(rng: &mut ChaCha8Rng, p: &Prime, max: usize) -> FpSet {
    loop {
        let s = random_nonempty(rng, p, max).without_zero();
        if !s.is_empty() {
            return s;
        }
    }
}

fn pick_prime(rng: &mut ChaCha8Rng, primes: &[u64]) -> Prime {
    Prime::new(primes[rng.gen_range(0..primes.len())]).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..ORACLE_INSTANCES {
        let p = pick_prime(&mut rng, &[101, 257, 1009]);
        let a = random_nonempty(&mut rng, &p, 64);
        let b = random_units(&mut rng, &p, 64);
        let same = additive_energy(&a, &b).unwrap().value == additive_energy_naive(&a, &b).unwrap().value
            && multiplicative_energy(&a, &b).unwrap().value
                == multiplicative_energy_naive(&a, &b).unwrap().value
            && shift_energy_sum(&a, &b).unwrap() == shift_energy_sum_naive(&a, &b).unwrap();
        if !same {
            mismatches += 1;
        }
    }
    let took = start.elapsed();
    outcome(
        mismatches == 0 && took < ORACLE_BUDGET,
        format!(
            "{ORACLE_INSTANCES} instances, {mismatches} mismatches, {took:.1?} (budget {ORACLE_BUDGET:?})"
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let primes = [2, 3, 5, 7, 11, 13, 31, 101, 257];
    let mut violations = Vec::new();

    for _ in 0..RUZSA3_TRIPLES {
        let p = pick_prime(&mut rng, &primes);
        let (x, y, z) = (
            random_nonempty(&mut rng, &p, 20),
            random_nonempty(&mut rng, &p, 20),
            random_nonempty(&mut rng, &p, 20),
        );
        if !verify_ruzsa_triangle(&x, &y, &z).unwrap().holds {
            violations.push("ruzsa3");
        }
    }

    for _ in 0..RUZSA_K_TUPLES {
        let p = pick_prime(&mut rng, &primes);
        let k = rng.gen_range(1..=4);
        let y = random_nonempty(&mut rng, &p, 12);
        let xs: Vec<FpSet> = (0..k).map(|_| random_nonempty(&mut rng, &p, 12)).collect();
        if !verify_ruzsa_sums(&y, &xs).unwrap().holds {
            violations.push("ruzsaK");
        }
    }

    for _ in 0..DILATE_INSTANCES {
        let p = pick_prime(&mut rng, &primes[2..]);
        let x = random_nonempty(&mut rng, &p, 16);
        let y = random_nonempty(&mut rng, &p, 16);
        let g = random_units(&mut rng, &p, 40);
        let (xi, report) = best_dilate(&x, &y, &g).unwrap();
        // Recompute both bounds from scratch for the returned xi.
        let xy = x.len() as u128 * y.len() as u128;
        let dil = dilate(xi, &y).unwrap();
        let sum = sumset(&x, &dil).unwrap().len() as u128;
        let energy = additive_energy(&x, &dil).unwrap().value;
        let first = frac(xy * g.len() as u128, xy + g.len() as u128) <= int(sum);
        let second = xy * xy <= energy * sum;
        if !report.holds || !first || !second || !g.contains(xi) {
            violations.push("dilate");
        }
    }

    for _ in 0..COVER_INSTANCES {
        let p = pick_prime(&mut rng, &primes[2..]);
        let x1 = random_nonempty(&mut rng, &p, 40);
        let x2 = random_nonempty(&mut rng, &p, 12);
        let eps = frac(rng.gen_range(1u32..100), 100u32);
        let (cover, report) = verify_cover(&x1, &x2, &eps).unwrap();
        let again = greedy_cover(&x1, &x2, &eps).unwrap();
        let mut union = FpSet::empty(&p);
        for &t in &cover.translates {
            for e in x2.iter() {
                union.insert(p.add(e, t)).unwrap();
            }
        }
        let covered = x1.iter().filter(|&e| union.contains(e)).count();
        let coverage = (int(1u32) - eps.clone()) * int(x1.len()) <= int(covered);
        let count = cover.translates.len() as u64 <= cover.bound_ceiling();
        if !report.holds || !coverage || !count || again != cover {
            violations.push("cover");
        }
    }

    for p in (2u64..=31).filter(|&n| afc::field::is_prime(n)) {
        let p = Prime::new(p).unwrap();
        for _ in 0..QUOTIENT_SAMPLES_PER_PRIME {
            let x = random_nonempty(&mut rng, &p, 5);
            let y = loop {
                let y = random_nonempty(&mut rng, &p, 5);
                if y.len() >= 2 {
                    break y;
                }
            };
            let q = quotient_set(&x, &y).unwrap();
            for xi in 0..p.get() {
                if in_quotient_set(xi, &x, &y).unwrap() != q.contains(xi) {
                    violations.push("quotient");
                }
            }
        }
    }

    outcome(
        violations.is_empty(),
        format!(
            "{RUZSA3_TRIPLES} triangles, {RUZSA_K_TUPLES} k-sums, {DILATE_INSTANCES} dilates, \
             {COVER_INSTANCES} covers, quotient exhaustive for p <= 31; violations: {violations:?}"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for _ in 0..POPULAR_INSTANCES {
        let p = pick_prime(&mut rng, &[13, 31, 101, 257, 1009]);
        let a = random_nonempty(&mut rng, &p, 40);
        let b = random_nonempty(&mut rng, &p, 40);
        let ab = a.len() as u128 * b.len() as u128;
        let e = additive_energy(&a, &b).unwrap().value;
        // K = 1.1 (|A||B|)^{3/2} / E, so E > (|A||B|)^{3/2} / K with margin.
        let k: Rational = BigRational::from_float(1.1 * (ab as f64).powf(1.5) / e as f64).unwrap();
        let k = k.max(int(1u32));
        let (g, report) = popular_sum_graph(&a, &b, &k).unwrap();
        let edges = int(g.edge_count());
        let partial = int(partial_sumset(&g).len());
        let ok = report.holds
            && edges * int(2u32) * k.clone() > int(ab)
            && partial.clone() * partial < int(4u32) * k.clone() * k * int(ab)
            && g.left() == &a
            && g.right() == &b;
        if !ok {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{POPULAR_INSTANCES} instances, {failures} failures"),
    )
}

fn criterion_4() -> Outcome {
    let one = int(1u32);
    let mut worst = int(0u32);
    let mut count = 0;
    let families = [
        (Family::Random, Family::Random),
        (Family::Interval { start: 0 }, Family::Interval { start: 1 }),
        (Family::Subgroup, Family::Subgroup),
        (
            Family::Geometric { ratio: None },
            Family::Progression { start: 1, step: 3 },
        ),
        (Family::Interval { start: 0 }, Family::Subgroup),
    ];
    for (alpha, beta) in [
        (frac(1u32, 2u32), frac(1u32, 2u32)),
        (frac(2u32, 3u32), frac(1u32, 2u32)),
        (int(1u32), int(1u32)),
    ] {
        let cfg = SweepConfig {
            primes: vec![5, 13, 101, 257],
            alpha,
            beta,
            families: families.to_vec(),
            seeds: (0..5).collect(),
            theorem: Theorem::Thm4,
            workers: 2,
            ..SweepConfig::default()
        };
        for r in run_sweep(&cfg).unwrap().records {
            count += 1;
            worst = worst.max(r.normalized);
        }
    }
    let ceiling = SweepConfig {
        primes: vec![101],
        alpha: int(1u32),
        beta: int(1u32),
        families: vec![(Family::Interval { start: 0 }, Family::Subgroup)],
        ..SweepConfig::default()
    };
    let cell = run_sweep(&ceiling).unwrap().records;
    let exact =
        cell.len() == 1 && cell[0].normalized == one && cell[0].size_a == 101 && cell[0].size_b == 100;
    outcome(
        worst <= one && exact,
        format!("{count} records, max normalized {worst}; Z_101 x Z_101^* cell exact: {exact}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = SweepConfig {
        primes: vec![1009],
        alpha: frac(1u32, 2u32),
        beta: frac(1u32, 2u32),
        seeds: (0..RANDOM_FAMILY_SEEDS).collect(),
        workers: 4,
        ..SweepConfig::default()
    };
    let records = run_sweep(&cfg).unwrap().records;
    let n = records[0].size_a as f64;
    let mut values: Vec<f64> = records.iter().map(|r| to_f64(&r.normalized)).collect();
    values.sort_by(f64::total_cmp);
    let median = (values[values.len() / 2 - 1] + values[values.len() / 2]) / 2.0;
    let expected = 1.0 / n + n / 1009.0;
    let (lo, hi) = (RANDOM_FAMILY_BAND.0 * expected, RANDOM_FAMILY_BAND.1 * expected);
    outcome(
        records.len() == RANDOM_FAMILY_SEEDS as usize && (lo..=hi).contains(&median),
        format!(
            "n = {n}, median {median:.5} in [{lo:.5}, {hi:.5}], {} records, {:.1?}",
            records.len(),
            start.elapsed()
        ),
    )
}

fn probe_config(workers: usize) -> SweepConfig {
    SweepConfig {
        primes: vec![1009, 4093, 16381],
        alpha: frac(1u32, 2u32),
        beta: frac(1u32, 2u32),
        seeds: (0..PROBE_SEEDS).collect(),
        workers,
        ..SweepConfig::default()
    }
}

fn probe_csv(workers: usize) -> (Vec<u8>, Duration, f64) {
    let start = Instant::now();
    let out = run_sweep(&probe_config(workers)).unwrap();
    let took = start.elapsed();
    let mut csv = Vec::new();
    emit_records(&out.records, Format::Csv, &mut csv).unwrap();
    (csv, took, fit_exponent(&out.records).unwrap().slope)
}

fn criterion_6() -> Outcome {
    let (_, _, slope) = probe_csv(4);
    outcome(
        (slope - SLOPE_TARGET).abs() <= SLOPE_TOLERANCE,
        format!("slope {slope:.4}, target {SLOPE_TARGET} +/- {SLOPE_TOLERANCE}"),
    )
}

fn criterion_7() -> Outcome {
    let p = Prime::new(65537).unwrap();
    let a = random_set(&p, 256, 7).unwrap();
    let b = random_set(&p, 257, 8).unwrap().without_zero();
    let b = if b.len() > 256 {
        FpSet::from_elements(&p, b.iter().take(256)).unwrap()
    } else {
        b
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let s = pool.install(|| shift_energy_sum(&a, &b).unwrap());
    let single = start.elapsed();
    let (_, sweep, _) = probe_csv(4);
    outcome(
        single < SHIFT_SUM_BUDGET && sweep < SWEEP_BUDGET && b.len() == 256,
        format!(
            "shift_energy_sum p = 65537, |A| = |B| = 256: {single:.2?} (S = {}); probe sweep with 4 workers: {sweep:.2?}",
            s.total
        ),
    )
}

fn criterion_8() -> Outcome {
    let (first, _, _) = probe_csv(4);
    let (second, _, _) = probe_csv(3);
    outcome(
        first == second && !first.is_empty(),
        format!("{} bytes, identical: {}", first.len(), first == second),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", criterion_1),
        ("theorem-as-test suites", criterion_2),
        ("popular-sum graph", criterion_3),
        ("trivial ceiling", criterion_4),
        ("random-family expectation", criterion_5),
        ("decay-exponent probe", criterion_6),
        ("performance", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} ({name}): {} - {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
