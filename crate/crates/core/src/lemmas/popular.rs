use num_bigint::BigInt;

use super::{Check, LemmaReport};
use crate::energy::{additive_energy, rep_fn_sum};
use crate::error::{Error, Result};
use crate::field::{partial_sumset, FpSet, PairGraph};
use crate::rational::{int, Rational};

/// Given `E+(A, B) > |A|^{3/2} |B|^{3/2} / K` with `K >= 1`, builds
/// `G ⊆ A × B` with `|G| > |A||B| / (2K)` and `|A +_G B| < 2K sqrt(|A||B|)`.
///
/// `G` is the set of pairs whose sum is popular, `r_{A+B}(a + b) >= t`; the
/// threshold `t` runs down the distinct values of `r_{A+B}` and the first
/// graph meeting both bounds is returned. The threshold just above
/// `E / (2|A||B|)` always works, so the scan cannot fall through when the
/// hypothesis holds.
pub fn popular_sum_graph(a: &FpSet, b: &FpSet, k: &Rational) -> Result<(PairGraph, LemmaReport)> {
    a.ensure_same(b)?;
    a.ensure_nonempty("A")?;
    b.ensure_nonempty("B")?;
    if *k < int(1u32) {
        return Err(Error::Precondition(format!("K must be at least 1, got {k}")));
    }
    let energy = additive_energy(a, b)?.value;
    let ab = BigInt::from(a.len()) * BigInt::from(b.len());
    // E > (ab)^{3/2} / K  <=>  (E K)^2 > (ab)^3, everything positive.
    let ek = int(energy) * k;
    let ab_cubed = int(ab.pow(3));
    if ek.clone() * ek <= ab_cubed {
        return Err(Error::Precondition(format!(
            "popular-sum hypothesis fails: E+(A,B) = {energy} is not above (|A||B|)^(3/2)/K"
        )));
    }

    let r = rep_fn_sum(a, b)?;
    let mut levels: Vec<u64> = r.counts().iter().copied().filter(|&c| c != 0).collect();
    levels.sort_unstable_by(|x, y| y.cmp(x));
    levels.dedup();

    let edge_floor = int(ab.clone()) / (int(2u32) * k);
    let sum_ceiling_sq = int(4u32) * k * k * int(ab.clone());
    for &t in &levels {
        let popular = r.counts().iter().filter(|&&c| c >= t);
        let (edges, sums) = popular.fold((0u128, 0u128), |(e, s), &c| (e + c as u128, s + 1));
        let edges_ok = int(edges) > edge_floor;
        let sums_ok = int(sums * sums) < sum_ceiling_sq;
        if edges_ok && sums_ok {
            let p = a.modulus();
            let bv = b.to_vec();
            let mut g = PairGraph::empty(a, b)?;
            for x in a.iter() {
                for &y in &bv {
                    if r.get(p.add(x, y) as usize) >= t {
                        g.insert(x, y)?;
                    }
                }
            }
            let partial = partial_sumset(&g).len();
            let checks = vec![
                Check::exact("|A||B|/(2K) < |G|", edge_floor, int(g.edge_count()), true),
                Check::exact(
                    "|A+_G B|^2 < 4K^2|A||B|",
                    int(partial * partial),
                    sum_ceiling_sq,
                    true,
                ),
            ];
            let report = LemmaReport::new("popular-sum-graph", checks).with_witness(serde_json::json!({
                "threshold": t,
                "edges": g.edge_count(),
                "partial_sumset": partial,
                "energy": energy.to_string(),
            }));
            return Ok((g, report));
        }
    }
    Err(Error::Internal(
        "no popular-sum threshold satisfies both bounds although the hypothesis holds".into(),
    ))
}
