use super::{Check, LemmaReport};
use crate::energy::rep_fn_diff;
use crate::error::{Error, Result};
use crate::field::{dilate, quotient_set, sumset, FpSet};
use crate::rational::{frac, int};

/// Picks `xi ∈ G` minimizing `sum_s f_xi(s)^2` (ties to the smallest `xi`)
/// and reports the bounds that choice guarantees:
///
/// * `sum_s f_xi(s)^2 <= |X||Y| + |X|^2|Y|^2 / |G|` (averaging over `G`),
/// * `|X + xi Y| >= |X||Y||G| / (|X||Y| + |G|)`,
/// * `|X + xi Y| >= |X|^2|Y|^2 / E+(X, xi Y)` (Cauchy-Schwarz).
///
/// The last bound is an equality exactly when every nonempty fiber has the
/// same size, so it is checked non-strictly; whether it happens to be strict
/// is recorded in the witness.
pub fn best_dilate(x: &FpSet, y: &FpSet, g: &FpSet) -> Result<(u64, LemmaReport)> {
    x.ensure_same(y)?;
    x.ensure_same(g)?;
    x.ensure_nonempty("X")?;
    y.ensure_nonempty("Y")?;
    g.ensure_nonempty("G")?;
    if g.contains(0) {
        return Err(Error::Precondition("G must lie in Z_p^* (0 in G)".into()));
    }
    let p = x.modulus();
    // For xi != 0: E+(X, xi Y) = sum_d r_{X-X}(d) r_{Y-Y}(d / xi).
    let rx = rep_fn_diff(x, x)?;
    let ry = rep_fn_diff(y, y)?;
    let support: Vec<(u64, u64)> = rx
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(d, &c)| (d as u64, c))
        .collect();
    let collision = |xi: u64| -> u128 {
        let inv = p.inv(xi).expect("xi != 0");
        support
            .iter()
            .map(|&(d, c)| c as u128 * ry.get(p.mul(d, inv) as usize) as u128)
            .sum()
    };
    let (xi, energy) = g
        .iter()
        .map(|xi| (xi, collision(xi)))
        .min_by(|(x1, e1), (x2, e2)| e1.cmp(e2).then(x1.cmp(x2)))
        .expect("G nonempty");

    let (nx, ny, ng) = (x.len() as u128, y.len() as u128, g.len() as u128);
    let pairs = nx * ny;
    let size = sumset(x, &dilate(xi, y)?)?.len() as u128;
    let checks = vec![
        Check::exact(
            "|X||Y||G|/(|X||Y|+|G|) <= |X+xiY|",
            frac(pairs * ng, pairs + ng),
            int(size),
            false,
        ),
        Check::exact(
            "|X|^2|Y|^2/E+(X,xiY) <= |X+xiY|",
            frac(pairs * pairs, energy),
            int(size),
            false,
        ),
        Check::exact(
            "E+(X,xiY) <= |X||Y| + |X|^2|Y|^2/|G|",
            int(energy),
            int(pairs) + frac(pairs * pairs, ng),
            false,
        ),
    ];
    let strict_second = frac(pairs * pairs, energy) < int(size);
    let report = LemmaReport::new("best-dilate", checks).with_witness(serde_json::json!({
        "xi": xi,
        "collision": energy.to_string(),
        "sumset": size,
        "second_bound_strict": strict_second,
    }));
    Ok((xi, report))
}

/// `xi ∈ Q[X, Y]` decided by collapse: `|X + xi Y| < |X||Y|`.
pub fn in_quotient_set(xi: u64, x: &FpSet, y: &FpSet) -> Result<bool> {
    x.ensure_same(y)?;
    if y.len() <= 1 {
        return Err(Error::Precondition(format!(
            "quotient set needs |Y| > 1, got |Y| = {}",
            y.len()
        )));
    }
    let xi = x.modulus().check_element(xi)?;
    Ok(sumset(x, &dilate(xi, y)?)?.len() < x.len() * y.len())
}

/// Compares collapse-based membership with the explicit quotient set over
/// all `xi` in `Z_p` (or just `only`, when given). `lhs` counts disagreements.
pub fn verify_quotient_membership(x: &FpSet, y: &FpSet, only: Option<u64>) -> Result<LemmaReport> {
    let q = quotient_set(x, y)?;
    let candidates: Vec<u64> = match only {
        Some(xi) => vec![x.modulus().check_element(xi)?],
        None => (0..x.p()).collect(),
    };
    let mut mismatches = Vec::new();
    for &xi in &candidates {
        if in_quotient_set(xi, x, y)? != q.contains(xi) {
            mismatches.push(xi);
        }
    }
    let check = Check::exact(
        "#{xi : collapse(xi) != (xi in Q[X,Y])} <= 0",
        int(mismatches.len()),
        int(0u32),
        false,
    );
    let mut witness = serde_json::json!({
        "quotient_size": q.len(),
        "checked": candidates.len(),
        "mismatches": mismatches,
    });
    if let Some(xi) = only {
        witness["xi"] = xi.into();
        witness["member"] = q.contains(xi).into();
    }
    Ok(LemmaReport::new("quotient-membership", vec![check]).with_witness(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::collision_count;
    use crate::field::Prime;

    fn set(p: &Prime, xs: &[u64]) -> FpSet {
        FpSet::from_elements(p, xs.iter().copied()).unwrap()
    }

    #[test]
    fn exhaustive_small_example() {
        let p = Prime::new(7).unwrap();
        let x = set(&p, &[0, 1]);
        let g = FpSet::units(&p);
        let (xi, report) = best_dilate(&x, &x, &g).unwrap();
        assert_eq!(xi, 2);
        assert!(report.holds, "{report:?}");
        assert_eq!(report.rhs, int(4u32).into());
        assert_eq!(report.lhs, frac(24u32, 10u32).into());
        // Independent scan over the six candidates.
        let sizes: Vec<usize> = (1..7)
            .map(|c| sumset(&x, &dilate(c, &x).unwrap()).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![3, 4, 4, 4, 4, 3]);
        let collisions: Vec<u128> = (1..7).map(|c| collision_count(&x, &x, c).unwrap()).collect();
        assert_eq!(collisions, vec![6, 4, 4, 4, 4, 6]);
        // Equality in Cauchy-Schwarz: all fibers are singletons.
        assert_eq!(report.witness.unwrap()["second_bound_strict"], false);
    }

    #[test]
    fn trivial_cases() {
        let p = Prime::new(11).unwrap();
        let x = set(&p, &[2, 5]);
        let (xi, r) = best_dilate(&x, &x, &set(&p, &[1])).unwrap();
        assert_eq!(xi, 1);
        assert!(r.holds);

        let one = set(&p, &[4]);
        let (_, r) = best_dilate(&one, &set(&p, &[9]), &set(&p, &[3, 7])).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, int(1u32).into());

        assert!(matches!(
            best_dilate(&x, &x, &set(&p, &[0, 1])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            best_dilate(&x, &x, &FpSet::empty(&p)),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn quotient_membership_examples() {
        let p5 = Prime::new(5).unwrap();
        let x = set(&p5, &[0, 1]);
        assert!(in_quotient_set(1, &x, &x).unwrap());
        assert!(in_quotient_set(0, &x, &x).unwrap());
        assert!(matches!(
            in_quotient_set(1, &x, &set(&p5, &[1])),
            Err(Error::Precondition(_))
        ));

        let p11 = Prime::new(11).unwrap();
        let x = set(&p11, &[0, 1]);
        let q = quotient_set(&x, &x).unwrap();
        for xi in 0..11 {
            assert_eq!(in_quotient_set(xi, &x, &x).unwrap(), q.contains(xi));
        }
        let r = verify_quotient_membership(&x, &x, None).unwrap();
        assert!(r.holds);
    }
}
