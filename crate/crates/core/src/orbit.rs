//! Frequency grids on the torus and the orbit machinery: the seed sets
//! `A_p(s)`, orbits `B_{p,s}(l)` under an ergodic matrix, the induced
//! partition of the seed indices, and direct verification of the orbit
//! theorems (orbit sizes, class sizes, stratified union) together with the
//! permutation lemma on punctured grids.

use num_integer::Integer as _;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{AffError, Result};
use crate::exact::{int, rat, IMat2, QVec2};
use crate::orders::{order_mod, unit_shift};

/// A finite set of canonical frequency points in `[0, 1)^2` with a common
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    pub denom: u64,
    pub points: BTreeSet<QVec2>,
}

/// The full or punctured grid `E_q^2` of `q`-denominator points.
pub fn gen_e(q: u64, punctured: bool) -> Result<FrequencySet> {
    if q < 2 {
        return Err(AffError::Domain("q must be at least 2".into()));
    }
    let mut points = BTreeSet::new();
    for l1 in 0..q {
        for l2 in 0..q {
            if punctured && l1 == 0 && l2 == 0 {
                continue;
            }
            points.insert(QVec2::new(rat(l1 as i64, q as i64), rat(l2 as i64, q as i64)));
        }
    }
    Ok(FrequencySet { denom: q, points })
}

/// The seed column set `A_p(s) = {(p^{s-1}, l) / p^s}`, optionally
/// restricted to the residue class `l = i (mod 3)` (defined for `p = 3`).
pub fn gen_a(p: u64, s: u32, residue_class: Option<u8>) -> Result<FrequencySet> {
    if p < 2 {
        return Err(AffError::Domain("p must be at least 2".into()));
    }
    if s < 1 {
        return Err(AffError::Domain("s must be at least 1".into()));
    }
    if let Some(i) = residue_class {
        if p != 3 {
            return Err(AffError::Domain(
                "residue classes of the seed set are defined for p = 3".into(),
            ));
        }
        if i > 2 {
            return Err(AffError::Domain("residue class must be 0, 1 or 2".into()));
        }
    }
    let ps = p.pow(s);
    let ps1 = p.pow(s - 1);
    let mut points = BTreeSet::new();
    for l in 0..ps {
        if let Some(i) = residue_class {
            if l % 3 != i as u64 {
                continue;
            }
        }
        points.insert(QVec2::new(
            rat(ps1 as i64, ps as i64),
            rat(l as i64, ps as i64),
        ));
    }
    Ok(FrequencySet { denom: ps, points })
}

/// Seed indices `T_{p,s} = {0 <= l < p^s : p does not divide l}`.
pub fn seed_indices(p: u64, s: u32) -> Vec<u64> {
    (0..p.pow(s)).filter(|l| l % p != 0).collect()
}

fn seed_point(p: u64, s: u32, l: u64) -> QVec2 {
    let ps = p.pow(s) as i64;
    QVec2::new(rat(p.pow(s - 1) as i64, ps), rat(l as i64, ps))
}

/// The orbit `B_{p,s}(l)`: canonical images of
/// `M^j (p^{s-1}, l)^t / p^s` for `j = 1 .. iota * p^{s-1}`.
pub fn orbit(m: &IMat2, p: u64, s: u32, l: u64) -> Result<BTreeSet<QVec2>> {
    if l % p == 0 {
        return Err(AffError::Domain(format!(
            "l = {l} is divisible by p = {p}, not a seed index"
        )));
    }
    let iota = order_mod(m, p)?.order;
    let count = iota * p.pow(s - 1);
    let mut out = BTreeSet::new();
    let mut x = seed_point(p, s, l % p.pow(s));
    for _ in 0..count {
        x = m.mul_vec(&x).frac();
        out.insert(x.clone());
    }
    Ok(out)
}

/// The orbit map and its induced partition of the seed indices into
/// equal-orbit classes.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    pub p: u64,
    pub s: u32,
    pub iota: u64,
    pub orbit_of: BTreeMap<u64, BTreeSet<QVec2>>,
    /// Sorted seed-index classes sharing one orbit, sorted by least member.
    pub classes: Vec<Vec<u64>>,
}

pub fn partition(m: &IMat2, p: u64, s: u32) -> Result<OrbitPartition> {
    let iota = order_mod(m, p)?.order;
    let mut orbit_of = BTreeMap::new();
    for l in seed_indices(p, s) {
        orbit_of.insert(l, orbit(m, p, s, l)?);
    }
    // group indices with identical orbits; verify equal-or-disjoint
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut reps: Vec<&BTreeSet<QVec2>> = Vec::new();
    for (l, b) in &orbit_of {
        match reps.iter().position(|r| *r == b) {
            Some(i) => classes[i].push(*l),
            None => {
                for r in &reps {
                    if r.intersection(b).next().is_some() {
                        return Err(AffError::Internal(
                            "orbits neither equal nor disjoint".into(),
                        ));
                    }
                }
                reps.push(b);
                classes.push(vec![*l]);
            }
        }
    }
    Ok(OrbitPartition {
        p,
        s,
        iota,
        orbit_of,
        classes,
    })
}

/// Outcome of a conditional theorem check: hypotheses may legitimately
/// fail, which is distinct from the conclusion failing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    SkippedHypothesis(String),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

#[derive(Debug, Clone)]
pub struct Thm34Report {
    pub p: u64,
    pub eta: u32,
    pub outcome: CheckOutcome,
    pub orbit_sizes_ok: bool,
    pub class_sizes_ok: bool,
    pub union_ok: bool,
    pub strata_ok: bool,
}

/// Hypotheses of the orbit theorem: `O_p(M) = p^2 - 1` and the
/// off-diagonal entry `l_2` of `A` with `M^{p^2-1} = pA + I` a unit mod `p`.
pub fn thm34_hypotheses(m: &IMat2, p: u64) -> Result<()> {
    let ord = order_mod(m, p)?.order;
    if ord != p * p - 1 {
        return Err(AffError::Hypothesis(format!(
            "O_{p}(M) = {ord}, need {}",
            p * p - 1
        )));
    }
    let a = unit_shift(m, p * p - 1, p, 1)
        .ok_or_else(|| AffError::Internal("M^{p^2-1} not congruent to I mod p".into()))?;
    if a.b.mod_floor(&int(p as i64)).is_zero() {
        return Err(AffError::Hypothesis(format!(
            "l_2 of the unit shift is divisible by {p}"
        )));
    }
    Ok(())
}

/// Full verification of the orbit theorem at level `eta`: orbit sizes
/// `(p^2 - 1) p^{s-1}`, class sizes `p - 1`, the stratified union equal to
/// the punctured grid, and the per-residue-class strata identities.
pub fn verify_thm34(m: &IMat2, p: u64, eta: u32) -> Result<Thm34Report> {
    if let Err(AffError::Hypothesis(h)) = thm34_hypotheses(m, p) {
        return Ok(Thm34Report {
            p,
            eta,
            outcome: CheckOutcome::SkippedHypothesis(h),
            orbit_sizes_ok: false,
            class_sizes_ok: false,
            union_ok: false,
            strata_ok: false,
        });
    }
    let mut orbit_sizes_ok = true;
    let mut class_sizes_ok = true;
    let mut strata_ok = true;
    let mut union: BTreeSet<QVec2> = BTreeSet::new();
    for s in 1..=eta {
        let part = partition(m, p, s)?;
        let expect = ((p * p - 1) * p.pow(s - 1)) as usize;
        orbit_sizes_ok &= part.orbit_of.values().all(|b| b.len() == expect);
        class_sizes_ok &= part.classes.iter().all(|c| c.len() == (p - 1) as usize);
        // Remark 3.5: for each residue class i, the union over
        // R_{p,s}(i) of the orbits is the full stratum
        let stratum = stratum(p, s)?;
        for i in 1..p {
            let mut u: BTreeSet<QVec2> = BTreeSet::new();
            for l in seed_indices(p, s).into_iter().filter(|l| l % p == i) {
                u.extend(part.orbit_of[&l].iter().cloned());
            }
            strata_ok &= u == stratum;
        }
        for b in part.orbit_of.values() {
            union.extend(b.iter().cloned());
        }
    }
    let union_ok = union == gen_e(p.pow(eta), true)?.points;
    let outcome = if orbit_sizes_ok && class_sizes_ok && union_ok && strata_ok {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!(
            "orbit_sizes={orbit_sizes_ok} class_sizes={class_sizes_ok} union={union_ok} strata={strata_ok}"
        ))
    };
    Ok(Thm34Report {
        p,
        eta,
        outcome,
        orbit_sizes_ok,
        class_sizes_ok,
        union_ok,
        strata_ok,
    })
}

/// The stratum `E_{p^s}^2 minus E_{p^{s-1}}^2` of points whose reduced
/// denominator is exactly `p^s`.
pub fn stratum(p: u64, s: u32) -> Result<BTreeSet<QVec2>> {
    let full = gen_e(p.pow(s), true)?.points;
    let ps = int(p.pow(s) as i64);
    Ok(full
        .into_iter()
        .filter(|x| x.denominator() == ps)
        .collect())
}

/// Claim 1 of the orbit theorem, checked exhaustively: for seed indices
/// `l = l' (mod p)`, the least `1 <= k <= (p^2-1) p^{s-1}` returning the
/// seed of `l` to the seed of `l'` is the full period, and forces `l = l'`.
pub fn verify_claim1(m: &IMat2, p: u64, s: u32) -> Result<CheckOutcome> {
    if let Err(AffError::Hypothesis(h)) = thm34_hypotheses(m, p) {
        return Ok(CheckOutcome::SkippedHypothesis(h));
    }
    let period = (p * p - 1) * p.pow(s - 1);
    let indices = seed_indices(p, s);
    for &l in &indices {
        for &lp in &indices {
            if l % p != lp % p {
                continue;
            }
            let target = seed_point(p, s, lp).frac();
            let mut x = seed_point(p, s, l);
            let mut least = None;
            for k in 1..=period {
                x = m.mul_vec(&x).frac();
                if x == target {
                    least = Some(k);
                    break;
                }
            }
            match least {
                Some(k) if k == period && l == lp => {}
                Some(k) => {
                    return Ok(CheckOutcome::Fail(format!(
                        "l={l} l'={lp}: least k = {k}, expected {period} with l = l'"
                    )));
                }
                None if l != lp => {}
                None => {
                    return Ok(CheckOutcome::Fail(format!(
                        "l={l}: seed never returns within the period"
                    )));
                }
            }
        }
    }
    Ok(CheckOutcome::Pass)
}

/// Permutation lemma: `x -> frac(Mx)` restricted to the punctured grid
/// `E_q^2` is a bijection, and the reduced denominator of every point is
/// preserved.
pub fn verify_lemma25(m: &IMat2, q: u64) -> Result<bool> {
    let det = m.det();
    if det.gcd(&int(q as i64)) != int(1) {
        return Err(AffError::Domain(format!(
            "gcd(det M, {q}) != 1 (det = {det})"
        )));
    }
    let grid = gen_e(q, true)?.points;
    let mut image = BTreeSet::new();
    for x in &grid {
        let y = m.mul_vec(x).frac();
        if y.denominator() != x.denominator() {
            return Ok(false);
        }
        image.insert(y);
    }
    Ok(image == grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::find_generator;

    fn mhat() -> IMat2 {
        IMat2::new(0, 1, 1, 1)
    }

    #[test]
    fn gen_e_examples() {
        assert_eq!(gen_e(3, true).unwrap().points.len(), 8);
        assert_eq!(gen_e(9, true).unwrap().points.len(), 80);
        assert!(gen_e(3, false)
            .unwrap()
            .points
            .contains(&QVec2::new(rat(1, 3), rat(2, 3))));
        assert!(gen_e(1, true).is_err());
    }

    #[test]
    fn gen_a_examples() {
        let a31 = gen_a(3, 1, None).unwrap();
        let expect: BTreeSet<QVec2> = (0..3)
            .map(|l| QVec2::new(rat(1, 3), rat(l, 3)))
            .collect();
        assert_eq!(a31.points, expect);

        let a321 = gen_a(3, 2, Some(1)).unwrap();
        let expect: BTreeSet<QVec2> = [1i64, 4, 7]
            .into_iter()
            .map(|l| QVec2::new(rat(3, 9), rat(l, 9)))
            .collect();
        assert_eq!(a321.points, expect);

        // the three residue classes tile the full seed set
        for s in 1..=3u32 {
            let mut union = BTreeSet::new();
            for i in 0..3u8 {
                union.extend(gen_a(3, s, Some(i)).unwrap().points);
            }
            assert_eq!(union, gen_a(3, s, None).unwrap().points);
        }
        assert!(gen_a(5, 1, Some(1)).is_err());
    }

    #[test]
    fn orbit_examples() {
        // at (p, s) = (3, 1) the orbit of any seed is the whole punctured grid
        let b = orbit(&mhat(), 3, 1, 1).unwrap();
        assert_eq!(b, gen_e(3, true).unwrap().points);

        // at s = 2 the orbit has 24 points, all in the exact-denominator stratum
        let b = orbit(&mhat(), 3, 2, 1).unwrap();
        assert_eq!(b.len(), 24);
        assert!(b.iter().all(|x| x.denominator() == int(9)));

        assert!(orbit(&mhat(), 3, 2, 3).is_err());
    }

    #[test]
    fn partition_examples() {
        let p1 = partition(&mhat(), 3, 1).unwrap();
        assert_eq!(p1.classes, vec![vec![1, 2]]);

        let p2 = partition(&mhat(), 3, 2).unwrap();
        assert_eq!(seed_indices(3, 2).len(), 6);
        assert_eq!(p2.classes.len(), 3);
        assert!(p2.classes.iter().all(|c| c.len() == 2));

        let g5 = find_generator(5, 100_000).unwrap();
        let p5 = partition(&g5, 5, 1).unwrap();
        assert!(p5.classes.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn thm34_examples() {
        let rep = verify_thm34(&mhat(), 3, 1).unwrap();
        assert!(rep.outcome.passed(), "{rep:?}");
        let rep = verify_thm34(&mhat(), 3, 2).unwrap();
        assert!(rep.outcome.passed(), "{rep:?}");
        // non-ergodic matrix: hypothesis skip, not failure
        let rep = verify_thm34(&IMat2::new(1, 1, 0, 1), 3, 1).unwrap();
        assert!(matches!(rep.outcome, CheckOutcome::SkippedHypothesis(_)));
    }

    #[test]
    fn claim1_examples() {
        assert!(verify_claim1(&mhat(), 3, 2).unwrap().passed());
        let g5 = find_generator(5, 100_000).unwrap();
        if thm34_hypotheses(&g5, 5).is_ok() {
            assert!(verify_claim1(&g5, 5, 1).unwrap().passed());
        }
    }

    #[test]
    fn lemma25_examples() {
        assert!(verify_lemma25(&mhat(), 3).unwrap());
        assert!(verify_lemma25(&mhat(), 9).unwrap());
        assert!(verify_lemma25(&IMat2::new(2, 1, 1, 2), 9).is_err()); // det 3
        assert!(verify_lemma25(&IMat2::new(7, 2, 1, 4), 9).unwrap());
    }

    #[test]
    fn orbit_strata_disjoint() {
        // unions at distinct s never meet
        let u1: BTreeSet<QVec2> = partition(&mhat(), 3, 1)
            .unwrap()
            .orbit_of
            .values()
            .flatten()
            .cloned()
            .collect();
        let u2: BTreeSet<QVec2> = partition(&mhat(), 3, 2)
            .unwrap()
            .orbit_of
            .values()
            .flatten()
            .cloned()
            .collect();
        assert!(u1.intersection(&u2).next().is_none());
    }
}
