//! Orthogonality machinery on the Fourier side: exact membership in the
//! zero set of the measure transform, construction of the maximal
//! orthogonal frequency families, pairwise certificates, the finite bound
//! certificate, the reachability dichotomy, an independent max-clique
//! oracle, and the end-to-end `n*` pipeline.

use num_complex::Complex64;
use num_integer::Integer as _;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};

use crate::error::{AffError, Result};
use crate::exact::{euler_phi, int, IMat2, Int, QMat2, QVec2, Rat};
use crate::mask::{mask_eval_numeric, zero_cosets_3digit, DigitSet3, ZeroSetDescription};
use crate::orbit::{gen_a, gen_e, thm34_hypotheses};
use crate::transform::{
    build_a3, classify, digit_matrix, normalize_digits, verify_prop39, Case, CaseReport,
    TransformData,
};

/// A frequency kept as `scale * direction`, so the astronomically large
/// scales of the constructions stay symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frequency {
    pub scale: Int,
    pub direction: QVec2,
}

impl Frequency {
    pub fn new(scale: Int, direction: QVec2) -> Self {
        Self { scale, direction }
    }

    pub fn from_point(p: QVec2) -> Self {
        Self {
            scale: Int::one(),
            direction: p,
        }
    }

    pub fn value(&self) -> QVec2 {
        self.direction.scale(&Rat::from(self.scale.clone()))
    }
}

/// Outcome of the zero-set membership search along `(M^*)^{-j} xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// `(M^*)^{-j} xi` lies in the recorded coset of `Z(m_D)`.
    Witness { j: u64, coset: usize },
    /// All later iterates provably stay below the zero set's minimum norm.
    Refuted { j: u64 },
    /// Iteration cap reached before either decision.
    Inconclusive { j: u64 },
}

impl Membership {
    pub fn is_witness(&self) -> bool {
        matches!(self, Membership::Witness { .. })
    }
}

/// `(M^*)^{-1}` as an exact rational matrix.
fn inv_transpose(m: &IMat2) -> Result<QMat2> {
    let det = m.det();
    if det.is_zero() {
        return Err(AffError::Domain("singular matrix".into()));
    }
    Ok(m.transpose().adjugate().to_qmat().scale(&Rat::from(det).recip()))
}

/// Contraction data for refutation soundness: the least `k` with
/// `|A^k|_inf < 1` and `c = max_{0 <= r < k} |A^r|_inf`. Every later
/// iterate satisfies `|A^n v| <= c |v|`, so once `c |v_j| < min_norm`
/// no zero can occur at any `j' >= j`.
fn contraction_bound(a: &QMat2) -> Option<Rat> {
    let one = Rat::one();
    let mut pow = QMat2::identity();
    let mut c = Rat::one();
    for _ in 0..64 {
        pow = pow.mul(a);
        let n = pow.opnorm_inf();
        if n < one {
            return Some(c);
        }
        if n > c {
            c = n;
        }
    }
    None
}

/// Default iteration cap: generous in the bit length of the scale, since
/// the decay per step is at least a fixed factor.
pub fn default_jmax(scale: &Int) -> u64 {
    64 * scale.bits().max(1)
}

/// Decide whether `xi` lies in `Z(mu-hat) = union_j M^{*j} Z(m_D)` by
/// iterating `v_j = (M^*)^{-j} xi` exactly.
pub fn zero_membership(
    xi: &QVec2,
    m: &IMat2,
    zs: &ZeroSetDescription,
    j_max: u64,
) -> Result<Membership> {
    if xi.is_zero() {
        return Err(AffError::Domain("zero frequency difference".into()));
    }
    if !m.is_expanding() {
        return Err(AffError::Domain("matrix is not expanding".into()));
    }
    let a = inv_transpose(m)?;
    let c = contraction_bound(&a);
    let mut v = xi.clone();
    let mut j = 0u64;
    loop {
        j += 1;
        v = a.mul_vec(&v);
        if let Some(ci) = zs.coset_index(&v) {
            return Ok(Membership::Witness { j, coset: ci });
        }
        if let Some(c) = &c {
            if c * v.norm_inf() < zs.min_norm {
                return Ok(Membership::Refuted { j });
            }
        }
        if j >= j_max {
            return Ok(Membership::Inconclusive { j });
        }
    }
}

/// One decided pair of a certificate; indices refer to the frequency list.
#[derive(Debug, Clone)]
pub struct PairResult {
    pub a: usize,
    pub b: usize,
    pub outcome: Membership,
}

#[derive(Debug, Clone)]
pub struct OrthoCertificate {
    pub pairs: Vec<PairResult>,
    pub size: usize,
}

impl OrthoCertificate {
    pub fn complete(&self) -> bool {
        self.pairs.iter().all(|p| p.outcome.is_witness())
    }

    /// Independent re-validation: recompute `(M^*)^{-j}` of each recorded
    /// difference and confirm the recorded coset contains it.
    pub fn recheck(&self, lambda: &[Frequency], m: &IMat2, zs: &ZeroSetDescription) -> Result<bool> {
        let ainv = inv_transpose(m)?;
        for pr in &self.pairs {
            if let Membership::Witness { j, coset } = &pr.outcome {
                let mut v = lambda[pr.a].value().sub(&lambda[pr.b].value());
                for _ in 0..*j {
                    v = ainv.mul_vec(&v);
                }
                if !zs.cosets[*coset].contains(&v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Decide all pairs of a candidate orthogonal family.
pub fn verify_orthogonal(
    lambda: &[Frequency],
    m: &IMat2,
    zs: &ZeroSetDescription,
    j_max: Option<u64>,
) -> Result<OrthoCertificate> {
    let values: Vec<QVec2> = lambda.iter().map(|f| f.value()).collect();
    for (i, v) in values.iter().enumerate() {
        for w in values.iter().skip(i + 1) {
            if v == w {
                return Err(AffError::Domain("duplicate frequencies".into()));
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..lambda.len() {
        for k in (i + 1)..lambda.len() {
            let d = values[i].sub(&values[k]);
            let cap = j_max.unwrap_or_else(|| default_jmax(&lambda[i].scale));
            let outcome = zero_membership(&d, m, zs, cap)?;
            pairs.push(PairResult {
                a: i,
                b: k,
                outcome,
            });
        }
    }
    Ok(OrthoCertificate {
        pairs,
        size: lambda.len(),
    })
}

/// Finite bound certificate: `0 not in Z'`, `Z(m_D)` reduces into `Z'`,
/// and `Z'` is stable under `x -> frac(M^* x)`; a valid certificate bounds
/// any orthogonal family by `|Z'| + 1`.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub zprime: BTreeSet<QVec2>,
    pub zero_excluded: bool,
    pub containment: bool,
    pub stable: bool,
    pub bound: usize,
}

impl BoundCertificate {
    pub fn valid(&self) -> bool {
        self.zero_excluded && self.containment && self.stable
    }
}

pub fn upper_bound_certificate(
    m: &IMat2,
    zs: &ZeroSetDescription,
    zprime: &BTreeSet<QVec2>,
) -> BoundCertificate {
    let zero_excluded = !zprime.contains(&QVec2::zero());
    let containment = zs
        .cosets
        .iter()
        .all(|c| c.reduced_points().is_subset(zprime));
    let mt = m.transpose();
    let stable = zprime
        .iter()
        .all(|z| zprime.contains(&mt.mul_vec(z).frac()));
    BoundCertificate {
        zprime: zprime.clone(),
        zero_excluded,
        containment,
        stable,
        bound: zprime.len() + 1,
    }
}

/// The reachability dichotomy: the union of `(M^*)^j` images of the
/// reduced zero slice over `1 <= j <= q^2 - 1` either fills the punctured
/// grid (forcing the count `q^2`) or stays proper (count `< q^2`).
#[derive(Debug, Clone)]
pub struct Dichotomy {
    pub reaches: bool,
    pub union: BTreeSet<QVec2>,
}

pub fn lemma37_dichotomy(m: &IMat2, d: &DigitSet3, q: u64) -> Result<Dichotomy> {
    if m.det().gcd(&int(q as i64)) != Int::one() {
        return Err(AffError::Hypothesis(format!("gcd(det M, {q}) != 1")));
    }
    let slice = crate::mask::zd2_slice(d, q);
    if slice.points.is_empty() {
        return Err(AffError::Hypothesis(format!(
            "zero slice at denominator {q} is empty"
        )));
    }
    let grid = gen_e(q, true)?.points;
    if !slice.points.is_subset(&grid) {
        return Err(AffError::Hypothesis("zero slice leaves the punctured grid".into()));
    }
    let mt = m.transpose();
    let mut current: BTreeSet<QVec2> = slice.points;
    let mut union = BTreeSet::new();
    for _ in 1..q * q {
        current = current.iter().map(|z| mt.mul_vec(z).frac()).collect();
        union.extend(current.iter().cloned());
    }
    debug_assert!(union.is_subset(&grid));
    Ok(Dichotomy {
        reaches: union == grid,
        union,
    })
}

/// The scale factor making grid differences reachable whenever their
/// residue is: `L^{phi(q) (q^2 - 1)}` with `L = det M`.
pub fn clique_scale(m: &IMat2, q: u64) -> Result<Int> {
    let e = euler_phi(q)? * (q * q - 1);
    Ok(m.det().pow(e as u32))
}

/// Exact maximum clique of the orthogonality graph on
/// `scale * ({0} + punctured grid)`: an edge joins `u, v` when the scaled
/// difference has a zero-set witness. Scale-1 differences generally have
/// none (the image lattice `M^{*j} Z^2` is proper), so callers pass the
/// construction scale from [`clique_scale`]. Branch and bound with lazily
/// cached edge tests; cliques are genuine orthogonal families, and the
/// vertex count caps the answer at `q^2`.
pub fn max_orthogonal_clique(
    m: &IMat2,
    zs: &ZeroSetDescription,
    q: u64,
    scale: &Int,
) -> Result<(usize, Vec<QVec2>)> {
    let mut vertices = vec![QVec2::zero()];
    vertices.extend(gen_e(q, true)?.points);
    let n = vertices.len();
    let scale_r = Rat::from(scale.clone());
    let cap = default_jmax(scale);
    let mut cache: HashMap<(usize, usize), bool> = HashMap::new();
    let edge = |a: usize, b: usize, cache: &mut HashMap<(usize, usize), bool>| -> Result<bool> {
        let key = (a.min(b), a.max(b));
        if let Some(&e) = cache.get(&key) {
            return Ok(e);
        }
        let d = vertices[key.0].sub(&vertices[key.1]).scale(&scale_r);
        let e = zero_membership(&d, m, zs, cap)?.is_witness();
        cache.insert(key, e);
        Ok(e)
    };
    let mut best: Vec<usize> = Vec::new();
    // iterative branch and bound over (current clique, candidate list)
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..n).collect())];
    while let Some((cur, cands)) = stack.pop() {
        if cur.len() + cands.len() <= best.len() {
            continue;
        }
        if cands.is_empty() {
            if cur.len() > best.len() {
                best = cur;
            }
            continue;
        }
        let mut cands = cands;
        let v = cands.remove(0);
        // branch 1: skip v
        stack.push((cur.clone(), cands.clone()));
        // branch 2: take v, filter candidates to neighbors of v
        let mut with_v = cur;
        with_v.push(v);
        let mut filtered = Vec::new();
        for &u in &cands {
            if edge(v, u, &mut cache)? {
                filtered.push(u);
            }
        }
        if with_v.len() + filtered.len() > best.len() {
            if filtered.is_empty() && with_v.len() > best.len() {
                best = with_v;
            } else {
                stack.push((with_v, filtered));
            }
        }
    }
    let witness: Vec<QVec2> = best.iter().map(|&i| vertices[i].clone()).collect();
    Ok((witness.len(), witness))
}

/// Truncated transform product (numeric, sanity cross-check only): the
/// iterates are computed exactly and only the final mask evaluation is
/// floating point.
pub fn mu_hat_numeric(xi: &QVec2, m: &IMat2, d: &DigitSet3, depth: u32) -> Result<Complex64> {
    let a = inv_transpose(m)?;
    let digits = d.digits();
    let mut v = xi.clone();
    let mut prod = Complex64::new(1.0, 0.0);
    for _ in 0..depth {
        v = a.mul_vec(&v);
        prod *= mask_eval_numeric(&digits, &v);
    }
    Ok(prod)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The family `Lambda = N L^{phi(p^eta) (p^2-1) p^(eta-1)} E_{p^eta}^2`
/// of `p^(2 eta)` frequencies, after exact verification of all of its
/// hypotheses (including `N(A_p(eta) + Z^2)` inside the zero set).
pub fn construct_lambda_thm12(
    m0: &IMat2,
    d: &DigitSet3,
    p: u64,
    eta_bar: u32,
    n: &Int,
) -> Result<Vec<Frequency>> {
    if !is_prime(p) || p < 3 {
        return Err(AffError::Domain(format!(
            "sharpness construction requires an odd prime, got p = {p}"
        )));
    }
    let l = m0.det();
    if l.gcd(&int(p as i64)) != Int::one() {
        return Err(AffError::Hypothesis("gcd(det M0, p) != 1".into()));
    }
    if (n % int(p as i64)).is_zero() {
        return Err(AffError::Hypothesis("N is divisible by p".into()));
    }
    if !m0.is_expanding() {
        return Err(AffError::Hypothesis("M0 is not expanding".into()));
    }
    thm34_hypotheses(&m0.transpose(), p)?;
    // N(A_p(eta) + Z^2) inside the zero set: for each seed a, the coset
    // holding N a must also absorb N Z^2
    let zs = zero_cosets_3digit(d)?;
    let nr = Rat::from(n.clone());
    let shift_x = QVec2::new(nr.clone(), Rat::zero());
    let shift_y = QVec2::new(Rat::zero(), nr.clone());
    for a in &gen_a(p, eta_bar, None)?.points {
        let na = a.scale(&nr);
        let ci = zs.coset_index(&na).ok_or_else(|| {
            AffError::Hypothesis(format!("N * seed {na:?} is not a zero of the mask"))
        })?;
        let c = &zs.cosets[ci];
        if !c.contains(&na.add(&shift_x)) || !c.contains(&na.add(&shift_y)) {
            return Err(AffError::Hypothesis(
                "coset lattice does not absorb N Z^2".into(),
            ));
        }
    }
    let exp = euler_phi(p.pow(eta_bar))? * (p * p - 1) * p.pow(eta_bar - 1);
    let scale = n * l.pow(exp as u32);
    Ok(gen_e(p.pow(eta_bar), false)?
        .points
        .into_iter()
        .map(|dir| Frequency::new(scale.clone(), dir))
        .collect())
}

/// The 9-element family `Lambda = L^{16 * 9^eta} tau theta E` of the
/// second sharpness construction, over denominator `3^(eta+1)`.
pub fn construct_lambda_case2(m3: &IMat2, data: &TransformData) -> Result<Vec<Frequency>> {
    let eta = data.eta;
    if eta == 0 {
        return Err(AffError::Hypothesis("construction requires eta >= 1".into()));
    }
    if !m3.is_expanding() {
        return Err(AffError::Hypothesis("M3 is not expanding".into()));
    }
    // M3^* must be N-bar * [[0,1],[1,1]] with N-bar = 1 mod 9
    let mt = m3.transpose();
    let nbar = mt.b.clone();
    let expect = IMat2::from_ints(
        Int::zero(),
        nbar.clone(),
        nbar.clone(),
        nbar.clone(),
    );
    if mt != expect || !((&nbar - Int::one()) % int(9)).is_zero() {
        return Err(AffError::Hypothesis(
            "M3^* is not of the scaled-generator form".into(),
        ));
    }
    let rep = verify_prop39(data, 2)?;
    if !rep.case_i || !rep.ok() {
        return Err(AffError::Hypothesis(
            "seed-set inclusion unavailable for this digit data".into(),
        ));
    }
    let l = m3.det();
    let exp = 16u32 * 9u32.pow(eta);
    let scale = l.pow(exp) * &data.tau * &data.theta;
    let denom = 3i64.pow(eta + 1);
    let mut out = Vec::new();
    for i in 0..3i64 {
        for j in 0..3i64 {
            out.push(Frequency::new(
                scale.clone(),
                QVec2::new(Rat::new(int(i), int(denom)), Rat::new(int(j), int(denom))),
            ));
        }
    }
    Ok(out)
}

/// End-to-end report: classification, certified upper bound, constructed
/// family with its certificate, and the optional independent clique count.
#[derive(Debug, Clone)]
pub struct NStarReport {
    pub classification: CaseReport,
    pub bound_certificate: BoundCertificate,
    /// Frame of verification: conjugation applied before certifying.
    pub conjugation: Option<IMat2>,
    pub lambda: Vec<Frequency>,
    pub certificate: Option<OrthoCertificate>,
    pub dichotomy: Option<Dichotomy>,
    pub clique: Option<usize>,
    pub nstar: Option<Int>,
    pub notes: Vec<String>,
}

impl NStarReport {
    pub fn determined(&self) -> bool {
        self.nstar.is_some()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NStarOptions {
    pub run_clique: bool,
    pub j_max: Option<u64>,
}

impl Default for NStarOptions {
    fn default() -> Self {
        Self {
            run_clique: true,
            j_max: None,
        }
    }
}

/// The full pipeline behind the headline number: classify, certify the
/// upper bound in a conjugated frame, construct the matching family where
/// the hypotheses allow it, and cross-check with the clique oracle.
pub fn nstar(m: &IMat2, d: &DigitSet3, opts: &NStarOptions) -> Result<NStarReport> {
    let classification = classify(m, d)?;
    let (nd, _) = normalize_digits(d)?;
    let mut notes = Vec::new();
    match classification.case {
        Case::I => nstar_case_i(m, &nd, classification, opts, &mut notes),
        Case::Ii => nstar_case_ii(m, &nd, classification, opts, &mut notes),
    }
}

fn nstar_case_i(
    m: &IMat2,
    d: &DigitSet3,
    classification: CaseReport,
    opts: &NStarOptions,
    notes: &mut Vec<String>,
) -> Result<NStarReport> {
    // upper bound over D1 = D / (pair det): zeros land on thirds
    let delta = d.pair_det();
    let d1 = DigitSet3::new(d.alpha.scale(&delta.recip()), d.beta.scale(&delta.recip()))?;
    let zs1 = zero_cosets_3digit(&d1)?;
    let zprime = gen_e(3, true)?.points;
    let bound_certificate = upper_bound_certificate(m, &zs1, &zprime);
    if !bound_certificate.valid() {
        notes.push("upper-bound certificate invalid; bound not established".into());
    }
    let pair_det_int = delta.to_integer();
    if (&pair_det_int % int(3)).is_zero() {
        // sub-case with pair det in 3Z: third coordinate change
        let (_, d3, m3, data) = build_a3(m, d)?;
        let zs3 = zero_cosets_3digit(&d3)?;
        match construct_lambda_case2(&m3, &data) {
            Ok(lambda) => {
                let certificate = verify_orthogonal(&lambda, &m3, &zs3, opts.j_max)?;
                let complete = certificate.complete();
                let nstar = if complete && bound_certificate.valid() && lambda.len() == 9 {
                    Some(int(9))
                } else {
                    None
                };
                Ok(NStarReport {
                    classification,
                    bound_certificate,
                    conjugation: Some(m3),
                    lambda,
                    certificate: Some(certificate),
                    dichotomy: None,
                    clique: None,
                    nstar,
                    notes: std::mem::take(notes),
                })
            }
            Err(AffError::Hypothesis(h)) => {
                notes.push(format!("lower construction unavailable: {h}"));
                Ok(NStarReport {
                    classification,
                    bound_certificate,
                    conjugation: Some(m3),
                    lambda: Vec::new(),
                    certificate: None,
                    dichotomy: None,
                    clique: None,
                    nstar: None,
                    notes: std::mem::take(notes),
                })
            }
            Err(e) => Err(e),
        }
    } else {
        // pair det a unit mod 3: conjugate to the standard digits
        let a2 = digit_matrix(d);
        let m2q = a2.inverse()?.mul(&m.to_qmat()).mul(&a2);
        let Some(m2) = m2q.as_integer() else {
            notes.push("conjugated matrix not integral; bounds only".into());
            return Ok(NStarReport {
                classification,
                bound_certificate,
                conjugation: None,
                lambda: Vec::new(),
                certificate: None,
                dichotomy: None,
                clique: None,
                nstar: None,
                notes: std::mem::take(notes),
            });
        };
        if !m2.is_expanding() {
            notes.push("conjugated matrix not expanding; bounds only".into());
            return Ok(NStarReport {
                classification,
                bound_certificate,
                conjugation: Some(m2),
                lambda: Vec::new(),
                certificate: None,
                dichotomy: None,
                clique: None,
                nstar: None,
                notes: std::mem::take(notes),
            });
        }
        let d2 = crate::mask::standard_digits();
        let zs2 = zero_cosets_3digit(&d2)?;
        let dichotomy = lemma37_dichotomy(&m2, &d2, 3)?;
        let (mut lambda, mut certificate, mut clique) = (Vec::new(), None, None);
        let mut nstar = None;
        if dichotomy.reaches {
            let scale = clique_scale(&m2, 3)?;
            let (size, witness) = max_orthogonal_clique(&m2, &zs2, 3, &scale)?;
            clique = Some(size);
            lambda = witness
                .into_iter()
                .map(|p| Frequency::new(scale.clone(), p))
                .collect();
            let cert = verify_orthogonal(&lambda, &m2, &zs2, opts.j_max)?;
            let complete = cert.complete();
            certificate = Some(cert);
            if complete && bound_certificate.valid() && size == 9 {
                nstar = Some(int(9));
            }
        } else {
            notes.push("reachability union proper: count below 9".into());
        }
        if !opts.run_clique {
            clique = None;
        }
        Ok(NStarReport {
            classification,
            bound_certificate,
            conjugation: Some(m2),
            lambda,
            certificate,
            dichotomy: Some(dichotomy),
            clique,
            nstar,
            notes: std::mem::take(notes),
        })
    }
}

fn nstar_case_ii(
    m: &IMat2,
    d: &DigitSet3,
    classification: CaseReport,
    opts: &NStarOptions,
    notes: &mut Vec<String>,
) -> Result<NStarReport> {
    let eta = classification.eta;
    let (_, d3, m3, data) = build_a3(m, d)?;
    let zs3 = zero_cosets_3digit(&d3)?;
    let zprime = gen_e(3u64.pow(eta), true)?.points;
    let bound_certificate = upper_bound_certificate(&m3, &zs3, &zprime);
    if !bound_certificate.valid() {
        notes.push("upper-bound certificate invalid; bound not established".into());
    }
    let n = &data.tau * &data.theta;
    match construct_lambda_thm12(&m3, &d3, 3, eta, &n) {
        Ok(lambda) => {
            let certificate = verify_orthogonal(&lambda, &m3, &zs3, opts.j_max)?;
            let complete = certificate.complete();
            let expected = 9usize.pow(eta);
            let nstar = if complete && bound_certificate.valid() && lambda.len() == expected {
                Some(int(3).pow(2 * eta))
            } else {
                None
            };
            let clique = if opts.run_clique && eta == 1 {
                Some(max_orthogonal_clique(&m3, &zs3, 3, &lambda[0].scale)?.0)
            } else {
                None
            };
            Ok(NStarReport {
                classification,
                bound_certificate,
                conjugation: Some(m3),
                lambda,
                certificate: Some(certificate),
                dichotomy: None,
                clique,
                nstar,
                notes: std::mem::take(notes),
            })
        }
        Err(AffError::Hypothesis(h)) => {
            notes.push(format!("lower construction unavailable: {h}"));
            Ok(NStarReport {
                classification,
                bound_certificate,
                conjugation: Some(m3),
                lambda: Vec::new(),
                certificate: None,
                dichotomy: None,
                clique: None,
                nstar: None,
                notes: std::mem::take(notes),
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::mask::standard_digits;

    fn d2_zeros() -> ZeroSetDescription {
        zero_cosets_3digit(&standard_digits()).unwrap()
    }

    #[test]
    fn membership_constructed_witness() {
        let m = IMat2::new(0, 2, 2, 2);
        let zs = d2_zeros();
        // xi = M^* z for a zero z has witness j = 1
        let z = QVec2::new(rat(1, 3), rat(2, 3));
        let xi = m.transpose().mul_vec(&z);
        let r = zero_membership(&xi, &m, &zs, 100).unwrap();
        assert_eq!(r, Membership::Witness { j: 1, coset: 0 });
    }

    #[test]
    fn membership_integer_refuted() {
        let m = IMat2::new(0, 2, 2, 2);
        let zs = d2_zeros();
        let r = zero_membership(&QVec2::from_i64(1, 0), &m, &zs, 1000).unwrap();
        assert!(matches!(r, Membership::Refuted { .. }), "{r:?}");
    }

    #[test]
    fn membership_refutation_stable_under_larger_caps() {
        let m = IMat2::new(3, 1, 0, 2);
        let zs = d2_zeros();
        let xi = QVec2::new(rat(1, 7), rat(3, 7));
        let r1 = zero_membership(&xi, &m, &zs, 200).unwrap();
        let r2 = zero_membership(&xi, &m, &zs, 400).unwrap();
        match (&r1, &r2) {
            (Membership::Witness { j: a, .. }, Membership::Witness { j: b, .. }) => {
                assert_eq!(a, b)
            }
            (Membership::Refuted { .. }, Membership::Refuted { .. }) => {}
            other => panic!("unstable outcomes {other:?}"),
        }
    }

    #[test]
    fn membership_zero_rejected() {
        let m = IMat2::new(0, 2, 2, 2);
        assert!(zero_membership(&QVec2::zero(), &m, &d2_zeros(), 10).is_err());
    }

    #[test]
    fn dichotomy_generator_reaches() {
        // 2 * [[0,1],[1,1]] acts ergodically mod 3, so the union fills
        let m = IMat2::new(0, 2, 2, 2);
        let r = lemma37_dichotomy(&m, &standard_digits(), 3).unwrap();
        assert!(r.reaches);
        assert_eq!(r.union.len(), 8);
    }

    #[test]
    fn dichotomy_scaled_identity_proper() {
        let m = IMat2::new(2, 0, 0, 2);
        let r = lemma37_dichotomy(&m, &standard_digits(), 3).unwrap();
        assert!(!r.reaches);
        assert_eq!(r.union.len(), 2);
    }

    #[test]
    fn bound_certificate_examples() {
        let m = IMat2::new(0, 2, 2, 2);
        let zs = d2_zeros();
        let zp = gen_e(3, true).unwrap().points;
        let c = upper_bound_certificate(&m, &zs, &zp);
        assert!(c.valid());
        assert_eq!(c.bound, 9);

        // a set containing zero is invalid
        let zp_bad = gen_e(3, false).unwrap().points;
        let c = upper_bound_certificate(&m, &zs, &zp_bad);
        assert!(!c.valid());
        assert!(!c.zero_excluded);
    }

    #[test]
    fn clique_case1_is_nine() {
        let m = IMat2::new(0, 2, 2, 2);
        let zs = d2_zeros();
        let scale = clique_scale(&m, 3).unwrap();
        let (size, witness) = max_orthogonal_clique(&m, &zs, 3, &scale).unwrap();
        assert_eq!(size, 9);
        let lambda: Vec<Frequency> = witness
            .into_iter()
            .map(|p| Frequency::new(scale.clone(), p))
            .collect();
        let cert = verify_orthogonal(&lambda, &m, &zs, None).unwrap();
        assert!(cert.complete());
        assert!(cert.recheck(&lambda, &m, &zs).unwrap());
    }

    #[test]
    fn clique_degenerate_below_nine() {
        let m = IMat2::new(2, 0, 0, 2);
        let zs = d2_zeros();
        let scale = clique_scale(&m, 3).unwrap();
        let (size, _) = max_orthogonal_clique(&m, &zs, 3, &scale).unwrap();
        assert!(size < 9, "got {size}");
    }

    #[test]
    fn lambda_thm12_eta1() {
        // conjugated frame of D = {0,(2,1),(1,2)}: digits {0,(1,0),(2,3)},
        // matrix 10 * [[0,1],[1,1]]
        let m3 = IMat2::new(0, 10, 10, 10);
        let d3 = DigitSet3::from_i64(1, 0, 2, 3).unwrap();
        let lambda = construct_lambda_thm12(&m3, &d3, 3, 1, &int(1)).unwrap();
        assert_eq!(lambda.len(), 9);
        assert!(lambda.iter().any(|f| f.direction.is_zero()));
        let zs = zero_cosets_3digit(&d3).unwrap();
        let cert = verify_orthogonal(&lambda, &m3, &zs, None).unwrap();
        assert!(cert.complete());
        // every witness within the proof's bound
        for p in &cert.pairs {
            if let Membership::Witness { j, .. } = p.outcome {
                assert!(j <= 8, "witness j = {j}");
            }
        }
    }

    #[test]
    fn lambda_case2_eta1() {
        // D = {0,(1,0),(1,3)}: case I with pair det 3; A3 = I, M3 = 10 M-hat
        let m3 = IMat2::new(0, 10, 10, 10);
        let d = DigitSet3::from_i64(1, 0, 1, 3).unwrap();
        let (_, d3, m3b, data) = build_a3(&m3, &d).unwrap();
        assert_eq!(m3b, m3);
        let lambda = construct_lambda_case2(&m3b, &data).unwrap();
        assert_eq!(lambda.len(), 9);
        let zs = zero_cosets_3digit(&d3).unwrap();
        let cert = verify_orthogonal(&lambda, &m3b, &zs, None).unwrap();
        assert!(cert.complete());
    }

    #[test]
    fn nstar_case1_pipeline() {
        // conjugate of (2 M-hat, standard digits) by the digit matrix of
        // D = {0,(1,2),(1,1)}
        let m = IMat2::new(6, -2, 10, -4);
        let d = DigitSet3::from_i64(1, 2, 1, 1).unwrap();
        let rep = nstar(&m, &d, &NStarOptions::default()).unwrap();
        assert_eq!(rep.nstar, Some(int(9)), "{:?}", rep.notes);
        assert_eq!(rep.clique, Some(9));
        assert!(rep.certificate.as_ref().unwrap().complete());
        assert!(rep.bound_certificate.valid());
    }

    #[test]
    fn nstar_case2_eta1_pipeline() {
        let m = IMat2::new(-10, 10, -10, 20);
        let d = DigitSet3::from_i64(2, 1, 1, 2).unwrap();
        let rep = nstar(&m, &d, &NStarOptions::default()).unwrap();
        assert_eq!(rep.nstar, Some(int(9)), "{:?}", rep.notes);
        assert!(rep.certificate.as_ref().unwrap().complete());
    }

    #[test]
    fn nstar_adversarial_bounds_only() {
        // expanding, det not in 3Z, but the conjugated matrix fails the
        // orbit hypotheses: bounds only, not an error
        let m = IMat2::new(2, 0, 0, 2);
        let d = DigitSet3::from_i64(2, 1, 1, 2).unwrap();
        let rep = nstar(&m, &d, &NStarOptions::default()).unwrap();
        assert!(!rep.determined());
        assert!(rep.bound_certificate.valid());
        assert!(!rep.notes.is_empty());
    }

    #[test]
    fn mu_hat_values() {
        let m = IMat2::new(0, 2, 2, 2);
        let d = standard_digits();
        let zero = mu_hat_numeric(&QVec2::zero(), &m, &d, 32).unwrap();
        assert!((zero.norm() - 1.0).abs() < 1e-12);

        let z = QVec2::new(rat(1, 3), rat(2, 3));
        let xi = m.transpose().mul_vec(&z);
        let v = mu_hat_numeric(&xi, &m, &d, 64).unwrap();
        assert!(v.norm() < 1e-8, "norm {}", v.norm());
    }

    #[test]
    fn scaling_transport() {
        // raising the scale exponent by a multiple of phi(3) keeps the
        // certificate complete
        let m3 = IMat2::new(0, 10, 10, 10);
        let d3 = DigitSet3::from_i64(1, 0, 2, 3).unwrap();
        let zs = zero_cosets_3digit(&d3).unwrap();
        let base = construct_lambda_thm12(&m3, &d3, 3, 1, &int(1)).unwrap();
        let l = m3.det();
        let boosted: Vec<Frequency> = base
            .iter()
            .map(|f| Frequency::new(&f.scale * l.pow(2), f.direction.clone()))
            .collect();
        let cert = verify_orthogonal(&boosted, &m3, &zs, None).unwrap();
        assert!(cert.complete());
    }
}
