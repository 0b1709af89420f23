//! Three-element digit sets, mask polynomial evaluation, and the exact
//! coset representation of the zero set `Z(m_D)`.
//!
//! For a digit set `{0, alpha, beta}` the mask vanishes at `x` exactly when
//! `(<alpha, x>, <beta, x>)` is congruent to `(1/3, 2/3)` or `(2/3, 1/3)`
//! mod `Z^2`; everything here is built on that single congruence test.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use crate::error::{AffError, Result};
use crate::exact::{frac1, int, rat, rat_to_f64, Int, QMat2, QVec2, Rat};

/// Digit set `{0, alpha, beta}` with rational entries and
/// `alpha_1 beta_2 - alpha_2 beta_1 != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSet3 {
    pub alpha: QVec2,
    pub beta: QVec2,
}

impl DigitSet3 {
    pub fn new(alpha: QVec2, beta: QVec2) -> Result<Self> {
        let det = &alpha.x * &beta.y - &alpha.y * &beta.x;
        if det.is_zero() {
            return Err(AffError::Domain(
                "degenerate digit set: alpha_1 beta_2 - alpha_2 beta_1 = 0".into(),
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn from_i64(a1: i64, a2: i64, b1: i64, b2: i64) -> Result<Self> {
        Self::new(QVec2::from_i64(a1, a2), QVec2::from_i64(b1, b2))
    }

    /// `alpha_1 beta_2 - alpha_2 beta_1`.
    pub fn pair_det(&self) -> Rat {
        &self.alpha.x * &self.beta.y - &self.alpha.y * &self.beta.x
    }

    pub fn digits(&self) -> [QVec2; 3] {
        [QVec2::zero(), self.alpha.clone(), self.beta.clone()]
    }

    pub fn is_integral(&self) -> bool {
        self.alpha.is_integral() && self.beta.is_integral()
    }

    /// Integer entries `(a1, a2, b1, b2)` when all digits are integral.
    pub fn integer_entries(&self) -> Option<(Int, Int, Int, Int)> {
        if !self.is_integral() {
            return None;
        }
        Some((
            self.alpha.x.to_integer(),
            self.alpha.y.to_integer(),
            self.beta.x.to_integer(),
            self.beta.y.to_integer(),
        ))
    }

    /// Parse the text form "a1,a2;b1,b2" with integer or "n/d" entries.
    pub fn parse(s: &str) -> Result<Self> {
        let mut rows = s.split(';');
        let alpha = parse_qvec(rows.next().unwrap_or(""))?;
        let beta = parse_qvec(
            rows.next()
                .ok_or_else(|| AffError::Parse(format!("expected 'a1,a2;b1,b2', got {s:?}")))?,
        )?;
        if rows.next().is_some() {
            return Err(AffError::Parse(format!("too many digit rows in {s:?}")));
        }
        Self::new(alpha, beta)
    }
}

impl fmt::Display for DigitSet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.alpha, self.beta)
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.parse::<Int>()
            .map_err(|_| AffError::Parse(format!("bad integer {t:?}")))
    };
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_int(n)?;
        let den = parse_int(d)?;
        if den.is_zero() {
            return Err(AffError::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    } else {
        Ok(Rat::from(parse_int(s)?))
    }
}

pub fn parse_qvec(s: &str) -> Result<QVec2> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| AffError::Parse(format!("expected 'x,y', got {s:?}")))?;
    Ok(QVec2::new(parse_rat(x)?, parse_rat(y)?))
}

/// Numeric mask polynomial `(1/|D|) sum_d exp(2 pi i <d, x>)` for an
/// arbitrary digit list. Phases are reduced mod 1 exactly before the
/// float evaluation, so the result is accurate for huge rational inputs.
/// Test support only, never used for certification.
pub fn mask_eval_numeric(digits: &[QVec2], x: &QVec2) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for d in digits {
        let phase = &d.x * &x.x + &d.y * &x.y;
        let theta = rat_to_f64(&frac1(&phase)) * TAU;
        sum += Complex64::new(theta.cos(), theta.sin());
    }
    sum / digits.len().to_f64().unwrap()
}

/// Exact zero test for a three-element digit set: `m_D(x) = 0` iff
/// `(<alpha, x>, <beta, x>)` is `(1/3, 2/3)` or `(2/3, 1/3)` mod `Z^2`.
pub fn is_zero_3digit(d: &DigitSet3, x: &QVec2) -> bool {
    let t1 = frac1(&(&d.alpha.x * &x.x + &d.alpha.y * &x.y));
    let t2 = frac1(&(&d.beta.x * &x.x + &d.beta.y * &x.y));
    let third = rat(1, 3);
    let two_thirds = rat(2, 3);
    (t1 == third && t2 == two_thirds) || (t1 == two_thirds && t2 == third)
}

/// One coset `offset + basis * Z^2` of the zero set. `basis` is invertible,
/// so the coset is a shifted planar lattice and membership is decidable.
#[derive(Debug, Clone)]
pub struct Coset {
    pub offset: QVec2,
    pub basis: QMat2,
    inv: QMat2,
}

impl Coset {
    pub fn new(offset: QVec2, basis: QMat2) -> Result<Self> {
        let inv = basis.inverse()?;
        Ok(Self { offset, basis, inv })
    }

    pub fn contains(&self, z: &QVec2) -> bool {
        self.inv.mul_vec(&z.sub(&self.offset)).is_integral()
    }

    pub fn member(&self, k1: i64, k2: i64) -> QVec2 {
        self.offset
            .add(&self.basis.mul_vec(&QVec2::from_i64(k1, k2)))
    }

    /// The finite image of the coset mod `Z^2`: offset plus the subgroup of
    /// the torus generated by the basis columns.
    pub fn reduced_points(&self) -> BTreeSet<QVec2> {
        let g1 = QVec2::new(self.basis.a.clone(), self.basis.c.clone()).frac();
        let g2 = QVec2::new(self.basis.b.clone(), self.basis.d.clone()).frac();
        let mut group: BTreeSet<QVec2> = BTreeSet::new();
        group.insert(QVec2::zero());
        let mut frontier = vec![QVec2::zero()];
        while let Some(p) = frontier.pop() {
            for g in [&g1, &g2] {
                let q = p.add(g).frac();
                if group.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        group
            .into_iter()
            .map(|p| p.add(&self.offset).frac())
            .collect()
    }
}

/// `Z(m_D)` as a finite union of lattice cosets with a certified minimum
/// infinity-norm over all members.
#[derive(Debug, Clone)]
pub struct ZeroSetDescription {
    pub cosets: Vec<Coset>,
    pub min_norm: Rat,
}

impl ZeroSetDescription {
    pub fn contains(&self, z: &QVec2) -> bool {
        self.cosets.iter().any(|c| c.contains(z))
    }

    /// Index of the first coset containing `z`.
    pub fn coset_index(&self, z: &QVec2) -> Option<usize> {
        self.cosets.iter().position(|c| c.contains(z))
    }
}

/// Exact coset form of `Z(m_D)` for a three-element digit set: with
/// `G = [[a1, a2], [b1, b2]]`, the zeros are `G^{-1}((1/3, 2/3) + Z^2)`
/// and `G^{-1}((2/3, 1/3) + Z^2)`.
pub fn zero_cosets_3digit(d: &DigitSet3) -> Result<ZeroSetDescription> {
    let g = QMat2::new(
        d.alpha.x.clone(),
        d.alpha.y.clone(),
        d.beta.x.clone(),
        d.beta.y.clone(),
    );
    let ginv = g.inverse().map_err(|_| {
        AffError::Domain("degenerate digit set: alpha, beta linearly dependent".into())
    })?;
    let theta = [
        QVec2::new(rat(1, 3), rat(2, 3)),
        QVec2::new(rat(2, 3), rat(1, 3)),
    ];
    let cosets: Vec<Coset> = theta
        .iter()
        .map(|t| Coset::new(ginv.mul_vec(t), ginv.clone()))
        .collect::<Result<_>>()?;
    debug_assert!(cosets.iter().all(|c| !c.contains(&QVec2::zero())));
    let min_norm = min_norm_over(&cosets);
    Ok(ZeroSetDescription { cosets, min_norm })
}

/// Minimum infinity norm over all members of the cosets, by exhaustive
/// enumeration inside a box that provably contains every candidate below
/// the running best.
fn min_norm_over(cosets: &[Coset]) -> Rat {
    let mut best: Option<Rat> = None;
    for c in cosets {
        let candidate = c.offset.norm_inf();
        // a member with norm <= candidate has k = basis^{-1} (z - offset)
        // with |k|_inf <= |basis^{-1}|_inf (candidate + |offset|_inf)
        let radius = (c.inv.opnorm_inf() * (&candidate + c.offset.norm_inf()))
            .ceil()
            .to_integer();
        let radius = radius.to_i64().unwrap_or(8).clamp(1, 64);
        for k1 in -radius..=radius {
            for k2 in -radius..=radius {
                let n = c.member(k1, k2).norm_inf();
                if n.is_zero() {
                    continue; // 0 is never a zero of the mask
                }
                if best.as_ref().map_or(true, |b| &n < b) {
                    best = Some(n);
                }
            }
        }
    }
    best.expect("nonempty coset list")
}

/// `Z(m_D)` intersected with the grid `(1/q) Z^2` in `[0, 1)^2`.
#[derive(Debug, Clone)]
pub struct ZD2Slice {
    pub q: u64,
    pub points: BTreeSet<QVec2>,
}

pub fn zd2_slice(d: &DigitSet3, q: u64) -> ZD2Slice {
    let mut points = BTreeSet::new();
    for i in 0..q {
        for j in 0..q {
            let x = QVec2::new(rat(i as i64, q as i64), rat(j as i64, q as i64));
            if is_zero_3digit(d, &x) {
                points.insert(x);
            }
        }
    }
    ZD2Slice { q, points }
}

/// True iff every coset, reduced mod `Z^2`, lies inside the punctured grid
/// `(1/p^eta) Z^2 / Z^2`: basis columns and offset have denominators
/// dividing `p^eta`, and `0` is not a member.
pub fn containment_in_e(zs: &ZeroSetDescription, p: u64, eta: u32) -> bool {
    let q = Rat::from(int(p as i64).pow(eta));
    let in_grid = |r: &Rat| (r * &q).is_integer();
    zs.cosets.iter().all(|c| {
        in_grid(&c.offset.x)
            && in_grid(&c.offset.y)
            && [&c.basis.a, &c.basis.b, &c.basis.c, &c.basis.d]
                .iter()
                .all(|e| in_grid(e))
            && !c.contains(&QVec2::zero())
    })
}

/// The standard digit set `{0, (1,0), (0,1)}`.
pub fn standard_digits() -> DigitSet3 {
    DigitSet3::from_i64(1, 0, 0, 1).expect("nondegenerate")
}
