//! JSON-facing report records. Numbers that can exceed 53 bits are
//! emitted as decimal strings and rationals as "n/d", so downstream
//! double-based consumers never silently lose precision. Field order is
//! fixed by declaration order and every record carries the schema
//! version.

use serde::Serialize;

use crate::exact::{rat_to_f64, IMat2, Int, QVec2, Rat};
use crate::mask::DigitSet3;
use crate::orbit::OrbitPartition;
use crate::spectral::{
    BoundCertificate, Dichotomy, Frequency, Membership, NStarReport, OrthoCertificate,
};
use crate::suite::SuiteSummary;
use crate::transform::{Case, CaseReport};

pub const SCHEMA_VERSION: u32 = 1;

pub fn int_repr(v: &Int) -> String {
    v.to_string()
}

pub fn rat_repr(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn point_repr(p: &QVec2) -> [String; 2] {
    [rat_repr(&p.x), rat_repr(&p.y)]
}

pub fn matrix_repr(m: &IMat2) -> [[String; 2]; 2] {
    [
        [int_repr(&m.a), int_repr(&m.b)],
        [int_repr(&m.c), int_repr(&m.d)],
    ]
}

pub fn digits_repr(d: &DigitSet3) -> Vec<[String; 2]> {
    d.digits().iter().map(point_repr).collect()
}

#[derive(Debug, Serialize)]
pub struct OrderReport {
    pub schema_version: u32,
    pub matrix: [[String; 2]; 2],
    pub modulus: u64,
    pub order: u64,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub matrix: [[String; 2]; 2],
    pub digits: Vec<[String; 2]>,
    pub case: String,
    pub eta: u32,
    pub bound: String,
    pub digit_scale: String,
}

impl ClassifyReport {
    pub fn new(m: &IMat2, d: &DigitSet3, r: &CaseReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            matrix: matrix_repr(m),
            digits: digits_repr(d),
            case: match r.case {
                Case::I => "i".into(),
                Case::Ii => "ii".into(),
            },
            eta: r.eta,
            bound: int_repr(&r.bound),
            digit_scale: int_repr(&r.digit_scale),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitEntry {
    pub l: u64,
    pub size: usize,
    pub points: Vec<[String; 2]>,
}

#[derive(Debug, Serialize)]
pub struct OrbitReport {
    pub schema_version: u32,
    pub matrix: [[String; 2]; 2],
    pub p: u64,
    pub s: u32,
    pub iota: u64,
    pub orbits: Vec<OrbitEntry>,
    pub classes: Vec<Vec<u64>>,
}

impl OrbitReport {
    pub fn new(m: &IMat2, part: &OrbitPartition) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            matrix: matrix_repr(m),
            p: part.p,
            s: part.s,
            iota: part.iota,
            orbits: part
                .orbit_of
                .iter()
                .map(|(l, b)| OrbitEntry {
                    l: *l,
                    size: b.len(),
                    points: b.iter().map(point_repr).collect(),
                })
                .collect(),
            classes: part.classes.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MembershipRepr {
    pub kind: String,
    pub j: u64,
    pub coset: Option<usize>,
}

impl MembershipRepr {
    pub fn new(m: &Membership) -> Self {
        match m {
            Membership::Witness { j, coset } => Self {
                kind: "witness".into(),
                j: *j,
                coset: Some(*coset),
            },
            Membership::Refuted { j } => Self {
                kind: "refuted".into(),
                j: *j,
                coset: None,
            },
            Membership::Inconclusive { j } => Self {
                kind: "inconclusive".into(),
                j: *j,
                coset: None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PairRepr {
    pub a: usize,
    pub b: usize,
    pub outcome: MembershipRepr,
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub schema_version: u32,
    pub size: usize,
    pub pair_count: usize,
    pub witnesses: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub complete: bool,
    pub pairs: Vec<PairRepr>,
}

impl CertificateReport {
    pub fn new(c: &OrthoCertificate) -> Self {
        let mut witnesses = 0;
        let mut refuted = 0;
        let mut inconclusive = 0;
        for p in &c.pairs {
            match p.outcome {
                Membership::Witness { .. } => witnesses += 1,
                Membership::Refuted { .. } => refuted += 1,
                Membership::Inconclusive { .. } => inconclusive += 1,
            }
        }
        Self {
            schema_version: SCHEMA_VERSION,
            size: c.size,
            pair_count: c.pairs.len(),
            witnesses,
            refuted,
            inconclusive,
            complete: c.complete(),
            pairs: c
                .pairs
                .iter()
                .map(|p| PairRepr {
                    a: p.a,
                    b: p.b,
                    outcome: MembershipRepr::new(&p.outcome),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundRepr {
    pub size: usize,
    pub zero_excluded: bool,
    pub containment: bool,
    pub stable: bool,
    pub valid: bool,
    pub bound: usize,
}

impl BoundRepr {
    pub fn new(b: &BoundCertificate) -> Self {
        Self {
            size: b.zprime.len(),
            zero_excluded: b.zero_excluded,
            containment: b.containment,
            stable: b.stable,
            valid: b.valid(),
            bound: b.bound,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FrequencyRepr {
    pub scale: String,
    pub direction: [String; 2],
}

impl FrequencyRepr {
    pub fn new(f: &Frequency) -> Self {
        Self {
            scale: int_repr(&f.scale),
            direction: point_repr(&f.direction),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DichotomyRepr {
    pub reaches: bool,
    pub union_size: usize,
}

#[derive(Debug, Serialize)]
pub struct NStarJson {
    pub schema_version: u32,
    pub matrix: [[String; 2]; 2],
    pub digits: Vec<[String; 2]>,
    pub case: String,
    pub eta: u32,
    pub bound: String,
    pub bound_certificate: BoundRepr,
    pub conjugated_matrix: Option<[[String; 2]; 2]>,
    pub lambda: Vec<FrequencyRepr>,
    pub certificate: Option<CertificateReport>,
    pub dichotomy: Option<DichotomyRepr>,
    pub clique: Option<usize>,
    pub nstar: Option<String>,
    pub determined: bool,
    pub notes: Vec<String>,
}

impl NStarJson {
    pub fn new(m: &IMat2, d: &DigitSet3, r: &NStarReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            matrix: matrix_repr(m),
            digits: digits_repr(d),
            case: match r.classification.case {
                Case::I => "i".into(),
                Case::Ii => "ii".into(),
            },
            eta: r.classification.eta,
            bound: int_repr(&r.classification.bound),
            bound_certificate: BoundRepr::new(&r.bound_certificate),
            conjugated_matrix: r.conjugation.as_ref().map(matrix_repr),
            lambda: r.lambda.iter().map(FrequencyRepr::new).collect(),
            certificate: r.certificate.as_ref().map(CertificateReport::new),
            dichotomy: r.dichotomy.as_ref().map(|d| DichotomyRepr {
                reaches: d.reaches,
                union_size: d.union.len(),
            }),
            clique: r.clique,
            nstar: r.nstar.as_ref().map(int_repr),
            determined: r.determined(),
            notes: r.notes.clone(),
        }
    }
}

pub fn dichotomy_repr(d: &Dichotomy) -> DichotomyRepr {
    DichotomyRepr {
        reaches: d.reaches,
        union_size: d.union.len(),
    }
}

#[derive(Debug, Serialize)]
pub struct TheoremRepr {
    pub name: String,
    pub pass: u64,
    pub fail: u64,
    pub skip: u64,
    pub detail: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub all_passed: bool,
    pub theorems: Vec<TheoremRepr>,
}

impl SuiteReport {
    pub fn new(s: &SuiteSummary) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: s.seed,
            all_passed: s.all_passed(),
            theorems: s
                .stats
                .iter()
                .map(|t| TheoremRepr {
                    name: t.name.clone(),
                    pass: t.pass,
                    fail: t.fail,
                    skip: t.skip,
                    detail: t.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MuhatReport {
    pub schema_version: u32,
    pub xi: [String; 2],
    pub xi_approx: [f64; 2],
    pub depth: u32,
    pub value_re: f64,
    pub value_im: f64,
    pub modulus: f64,
}

impl MuhatReport {
    pub fn new(xi: &QVec2, depth: u32, value: num_complex::Complex64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            xi: point_repr(xi),
            xi_approx: [rat_to_f64(&xi.x), rat_to_f64(&xi.y)],
            depth,
            value_re: value.re,
            value_im: value.im,
            modulus: value.norm(),
        }
    }
}
