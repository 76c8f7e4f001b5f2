//! JSON wire formats.
//!
//! Integers are written as JSON numbers of any size and read back exactly.
//! Rationals are written as `"a/b"` strings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Number, Value};

use torus_curves::conditions::{PrimeToz, TozReport};
use torus_curves::solver::NormalizedWitness;
use torus_curves::{BigInt, BigRational, CurveClass, CurveSystem, KappaConstraintSet, Obstruction, Scheme, Verdict};

use crate::error::CliError;

/// An exact integer carried as a bare JSON number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(n: BigInt) -> Self {
        Int(n)
    }
}

impl From<&BigInt> for Int {
    fn from(n: &BigInt) -> Self {
        Int(n.clone())
    }
}

impl From<i64> for Int {
    fn from(n: i64) -> Self {
        Int(n.into())
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Number::from_str(&self.0.to_string()).map_err(S::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = Number::deserialize(d)?;
        BigInt::from_str(&n.to_string()).map(Int).map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
    }
}

/// An exact rational carried as an `"a/b"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected a rational \"a/b\", got {s:?}");
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if b == BigInt::from(0) {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(a, b)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Input scheme. Entries are in column order:
/// `m_12, m_13, m_23, m_14, m_24, m_34, …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeDocument {
    pub n: usize,
    pub entries: Vec<Int>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl SchemeDocument {
    pub fn from_scheme(s: &Scheme) -> Self {
        SchemeDocument { n: s.n(), entries: s.entries().iter().map(Int::from).collect(), metadata: BTreeMap::new() }
    }

    pub fn to_scheme(&self) -> Result<Scheme, CliError> {
        Ok(Scheme::new(self.n, self.entries.iter().map(|e| e.0.clone()).collect())?)
    }
}

/// One curve: `[p, q]` or the string `"empty"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveDoc {
    Vector(Int, Int),
    Empty,
}

impl From<&CurveClass> for CurveDoc {
    fn from(c: &CurveClass) -> Self {
        match c {
            CurveClass::Vector(p, q) => CurveDoc::Vector(p.into(), q.into()),
            CurveClass::Empty => CurveDoc::Empty,
        }
    }
}

impl From<&CurveDoc> for CurveClass {
    fn from(c: &CurveDoc) -> Self {
        match c {
            CurveDoc::Vector(p, q) => CurveClass::Vector(p.0.clone(), q.0.clone()),
            CurveDoc::Empty => CurveClass::Empty,
        }
    }
}

impl Serialize for CurveDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CurveDoc::Vector(p, q) => [p, q].serialize(s),
            CurveDoc::Empty => s.serialize_str("empty"),
        }
    }
}

impl<'de> Deserialize<'de> for CurveDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) if s == "empty" => Ok(CurveDoc::Empty),
            v @ Value::Array(_) => {
                let [p, q]: [Int; 2] = serde_json::from_value(v).map_err(D::Error::custom)?;
                Ok(CurveDoc::Vector(p, q))
            }
            other => Err(D::Error::custom(format!("expected [p, q] or \"empty\", got {other}"))),
        }
    }
}

pub fn system_doc(sys: &CurveSystem) -> Vec<CurveDoc> {
    sys.curves.iter().map(CurveDoc::from).collect()
}

pub fn system_from_doc(curves: &[CurveDoc]) -> CurveSystem {
    CurveSystem::new(curves.iter().map(CurveClass::from).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasonDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<Rational>,
    pub detail: String,
}

impl From<&Obstruction> for ReasonDoc {
    fn from(o: &Obstruction) -> Self {
        let base = |kind: &str, detail: String| ReasonDoc {
            kind: kind.into(),
            indices: None,
            prime: None,
            total: None,
            detail,
        };
        match o {
            Obstruction::UnresolvableZero { i, j } => ReasonDoc {
                indices: Some(vec![*i, *j]),
                ..base("unresolvable_zero", format!("m_{i}{j} = 0 but curves {i} and {j} are neither parallel nor empty"))
            },
            Obstruction::Triangle { i, j, k } => ReasonDoc {
                indices: Some(vec![*i, *j, *k]),
                ..base("failed_triangle", format!("pairwise gcds of m_{i}{j}, m_{i}{k}, m_{j}{k} differ"))
            },
            Obstruction::Pluecker { i, j, k, l } => ReasonDoc {
                indices: Some(vec![*i, *j, *k, *l]),
                ..base("failed_pluecker", format!("Plücker relation for {i},{j},{k},{l} does not vanish"))
            },
            Obstruction::Toz { prime, total } => ReasonDoc {
                prime: Some(Int::from(BigInt::from(*prime))),
                total: Some(Rational(total.clone())),
                ..base("failed_toz", format!("toz(m;{prime}) = {total} >= {prime}"))
            },
            Obstruction::NoAdmissibleKappa { prime } => ReasonDoc {
                prime: Some(prime.into()),
                ..base("no_admissible_kappa", format!("no kappa satisfies the residue conditions at {prime}"))
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTozDoc {
    pub prime: Int,
    pub nu: u32,
    pub valuations: Vec<u32>,
    /// Contributions for `j = 2..=n`.
    pub contributions: Vec<Rational>,
    pub total: Rational,
}

impl From<&PrimeToz> for PrimeTozDoc {
    fn from(t: &PrimeToz) -> Self {
        PrimeTozDoc {
            prime: (&t.prime).into(),
            nu: t.nu,
            valuations: t.valuations.clone(),
            contributions: t.contributions.iter().cloned().map(Rational).collect(),
            total: Rational(t.total.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedPrimeDoc {
    pub prime: u64,
    pub total: Rational,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TozDocument {
    pub n: usize,
    pub base_gcd: Int,
    pub primes: Vec<PrimeTozDoc>,
    /// Every prime below `n`.
    pub checked: Vec<CheckedPrimeDoc>,
}

impl From<&TozReport> for TozDocument {
    fn from(r: &TozReport) -> Self {
        TozDocument {
            n: r.n,
            base_gcd: (&r.base_gcd).into(),
            primes: r.per_prime.iter().map(PrimeTozDoc::from).collect(),
            checked: r
                .checked_primes
                .iter()
                .map(|(p, total)| CheckedPrimeDoc {
                    prime: *p,
                    total: Rational(total.clone()),
                    passes: *total < BigRational::from_integer(BigInt::from(*p)),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitsDoc {
    /// `g_123`; admissible κ are listed modulo it.
    pub modulus: Int,
    pub count: Int,
    pub allowed_kappa: Vec<Int>,
}

impl OrbitsDoc {
    pub fn new(k: &KappaConstraintSet, limit: usize) -> Self {
        OrbitsDoc {
            modulus: (&k.g).into(),
            count: k.orbit_count().into(),
            allowed_kappa: k.representatives(limit).into_iter().map(Int).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusDoc {
    Torus,
    NotTorus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub status: StatusDoc,
    pub reasons: Vec<ReasonDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<CurveDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<OrbitsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toz: Option<TozDocument>,
    #[serde(default)]
    pub used_empty: bool,
    #[serde(default)]
    pub toz_disagreement: bool,
}

/// Admissible κ listed by default.
pub const DEFAULT_ORBIT_LIMIT: usize = 64;

impl VerdictDocument {
    pub fn new(v: &Verdict, orbit_limit: usize) -> Self {
        VerdictDocument {
            status: if v.is_realizable() { StatusDoc::Torus } else { StatusDoc::NotTorus },
            reasons: v.reasons.iter().map(ReasonDoc::from).collect(),
            witness: v.witness.as_ref().map(system_doc),
            orbits: v.kappa.as_ref().filter(|k| k.is_feasible()).map(|k| OrbitsDoc::new(k, orbit_limit)),
            toz: v.toz.as_ref().map(TozDocument::from),
            used_empty: v.used_empty,
            toz_disagreement: v.toz_disagreement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Int>,
    pub system: Vec<CurveDoc>,
}

impl WitnessDoc {
    pub fn new(w: &NormalizedWitness, system: &CurveSystem) -> Self {
        WitnessDoc { kappa: w.kappa.as_ref().map(Int::from), system: system_doc(system) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XyDoc {
    pub g: Int,
    pub x: Int,
    pub y: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub status: StatusDoc,
    pub reasons: Vec<ReasonDoc>,
    /// The scheme after removing parallel and empty curves, when it differs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<SchemeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy: Option<XyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<OrbitsDoc>,
    /// Systems realizing the input scheme, one per orbit.
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub realizable: bool,
    pub orbit_count: usize,
    pub witnesses: Vec<Vec<CurveDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeDocument {
    /// `"already_torus"` or `"split"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<CurveDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<SchemeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<SchemeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_witness: Option<Vec<CurveDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_witness: Option<Vec<CurveDoc>>,
    #[serde(default)]
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDoc {
    pub bound: u64,
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<SchemeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<SchemeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndemicDocument {
    pub scheme: SchemeDocument,
    pub verdict: VerdictDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareyDocument {
    pub d: u64,
    pub size: usize,
    pub witness: Vec<[i64; 2]>,
}
