//! N-schemes, curve classes and the zero-entry reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Pairwise intersection numbers `m_ij`, `1 <= i < j <= n`, stored in column
/// order `m_12; m_13, m_23; m_14, m_24, m_34; …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scheme {
    n: usize,
    entries: Vec<BigInt>,
}

/// Number of entries of an `n`-scheme.
pub fn entry_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `m_ij` (`i < j`, 1-based) in column order.
fn position(i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j);
    (j - 1) * (j - 2) / 2 + (i - 1)
}

impl Scheme {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("a scheme needs at least one curve".into()));
        }
        if entries.len() != entry_count(n) {
            return Err(Error::InvalidShape(format!(
                "{} entries given, a {n}-scheme has {}",
                entries.len(),
                entry_count(n)
            )));
        }
        Ok(Scheme { n, entries })
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Result<Self> {
        Scheme::new(n, entries.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Builds a scheme from the displayed upper-triangular matrix, row `i`
    /// holding `m_{i,i+1}, …, m_{i,n}`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len() + 1;
        let mut entries = vec![BigInt::zero(); entry_count(n)];
        for (r, row) in rows.iter().enumerate() {
            let i = r + 1;
            if row.len() != n - i {
                return Err(Error::InvalidShape(format!("row {i} has {} entries, expected {}", row.len(), n - i)));
            }
            for (c, v) in row.iter().enumerate() {
                entries[position(i, i + 1 + c)] = BigInt::from(*v);
            }
        }
        Scheme::new(n, entries)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Scheme::new(n, vec![BigInt::zero(); entry_count(n)])
    }

    /// The scheme of pairwise determinants of a curve system.
    pub fn from_system(system: &CurveSystem) -> Result<Self> {
        let n = system.len();
        let mut entries = Vec::with_capacity(entry_count(n));
        for j in 2..=n {
            for i in 1..j {
                entries.push(system.curves[i - 1].intersection(&system.curves[j - 1]));
            }
        }
        Scheme::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.entries
    }

    /// `m_ij` for `i < j`. Panics on invalid indices; see [`Scheme::get`].
    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        assert!(1 <= i && i < j && j <= self.n, "entry({i},{j}) out of range");
        &self.entries[position(i, j)]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::Index(format!("{i} not in 1..={}", self.n)));
        }
        Ok(())
    }

    /// Antisymmetric accessor: `m_ij` for `i < j`, `-m_ji` for `i > j`.
    pub fn get(&self, i: usize, j: usize) -> Result<BigInt> {
        self.check_index(i)?;
        self.check_index(j)?;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok(self.entry(i, j).clone()),
            std::cmp::Ordering::Greater => Ok(-self.entry(j, i)),
            std::cmp::Ordering::Equal => Err(Error::Index(format!("diagonal ({i},{i}) is undefined"))),
        }
    }

    /// Same as [`Scheme::get`] for indices already known to be valid and distinct.
    pub(crate) fn signed(&self, i: usize, j: usize) -> BigInt {
        if i < j {
            self.entry(i, j).clone()
        } else {
            -self.entry(j, i)
        }
    }

    /// Index pairs `(i, j)`, `i < j`, in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (2..=n).flat_map(|j| (1..j).map(move |i| (i, j)))
    }

    /// Relabels curves: entry `(i, j)` of the result is `get(σ(i), σ(j))`.
    /// `sigma[k - 1]` is the image of `k`.
    ///
    /// With this convention `s.permute(σ).permute(τ) == s.permute(σ∘τ)`,
    /// where `(σ∘τ)(k) = σ(τ(k))`.
    pub fn permute(&self, sigma: &[usize]) -> Result<Scheme> {
        check_permutation(sigma, self.n)?;
        let entries = self.pairs().map(|(i, j)| self.signed(sigma[i - 1], sigma[j - 1])).collect();
        Scheme::new(self.n, entries)
    }

    /// Entrywise sum.
    pub fn sum(&self, other: &Scheme) -> Result<Scheme> {
        if self.n != other.n {
            return Err(Error::InvalidShape(format!("cannot add a {}-scheme to a {}-scheme", self.n, other.n)));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Scheme::new(self.n, entries)
    }

    /// Entrywise difference.
    pub fn difference(&self, other: &Scheme) -> Result<Scheme> {
        if self.n != other.n {
            return Err(Error::InvalidShape(format!("cannot subtract a {}-scheme from a {}-scheme", other.n, self.n)));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Scheme::new(self.n, entries)
    }

    pub fn scale(&self, k: &BigInt) -> Scheme {
        Scheme {
            n: self.n,
            entries: self.entries.iter().map(|v| v * k).collect(),
        }
    }

    pub fn has_zero_entry(&self) -> bool {
        self.entries.iter().any(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Sub-scheme on the given (increasing) original indices.
    pub fn restrict(&self, keep: &[usize]) -> Result<Scheme> {
        if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Index("restriction indices must be increasing and nonempty".into()));
        }
        for &k in keep {
            self.check_index(k)?;
        }
        let mut entries = Vec::with_capacity(entry_count(keep.len()));
        for b in 1..keep.len() {
            for a in 0..b {
                entries.push(self.entry(keep[a], keep[b]).clone());
            }
        }
        Scheme::new(keep.len(), entries)
    }
}

impl fmt::Display for Scheme {
    /// `(m_12;m_13,m_23;…)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for j in 2..=self.n {
            if j > 2 {
                write!(f, ";")?;
            }
            for i in 1..j {
                if i > 1 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, ")")
    }
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s == 0 || s > n || seen[s - 1] {
            return Err(Error::InvalidPermutation(n));
        }
        seen[s - 1] = true;
    }
    Ok(())
}

/// `(σ∘τ)(k) = σ(τ(k))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t - 1]).collect()
}

pub fn inverse_permutation(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (k, &s) in sigma.iter().enumerate() {
        inv[s - 1] = k + 1;
    }
    inv
}

/// Oriented isotopy class of a simple closed curve on the torus, or the empty
/// curve. `Vector(p, q)` is meant to be primitive; [`CurveClass::is_primitive`]
/// checks it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveClass {
    Vector(BigInt, BigInt),
    Empty,
}

impl CurveClass {
    pub fn vector(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        CurveClass::Vector(p.into(), q.into())
    }

    /// Algebraic intersection `[p,q]·[r,s] = ps - rq`; zero against `Empty`.
    pub fn intersection(&self, other: &CurveClass) -> BigInt {
        match (self, other) {
            (CurveClass::Vector(p, q), CurveClass::Vector(r, s)) => p * s - r * q,
            _ => BigInt::zero(),
        }
    }

    pub fn is_primitive(&self) -> bool {
        match self {
            CurveClass::Vector(p, q) => p.gcd(q).is_one(),
            CurveClass::Empty => true,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CurveClass::Empty)
    }

    /// Multiplies the vector by `±1`.
    pub fn signed(&self, sign: i8) -> CurveClass {
        match self {
            CurveClass::Vector(p, q) if sign < 0 => CurveClass::Vector(-p, -q),
            other => other.clone(),
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveClass::Vector(p, q) => write!(f, "({p},{q})"),
            CurveClass::Empty => write!(f, "∅"),
        }
    }
}

/// Ordered list of curve classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveSystem {
    pub curves: Vec<CurveClass>,
}

impl CurveSystem {
    pub fn new(curves: Vec<CurveClass>) -> Self {
        CurveSystem { curves }
    }

    pub fn from_i64(pairs: &[(i64, i64)]) -> Self {
        CurveSystem::new(pairs.iter().map(|&(p, q)| CurveClass::vector(p, q)).collect())
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn uses_empty(&self) -> bool {
        self.curves.iter().any(CurveClass::is_empty)
    }
}

impl fmt::Display for CurveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.curves.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Why a curve was dropped by the zero reduction. Indices are original ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionReason {
    /// The curve is `sign ·` curve `of`.
    DuplicateOf { of: usize, sign: i8 },
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub removed: usize,
    pub reason: ReductionReason,
}

/// Result of removing parallel and empty curves from a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLog {
    pub original_n: usize,
    pub steps: Vec<ReductionStep>,
    /// Original indices of the surviving curves, increasing.
    pub kept: Vec<usize>,
    pub reduced: Scheme,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    Reduced(ReductionLog),
    /// `m_ij = 0` but curves `i` and `j` are neither parallel nor is either
    /// one empty: the scheme is not realized on the torus.
    Unresolvable { i: usize, j: usize },
}

impl ReductionLog {
    pub fn used_empty(&self) -> bool {
        self.steps.iter().any(|s| s.reason == ReductionReason::Empty)
    }

    /// Rebuilds the original scheme from the reduced one and the steps.
    pub fn reconstruct(&self) -> Result<Scheme> {
        let n = self.original_n;
        let mut full = vec![vec![BigInt::zero(); n + 1]; n + 1];
        for b in 0..self.kept.len() {
            for a in 0..b {
                let v = self.reduced.entry(a + 1, b + 1).clone();
                let (i, j) = (self.kept[a], self.kept[b]);
                full[j][i] = -&v;
                full[i][j] = v;
            }
        }
        let mut present: Vec<usize> = self.kept.clone();
        for step in self.steps.iter().rev() {
            let r = step.removed;
            for &k in &present {
                let v = match step.reason {
                    ReductionReason::DuplicateOf { of, sign } if k != of => &full[of][k] * BigInt::from(sign),
                    _ => BigInt::zero(),
                };
                full[k][r] = -&v;
                full[r][k] = v;
            }
            present.push(r);
        }
        let entries = (2..=n).flat_map(|j| (1..j).map(move |i| (i, j))).map(|(i, j)| full[i][j].clone()).collect();
        Scheme::new(n, entries)
    }

    /// Extends a system realizing the reduced scheme to one realizing the
    /// original scheme.
    pub fn lift(&self, reduced: &CurveSystem) -> Result<CurveSystem> {
        if reduced.len() != self.kept.len() {
            return Err(Error::InvalidShape(format!(
                "system has {} curves, reduced scheme has {}",
                reduced.len(),
                self.kept.len()
            )));
        }
        let mut curves = vec![CurveClass::Empty; self.original_n];
        for (k, &orig) in self.kept.iter().enumerate() {
            curves[orig - 1] = reduced.curves[k].clone();
        }
        for step in self.steps.iter().rev() {
            curves[step.removed - 1] = match step.reason {
                ReductionReason::DuplicateOf { of, sign } => curves[of - 1].signed(sign),
                ReductionReason::Empty => CurveClass::Empty,
            };
        }
        Ok(CurveSystem::new(curves))
    }
}

/// Removes curves forced to be parallel copies or empty by a zero entry.
///
/// Pairs are scanned in lexicographic order of original indices; for a zero
/// entry `m_ij` the rows of `i` and `j` (over the remaining curves) are
/// compared. Equal rows drop `j` as a copy of `i`, opposite rows drop `j` as a
/// reversed copy, otherwise an all-zero row drops that curve as empty.
pub fn reduce_zeros(s: &Scheme) -> Reduction {
    let mut alive: Vec<usize> = (1..=s.n()).collect();
    let mut steps = Vec::new();
    'scan: loop {
        for (ai, &i) in alive.iter().enumerate() {
            for &j in &alive[ai + 1..] {
                if !s.entry(i, j).is_zero() {
                    continue;
                }
                let others: Vec<usize> = alive.iter().copied().filter(|&k| k != i && k != j).collect();
                let same = others.iter().all(|&k| s.signed(i, k) == s.signed(j, k));
                let opposite = others.iter().all(|&k| s.signed(i, k) == -s.signed(j, k));
                let (removed, reason) = if same {
                    (j, ReductionReason::DuplicateOf { of: i, sign: 1 })
                } else if opposite {
                    (j, ReductionReason::DuplicateOf { of: i, sign: -1 })
                } else if others.iter().all(|&k| s.signed(i, k).is_zero()) {
                    (i, ReductionReason::Empty)
                } else if others.iter().all(|&k| s.signed(j, k).is_zero()) {
                    (j, ReductionReason::Empty)
                } else {
                    return Reduction::Unresolvable { i, j };
                };
                steps.push(ReductionStep { removed, reason });
                alive.retain(|&k| k != removed);
                continue 'scan;
            }
        }
        break;
    }
    let reduced = s.restrict(&alive).expect("alive indices are increasing and valid");
    Reduction::Reduced(ReductionLog {
        original_n: s.n(),
        steps,
        kept: alive,
        reduced,
    })
}

/// `gcd` of three entries if the three pairwise gcds agree.
pub(crate) fn triple_gcd(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<BigInt> {
    let g1 = a.gcd(b);
    if g1 != a.gcd(c) || g1 != b.gcd(c) {
        return None;
    }
    Some(g1)
}
