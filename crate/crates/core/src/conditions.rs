//! The gcd-triple condition △, the Plücker relations □/⊠, the toz bound ⊛,
//! and the torus verdict pipeline.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{factorize, pow, primes_below, valuation};
use crate::scheme::{reduce_zeros, triple_gcd, CurveClass, CurveSystem, Reduction, ReductionLog, Scheme};
use crate::solver::{self, KappaConstraintSet};
use crate::{Error, Result};

/// A reason a scheme is not realized on the torus. Indices refer to the
/// scheme the check ran on (the reduced scheme inside [`decide_torus`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `m_ij = 0` admits neither a parallel copy nor an empty curve.
    UnresolvableZero { i: usize, j: usize },
    /// The pairwise gcds of `m_ij, m_ik, m_jk` differ.
    Triangle { i: usize, j: usize, k: usize },
    /// `μ_ijkl ≠ 0`.
    Pluecker { i: usize, j: usize, k: usize, l: usize },
    /// `toz(m; p) >= p`.
    Toz { prime: u64, total: BigRational },
    /// No value of κ satisfies the residue constraints at this prime.
    NoAdmissibleKappa { prime: BigInt },
}

/// Failures of a check, or its by-product on success.
pub type Outcome<T> = std::result::Result<T, Vec<Obstruction>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Realizable,
    NotRealizable,
}

/// Common pairwise gcd `g_ijk` of every triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleGcds {
    values: BTreeMap<(usize, usize, usize), BigInt>,
}

impl TriangleGcds {
    /// `g_ijk` for `i < j < k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<&BigInt> {
        self.values.get(&(i, j, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize, usize), &BigInt)> {
        self.values.iter()
    }
}

fn require_nonzero(s: &Scheme, what: &str) -> Result<()> {
    if s.has_zero_entry() {
        return Err(Error::PreconditionViolated(format!("{what} needs nonzero entries; reduce zeros first")));
    }
    Ok(())
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).flat_map(move |j| (j + 1..=n).map(move |k| (i, j, k))))
}

/// Checks △ on every triple, reporting all failing triples.
pub fn check_triangle(s: &Scheme) -> Result<Outcome<TriangleGcds>> {
    require_nonzero(s, "the triangle check")?;
    let mut values = BTreeMap::new();
    let mut failures = Vec::new();
    for (i, j, k) in triples(s.n()) {
        match triple_gcd(s.entry(i, j), s.entry(i, k), s.entry(j, k)) {
            Some(g) => {
                values.insert((i, j, k), g);
            }
            None => failures.push(Obstruction::Triangle { i, j, k }),
        }
    }
    Ok(if failures.is_empty() { Ok(TriangleGcds { values }) } else { Err(failures) })
}

/// `μ_ijkl = m_ij m_kl − m_ik m_jl + m_il m_jk` for `i < j < k < l`.
pub fn pluecker_mu(s: &Scheme, i: usize, j: usize, k: usize, l: usize) -> Result<BigInt> {
    if !(1 <= i && i < j && j < k && k < l && l <= s.n()) {
        return Err(Error::Index(format!("({i},{j},{k},{l}) is not an increasing quadruple in 1..={}", s.n())));
    }
    Ok(mu(s, i, j, k, l))
}

/// μ with the antisymmetric accessor; indices distinct but in any order.
fn mu(s: &Scheme, i: usize, j: usize, k: usize, l: usize) -> BigInt {
    s.signed(i, j) * s.signed(k, l) - s.signed(i, k) * s.signed(j, l) + s.signed(i, l) * s.signed(j, k)
}

/// □ over all quadruples.
pub fn check_pluecker_full(s: &Scheme) -> Outcome<()> {
    let n = s.n();
    let mut failures = Vec::new();
    for (i, j, k) in triples(n) {
        for l in k + 1..=n {
            if !mu(s, i, j, k, l).is_zero() {
                failures.push(Obstruction::Pluecker { i, j, k, l });
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

/// ⊠: only `μ_{1,i,i+1,j}` for `1 < i`, `i + 1 < j`. Equivalent to □ when no
/// entry vanishes.
pub fn check_pluecker_reduced(s: &Scheme) -> Result<Outcome<()>> {
    require_nonzero(s, "the reduced Plücker check")?;
    let n = s.n();
    let mut failures = Vec::new();
    for i in 2..n.saturating_sub(1) {
        for j in i + 2..=n {
            if !mu(s, 1, i, i + 1, j).is_zero() {
                failures.push(Obstruction::Pluecker { i: 1, j: i, k: i + 1, l: j });
            }
        }
    }
    Ok(if failures.is_empty() { Ok(()) } else { Err(failures) })
}

/// `m_ae μ_abcd − m_ad μ_abce + m_ac μ_abde − m_ab μ_acde`, which vanishes
/// identically.
pub fn pluecker_identity(s: &Scheme, a: usize, b: usize, c: usize, d: usize, e: usize) -> Result<BigInt> {
    let idx = [a, b, c, d, e];
    for (t, &x) in idx.iter().enumerate() {
        if x == 0 || x > s.n() || idx[..t].contains(&x) {
            return Err(Error::Index(format!("{idx:?} are not five distinct indices in 1..={}", s.n())));
        }
    }
    Ok(s.signed(a, e) * mu(s, a, b, c, d) - s.signed(a, d) * mu(s, a, b, c, e) + s.signed(a, c) * mu(s, a, b, d, e)
        - s.signed(a, b) * mu(s, a, c, d, e))
}

/// toz data for one prime divisor of `g_123`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeToz {
    pub prime: BigInt,
    /// `ν_l = ν_g(g_123)`.
    pub nu: u32,
    /// `ν_g(m_ij)` in column order.
    pub valuations: Vec<u32>,
    /// Contributions for `j = 2..=n`.
    pub contributions: Vec<BigRational>,
    pub total: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TozReport {
    pub n: usize,
    /// `g_123`.
    pub base_gcd: BigInt,
    pub per_prime: Vec<PrimeToz>,
    /// `toz(m; p)` for every prime `p < n`.
    pub checked_primes: Vec<(u64, BigRational)>,
}

impl TozReport {
    /// `toz(m; p)`, zero when `p ∤ g_123`.
    pub fn toz(&self, p: &BigInt) -> BigRational {
        self.per_prime
            .iter()
            .find(|t| &t.prime == p)
            .map(|t| t.total.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// ⊛: primes `p < n` with `toz(m; p) >= p`.
    pub fn failures(&self) -> Vec<Obstruction> {
        self.checked_primes
            .iter()
            .filter(|(p, total)| *total >= BigRational::from_integer(BigInt::from(*p)))
            .map(|(p, total)| Obstruction::Toz { prime: *p, total: total.clone() })
            .collect()
    }
}

/// Computes toz with respect to the base triple `(1, 2, 3)`.
pub fn toz_report(s: &Scheme) -> Result<TozReport> {
    let n = s.n();
    if n < 3 {
        return Ok(TozReport {
            n,
            base_gcd: s.entries().first().map(|m| m.abs()).unwrap_or_else(BigInt::one),
            per_prime: Vec::new(),
            checked_primes: primes_below(n).into_iter().map(|p| (p, BigRational::zero())).collect(),
        });
    }
    if let Err(f) = check_triangle(s)? {
        return Err(Error::PreconditionViolated(format!("toz needs the triangle condition: {f:?}")));
    }
    let g = s.entry(1, 2).gcd(s.entry(1, 3));
    let mut per_prime = Vec::new();
    for (prime, _) in factorize(&g)?.pairs {
        per_prime.push(prime_toz(s, &g, prime)?);
    }
    let checked_primes = primes_below(n)
        .into_iter()
        .map(|p| {
            let total = per_prime
                .iter()
                .find(|t| t.prime == BigInt::from(p))
                .map(|t| t.total.clone())
                .unwrap_or_else(BigRational::zero);
            (p, total)
        })
        .collect();
    Ok(TozReport { n, base_gcd: g, per_prime, checked_primes })
}

fn prime_toz(s: &Scheme, g: &BigInt, prime: BigInt) -> Result<PrimeToz> {
    let n = s.n();
    let nu = valuation(g, &prime)?;
    let valuations = s.entries().iter().map(|m| valuation(m, &prime)).collect::<Result<Vec<u32>>>()?;
    let v = |i: usize, j: usize| valuation(s.entry(i, j), &prime);
    let mut contributions = vec![BigRational::one()];
    let (v12, v13, v23) = (v(1, 2)?, v(1, 3)?, v(2, 3)?);
    contributions.push(if 0 < v12 && v12 == v13 && v13 == v23 { BigRational::one() } else { BigRational::zero() });
    for j in 4..=n {
        let (a, b, c) = (v(1, j)?, v(2, j)?, v(3, j)?);
        let c_j = if 0 < a && a == b && b == c && a <= nu {
            BigRational::new(BigInt::one(), pow(&prime, nu - a))
        } else {
            BigRational::zero()
        };
        contributions.push(c_j);
    }
    let total = contributions.iter().fold(BigRational::zero(), |acc, c| acc + c);
    Ok(PrimeToz { prime, nu, valuations, contributions, total })
}

/// ⊛: `toz(m; p) < p` for every prime `p < n`. Reports every failing prime.
pub fn check_circledast(s: &Scheme) -> Result<Outcome<TozReport>> {
    let report = toz_report(s)?;
    let failures = report.failures();
    Ok(if failures.is_empty() { Ok(report) } else { Err(failures) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Screen {
    SufficientPass,
    SufficientFail { prime: u64 },
    Inconclusive,
}

/// The two cheap sufficient tests on a scheme already satisfying △ and □.
pub fn quick_screen(s: &Scheme) -> Result<Screen> {
    let n = s.n();
    if n < 3 {
        return Ok(Screen::SufficientPass);
    }
    let gcds = match check_triangle(s)? {
        Ok(g) => g,
        Err(f) => return Err(Error::PreconditionViolated(format!("screen needs the triangle condition: {f:?}"))),
    };
    for p in primes_below(n) {
        let p_big = BigInt::from(p);
        let first = valuation(&s.entries()[0], &p_big)?;
        if first > 0 && s.entries().iter().all(|m| valuation(m, &p_big).ok() == Some(first)) {
            return Ok(Screen::SufficientFail { prime: p });
        }
    }
    let small: Vec<BigInt> = primes_below(n + 1).into_iter().map(BigInt::from).collect();
    for (_, g) in gcds.iter() {
        if g.is_one() || small.iter().all(|p| !g.is_multiple_of(p)) {
            return Ok(Screen::SufficientPass);
        }
    }
    Ok(Screen::Inconclusive)
}

/// Outcome of [`decide_torus`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    /// Empty exactly when realizable.
    pub reasons: Vec<Obstruction>,
    /// A verified system realizing the input scheme, when realizable.
    pub witness: Option<CurveSystem>,
    /// The witness contains empty curves.
    pub used_empty: bool,
    /// `None` when the zero reduction itself failed.
    pub reduction: Option<ReductionLog>,
    /// toz of the reduced scheme, when △ and □ hold and it has at least three curves.
    pub toz: Option<TozReport>,
    /// κ-constraints of the reduced scheme, when they were computed.
    pub kappa: Option<KappaConstraintSet>,
    /// ⊛ and the exact κ-constraint solve disagree; the status follows the
    /// latter.
    pub toz_disagreement: bool,
}

impl Verdict {
    pub fn is_realizable(&self) -> bool {
        self.status == Status::Realizable
    }

    fn not_realizable(reasons: Vec<Obstruction>, reduction: Option<ReductionLog>) -> Verdict {
        Verdict {
            status: Status::NotRealizable,
            reasons,
            witness: None,
            used_empty: false,
            reduction,
            toz: None,
            kappa: None,
            toz_disagreement: false,
        }
    }
}

/// Decides whether `s` is realized by simple closed curves on the torus.
///
/// Runs the zero reduction, △, □ and ⊛, then solves the κ-constraints
/// exactly and builds a witness. Realizable verdicts carry a witness that
/// has been verified against `s`. An `Err` means an internal invariant broke.
pub fn decide_torus(s: &Scheme) -> Result<Verdict> {
    let log = match reduce_zeros(s) {
        Reduction::Reduced(log) => log,
        Reduction::Unresolvable { i, j } => {
            return Ok(Verdict::not_realizable(vec![Obstruction::UnresolvableZero { i, j }], None));
        }
    };
    let r = &log.reduced;
    let mut verdict = Verdict::not_realizable(Vec::new(), None);

    let reduced_witness = match r.n() {
        1 => CurveSystem::new(vec![CurveClass::vector(1, 0)]),
        2 => {
            let m = r.entry(1, 2);
            let rep = if m.abs().is_one() { BigInt::zero() } else { BigInt::one() };
            CurveSystem::new(vec![CurveClass::vector(1, 0), CurveClass::Vector(rep, m.clone())])
        }
        _ => {
            if let Err(f) = check_triangle(r)? {
                verdict.reasons = f;
                verdict.reduction = Some(log);
                return Ok(verdict);
            }
            if let Err(f) = check_pluecker_full(r) {
                verdict.reasons = f;
                verdict.reduction = Some(log);
                return Ok(verdict);
            }
            let toz = toz_report(r)?;
            let toz_failures = toz.failures();
            let xy = solver::solve_xy(r)?;
            let constraints = solver::kappa_constraints(r, &xy)?;
            verdict.toz = Some(toz);
            let infeasible: Vec<Obstruction> = constraints
                .per_prime
                .iter()
                .filter(|c| !c.is_feasible())
                .map(|c| Obstruction::NoAdmissibleKappa { prime: c.prime.clone() })
                .collect();
            verdict.toz_disagreement = infeasible.is_empty() != toz_failures.is_empty();
            if !infeasible.is_empty() {
                verdict.reasons = if toz_failures.is_empty() { infeasible } else { toz_failures };
                verdict.kappa = Some(constraints);
                verdict.reduction = Some(log);
                return Ok(verdict);
            }
            let kappa = constraints
                .canonical_kappa()
                .ok_or_else(|| Error::Internal("feasible constraints without a κ".into()))?;
            let w = solver::construct_witness_with(r, &xy, &constraints, &kappa)?;
            verdict.kappa = Some(constraints);
            w.system
        }
    };

    if !solver::verify_system(r, &reduced_witness)? {
        return Err(Error::Internal(format!("witness {reduced_witness} does not realize {r}")));
    }
    let witness = log.lift(&reduced_witness)?;
    if !solver::verify_system(s, &witness)? {
        return Err(Error::Internal(format!("lifted witness {witness} does not realize {s}")));
    }
    verdict.status = Status::Realizable;
    verdict.used_empty = witness.uses_empty();
    verdict.witness = Some(witness);
    verdict.reduction = Some(log);
    Ok(verdict)
}
