//! Witness construction for torus-realizable schemes.
//!
//! After an `SL(2,ℤ)` move every witness has `γ_1 = (1,0)` and
//! `γ_j = (r_j, m_1j)`. With `g = g_123`, `m' = m / g` on the base triple and
//! a Bézout pair `x m'_13 − y m'_12 = 1`, all solutions are
//!
//! ```text
//! g r_j = y m_2j − x m_3j + κ m_1j        (j = 2..n, m_22 = m_33 = 0)
//! ```
//!
//! for an integer κ. κ must make every `r_j` integral and coprime to `m_1j`;
//! only primes dividing `g` constrain it, each through residue classes modulo
//! powers of that prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{crt, factorize, inv_mod, pow, valuation, ResidueClass};
use crate::conditions::{check_pluecker_full, check_triangle};
use crate::scheme::{CurveClass, CurveSystem, Scheme};
use crate::{Error, Result};

/// Bézout data for the base triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XyWitness {
    /// `g_123`.
    pub g: BigInt,
    /// `m'_12, m'_13, m'_23`.
    pub m12: BigInt,
    pub m13: BigInt,
    pub m23: BigInt,
    pub x: BigInt,
    pub y: BigInt,
}

/// A normalized witness `(1,0), (r_2, m_12), …, (r_n, m_1n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedWitness {
    /// The κ it was built from, if any.
    pub kappa: Option<BigInt>,
    /// `r_2, …, r_n`.
    pub r: Vec<BigInt>,
    pub system: CurveSystem,
}

impl NormalizedWitness {
    pub fn from_r(s: &Scheme, kappa: Option<BigInt>, r: Vec<BigInt>) -> Self {
        let mut curves = vec![CurveClass::vector(1, 0)];
        for (k, rj) in r.iter().enumerate() {
            curves.push(CurveClass::Vector(rj.clone(), s.entry(1, k + 2).clone()));
        }
        NormalizedWitness { kappa, r, system: CurveSystem::new(curves) }
    }
}

/// Admissible κ modulo a power of one prime `g | g_123`.
///
/// The admissible set is `required` minus the union of `forbidden`; all
/// moduli divide `g^ν`, so membership only depends on κ mod `g^ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeConstraint {
    pub prime: BigInt,
    /// `ν = ν_g(g_123)`.
    pub nu: u32,
    /// `g^(ν+1)`, the modulus residues are reported against.
    pub modulus: BigInt,
    /// κ must lie in this class (`0 mod 1` when unconstrained).
    pub required: ResidueClass,
    /// Pairwise disjoint classes inside `required` that κ must avoid.
    pub forbidden: Vec<ResidueClass>,
    /// Some condition fails for every κ.
    pub blocked: bool,
}

impl PrimeConstraint {
    pub fn is_feasible(&self) -> bool {
        !self.blocked && self.allowed_count() > BigInt::zero()
    }

    pub fn allows(&self, kappa: &BigInt) -> bool {
        !self.blocked && self.required.contains(kappa) && !self.forbidden.iter().any(|f| f.contains(kappa))
    }

    /// Number of admissible residues modulo [`PrimeConstraint::modulus`].
    pub fn allowed_count(&self) -> BigInt {
        if self.blocked {
            return BigInt::zero();
        }
        let removed: BigInt = self.forbidden.iter().map(|f| &self.modulus / &f.modulus).sum();
        &self.modulus / &self.required.modulus - removed
    }

    /// Admissible residues in `[0, modulus)`, at most `limit` of them.
    pub fn allowed_residues(&self, limit: usize) -> Vec<BigInt> {
        let mut out = Vec::new();
        if self.blocked {
            return out;
        }
        let mut k = self.required.residue.clone();
        while k < self.modulus && out.len() < limit {
            if self.allows(&k) {
                out.push(k.clone());
            }
            k += &self.required.modulus;
        }
        out
    }
}

/// κ-constraints for every prime divisor of `g_123`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaConstraintSet {
    /// `g_123`.
    pub g: BigInt,
    pub per_prime: Vec<PrimeConstraint>,
    /// `g_123 = 1`: every κ is admissible.
    pub unconstrained: bool,
}

impl KappaConstraintSet {
    pub fn is_feasible(&self) -> bool {
        self.per_prime.iter().all(PrimeConstraint::is_feasible)
    }

    pub fn allows(&self, kappa: &BigInt) -> bool {
        self.per_prime.iter().all(|c| c.allows(kappa))
    }

    /// Number of admissible κ modulo `g_123`, i.e. the number of orbits.
    pub fn orbit_count(&self) -> BigInt {
        self.per_prime
            .iter()
            .map(|c| c.allowed_count() / &c.prime)
            .fold(BigInt::one(), |acc, c| acc * c)
    }

    /// All admissible κ lie in `α + M ℤ`, the CRT of the required classes.
    fn search_base(&self) -> ResidueClass {
        let required: Vec<ResidueClass> = self.per_prime.iter().map(|c| c.required.clone()).collect();
        crt(&required).expect("required classes live at distinct primes")
    }

    /// Smallest nonnegative admissible κ.
    pub fn canonical_kappa(&self) -> Option<BigInt> {
        if !self.is_feasible() {
            return None;
        }
        let base = self.search_base();
        let mut k = base.residue;
        loop {
            if self.allows(&k) {
                return Some(k);
            }
            k += &base.modulus;
        }
    }

    /// Admissible κ in `[0, g_123)`, one per orbit, at most `limit`.
    pub fn representatives(&self, limit: usize) -> Vec<BigInt> {
        let mut out = Vec::new();
        if !self.is_feasible() {
            return out;
        }
        let total = self.orbit_count();
        let base = self.search_base();
        let mut k = base.residue;
        while k < self.g && out.len() < limit && BigInt::from(out.len()) < total {
            if self.allows(&k) {
                out.push(k.clone());
            }
            k += &base.modulus;
        }
        out
    }
}

fn check_base_triple(s: &Scheme) -> Result<()> {
    if s.n() < 3 {
        return Err(Error::Domain(format!("needs at least three curves, got {}", s.n())));
    }
    if s.has_zero_entry() {
        return Err(Error::PreconditionViolated("entries must be nonzero; reduce zeros first".into()));
    }
    Ok(())
}

/// The Bézout pair with `x` the least positive solution of
/// `x m'_13 ≡ 1 (mod m'_12)`.
pub fn solve_xy(s: &Scheme) -> Result<XyWitness> {
    check_base_triple(s)?;
    let (a, b, c) = (s.entry(1, 2), s.entry(1, 3), s.entry(2, 3));
    let g = crate::scheme::triple_gcd(a, b, c)
        .ok_or_else(|| Error::PreconditionViolated("the base triple fails the triangle condition".into()))?;
    let (m12, m13, m23) = (a / &g, b / &g, c / &g);
    let x = if m12.abs().is_one() { BigInt::one() } else { inv_mod(&m13, &m12.abs())? };
    let num: BigInt = &x * &m13 - 1;
    if !num.is_multiple_of(&m12) {
        return Err(Error::Internal("Bézout pair is not exact".into()));
    }
    let y = num / &m12;
    Ok(XyWitness { g, m12, m13, m23, x, y })
}

/// `y m_2j − x m_3j`, the κ-free part of `g r_j`.
fn kappa_free(s: &Scheme, xy: &XyWitness, j: usize) -> BigInt {
    let m2j = if j == 2 { BigInt::zero() } else { s.signed(2, j) };
    let m3j = if j == 3 { BigInt::zero() } else { s.signed(3, j) };
    &xy.y * m2j - &xy.x * m3j
}

/// `κ ≡ −(c / g^e)(m / g^e)^{-1} (mod g^k)`, assuming `g^e | c, m`.
fn root_class(c: &BigInt, m: &BigInt, g: &BigInt, e: u32, k: u32) -> Result<ResidueClass> {
    let ge = pow(g, e);
    let modulus = pow(g, k);
    let inv = inv_mod(&(m / &ge), &modulus)?;
    ResidueClass::new(-(c / &ge) * inv, modulus)
}

fn prime_constraint(s: &Scheme, xy: &XyWitness, prime: BigInt, nu: u32) -> Result<PrimeConstraint> {
    let g_nu = pow(&prime, nu);
    let g_nu1 = &g_nu * &prime;
    let mut blocked = false;
    let mut required: Vec<ResidueClass> = Vec::new();
    let mut forbidden: Vec<ResidueClass> = Vec::new();
    for j in 2..=s.n() {
        let c = kappa_free(s, xy, j);
        let m = s.entry(1, j);
        let e = valuation(m, &prime)?;
        // integrality: g^ν | c + κ m
        if e >= nu {
            blocked |= !c.is_multiple_of(&g_nu);
        } else if !c.is_multiple_of(&pow(&prime, e)) {
            blocked = true;
        } else {
            required.push(root_class(&c, m, &prime, e, nu - e)?);
        }
        // coprimality with m_1j: ν_g(c + κ m) = ν exactly
        if e >= 1 && !blocked {
            if e > nu {
                blocked |= c.is_multiple_of(&g_nu1);
            } else {
                forbidden.push(root_class(&c, m, &prime, e, nu + 1 - e)?);
            }
        }
    }

    // moduli are powers of one prime: the finest class must refine the others
    let req = match required.iter().max_by(|a, b| a.modulus.cmp(&b.modulus)) {
        Some(r) => r.clone(),
        None => ResidueClass::new(0, 1)?,
    };
    blocked |= required.iter().any(|r| !r.contains(&req.residue));

    let mut kept: Vec<ResidueClass> = Vec::new();
    if !blocked {
        forbidden.sort_by(|a, b| a.modulus.cmp(&b.modulus));
        for f in forbidden {
            if f.modulus <= req.modulus {
                if f.contains(&req.residue) {
                    blocked = true;
                    break;
                }
                continue;
            }
            if !req.contains(&f.residue) {
                continue;
            }
            if kept.iter().any(|k| k.contains(&f.residue)) {
                continue;
            }
            kept.push(f);
        }
    }
    if blocked {
        kept.clear();
    }
    Ok(PrimeConstraint { prime, nu, modulus: g_nu1, required: req, forbidden: kept, blocked })
}

/// Residue constraints on κ at every prime dividing `g_123`. Assumes the
/// scheme satisfies △ and □; neither is rechecked here.
pub fn kappa_constraints(s: &Scheme, xy: &XyWitness) -> Result<KappaConstraintSet> {
    check_base_triple(s)?;
    let mut per_prime = Vec::new();
    for (prime, nu) in factorize(&xy.g)?.pairs {
        per_prime.push(prime_constraint(s, xy, prime, nu)?);
    }
    Ok(KappaConstraintSet { g: xy.g.clone(), unconstrained: per_prime.is_empty(), per_prime })
}

/// Number of residues mod `g_l` forbidden for κ on a 3-scheme.
pub fn forbidden_count(s: &Scheme, prime: &BigInt) -> Result<BigInt> {
    if s.n() != 3 {
        return Err(Error::Domain(format!("forbidden counts are defined for 3-schemes, got n = {}", s.n())));
    }
    let xy = solve_xy(s)?;
    if xy.g.is_one() {
        return Ok(BigInt::zero());
    }
    if !xy.g.is_multiple_of(prime) || *prime <= BigInt::one() {
        return Err(Error::Domain(format!("{prime} does not divide g_123 = {}", xy.g)));
    }
    let constraints = kappa_constraints(s, &xy)?;
    let c = constraints
        .per_prime
        .iter()
        .find(|c| &c.prime == prime)
        .ok_or_else(|| Error::Domain(format!("{prime} is not a prime divisor of {}", xy.g)))?;
    // on a 3-scheme every class is taken mod g_l
    let allowed_mod_prime = c.allowed_count() / pow(prime, c.nu);
    Ok(prime - allowed_mod_prime)
}

/// `r_2, …, r_n` for a given κ, without admissibility checks.
fn r_values(s: &Scheme, xy: &XyWitness, kappa: &BigInt) -> Result<Vec<BigInt>> {
    (2..=s.n())
        .map(|j| {
            let d = kappa_free(s, xy, j) + kappa * s.entry(1, j);
            let (q, rem) = d.div_rem(&xy.g);
            if rem.is_zero() {
                Ok(q)
            } else {
                Err(Error::ConstraintViolation(format!("κ = {kappa} makes r_{j} non-integral")))
            }
        })
        .collect()
}

pub(crate) fn construct_witness_with(
    s: &Scheme,
    xy: &XyWitness,
    constraints: &KappaConstraintSet,
    kappa: &BigInt,
) -> Result<NormalizedWitness> {
    if !constraints.allows(kappa) {
        return Err(Error::ConstraintViolation(format!("κ = {kappa} is not admissible")));
    }
    let r = r_values(s, xy, kappa)?;
    let w = NormalizedWitness::from_r(s, Some(kappa.clone()), r);
    if !verify_system(s, &w.system)? {
        return Err(Error::Internal(format!("κ = {kappa} passed the constraints but {} does not realize {s}", w.system)));
    }
    Ok(w)
}

/// The normalized witness for an admissible κ. The scheme must have nonzero
/// entries and satisfy △ and □.
pub fn construct_witness(s: &Scheme, kappa: &BigInt) -> Result<NormalizedWitness> {
    let xy = solve_xy(s)?;
    if check_pluecker_full(s).is_err() {
        return Err(Error::PreconditionViolated(format!("{s} fails the Plücker relations")));
    }
    let constraints = kappa_constraints(s, &xy)?;
    construct_witness_with(s, &xy, &constraints, kappa)
}

/// Representatives `(1,0), (r, m)` of the `φ(|m|)` orbits, `0 <= r < |m|`.
pub fn solve_pair_orbits(m: &BigInt) -> Result<Vec<NormalizedWitness>> {
    if m.is_zero() {
        return Err(Error::Domain("m = 0 has no primitive pair; reduce zeros first".into()));
    }
    let s = Scheme::new(2, vec![m.clone()])?;
    let modulus = m.abs();
    let mut out = Vec::new();
    let mut r = BigInt::zero();
    while r < modulus {
        if r.gcd(&modulus).is_one() {
            out.push(NormalizedWitness::from_r(&s, None, vec![r.clone()]));
        }
        r += 1;
    }
    Ok(out)
}

/// One normalized witness per orbit of the stabilizer of `(1,0)`, at most
/// `limit` of them. The scheme must have nonzero entries.
pub fn enumerate_orbits(s: &Scheme, limit: usize) -> Result<Vec<NormalizedWitness>> {
    if s.has_zero_entry() {
        return Err(Error::PreconditionViolated("entries must be nonzero; reduce zeros first".into()));
    }
    match s.n() {
        1 => {
            return Ok(vec![NormalizedWitness::from_r(s, None, Vec::new())].into_iter().take(limit).collect());
        }
        2 => return Ok(solve_pair_orbits(s.entry(1, 2))?.into_iter().take(limit).collect()),
        _ => {}
    }
    if check_triangle(s)?.is_err() || check_pluecker_full(s).is_err() {
        return Err(Error::Domain(format!("{s} is not realizable on the torus")));
    }
    let xy = solve_xy(s)?;
    let constraints = kappa_constraints(s, &xy)?;
    if !constraints.is_feasible() {
        return Err(Error::Domain(format!("{s} is not realizable on the torus")));
    }
    constraints
        .representatives(limit)
        .iter()
        .map(|k| construct_witness_with(s, &xy, &constraints, k))
        .collect()
}

/// A 2×2 integer matrix, rows first.
pub type Matrix2 = [[BigInt; 2]; 2];

/// Applies `A ∈ SL(2,ℤ)` to every vector of the system.
pub fn sl2_act(a: &Matrix2, sys: &CurveSystem) -> Result<CurveSystem> {
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    if !det.is_one() {
        return Err(Error::InvalidMatrix);
    }
    let curves = sys
        .curves
        .iter()
        .map(|c| match c {
            CurveClass::Vector(p, q) => CurveClass::Vector(&a[0][0] * p + &a[0][1] * q, &a[1][0] * p + &a[1][1] * q),
            CurveClass::Empty => CurveClass::Empty,
        })
        .collect();
    Ok(CurveSystem::new(curves))
}

/// Every vector is primitive and every pairwise determinant matches `s`.
pub fn verify_system(s: &Scheme, sys: &CurveSystem) -> Result<bool> {
    if sys.len() != s.n() {
        return Err(Error::InvalidShape(format!("{} curves for a {}-scheme", sys.len(), s.n())));
    }
    if !sys.curves.iter().all(CurveClass::is_primitive) {
        return Ok(false);
    }
    Ok(s.pairs().all(|(i, j)| sys.curves[i - 1].intersection(&sys.curves[j - 1]) == *s.entry(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::decide_torus;
    use proptest::prelude::*;

    fn sch(n: usize, e: &[i64]) -> Scheme {
        Scheme::from_i64(n, e).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn pair_orbits() {
        let reps: Vec<BigInt> = solve_pair_orbits(&big(6)).unwrap().into_iter().map(|w| w.r[0].clone()).collect();
        assert_eq!(reps, vec![big(1), big(5)]);
        let one = solve_pair_orbits(&big(1)).unwrap();
        assert_eq!(one[0].system, CurveSystem::from_i64(&[(1, 0), (0, 1)]));
        let seven = solve_pair_orbits(&big(7)).unwrap();
        assert_eq!(seven.len(), 6);
        let s7 = sch(2, &[7]);
        assert!(seven.iter().all(|w| verify_system(&s7, &w.system).unwrap()));
        assert_eq!(solve_pair_orbits(&big(-4)).unwrap().len(), 2);
        assert!(matches!(solve_pair_orbits(&big(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn xy_examples() {
        let w = solve_xy(&sch(3, &[2, 2, 4])).unwrap();
        assert_eq!((w.m12.clone(), w.m13.clone(), w.x.clone(), w.y.clone()), (big(1), big(1), big(1), big(0)));
        let w = solve_xy(&sch(3, &[4, 6, 10])).unwrap();
        assert_eq!((w.m12.clone(), w.m13.clone(), w.x.clone(), w.y.clone()), (big(2), big(3), big(1), big(1)));
        let w = solve_xy(&sch(3, &[1, 1, 1])).unwrap();
        assert_eq!((w.x, w.y), (big(1), big(0)));
        let w = solve_xy(&sch(3, &[-5, 3, 7])).unwrap();
        assert_eq!(&w.x * &w.m13 - &w.y * &w.m12, big(1));
    }

    #[test]
    fn kappa_examples() {
        let s = sch(3, &[2, 2, 4]);
        let c = kappa_constraints(&s, &solve_xy(&s).unwrap()).unwrap();
        assert_eq!(c.per_prime.len(), 1);
        assert_eq!(c.per_prime[0].modulus, big(4));
        assert_eq!(c.per_prime[0].allowed_residues(10), vec![big(1), big(3)]);

        let s = sch(3, &[1, 1, 1]);
        assert!(kappa_constraints(&s, &solve_xy(&s).unwrap()).unwrap().unconstrained);

        let s = sch(3, &[4, 6, 10]);
        let c = kappa_constraints(&s, &solve_xy(&s).unwrap()).unwrap();
        assert_eq!(c.per_prime[0].allowed_residues(10), vec![big(0), big(2)]);
    }

    #[test]
    fn forbidden_count_examples() {
        assert_eq!(forbidden_count(&sch(3, &[2, 2, 4]), &big(2)).unwrap(), big(1));
        // g = 5, m' = (1;2,3): 5 ∤ 6, two forbidden values
        assert_eq!(forbidden_count(&sch(3, &[5, 10, 15]), &big(5)).unwrap(), big(2));
        assert_eq!(forbidden_count(&sch(3, &[1, 1, 1]), &big(2)).unwrap(), big(0));
        assert!(matches!(forbidden_count(&sch(3, &[2, 2, 4]), &big(3)), Err(Error::Domain(_))));
        assert!(matches!(forbidden_count(&sch(4, &[1, 1, 1, 2, 1, -1]), &big(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn witness_examples() {
        let w = construct_witness(&sch(3, &[2, 2, 4]), &big(1)).unwrap();
        assert_eq!(w.system, CurveSystem::from_i64(&[(1, 0), (3, 2), (1, 2)]));
        let w = construct_witness(&sch(4, &[1, 1, 1, 2, 1, -1]), &big(0)).unwrap();
        assert_eq!(w.system, CurveSystem::from_i64(&[(1, 0), (1, 1), (0, 1), (1, 2)]));
        let w = construct_witness(&sch(3, &[4, 6, 10]), &big(0)).unwrap();
        assert_eq!(w.system, CurveSystem::from_i64(&[(1, 0), (5, 4), (5, 6)]));
        assert!(matches!(construct_witness(&sch(3, &[2, 2, 4]), &big(0)), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(enumerate_orbits(&sch(2, &[6]), 100).unwrap().len(), 2);
        assert_eq!(enumerate_orbits(&sch(3, &[2, 2, 4]), 100).unwrap().len(), 1);
        assert_eq!(enumerate_orbits(&sch(3, &[1, 1, 1]), 100).unwrap().len(), 1);
        assert!(matches!(enumerate_orbits(&sch(3, &[6, 10, 14]), 100), Err(Error::Domain(_))));
        assert_eq!(enumerate_orbits(&sch(2, &[7]), 3).unwrap().len(), 3);
    }

    #[test]
    fn sl2_examples() {
        let sys = CurveSystem::from_i64(&[(1, 0), (0, 1)]);
        let id = [[big(1), big(0)], [big(0), big(1)]];
        assert_eq!(sl2_act(&id, &sys).unwrap(), sys);
        let rot = [[big(0), big(-1)], [big(1), big(0)]];
        let out = sl2_act(&rot, &sys).unwrap();
        assert_eq!(out, CurveSystem::from_i64(&[(0, 1), (-1, 0)]));
        assert!(verify_system(&sch(2, &[1]), &out).unwrap());
        let shear = [[big(1), big(1)], [big(0), big(1)]];
        let s = sch(3, &[2, 2, 4]);
        let w = decide_torus(&s).unwrap().witness.unwrap();
        assert!(verify_system(&s, &sl2_act(&shear, &w).unwrap()).unwrap());
        let bad = [[big(2), big(0)], [big(0), big(1)]];
        assert_eq!(sl2_act(&bad, &sys), Err(Error::InvalidMatrix));
    }

    #[test]
    fn verify_examples() {
        let s = sch(3, &[1, 1, 1]);
        assert!(verify_system(&s, &CurveSystem::from_i64(&[(1, 0), (1, 1), (0, 1)])).unwrap());
        assert!(!verify_system(&s, &CurveSystem::from_i64(&[(2, 0), (1, 1), (0, 1)])).unwrap());
        let s = sch(3, &[2, 2, 4]);
        assert!(!verify_system(&s, &CurveSystem::from_i64(&[(1, 0), (3, 2), (1, 4)])).unwrap());
        assert!(matches!(verify_system(&s, &CurveSystem::from_i64(&[(1, 0)])), Err(Error::InvalidShape(_))));
    }

    /// Literal definition: κ mod g^(ν+1) is admissible when every `g r_j` is
    /// divisible by `g^ν`, and by no higher power whenever `g | m_1j`.
    fn enumerate_admissible(s: &Scheme, xy: &XyWitness, prime: &BigInt, nu: u32) -> Vec<BigInt> {
        let g_nu = pow(prime, nu);
        let g_nu1 = &g_nu * prime;
        let mut out = Vec::new();
        let mut k = BigInt::zero();
        while k < g_nu1 {
            let ok = (2..=s.n()).all(|j| {
                let m2j = if j == 2 { BigInt::zero() } else { s.signed(2, j) };
                let m3j = if j == 3 { BigInt::zero() } else { s.signed(3, j) };
                let d = &xy.y * m2j - &xy.x * m3j + &k * s.entry(1, j);
                d.is_multiple_of(&g_nu) && (!s.entry(1, j).is_multiple_of(prime) || !d.is_multiple_of(&g_nu1))
            });
            if ok {
                out.push(k.clone());
            }
            k += 1;
        }
        out
    }

    fn realizable_like(n: usize) -> impl Strategy<Value = Scheme> {
        let primitive = (-5i64..=5, -5i64..=5).prop_filter("primitive", |&(a, b)| num_integer::gcd(a, b) == 1);
        (proptest::collection::vec(primitive, n), 1i64..=36).prop_filter_map("nonzero", |(v, k)| {
            let s = Scheme::from_system(&CurveSystem::from_i64(&v)).unwrap().scale(&big(k));
            (!s.has_zero_entry()).then_some(s)
        })
    }

    fn plucker_schemes(n: usize) -> impl Strategy<Value = Scheme> {
        // integer 2-plane coordinates, not necessarily from primitive vectors
        proptest::collection::vec((-9i64..=9, -9i64..=9), n).prop_filter_map("nonzero, triangle", |v| {
            let s = Scheme::from_system(&CurveSystem::from_i64(&v)).unwrap();
            (!s.has_zero_entry() && check_triangle(&s).unwrap().is_ok()).then_some(s)
        })
    }

    proptest! {
        #[test]
        fn structured_constraints_match_enumeration(s in prop_oneof![realizable_like(3), realizable_like(4), realizable_like(5), plucker_schemes(4), plucker_schemes(5)]) {
            let xy = solve_xy(&s).unwrap();
            let c = kappa_constraints(&s, &xy).unwrap();
            for pc in &c.per_prime {
                let expected = enumerate_admissible(&s, &xy, &pc.prime, pc.nu);
                prop_assert_eq!(pc.allowed_residues(usize::MAX), expected.clone());
                prop_assert_eq!(pc.allowed_count(), BigInt::from(expected.len()));
                prop_assert_eq!(pc.is_feasible(), !expected.is_empty());
            }
        }

        #[test]
        fn every_admissible_kappa_gives_a_witness(s in prop_oneof![realizable_like(3), realizable_like(4), realizable_like(5), plucker_schemes(4)]) {
            let xy = solve_xy(&s).unwrap();
            let c = kappa_constraints(&s, &xy).unwrap();
            for k in c.representatives(50) {
                let w = construct_witness_with(&s, &xy, &c, &k).unwrap();
                prop_assert!(verify_system(&s, &w.system).unwrap());
                // translation by g_123 is admissible and shifts r_j by m_1j
                let shifted = &k + &c.g;
                prop_assert!(c.allows(&shifted));
                let w2 = construct_witness_with(&s, &xy, &c, &shifted).unwrap();
                for (j, (a, b)) in w.r.iter().zip(&w2.r).enumerate() {
                    prop_assert_eq!(b - a, s.entry(1, j + 2).clone());
                }
                // residues of r_2 and r_3 against the reduced base triple
                if !xy.m12.abs().is_one() {
                    let m12 = xy.m12.abs();
                    let want = inv_mod(&xy.m13, &m12).unwrap() * &xy.m23;
                    prop_assert_eq!(w.r[0].mod_floor(&m12), want.mod_floor(&m12));
                }
                if !xy.m13.abs().is_one() {
                    let m13 = xy.m13.abs();
                    let want = -inv_mod(&xy.m12, &m13).unwrap() * &xy.m23;
                    prop_assert_eq!(w.r[1].mod_floor(&m13), want.mod_floor(&m13));
                }
                // primes of m_1j outside g_123 never divide r_j
                for (j, rj) in w.r.iter().enumerate() {
                    let m1j = s.entry(1, j + 2);
                    for (p, _) in factorize(&m1j.abs()).unwrap().pairs {
                        if !c.g.is_multiple_of(&p) {
                            prop_assert!(!rj.is_multiple_of(&p));
                        }
                    }
                }
            }
        }

        #[test]
        fn corollary_forbidden_counts(s in realizable_like(3)) {
            let xy = solve_xy(&s).unwrap();
            for (p, _) in factorize(&xy.g).unwrap().pairs {
                let product = &xy.m12 * &xy.m13 * &xy.m23;
                let expected = if product.is_multiple_of(&p) { 1 } else { 2 };
                prop_assert_eq!(forbidden_count(&s, &p).unwrap(), big(expected));
            }
        }

        #[test]
        fn sl2_preserves_verification(s in realizable_like(4), a in -4i64..=4, b in -4i64..=4, c in -4i64..=4) {
            // (1 a; 0 1)(1 0; b 1)(1 c; 0 1) has determinant 1
            let m1 = [[big(1), big(a)], [big(0), big(1)]];
            let m2 = [[big(1), big(0)], [big(b), big(1)]];
            let m3 = [[big(1), big(c)], [big(0), big(1)]];
            let v = decide_torus(&s).unwrap();
            if let Some(w) = v.witness {
                let moved = sl2_act(&m3, &sl2_act(&m2, &sl2_act(&m1, &w).unwrap()).unwrap()).unwrap();
                prop_assert!(verify_system(&s, &moved).unwrap());
            }
        }
    }
}
