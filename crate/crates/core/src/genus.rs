//! Genus bounds, splitting schemes into torus-realizable summands, and the
//! endemic 4-scheme family.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::is_probable_prime;
use crate::conditions::{decide_torus, Verdict};
use crate::scheme::{entry_count, Scheme};
use crate::{Error, Result};

/// Genus of the surface built by joining one torus per pair and one per
/// curve: `−2 + n(n+1)/2`.
pub fn genus_upper_bound(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("genus bound needs n >= 2, got {n}")));
    }
    Ok((n * (n + 1) / 2 - 2) as u64)
}

/// Smallest nonnegative κ with `a−κ`, `b−κ`, `c` pairwise coprime.
///
/// When `a = b` the only candidates are `a ± 1`; if both are negative the
/// larger one, `a + 1`, is returned.
pub fn coprime_shift(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<BigInt> {
    if !(a - b).is_even() {
        return Err(Error::PreconditionViolated(format!("{a} and {b} have different parity")));
    }
    if c.is_zero() {
        return Err(Error::PreconditionViolated("c must be nonzero".into()));
    }
    if a == b {
        let lower: BigInt = a - 1;
        return Ok(if lower.is_negative() { a + 1 } else { lower });
    }
    let mut k = BigInt::zero();
    loop {
        let (x, y) = (a - &k, b - &k);
        if x.gcd(&y).is_one() && x.gcd(c).is_one() && y.gcd(c).is_one() {
            return Ok(k);
        }
        k += 1;
    }
}

/// `left + right` equals the scheme and both summands are torus-realizable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub left: Scheme,
    pub right: Scheme,
    pub left_verdict: Verdict,
    pub right_verdict: Verdict,
    /// One summand is the zero scheme.
    pub degenerate: bool,
}

impl Decomposition {
    fn build(left: Scheme, right: Scheme) -> Result<Option<Decomposition>> {
        let left_verdict = decide_torus(&left)?;
        let right_verdict = decide_torus(&right)?;
        if !(left_verdict.is_realizable() && right_verdict.is_realizable()) {
            return Ok(None);
        }
        let degenerate = left.is_zero() || right.is_zero();
        Ok(Some(Decomposition { left, right, left_verdict, right_verdict, degenerate }))
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreeSchemeSplit {
    /// Already realized on the torus.
    AlreadyTorus(Verdict),
    /// Realized on a genus-2 surface as a sum of two torus schemes.
    Split(Decomposition),
}

type Splitter = fn(&Scheme) -> Result<(Scheme, Scheme)>;

/// Writes a non-torus 3-scheme as a sum of two torus-realizable 3-schemes.
pub fn decompose_3scheme(s: &Scheme) -> Result<ThreeSchemeSplit> {
    if s.n() != 3 {
        return Err(Error::InvalidShape(format!("expected a 3-scheme, got n = {}", s.n())));
    }
    let verdict = decide_torus(s)?;
    if verdict.is_realizable() {
        return Ok(ThreeSchemeSplit::AlreadyTorus(verdict));
    }
    let (m12, m13, m23) = (s.entry(1, 2), s.entry(1, 3), s.entry(2, 3));

    let (sigma, split): ([usize; 3], Splitter) = if m12.is_zero() {
        ([3, 1, 2], split_with_zero)
    } else if m13.is_zero() {
        ([2, 1, 3], split_with_zero)
    } else if m23.is_zero() {
        ([1, 2, 3], split_with_zero)
    } else if (m12 - m13).is_even() {
        ([1, 2, 3], split_by_shift)
    } else if (m12 - m23).is_even() {
        ([2, 1, 3], split_by_shift)
    } else {
        ([3, 2, 1], split_by_shift)
    };
    let t = s.permute(&sigma)?;
    let (l, r) = split(&t)?;
    // every σ used here is an involution or a 3-cycle; undo it with the inverse
    let inv = crate::scheme::inverse_permutation(&sigma);
    let (l, r) = (l.permute(&inv)?, r.permute(&inv)?);
    debug_assert_eq!(&l.sum(&r)?, s);
    match Decomposition::build(l, r)? {
        Some(d) => Ok(ThreeSchemeSplit::Split(d)),
        None => Err(Error::Internal(format!("split of {s} produced a non-torus summand"))),
    }
}

/// `(a;b,0) = (b;b,0) + (a−b;0,0)`.
fn split_with_zero(t: &Scheme) -> Result<(Scheme, Scheme)> {
    let (a, b) = (t.entry(1, 2), t.entry(1, 3));
    Ok((
        Scheme::new(3, vec![b.clone(), b.clone(), BigInt::zero()])?,
        Scheme::new(3, vec![a - b, BigInt::zero(), BigInt::zero()])?,
    ))
}

/// `(a;b,c) = (a−κ;b−κ,c) + (κ;κ,0)` with `a ≡ b (mod 2)`.
fn split_by_shift(t: &Scheme) -> Result<(Scheme, Scheme)> {
    let (a, b, c) = (t.entry(1, 2), t.entry(1, 3), t.entry(2, 3));
    let k = coprime_shift(a, b, c)?;
    Ok((
        Scheme::new(3, vec![a - &k, b - &k, c.clone()])?,
        Scheme::new(3, vec![k.clone(), k, BigInt::zero()])?,
    ))
}

/// The 4-scheme `(q; pq, pq; pq, pq, p)` for distinct odd primes.
pub fn endemic_family(p: &BigInt, q: &BigInt) -> Result<Scheme> {
    for v in [p, q] {
        if *v <= BigInt::from(2) || !is_probable_prime(v) {
            return Err(Error::Domain(format!("{v} is not an odd prime")));
        }
    }
    if p == q {
        return Err(Error::Domain(format!("p and q must differ, both are {p}")));
    }
    let pq = p * q;
    Scheme::new(4, vec![q.clone(), pq.clone(), pq.clone(), pq.clone(), pq, p.clone()])
}

/// Column-order positions whose entry is the last one assigned for a
/// triple `(a,i,j)` or quadruple `(a,b,i,j)`.
struct SearchPlan {
    pairs: Vec<(usize, usize)>,
}

impl SearchPlan {
    fn new(n: usize) -> Self {
        let pairs = (2..=n).flat_map(|j| (1..j).map(move |i| (i, j))).collect();
        SearchPlan { pairs }
    }

    fn pos(i: usize, j: usize) -> usize {
        (j - 1) * (j - 2) / 2 + (i - 1)
    }
}

#[derive(Default)]
struct Memo {
    triples: HashMap<[BigInt; 3], bool>,
}

impl Memo {
    fn triple_realizable(&mut self, key: [BigInt; 3]) -> Result<bool> {
        if let Some(&v) = self.triples.get(&key) {
            return Ok(v);
        }
        let v = decide_torus(&Scheme::new(3, key.to_vec())?)?.is_realizable();
        self.triples.insert(key, v);
        Ok(v)
    }
}

fn mu_at(e: &[BigInt], a: usize, b: usize, i: usize, j: usize) -> BigInt {
    let m = |x: usize, y: usize| &e[SearchPlan::pos(x, y)];
    m(a, b) * m(i, j) - m(a, i) * m(b, j) + m(a, j) * m(b, i)
}

/// Partial assignment is consistent after fixing entry `(i, j)`.
fn consistent(memo: &mut Memo, e: &[BigInt], i: usize, j: usize) -> Result<bool> {
    for a in 1..i {
        let key = [e[SearchPlan::pos(a, i)].clone(), e[SearchPlan::pos(a, j)].clone(), e[SearchPlan::pos(i, j)].clone()];
        if !memo.triple_realizable(key)? {
            return Ok(false);
        }
        for b in a + 1..i {
            if !mu_at(e, a, b, i, j).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn search_from(
    s: &Scheme,
    plan: &SearchPlan,
    bound: i64,
    memo: &mut Memo,
    left: &mut Vec<BigInt>,
    right: &mut Vec<BigInt>,
    depth: usize,
) -> Result<Option<Decomposition>> {
    if depth == plan.pairs.len() {
        let l = Scheme::new(s.n(), left.clone())?;
        let r = Scheme::new(s.n(), right.clone())?;
        return Decomposition::build(l, r);
    }
    let (i, j) = plan.pairs[depth];
    let target = s.entry(i, j);
    for v in -bound..=bound {
        let v = BigInt::from(v);
        right.push(target - &v);
        left.push(v);
        if consistent(memo, left, i, j)? && consistent(memo, right, i, j)? {
            if let Some(d) = search_from(s, plan, bound, memo, left, right, depth + 1)? {
                return Ok(Some(d));
            }
        }
        left.pop();
        right.pop();
    }
    Ok(None)
}

/// First split `s = m' + m''` in lexicographic order of `m'` (entries in
/// column order, each in `[−bound, bound]`) with both summands
/// torus-realizable. `None` is evidence at this bound only.
///
/// Pruning uses that every 3-curve and 4-curve subsystem of a torus system is
/// itself realizable, so the triples and Plücker quadruples closed by each
/// new entry are checked for both summands before going deeper.
pub fn bounded_decomposition_search(s: &Scheme, bound: u64) -> Result<Option<Decomposition>> {
    let bound = i64::try_from(bound).map_err(|_| Error::Domain(format!("bound {bound} too large")))?;
    let plan = SearchPlan::new(s.n());
    if entry_count(s.n()) == 0 {
        return Decomposition::build(s.clone(), s.clone());
    }
    let first = s.entry(1, 2);
    let found = (-bound..=bound).into_par_iter().map(|v| {
        let mut memo = Memo::default();
        let v = BigInt::from(v);
        let mut left = vec![v.clone()];
        let mut right = vec![first - &v];
        search_from(s, &plan, bound, &mut memo, &mut left, &mut right, 1)
    });
    let results: Vec<Result<Option<Decomposition>>> = found.collect();
    for r in results {
        if let Some(d) = r? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}
