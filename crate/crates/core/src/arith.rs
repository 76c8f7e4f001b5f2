//! Exact integer kernels: Bézout, modular inverses in prime-power rings, CRT,
//! factorization, p-adic valuations and Euler's totient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Trial division runs up to this bound before switching to Pollard rho.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Fixed Miller–Rabin bases. Deterministic below 3.3·10^24.
const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Prime factorization `n = ∏ prime^exponent`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub pairs: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.pairs.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> BigInt {
        self.pairs
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A residue class `residue mod modulus` with `0 <= residue < modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    pub modulus: BigInt,
    pub residue: BigInt,
}

impl ResidueClass {
    /// Normalizes `residue` into `[0, modulus)`. The modulus must be positive.
    pub fn new(residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if !modulus.is_positive() {
            return Err(Error::Domain(format!("modulus {modulus} must be positive")));
        }
        let residue = residue.into().mod_floor(&modulus);
        Ok(ResidueClass { modulus, residue })
    }

    pub fn contains(&self, value: &BigInt) -> bool {
        value.mod_floor(&self.modulus) == self.residue
    }
}

/// Extended gcd: returns `(g, x, y)` with `a·x + b·y = g = gcd(|a|, |b|)`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Nonnegative gcd.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Inverse of `a` modulo `p^e`, returned in `[0, p^e)`.
pub fn inv_mod_prime_power(a: &BigInt, p: &BigInt, e: u32) -> Result<BigInt> {
    if e == 0 {
        return Err(Error::Domain("exponent must be at least 1".into()));
    }
    let modulus = num_traits::pow(p.clone(), e as usize);
    inv_mod(a, &modulus)
}

/// Inverse of `a` modulo `modulus >= 1`, returned in `[0, modulus)`.
pub fn inv_mod(a: &BigInt, modulus: &BigInt) -> Result<BigInt> {
    if !modulus.is_positive() {
        return Err(Error::Domain(format!("modulus {modulus} must be positive")));
    }
    if modulus.is_one() {
        return Ok(BigInt::zero());
    }
    a.mod_floor(modulus)
        .modinv(modulus)
        .ok_or_else(|| Error::NotInvertible {
            value: a.to_string(),
            modulus: modulus.to_string(),
        })
}

/// Chinese remaindering over pairwise coprime moduli. The empty list gives
/// the trivial class `0 mod 1`.
pub fn crt(classes: &[ResidueClass]) -> Result<ResidueClass> {
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if !gcd(&a.modulus, &b.modulus).is_one() {
                return Err(Error::InvalidModuli(a.modulus.to_string(), b.modulus.to_string()));
            }
        }
    }
    let mut acc = ResidueClass {
        modulus: BigInt::one(),
        residue: BigInt::zero(),
    };
    for c in classes {
        // acc.residue + acc.modulus * t ≡ c.residue (mod c.modulus)
        let inv = inv_mod(&acc.modulus, &c.modulus)?;
        let t = ((&c.residue - &acc.residue) * inv).mod_floor(&c.modulus);
        let residue = &acc.residue + &acc.modulus * t;
        let modulus = &acc.modulus * &c.modulus;
        acc = ResidueClass::new(residue, modulus)?;
    }
    Ok(acc)
}

/// Largest `e` with `p^e | n`. `n = 0` has no finite valuation and is rejected.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Domain("valuation of zero".into()));
    }
    if *p <= BigInt::one() {
        return Err(Error::Domain(format!("{p} is not a prime")));
    }
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        n = q;
        e += 1;
    }
}

/// Complete prime factorization of `n >= 1`.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if !n.is_positive() {
        return Err(Error::Domain(format!("cannot factor {n}")));
    }
    let mut primes: Vec<BigInt> = Vec::new();
    let mut rest = n.clone();

    let push_small = |rest: &mut BigInt, p: u64, out: &mut Vec<BigInt>| {
        while (&*rest % p).is_zero() {
            *rest /= p;
            out.push(BigInt::from(p));
        }
    };
    push_small(&mut rest, 2, &mut primes);
    let mut p = 3u64;
    while p <= TRIAL_DIVISION_BOUND {
        if BigInt::from(p * p) > rest {
            break;
        }
        push_small(&mut rest, p, &mut primes);
        p += 2;
    }
    if rest > BigInt::one() {
        if BigInt::from(p) * BigInt::from(p) > rest {
            primes.push(rest);
        } else {
            split_large(rest, &mut primes);
        }
    }
    primes.sort();
    let mut pairs: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        match pairs.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => pairs.push((q, 1)),
        }
    }
    Ok(Factorization { pairs })
}

fn split_large(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n);
    let other = &n / &d;
    split_large(d, out);
    split_large(other, out);
}

/// Miller–Rabin with the fixed base set [`MR_BASES`].
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigInt::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Nontrivial divisor of a composite `n` via Brent's variant of Pollard rho.
fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c).mod_floor(n);
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()).mod_floor(n);
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

/// Euler's totient of `m >= 1`.
pub fn euler_phi(m: &BigInt) -> Result<BigInt> {
    if !m.is_positive() {
        return Err(Error::Domain(format!("phi({m}) is undefined")));
    }
    let f = factorize(m)?;
    Ok(f.pairs.iter().fold(BigInt::one(), |acc, (p, e)| {
        acc * num_traits::pow(p.clone(), (*e - 1) as usize) * (p - 1u32)
    }))
}

/// Primes strictly below `n`, for the small `n` that occur as curve counts.
pub fn primes_below(n: usize) -> Vec<u64> {
    (2..n as u64)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

/// `p^e` as a `BigInt`.
pub fn pow(p: &BigInt, e: u32) -> BigInt {
    num_traits::pow(p.clone(), e as usize)
}

/// Convenience: `n` as `i64` when it fits.
pub fn to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}
