//! Exhaustive realizability check over normalized systems, for validation.
//!
//! Every torus realization can be moved to `γ_1 = (1,0)`, `γ_j = (r_j, m_1j)`
//! with `0 <= r_2 < |m_12|`. The oracle tries each `r_2`, solves the pair
//! relations with curve 2 for the remaining `r_j`, and checks everything
//! directly. It shares no code with the κ-constraint solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scheme::Scheme;
use crate::solver::NormalizedWitness;
use crate::{Error, Result};

/// Refuse scans with `|m_12|` above this.
pub const MAX_SCAN: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub realizable: bool,
    /// Every normalized solution with `0 <= r_2 < |m_12|`; one per orbit.
    pub witnesses: Vec<NormalizedWitness>,
    pub orbit_count: usize,
}

fn accepts(s: &Scheme, r: &[BigInt]) -> bool {
    let n = s.n();
    // r[k] is r_{k+2}; curve 1 is (1,0)
    let m1 = |j: usize| s.entry(1, j);
    for j in 2..=n {
        if !r[j - 2].gcd(m1(j)).is_one() {
            return false;
        }
        for i in 2..j {
            if &r[i - 2] * m1(j) - &r[j - 2] * m1(i) != *s.entry(i, j) {
                return false;
            }
        }
    }
    true
}

/// All normalized solutions of a scheme with nonzero entries.
pub fn oracle_realizable(s: &Scheme) -> Result<OracleResult> {
    if s.has_zero_entry() {
        return Err(Error::PreconditionViolated("the oracle needs nonzero entries".into()));
    }
    let witnesses = match s.n() {
        1 => vec![NormalizedWitness::from_r(s, None, Vec::new())],
        _ => {
            let m12 = s.entry(1, 2);
            if m12.abs() > BigInt::from(MAX_SCAN) {
                return Err(Error::Domain(format!("|m_12| = {} exceeds the scan limit {MAX_SCAN}", m12.abs())));
            }
            let mut found = Vec::new();
            let mut r2 = BigInt::zero();
            'scan: while r2 < m12.abs() {
                let mut r = vec![r2.clone()];
                for j in 3..=s.n() {
                    let (q, rem) = (&r2 * s.entry(1, j) - s.entry(2, j)).div_rem(m12);
                    if !rem.is_zero() {
                        r2 += 1;
                        continue 'scan;
                    }
                    r.push(q);
                }
                if accepts(s, &r) {
                    found.push(NormalizedWitness::from_r(s, None, r));
                }
                r2 += 1;
            }
            found
        }
    };
    Ok(OracleResult { realizable: !witnesses.is_empty(), orbit_count: witnesses.len(), witnesses })
}

/// Number of normalized solutions, one per stabilizer orbit.
pub fn oracle_orbit_count(s: &Scheme) -> Result<usize> {
    Ok(oracle_realizable(s)?.orbit_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::CurveSystem;
    use crate::solver::verify_system;

    fn sch(n: usize, e: &[i64]) -> Scheme {
        Scheme::from_i64(n, e).unwrap()
    }

    #[test]
    fn examples() {
        assert!(!oracle_realizable(&sch(3, &[6, 10, 14])).unwrap().realizable);
        let r = oracle_realizable(&sch(3, &[2, 2, 4])).unwrap();
        assert_eq!(r.orbit_count, 1);
        assert_eq!(r.witnesses[0].r, vec![BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(r.witnesses[0].system, CurveSystem::from_i64(&[(1, 0), (1, 2), (-1, 2)]));
        assert_eq!(oracle_orbit_count(&sch(2, &[6])).unwrap(), 2);
        assert_eq!(oracle_orbit_count(&sch(2, &[7])).unwrap(), 6);
        assert_eq!(oracle_orbit_count(&sch(3, &[1, 1, 1])).unwrap(), 1);
        assert_eq!(oracle_orbit_count(&sch(3, &[6, 10, 14])).unwrap(), 0);
    }

    #[test]
    fn guards() {
        assert!(matches!(oracle_realizable(&sch(3, &[1, 0, 1])), Err(Error::PreconditionViolated(_))));
        assert!(matches!(oracle_realizable(&sch(2, &[1_000_001])), Err(Error::Domain(_))));
    }

    #[test]
    fn witnesses_verify() {
        for s in [sch(3, &[2, 2, 4]), sch(4, &[1, 1, 1, 2, 1, -1]), sch(2, &[-9]), sch(3, &[3, 9, 3])] {
            for w in oracle_realizable(&s).unwrap().witnesses {
                assert!(verify_system(&s, &w.system).unwrap());
            }
        }
    }
}
