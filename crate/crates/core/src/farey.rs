//! Largest families of torus curves with bounded pairwise intersection.
//!
//! Unoriented classes are primitive vectors up to sign, and two of them meet
//! `|p q' − p' q|` times. `SL(2,ℤ)` acts transitively on primitive vectors, so
//! any family can be moved to contain `(1,0)`; the stabilizer of `(1,0)` then
//! brings the member with smallest positive `q` (the *anchor*) to
//! `0 <= p < q`. This leaves finitely many candidates per anchor, and each
//! anchor is solved as an exact maximum clique problem.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unoriented primitive class, stored with `q > 0` or as `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlopeClass {
    pub p: i64,
    pub q: i64,
}

impl SlopeClass {
    /// Canonical representative of `±(p, q)`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::Domain(format!("({p},{q}) is not primitive")));
        }
        let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
        Ok(SlopeClass { p, q })
    }

    /// Geometric intersection number.
    pub fn intersection(&self, other: &SlopeClass) -> u64 {
        (self.p as i128 * other.q as i128 - other.p as i128 * self.q as i128).unsigned_abs() as u64
    }
}

impl fmt::Display for SlopeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Which intersection numbers count as compatible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeRule {
    /// `1 <= i(a, b) <= d`.
    AtMost(u64),
    /// `i(a, b) = k`.
    Exactly(u64),
}

impl EdgeRule {
    pub fn admits(&self, intersection: u64) -> bool {
        match *self {
            EdgeRule::AtMost(d) => (1..=d).contains(&intersection),
            EdgeRule::Exactly(k) => intersection == k,
        }
    }

    fn max_q(&self) -> u64 {
        match *self {
            EdgeRule::AtMost(d) => d,
            EdgeRule::Exactly(k) => k,
        }
    }

    fn check(&self) -> Result<()> {
        if self.max_q() == 0 {
            return Err(Error::Domain("the intersection bound must be at least 1".into()));
        }
        if self.max_q() > i32::MAX as u64 {
            return Err(Error::Domain("the intersection bound is too large".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub size: usize,
    pub witness: Vec<SlopeClass>,
    pub rule: EdgeRule,
}

/// Distinct classes, pairwise compatible under `rule`.
pub fn is_clique(witness: &[SlopeClass], rule: EdgeRule) -> bool {
    witness
        .iter()
        .enumerate()
        .all(|(i, a)| witness[i + 1..].iter().all(|b| a != b && rule.admits(a.intersection(b))))
}

fn check_anchor(anchor: &SlopeClass, max_q: u64) -> Result<()> {
    let SlopeClass { p, q } = *anchor;
    if !(0 <= p && p < q && q as u64 <= max_q && p.gcd(&q) == 1) {
        return Err(Error::Domain(format!("anchor {anchor} must be primitive with 0 <= p < q <= {max_q}")));
    }
    Ok(())
}

/// `(1,0)`, the anchor, and every class that could join a family normalized
/// to contain both with the anchor as its smallest-`q` member besides `(1,0)`.
pub fn candidate_vertices_with(rule: EdgeRule, anchor: &SlopeClass) -> Result<Vec<SlopeClass>> {
    rule.check()?;
    let max_q = rule.max_q();
    check_anchor(anchor, max_q)?;
    let (p0, q0) = (anchor.p, anchor.q);
    let d = max_q as i64;
    let mut out = vec![SlopeClass { p: 1, q: 0 }, *anchor];
    for q in q0..=d {
        if !rule.admits(q as u64) {
            continue;
        }
        // |p q0 − p0 q| <= d
        let lo = Integer::div_ceil(&(p0 * q - d), &q0);
        let hi = Integer::div_floor(&(p0 * q + d), &q0);
        for p in lo..=hi {
            if p.gcd(&q) != 1 {
                continue;
            }
            let c = SlopeClass { p, q };
            if c != *anchor && rule.admits(c.intersection(anchor)) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Candidates for the rule `1 <= i <= d`.
pub fn candidate_vertices(d: u64, anchor: &SlopeClass) -> Result<Vec<SlopeClass>> {
    candidate_vertices_with(EdgeRule::AtMost(d), anchor)
}

/// Fixed-width bitset over the vertices of one clique instance.
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// Exact maximum clique by branch and bound with greedy coloring bounds.
struct CliqueSearch {
    adj: Vec<Bits>,
}

impl CliqueSearch {
    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.remove(v);
                q.remove(v);
                q.and_not_assign(&self.adj[v]);
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }

    fn expand(&self, mut p: Bits, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        let (order, bounds) = self.color_sort(&p);
        for k in (0..order.len()).rev() {
            if current.len() + bounds[k] <= best.len() {
                return;
            }
            let v = order[k];
            current.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                self.expand(next, current, best);
            }
            current.pop();
            p.remove(v);
        }
    }
}

/// Maximum clique of `vertices` under `rule`, vertices ordered by degree.
pub fn max_clique(vertices: &[SlopeClass], rule: EdgeRule) -> Vec<SlopeClass> {
    let n = vertices.len();
    let degree = |i: usize| (0..n).filter(|&j| j != i && rule.admits(vertices[i].intersection(&vertices[j]))).count();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(degree(i)), vertices[i]));
    let ordered: Vec<SlopeClass> = idx.iter().map(|&i| vertices[i]).collect();
    let mut adj = vec![Bits::empty(n); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && rule.admits(ordered[i].intersection(&ordered[j])) {
                adj[i].insert(j);
            }
        }
    }
    let search = CliqueSearch { adj };
    let mut best = Vec::new();
    search.expand(Bits::full(n), &mut Vec::new(), &mut best);
    let mut out: Vec<SlopeClass> = best.into_iter().map(|i| ordered[i]).collect();
    out.sort();
    out
}

fn anchors(rule: EdgeRule) -> Vec<SlopeClass> {
    let max_q = rule.max_q() as i64;
    (1..=max_q)
        .filter(|&q| rule.admits(q as u64))
        .flat_map(|q| (0..q).filter(move |p| p.gcd(&q) == 1).map(move |p| SlopeClass { p, q }))
        .collect()
}

fn best_for_anchor(rule: EdgeRule, anchor: SlopeClass) -> Result<Vec<SlopeClass>> {
    let cands = candidate_vertices_with(rule, &anchor)?;
    let unit = cands[0];
    let rest: Vec<SlopeClass> = cands[2..]
        .iter()
        .copied()
        .filter(|c| rule.admits(c.intersection(&unit)) && rule.admits(c.intersection(&anchor)))
        .collect();
    let mut witness = vec![unit, anchor];
    witness.extend(max_clique(&rest, rule));
    Ok(witness)
}

/// Largest family of distinct classes pairwise compatible under `rule`.
/// Ties between anchors go to the first anchor in `(q, p)` order.
pub fn max_packing_with(rule: EdgeRule) -> Result<CliqueResult> {
    rule.check()?;
    let per_anchor: Vec<Result<Vec<SlopeClass>>> =
        anchors(rule).into_par_iter().map(|a| best_for_anchor(rule, a)).collect();
    let mut best = vec![SlopeClass { p: 1, q: 0 }];
    for w in per_anchor {
        let w = w?;
        if w.len() > best.len() {
            best = w;
        }
    }
    if !is_clique(&best, rule) {
        return Err(Error::Internal("packing witness failed verification".into()));
    }
    Ok(CliqueResult { size: best.len(), witness: best, rule })
}

/// `Δ≤(d)`: the most distinct classes with pairwise intersection in `[1, d]`.
pub fn max_packing(d: u64) -> Result<CliqueResult> {
    max_packing_with(EdgeRule::AtMost(d))
}

/// [`max_packing_with`] on a dedicated pool of `jobs` threads.
pub fn max_packing_jobs(rule: EdgeRule, jobs: usize) -> Result<CliqueResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| max_packing_with(rule))
}
