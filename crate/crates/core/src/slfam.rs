//! Finite levels of products of special linear groups over the p-adic
//! integers, and the unitriangular example group.
//!
//! Only finite quotients are ever materialized: `SL2(Z/p^k)` as a
//! tabulated group with a matrix-label map, direct products over a prime
//! set, and the detection machinery that recovers the prime set from the
//! abstract group by epimorphism search.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::finite::{self, FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlError {
    NotPrime(u32),
    Group(GroupError),
}

impl fmt::Display for SlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlError::NotPrime(n) => write!(f, "{n} is not prime"),
            SlError::Group(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SlError {}

impl From<GroupError> for SlError {
    fn from(e: GroupError) -> Self {
        SlError::Group(e)
    }
}

/// Tabulated `SL2(Z/p^k)` levels stay below this order.
pub const SL2_TABLE_BOUND: usize = 2000;

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite sorted set of primes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeSet(Vec<u32>);

impl PrimeSet {
    pub fn new(primes: impl IntoIterator<Item = u32>) -> Result<Self, SlError> {
        let mut v: Vec<u32> = Vec::new();
        for p in primes {
            if !is_prime(p) {
                return Err(SlError::NotPrime(p));
            }
            v.push(p);
        }
        v.sort_unstable();
        v.dedup();
        Ok(PrimeSet(v))
    }

    pub fn empty() -> Self {
        PrimeSet(Vec::new())
    }

    pub fn primes(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, p: u32) -> bool {
        self.0.binary_search(&p).is_ok()
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// One finite level `SL2(Z/p^k)` with its matrix labels.
#[derive(Debug, Clone)]
pub struct MatrixGroupLevel {
    prime: u32,
    level: u32,
    group: FiniteGroup,
    /// `labels[i] = [a, b, c, d]`: the matrix of element `i`, entries mod
    /// `p^level`, enumerated in lexicographic order.
    labels: Vec<[u32; 4]>,
}

impl MatrixGroupLevel {
    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn labels(&self) -> &[[u32; 4]] {
        &self.labels
    }

    pub fn index_of(&self, matrix: [u32; 4]) -> Option<usize> {
        self.labels.binary_search(&matrix).ok()
    }
}

/// Tabulates `SL2(Z/p^k)` by enumerating all determinant-one matrices in
/// lexicographic entry order.
pub fn sl2_level(p: u32, k: u32) -> Result<MatrixGroupLevel, SlError> {
    if !is_prime(p) {
        return Err(SlError::NotPrime(p));
    }
    assert!(k >= 1);
    let modulus = (p as u64).checked_pow(k).expect("level fits in u64");
    // |SL2(Z/p^k)| = p^(3k) (1 - 1/p^2).
    let expected = modulus.pow(3) - modulus.pow(3) / (p as u64 * p as u64);
    if expected > SL2_TABLE_BOUND as u64 {
        return Err(SlError::Group(GroupError::DeskScaleExceeded {
            order: expected as usize,
            bound: SL2_TABLE_BOUND,
        }));
    }
    let m = modulus as u32;
    let mut labels: Vec<[u32; 4]> = Vec::with_capacity(expected as usize);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let det = (a as u64 * d as u64 + (m as u64) * (m as u64)
                        - b as u64 * c as u64)
                        % m as u64;
                    if det == 1 {
                        labels.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    debug_assert_eq!(labels.len() as u64, expected);
    let index: BTreeMap<[u32; 4], usize> =
        labels.iter().enumerate().map(|(i, &mat)| (mat, i)).collect();
    let order = labels.len();
    let mut table = vec![0u16; order * order];
    for (i, x) in labels.iter().enumerate() {
        for (j, y) in labels.iter().enumerate() {
            table[i * order + j] = index[&mat_mul(x, y, m)] as u16;
        }
    }
    let identity = index[&[1 % m, 0, 0, 1 % m]];
    let group = FiniteGroup::from_table(order, identity, table)?;
    Ok(MatrixGroupLevel { prime: p, level: k, group, labels })
}

fn mat_mul(x: &[u32; 4], y: &[u32; 4], m: u32) -> [u32; 4] {
    let m = m as u64;
    let mul = |a: u32, b: u32| a as u64 * b as u64 % m;
    [
        ((mul(x[0], y[0]) + mul(x[1], y[2])) % m) as u32,
        ((mul(x[0], y[1]) + mul(x[1], y[3])) % m) as u32,
        ((mul(x[2], y[0]) + mul(x[3], y[2])) % m) as u32,
        ((mul(x[2], y[1]) + mul(x[3], y[3])) % m) as u32,
    ]
}

/// The entrywise reduction map from level `k` to level `k-1` of the same
/// prime, as an element-index map.
pub fn sl2_reduction(
    from: &MatrixGroupLevel,
    to: &MatrixGroupLevel,
) -> Result<Vec<usize>, SlError> {
    assert_eq!(from.prime, to.prime);
    assert!(from.level > to.level);
    let m = (to.prime as u64).pow(to.level) as u32;
    from.labels
        .iter()
        .map(|mat| {
            let reduced = [mat[0] % m, mat[1] % m, mat[2] % m, mat[3] % m];
            to.index_of(reduced)
                .ok_or(SlError::Group(GroupError::InvalidTable("reduction misses a matrix")))
        })
        .collect()
}

/// The level-`k` finite quotient of the product of `SL2` over the prime
/// set: the direct product of the per-prime levels.
pub fn gp_level(primes: &PrimeSet, k: u32) -> Result<FiniteGroup, SlError> {
    let mut acc = FiniteGroup::trivial();
    for &p in primes.primes() {
        let factor = sl2_level(p, k)?;
        acc = acc.direct_product(factor.group())?;
    }
    Ok(acc)
}

/// The primes among the candidates whose first `SL2` level is a quotient
/// of `g`, found by generator-image backtracking.
pub fn primes_detected(g: &FiniteGroup, candidates: &PrimeSet) -> Result<PrimeSet, SlError> {
    let mut found = Vec::new();
    for &p in candidates.primes() {
        let target = sl2_level(p, 1)?;
        if finite::find_epimorphism(g, target.group()).is_some() {
            found.push(p);
        }
    }
    PrimeSet::new(found)
}

/// Outcome of the level search distinguishing two prime sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distinguish {
    Equal,
    /// Least level at which the finite quotients are non-isomorphic.
    Level(u32),
}

impl fmt::Display for Distinguish {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distinguish::Equal => write!(f, "equal"),
            Distinguish::Level(k) => write!(f, "level {k}"),
        }
    }
}

/// Finds the least level at which the finite quotients of the two product
/// groups stop being isomorphic; `Equal` when the prime sets coincide.
/// Desk-scale exhaustion before a distinction is reported as an error, not
/// silently swallowed.
pub fn distinguishing_level(p: &PrimeSet, q: &PrimeSet) -> Result<Distinguish, SlError> {
    if p == q {
        return Ok(Distinguish::Equal);
    }
    let mut k = 1;
    loop {
        let gp = gp_level(p, k)?;
        let gq = gp_level(q, k)?;
        if !finite::is_isomorphic(&gp, &gq) {
            return Ok(Distinguish::Level(k));
        }
        k += 1;
    }
}

/// The unitriangular 3x3 matrices over `Z/p`, with labels `[a, b, c]` for
/// the three strictly upper entries (row-major). Element index is
/// `a + p b + p^2 c`.
pub fn ut3(p: u32) -> Result<FiniteGroup, SlError> {
    Ok(ut3_labeled(p)?.0)
}

/// As [`ut3`], also returning the entry labels for oracle checks.
pub fn ut3_labeled(p: u32) -> Result<(FiniteGroup, Vec<[u32; 3]>), SlError> {
    if !is_prime(p) {
        return Err(SlError::NotPrime(p));
    }
    let order = (p as usize).pow(3);
    if order > SL2_TABLE_BOUND {
        return Err(SlError::Group(GroupError::DeskScaleExceeded {
            order,
            bound: SL2_TABLE_BOUND,
        }));
    }
    let pu = p as usize;
    let labels: Vec<[u32; 3]> = (0..order)
        .map(|i| [(i % pu) as u32, (i / pu % pu) as u32, (i / (pu * pu)) as u32])
        .collect();
    let encode = |m: [u32; 3]| (m[0] as usize) + pu * (m[1] as usize) + pu * pu * (m[2] as usize);
    let mut table = vec![0u16; order * order];
    for (i, x) in labels.iter().enumerate() {
        for (j, y) in labels.iter().enumerate() {
            // (1 a c; 0 1 b; 0 0 1) * (1 a' c'; 0 1 b'; 0 0 1)
            //   = (1 a+a' c+c'+a b'; 0 1 b+b'; 0 0 1)
            let prod = [
                (x[0] + y[0]) % p,
                (x[1] + y[1]) % p,
                ((x[2] as u64 + y[2] as u64 + x[0] as u64 * y[1] as u64) % p as u64) as u32,
            ];
            table[i * order + j] = encode(prod) as u16;
        }
    }
    let group = FiniteGroup::from_table(order, 0, table)?;
    Ok((group, labels))
}
