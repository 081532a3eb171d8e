//! Explicitly tabulated finite groups.
//!
//! A [`FiniteGroup`] is a full multiplication table over element indices
//! `0..order`. This is the universal substrate of the crate: every quotient
//! of the free group that we ever materialize is one of these tables.
//! Construction validates the group axioms — identity and inverse laws
//! directly, associativity through Light's test over a generating set,
//! which is equivalent to the exhaustive triple check but stays feasible
//! at order ~2000 (small tables are additionally checked on all triples).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors from table construction and the table-level operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    /// An element index is not below the group order.
    IndexOutOfRange { index: usize, order: usize },
    /// The table is not a valid group: the reason names the first violated law.
    InvalidTable(&'static str),
    /// Quotient was requested by a subgroup that is not normal.
    NotNormal,
    /// A construction would exceed what tabulated groups can hold.
    DeskScaleExceeded { order: usize, bound: usize },
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::IndexOutOfRange { index, order } => {
                write!(f, "element index {index} out of range for group of order {order}")
            }
            GroupError::InvalidTable(reason) => write!(f, "invalid group table: {reason}"),
            GroupError::NotNormal => write!(f, "subgroup is not normal"),
            GroupError::DeskScaleExceeded { order, bound } => {
                write!(f, "group of order {order} exceeds the tabulated bound {bound}")
            }
        }
    }
}

impl core::error::Error for GroupError {}

/// Largest order we will ever tabulate. Direct products of SL2 levels are
/// the only constructions that get anywhere near this.
pub const MAX_TABLE_ORDER: usize = 20_000;

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    /// Flattened `order x order` table: `table[a * order + b] = a * b`.
    table: Vec<u16>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={}, identity={})", self.order, self.identity)
    }
}

impl FiniteGroup {
    /// Validates and wraps a multiplication table.
    pub fn from_table(order: usize, identity: usize, table: Vec<u16>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidTable("order must be positive"));
        }
        if order > MAX_TABLE_ORDER {
            return Err(GroupError::DeskScaleExceeded { order, bound: MAX_TABLE_ORDER });
        }
        if identity >= order {
            return Err(GroupError::IndexOutOfRange { index: identity, order });
        }
        if table.len() != order * order {
            return Err(GroupError::InvalidTable("table has wrong size"));
        }
        if table.iter().any(|&x| (x as usize) >= order) {
            return Err(GroupError::InvalidTable("table entry out of range"));
        }
        let g = FiniteGroup { order, identity, table };
        g.validate()?;
        Ok(g)
    }

    /// Internal constructor for tables that are groups by construction
    /// (quotients, direct products, relabelings). Debug builds re-validate
    /// small tables.
    pub(crate) fn from_table_unchecked(order: usize, identity: usize, table: Vec<u16>) -> Self {
        let g = FiniteGroup { order, identity, table };
        debug_assert!(g.order > 2048 || g.validate().is_ok());
        g
    }

    fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        let e = self.identity;
        // Identity row and column.
        for a in 0..n {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(GroupError::InvalidTable("identity law fails"));
            }
        }
        // Rows and columns are permutations.
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let ab = self.mul(a, b);
                if seen[ab] {
                    return Err(GroupError::InvalidTable("row is not a permutation"));
                }
                seen[ab] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let ba = self.mul(b, a);
                if seen[ba] {
                    return Err(GroupError::InvalidTable("column is not a permutation"));
                }
                seen[ba] = true;
            }
        }
        // Two-sided inverses.
        for a in 0..n {
            let b = (0..n).find(|&b| self.mul(a, b) == e);
            match b {
                Some(b) if self.mul(b, a) == e => {}
                _ => return Err(GroupError::InvalidTable("inverse law fails")),
            }
        }
        // Associativity: exhaustive on all triples for small tables, Light's
        // test over a generating set otherwise (the two are equivalent).
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::InvalidTable("associativity fails"));
                        }
                    }
                }
            }
        } else {
            let gens = self.greedy_generators();
            for &g in &gens {
                for a in 0..n {
                    let ag = self.mul(a, g);
                    for b in 0..n {
                        if self.mul(ag, b) != self.mul(a, self.mul(g, b)) {
                            return Err(GroupError::InvalidTable("associativity fails"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    /// Unchecked table lookup; indices must be valid.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        self.table[a * self.order + b] as usize
    }

    /// Checked product, for callers holding untrusted indices.
    pub fn multiply(&self, a: usize, b: usize) -> Result<usize, GroupError> {
        if a >= self.order {
            return Err(GroupError::IndexOutOfRange { index: a, order: self.order });
        }
        if b >= self.order {
            return Err(GroupError::IndexOutOfRange { index: b, order: self.order });
        }
        Ok(self.mul(a, b))
    }

    pub fn inverse_of(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        (0..self.order)
            .find(|&b| self.mul(a, b) == self.identity)
            .expect("validated group has inverses")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `a` raised to an integer power (negative exponents go through the inverse).
    pub fn power(&self, a: usize, k: i64) -> usize {
        let ord = self.element_order(a) as i64;
        let k = k.rem_euclid(ord);
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Exponent of the group: least k with a^k = e for all a.
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FiniteGroup { order: 1, identity: 0, table: vec![0] }
    }

    /// Cyclic group of order `n` with addition mod `n`; identity is 0.
    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_TABLE_ORDER).contains(&n));
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = ((a + b) % n) as u16;
            }
        }
        FiniteGroup { order: n, identity: 0, table }
    }

    /// Symmetric group on three points, elements in a fixed order:
    /// id, (01), (02), (12), (012), (021).
    pub fn symmetric3() -> Self {
        const PERMS: [[u8; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let compose = |p: &[u8; 3], q: &[u8; 3]| -> [u8; 3] {
            // p then q, i.e. (p*q)(x) = q(p(x)): products read left to right.
            [q[p[0] as usize], q[p[1] as usize], q[p[2] as usize]]
        };
        let index_of = |r: &[u8; 3]| PERMS.iter().position(|p| p == r).unwrap();
        let mut table = vec![0u16; 36];
        for a in 0..6 {
            for b in 0..6 {
                table[a * 6 + b] = index_of(&compose(&PERMS[a], &PERMS[b])) as u16;
            }
        }
        FiniteGroup { order: 6, identity: 0, table }
    }

    /// Direct product with composite index `a * other.order + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let n1 = self.order;
        let n2 = other.order;
        let n = n1.checked_mul(n2).filter(|&n| n <= MAX_TABLE_ORDER).ok_or(
            GroupError::DeskScaleExceeded { order: n1.saturating_mul(n2), bound: MAX_TABLE_ORDER },
        )?;
        let mut table = vec![0u16; n * n];
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                let a = a1 * n2 + a2;
                let row = a * n;
                for b1 in 0..n1 {
                    let c1 = self.mul(a1, b1) * n2;
                    let base = row + b1 * n2;
                    for b2 in 0..n2 {
                        table[base + b2] = (c1 + other.mul(a2, b2)) as u16;
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            identity: self.identity * n2 + other.identity,
            table,
        })
    }

    /// Greedy generating sequence: repeatedly adjoin the least-index
    /// element of maximal order outside the current closure. Maximal-order
    /// picks keep the sequence short on direct products, which the
    /// backtracking searches depend on. Deterministic.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let orders: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        let mut gens = Vec::new();
        let mut closure = subgroup_closure_impl(self, &gens);
        while closure.len() < self.order {
            let next = (0..self.order)
                .filter(|a| !closure.contains(a))
                .max_by_key(|&a| (orders[a], self.order - a))
                .unwrap();
            gens.push(next);
            closure = subgroup_closure_impl(self, &gens);
        }
        gens
    }

    /// Multiset of element orders, as (order, multiplicity) pairs.
    pub fn order_profile(&self) -> Vec<(usize, usize)> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for a in 0..self.order {
            *counts.entry(self.element_order(a)).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// A subgroup carried with the generators that produced it.
#[derive(Debug, Clone)]
pub struct GeneratedSubgroup<'a> {
    parent: &'a FiniteGroup,
    /// Sorted member indices; always contains the identity.
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl<'a> GeneratedSubgroup<'a> {
    pub fn parent(&self) -> &'a FiniteGroup {
        self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a subgroup always contains the identity
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        let g = self.parent;
        for c in 0..g.order() {
            let c_inv = g.inverse_of(c);
            for &a in &self.members {
                if !self.contains(g.mul(g.mul(c, a), c_inv)) {
                    return false;
                }
            }
        }
        true
    }
}

fn subgroup_closure_impl(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut set = BTreeSet::new();
    set.insert(g.identity());
    let mut frontier: Vec<usize> = vec![g.identity()];
    while let Some(a) = frontier.pop() {
        for &s in gens {
            let next = g.mul(a, s);
            if set.insert(next) {
                frontier.push(next);
            }
        }
    }
    set
}

/// Least subset containing the generators and the identity, closed under
/// product (inverses come free in a finite group).
pub fn subgroup_closure<'a>(
    g: &'a FiniteGroup,
    gens: &[usize],
) -> Result<GeneratedSubgroup<'a>, GroupError> {
    for &s in gens {
        if s >= g.order() {
            return Err(GroupError::IndexOutOfRange { index: s, order: g.order() });
        }
    }
    let set = subgroup_closure_impl(g, gens);
    Ok(GeneratedSubgroup {
        parent: g,
        members: set.into_iter().collect(),
        generators: gens.to_vec(),
    })
}

/// Least normal subgroup containing the generators: closure under product
/// and conjugation by every group element.
pub fn normal_closure<'a>(
    g: &'a FiniteGroup,
    gens: &[usize],
) -> Result<GeneratedSubgroup<'a>, GroupError> {
    for &s in gens {
        if s >= g.order() {
            return Err(GroupError::IndexOutOfRange { index: s, order: g.order() });
        }
    }
    let mut current: Vec<usize> = gens.to_vec();
    loop {
        let set = subgroup_closure_impl(g, &current);
        let mut extra: Vec<usize> = Vec::new();
        for c in 0..g.order() {
            let c_inv = g.inverse_of(c);
            for &a in &set {
                let conj = g.mul(g.mul(c, a), c_inv);
                if !set.contains(&conj) {
                    extra.push(conj);
                }
            }
        }
        if extra.is_empty() {
            return Ok(GeneratedSubgroup {
                parent: g,
                members: set.into_iter().collect(),
                generators: gens.to_vec(),
            });
        }
        current.extend(extra);
    }
}

/// Quotient of `g` by a normal subgroup, with the projection map.
///
/// Coset representatives are the least element index in each coset, and
/// cosets are numbered in increasing representative order, so the output
/// is deterministic down to the byte.
pub fn quotient(
    g: &FiniteGroup,
    n: &GeneratedSubgroup<'_>,
) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    if !n.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let order = g.order();
    let mut coset_rep = vec![usize::MAX; order];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..order {
        if coset_rep[x] != usize::MAX {
            continue;
        }
        // x is the least element of its coset xN.
        reps.push(x);
        for &a in n.members() {
            coset_rep[g.mul(x, a)] = x;
        }
    }
    let class_of: BTreeMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let k = reps.len();
    let mut table = vec![0u16; k * k];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * k + j] = class_of[&coset_rep[g.mul(a, b)]] as u16;
        }
    }
    let projection: Vec<usize> = (0..order).map(|x| class_of[&coset_rep[x]]).collect();
    let q = FiniteGroup::from_table_unchecked(k, projection[g.identity()], table);
    Ok((q, projection))
}

/// Extends the generator assignment `src_gens[i] -> images[i]` to a full
/// homomorphism `g1 -> g2` if one exists.
///
/// The pair subgroup generated by `(src_gens[i], images[i])` inside
/// `g1 x g2` is closed off; the assignment extends iff that closure is the
/// graph of a (total) function, which as `src_gens` generate `g1` happens
/// iff the closure has exactly `g1.order()` elements.
pub fn find_homomorphism(
    g1: &FiniteGroup,
    src_gens: &[usize],
    g2: &FiniteGroup,
    images: &[usize],
) -> Result<Option<Vec<usize>>, GroupError> {
    if src_gens.len() != images.len() {
        return Err(GroupError::InvalidTable("generator/image length mismatch"));
    }
    for &s in src_gens {
        if s >= g1.order() {
            return Err(GroupError::IndexOutOfRange { index: s, order: g1.order() });
        }
    }
    for &t in images {
        if t >= g2.order() {
            return Err(GroupError::IndexOutOfRange { index: t, order: g2.order() });
        }
    }
    match pair_closure(g1, src_gens, g2, images) {
        Some((map, covered)) if covered == g1.order() => Ok(Some(map)),
        _ => Ok(None),
    }
}

/// Closes the pair subgroup generated by `(src_gens[i], images[i])`.
///
/// Returns `None` if the closure is not a function graph (two pairs share a
/// first coordinate), otherwise the partial map together with the number of
/// elements of `g1` it covers.
pub(crate) fn pair_closure(
    g1: &FiniteGroup,
    src_gens: &[usize],
    g2: &FiniteGroup,
    images: &[usize],
) -> Option<(Vec<usize>, usize)> {
    let mut map = vec![usize::MAX; g1.order()];
    map[g1.identity()] = g2.identity();
    let mut frontier: Vec<usize> = vec![g1.identity()];
    let mut covered = 1usize;
    while let Some(a) = frontier.pop() {
        let fa = map[a];
        for (&s, &t) in src_gens.iter().zip(images) {
            let next = g1.mul(a, s);
            let fnext = g2.mul(fa, t);
            if map[next] == usize::MAX {
                map[next] = fnext;
                covered += 1;
                frontier.push(next);
            } else if map[next] != fnext {
                return None; // not a function graph
            }
        }
    }
    Some((map, covered))
}

/// Searches for a surjective homomorphism `g -> h` by backtracking over
/// images of a greedy generating sequence of `g`, pruning on element
/// orders. Returns the full map if found.
pub fn find_epimorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if h.order() == 1 {
        return Some(vec![h.identity(); g.order()]);
    }
    if !g.order().is_multiple_of(h.order()) {
        return None;
    }
    let gens = g.greedy_generators();
    // Candidate images per generator: element order must divide the
    // generator's order.
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let ord = g.element_order(s);
            (0..h.order()).filter(|&t| ord.is_multiple_of(h.element_order(t))).collect()
        })
        .collect();
    let mut images = vec![0usize; gens.len()];
    search_epi(g, h, &gens, &candidates, &mut images, 0)
}

fn search_epi(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut [usize],
    depth: usize,
) -> Option<Vec<usize>> {
    if depth == gens.len() {
        let (map, covered) = pair_closure(g, gens, h, images)?;
        if covered < g.order() {
            return None;
        }
        // Surjectivity: the image subgroup must be all of h.
        let image: BTreeSet<usize> = map.iter().copied().collect();
        if image.len() == h.order() {
            return Some(map);
        }
        return None;
    }
    for &t in &candidates[depth] {
        images[depth] = t;
        // Partial consistency: the closure over the first depth+1 pairs must
        // already be a function graph.
        if pair_closure(g, &gens[..=depth], h, &images[..=depth]).is_none() {
            continue;
        }
        if let Some(map) = search_epi(g, h, gens, candidates, images, depth + 1) {
            return Some(map);
        }
    }
    None
}

/// Isomorphism test by generator-image backtracking, pruned by element
/// order multisets. No canonical forms; desk-scale orders only.
pub fn is_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> bool {
    if g1.order() != g2.order() {
        return false;
    }
    if g1.order_profile() != g2.order_profile() {
        return false;
    }
    if g1.is_abelian() != g2.is_abelian() {
        return false;
    }
    let gens = g1.greedy_generators();
    if gens.is_empty() {
        return true; // both trivial
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let ord = g1.element_order(s);
            (0..g2.order()).filter(|&t| g2.element_order(t) == ord).collect()
        })
        .collect();
    let mut images = vec![0usize; gens.len()];
    search_iso(g1, g2, &gens, &candidates, &mut images, 0)
}

fn search_iso(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut [usize],
    depth: usize,
) -> bool {
    if depth == gens.len() {
        if let Some((map, covered)) = pair_closure(g1, gens, g2, images) {
            if covered < g1.order() {
                return false;
            }
            let distinct: BTreeSet<usize> = map.iter().copied().collect();
            return distinct.len() == g2.order();
        }
        return false;
    }
    for &t in &candidates[depth] {
        images[depth] = t;
        if pair_closure(g1, &gens[..=depth], g2, &images[..=depth]).is_none() {
            continue;
        }
        if search_iso(g1, g2, gens, candidates, images, depth + 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables_are_groups() {
        for n in 1..=12 {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(g.order(), n);
            assert_eq!(g.element_order(1 % n), n);
            FiniteGroup::from_table(n, 0, g.table().to_vec()).unwrap();
        }
    }

    #[test]
    fn multiply_identity_law() {
        let g = FiniteGroup::cyclic(7);
        for b in 0..7 {
            assert_eq!(g.multiply(g.identity(), b).unwrap(), b);
        }
    }

    #[test]
    fn multiply_z3() {
        // 1 + 1 = 2 in Z/3.
        let g = FiniteGroup::cyclic(3);
        assert_eq!(g.multiply(1, 1).unwrap(), 2);
    }

    #[test]
    fn multiply_rejects_bad_index() {
        let g = FiniteGroup::cyclic(3);
        assert_eq!(
            g.multiply(3, 0),
            Err(GroupError::IndexOutOfRange { index: 3, order: 3 })
        );
    }

    #[test]
    fn bad_tables_are_rejected() {
        // Constant table: identity law fails.
        assert!(FiniteGroup::from_table(2, 0, vec![0, 0, 0, 0]).is_err());
        // Latin square with identity but not associative (order 5 loop).
        let loop5: Vec<u16> = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert_eq!(
            FiniteGroup::from_table(5, 0, loop5),
            Err(GroupError::InvalidTable("associativity fails"))
        );
    }

    #[test]
    fn symmetric3_structure() {
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.order_profile(), vec![(1, 1), (2, 3), (3, 2)]);
    }

    #[test]
    fn closure_of_empty_set_is_identity() {
        let g = FiniteGroup::cyclic(6);
        let h = subgroup_closure(&g, &[]).unwrap();
        assert_eq!(h.members(), &[0]);
    }

    #[test]
    fn closure_order_two_in_z6() {
        let g = FiniteGroup::cyclic(6);
        let h = subgroup_closure(&g, &[3]).unwrap();
        assert_eq!(h.members(), &[0, 3]);
    }

    #[test]
    fn normal_closure_of_empty_is_trivial() {
        let g = FiniteGroup::symmetric3();
        let h = normal_closure(&g, &[]).unwrap();
        assert_eq!(h.members(), &[0]);
    }

    #[test]
    fn normal_closure_matches_subgroup_closure_in_abelian() {
        let g = FiniteGroup::cyclic(12);
        for gens in [&[2usize][..], &[3, 4][..], &[6][..]] {
            let a = subgroup_closure(&g, gens).unwrap();
            let b = normal_closure(&g, gens).unwrap();
            assert_eq!(a.members(), b.members());
        }
    }

    #[test]
    fn normal_closure_of_three_cycle_in_s3() {
        // Exhaustive-conjugation oracle: conjugates of a 3-cycle and their
        // products give exactly the alternating subgroup of size 3.
        let g = FiniteGroup::symmetric3();
        let three_cycle = (0..6).find(|&a| g.element_order(a) == 3).unwrap();
        let mut expected: BTreeSet<usize> = BTreeSet::new();
        expected.insert(g.identity());
        for c in 0..6 {
            expected.insert(g.mul(g.mul(c, three_cycle), g.inverse_of(c)));
        }
        let n = normal_closure(&g, &[three_cycle]).unwrap();
        assert_eq!(n.len(), 3);
        assert!(expected.iter().all(|&a| n.contains(a)));
        assert!(n.is_normal());
    }

    #[test]
    fn quotient_by_trivial_and_whole() {
        let g = FiniteGroup::symmetric3();
        let triv = subgroup_closure(&g, &[]).unwrap();
        let (q, proj) = quotient(&g, &triv).unwrap();
        assert_eq!(q.order(), 6);
        assert!(is_isomorphic(&q, &g));
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(proj[g.mul(a, b)], q.mul(proj[a], proj[b]));
            }
        }
        let whole = subgroup_closure(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        let (q, _) = quotient(&g, &whole).unwrap();
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn quotient_rejects_non_normal() {
        let g = FiniteGroup::symmetric3();
        let transposition = (0..6).find(|&a| g.element_order(a) == 2).unwrap();
        let h = subgroup_closure(&g, &[transposition]).unwrap();
        assert!(!h.is_normal());
        assert_eq!(quotient(&g, &h), Err(GroupError::NotNormal));
    }

    #[test]
    fn homomorphism_trivial_images() {
        let g = FiniteGroup::symmetric3();
        let t = FiniteGroup::trivial();
        let gens = g.greedy_generators();
        let images = vec![0; gens.len()];
        let map = find_homomorphism(&g, &gens, &t, &images).unwrap().unwrap();
        assert!(map.iter().all(|&v| v == 0));
    }

    #[test]
    fn homomorphism_mod_two_surjection() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        let map = find_homomorphism(&z4, &[1], &z2, &[1]).unwrap().unwrap();
        assert_eq!(map, vec![0, 1, 0, 1]);
    }

    #[test]
    fn homomorphism_order_obstruction() {
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        assert_eq!(find_homomorphism(&z2, &[1], &z3, &[1]).unwrap(), None);
        assert_eq!(find_homomorphism(&z2, &[1], &z3, &[2]).unwrap(), None);
    }

    #[test]
    fn isomorphism_reflexive_and_order_pruning() {
        let g = FiniteGroup::symmetric3();
        assert!(is_isomorphic(&g, &g));
        let z4 = FiniteGroup::cyclic(4);
        let v4 = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2)).unwrap();
        assert!(!is_isomorphic(&z4, &v4));
        assert!(is_isomorphic(&v4, &v4));
    }

    #[test]
    fn isomorphism_z6_two_presentations() {
        let z6 = FiniteGroup::cyclic(6);
        let z2xz3 = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(3)).unwrap();
        assert!(is_isomorphic(&z6, &z2xz3));
    }

    #[test]
    fn epimorphism_search_projects_products() {
        let s3 = FiniteGroup::symmetric3();
        let z3 = FiniteGroup::cyclic(3);
        let prod = s3.direct_product(&z3).unwrap();
        assert!(find_epimorphism(&prod, &s3).is_some());
        assert!(find_epimorphism(&prod, &z3).is_some());
        assert!(find_epimorphism(&z3, &s3).is_none());
        // S3 has no quotient of order 3.
        assert!(find_epimorphism(&s3, &z3).is_none());
    }
}
