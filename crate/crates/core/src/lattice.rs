//! The computable lattice of open normal subgroups of the free profinite
//! group on generators `x0, x1, ...` that contain almost every generator.
//!
//! An open normal subgroup is presented as the kernel of an epimorphism
//! onto a tabulated finite group with finite generator support. Elements
//! are kept in a canonical form under which kernel equality is structural
//! equality, so the enumeration can be repetition-free and file output is
//! bit-exact.

use alloc::collections::BTreeSet;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::finite::{self, FiniteGroup, GroupError};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// The images do not generate the target group.
    NonGeneratingImages,
    Group(GroupError),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NonGeneratingImages => {
                write!(f, "images do not generate the target group")
            }
            LatticeError::Group(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LatticeError {}

impl From<GroupError> for LatticeError {
    fn from(e: GroupError) -> Self {
        LatticeError::Group(e)
    }
}

/// An open normal subgroup of the free group, presented as `ker phi` for an
/// epimorphism `phi` onto `target` that kills every generator `x_i` with
/// `i >= support`.
///
/// Canonical form: no trailing identity images, and the target is relabeled
/// by breadth-first search from the identity along the images, so two
/// elements present the same kernel iff they are structurally equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeElement {
    support: usize,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LatticeElement(support={}, |target|={}, images={:?})",
            self.support,
            self.target.order(),
            self.images
        )
    }
}

impl LatticeElement {
    /// Wraps an epimorphism given by its target and generator images.
    pub fn new(target: FiniteGroup, images: Vec<usize>) -> Result<Self, LatticeError> {
        for &g in &images {
            if g >= target.order() {
                return Err(LatticeError::Group(GroupError::IndexOutOfRange {
                    index: g,
                    order: target.order(),
                }));
            }
        }
        let generated = finite::subgroup_closure(&target, &images)?;
        if generated.len() != target.order() {
            return Err(LatticeError::NonGeneratingImages);
        }
        Ok(Self::canonicalize(target, images))
    }

    /// The top element: kernel of the map onto the trivial group.
    pub fn top() -> Self {
        LatticeElement { support: 0, target: FiniteGroup::trivial(), images: Vec::new() }
    }

    pub fn is_top(&self) -> bool {
        self.target.order() == 1
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of generator `x_i`; identity beyond the support.
    pub fn image_of(&self, i: usize) -> usize {
        if i < self.support {
            self.images[i]
        } else {
            self.target.identity()
        }
    }

    /// Applies the epimorphism to a word.
    pub fn evaluate(&self, w: &Word) -> usize {
        let mut acc = self.target.identity();
        for &(i, k) in w.syllables() {
            let img = self.image_of(i);
            acc = self.target.mul(acc, self.target.power(img, k));
        }
        acc
    }

    /// Membership of a word in the kernel.
    pub fn contains_word(&self, w: &Word) -> bool {
        self.evaluate(w) == self.target.identity()
    }

    /// Kernel containment: `ker self <= ker other`, decided by whether the
    /// generator assignment factors through `self.target`.
    pub fn leq(&self, other: &LatticeElement) -> bool {
        let span = self.support.max(other.support);
        let srcs: Vec<usize> = (0..span).map(|i| self.image_of(i)).collect();
        let dsts: Vec<usize> = (0..span).map(|i| other.image_of(i)).collect();
        matches!(
            finite::pair_closure(&self.target, &srcs, &other.target, &dsts),
            Some((_, covered)) if covered == self.target.order()
        )
    }

    /// Kernel equality (mutual `leq` collapses to structural equality on
    /// canonical forms, which `PartialEq` already is).
    pub fn same_kernel(&self, other: &LatticeElement) -> bool {
        self == other
    }

    /// Greatest lower bound: kernel intersection. The target is the
    /// subgroup of the direct product closed off from the paired images.
    pub fn meet(&self, other: &LatticeElement) -> Result<LatticeElement, LatticeError> {
        let span = self.support.max(other.support);
        let pairs: Vec<(usize, usize)> =
            (0..span).map(|i| (self.image_of(i), other.image_of(i))).collect();
        let (dense, members) = pair_span(&self.target, &other.target, &pairs)?;
        let n2 = other.target.order();
        let at = |a1: usize, a2: usize| dense[a1 * n2 + a2] as usize;
        let k = members.len();
        let mut table = vec![0u16; k * k];
        for (a, &(a1, a2)) in members.iter().enumerate() {
            let row = a * k;
            for (b, &(b1, b2)) in members.iter().enumerate() {
                table[row + b] = at(self.target.mul(a1, b1), other.target.mul(a2, b2)) as u16;
            }
        }
        let identity = at(self.target.identity(), other.target.identity());
        let target = FiniteGroup::from_table_unchecked(k, identity, table);
        let images = pairs.iter().map(|&(a1, a2)| at(a1, a2)).collect();
        Ok(Self::canonicalize(target, images))
    }

    /// Least upper bound: the product of the kernels. Computed as the
    /// quotient of `self.target` by the normal closure of the first
    /// coordinates that pair with the identity in the closed product span.
    pub fn join(&self, other: &LatticeElement) -> Result<LatticeElement, LatticeError> {
        let span = self.support.max(other.support);
        let pairs: Vec<(usize, usize)> =
            (0..span).map(|i| (self.image_of(i), other.image_of(i))).collect();
        let (_, members) = pair_span(&self.target, &other.target, &pairs)?;
        let killed: Vec<usize> = members
            .iter()
            .filter(|&&(_, b)| b == other.target.identity())
            .map(|&(a, _)| a)
            .collect();
        let n = finite::normal_closure(&self.target, &killed)?;
        let (q, proj) = finite::quotient(&self.target, &n)?;
        let images = (0..self.support).map(|i| proj[self.images[i]]).collect();
        Ok(Self::canonicalize(q, images))
    }

    /// Canonical form: trim trailing identity images, then relabel the
    /// target breadth-first from the identity along the images.
    fn canonicalize(target: FiniteGroup, mut images: Vec<usize>) -> LatticeElement {
        while images.last() == Some(&target.identity()) {
            images.pop();
        }
        let order = target.order();
        let mut old_to_new = vec![usize::MAX; order];
        let mut new_to_old = Vec::with_capacity(order);
        old_to_new[target.identity()] = 0;
        new_to_old.push(target.identity());
        let mut head = 0;
        while head < new_to_old.len() {
            let a = new_to_old[head];
            head += 1;
            for &g in &images {
                let b = target.mul(a, g);
                if old_to_new[b] == usize::MAX {
                    old_to_new[b] = new_to_old.len();
                    new_to_old.push(b);
                }
            }
        }
        assert_eq!(new_to_old.len(), order, "images must generate the target");
        // Tables produced by the meet construction are already labeled in
        // BFS discovery order; skip the relabeling pass for those.
        if new_to_old.iter().enumerate().all(|(i, &a)| i == a) {
            let support = images.len();
            return LatticeElement { support, target, images };
        }
        let mut table = vec![0u16; order * order];
        for na in 0..order {
            let a = new_to_old[na];
            for nb in 0..order {
                table[na * order + nb] = old_to_new[target.mul(a, new_to_old[nb])] as u16;
            }
        }
        let images: Vec<usize> = images.iter().map(|&g| old_to_new[g]).collect();
        let support = images.len();
        LatticeElement {
            support,
            target: FiniteGroup::from_table_unchecked(order, 0, table),
            images,
        }
    }
}

/// Subgroup of `g1 x g2` generated by the given pairs: a dense index over
/// `a1 * |g2| + a2` (sentinel `u32::MAX` outside the span) and the member
/// list in discovery order.
#[allow(clippy::type_complexity)]
fn pair_span(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    pairs: &[(usize, usize)],
) -> Result<(Vec<u32>, Vec<(usize, usize)>), LatticeError> {
    let n2 = g2.order();
    let mut dense = vec![u32::MAX; g1.order() * n2];
    let mut members = Vec::new();
    let e = (g1.identity(), g2.identity());
    dense[e.0 * n2 + e.1] = 0;
    members.push(e);
    let mut head = 0;
    while head < members.len() {
        let (a1, a2) = members[head];
        head += 1;
        for &(s1, s2) in pairs {
            let next = (g1.mul(a1, s1), g2.mul(a2, s2));
            let slot = next.0 * n2 + next.1;
            if dense[slot] == u32::MAX {
                if members.len() >= finite::MAX_TABLE_ORDER {
                    return Err(LatticeError::Group(GroupError::DeskScaleExceeded {
                        order: members.len() + 1,
                        bound: finite::MAX_TABLE_ORDER,
                    }));
                }
                dense[slot] = members.len() as u32;
                members.push(next);
            }
        }
    }
    Ok((dense, members))
}

/// Exact value of the ultrametric `delta` at a finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaOutcome {
    /// The two words are equal in the free group; the distance is exactly 0.
    Zero,
    /// Separated first at base level `n`: the distance is exactly `2^-n`.
    Separated(usize),
    /// Not separated by any base element up to the precision: the distance
    /// is at most `2^-precision`.
    AtMostPrecision(usize),
}

impl DeltaOutcome {
    /// Separation level, with `None` meaning "below every tested level".
    pub fn level(&self) -> Option<usize> {
        match self {
            DeltaOutcome::Separated(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for DeltaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaOutcome::Zero => write!(f, "0"),
            DeltaOutcome::Separated(0) => write!(f, "1"),
            DeltaOutcome::Separated(n) => write!(f, "1/2^{n}"),
            DeltaOutcome::AtMostPrecision(p) => write!(f, "<=1/2^{p}"),
        }
    }
}

/// The lattice with its enumeration and base-element memo tables.
///
/// The memo is append-only and deterministic: readers of the developed
/// prefix are never invalidated, and re-deriving an entry always produces
/// the same value.
pub struct Lattice {
    enumerated: Vec<LatticeElement>,
    seen: BTreeSet<LatticeElement>,
    completed_stage: usize,
    base: Vec<Rc<LatticeElement>>,
}

impl Default for Lattice {
    fn default() -> Self {
        Self::new()
    }
}

impl Lattice {
    pub fn new() -> Self {
        Lattice {
            enumerated: Vec::new(),
            seen: BTreeSet::new(),
            completed_stage: 0,
            base: Vec::new(),
        }
    }

    /// The `i`-th element of the fixed repetition-free enumeration of all
    /// epimorphism kernels with finite support.
    ///
    /// Candidates are swept in stages: stage `s` covers target order `n`
    /// and support `m` with `max(n, m, 1) = s`, ordered by target order,
    /// then lexicographic multiplication table, then support, then
    /// lexicographic image tuple. Non-generating image tuples and kernels
    /// already listed are skipped.
    pub fn enumerate(&mut self, i: usize) -> LatticeElement {
        while self.enumerated.len() <= i {
            self.advance_stage();
        }
        self.enumerated[i].clone()
    }

    /// How many elements have been listed so far (memo inspection).
    pub fn developed_len(&self) -> usize {
        self.enumerated.len()
    }

    fn advance_stage(&mut self) {
        let s = self.completed_stage + 1;
        for n in 1..=s {
            for table in group_tables(n) {
                let target = FiniteGroup::from_table_unchecked(n, 0, table);
                for m in 0..=s {
                    if n < s && m < s {
                        continue; // handled in an earlier stage
                    }
                    let mut images = vec![0usize; m];
                    loop {
                        self.consider(&target, &images);
                        // lexicographic odometer over (0..n)^m
                        let mut pos = m;
                        while pos > 0 {
                            images[pos - 1] += 1;
                            if images[pos - 1] < n {
                                break;
                            }
                            images[pos - 1] = 0;
                            pos -= 1;
                        }
                        if pos == 0 {
                            break;
                        }
                    }
                }
            }
        }
        self.completed_stage = s;
    }

    fn consider(&mut self, target: &FiniteGroup, images: &[usize]) {
        // Trailing identity images can never be canonical.
        if images.last() == Some(&target.identity()) {
            return;
        }
        let generated = finite::subgroup_closure(target, images).expect("valid indices");
        if generated.len() != target.order() {
            return;
        }
        let element = LatticeElement::canonicalize(target.clone(), images.to_vec());
        if self.seen.insert(element.clone()) {
            self.enumerated.push(element);
        }
    }

    /// The `n`-th element of the fixed strictly descending base of
    /// neighbourhoods of the identity: the canonical meet of the first
    /// `n + 1` refiners of [`base_refiner`].
    ///
    /// `B(n+1) < B(n)` strictly and the support grows with `n`; each
    /// generator survives in every `B(n)` from its refiner slot on
    /// (`x0, x1, x2` at slots 0-2, `x_{3+k}` at slot `6+k`).
    pub fn base_element(&mut self, n: usize) -> Result<Rc<LatticeElement>, LatticeError> {
        while self.base.len() <= n {
            let k = self.base.len();
            let refiner = base_refiner(k);
            let next = if k == 0 {
                refiner
            } else {
                self.base[k - 1].meet(&refiner)?
            };
            debug_assert!(k == 0 || next.leq(&self.base[k - 1]));
            debug_assert!(k == 0 || !self.base[k - 1].leq(&next));
            self.base.push(Rc::new(next));
        }
        Ok(self.base[n].clone())
    }

    /// The ultrametric `delta(g, h) = 2^-n` for the least base level `n`
    /// separating `g h^-1` from the identity, evaluated to the given
    /// precision.
    pub fn delta(
        &mut self,
        g: &Word,
        h: &Word,
        precision: usize,
    ) -> Result<DeltaOutcome, LatticeError> {
        let w = g.concat(&h.inverse());
        if w.is_identity() {
            return Ok(DeltaOutcome::Zero);
        }
        for n in 0..=precision {
            let b = self.base_element(n)?;
            if !b.contains_word(&w) {
                return Ok(DeltaOutcome::Separated(n));
            }
        }
        Ok(DeltaOutcome::AtMostPrecision(precision))
    }
}

/// The `n`-th refiner of the base schedule.
///
/// Slots 0-2 constrain `x0, x1, x2` mod 2 (so abelian towers on those
/// generators are seen immediately); slots 3-5 map the generator pairs
/// among `x0, x1, x2` onto the symmetric group on three points, which
/// separates their pairwise commutators; every later slot adjoins a mod-2
/// constraint on the next fresh generator, so the meets keep descending
/// strictly while the support grows. Quotient orders grow by a factor of
/// at most 3 per level.
pub fn base_refiner(n: usize) -> LatticeElement {
    let s3 = FiniteGroup::symmetric3();
    // In the fixed element order of `symmetric3`, index 1 is the
    // transposition (01) and index 3 is the transposition (12).
    let element = match n {
        0 => LatticeElement::new(FiniteGroup::cyclic(2), vec![1]),
        1 => LatticeElement::new(FiniteGroup::cyclic(2), vec![0, 1]),
        2 => LatticeElement::new(FiniteGroup::cyclic(2), vec![0, 0, 1]),
        3 => LatticeElement::new(s3, vec![1, 3]),
        4 => LatticeElement::new(s3, vec![1, 0, 3]),
        5 => LatticeElement::new(s3, vec![0, 1, 3]),
        _ => {
            let mut images = vec![0usize; n - 2];
            images[n - 3] = 1;
            LatticeElement::new(FiniteGroup::cyclic(2), images)
        }
    };
    element.expect("schedule refiners are valid epimorphisms")
}

/// All group multiplication tables of the given order whose identity is
/// element 0, in lexicographic table order.
pub(crate) fn group_tables(n: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut table = vec![0u16; n * n];
    for i in 0..n {
        table[i] = i as u16; // identity row
        table[i * n] = i as u16; // identity column
    }
    fill_tables(n, 1, 1, &mut table, &mut out);
    out
}

fn fill_tables(n: usize, r: usize, c: usize, table: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if r == n {
        if is_associative(n, table) {
            out.push(table.clone());
        }
        return;
    }
    let (next_r, next_c) = if c + 1 == n { (r + 1, 1) } else { (r, c + 1) };
    'candidate: for v in 0..n as u16 {
        if v as usize == r {
            continue; // clash with the identity column entry
        }
        for prev in 1..c {
            if table[r * n + prev] == v {
                continue 'candidate; // row clash
            }
        }
        for prev in 0..r {
            if table[prev * n + c] == v {
                continue 'candidate; // column clash
            }
        }
        table[r * n + c] = v;
        fill_tables(n, next_r, next_c, table, out);
    }
    table[r * n + c] = 0;
}

fn is_associative(n: usize, table: &[u16]) -> bool {
    for a in 0..n {
        for b in 0..n {
            let ab = table[a * n + b] as usize;
            for c in 0..n {
                if table[ab * n + c] != table[a * n + table[b * n + c] as usize] {
                    return false;
                }
            }
        }
    }
    true
}
