//! Coset trees and the binary Cantor encoding of a quotient group.
//!
//! A filter chain `S_0 >= S_1 >= ...` turns the quotient into a tree:
//! level `n` has branching `k_n = |S_n : S_{n+1}|` and a fixed list of
//! coset representatives with the identity first, so group elements become
//! digit paths. The encoding maps digit paths to bit strings through a
//! complete prefix code per node, and the group difference operation is
//! computed on digit prefixes through the finite quotients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::filter::{FilterChain, FilterError};
use crate::lattice::LatticeElement;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CantorError {
    /// Consecutive chain quotients did not grow: the chain fails the
    /// build precondition.
    NotStrictlyDescending { level: usize },
    DigitOutOfRange { level: usize, digit: usize, bound: usize },
    /// The tree or a path is too shallow for the requested level.
    DepthInsufficient { requested: usize, available: usize },
    /// Level-0 digit permutations must fix digit 0 (the zero path).
    PermutationMovesZero,
    /// Not a permutation of the level-0 digits.
    InvalidPermutation,
    Filter(FilterError),
}

impl fmt::Display for CantorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CantorError::NotStrictlyDescending { level } => {
                write!(f, "chain is not descending into level {level}")
            }
            CantorError::DigitOutOfRange { level, digit, bound } => {
                write!(f, "digit {digit} at level {level} exceeds branching {bound}")
            }
            CantorError::DepthInsufficient { requested, available } => {
                write!(f, "level {requested} requested but only {available} available")
            }
            CantorError::PermutationMovesZero => {
                write!(f, "digit permutation must fix 0")
            }
            CantorError::InvalidPermutation => write!(f, "not a permutation of the level-0 digits"),
            CantorError::Filter(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CantorError {}

impl From<FilterError> for CantorError {
    fn from(e: FilterError) -> Self {
        CantorError::Filter(e)
    }
}

/// A digit path in the coset tree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreePath {
    digits: Vec<usize>,
}

impl TreePath {
    pub fn new(digits: Vec<usize>) -> Self {
        TreePath { digits }
    }

    pub fn zero(len: usize) -> Self {
        TreePath { digits: vec![0; len] }
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// Finite-depth coset tree of a filter chain.
pub struct CosetTree {
    depth: usize,
    branching: Vec<usize>,
    /// `reps[n][i]`: word for the `i`-th coset representative of
    /// `S_{n+1}` in `S_n`; `reps[n][0]` is the empty word.
    reps: Vec<Vec<Word>>,
    /// Chain elements at levels `0..=depth`.
    levels: Vec<LatticeElement>,
    /// `projections[n]` maps element indices of level `n+1` to level `n`.
    projections: Vec<Vec<usize>>,
}

impl CosetTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branching(&self) -> &[usize] {
        &self.branching
    }

    pub fn representatives(&self, level: usize) -> &[Word] {
        &self.reps[level]
    }

    pub fn level_quotient(&self, level: usize) -> &LatticeElement {
        &self.levels[level]
    }
}

/// Builds the depth-`depth` coset tree of the chain: branching factors,
/// representative words (identity first, then by increasing element index
/// in the finer quotient) and the level projections.
pub fn build_tree(chain: &mut FilterChain, depth: usize) -> Result<CosetTree, CantorError> {
    chain.develop(depth + 1)?;
    let levels: Vec<LatticeElement> = chain.developed()[..=depth].to_vec();
    let mut branching = Vec::with_capacity(depth);
    let mut reps = Vec::with_capacity(depth);
    let mut projections = Vec::with_capacity(depth);
    for n in 0..depth {
        let coarse = &levels[n];
        let fine = &levels[n + 1];
        let proj = factor_map(fine, coarse)
            .ok_or(CantorError::NotStrictlyDescending { level: n })?;
        if !fine.target().order().is_multiple_of(coarse.target().order()) {
            return Err(CantorError::NotStrictlyDescending { level: n });
        }
        let k = fine.target().order() / coarse.target().order();
        // Representatives: elements of the kernel of the projection, in
        // increasing index order; the canonical identity 0 comes first.
        let words = word_table(fine);
        let mut level_reps = Vec::with_capacity(k);
        for q in 0..fine.target().order() {
            if proj[q] == coarse.target().identity() {
                level_reps.push(words[q].clone());
            }
        }
        debug_assert_eq!(level_reps.len(), k);
        debug_assert!(level_reps[0].is_identity());
        branching.push(k);
        reps.push(level_reps);
        projections.push(proj);
    }
    Ok(CosetTree { depth, branching, reps, levels, projections })
}

/// The factor homomorphism between the targets of two comparable lattice
/// elements, as an index map; `None` when `fine` is not below `coarse`.
fn factor_map(fine: &LatticeElement, coarse: &LatticeElement) -> Option<Vec<usize>> {
    let span = fine.support().max(coarse.support());
    let srcs: Vec<usize> = (0..span).map(|i| fine.image_of(i)).collect();
    let dsts: Vec<usize> = (0..span).map(|i| coarse.image_of(i)).collect();
    match crate::finite::pair_closure(fine.target(), &srcs, coarse.target(), &dsts) {
        Some((map, covered)) if covered == fine.target().order() => Some(map),
        _ => None,
    }
}

/// Shortest preimage words for every element of the target, by breadth
/// first search along the generator images.
fn word_table(l: &LatticeElement) -> Vec<Word> {
    let g = l.target();
    let mut words: Vec<Option<Word>> = vec![None; g.order()];
    words[g.identity()] = Some(Word::identity());
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head];
        head += 1;
        for i in 0..l.support() {
            let b = g.mul(a, l.images()[i]);
            if words[b].is_none() {
                let w = words[a].as_ref().unwrap().concat(&Word::generator(i));
                words[b] = Some(w);
                queue.push(b);
            }
        }
    }
    words.into_iter().map(|w| w.expect("images generate the target")).collect()
}

impl CosetTree {
    fn check_path(&self, path: &TreePath, len: usize) -> Result<(), CantorError> {
        if path.len() < len {
            return Err(CantorError::DepthInsufficient {
                requested: len,
                available: path.len(),
            });
        }
        if len > self.depth {
            return Err(CantorError::DepthInsufficient { requested: len, available: self.depth });
        }
        for (level, &d) in path.digits().iter().take(len).enumerate() {
            if d >= self.branching[level] {
                return Err(CantorError::DigitOutOfRange {
                    level,
                    digit: d,
                    bound: self.branching[level],
                });
            }
        }
        Ok(())
    }

    /// The binary encoding of a digit path: at a node with branching `k`,
    /// child 0 appends `k-1` zeros and child `i > 0` appends `k-1-i` zeros
    /// followed by a one. The child extensions form a complete prefix code
    /// and the all-zero path maps to the all-zero string.
    pub fn encode(&self, path: &TreePath) -> Result<Vec<bool>, CantorError> {
        self.check_path(path, path.len())?;
        let mut bits = Vec::new();
        for (level, &d) in path.digits().iter().enumerate() {
            let k = self.branching[level];
            if d == 0 {
                bits.extend(core::iter::repeat_n(false, k - 1));
            } else {
                bits.extend(core::iter::repeat_n(false, k - 1 - d));
                bits.push(true);
            }
        }
        Ok(bits)
    }

    /// The element of the level-`n` quotient named by a digit prefix: the
    /// product of its coset representative words.
    pub fn path_element(&self, path: &TreePath, n: usize) -> Result<usize, CantorError> {
        self.check_path(path, n)?;
        let level = &self.levels[n];
        let mut acc = level.target().identity();
        for i in 0..n {
            let rep = level.evaluate(&self.reps[i][path.digits()[i]]);
            acc = level.target().mul(acc, rep);
        }
        Ok(acc)
    }

    /// Digits of a level-`n` quotient element: peel one representative per
    /// level, matching images down the projection tower.
    pub fn element_path(&self, element: usize, n: usize) -> Result<TreePath, CantorError> {
        if n > self.depth {
            return Err(CantorError::DepthInsufficient { requested: n, available: self.depth });
        }
        let level = &self.levels[n];
        let mut digits = Vec::with_capacity(n);
        let mut remainder = element;
        for i in 0..n {
            // Image of the remainder at level i+1 lies in the kernel of
            // the projection to level i; match it against the reps.
            let down = self.project(remainder, n, i + 1);
            let fine = &self.levels[i + 1];
            let digit = self.reps[i]
                .iter()
                .position(|w| fine.evaluate(w) == down)
                .expect("kernel representatives are exhaustive");
            digits.push(digit);
            let rep_at_n = level.evaluate(&self.reps[i][digit]);
            remainder = level.target().mul(level.target().inverse_of(rep_at_n), remainder);
        }
        debug_assert_eq!(remainder, level.target().identity());
        Ok(TreePath::new(digits))
    }

    fn project(&self, element: usize, from: usize, to: usize) -> usize {
        let mut x = element;
        for level in (to..from).rev() {
            x = self.projections[level][x];
        }
        x
    }

    /// The group difference `Z * W^-1` on digit prefixes of length `n`.
    pub fn rho(&self, z: &TreePath, w: &TreePath, n: usize) -> Result<TreePath, CantorError> {
        let zv = self.path_element(z, n)?;
        let wv = self.path_element(w, n)?;
        let g = self.levels[n].target();
        let y = g.mul(zv, g.inverse_of(wv));
        self.element_path(y, n)
    }

    /// The difference operation conjugated by a level-0 digit permutation
    /// fixing 0: `(g . rho)(u, v) = g(rho(g^-1 u, g^-1 v))`.
    pub fn rho_conjugated(
        &self,
        perm: &[usize],
        z: &TreePath,
        w: &TreePath,
        n: usize,
    ) -> Result<TreePath, CantorError> {
        if n > 0 {
            let k0 = self.branching[0];
            if perm.len() != k0 {
                return Err(CantorError::InvalidPermutation);
            }
            let mut seen = vec![false; k0];
            for &p in perm {
                if p >= k0 || seen[p] {
                    return Err(CantorError::InvalidPermutation);
                }
                seen[p] = true;
            }
            if perm[0] != 0 {
                return Err(CantorError::PermutationMovesZero);
            }
            let inverse: Vec<usize> = {
                let mut inv = vec![0; k0];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p] = i;
                }
                inv
            };
            let apply = |path: &TreePath, table: &[usize]| -> Result<TreePath, CantorError> {
                self.check_path(path, n)?;
                let mut digits = path.digits()[..n].to_vec();
                digits[0] = table[digits[0]];
                Ok(TreePath::new(digits))
            };
            let zi = apply(z, &inverse)?;
            let wi = apply(w, &inverse)?;
            let raw = self.rho(&zi, &wi, n)?;
            return apply(&raw, perm);
        }
        self.rho(z, w, 0)
    }

    /// All digit paths of length `n`, in odometer order.
    pub fn paths_at(&self, n: usize) -> Result<Vec<TreePath>, CantorError> {
        if n > self.depth {
            return Err(CantorError::DepthInsufficient { requested: n, available: self.depth });
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            out.push(TreePath::new(digits.clone()));
            let mut pos = n;
            while pos > 0 {
                digits[pos - 1] += 1;
                if digits[pos - 1] < self.branching[pos - 1] {
                    break;
                }
                digits[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
        Ok(out)
    }
}

/// Outcome of the difference-operation axiom check at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub level: usize,
    pub quotient_order: usize,
    /// Whether the associativity sweep covered every triple.
    pub exhaustive: bool,
    pub identity_checks: u64,
    pub associativity_checks: u64,
    pub violations: u64,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Associativity triples are swept exhaustively up to this quotient order
/// unless the caller forces a full sweep.
const EXHAUSTIVE_TRIPLE_BOUND: usize = 128;

/// How the associativity triples are swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Exhaustive for small quotients, otherwise the given number of
    /// deterministically drawn triples.
    Auto { samples: u64 },
    /// All triples, whatever the quotient order.
    Exhaustive,
}

/// Checks the group-difference axioms of `rho` at level `n`: `rho(a,a)` is
/// the zero path, `rho(a, 0) = a`, and the derived product
/// `a * b = rho(a, rho(0, b))` is associative — exhaustively over all
/// triples when the quotient is small, otherwise on `samples`
/// deterministically drawn triples.
pub fn verify_difference_axioms(
    tree: &CosetTree,
    n: usize,
    samples: u64,
) -> Result<AxiomReport, CantorError> {
    verify_difference_axioms_with(tree, n, Sweep::Auto { samples })
}

/// As [`verify_difference_axioms`], with the sweep mode made explicit.
pub fn verify_difference_axioms_with(
    tree: &CosetTree,
    n: usize,
    sweep: Sweep,
) -> Result<AxiomReport, CantorError> {
    let paths = tree.paths_at(n)?;
    let order = paths.len();
    let zero = TreePath::zero(n);
    let mut identity_checks = 0u64;
    let mut violations = 0u64;
    for a in &paths {
        if tree.rho(a, a, n)? != zero {
            violations += 1;
        }
        if &tree.rho(a, &zero, n)? != a {
            violations += 1;
        }
        identity_checks += 2;
    }
    // Derived product table, built through rho itself.
    let mut index_of = alloc::collections::BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        index_of.insert(p.digits().to_vec(), i);
    }
    let mut product = vec![0usize; order * order];
    for (i, a) in paths.iter().enumerate() {
        for (j, b) in paths.iter().enumerate() {
            let inv_b = tree.rho(&zero, b, n)?;
            let ab = tree.rho(a, &inv_b, n)?;
            product[i * order + j] = index_of[ab.digits()];
        }
    }
    let mut associativity_checks = 0u64;
    let (exhaustive, samples) = match sweep {
        Sweep::Exhaustive => (true, 0),
        Sweep::Auto { samples } => (order <= EXHAUSTIVE_TRIPLE_BOUND, samples),
    };
    if exhaustive {
        for a in 0..order {
            for b in 0..order {
                let ab = product[a * order + b];
                for c in 0..order {
                    let bc = product[b * order + c];
                    if product[ab * order + c] != product[a * order + bc] {
                        violations += 1;
                    }
                    associativity_checks += 1;
                }
            }
        }
    } else {
        // Deterministic linear-congruential sampling.
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 16) as usize % order
        };
        for _ in 0..samples {
            let (a, b, c) = (next(), next(), next());
            let ab = product[a * order + b];
            let bc = product[b * order + c];
            if product[ab * order + c] != product[a * order + bc] {
                violations += 1;
            }
            associativity_checks += 1;
        }
    }
    Ok(AxiomReport {
        level: n,
        quotient_order: order,
        exhaustive,
        identity_checks,
        associativity_checks,
        violations,
    })
}
