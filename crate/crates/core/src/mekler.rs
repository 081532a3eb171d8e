//! Nil-2 exponent-p graph groups and their reconstruction.
//!
//! For a graph `A` the group `G(A)` is the free nilpotent-of-class-2
//! exponent-`p` group on generators `x0, x1, ...` modulo the relations
//! `[x_r, x_s] = 1` for every edge. Every element has a unique normal form
//! `c * v` where `v` is an ascending product of vertex generators and `c`
//! is a central product of commutator generators `x_{r,s} = [x_r, x_s]`
//! over non-edges `r < s`; elements are stored as the two exponent vectors
//! over `F_p`.
//!
//! Products are computed by collection. The sign convention is pinned by
//! the rewriting system in [`MeklerContext::normal_form_of_letters`]
//! (rules: `x_s x_r -> x_r x_s [x_s, x_r]` for `s > r`, centrality of
//! `x_{r,s}`, `x_{r,s} -> 1` on edges, exponent-`p` reduction), which also
//! serves as the independent oracle for the commutator formula.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::filter::{Extender, FilterChain};
use crate::lattice::LatticeElement;

/// Largest order of a tabulated truncation quotient `G(A)/R_n`.
pub const RN_LEVEL_BOUND: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeklerError {
    /// The exponent must be an odd prime.
    BadPrime(u32),
    /// Operands come from different groups (prime or graph mismatch).
    MixedContext,
    /// The operation needs a noncentral element (nonzero vertex part).
    CentralInput,
    /// The graph fails niceness; the witness names the first violation.
    NotNice(NicenessViolation),
    /// `x_{r,s}` is not a central generator when `rs` is an edge.
    EdgeCentralPair(usize, usize),
    /// A vertex or pair index is outside the graph.
    IndexOutOfRange(usize),
    /// Central generator pairs must satisfy `r < s`.
    UnorderedPair(usize, usize),
    /// The truncation quotient would exceed [`RN_LEVEL_BOUND`].
    LevelTooLarge { level: usize, order_exponent: u32 },
    InvalidGraph(&'static str),
    /// The interpretation selected classes other than the vertex classes.
    InterpretationMismatch,
}

impl fmt::Display for MeklerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeklerError::BadPrime(p) => write!(f, "exponent {p} is not an odd prime"),
            MeklerError::MixedContext => write!(f, "operands come from different groups"),
            MeklerError::CentralInput => write!(f, "operation requires a noncentral element"),
            MeklerError::NotNice(w) => write!(f, "graph is not nice: {w}"),
            MeklerError::EdgeCentralPair(r, s) => {
                write!(f, "x_{{{r},{s}}} vanishes: {{{r},{s}}} is an edge")
            }
            MeklerError::IndexOutOfRange(i) => write!(f, "vertex index {i} out of range"),
            MeklerError::UnorderedPair(r, s) => {
                write!(f, "central generator pair ({r},{s}) must have r < s")
            }
            MeklerError::LevelTooLarge { level, order_exponent } => {
                write!(
                    f,
                    "level-{level} quotient has order p^{order_exponent}, beyond the tabulated bound"
                )
            }
            MeklerError::InvalidGraph(msg) => write!(f, "invalid graph: {msg}"),
            MeklerError::InterpretationMismatch => {
                write!(f, "interpretation did not recover exactly the vertex classes")
            }
        }
    }
}

impl core::error::Error for MeklerError {}

/// Witness for a failed niceness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NicenessViolation {
    Triangle(usize, usize, usize),
    /// A four-cycle `a - b - c - d - a`.
    Square(usize, usize, usize, usize),
    /// No vertex is joined to `x` but not to `y`.
    Unseparated { x: usize, y: usize },
}

impl fmt::Display for NicenessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NicenessViolation::Triangle(a, b, c) => write!(f, "triangle ({a},{b},{c})"),
            NicenessViolation::Square(a, b, c, d) => write!(f, "square ({a},{b},{c},{d})"),
            NicenessViolation::Unseparated { x, y } => {
                write!(f, "no vertex joined to {x} and not to {y}")
            }
        }
    }
}

/// A finite symmetric irreflexive graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, MeklerError> {
        let mut set = BTreeSet::new();
        for (r, s) in edges {
            if r == s {
                return Err(MeklerError::InvalidGraph("loops are not allowed"));
            }
            let (r, s) = if r < s { (r, s) } else { (s, r) };
            if s >= n {
                return Err(MeklerError::InvalidGraph("edge endpoint out of range"));
            }
            set.insert((r, s));
        }
        Ok(Graph { n, edges: set })
    }

    /// Cycle on `n >= 3` vertices with edges `{i, i+1 mod n}`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// The Petersen graph: outer cycle 0-4, spokes, inner pentagram 5-9.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    /// Edges in increasing lexicographic order, each with `r < s`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Non-edge pairs `r < s` in increasing lexicographic order.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.n {
            for s in (r + 1)..self.n {
                if !self.edges.contains(&(r, s)) {
                    out.push((r, s));
                }
            }
        }
        out
    }

    /// Checks niceness: no triangles, no squares, and for every ordered
    /// pair of distinct vertices a neighbour of the first that misses the
    /// second. Returns the first violation in a fixed scan order.
    pub fn niceness(&self) -> Result<(), NicenessViolation> {
        for &(r, s) in &self.edges {
            for t in 0..self.n {
                if t != r && t != s && self.adjacent(r, t) && self.adjacent(s, t) {
                    return Err(NicenessViolation::Triangle(r, s, t));
                }
            }
        }
        // A square exists iff two distinct vertices share two neighbours.
        for a in 0..self.n {
            for c in (a + 1)..self.n {
                let mut common =
                    (0..self.n).filter(|&z| self.adjacent(a, z) && self.adjacent(c, z));
                if let (Some(b), Some(d)) = (common.next(), common.next()) {
                    return Err(NicenessViolation::Square(a, b, c, d));
                }
            }
        }
        for x in 0..self.n {
            for y in 0..self.n {
                if x == y {
                    continue;
                }
                if !(0..self.n).any(|z| self.adjacent(z, x) && !self.adjacent(z, y)) {
                    return Err(NicenessViolation::Unseparated { x, y });
                }
            }
        }
        Ok(())
    }

    pub fn is_nice(&self) -> bool {
        self.niceness().is_ok()
    }

    fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x100000001b3);
        };
        eat(self.n as u64);
        for &(r, s) in &self.edges {
            eat(r as u64 + 1);
            eat(s as u64 + 1);
        }
        h
    }
}

/// Normal-form element of `G(A)`: vertex exponents and central exponents
/// over the non-edge pairs, all reduced mod `p`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MeklerElement {
    p: u32,
    context_id: u64,
    alpha: Vec<u32>,
    /// Indexed parallel to [`MeklerContext::non_edges`].
    beta: Vec<u32>,
}

impl fmt::Debug for MeklerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeklerElement(alpha={:?}, beta={:?})", self.alpha, self.beta)
    }
}

impl MeklerElement {
    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u32] {
        &self.beta
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0) && self.beta.iter().all(|&b| b == 0)
    }

    /// Central means the vertex part vanishes.
    pub fn is_central(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0)
    }

    /// Vertex support: indices with nonzero alpha.
    pub fn support(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Letters of the rewriting alphabet: vertex generators and central
/// commutator generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    Vertex(usize),
    Central(usize, usize),
}

/// Which of the four centralizer-class cases a noncentral element falls
/// in, with its witness vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// Vertex support is a single vertex.
    Case1(usize),
    /// Support is an edge pair.
    Case2(usize, usize),
    /// Some vertex `l` is joined to every support vertex other than `l`.
    Case3(usize),
    Case4,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Case1(r) => write!(f, "case1 r={r}"),
            CaseTag::Case2(r, s) => write!(f, "case2 r={r} s={s}"),
            CaseTag::Case3(l) => write!(f, "case3 l={l}"),
            CaseTag::Case4 => write!(f, "case4"),
        }
    }
}

/// The group `G(A)` for a fixed graph and odd prime.
#[derive(Debug, Clone)]
pub struct MeklerContext {
    graph: Graph,
    p: u32,
    non_edges: Vec<(usize, usize)>,
    pair_index: BTreeMap<(usize, usize), usize>,
    id: u64,
}

impl MeklerContext {
    pub fn new(graph: Graph, p: u32) -> Result<Self, MeklerError> {
        if p < 3 || !is_odd_prime(p) {
            return Err(MeklerError::BadPrime(p));
        }
        let non_edges = graph.non_edges();
        let pair_index = non_edges.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        let id = graph.fingerprint() ^ (p as u64).wrapping_mul(0x9e3779b97f4a7c15);
        Ok(MeklerContext { graph, p, non_edges, pair_index, id })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn non_edges(&self) -> &[(usize, usize)] {
        &self.non_edges
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n
    }

    fn check(&self, u: &MeklerElement) -> Result<(), MeklerError> {
        if u.p != self.p || u.context_id != self.id {
            return Err(MeklerError::MixedContext);
        }
        debug_assert_eq!(u.alpha.len(), self.graph.n);
        debug_assert_eq!(u.beta.len(), self.non_edges.len());
        Ok(())
    }

    /// The identity element.
    pub fn zero(&self) -> MeklerElement {
        MeklerElement {
            p: self.p,
            context_id: self.id,
            alpha: vec![0; self.graph.n],
            beta: vec![0; self.non_edges.len()],
        }
    }

    /// The vertex generator `x_i`.
    pub fn generator(&self, i: usize) -> Result<MeklerElement, MeklerError> {
        if i >= self.graph.n {
            return Err(MeklerError::IndexOutOfRange(i));
        }
        let mut e = self.zero();
        e.alpha[i] = 1;
        Ok(e)
    }

    /// The central generator `x_{r,s}` for a non-edge `r < s`.
    pub fn central_generator(&self, r: usize, s: usize) -> Result<MeklerElement, MeklerError> {
        if r >= s {
            return Err(MeklerError::UnorderedPair(r, s));
        }
        if s >= self.graph.n {
            return Err(MeklerError::IndexOutOfRange(s));
        }
        let Some(&idx) = self.pair_index.get(&(r, s)) else {
            return Err(MeklerError::EdgeCentralPair(r, s));
        };
        let mut e = self.zero();
        e.beta[idx] = 1;
        Ok(e)
    }

    /// Builds an element from raw exponent data, reducing mod `p`.
    pub fn element(
        &self,
        alpha: &[i64],
        beta: &[(usize, usize, i64)],
    ) -> Result<MeklerElement, MeklerError> {
        if alpha.len() > self.graph.n {
            return Err(MeklerError::IndexOutOfRange(alpha.len() - 1));
        }
        let mut e = self.zero();
        for (i, &a) in alpha.iter().enumerate() {
            e.alpha[i] = self.reduce(a);
        }
        for &(r, s, b) in beta {
            if r >= s {
                return Err(MeklerError::UnorderedPair(r, s));
            }
            if s >= self.graph.n {
                return Err(MeklerError::IndexOutOfRange(s));
            }
            let Some(&idx) = self.pair_index.get(&(r, s)) else {
                return Err(MeklerError::EdgeCentralPair(r, s));
            };
            e.beta[idx] = (e.beta[idx] + self.reduce(b)) % self.p;
        }
        Ok(e)
    }

    fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Normal form of a product, by collection: vertex exponents add, and
    /// moving the right factor's generators home past the left factor's
    /// higher-index generators deposits `x_{s,r}^(-a_r b_s)` in the centre
    /// for every non-edge `s < r`.
    pub fn multiply(
        &self,
        u: &MeklerElement,
        w: &MeklerElement,
    ) -> Result<MeklerElement, MeklerError> {
        self.check(u)?;
        self.check(w)?;
        let p = self.p as u64;
        let mut out = self.zero();
        for i in 0..self.graph.n {
            out.alpha[i] = (u.alpha[i] + w.alpha[i]) % self.p;
        }
        for (idx, &(s, r)) in self.non_edges.iter().enumerate() {
            // s < r by construction of the non-edge list.
            let correction = (u.alpha[r] as u64) * (w.alpha[s] as u64) % p;
            let sum = (u.beta[idx] as u64 + w.beta[idx] as u64 + p - correction) % p;
            out.beta[idx] = sum as u32;
        }
        Ok(out)
    }

    pub fn inverse(&self, u: &MeklerElement) -> Result<MeklerElement, MeklerError> {
        self.check(u)?;
        let p = self.p as u64;
        let mut out = self.zero();
        for i in 0..self.graph.n {
            out.alpha[i] = (self.p - u.alpha[i]) % self.p;
        }
        for (idx, &(s, r)) in self.non_edges.iter().enumerate() {
            let cross = (u.alpha[r] as u64) * (u.alpha[s] as u64) % p;
            out.beta[idx] = ((2 * p - u.beta[idx] as u64 - cross) % p) as u32;
        }
        Ok(out)
    }

    /// Integer power by repeated multiplication.
    pub fn power(&self, u: &MeklerElement, k: i64) -> Result<MeklerElement, MeklerError> {
        self.check(u)?;
        let base = if k < 0 { self.inverse(u)? } else { u.clone() };
        let mut acc = self.zero();
        for _ in 0..k.unsigned_abs() {
            acc = self.multiply(&acc, &base)?;
        }
        Ok(acc)
    }

    /// The closed commutator formula: `[u, w]` is central with exponent
    /// `alpha_r beta_s - alpha_s beta_r` at every non-edge `r < s`; the
    /// central parts of the inputs are irrelevant.
    pub fn commutator_formula(
        &self,
        u: &MeklerElement,
        w: &MeklerElement,
    ) -> Result<MeklerElement, MeklerError> {
        self.check(u)?;
        self.check(w)?;
        let p = self.p as u64;
        let mut out = self.zero();
        for (idx, &(r, s)) in self.non_edges.iter().enumerate() {
            let pos = (u.alpha[r] as u64) * (w.alpha[s] as u64) % p;
            let neg = (u.alpha[s] as u64) * (w.alpha[r] as u64) % p;
            out.beta[idx] = ((pos + p - neg) % p) as u32;
        }
        Ok(out)
    }

    /// Independent commutator: spells out the literal word `u^-1 w^-1 u w`
    /// and rewrites it to normal form. Must agree with
    /// [`Self::commutator_formula`] on all inputs.
    pub fn commutator_oracle(
        &self,
        u: &MeklerElement,
        w: &MeklerElement,
    ) -> Result<MeklerElement, MeklerError> {
        self.check(u)?;
        self.check(w)?;
        let mut letters = self.letters_of_inverse(u);
        letters.extend(self.letters_of_inverse(w));
        letters.extend(self.letters_of(u));
        letters.extend(self.letters_of(w));
        Ok(self.normal_form_of_letters(&letters))
    }

    /// Spells out the normal form as single letters (central part first).
    pub fn letters_of(&self, u: &MeklerElement) -> Vec<Letter> {
        let mut out = Vec::new();
        for (idx, &(r, s)) in self.non_edges.iter().enumerate() {
            for _ in 0..u.beta[idx] {
                out.push(Letter::Central(r, s));
            }
        }
        for i in 0..self.graph.n {
            for _ in 0..u.alpha[i] {
                out.push(Letter::Vertex(i));
            }
        }
        out
    }

    /// Letters of the inverse word: the reversed letters, each inverted
    /// via the exponent-p law `g^-1 = g^(p-1)`.
    fn letters_of_inverse(&self, u: &MeklerElement) -> Vec<Letter> {
        let mut out = Vec::new();
        for &letter in self.letters_of(u).iter().rev() {
            for _ in 0..(self.p - 1) {
                out.push(letter);
            }
        }
        out
    }

    /// Rewrites an arbitrary letter word to the unique normal form.
    ///
    /// Central letters move freely to the accumulator (vanishing on
    /// edges); adjacent vertex letters `x_s x_r` with `s > r` swap and
    /// emit `[x_s, x_r] = x_{r,s}^(p-1)`; exponents reduce mod `p`.
    pub fn normal_form_of_letters(&self, letters: &[Letter]) -> MeklerElement {
        let mut central = vec![0u32; self.non_edges.len()];
        let mut main: Vec<usize> = Vec::new();
        for &letter in letters {
            match letter {
                Letter::Central(r, s) => {
                    if let Some(&idx) = self.pair_index.get(&(r, s)) {
                        central[idx] = (central[idx] + 1) % self.p;
                    }
                    // Edge pairs vanish.
                }
                Letter::Vertex(i) => main.push(i),
            }
        }
        // Bubble the vertex letters into ascending order; each swap of
        // x_s past x_r (s > r) emits one inverse central generator.
        loop {
            let mut swapped = false;
            for i in 0..main.len().saturating_sub(1) {
                let (s, r) = (main[i], main[i + 1]);
                if s > r {
                    main.swap(i, i + 1);
                    if let Some(&idx) = self.pair_index.get(&(r, s)) {
                        central[idx] = (central[idx] + self.p - 1) % self.p;
                    }
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let mut out = self.zero();
        for i in main {
            out.alpha[i] = (out.alpha[i] + 1) % self.p;
        }
        out.beta = central;
        out
    }

    /// The linear system cutting out the centralizer of `v`: a matrix `M`
    /// over `F_p` with one row per non-edge `r < s`, such that `w`
    /// commutes with `v` iff `M * w.alpha = 0`.
    pub fn centralizer_matrix(&self, v: &MeklerElement) -> Result<FpMatrix, MeklerError> {
        self.check(v)?;
        Ok(FpMatrix {
            p: self.p,
            cols: self.graph.n,
            rows: self.centralizer_rows(&v.alpha),
        })
    }

    fn centralizer_rows(&self, alpha: &[u32]) -> Vec<Vec<u32>> {
        let n = self.graph.n;
        self.non_edges
            .iter()
            .map(|&(r, s)| {
                let mut row = vec![0u32; n];
                row[s] = alpha[r] % self.p;
                row[r] = (row[r] + self.p - alpha[s] % self.p) % self.p;
                row
            })
            .collect()
    }

    /// Canonical key of the centralizer of a vertex-exponent vector: the
    /// reduced row echelon form of its matrix. Equal keys mean equal
    /// centralizers.
    fn centralizer_key(&self, alpha: &[u32]) -> Vec<Vec<u32>> {
        let mut m = FpMatrix { p: self.p, cols: self.graph.n, rows: self.centralizer_rows(alpha) };
        m.reduce();
        m.rows
    }

    /// Whether `v` and `w` lie in the same centralizer-equivalence class,
    /// i.e. their centralizer kernels are equal subspaces.
    pub fn same_class(&self, v: &MeklerElement, w: &MeklerElement) -> Result<bool, MeklerError> {
        self.check(v)?;
        self.check(w)?;
        if v.is_central() || w.is_central() {
            return Err(MeklerError::CentralInput);
        }
        let kv = self.centralizer_matrix(v)?.kernel_basis();
        let kw = self.centralizer_matrix(w)?.kernel_basis();
        Ok(subspace_equal(self.p, self.graph.n, &kv, &kw))
    }

    /// First matching case of the class analysis, with witnesses.
    pub fn case_classify(&self, v: &MeklerElement) -> Result<CaseTag, MeklerError> {
        self.check(v)?;
        let support = v.support();
        if support.is_empty() {
            return Err(MeklerError::CentralInput);
        }
        if support.len() == 1 {
            return Ok(CaseTag::Case1(support[0]));
        }
        if support.len() == 2 && self.graph.adjacent(support[0], support[1]) {
            return Ok(CaseTag::Case2(support[0], support[1]));
        }
        // A vertex joined to every support vertex other than itself.
        for l in 0..self.graph.n {
            if support.iter().all(|&i| i == l || self.graph.adjacent(i, l)) {
                return Ok(CaseTag::Case3(l));
            }
        }
        Ok(CaseTag::Case4)
    }

    /// Size of the centralizer-equivalence class of `v`, by case.
    pub fn class_size(&self, v: &MeklerElement) -> Result<u64, MeklerError> {
        let p = self.p as u64;
        Ok(match self.case_classify(v)? {
            CaseTag::Case1(_) => p - 1,
            CaseTag::Case2(_, _) => (p - 1) * (p - 1),
            CaseTag::Case3(_) => p * (p - 1),
            CaseTag::Case4 => p - 1,
        })
    }

    /// Truncation to the first `n` generators: the image in `G(A)/R_n`.
    pub fn project_to_level(
        &self,
        u: &MeklerElement,
        n: usize,
    ) -> Result<MeklerElement, MeklerError> {
        self.check(u)?;
        let mut out = u.clone();
        for i in n..self.graph.n {
            out.alpha[i] = 0;
        }
        for (idx, &(r, s)) in self.non_edges.iter().enumerate() {
            if r >= n || s >= n {
                out.beta[idx] = 0;
            }
        }
        Ok(out)
    }
}

fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A dense matrix over `F_p` with exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl FpMatrix {
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `M * x` over `F_p`.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        self.rows
            .iter()
            .map(|row| {
                let mut acc = 0u64;
                for (a, b) in row.iter().zip(x) {
                    acc = (acc + (*a as u64) * (*b as u64)) % p;
                }
                acc as u32
            })
            .collect()
    }

    pub fn in_kernel(&self, x: &[u32]) -> bool {
        self.apply(x).iter().all(|&v| v == 0)
    }

    /// In-place reduced row echelon form; zero rows are dropped.
    pub fn reduce(&mut self) {
        let p = self.p as u64;
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows.len() {
                break;
            }
            let Some(found) = (pivot_row..self.rows.len()).find(|&r| self.rows[r][col] != 0)
            else {
                continue;
            };
            self.rows.swap(pivot_row, found);
            let inv = inv_mod(self.rows[pivot_row][col], self.p) as u64;
            for x in self.rows[pivot_row].iter_mut() {
                *x = ((*x as u64) * inv % p) as u32;
            }
            for r in 0..self.rows.len() {
                if r != pivot_row && self.rows[r][col] != 0 {
                    let factor = self.rows[r][col] as u64;
                    for c in 0..self.cols {
                        let sub = factor * self.rows[pivot_row][c] as u64 % p;
                        self.rows[r][c] = ((self.rows[r][c] as u64 + p - sub) % p) as u32;
                    }
                }
            }
            pivot_row += 1;
        }
        self.rows.retain(|row| row.iter().any(|&x| x != 0));
    }

    /// A basis of the kernel, from the reduced form.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        m.reduce();
        let p = m.p as u64;
        let pivot_of_row: Vec<usize> =
            m.rows.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
        let pivots: BTreeSet<usize> = pivot_of_row.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; m.cols];
            v[free] = 1;
            for (row, &pc) in m.rows.iter().zip(&pivot_of_row) {
                // The pivot entry is 1, so the pivot coordinate is -row[free].
                v[pc] = ((p - row[free] as u64) % p) as u32;
            }
            basis.push(v);
        }
        basis
    }

    pub fn kernel_dimension(&self) -> usize {
        self.kernel_basis().len()
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn subspace_equal(p: u32, cols: usize, basis_a: &[Vec<u32>], basis_b: &[Vec<u32>]) -> bool {
    let span = |basis: &[Vec<u32>]| {
        let mut m = FpMatrix { p, cols, rows: basis.to_vec() };
        m.reduce();
        m.rows
    };
    span(basis_a) == span(basis_b)
}

/// Result of the graph interpretation: the recovered graph under the
/// canonical map sending the class of `x_i` to vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma2Result {
    pub graph: Graph,
    /// Number of noncentral centralizer classes encountered.
    pub class_count: usize,
}

/// Runs the second-stage interpretation on `G(A)`: sweeps all noncentral
/// vertex-exponent cosets, groups them by centralizer, keeps the classes
/// of size `p - 1` that admit a commuting partner in another class, and
/// reads the commuting relation off as a graph.
///
/// For a nice graph the qualifying classes are exactly the generator
/// classes and the output equals the input graph under the canonical map.
pub fn gamma2(graph: &Graph, p: u32) -> Result<Gamma2Result, MeklerError> {
    let ctx = MeklerContext::new(graph.clone(), p)?;
    graph.niceness().map_err(MeklerError::NotNice)?;
    let n = graph.n;

    struct ClassInfo {
        count: u64,
        representative: Vec<u32>,
        /// Vertex `i` when the class contains a scaled basis vector `e_i`.
        vertex: Option<usize>,
    }

    let mut classes: BTreeMap<Vec<Vec<u32>>, ClassInfo> = BTreeMap::new();
    let mut alpha = vec![0u32; n];
    loop {
        // Advance the odometer; the all-zero vector is central and skipped.
        let mut pos = 0;
        while pos < n {
            alpha[pos] += 1;
            if alpha[pos] < p {
                break;
            }
            alpha[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
        let key = ctx.centralizer_key(&alpha);
        let vertex = single_support(&alpha);
        let entry = classes.entry(key).or_insert_with(|| ClassInfo {
            count: 0,
            representative: alpha.clone(),
            vertex: None,
        });
        entry.count += 1;
        if vertex.is_some() {
            entry.vertex = vertex;
        }
    }
    let class_count = classes.len();

    // Qualifying classes: size p-1 with a commuting partner outside the
    // class (and outside the centre).
    let mut by_vertex: Vec<Option<Vec<u32>>> = vec![None; n];
    let mut qualifying = 0usize;
    for (key, info) in &classes {
        if info.count != (p as u64) - 1 {
            continue;
        }
        let matrix = FpMatrix { p, cols: n, rows: key.clone() };
        if !has_external_commuting_partner(&ctx, &matrix, key) {
            continue;
        }
        qualifying += 1;
        // The theorem: qualifying classes are exactly the vertex classes.
        match info.vertex {
            Some(i) if by_vertex[i].is_none() => {
                by_vertex[i] = Some(info.representative.clone())
            }
            _ => return Err(MeklerError::InterpretationMismatch),
        }
    }
    if qualifying != n || by_vertex.iter().any(Option::is_none) {
        return Err(MeklerError::InterpretationMismatch);
    }

    // Edges: classes are joined iff their representatives commute.
    let mut edges = Vec::new();
    for i in 0..n {
        let rep_i = by_vertex[i].as_ref().unwrap();
        let matrix = FpMatrix { p, cols: n, rows: ctx.centralizer_rows(rep_i) };
        for (j, rep_j) in by_vertex.iter().enumerate().skip(i + 1) {
            if matrix.in_kernel(rep_j.as_ref().unwrap()) {
                edges.push((i, j));
            }
        }
    }
    Ok(Gamma2Result { graph: Graph::new(n, edges)?, class_count })
}

fn single_support(alpha: &[u32]) -> Option<usize> {
    let mut support = alpha.iter().enumerate().filter(|(_, &a)| a != 0);
    match (support.next(), support.next()) {
        (Some((i, _)), None) => Some(i),
        _ => None,
    }
}

/// Does any noncentral vector commute with the class cut out by `key`
/// while lying in a different class? Scans the kernel of the centralizer
/// matrix.
fn has_external_commuting_partner(
    ctx: &MeklerContext,
    matrix: &FpMatrix,
    key: &[Vec<u32>],
) -> bool {
    let basis = matrix.kernel_basis();
    let p = ctx.p;
    let n = ctx.graph.n;
    let dim = basis.len();
    let mut coeffs = vec![0u32; dim];
    loop {
        let mut pos = 0;
        while pos < dim {
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
        if pos == dim {
            return false;
        }
        let mut w = vec![0u32; n];
        for (c, b) in coeffs.iter().zip(&basis) {
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi = (*wi + c * bi) % p;
            }
        }
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        if ctx.centralizer_key(&w) != key {
            return true;
        }
    }
}

/// The lattice element presented by the level-`n` truncation quotient
/// `G(A)/R_n`, where `R_n` is the normal subgroup generated by the `x_i`
/// with `i >= n`: the tabulated group of normal forms with vertex support
/// below `n` and central support on pairs below `n`, together with the
/// generator images.
pub fn rn_level_element(graph: &Graph, p: u32, n: usize) -> Result<LatticeElement, MeklerError> {
    let ctx = MeklerContext::new(graph.clone(), p)?;
    let pairs: Vec<usize> = ctx
        .non_edges
        .iter()
        .enumerate()
        .filter(|(_, &(r, s))| r < n && s < n)
        .map(|(idx, _)| idx)
        .collect();
    let exponent = (n + pairs.len()) as u32;
    let order = (p as u64)
        .checked_pow(exponent)
        .filter(|&o| o <= RN_LEVEL_BOUND as u64)
        .ok_or(MeklerError::LevelTooLarge { level: n, order_exponent: exponent })?
        as usize;

    // Mixed-radix layout: alpha digits first, then the surviving betas.
    let encode = |e: &MeklerElement| -> usize {
        let mut idx = 0usize;
        for &j in pairs.iter().rev() {
            idx = idx * p as usize + e.beta[j] as usize;
        }
        for i in (0..n).rev() {
            idx = idx * p as usize + e.alpha[i] as usize;
        }
        idx
    };
    let decode = |mut idx: usize| -> MeklerElement {
        let mut e = ctx.zero();
        for i in 0..n {
            e.alpha[i] = (idx % p as usize) as u32;
            idx /= p as usize;
        }
        for &j in &pairs {
            e.beta[j] = (idx % p as usize) as u32;
            idx /= p as usize;
        }
        e
    };

    let mut table = vec![0u16; order * order];
    for a in 0..order {
        let ea = decode(a);
        for b in 0..order {
            let eb = decode(b);
            let prod = ctx.multiply(&ea, &eb).expect("same context");
            table[a * order + b] = encode(&prod) as u16;
        }
    }
    let target = crate::finite::FiniteGroup::from_table(order, 0, table)
        .expect("truncated normal forms form a group");
    let images: Vec<usize> =
        (0..n).map(|i| encode(&ctx.generator(i).expect("index below n"))).collect();
    LatticeElement::new(target, images).map_err(|_| MeklerError::InvalidGraph("level group"))
}

/// The descending chain of truncation kernels, as a lazily extended filter.
pub fn rn_chain(graph: &Graph, p: u32) -> Result<FilterChain, MeklerError> {
    MeklerContext::new(graph.clone(), p)?; // validate once up front
    Ok(FilterChain::with_extender(Extender::RnChain { graph: graph.clone(), p }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5(p: u32) -> MeklerContext {
        MeklerContext::new(Graph::cycle(5), p).unwrap()
    }

    #[test]
    fn niceness_verdicts() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.niceness(), Err(NicenessViolation::Triangle(0, 1, 2)));
        let c4 = Graph::cycle(4);
        assert!(matches!(c4.niceness(), Err(NicenessViolation::Square(..))));
        assert!(Graph::cycle(5).is_nice());
        assert!(Graph::petersen().is_nice());
    }

    #[test]
    fn petersen_shape() {
        let g = Graph::petersen();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.non_edges().len(), 30);
    }

    #[test]
    fn bad_primes_rejected() {
        assert!(matches!(MeklerContext::new(Graph::cycle(5), 2), Err(MeklerError::BadPrime(2))));
        assert!(matches!(MeklerContext::new(Graph::cycle(5), 9), Err(MeklerError::BadPrime(9))));
        assert!(MeklerContext::new(Graph::cycle(5), 7).is_ok());
    }

    #[test]
    fn multiply_identity_and_edge_pair() {
        let ctx = c5(3);
        let e = ctx.zero();
        let x1 = ctx.generator(1).unwrap();
        assert_eq!(ctx.multiply(&e, &x1).unwrap(), x1);
        // (0,1) is an edge of C5, so x1 * x0 has no central correction.
        let x0 = ctx.generator(0).unwrap();
        let prod = ctx.multiply(&x1, &x0).unwrap();
        assert_eq!(prod.alpha(), &[1, 1, 0, 0, 0]);
        assert!(prod.beta().iter().all(|&b| b == 0));
    }

    #[test]
    fn multiply_non_edge_pair_picks_up_commutator() {
        let ctx = c5(3);
        let x0 = ctx.generator(0).unwrap();
        let x2 = ctx.generator(2).unwrap();
        let prod = ctx.multiply(&x2, &x0).unwrap();
        assert_eq!(prod.alpha(), &[1, 0, 1, 0, 0]);
        // The rewriting oracle fixes the sign of the (0,2) entry.
        let oracle = ctx.normal_form_of_letters(&[Letter::Vertex(2), Letter::Vertex(0)]);
        assert_eq!(prod, oracle);
        let idx = ctx.non_edges().iter().position(|&pr| pr == (0, 2)).unwrap();
        assert_ne!(prod.beta()[idx], 0);
        for (j, &b) in prod.beta().iter().enumerate() {
            if j != idx {
                assert_eq!(b, 0);
            }
        }
    }

    #[test]
    fn inverse_laws() {
        let ctx = c5(3);
        assert_eq!(ctx.inverse(&ctx.zero()).unwrap(), ctx.zero());
        let x0 = ctx.generator(0).unwrap();
        let inv = ctx.inverse(&x0).unwrap();
        assert_eq!(inv.alpha(), &[2, 0, 0, 0, 0]);
        assert!(ctx.multiply(&x0, &inv).unwrap().is_identity());
        assert!(ctx.multiply(&inv, &x0).unwrap().is_identity());
        // Antihomomorphism identity on a non-edge product.
        let x2 = ctx.generator(2).unwrap();
        let prod = ctx.multiply(&x2, &x0).unwrap();
        let lhs = ctx.inverse(&prod).unwrap();
        let rhs =
            ctx.multiply(&ctx.inverse(&x0).unwrap(), &ctx.inverse(&x2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_formula_on_generators() {
        let ctx = c5(5);
        let x0 = ctx.generator(0).unwrap();
        let x2 = ctx.generator(2).unwrap();
        // [x_r, x_s] = x_{r,s} on a non-edge.
        let c = ctx.commutator_formula(&x0, &x2).unwrap();
        assert_eq!(c, ctx.central_generator(0, 2).unwrap());
        // [x_r^a, x_s^b] = x_{r,s}^(ab).
        let a = ctx.power(&x0, 3).unwrap();
        let b = ctx.power(&x2, 4).unwrap();
        let c = ctx.commutator_formula(&a, &b).unwrap();
        let expected = ctx.power(&ctx.central_generator(0, 2).unwrap(), 12).unwrap();
        assert_eq!(c, expected);
        // Edge commutators vanish; so does [u, u].
        let x1 = ctx.generator(1).unwrap();
        assert!(ctx.commutator_formula(&x0, &x1).unwrap().is_identity());
        assert!(ctx.commutator_formula(&a, &a).unwrap().is_identity());
    }

    #[test]
    fn oracle_agrees_with_formula_on_generators() {
        let ctx = c5(3);
        for i in 0..5 {
            for j in 0..5 {
                let u = ctx.generator(i).unwrap();
                let w = ctx.generator(j).unwrap();
                assert_eq!(
                    ctx.commutator_oracle(&u, &w).unwrap(),
                    ctx.commutator_formula(&u, &w).unwrap(),
                    "generators {i},{j}"
                );
            }
        }
    }

    #[test]
    fn oracle_antisymmetry() {
        let ctx = c5(3);
        let u = ctx.element(&[1, 0, 2, 0, 1], &[]).unwrap();
        let w = ctx.element(&[0, 2, 1, 1, 0], &[]).unwrap();
        let uw = ctx.commutator_oracle(&u, &w).unwrap();
        let wu = ctx.commutator_oracle(&w, &u).unwrap();
        assert_eq!(ctx.inverse(&uw).unwrap(), wu);
    }

    #[test]
    fn central_generator_rejects_edges() {
        let ctx = c5(3);
        assert_eq!(ctx.central_generator(0, 1), Err(MeklerError::EdgeCentralPair(0, 1)));
        assert!(ctx.central_generator(0, 2).is_ok());
        assert_eq!(ctx.central_generator(2, 0), Err(MeklerError::UnorderedPair(2, 0)));
    }

    #[test]
    fn mixed_context_detected() {
        let c5_3 = c5(3);
        let c5_5 = c5(5);
        let u = c5_3.generator(0).unwrap();
        let w = c5_5.generator(0).unwrap();
        assert_eq!(c5_5.multiply(&w, &u), Err(MeklerError::MixedContext));
        // Same prime, different graph.
        let other = MeklerContext::new(Graph::cycle(6), 3).unwrap();
        let v = other.generator(0).unwrap();
        assert_eq!(c5_3.commutator_formula(&u, &v), Err(MeklerError::MixedContext));
    }

    #[test]
    fn centralizer_of_identity_is_everything() {
        let ctx = c5(3);
        let m = ctx.centralizer_matrix(&ctx.zero()).unwrap();
        assert!(m.rows().iter().all(|row| row.iter().all(|&x| x == 0)));
        assert_eq!(m.kernel_dimension(), 5);
    }

    #[test]
    fn centralizer_of_x0_brute_force() {
        // Oracle: enumerate all 3^5 vertex vectors and test the commutator
        // formula directly.
        let ctx = c5(3);
        let x0 = ctx.generator(0).unwrap();
        let m = ctx.centralizer_matrix(&x0).unwrap();
        let mut brute = 0usize;
        let mut linear = 0usize;
        let mut alpha = [0u32; 5];
        loop {
            let w = ctx.element(&alpha.map(|a| a as i64), &[]).unwrap();
            if ctx.commutator_formula(&x0, &w).unwrap().is_identity() {
                brute += 1;
            }
            if m.in_kernel(&alpha) {
                linear += 1;
            }
            let mut pos = 0;
            while pos < 5 {
                alpha[pos] += 1;
                if alpha[pos] < 3 {
                    break;
                }
                alpha[pos] = 0;
                pos += 1;
            }
            if pos == 5 {
                break;
            }
        }
        assert_eq!(brute, linear);
        // Kernel = span(e0, e1, e4): x0 itself and its neighbours in C5.
        assert_eq!(m.kernel_dimension(), 3);
        assert_eq!(brute, 27);
    }

    #[test]
    fn scaling_preserves_centralizer() {
        let ctx = c5(3);
        let v = ctx.element(&[1, 0, 2, 0, 0], &[]).unwrap();
        let v2 = ctx.power(&v, 2).unwrap();
        assert!(ctx.same_class(&v, &v2).unwrap());
    }

    #[test]
    fn same_class_examples() {
        let ctx = c5(3);
        let x0 = ctx.generator(0).unwrap();
        assert!(ctx.same_class(&x0, &x0).unwrap());
        assert!(ctx.same_class(&x0, &ctx.power(&x0, 2).unwrap()).unwrap());
        let x1 = ctx.generator(1).unwrap();
        assert!(!ctx.same_class(&x0, &x1).unwrap());
        let central = ctx.central_generator(0, 2).unwrap();
        assert_eq!(ctx.same_class(&central, &x0), Err(MeklerError::CentralInput));
    }

    #[test]
    fn case_classification_examples() {
        let ctx = c5(3);
        let x0sq = ctx.power(&ctx.generator(0).unwrap(), 2).unwrap();
        assert_eq!(ctx.case_classify(&x0sq).unwrap(), CaseTag::Case1(0));
        let x0x1 = ctx.element(&[1, 1], &[]).unwrap();
        assert_eq!(ctx.case_classify(&x0x1).unwrap(), CaseTag::Case2(0, 1));
        let x0x2 = ctx.element(&[1, 0, 1], &[]).unwrap();
        assert_eq!(ctx.case_classify(&x0x2).unwrap(), CaseTag::Case3(1));
        let x0x2x4 = ctx.element(&[1, 0, 1, 0, 1], &[]).unwrap();
        assert_eq!(ctx.case_classify(&x0x2x4).unwrap(), CaseTag::Case4);
        assert_eq!(ctx.case_classify(&ctx.zero()), Err(MeklerError::CentralInput));
    }

    #[test]
    fn class_sizes_per_case() {
        let ctx = c5(3);
        let sizes = [
            (ctx.element(&[1], &[]).unwrap(), 2),
            (ctx.element(&[1, 1], &[]).unwrap(), 4),
            (ctx.element(&[1, 0, 1], &[]).unwrap(), 6),
            (ctx.element(&[1, 0, 1, 0, 1], &[]).unwrap(), 2),
        ];
        for (v, expected) in sizes {
            assert_eq!(ctx.class_size(&v).unwrap(), expected);
        }
    }

    #[test]
    fn project_to_level_basics() {
        let ctx = c5(3);
        let u = ctx.element(&[1, 2, 0, 1, 0], &[(0, 2, 1), (1, 3, 2)]).unwrap();
        assert_eq!(ctx.project_to_level(&u, 0).unwrap(), ctx.zero());
        let low = ctx.element(&[1, 2], &[]).unwrap();
        assert_eq!(ctx.project_to_level(&low, 2).unwrap(), low);
        // Projection is a homomorphism.
        let w = ctx.element(&[0, 1, 1, 0, 2], &[(0, 3, 1)]).unwrap();
        let lhs = ctx.project_to_level(&ctx.multiply(&u, &w).unwrap(), 3).unwrap();
        let rhs = ctx
            .multiply(
                &ctx.project_to_level(&u, 3).unwrap(),
                &ctx.project_to_level(&w, 3).unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rn_levels_for_c5() {
        // Normal-form counting: level n has order p^(n + #non-edges below n).
        let g = Graph::cycle(5);
        assert_eq!(rn_level_element(&g, 3, 0).unwrap().target().order(), 1);
        assert_eq!(rn_level_element(&g, 3, 1).unwrap().target().order(), 3);
        // {0,1} is an edge of C5, so level 2 is abelian of order 9.
        let l2 = rn_level_element(&g, 3, 2).unwrap();
        assert_eq!(l2.target().order(), 9);
        assert!(l2.target().is_abelian());
        // Level 3 sees the non-edge (0,2): order 81.
        assert_eq!(rn_level_element(&g, 3, 3).unwrap().target().order(), 81);
    }

    #[test]
    fn rn_level_without_edge_is_heisenberg_shape() {
        // Two vertices, no edge: level 2 is the nonabelian group of order
        // 27 and exponent 3.
        let g = Graph::new(2, []).unwrap();
        let l2 = rn_level_element(&g, 3, 2).unwrap();
        assert_eq!(l2.target().order(), 27);
        assert!(!l2.target().is_abelian());
        assert_eq!(l2.target().exponent(), 3);
    }

    #[test]
    fn rn_level_too_large() {
        let g = Graph::cycle(5);
        assert!(matches!(rn_level_element(&g, 3, 5), Err(MeklerError::LevelTooLarge { .. })));
    }
}
