//! Closed normal subgroups as descending chains of open ones.
//!
//! A closed normal subgroup of the free profinite group is represented by
//! a generating descending chain of lattice elements, developed lazily by
//! a deterministic extender. Finite depth can confirm membership of a
//! lattice element in the filter but can only refute it "at depth", which
//! is why containment is three-valued.

use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{Lattice, LatticeElement, LatticeError};
use crate::mekler::Graph;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterError {
    /// The chain cannot be developed to the requested depth.
    DepthInsufficient { requested: usize, available: usize },
    /// A chain element uses more generators than the declared rank.
    SupportTooLarge { support: usize, bound: usize },
    /// Consecutive chain elements fail the descending invariant.
    NotDescending { position: usize },
    Lattice(LatticeError),
}

impl fmt::Display for FilterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterError::DepthInsufficient { requested, available } => write!(
                f,
                "chain depth {available} is insufficient for requested level {requested}"
            ),
            FilterError::SupportTooLarge { support, bound } => {
                write!(f, "chain element support {support} exceeds the generator rank {bound}")
            }
            FilterError::NotDescending { position } => {
                write!(f, "chain is not descending at position {position}")
            }
            FilterError::Lattice(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FilterError {}

impl From<LatticeError> for FilterError {
    fn from(e: LatticeError) -> Self {
        FilterError::Lattice(e)
    }
}

/// Deterministic rule producing the next chain element on demand.
#[derive(Debug, Clone)]
pub enum Extender {
    /// No rule: the chain is exactly its developed prefix.
    None,
    /// Principal chain: repeat the last developed element forever.
    Constant,
    /// `chain(i)` is the map sending `x0` to `1` in `Z/base^i`.
    CyclicPower { base: usize },
    /// `chain(i)` is the level-`i` truncation quotient of the graph group.
    RnChain { graph: Graph, p: u32 },
}

/// Membership of a lattice element in the filter, decided at finite depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    /// Some developed chain element lies below the queried element; this
    /// is permanent.
    Yes,
    /// No chain element up to the queried depth lies below it.
    NoAtDepth,
    /// The chain could not be developed to the queried depth.
    Unknown,
}

/// A descending chain `chain(0) >= chain(1) >= ...` of lattice elements
/// approximating a closed normal subgroup by its finite quotients.
#[derive(Debug, Clone)]
pub struct FilterChain {
    developed: Vec<LatticeElement>,
    extender: Extender,
    /// Declared generator rank, when the chain has been re-embedded.
    rank: Option<usize>,
}

impl FilterChain {
    /// A chain from an explicit descending prefix, with no extension rule.
    pub fn from_elements(elements: Vec<LatticeElement>) -> Result<Self, FilterError> {
        for i in 1..elements.len() {
            if !elements[i].leq(&elements[i - 1]) {
                return Err(FilterError::NotDescending { position: i });
            }
        }
        Ok(FilterChain { developed: elements, extender: Extender::None, rank: None })
    }

    /// The principal chain constantly equal to `element`.
    pub fn principal(element: LatticeElement) -> Self {
        FilterChain {
            developed: alloc::vec![element],
            extender: Extender::Constant,
            rank: None,
        }
    }

    /// An empty chain developed on demand by the extender.
    pub fn with_extender(extender: Extender) -> Self {
        FilterChain { developed: Vec::new(), extender, rank: None }
    }

    pub fn developed_depth(&self) -> usize {
        self.developed.len()
    }

    pub fn developed(&self) -> &[LatticeElement] {
        &self.developed
    }

    pub fn extender(&self) -> &Extender {
        &self.extender
    }

    /// Develops the chain so that levels `0..depth` exist.
    pub fn develop(&mut self, depth: usize) -> Result<(), FilterError> {
        while self.developed.len() < depth {
            let i = self.developed.len();
            let next = match &self.extender {
                Extender::None => None,
                Extender::Constant => self.developed.last().cloned(),
                Extender::CyclicPower { base } => cyclic_power_element(*base, i),
                Extender::RnChain { graph, p } => {
                    crate::mekler::rn_level_element(graph, *p, i).ok()
                }
            };
            let Some(next) = next else {
                return Err(FilterError::DepthInsufficient {
                    requested: depth,
                    available: self.developed.len(),
                });
            };
            if let Some(rank) = self.rank {
                if next.support() > rank {
                    return Err(FilterError::SupportTooLarge {
                        support: next.support(),
                        bound: rank,
                    });
                }
            }
            if let Some(prev) = self.developed.last() {
                if !next.leq(prev) {
                    return Err(FilterError::NotDescending { position: i });
                }
            }
            self.developed.push(next);
        }
        Ok(())
    }

    /// The chain element at level `i`, developing as needed.
    pub fn element_at(&mut self, i: usize) -> Result<&LatticeElement, FilterError> {
        self.develop(i + 1)?;
        Ok(&self.developed[i])
    }

    /// Finite quotient at level `i`: the target of `chain(i)`.
    pub fn quotient_at(&mut self, i: usize) -> Result<crate::FiniteGroup, FilterError> {
        Ok(self.element_at(i)?.target().clone())
    }

    /// Whether the queried lattice element belongs to the filter, decided
    /// at the given depth: `Yes` as soon as some developed `chain(i)` lies
    /// below it (permanent), `NoAtDepth` when all levels up to `depth` have
    /// been inspected without success, `Unknown` when the chain runs out
    /// before that.
    pub fn contains(&mut self, l: &LatticeElement, depth: usize) -> Containment {
        let develop_failed = self.develop(depth + 1).is_err();
        let available = self.developed.len().min(depth + 1);
        for i in 0..available {
            if self.developed[i].leq(l) {
                return Containment::Yes;
            }
        }
        if develop_failed {
            Containment::Unknown
        } else {
            Containment::NoAtDepth
        }
    }

    /// Whether the chain looks principal: it stabilizes (structural
    /// equality of canonical forms) from level `depth/2` through `depth`.
    pub fn is_principal_up_to(&mut self, depth: usize) -> Result<bool, FilterError> {
        self.develop(depth + 1)?;
        for i in depth / 2..depth {
            if self.developed[i] != self.developed[i + 1] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Re-embeds a chain over `r` generators into the lattice over `k`
    /// generators. Chain elements are reinterpreted unchanged (generators
    /// `x_r..x_{k-1}` map to the identity), so every finite quotient is
    /// preserved level by level.
    pub fn extend_generators(&self, r: usize, k: usize) -> Result<FilterChain, FilterError> {
        assert!(r <= k, "target rank must not shrink");
        for e in &self.developed {
            if e.support() > r {
                return Err(FilterError::SupportTooLarge { support: e.support(), bound: r });
            }
        }
        let mut out = self.clone();
        out.rank = Some(k);
        Ok(out)
    }

    /// Membership of a word in the depth-truncated intersection of the
    /// chain kernels. Monotone non-increasing in `depth`.
    pub fn theta_meet(&mut self, w: &Word, depth: usize) -> Result<bool, FilterError> {
        self.develop(depth + 1)?;
        Ok(self.developed[..=depth].iter().all(|l| l.contains_word(w)))
    }
}

fn cyclic_power_element(base: usize, level: usize) -> Option<LatticeElement> {
    let order = base.checked_pow(level as u32)?;
    if order > crate::finite::MAX_TABLE_ORDER {
        return None;
    }
    if order == 1 {
        return Some(LatticeElement::top());
    }
    LatticeElement::new(crate::FiniteGroup::cyclic(order), alloc::vec![1]).ok()
}

/// The strictly descending chain of maps `x0 -> 1` in `Z/base^i`.
pub fn cyclic_power_chain(base: usize) -> FilterChain {
    assert!(base >= 2);
    FilterChain::with_extender(Extender::CyclicPower { base })
}

/// Decides `R * B(n) = S * B(n)` for the level-`n` base element: whether
/// the two filters agree on the coarse scale `2^-n`.
///
/// Each side is the join of a chain element with the base element; the
/// chain is developed until two consecutive joins agree, which a
/// descending sequence in the finite interval above the base element must
/// eventually do. Chains that run out before stabilizing report
/// `DepthInsufficient`.
pub fn hausdorff_level(
    lattice: &mut Lattice,
    r: &mut FilterChain,
    s: &mut FilterChain,
    n: usize,
) -> Result<bool, FilterError> {
    let base = lattice.base_element(n)?;
    let jr = stabilized_join(r, &base)?;
    let js = stabilized_join(s, &base)?;
    Ok(jr == js)
}

fn stabilized_join(
    chain: &mut FilterChain,
    base: &LatticeElement,
) -> Result<LatticeElement, FilterError> {
    let mut previous: Option<LatticeElement> = None;
    let mut i = 0;
    loop {
        match chain.element_at(i) {
            Ok(element) => {
                let joined = element.join(base)?;
                if previous.as_ref() == Some(&joined) {
                    return Ok(joined);
                }
                previous = Some(joined);
                i += 1;
            }
            Err(FilterError::DepthInsufficient { available, .. }) => {
                return Err(FilterError::DepthInsufficient { requested: i + 1, available });
            }
            Err(e) => return Err(e),
        }
    }
}
