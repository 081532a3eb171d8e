//! Freely reduced words in the free group on generators `x0, x1, ...`.

use alloc::vec::Vec;
use core::fmt;

/// A word as a sequence of syllables `(generator index, exponent)`.
///
/// Invariants: exponents are nonzero and adjacent syllables carry distinct
/// generator indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Word {
    syllables: Vec<(usize, i64)>,
}

impl Word {
    /// The empty word.
    pub fn identity() -> Self {
        Word { syllables: Vec::new() }
    }

    /// A single generator `x_i`.
    pub fn generator(i: usize) -> Self {
        Word { syllables: alloc::vec![(i, 1)] }
    }

    /// A single syllable `x_i^k`; `k = 0` gives the empty word.
    pub fn power(i: usize, k: i64) -> Self {
        if k == 0 {
            Word::identity()
        } else {
            Word { syllables: alloc::vec![(i, k)] }
        }
    }

    /// Builds a word from raw syllables, freely reducing.
    pub fn from_syllables(raw: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut w = Word::identity();
        for (i, k) in raw {
            w.push_syllable(i, k);
        }
        w
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Largest generator index used, plus one; 0 for the empty word.
    pub fn support(&self) -> usize {
        self.syllables.iter().map(|&(i, _)| i + 1).max().unwrap_or(0)
    }

    fn push_syllable(&mut self, i: usize, k: i64) {
        if k == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((j, e)) if *j == i => {
                *e += k;
                if *e == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((i, k)),
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(i, k) in &other.syllables {
            w.push_syllable(i, k);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|&(i, k)| (i, -k)).collect(),
        }
    }

    /// The commutator `a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for (n, &(i, k)) in self.syllables.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{k}")?;
            }
        }
        Ok(())
    }
}
