//! Exact arithmetic on finite quotients of the free profinite group on
//! countably many generators.
//!
//! Everything here is computed over explicitly tabulated finite groups:
//! open normal subgroups are kernels of epimorphisms onto such groups,
//! closed normal subgroups are descending chains of those kernels, and the
//! remaining modules (Mekler nil-2 calculus, coset-tree encodings, SL2
//! towers) build on the same substrate. All values are immutable after
//! construction and all operations are pure, so concurrent reads are safe;
//! the only mutable state is the append-only enumeration memo in
//! [`lattice::Lattice`].
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live
//! in the companion `profinite-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cantor;
pub mod filter;
pub mod finite;
pub mod lattice;
pub mod mekler;
pub mod slfam;
pub mod word;

pub use finite::{FiniteGroup, GeneratedSubgroup, GroupError};
pub use lattice::{Lattice, LatticeElement};
pub use word::Word;
