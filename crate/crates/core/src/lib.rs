//! Finite le-modules over finite commutative rings with 1.
//!
//! An le-module is a complete lattice `M` with greatest element `e`, a
//! commutative monoid addition distributing over joins, and an action of a
//! ring `R` that is compatible with both. This crate works with finite
//! instances given by tables:
//!
//! * [`ring`]: rings, ideals, radicals, prime/primary/maximal tests.
//! * [`module`]: the axiom validator, submodule elements, ideal action,
//!   residuals `(n:r)`, `(n:A)` and transporters `(l:x)`.
//! * [`primary`]: primary and prime submodule elements.
//! * [`decomposition`]: reduced primary decompositions, associated and
//!   isolated primes, S-components and the two uniqueness checks.
//! * [`laws`]: the full property suite run by `lemodule verify`.
//! * [`models`] and [`io`]: generators and the JSON structure format.

pub mod bits;
pub mod cli;
pub mod decomposition;
mod error;
pub mod io;
pub mod laws;
pub mod models;
pub mod module;
pub mod primary;
pub mod ring;

pub use bits::BitSet;
pub use error::{Axiom, Error, Result, Violation};
pub use module::{LeModule, RawModule, SubmoduleElement};
pub use ring::{FiniteRing, Ideal, MultClosedSet, RawRing};

/// Size caps. Index sets are 64-bit, so no cap can usefully exceed 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_ring: usize,
    pub max_module: usize,
    /// Largest candidate pool the reduced-decomposition enumerator accepts.
    pub max_pool: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_ring: 64,
            max_module: 64,
            max_pool: 20,
        }
    }
}
