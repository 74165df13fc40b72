//! Exact-arithmetic calculus on the symplectic module `H` of a surface:
//! sparse rational linear algebra and Smith normal form, exterior/tensor/
//! symmetric powers with their equivariant maps, free Lie algebras in
//! Lyndon coordinates, labeled unitrivalent tree diagrams with the AS/IHX
//! calculus, and the named verification checks built on top of them.
//!
//! Everything is computed over `Q` (or `Z` where stated); no floating
//! point is used anywhere.

#![cfg_attr(not(test), no_std)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chillingworth;
pub mod checks;
pub mod freelie;
pub mod linalg;
pub mod multi;
pub mod rep;
pub mod snf;
pub mod symplectic;
pub mod treediag;

pub use linalg::{Int, Rat};
pub use symplectic::{BasisSymbol, Genus, HElem};
