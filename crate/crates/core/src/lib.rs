//! Exact computations in the Chu and chu categories over prime fields.
//!
//! Modules, bottom up:
//! - [`linalg`]: matrices, subspaces and canonical forms over F_p.
//! - [`chu`]: Chu objects, morphisms, duality, tensor, internal hom, S and E.
//! - [`topo`]: subspaces of finite products of discrete spaces, functional
//!   factorization and extension, weak isomorphisms and the weak reflection.
//! - [`laws`]: the *-autonomous law catalog and the equivalence between
//!   weak spaces and chu.
//! - [`modring`]: modules over `F_p[x]/(x^n)`, self-injectivity, the
//!   cogenerator embedding, and chu over that ring.
//! - [`fincat`]: finite categories, functors and adjunctions as lookup tables.

pub mod chu;
pub mod fincat;
pub mod laws;
pub mod linalg;
pub mod modring;
pub mod topo;

pub use chu::{ChuMorphism, ChuObject};
pub use linalg::{FieldSpec, Matrix, Subspace};
