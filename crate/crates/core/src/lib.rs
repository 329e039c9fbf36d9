//! Invertible matrices over finite additively idempotent semirings.
//!
//! Every such semiring embeds into the residuated maps `Res(L)` of its
//! natural-order lattice, and a matrix over `Res(L)` is invertible exactly
//! when it permutes the coordinates of the irreducible factorization of
//! `L^n` through lattice isomorphisms. This crate builds the pieces of that
//! picture (lattices, residuated maps, semirings, factorizations, matrices)
//! along with brute-force oracles for cross-checking.

pub mod catalog;
pub mod factor;
pub mod formats;
pub mod iso;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod resmap;
pub mod semiring;

pub use factor::{aut_count, count_invertible, factorize, is_irreducible, Congruence, FactorError, Factorization};
pub use iso::{are_isomorphic, automorphisms, find_isomorphism};
pub use lattice::{build_lattice, product, CoordinateMap, Element, FiniteLattice, LatticeError};
pub use matrix::{
    check_invertible, invert, semiring_matrix_invert, Coordinate, InvertibilityCertificate, MatrixError, ResMatrix,
    SemiringMatrix,
};
pub use resmap::{MapError, ResiduatedMap};
pub use semiring::{embed, generate_simple_semiring, natural_order_lattice, Axiom, FiniteSemiring, SemiringError};
