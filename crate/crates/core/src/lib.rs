//! Exact Bernstein–Sato functional equations for polynomial rings and
//! their monomial direct summands.
//!
//! The crate is organized bottom up:
//!
//! - [`exact_math`]: rationals, polynomials, linear algebra, polyhedra
//! - [`weyl`]: the Weyl algebra, its action, ideal preservation
//! - [`fs_module`]: the module `M[f^s]` and functional-equation checks
//! - [`toric`]: normal semigroups, splittings and summand tests
//! - [`bs_solver`]: ansatz search for functional equations
//! - [`positive_char`]: Cartier operators and monomial test ideals
//! - [`birational`]: multiplier ideals, jumping numbers, V-filtrations

pub mod exact_math;
pub mod fs_module;
pub mod weyl;
pub mod monomial_ideal;
pub mod toric;
pub mod bs_solver;
pub mod positive_char;
pub mod birational;

pub use monomial_ideal::MonomialIdeal;
