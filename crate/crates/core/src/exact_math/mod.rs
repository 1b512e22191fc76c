//! Exact arithmetic substrate: rationals, sparse multivariate polynomials,
//! localized polynomials, fraction-free linear solving and rational
//! polyhedra.
//!
//! Everything here is exact. There is no floating point anywhere in the
//! crate, so equality is always structural equality of canonical forms.

mod expr;
mod grid;
mod laurent;
mod linear;
mod poly;
mod polyhedron;
mod univariate;

pub use expr::{parse_expr, Expr, ExprAlgebra, ParseError};
pub use grid::{grid_witness, grid_zero_test, interpolate_from_grid, GridError};
pub(crate) use grid::grid_points;
pub use laurent::LaurentLoc;
pub use linear::{solve_linear_exact, solve_sparse, LinearError, LinearSolution, SparseRow};
pub use poly::{Monomial, MultiPoly, PolyError, VarList};
pub use polyhedron::{Inequality, LpOutcome, PolyhedronError, PolyhedronQ};
pub use univariate::{
    binomial_poly, falling_factorial, falling_factorial_int, rational_roots, RootError,
    RootMultiset,
};

use num_bigint::BigInt;
use num_traits::Zero;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Largest integer `<= r`.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}
