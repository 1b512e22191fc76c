//! Finite-grid zero test and Lagrange reconstruction.
//!
//! Over a field of characteristic zero, a polynomial whose degree in each
//! grid variable is at most `m` vanishes on `{0..m}^k` iff it is zero.

use super::poly::MultiPoly;
use super::Rational;
use num_traits::One;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("degree {degree} in variable '{var}' exceeds grid bound {bound}")]
    DegreeExceedsBound { var: String, degree: u32, bound: u32 },
    #[error("grid value missing at {0:?}")]
    IncompleteGrid(Vec<u32>),
}

/// All points of `{0..m}^k` in lexicographic order.
pub(crate) fn grid_points(k: usize, m: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
        for p in &out {
            for a in 0..=m {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn check_degrees(h: &MultiPoly, grid_vars: &[usize], m: u32) -> Result<(), GridError> {
    for &i in grid_vars {
        let d = h.degree_in(i);
        if d > m {
            return Err(GridError::DegreeExceedsBound {
                var: h.vars().names()[i].clone(),
                degree: d,
                bound: m,
            });
        }
    }
    Ok(())
}

fn at_point(h: &MultiPoly, grid_vars: &[usize], pt: &[u32]) -> MultiPoly {
    let assignment: Vec<(usize, Rational)> = grid_vars
        .iter()
        .zip(pt)
        .map(|(&i, &a)| (i, Rational::from_integer(a.into())))
        .collect();
    h.eval_partial(&assignment)
}

/// Lexicographically smallest grid point where `h` does not vanish.
pub fn grid_witness(h: &MultiPoly, grid_vars: &[usize], m: u32) -> Result<Option<Vec<u32>>, GridError> {
    check_degrees(h, grid_vars, m)?;
    Ok(grid_points(grid_vars.len(), m)
        .into_iter()
        .find(|pt| !at_point(h, grid_vars, pt).is_zero()))
}

/// True iff `h` vanishes at every point of `{0..m}^k` in the grid
/// variables; other variables are kept symbolic.
pub fn grid_zero_test(h: &MultiPoly, grid_vars: &[usize], m: u32) -> Result<bool, GridError> {
    Ok(grid_witness(h, grid_vars, m)?.is_none())
}

/// Rebuilds the unique polynomial of degree at most `m` in each grid
/// variable from its values on `{0..m}^k`.
pub fn interpolate_from_grid(
    proto: &MultiPoly,
    grid_vars: &[usize],
    m: u32,
    values: &BTreeMap<Vec<u32>, MultiPoly>,
) -> Result<MultiPoly, GridError> {
    let vars = proto.vars();
    // Univariate Lagrange basis polynomials per grid variable.
    let basis: Vec<Vec<MultiPoly>> = grid_vars
        .iter()
        .map(|&i| {
            let s = MultiPoly::var_index(vars, i);
            (0..=m)
                .map(|a| {
                    let mut l = MultiPoly::one(vars);
                    for b in (0..=m).filter(|&b| b != a) {
                        let factor = &s - &MultiPoly::constant(vars, Rational::from_integer(b.into()));
                        let denom = Rational::from_integer((a as i64 - b as i64).into());
                        l = (&l * &factor).scale(&(Rational::one() / denom));
                    }
                    l
                })
                .collect()
        })
        .collect();
    let mut out = MultiPoly::zero(vars);
    for pt in grid_points(grid_vars.len(), m) {
        let v = values
            .get(&pt)
            .ok_or_else(|| GridError::IncompleteGrid(pt.clone()))?;
        if v.is_zero() {
            continue;
        }
        let mut term = v.clone();
        for (k, &a) in pt.iter().enumerate() {
            term = &term * &basis[k][a as usize];
        }
        out = &out + &term;
    }
    Ok(out)
}
