//! Monomial ideals of `K[S]`, as upward-closed subsets of `S` under
//! `a ≤_S b ⟺ b − a ∈ S`.

use super::{Semigroup, ToricError};
use crate::exact_math::grid_points;
use crate::MonomialIdeal;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandIdeal {
    dim: usize,
    /// Minimal elements under `≤_S`, sorted.
    gens: Vec<Vec<u32>>,
}

fn diff_in(s: &Semigroup, big: &[u32], small: &[u32]) -> bool {
    let d: Vec<i64> = big.iter().zip(small).map(|(&a, &b)| a as i64 - b as i64).collect();
    s.contains_signed(&d)
}

impl SummandIdeal {
    pub fn new(s: &Semigroup, gens: Vec<Vec<u32>>) -> Result<Self, ToricError> {
        for g in &gens {
            if g.len() != s.dim() {
                return Err(ToricError::DimensionMismatch {
                    expected: s.dim(),
                    got: g.len(),
                });
            }
            if !s.contains_exp(g) {
                return Err(ToricError::NotInSubring(g.clone()));
            }
        }
        let mut gens = gens;
        gens.sort();
        gens.dedup();
        let minimal = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && diff_in(s, g, h)))
            .cloned()
            .collect();
        Ok(SummandIdeal { dim: s.dim(), gens: minimal })
    }

    pub fn unit(dim: usize) -> Self {
        SummandIdeal {
            dim,
            gens: vec![vec![0; dim]],
        }
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    pub fn contains(&self, s: &Semigroup, v: &[u32]) -> bool {
        s.contains_exp(v) && self.gens.iter().any(|g| diff_in(s, v, g))
    }

    /// `J ∩ S` for a monomial ideal `J` of the polynomial ring.
    pub fn restrict(s: &Semigroup, j: &MonomialIdeal) -> Result<Self, ToricError> {
        if s.has_subspace() {
            return Err(ToricError::SubspaceUnsupported);
        }
        if j.is_zero() {
            return Ok(SummandIdeal { dim: s.dim(), gens: vec![] });
        }
        // Minimal elements satisfy v_i < max_i + [ℤ^d : L], since
        // [ℤ^d : L]·e_i ∈ S.
        let n = s.index() as u32;
        let top: Vec<u32> = j.max_exponents().iter().map(|&m| m + n - 1).collect();
        Self::from_box(s, &top, |v| j.contains(v))
    }

    /// The ideal generated by the points of `S` in `[0, top]` satisfying
    /// `pred`, where `pred` must describe an upward-closed set.
    pub(crate) fn from_box(s: &Semigroup, top: &[u32], pred: impl Fn(&[u32]) -> bool) -> Result<Self, ToricError> {
        let m = top.iter().copied().max().unwrap_or(0);
        let pts: Vec<Vec<u32>> = grid_points(s.dim(), m)
            .into_iter()
            .filter(|v| v.iter().zip(top).all(|(a, b)| a <= b) && s.contains_exp(v) && pred(v))
            .collect();
        Self::new(s, pts)
    }
}

impl fmt::Display for SummandIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| format!("({})", g.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "<{}>_S", parts.join(", "))
    }
}
