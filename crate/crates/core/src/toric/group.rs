//! Finite diagonal abelian groups acting by `x_i ↦ ζ_n^{w_i} x_i`.

use super::{Semigroup, ToricError};
use crate::exact_math::Rational;
use num_integer::Integer;
use num_traits::Zero;

/// Generators `g_j` given by weight vectors `w_j` modulo orders `n_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalGroup {
    dim: usize,
    weights: Vec<Vec<i64>>,
    orders: Vec<u64>,
}

/// Row-style Hermite reduction over `ℤ`: returns the nonzero rows of an
/// echelon basis of the row span.
pub(crate) fn hermite_rows(mut rows: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    let mut out: Vec<Vec<i128>> = Vec::new();
    for col in 0..ncols {
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::new();
        for r in rows.into_iter() {
            if r[col] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(mut p) => {
                    let mut r = r;
                    // Euclid on the pivot column.
                    while r[col] != 0 {
                        let q = p[col].div_euclid(r[col]);
                        for j in 0..ncols {
                            p[j] -= q * r[j];
                        }
                        std::mem::swap(&mut p, &mut r);
                    }
                    pivot = Some(p);
                    rest.push(r);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[col] < 0 {
                p.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(p);
        }
    }
    // Reduce entries above pivots into [0, pivot).
    for i in 0..out.len() {
        let col = out[i].iter().position(|&x| x != 0).expect("nonzero row");
        for k in 0..i {
            let q = out[k][col].div_euclid(out[i][col]);
            if q != 0 {
                let (a, b) = out.split_at_mut(i);
                for j in 0..ncols {
                    a[k][j] -= q * b[0][j];
                }
            }
        }
    }
    out
}

impl DiagonalGroup {
    pub fn new(dim: usize, weights: Vec<Vec<i64>>, orders: Vec<u64>) -> Result<Self, ToricError> {
        if weights.len() != orders.len() || orders.iter().any(|&n| n == 0) {
            return Err(ToricError::BadOrder);
        }
        for w in &weights {
            if w.len() != dim {
                return Err(ToricError::DimensionMismatch {
                    expected: dim,
                    got: w.len(),
                });
            }
        }
        Ok(DiagonalGroup { dim, weights, orders })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Whether `x^v` is fixed by every generator.
    pub fn is_invariant(&self, v: &[i64]) -> bool {
        self.weights.iter().zip(&self.orders).all(|(w, &n)| {
            let s: i128 = w.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
            s.rem_euclid(n as i128) == 0
        })
    }

    /// The invariant ring `K[x]^G = K[ℕ^d ∩ L]` with
    /// `L = {v : Σ v_i w_i ≡ 0 mod n}` for every generator.
    pub fn to_semigroup(&self) -> Semigroup {
        let d = self.dim;
        let k = self.weights.len();
        // Integer kernel of [W | diag(n)]ᵀ, read off from the identity block.
        let mut rows: Vec<Vec<i128>> = Vec::new();
        for i in 0..d + k {
            let mut r = vec![0i128; k + d + k];
            for j in 0..k {
                r[j] = if i < d {
                    self.weights[j][i] as i128
                } else if i - d == j {
                    self.orders[j] as i128
                } else {
                    0
                };
            }
            r[k + i] = 1;
            rows.push(r);
        }
        let ech = hermite_rows(rows, 2 * k + d);
        let kernel: Vec<Vec<i128>> = ech
            .into_iter()
            .filter(|r| r[..k].iter().all(|&x| x == 0))
            .map(|r| r[k..k + d].to_vec())
            .collect();
        let basis = hermite_rows(kernel, d);
        let basis: Vec<Vec<i64>> = basis
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect();
        Semigroup::new(basis, vec![]).expect("finite-index kernel lattice")
    }

    /// Phases in `ℚ/ℤ` of each element of the group, one vector per element.
    fn element_phases(&self) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = vec![vec![Rational::zero(); self.dim]];
        for (w, &n) in self.weights.iter().zip(&self.orders) {
            let mut next = Vec::new();
            for base in &out {
                for a in 0..n {
                    let ph: Vec<Rational> = base
                        .iter()
                        .zip(w)
                        .map(|(b, &wi)| {
                            let x = b + Rational::new((a as i64 * wi).into(), (n as i64).into());
                            &x - x.floor()
                        })
                        .collect();
                    next.push(ph);
                }
            }
            next.sort();
            next.dedup();
            out = next;
        }
        out
    }

    pub fn order(&self) -> usize {
        self.element_phases().len()
    }

    /// Whether some element is a pseudoreflection, i.e. fixes a hyperplane
    /// pointwise: exactly one phase is nonzero.
    pub fn fixes_hyperplane(&self) -> bool {
        self.element_phases()
            .iter()
            .any(|ph| ph.iter().filter(|x| !x.is_zero()).count() == 1)
    }

    /// Least common multiple of the generator orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |a, &b| a.lcm(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_three() {
        let g = DiagonalGroup::new(2, vec![vec![1, -1]], vec![3]).unwrap();
        let s = g.to_semigroup();
        assert_eq!(s.index(), 3);
        assert!(s.contains_exp(&[4, 1]));
        assert!(!s.contains_exp(&[1, 0]));
        assert!(!g.fixes_hyperplane());
        assert_eq!(g.order(), 3);
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                if a.abs() + b.abs() <= 10 {
                    assert_eq!(g.is_invariant(&[a, b]), s.in_lattice(&[a, b]), "{a},{b}");
                }
            }
        }
    }

    #[test]
    fn trivial_and_reflection() {
        let t = DiagonalGroup::new(3, vec![], vec![]).unwrap();
        assert_eq!(t.to_semigroup().index(), 1);
        let r = DiagonalGroup::new(2, vec![vec![1, 0]], vec![2]).unwrap();
        assert!(r.fixes_hyperplane());
        let two = DiagonalGroup::new(2, vec![vec![1, 0], vec![0, 1]], vec![2, 2]).unwrap();
        assert_eq!(two.to_semigroup().index(), 4);
        assert_eq!(two.exponent(), 2);
    }

    #[test]
    fn mixed_generators() {
        let g = DiagonalGroup::new(3, vec![vec![1, 2, 3], vec![1, 1, 0]], vec![4, 6]).unwrap();
        let s = g.to_semigroup();
        for v in crate::exact_math::grid_points(3, 7) {
            let v: Vec<i64> = v.iter().map(|&x| x as i64 - 3).collect();
            assert_eq!(g.is_invariant(&v), s.in_lattice(&v));
        }
        assert_eq!(s.index() as usize, g.order());
    }
}
