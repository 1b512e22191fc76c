//! Operators given by their graded pieces `x^v ↦ (num(v)/den(v)) x^{v+μ}`.
//!
//! This covers operators on monomial subrings that are not restrictions of
//! Weyl algebra elements, such as `(x∂−1)∘∂²∘(x∂−1)^{-1}` on `K[x², x³]`.

use crate::exact_math::{rational_roots, MultiPoly, PolyError, Rational, VarList};
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

/// A set of exponent vectors on which graded operators are evaluated.
pub trait ExponentDomain: Send + Sync {
    fn dim(&self) -> usize;
    fn contains(&self, v: &[u32]) -> bool;
}

/// All of `ℕ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orthant(pub usize);

impl ExponentDomain for Orthant {
    fn dim(&self) -> usize {
        self.0
    }

    fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.0
    }
}

/// The monoid generated by finitely many exponent vectors; unlike the
/// lattice-presented semigroups it need not be normal.
#[derive(Debug)]
pub struct GeneratedSemigroup {
    dim: usize,
    gens: Vec<Vec<u32>>,
    memo: Mutex<HashMap<Vec<u32>, bool>>,
}

impl Clone for GeneratedSemigroup {
    fn clone(&self) -> Self {
        GeneratedSemigroup::new(self.dim, self.gens.clone())
    }
}

impl GeneratedSemigroup {
    pub fn new(dim: usize, gens: Vec<Vec<u32>>) -> Self {
        let gens: Vec<Vec<u32>> = gens.into_iter().filter(|g| g.iter().any(|&e| e > 0)).collect();
        for g in &gens {
            assert_eq!(g.len(), dim, "generator length mismatch");
        }
        GeneratedSemigroup {
            dim,
            gens,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    fn member(&self, v: &[u32]) -> bool {
        if v.iter().all(|&e| e == 0) {
            return true;
        }
        if let Some(&b) = self.memo.lock().expect("memo lock").get(v) {
            return b;
        }
        let ans = self.gens.iter().any(|g| {
            g.iter().zip(v).all(|(a, b)| a <= b) && {
                let rest: Vec<u32> = v.iter().zip(g).map(|(a, b)| a - b).collect();
                self.member(&rest)
            }
        });
        self.memo.lock().expect("memo lock").insert(v.to_vec(), ans);
        ans
    }
}

impl ExponentDomain for GeneratedSemigroup {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.dim && self.member(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedPiece {
    pub shift: Vec<i64>,
    pub num: MultiPoly,
    pub den: MultiPoly,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GradedError {
    #[error("exponent {0:?} is not in the operator's domain")]
    NotInDomain(Vec<u32>),
    #[error("denominator of piece {piece} vanishes at exponent {exponent:?}")]
    Pole { piece: usize, exponent: Vec<u32> },
    #[error("piece {piece} maps exponent {exponent:?} outside the ambient orthant")]
    OutsideAmbient { piece: usize, exponent: Vec<u32> },
    #[error("dimension mismatch: operator has {expected} variables, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero denominator in piece {0}")]
    ZeroDenominator(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyOutcome {
    /// No denominator vanishes anywhere on the domain.
    Certified,
    /// A domain exponent where some denominator vanishes.
    Pole { piece: usize, exponent: Vec<u32> },
    /// The denominator shape is outside what can be decided exactly.
    Uncertified(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    theta: VarList,
    pieces: Vec<GradedPiece>,
    /// Order as a differential operator, when known from its construction.
    pub declared_order: Option<u32>,
}

impl GradedOperator {
    /// `theta` names the Euler variables, one per ambient coordinate.
    pub fn new(theta: VarList, pieces: Vec<GradedPiece>, declared_order: Option<u32>) -> Result<Self, GradedError> {
        for (i, p) in pieces.iter().enumerate() {
            if p.shift.len() != theta.len() {
                return Err(GradedError::DimensionMismatch {
                    expected: theta.len(),
                    got: p.shift.len(),
                });
            }
            if p.den.is_zero() {
                return Err(GradedError::ZeroDenominator(i));
            }
        }
        let pieces = pieces
            .into_iter()
            .map(|p| -> Result<GradedPiece, GradedError> {
                Ok(GradedPiece {
                    shift: p.shift,
                    num: p.num.embed_by_name(&theta)?,
                    den: p.den.embed_by_name(&theta)?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GradedOperator {
            theta,
            pieces,
            declared_order,
        })
    }

    /// Builds pieces from expression strings in the Euler variables.
    pub fn parse(theta: &[&str], pieces: &[(Vec<i64>, &str, &str)], declared_order: Option<u32>) -> Result<Self, GradedError> {
        let vars = VarList::new(theta);
        let ps = pieces
            .iter()
            .map(|(shift, num, den)| -> Result<GradedPiece, GradedError> {
                Ok(GradedPiece {
                    shift: shift.clone(),
                    num: MultiPoly::parse(num, &vars)?,
                    den: MultiPoly::parse(den, &vars)?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vars, ps, declared_order)
    }

    pub fn theta(&self) -> &VarList {
        &self.theta
    }

    pub fn pieces(&self) -> &[GradedPiece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Applies the operator to `p`, whose monomials must lie in `domain`.
    pub fn apply(&self, p: &MultiPoly, domain: &dyn ExponentDomain) -> Result<MultiPoly, GradedError> {
        if p.nvars() != self.dim() {
            return Err(GradedError::DimensionMismatch {
                expected: self.dim(),
                got: p.nvars(),
            });
        }
        let mut out = MultiPoly::zero(p.vars());
        for (m, c) in p.terms() {
            if !domain.contains(&m.0) {
                return Err(GradedError::NotInDomain(m.0.clone()));
            }
            let point: Vec<Rational> = m.0.iter().map(|&e| Rational::from_integer(e.into())).collect();
            for (idx, piece) in self.pieces.iter().enumerate() {
                let den = piece.den.eval_all(&point);
                if den.is_zero() {
                    return Err(GradedError::Pole {
                        piece: idx,
                        exponent: m.0.clone(),
                    });
                }
                let val = piece.num.eval_all(&point) / den;
                if val.is_zero() {
                    continue;
                }
                let target: Vec<i64> = m.0.iter().zip(&piece.shift).map(|(&a, &b)| a as i64 + b).collect();
                if target.iter().any(|&t| t < 0) {
                    return Err(GradedError::OutsideAmbient {
                        piece: idx,
                        exponent: m.0.clone(),
                    });
                }
                let e: Vec<u32> = target.iter().map(|&t| t as u32).collect();
                out.add_term(crate::exact_math::Monomial(e), c * val);
            }
        }
        Ok(out)
    }

    /// Decides whether every denominator is nonzero on the whole domain.
    /// Denominators that are constant or univariate in one Euler variable
    /// are handled exactly in dimension one; in higher dimension a domain
    /// point on the root hyperplane is searched up to `search_bound` in the
    /// other coordinates.
    pub fn certify_denominators(&self, domain: &dyn ExponentDomain, search_bound: u32) -> CertifyOutcome {
        for (idx, piece) in self.pieces.iter().enumerate() {
            if piece.den.is_constant() {
                continue;
            }
            let active: Vec<usize> = (0..self.dim()).filter(|&i| piece.den.degree_in(i) > 0).collect();
            if active.len() != 1 {
                return CertifyOutcome::Uncertified(format!(
                    "denominator {} of piece {idx} is not univariate",
                    piece.den
                ));
            }
            let var = active[0];
            let roots = match rational_roots(&piece.den) {
                Ok(r) => r,
                Err(_) => continue,
            };
            for (r, _) in roots {
                if !r.is_integer() || r.is_negative() {
                    continue;
                }
                let r = r.to_integer().try_into().unwrap_or(u32::MAX);
                match find_on_hyperplane(domain, var, r, search_bound) {
                    Some(v) => return CertifyOutcome::Pole { piece: idx, exponent: v },
                    None if self.dim() > 1 => {
                        return CertifyOutcome::Uncertified(format!(
                            "no domain point with coordinate {var} equal to {r} up to bound {search_bound}"
                        ))
                    }
                    None => {}
                }
            }
        }
        CertifyOutcome::Certified
    }
}

fn find_on_hyperplane(domain: &dyn ExponentDomain, var: usize, value: u32, bound: u32) -> Option<Vec<u32>> {
    let d = domain.dim();
    let others: Vec<usize> = (0..d).filter(|&i| i != var).collect();
    let mut v = vec![0u32; d];
    v[var] = value;
    for pt in crate::exact_math::grid_points(others.len(), bound) {
        for (k, &i) in others.iter().enumerate() {
            v[i] = pt[k];
        }
        if domain.contains(&v) {
            return Some(v.clone());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::int;

    fn cusp() -> GradedOperator {
        GradedOperator::parse(&["th"], &[(vec![-2], "th*(th-1)*(th-3)", "th-1")], Some(2)).unwrap()
    }

    #[test]
    fn cusp_operator_values() {
        let s = GeneratedSemigroup::new(1, vec![vec![2], vec![3]]);
        assert!(!s.contains(&[1]));
        assert!(s.contains(&[5]));
        let op = cusp();
        let v = VarList::new(&["x"]);
        for t in 0..=3i64 {
            let p = MultiPoly::monomial(&v, vec![2 * (t as u32 + 1)], int(1));
            let got = op.apply(&p, &s).unwrap();
            let want = MultiPoly::monomial(&v, vec![2 * t as u32], int((2 * t + 2) * (2 * t - 1)));
            assert_eq!(got, want);
        }
        assert_eq!(op.certify_denominators(&s, 10), CertifyOutcome::Certified);
        assert_eq!(
            op.certify_denominators(&Orthant(1), 10),
            CertifyOutcome::Pole {
                piece: 0,
                exponent: vec![1]
            }
        );
    }

    #[test]
    fn pole_and_shift() {
        let v = VarList::new(&["x"]);
        let op = GradedOperator::parse(&["th"], &[(vec![0], "1", "th-1")], None).unwrap();
        let err = op.apply(&MultiPoly::monomial(&v, vec![1], int(1)), &Orthant(1)).unwrap_err();
        assert_eq!(
            err,
            GradedError::Pole {
                piece: 0,
                exponent: vec![1]
            }
        );
        let mult = GradedOperator::parse(&["th"], &[(vec![2], "1", "1")], None).unwrap();
        assert_eq!(
            mult.apply(&MultiPoly::monomial(&v, vec![3], int(1)), &Orthant(1)).unwrap(),
            MultiPoly::monomial(&v, vec![5], int(1))
        );
    }
}
