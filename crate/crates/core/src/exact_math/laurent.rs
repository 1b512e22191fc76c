//! Elements `h / F^k` of a localization, with `F = f_1 ⋯ f_l`.

use super::poly::MultiPoly;
use std::fmt;

#[derive(Clone, Debug)]
pub struct LaurentLoc {
    numerator: MultiPoly,
    k: u32,
    factors: Vec<MultiPoly>,
    base: MultiPoly,
}

impl LaurentLoc {
    /// `h / (f_1 ⋯ f_l)^k`.
    pub fn new(numerator: MultiPoly, k: u32, factors: &[MultiPoly]) -> Self {
        let base = MultiPoly::product(numerator.vars(), factors);
        LaurentLoc {
            numerator,
            k,
            factors: factors.to_vec(),
            base,
        }
    }

    pub fn from_poly(h: MultiPoly, factors: &[MultiPoly]) -> Self {
        Self::new(h, 0, factors)
    }

    pub(crate) fn with_base(numerator: MultiPoly, k: u32, factors: Vec<MultiPoly>, base: MultiPoly) -> Self {
        LaurentLoc {
            numerator,
            k,
            factors,
            base,
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denom_exponent(&self) -> u32 {
        self.k
    }

    pub fn factors(&self) -> &[MultiPoly] {
        &self.factors
    }

    /// The product `F` of the declared tuple.
    pub fn base(&self) -> &MultiPoly {
        &self.base
    }

    pub fn same_tuple(&self, other: &Self) -> bool {
        self.base == other.base
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Rewrites with denominator exponent `k >= self.k`.
    pub fn raise_to(&self, k: u32) -> Self {
        assert!(k >= self.k);
        let num = &self.numerator * &self.base.pow(k - self.k);
        Self::with_base(num, k, self.factors.clone(), self.base.clone())
    }

    /// Cancels common powers of `F` from numerator and denominator.
    pub fn reduce(&self) -> Self {
        let mut num = self.numerator.clone();
        let mut k = self.k;
        if num.is_zero() {
            k = 0;
        }
        while k > 0 {
            match num.div_exact(&self.base) {
                Some(q) => {
                    num = q;
                    k -= 1;
                }
                None => break,
            }
        }
        Self::with_base(num, k, self.factors.clone(), self.base.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.k.max(other.k);
        let a = self.raise_to(k);
        let b = other.raise_to(k);
        Self::with_base(&a.numerator + &b.numerator, k, self.factors.clone(), self.base.clone())
    }

    pub fn neg(&self) -> Self {
        Self::with_base(self.numerator.neg(), self.k, self.factors.clone(), self.base.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::with_base(
            &self.numerator * &other.numerator,
            self.k + other.k,
            self.factors.clone(),
            self.base.clone(),
        )
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        Self::with_base(&self.numerator * p, self.k, self.factors.clone(), self.base.clone())
    }

    /// Divides by `F^j`.
    pub fn div_base_pow(&self, j: u32) -> Self {
        Self::with_base(self.numerator.clone(), self.k + j, self.factors.clone(), self.base.clone())
    }

    /// The polynomial value, if the element lies in the unlocalized ring.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let r = self.reduce();
        if r.k == 0 {
            Some(r.numerator)
        } else {
            None
        }
    }
}

impl PartialEq for LaurentLoc {
    fn eq(&self, other: &Self) -> bool {
        let lhs = &self.numerator * &self.base.pow(other.k);
        let rhs = &other.numerator * &other.base.pow(self.k);
        lhs == rhs
    }
}

impl fmt::Display for LaurentLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})^{}", self.numerator, self.base, self.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::VarList;

    #[test]
    fn cross_multiplication_equality() {
        let v = VarList::new(&["x", "y"]);
        let f = MultiPoly::parse("x*y", &v).unwrap();
        let a = LaurentLoc::new(MultiPoly::parse("x", &v).unwrap(), 1, &[f.clone()]);
        let b = LaurentLoc::new(MultiPoly::parse("x^2*y", &v).unwrap(), 2, &[f.clone()]);
        assert_eq!(a, b);
        assert_eq!(b.reduce().denom_exponent(), 1);
        let c = LaurentLoc::new(MultiPoly::parse("y", &v).unwrap(), 1, &[f]);
        assert_ne!(a, c);
    }
}
