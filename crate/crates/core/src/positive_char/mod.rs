//! Prime characteristic: polynomials over `F_p`, Frobenius, the Cartier
//! maps `ψ_u`, and test ideals of monomial ideals in polynomial rings and
//! normal semigroup rings.

mod test_ideal;

pub use test_ideal::{
    test_ideal_level, test_ideal_level_brute_force, test_ideal_monomial, test_ideal_summand, SummandTestIdealReport,
    TestIdealReport, DEFAULT_SEARCH_CAP,
};

use crate::exact_math::{MultiPoly, Rational};
use crate::toric::{Semigroup, ToricError};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharPError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic mismatch: {left} vs {right}")]
    CharacteristicMismatch { left: u64, right: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("twist {twist:?} is outside [0, {q})")]
    TwistOutOfRange { twist: Vec<u32>, q: u64 },
    #[error("p^e overflows for p = {p}, e = {e}")]
    LevelTooLarge { p: u64, e: u32 },
    #[error("coefficient {0} has a denominator divisible by p")]
    BadDenominator(String),
    #[error("p = {p} divides the index {index} of the lattice")]
    IndexDivisible { p: u64, index: u64 },
    #[error("lambda must be nonnegative")]
    NegativeLambda,
    #[error("element has exponent {0:?} outside the semigroup")]
    NotInSummand(Vec<u32>),
    #[error("test ideals disagree: intrinsic {intrinsic}, retraction {retraction}, though the summand is Cartier extensible")]
    RetractionMismatch { intrinsic: String, retraction: String },
    #[error(transparent)]
    Toric(#[from] ToricError),
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn level_q(p: u64, e: u32) -> Result<u64, CharPError> {
    p.checked_pow(e).ok_or(CharPError::LevelTooLarge { p, e })
}

/// A polynomial over `F_p` with coefficients in `[1, p−1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldPoly {
    p: u64,
    dim: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl PrimeFieldPoly {
    pub fn zero(p: u64, dim: usize) -> Result<Self, CharPError> {
        if !is_prime(p) {
            return Err(CharPError::NotPrime(p));
        }
        Ok(PrimeFieldPoly {
            p,
            dim,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms(p: u64, dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, i64)>) -> Result<Self, CharPError> {
        let mut out = Self::zero(p, dim)?;
        for (e, c) in terms {
            if e.len() != dim {
                return Err(CharPError::DimensionMismatch { expected: dim, got: e.len() });
            }
            out.add_term(e, c.rem_euclid(p as i64) as u64);
        }
        Ok(out)
    }

    pub fn monomial(p: u64, exps: Vec<u32>) -> Result<Self, CharPError> {
        let dim = exps.len();
        Self::from_terms(p, dim, [(exps, 1)])
    }

    /// Reduction of a rational polynomial modulo `p`.
    pub fn from_rational(p: u64, f: &MultiPoly) -> Result<Self, CharPError> {
        let mut out = Self::zero(p, f.nvars())?;
        let pb = BigInt::from(p);
        for (m, c) in f.terms() {
            let den = (c.denom() % &pb).to_u64().expect("residue fits");
            if den == 0 {
                return Err(CharPError::BadDenominator(c.to_string()));
            }
            let num = (((c.numer() % &pb) + &pb) % &pb).to_u64().expect("residue fits");
            out.add_term(m.0.clone(), num * mod_inverse(den, p) % p);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<u32>, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        let entry = self.terms.entry(e.clone()).or_insert(0);
        *entry = (*entry + c) % p;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<(), CharPError> {
        if self.p != other.p {
            return Err(CharPError::CharacteristicMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.dim != other.dim {
            return Err(CharPError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CharPError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CharPError> {
        self.check(other)?;
        let mut out = PrimeFieldPoly {
            p: self.p,
            dim: self.dim,
            terms: BTreeMap::new(),
        };
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb % self.p);
            }
        }
        Ok(out)
    }

    /// `f^{p^e}`; coefficients are fixed by Frobenius on `F_p`.
    pub fn frobenius(&self, e: u32) -> Result<Self, CharPError> {
        let q = level_q(self.p, e)? as u32;
        Ok(PrimeFieldPoly {
            p: self.p,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.iter().map(|&x| x * q).collect(), c))
                .collect(),
        })
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^{p−2}.
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for PrimeFieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("{c}*x^({})", m.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.p)
    }
}

/// `ψ_u(x^v) = x^{(v−u)/p^e}` when `p^e | v − u` componentwise, else 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierMap {
    p: u64,
    level: u32,
    twist: Vec<u32>,
}

impl CartierMap {
    pub fn new(p: u64, level: u32, twist: Vec<u32>) -> Result<Self, CharPError> {
        if !is_prime(p) {
            return Err(CharPError::NotPrime(p));
        }
        let q = level_q(p, level)?;
        if twist.iter().any(|&u| u as u64 >= q) {
            return Err(CharPError::TwistOutOfRange { twist, q });
        }
        Ok(CartierMap { p, level, twist })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.level)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn twist(&self) -> &[u32] {
        &self.twist
    }

    /// Image exponent of `x^v`, if nonzero.
    pub fn on_exponent(&self, v: &[u32]) -> Option<Vec<u32>> {
        let q = self.q();
        v.iter()
            .zip(&self.twist)
            .map(|(&a, &u)| {
                let a = a as u64;
                let u = u as u64;
                (a >= u && (a - u) % q == 0).then(|| ((a - u) / q) as u32)
            })
            .collect()
    }

    pub fn apply(&self, f: &PrimeFieldPoly) -> Result<PrimeFieldPoly, CharPError> {
        if f.p != self.p {
            return Err(CharPError::CharacteristicMismatch { left: self.p, right: f.p });
        }
        if f.dim != self.twist.len() {
            return Err(CharPError::DimensionMismatch {
                expected: self.twist.len(),
                got: f.dim,
            });
        }
        let mut out = PrimeFieldPoly::zero(f.p, f.dim)?;
        for (m, &c) in &f.terms {
            if let Some(e) = self.on_exponent(m) {
                out.add_term(e, c);
            }
        }
        Ok(out)
    }
}

/// `a ↦ β(ψ(a))` on `K[S]`.
#[derive(Debug, Clone)]
pub struct RestrictedCartier<'a> {
    semigroup: &'a Semigroup,
    map: CartierMap,
}

/// Restricts a Cartier map of the polynomial ring to `K[S]`; requires
/// `p ∤ [ℤ^d : L]`.
pub fn cartier_restrict(s: &Semigroup, map: CartierMap) -> Result<RestrictedCartier<'_>, CharPError> {
    let index = s.index();
    if index % map.p == 0 {
        return Err(CharPError::IndexDivisible { p: map.p, index });
    }
    if map.twist.len() != s.dim() {
        return Err(CharPError::DimensionMismatch {
            expected: s.dim(),
            got: map.twist.len(),
        });
    }
    Ok(RestrictedCartier { semigroup: s, map })
}

impl RestrictedCartier<'_> {
    pub fn apply(&self, a: &PrimeFieldPoly) -> Result<PrimeFieldPoly, CharPError> {
        if let Some((m, _)) = a.terms().find(|(m, _)| !self.semigroup.contains_exp(m)) {
            return Err(CharPError::NotInSummand(m.clone()));
        }
        let img = self.map.apply(a)?;
        let mut out = PrimeFieldPoly::zero(img.p, img.dim)?;
        for (m, &c) in img.terms() {
            if self.semigroup.contains_exp(m) {
                out.add_term(m.clone(), c);
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_lambda(lambda: &Rational) -> Result<(), CharPError> {
    if lambda < &Rational::zero() {
        Err(CharPError::NegativeLambda)
    } else {
        Ok(())
    }
}
