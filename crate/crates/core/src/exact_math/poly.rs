//! Sparse multivariate polynomials with exact rational coefficients.

use super::expr::{parse_expr, ExprAlgebra, ParseError};
use super::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VarMismatch { left: String, right: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

/// Ordered list of variable names, cheap to clone and compare.
#[derive(Clone)]
pub struct VarList(Arc<[String]>);

impl VarList {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        VarList(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn joined(&self) -> String {
        self.0.join(", ")
    }
}

impl PartialEq for VarList {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarList {}

impl fmt::Debug for VarList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    vars: VarList,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        // Constants compare equal across variable lists.
        self.is_constant() && other.is_constant() && self.constant_term() == other.constant_term()
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl MultiPoly {
    pub fn zero(vars: &VarList) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarList) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarList, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn var(vars: &VarList, name: &str) -> Result<Self, PolyError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &VarList, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn monomial(vars: &VarList, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length mismatch");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(vars: &VarList, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Parses an expression over the given variables.
    pub fn parse(src: &str, vars: &VarList) -> Result<Self, PolyError> {
        parse_expr(src)?.eval(&Self::zero(vars))
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch {
                left: self.vars.joined(),
                right: other.vars.joined(),
            })
        }
    }

    /// Reinterprets a constant over another variable list.
    fn lift_constant(&self, vars: &VarList) -> Option<Self> {
        if self.is_constant() {
            Some(Self::constant(vars, self.constant_term()))
        } else {
            None
        }
    }

    fn align(&self, other: &Self) -> Result<(Self, Self), PolyError> {
        if self.compatible(other).is_ok() {
            return Ok((self.clone(), other.clone()));
        }
        if let Some(a) = self.lift_constant(&other.vars) {
            return Ok((a, other.clone()));
        }
        if let Some(b) = other.lift_constant(&self.vars) {
            return Ok((self.clone(), b));
        }
        Err(self.compatible(other).unwrap_err())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        let (mut a, b) = self.align(other)?;
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let (a, b) = self.align(other)?;
        let mut out = Self::zero(&a.vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by `c * x^e`.
    pub fn mul_term(&self, e: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.mul(e), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Substitutes the given values; unassigned variables remain.
    pub fn eval_partial(&self, assignment: &[(usize, Rational)]) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut coeff = c.clone();
            for (i, val) in assignment {
                let e = m2.0[*i];
                if e > 0 {
                    coeff *= num_traits::pow::pow(val.clone(), e as usize);
                    m2.0[*i] = 0;
                }
            }
            out.add_term(m2, coeff);
        }
        out
    }

    /// Partial evaluation by variable name. Unknown names are an error.
    pub fn eval_named(&self, assignment: &[(&str, Rational)]) -> Result<Self, PolyError> {
        let idx = assignment
            .iter()
            .map(|(n, v)| {
                self.vars
                    .index_of(n)
                    .map(|i| (i, v.clone()))
                    .ok_or_else(|| PolyError::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.eval_partial(&idx))
    }

    /// Full evaluation at a point.
    pub fn eval_all(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow::pow(v.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Full evaluation at an integer point.
    pub fn eval_int(&self, point: &[i64]) -> Rational {
        let pt: Vec<Rational> = point.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.eval_all(&pt)
    }

    /// Replaces variable `i` by `q` (which must share the variable list).
    pub fn substitute(&self, i: usize, q: &MultiPoly) -> Self {
        let mut out = Self::zero(&self.vars);
        let mut powers: Vec<MultiPoly> = vec![Self::one(&self.vars)];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * q;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            out = &out + &powers[e].mul_term(&rest, c);
        }
        out
    }

    /// Moves the polynomial into another variable list; `map[i]` is the
    /// target index of source variable `i`.
    pub fn embed(&self, target: &VarList, map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Embeds by matching variable names; every source name must exist in
    /// `target`.
    pub fn embed_by_name(&self, target: &VarList) -> Result<Self, PolyError> {
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(j),
                None => {
                    if self.terms.keys().any(|m| m.0[i] > 0) {
                        return Err(PolyError::UnknownVariable(name.clone()));
                    }
                    map.push(0);
                }
            }
        }
        Ok(self.embed(target, &map))
    }

    /// Exact quotient `self / d` if `d` divides `self`, else `None`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        // A single polynomial is a Gröbner basis of its ideal, so the
        // remainder is zero exactly when d divides self.
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let e = Monomial(m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
            let q = c / &lc;
            rem = &rem - &d.mul_term(&e, &q);
            quot.add_term(e, q);
        }
        Some(quot)
    }

    /// Multiplies out a product of polynomials.
    pub fn product<'a, I: IntoIterator<Item = &'a MultiPoly>>(vars: &VarList, items: I) -> Self {
        let mut acc = Self::one(vars);
        for p in items {
            acc = &acc * p;
        }
        acc
    }

    /// Largest denominator lcm of the coefficients, used for clearing
    /// fractions.
    pub fn coeff_denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars.names()[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", a, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl ExprAlgebra for MultiPoly {
    type Error = PolyError;

    fn from_rational(&self, c: &Rational) -> Self {
        Self::constant(&self.vars, c.clone())
    }

    fn from_symbol(&self, name: &str) -> Result<Self, PolyError> {
        Self::var(&self.vars, name)
    }

    fn add(a: Self, b: Self) -> Self {
        &a + &b
    }

    fn neg(a: Self) -> Self {
        MultiPoly::neg(&a)
    }

    fn mul(a: Self, b: Self) -> Self {
        &a * &b
    }

    fn pow(a: &Self, k: u32, _one: Self) -> Self {
        MultiPoly::pow(a, k)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<'a> std::ops::$trait<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}
