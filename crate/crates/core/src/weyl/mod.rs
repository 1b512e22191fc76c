//! The Weyl algebra `D[s]` over a polynomial ring in normal order
//! (every `x` to the left of every `∂`), its action on polynomials and
//! localizations, and the ideal-preservation test for monomial ideals.

mod graded;
mod localized;
mod preserve;

pub use graded::{
    CertifyOutcome, ExponentDomain, GeneratedSemigroup, GradedError, GradedOperator, GradedPiece, Orthant,
};
pub use preserve::{graded_pieces, preserves_ideal, PreservationReport, PreservationWitness};

use crate::exact_math::{
    falling_factorial_int, parse_expr, ExprAlgebra, Monomial, MultiPoly, ParseError, PolyError, Rational, VarList,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("ring contexts differ: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("operator has s-terms but no s-values were supplied")]
    UnassignedS,
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("polynomial is over [{got}] but the operator acts on [{expected}]")]
    WrongRing { expected: String, got: String },
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Variable names `x_1..x_d` and central parameters `s_1..s_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylContext {
    xvars: VarList,
    svars: VarList,
    ring: VarList,
}

impl WeylContext {
    pub fn new<S: AsRef<str>>(xs: &[S], ss: &[S]) -> Self {
        let mut all: Vec<String> = xs.iter().map(|s| s.as_ref().to_string()).collect();
        all.extend(ss.iter().map(|s| s.as_ref().to_string()));
        WeylContext {
            xvars: VarList::new(xs),
            svars: VarList::new(ss),
            ring: VarList::new(&all),
        }
    }

    pub fn xvars(&self) -> &VarList {
        &self.xvars
    }

    pub fn svars(&self) -> &VarList {
        &self.svars
    }

    /// Variables `x_1..x_d, s_1..s_l` of the coefficient ring `K[x, s]`.
    pub fn ring_vars(&self) -> &VarList {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.xvars.len()
    }

    pub fn l(&self) -> usize {
        self.svars.len()
    }

    fn describe(&self) -> String {
        format!("x=[{}] s=[{}]", self.xvars.names().join(","), self.svars.names().join(","))
    }
}

/// A normal-ordered term `x^a ∂^b s^g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylKey {
    pub d: Monomial,
    pub x: Monomial,
    pub s: Monomial,
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOp {
    ctx: WeylContext,
    terms: BTreeMap<WeylKey, Rational>,
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp({})", self)
    }
}

impl WeylOp {
    pub fn zero(ctx: &WeylContext) -> Self {
        WeylOp {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &WeylContext, c: Rational) -> Self {
        let mut op = Self::zero(ctx);
        op.add_term(
            WeylKey {
                x: Monomial::one(ctx.d()),
                d: Monomial::one(ctx.d()),
                s: Monomial::one(ctx.l()),
            },
            c,
        );
        op
    }

    pub fn one(ctx: &WeylContext) -> Self {
        Self::constant(ctx, Rational::one())
    }

    /// The single term `c x^a ∂^b s^g`.
    pub fn term(ctx: &WeylContext, a: Vec<u32>, b: Vec<u32>, g: Vec<u32>, c: Rational) -> Self {
        assert_eq!(a.len(), ctx.d());
        assert_eq!(b.len(), ctx.d());
        assert_eq!(g.len(), ctx.l());
        let mut op = Self::zero(ctx);
        op.add_term(
            WeylKey {
                x: Monomial(a),
                d: Monomial(b),
                s: Monomial(g),
            },
            c,
        );
        op
    }

    /// `∂_{x_i}`.
    pub fn partial(ctx: &WeylContext, i: usize) -> Self {
        let mut b = vec![0; ctx.d()];
        b[i] = 1;
        Self::term(ctx, vec![0; ctx.d()], b, vec![0; ctx.l()], Rational::one())
    }

    /// Multiplication by a polynomial in `K[x, s]`.
    pub fn from_poly(ctx: &WeylContext, p: &MultiPoly) -> Result<Self, WeylError> {
        let p = if p.vars() == ctx.ring_vars() {
            p.clone()
        } else {
            p.embed_by_name(ctx.ring_vars())?
        };
        let d = ctx.d();
        let mut op = Self::zero(ctx);
        for (m, c) in p.terms() {
            op.add_term(
                WeylKey {
                    x: Monomial(m.0[..d].to_vec()),
                    d: Monomial::one(d),
                    s: Monomial(m.0[d..].to_vec()),
                },
                c.clone(),
            );
        }
        Ok(op)
    }

    /// Parses an operator expression; `d_<x>` denotes `∂_x` and `*` is
    /// composition.
    pub fn parse(src: &str, ctx: &WeylContext) -> Result<Self, WeylError> {
        parse_expr(src)?.eval(&Self::zero(ctx))
    }

    pub fn context(&self) -> &WeylContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, k: WeylKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
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

    /// Total `∂`-order; the zero operator has order 0.
    pub fn order(&self) -> u64 {
        self.terms.keys().map(|k| k.d.degree()).max().unwrap_or(0)
    }

    /// Largest total degree in the `s` variables.
    pub fn s_degree(&self) -> u64 {
        self.terms.keys().map(|k| k.s.degree()).max().unwrap_or(0)
    }

    /// Largest degree in `s_i`.
    pub fn s_degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|k| k.s.0[i]).max().unwrap_or(0)
    }

    pub fn has_s(&self) -> bool {
        self.terms.keys().any(|k| k.s.degree() > 0)
    }

    fn check_ctx(&self, other: &Self) -> Result<(), WeylError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(WeylError::ContextMismatch(self.ctx.describe(), other.ctx.describe()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a * c);
        }
        out
    }

    /// Normal-ordered product `self · other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_ctx(other)?;
        let d = self.ctx.d();
        let mut out = Self::zero(&self.ctx);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let s = k1.s.mul(&k2.s);
                let coeff = c1 * c2;
                // ∂^b x^c = Σ_k Π_i C(b_i,k_i) falling(c_i,k_i) x^{c-k} ∂^{b-k}
                let b = &k1.d.0;
                let cexp = &k2.x.0;
                let ranges: Vec<u32> = (0..d).map(|i| b[i].min(cexp[i])).collect();
                let mut kvec = vec![0u32; d];
                loop {
                    let mut factor = BigInt::one();
                    for i in 0..d {
                        factor *= binom_int(b[i], kvec[i]) * falling_factorial_int(cexp[i] as i64, kvec[i]);
                    }
                    let x: Vec<u32> = (0..d).map(|i| k1.x.0[i] + cexp[i] - kvec[i]).collect();
                    let dd: Vec<u32> = (0..d).map(|i| b[i] - kvec[i] + k2.d.0[i]).collect();
                    out.add_term(
                        WeylKey {
                            x: Monomial(x),
                            d: Monomial(dd),
                            s: s.clone(),
                        },
                        &coeff * Rational::from_integer(factor),
                    );
                    // Next multi-index.
                    let mut i = 0;
                    while i < d {
                        if kvec[i] < ranges[i] {
                            kvec[i] += 1;
                            break;
                        }
                        kvec[i] = 0;
                        i += 1;
                    }
                    if i == d {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same context");
        }
        acc
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, WeylError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Substitutes values for the `s` variables.
    pub fn specialize_s(&self, values: &[Rational]) -> Self {
        assert_eq!(values.len(), self.ctx.l());
        let mut out = Self::zero(&self.ctx);
        for (k, c) in &self.terms {
            let mut coeff = c.clone();
            for (v, &e) in values.iter().zip(&k.s.0) {
                if e > 0 {
                    coeff *= num_traits::pow::pow(v.clone(), e as usize);
                }
            }
            out.add_term(
                WeylKey {
                    x: k.x.clone(),
                    d: k.d.clone(),
                    s: Monomial::one(self.ctx.l()),
                },
                coeff,
            );
        }
        out
    }

    /// Substitutes values for the `s` variables and moves the result to
    /// the context without parameters.
    pub fn specialize_drop_s(&self, values: &[Rational]) -> Self {
        let ctx = WeylContext::new(self.ctx.xvars.names(), &[] as &[String]);
        let mut out = Self::zero(&ctx);
        for (k, c) in &self.specialize_s(values).terms {
            out.add_term(
                WeylKey {
                    x: k.x.clone(),
                    d: k.d.clone(),
                    s: Monomial(vec![]),
                },
                c.clone(),
            );
        }
        out
    }

    /// The order-0 part as a polynomial in `K[x, s]`, if the operator has
    /// order 0.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        if self.order() > 0 {
            return None;
        }
        let mut p = MultiPoly::zero(self.ctx.ring_vars());
        for (k, c) in &self.terms {
            let mut e = k.x.0.clone();
            e.extend(k.s.0.iter().copied());
            p.add_term(Monomial(e), c.clone());
        }
        Some(p)
    }

    /// Acts on `p ∈ K[x, s]` (over [`WeylContext::ring_vars`]); the `s`
    /// variables are central.
    pub fn act(&self, p: &MultiPoly) -> Result<MultiPoly, WeylError> {
        if p.vars() != self.ctx.ring_vars() {
            return Err(WeylError::WrongRing {
                expected: self.ctx.ring_vars().names().join(", "),
                got: p.vars().names().join(", "),
            });
        }
        let d = self.ctx.d();
        let mut out = MultiPoly::zero(self.ctx.ring_vars());
        for (k, c) in &self.terms {
            for (m, a) in p.terms() {
                if (0..d).any(|i| m.0[i] < k.d.0[i]) {
                    continue;
                }
                let mut factor = BigInt::one();
                for i in 0..d {
                    factor *= falling_factorial_int(m.0[i] as i64, k.d.0[i]);
                }
                let mut e = m.0.clone();
                for i in 0..d {
                    e[i] = e[i] - k.d.0[i] + k.x.0[i];
                }
                for j in 0..self.ctx.l() {
                    e[d + j] += k.s.0[j];
                }
                out.add_term(Monomial(e), c * a * Rational::from_integer(factor));
            }
        }
        Ok(out)
    }

    /// Acts on `p ∈ K[x]`. When the operator involves `s`, values must be
    /// supplied.
    pub fn apply(&self, p: &MultiPoly, s_values: Option<&[Rational]>) -> Result<MultiPoly, WeylError> {
        if p.vars() != self.ctx.xvars() {
            return Err(WeylError::WrongRing {
                expected: self.ctx.xvars().names().join(", "),
                got: p.vars().names().join(", "),
            });
        }
        let op = match s_values {
            Some(v) => self.specialize_s(v),
            None if self.has_s() => return Err(WeylError::UnassignedS),
            None => self.clone(),
        };
        let d = self.ctx.d();
        let mut out = MultiPoly::zero(self.ctx.xvars());
        for (k, c) in &op.terms {
            for (m, a) in p.terms() {
                if (0..d).any(|i| m.0[i] < k.d.0[i]) {
                    continue;
                }
                let mut factor = BigInt::one();
                let mut e = m.0.clone();
                for i in 0..d {
                    factor *= falling_factorial_int(m.0[i] as i64, k.d.0[i]);
                    e[i] = e[i] - k.d.0[i] + k.x.0[i];
                }
                out.add_term(Monomial(e), c * a * Rational::from_integer(factor));
            }
        }
        Ok(out)
    }

    /// Lifts a polynomial over `x` only to the ring `K[x, s]`.
    pub fn lift_to_ring(&self, p: &MultiPoly) -> Result<MultiPoly, WeylError> {
        Ok(p.embed_by_name(self.ctx.ring_vars())?)
    }
}

fn binom_int(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let xn = self.ctx.xvars.names();
        let sn = self.ctx.svars.names();
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
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
            let mut push = |name: String, e: u32| match e {
                0 => {}
                1 => factors.push(name),
                _ => factors.push(format!("{name}^{e}")),
            };
            for (j, &e) in k.s.0.iter().enumerate() {
                push(sn[j].clone(), e);
            }
            for (i, &e) in k.x.0.iter().enumerate() {
                push(xn[i].clone(), e);
            }
            for (i, &e) in k.d.0.iter().enumerate() {
                push(format!("d_{}", xn[i]), e);
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

impl ExprAlgebra for WeylOp {
    type Error = WeylError;

    fn from_rational(&self, c: &Rational) -> Self {
        Self::constant(&self.ctx, c.clone())
    }

    fn from_symbol(&self, name: &str) -> Result<Self, WeylError> {
        let ctx = &self.ctx;
        if let Some(i) = ctx.xvars.index_of(name) {
            let mut a = vec![0; ctx.d()];
            a[i] = 1;
            return Ok(Self::term(ctx, a, vec![0; ctx.d()], vec![0; ctx.l()], Rational::one()));
        }
        if let Some(j) = ctx.svars.index_of(name) {
            let mut g = vec![0; ctx.l()];
            g[j] = 1;
            return Ok(Self::term(ctx, vec![0; ctx.d()], vec![0; ctx.d()], g, Rational::one()));
        }
        if let Some(rest) = name.strip_prefix("d_") {
            if let Some(i) = ctx.xvars.index_of(rest) {
                return Ok(Self::partial(ctx, i));
            }
        }
        Err(WeylError::UnknownSymbol(name.to_string()))
    }

    fn add(a: Self, b: Self) -> Self {
        a.try_add(&b).expect("same context")
    }

    fn neg(a: Self) -> Self {
        a.scale(&-Rational::one())
    }

    fn mul(a: Self, b: Self) -> Self {
        a.try_mul(&b).expect("same context")
    }

    fn pow(a: &Self, k: u32, _one: Self) -> Self {
        WeylOp::pow(a, k)
    }
}
