//! Functional equations and their formal and grid-specialized checks.
//!
//! Every kind is normalized to the form
//! `Σ_c δ_c • (Π_{c_i<0} binom(s_i, −c_i)) f^c g f^s = b(s_1+⋯+s_l) g f^s`,
//! where a principal equation is the case `l = 1`, `c = (1)`, `g = 1`.

use super::{fs_apply, FsContext, FsElement, FsError};
use crate::exact_math::{binomial_poly, grid_points, LaurentLoc, MultiPoly, Rational, VarList};
use crate::monomial_ideal::MonomialIdeal;
use crate::weyl::{ExponentDomain, GradedOperator, Orthant, WeylOp};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeqKind {
    Principal,
    Relative,
    BmsMulti,
}

impl FeqKind {
    pub fn name(&self) -> &'static str {
        match self {
            FeqKind::Principal => "principal",
            FeqKind::Relative => "relative",
            FeqKind::BmsMulti => "bmsMulti",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "principal" => Some(FeqKind::Principal),
            "relative" => Some(FeqKind::Relative),
            "bmsMulti" => Some(FeqKind::BmsMulti),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeqOperator {
    Weyl(WeylOp),
    Graded(GradedOperator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeqTerm {
    pub c: Vec<i64>,
    pub op: FeqOperator,
}

#[derive(Debug, Clone)]
pub struct FeqSpec {
    ctx: Arc<FsContext>,
    kind: FeqKind,
    g: Option<MultiPoly>,
    terms: Vec<FeqTerm>,
    b: MultiPoly,
}

impl FeqSpec {
    /// Validates and assembles a functional equation; `b` is a polynomial
    /// in the single variable `s`.
    pub fn new(
        ctx: &Arc<FsContext>,
        kind: FeqKind,
        g: Option<MultiPoly>,
        terms: Vec<FeqTerm>,
        b: MultiPoly,
    ) -> Result<Self, FsError> {
        let l = ctx.l();
        for t in &terms {
            if t.c.len() != l || t.c.iter().sum::<i64>() != 1 {
                return Err(FsError::MalformedC(t.c.clone()));
            }
            if let FeqOperator::Weyl(op) = &t.op {
                if op.context() != ctx.weyl() {
                    return Err(FsError::ContextMismatch);
                }
            }
        }
        match kind {
            FeqKind::Principal | FeqKind::Relative => {
                if l != 1 || terms.len() != 1 {
                    return Err(FsError::MalformedC(terms.first().map(|t| t.c.clone()).unwrap_or_default()));
                }
                if kind == FeqKind::Relative && g.is_none() {
                    return Err(FsError::MissingG);
                }
            }
            FeqKind::BmsMulti => {}
        }
        if b.is_zero() || b.nvars() != 1 {
            return Err(FsError::BadB);
        }
        let g = match g {
            Some(p) => Some(p.embed_by_name(ctx.weyl().xvars())?),
            None => None,
        };
        Ok(FeqSpec {
            ctx: ctx.clone(),
            kind,
            g,
            terms,
            b,
        })
    }

    pub fn context(&self) -> &Arc<FsContext> {
        &self.ctx
    }

    pub fn kind(&self) -> FeqKind {
        self.kind
    }

    pub fn g(&self) -> Option<&MultiPoly> {
        self.g.as_ref()
    }

    pub fn terms(&self) -> &[FeqTerm] {
        &self.terms
    }

    pub fn b(&self) -> &MultiPoly {
        &self.b
    }

    pub(crate) fn term_coefficient(&self, c: &[i64]) -> LaurentLoc {
        term_coefficient(&self.ctx, c, self.g.as_ref())
    }

    pub(crate) fn rhs_poly(&self) -> MultiPoly {
        let ring = self.ctx.weyl().ring_vars();
        let mut out = MultiPoly::zero(ring);
        for (m, c) in self.b.terms() {
            out = &out + &rhs_basis(&self.ctx, m.0[0], self.g.as_ref()).scale(c);
        }
        out
    }
}

/// `Π_{c_i<0} binom(s_i, −c_i) · f^c · g` over `K[x, s]`.
pub(crate) fn term_coefficient(ctx: &FsContext, c: &[i64], g: Option<&MultiPoly>) -> LaurentLoc {
    let ring = ctx.weyl().ring_vars();
    let d = ctx.d();
    let mut poly = MultiPoly::one(ring);
    for (i, &ci) in c.iter().enumerate() {
        if ci < 0 {
            poly = &poly * &binomial_poly(ring, d + i, (-ci) as u32);
        }
    }
    if let Some(g) = g {
        poly = &poly * &g.embed_by_name(ring).expect("g over ambient variables");
    }
    ctx.f_power(c).mul_poly(&poly)
}

/// `(s_1 + ⋯ + s_l)^i · g` over `K[x, s]`.
pub(crate) fn rhs_basis(ctx: &FsContext, i: u32, g: Option<&MultiPoly>) -> MultiPoly {
    let ring = ctx.weyl().ring_vars();
    let d = ctx.d();
    let mut sigma = MultiPoly::zero(ring);
    for j in 0..ctx.l() {
        sigma = &sigma + &MultiPoly::var_index(ring, d + j);
    }
    let mut out = sigma.pow(i);
    if let Some(g) = g {
        out = &out * &g.embed_by_name(ring).expect("g over ambient variables");
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormalVerdict {
    Verified,
    /// `LHS − RHS`, nonzero.
    Refuted { discrepancy: FsElement },
}

/// Checks the equation as an identity in `M[f^s]`.
pub fn verify_feq_formal(spec: &FeqSpec) -> Result<FormalVerdict, FsError> {
    let ctx = &spec.ctx;
    let mut lhs = FsElement::from_loc(ctx, LaurentLoc::new(MultiPoly::zero(ctx.weyl().ring_vars()), 0, &[]));
    for term in &spec.terms {
        let FeqOperator::Weyl(op) = &term.op else {
            return Err(FsError::FormalUnsupported);
        };
        let v = FsElement::from_loc(ctx, spec.term_coefficient(&term.c));
        lhs = lhs.try_add(&fs_apply(op, &v)?)?;
    }
    let rhs = FsElement::new(ctx, &spec.rhs_poly(), 0)?;
    let diff = lhs.try_sub(&rhs)?;
    if diff.is_zero() {
        Ok(FormalVerdict::Verified)
    } else {
        Ok(FormalVerdict::Refuted {
            discrepancy: diff.reduced(),
        })
    }
}

/// Degree bound for the grid: the largest s-degree the difference of the
/// two sides can reach, per parameter.
pub fn grid_bound(spec: &FeqSpec) -> Result<u32, FsError> {
    let mut m = spec.b.total_degree().unwrap_or(0) as u32;
    for term in &spec.terms {
        let neg: i64 = term.c.iter().filter(|&&c| c < 0).map(|c| -c).sum();
        let (sdeg, ord) = match &term.op {
            FeqOperator::Weyl(op) => (op.s_degree() as u32, op.order() as u32),
            FeqOperator::Graded(op) => (
                0,
                op.declared_order.ok_or(FsError::UndeclaredOrder)?,
            ),
        };
        m = m.max(sdeg + ord + neg as u32);
    }
    Ok(m)
}

/// How operators act on specialized elements of a ring `A`, and how zero
/// is decided there. Elements are localizations `h / F^k` of `K[x]`.
pub trait RingAction: Sync {
    fn apply(&self, op: &FeqOperator, t: &[i64], elem: &LaurentLoc) -> Result<LaurentLoc, String>;
    fn is_zero(&self, elem: &LaurentLoc) -> bool;
}

fn specialized_weyl(op: &WeylOp, t: &[i64]) -> WeylOp {
    let vals: Vec<Rational> = t.iter().map(|&v| Rational::from_integer(v.into())).collect();
    op.specialize_drop_s(&vals)
}

/// The polynomial ring itself.
pub struct PolynomialRingAction;

impl RingAction for PolynomialRingAction {
    fn apply(&self, op: &FeqOperator, t: &[i64], elem: &LaurentLoc) -> Result<LaurentLoc, String> {
        match op {
            FeqOperator::Weyl(w) => specialized_weyl(w, t).apply_localized(elem).map_err(|e| e.to_string()),
            FeqOperator::Graded(g) => {
                let p = elem.as_poly().ok_or("graded operators act on polynomials only")?;
                let r = g.apply(&p, &Orthant(p.nvars())).map_err(|e| e.to_string())?;
                Ok(LaurentLoc::new(r, 0, elem.factors()))
            }
        }
    }

    fn is_zero(&self, elem: &LaurentLoc) -> bool {
        elem.is_zero()
    }
}

/// A quotient `K[x]/I` by a monomial ideal; operators must preserve `I`.
pub struct QuotientRingAction {
    pub ideal: MonomialIdeal,
}

impl QuotientRingAction {
    fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(p.vars());
        for (m, c) in p.terms() {
            if !self.ideal.contains(&m.0) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }
}

impl RingAction for QuotientRingAction {
    fn apply(&self, op: &FeqOperator, t: &[i64], elem: &LaurentLoc) -> Result<LaurentLoc, String> {
        let p = elem
            .as_poly()
            .ok_or("localized elements are not supported over a quotient ring")?;
        let p = self.reduce(&p);
        let r = match op {
            FeqOperator::Weyl(w) => specialized_weyl(w, t).apply(&p, None).map_err(|e| e.to_string())?,
            FeqOperator::Graded(g) => g.apply(&p, &Orthant(p.nvars())).map_err(|e| e.to_string())?,
        };
        Ok(LaurentLoc::new(self.reduce(&r), 0, elem.factors()))
    }

    fn is_zero(&self, elem: &LaurentLoc) -> bool {
        match elem.as_poly() {
            Some(p) => self.reduce(&p).is_zero(),
            None => elem.is_zero(),
        }
    }
}

/// A monomial subring with exponents in `domain`; Weyl operators act by
/// `β ∘ δ`, where `β` keeps the terms with exponents in the domain.
pub struct SemigroupRingAction {
    pub domain: Arc<dyn ExponentDomain>,
}

impl SemigroupRingAction {
    fn split(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(p.vars());
        for (m, c) in p.terms() {
            if self.domain.contains(&m.0) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }
}

impl RingAction for SemigroupRingAction {
    fn apply(&self, op: &FeqOperator, t: &[i64], elem: &LaurentLoc) -> Result<LaurentLoc, String> {
        match op {
            FeqOperator::Weyl(w) => {
                let r = specialized_weyl(w, t).apply_localized(elem).map_err(|e| e.to_string())?;
                Ok(LaurentLoc::new(self.split(r.numerator()), r.denom_exponent(), elem.factors()))
            }
            FeqOperator::Graded(g) => {
                let p = elem.as_poly().ok_or("graded operators act on polynomials only")?;
                let r = g.apply(&p, self.domain.as_ref()).map_err(|e| e.to_string())?;
                Ok(LaurentLoc::new(r, 0, elem.factors()))
            }
        }
    }

    fn is_zero(&self, elem: &LaurentLoc) -> bool {
        elem.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecializedVerdict {
    Verified { grid_bound: u32, points: usize },
    /// The lexicographically smallest grid point where the sides differ.
    Refuted { t: Vec<i64>, lhs: LaurentLoc, rhs: LaurentLoc },
}

/// `f^e` over `K[x]` for an integer vector `e`.
fn f_power_x(ctx: &FsContext, e: &[i64]) -> LaurentLoc {
    let xv = ctx.weyl().xvars();
    let f = ctx.f();
    let mut num = MultiPoly::one(xv);
    let mut k = 0;
    for (i, &ei) in e.iter().enumerate() {
        if ei > 0 {
            num = &num * &f[i].pow(ei as u32);
        } else if ei < 0 {
            for (j, fj) in f.iter().enumerate() {
                if j != i {
                    num = &num * &fj.pow((-ei) as u32);
                }
            }
            k += (-ei) as u32;
        }
    }
    LaurentLoc::new(num, k, f)
}

fn binom_int(n: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k as i64 {
        acc = acc * Rational::from_integer(BigInt::from(n - j)) / Rational::from_integer(BigInt::from(j + 1));
    }
    acc
}

/// Checks `Σ_c δ_c(t) • binom · f^{c+t} g = b(|t|) f^t g` for every
/// `t ∈ {0..m}^l`, with `m` from [`grid_bound`] unless given.
pub fn verify_feq_specialized(
    spec: &FeqSpec,
    action: &dyn RingAction,
    m: Option<u32>,
) -> Result<SpecializedVerdict, FsError> {
    let m = match m {
        Some(m) => m,
        None => grid_bound(spec)?,
    };
    let ctx = &spec.ctx;
    let l = ctx.l();
    let points = grid_points(l, m);
    let xv: VarList = ctx.weyl().xvars().clone();
    let g = spec.g.clone().unwrap_or_else(|| MultiPoly::one(&xv));
    let check = |pt: &Vec<u32>| -> Result<Option<(LaurentLoc, LaurentLoc)>, FsError> {
        let t: Vec<i64> = pt.iter().map(|&v| v as i64).collect();
        let mut lhs = LaurentLoc::new(MultiPoly::zero(&xv), 0, ctx.f());
        for term in &spec.terms {
            let mut coeff = Rational::one();
            for (i, &ci) in term.c.iter().enumerate() {
                if ci < 0 {
                    coeff *= binom_int(t[i], (-ci) as u32);
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let e: Vec<i64> = term.c.iter().zip(&t).map(|(a, b)| a + b).collect();
            let elem = f_power_x(ctx, &e).mul_poly(&g.scale(&coeff));
            let img = action
                .apply(&term.op, &t, &elem)
                .map_err(|message| FsError::Callback { t: t.clone(), message })?;
            lhs = lhs.add(&img);
        }
        let sum: i64 = t.iter().sum();
        let bval = spec.b.eval_all(&[Rational::from_integer(sum.into())]);
        let rhs = f_power_x(ctx, &t).mul_poly(&g.scale(&bval));
        if action.is_zero(&lhs.sub(&rhs)) {
            Ok(None)
        } else {
            Ok(Some((lhs.reduce(), rhs.reduce())))
        }
    };
    let results: Vec<_> = points.par_iter().map(check).collect();
    for (pt, res) in points.iter().zip(results) {
        if let Some((lhs, rhs)) = res? {
            return Ok(SpecializedVerdict::Refuted {
                t: pt.iter().map(|&v| v as i64).collect(),
                lhs,
                rhs,
            });
        }
    }
    Ok(SpecializedVerdict::Verified {
        grid_bound: m,
        points: points.len(),
    })
}
