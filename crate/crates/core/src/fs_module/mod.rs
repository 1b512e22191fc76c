//! The module `M[f^s]`: elements `h/F^k · f_1^{s_1} ⋯ f_l^{s_l}` with
//! `F = f_1 ⋯ f_l`, the `D[s]`-action, exponent specialization, and
//! verification of functional equations.

mod feq;

pub use crate::exact_math::{grid_witness, grid_zero_test, interpolate_from_grid, GridError};
pub use feq::{
    grid_bound, verify_feq_formal, verify_feq_specialized, FeqKind, FeqOperator, FeqSpec, FeqTerm, FormalVerdict,
    PolynomialRingAction, QuotientRingAction, RingAction, SemigroupRingAction, SpecializedVerdict,
};
pub(crate) use feq::{rhs_basis, term_coefficient};

use crate::exact_math::{LaurentLoc, MultiPoly, PolyError, Rational};
use crate::weyl::{WeylContext, WeylError, WeylOp};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FsError {
    #[error("the f-tuple must be nonempty")]
    EmptyTuple,
    #[error("f_{0} is zero")]
    ZeroEntry(usize),
    #[error("variable name '{0}' collides with a parameter name")]
    NameCollision(String),
    #[error("elements or operators belong to different contexts")]
    ContextMismatch,
    #[error("c-vector {0:?} does not have entries summing to 1 with length equal to the tuple length")]
    MalformedC(Vec<i64>),
    #[error("formal verification needs Weyl algebra operators; graded operators are checked on the grid")]
    FormalUnsupported,
    #[error("relative equations need g")]
    MissingG,
    #[error("graded operators need a declared order to size the grid")]
    UndeclaredOrder,
    #[error("b must be a nonzero polynomial in the single variable s")]
    BadB,
    #[error("action failed at t = {t:?}: {message}")]
    Callback { t: Vec<i64>, message: String },
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Ambient variables, the tuple `f`, and parameters `s`.
#[derive(Debug)]
pub struct FsContext {
    weyl: WeylContext,
    f: Vec<MultiPoly>,
    f_ring: Vec<MultiPoly>,
    base: MultiPoly,
    /// `∂_r F`, by variable.
    base_partials: Vec<MultiPoly>,
    /// `Σ_i s_i ∂_r f_i · F/f_i`, by variable.
    log_terms: Vec<MultiPoly>,
    /// `F / f_i`.
    cofactors: Vec<MultiPoly>,
}

/// Default parameter names: `s` for a single function, `s1..sl` otherwise.
pub fn default_s_names(l: usize) -> Vec<String> {
    if l == 1 {
        vec!["s".to_string()]
    } else {
        (1..=l).map(|i| format!("s{i}")).collect()
    }
}

impl FsContext {
    pub fn new<S: AsRef<str>>(x_names: &[S], f: Vec<MultiPoly>) -> Result<Arc<Self>, FsError> {
        if f.is_empty() {
            return Err(FsError::EmptyTuple);
        }
        let s_names = default_s_names(f.len());
        for x in x_names {
            if s_names.iter().any(|s| s == x.as_ref()) {
                return Err(FsError::NameCollision(x.as_ref().to_string()));
            }
        }
        let weyl = WeylContext::new(
            &x_names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>(),
            &s_names,
        );
        let f: Vec<MultiPoly> = f
            .iter()
            .map(|p| p.embed_by_name(weyl.xvars()))
            .collect::<Result<_, _>>()?;
        if let Some(i) = f.iter().position(|p| p.is_zero()) {
            return Err(FsError::ZeroEntry(i + 1));
        }
        let ring = weyl.ring_vars().clone();
        let f_ring: Vec<MultiPoly> = f.iter().map(|p| p.embed_by_name(&ring)).collect::<Result<_, _>>()?;
        let base = MultiPoly::product(&ring, &f_ring);
        let d = weyl.d();
        let cofactors: Vec<MultiPoly> = (0..f.len())
            .map(|i| {
                let others: Vec<&MultiPoly> = f_ring.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
                MultiPoly::product(&ring, others)
            })
            .collect();
        let base_partials: Vec<MultiPoly> = (0..d).map(|r| base.derivative(r)).collect();
        let log_terms: Vec<MultiPoly> = (0..d)
            .map(|r| {
                let mut acc = MultiPoly::zero(&ring);
                for i in 0..f.len() {
                    let s = MultiPoly::var_index(&ring, d + i);
                    acc = &acc + &(&(&s * &f_ring[i].derivative(r)) * &cofactors[i]);
                }
                acc
            })
            .collect();
        Ok(Arc::new(FsContext {
            weyl,
            f,
            f_ring,
            base,
            base_partials,
            log_terms,
            cofactors,
        }))
    }

    pub fn weyl(&self) -> &WeylContext {
        &self.weyl
    }

    pub fn l(&self) -> usize {
        self.f.len()
    }

    pub fn d(&self) -> usize {
        self.weyl.d()
    }

    /// The tuple over the ambient variables.
    pub fn f(&self) -> &[MultiPoly] {
        &self.f
    }

    /// The tuple over the ambient variables and parameters.
    pub fn f_ring(&self) -> &[MultiPoly] {
        &self.f_ring
    }

    pub fn base(&self) -> &MultiPoly {
        &self.base
    }

    /// `f^c` for an integer vector `c` as a localized element over
    /// `K[x, s]`; negative entries use `f_i^{-1} = (F/f_i)/F`.
    pub fn f_power(&self, c: &[i64]) -> LaurentLoc {
        assert_eq!(c.len(), self.l());
        let ring = self.weyl.ring_vars();
        let mut num = MultiPoly::one(ring);
        let mut k = 0u32;
        for (i, &ci) in c.iter().enumerate() {
            if ci > 0 {
                num = &num * &self.f_ring[i].pow(ci as u32);
            } else if ci < 0 {
                num = &num * &self.cofactors[i].pow((-ci) as u32);
                k += (-ci) as u32;
            }
        }
        LaurentLoc::with_base(num, k, self.f_ring.clone(), self.base.clone())
    }

    fn loc(&self, num: MultiPoly, k: u32) -> LaurentLoc {
        LaurentLoc::with_base(num, k, self.f_ring.clone(), self.base.clone())
    }

    /// `∂_r` applied to `coeff · f^s`, returned as the new coefficient.
    fn partial_step(&self, r: usize, coeff: &LaurentLoc) -> LaurentLoc {
        let h = coeff.numerator();
        let k = coeff.denom_exponent();
        let kk = Rational::from_integer(k.into());
        let mult = &self.log_terms[r] - &self.base_partials[r].scale(&kk);
        let num = &(&self.base * &h.derivative(r)) + &(h * &mult);
        self.loc(num, k + 1)
    }

    /// `∂^β` applied to `coeff · f^s` for every `|β| ≤ max_order`.
    pub(crate) fn all_partials(&self, coeff: &LaurentLoc, max_order: u32) -> BTreeMap<Vec<u32>, LaurentLoc> {
        let d = self.d();
        let mut out = BTreeMap::new();
        out.insert(vec![0; d], self.loc(coeff.numerator().clone(), coeff.denom_exponent()));
        let mut frontier = vec![vec![0u32; d]];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for b in &frontier {
                // Extend only at or after the last nonzero index so each β
                // is produced once.
                let start = b.iter().rposition(|&e| e > 0).unwrap_or(0);
                for r in start..d {
                    let mut nb = b.clone();
                    nb[r] += 1;
                    let v = self.partial_step(r, &out[b]);
                    out.insert(nb.clone(), v);
                    next.push(nb);
                }
            }
            frontier = next;
        }
        out
    }
}

/// An element `coeff · f^s` of `M[f^s]`.
#[derive(Clone, Debug)]
pub struct FsElement {
    ctx: Arc<FsContext>,
    coeff: LaurentLoc,
}

impl FsElement {
    /// `h / F^k · f^s` with `h` over the ambient variables and parameters
    /// (or the ambient variables alone).
    pub fn new(ctx: &Arc<FsContext>, h: &MultiPoly, k: u32) -> Result<Self, FsError> {
        let h = h.embed_by_name(ctx.weyl.ring_vars())?;
        Ok(FsElement {
            ctx: ctx.clone(),
            coeff: ctx.loc(h, k),
        })
    }

    pub fn from_loc(ctx: &Arc<FsContext>, coeff: LaurentLoc) -> Self {
        FsElement {
            ctx: ctx.clone(),
            coeff: ctx.loc(coeff.numerator().clone(), coeff.denom_exponent()),
        }
    }

    /// The generator `f^s`.
    pub fn generator(ctx: &Arc<FsContext>) -> Self {
        FsElement {
            ctx: ctx.clone(),
            coeff: ctx.loc(MultiPoly::one(ctx.weyl.ring_vars()), 0),
        }
    }

    pub fn context(&self) -> &Arc<FsContext> {
        &self.ctx
    }

    pub fn coeff(&self) -> &LaurentLoc {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Degree of the coefficient numerator in `s_i`.
    pub fn s_degree_in(&self, i: usize) -> u32 {
        self.coeff.numerator().degree_in(self.ctx.d() + i)
    }

    fn check(&self, other: &Self) -> Result<(), FsError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(FsError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FsError> {
        self.check(other)?;
        Ok(FsElement {
            ctx: self.ctx.clone(),
            coeff: self.coeff.add(&other.coeff),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FsError> {
        self.check(other)?;
        Ok(FsElement {
            ctx: self.ctx.clone(),
            coeff: self.coeff.sub(&other.coeff),
        })
    }

    pub fn mul_loc(&self, c: &LaurentLoc) -> Self {
        FsElement {
            ctx: self.ctx.clone(),
            coeff: self.coeff.mul(c),
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        FsElement {
            ctx: self.ctx.clone(),
            coeff: self.coeff.mul_poly(p),
        }
    }

    /// Same element with common powers of `F` cancelled.
    pub fn reduced(&self) -> Self {
        FsElement {
            ctx: self.ctx.clone(),
            coeff: self.coeff.reduce(),
        }
    }

    /// Exponent specialization `s ↦ t`, `f^s ↦ f^t`, as an element of the
    /// localization of `K[x]`.
    pub fn specialize(&self, t: &[i64]) -> LaurentLoc {
        assert_eq!(t.len(), self.ctx.l());
        let d = self.ctx.d();
        let assignment: Vec<(usize, Rational)> = t
            .iter()
            .enumerate()
            .map(|(i, &v)| (d + i, Rational::from_integer(v.into())))
            .collect();
        let num = self.coeff.numerator().eval_partial(&assignment);
        let ft = self.ctx.f_power(t);
        let prod = self.ctx.loc(num, self.coeff.denom_exponent()).mul(&ft);
        let xv = self.ctx.weyl.xvars();
        let num_x = project_x(prod.numerator(), xv);
        LaurentLoc::new(num_x, prod.denom_exponent(), &self.ctx.f)
    }
}

/// Drops the (all-zero) parameter exponents.
fn project_x(p: &MultiPoly, xv: &crate::exact_math::VarList) -> MultiPoly {
    let d = xv.len();
    let mut out = MultiPoly::zero(xv);
    for (m, c) in p.terms() {
        debug_assert!(m.0[d..].iter().all(|&e| e == 0));
        out.add_term(crate::exact_math::Monomial(m.0[..d].to_vec()), c.clone());
    }
    out
}

impl PartialEq for FsElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.coeff == other.coeff
    }
}

impl fmt::Display for FsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] * f^s", self.coeff)
    }
}

/// Applies a `D[s]` operator to an element of `M[f^s]`.
pub fn fs_apply(op: &WeylOp, v: &FsElement) -> Result<FsElement, FsError> {
    let ctx = &v.ctx;
    if op.context() != &ctx.weyl {
        return Err(FsError::ContextMismatch);
    }
    let d = ctx.d();
    let ring = ctx.weyl.ring_vars().clone();
    let mut memo: HashMap<Vec<u32>, LaurentLoc> = HashMap::new();
    memo.insert(vec![0; d], v.coeff.clone());

    fn derive(ctx: &FsContext, memo: &mut HashMap<Vec<u32>, LaurentLoc>, b: &[u32]) -> LaurentLoc {
        if let Some(x) = memo.get(b) {
            return x.clone();
        }
        let r = b.iter().position(|&e| e > 0).expect("nonzero multi-index");
        let mut prev = b.to_vec();
        prev[r] -= 1;
        let base = derive(ctx, memo, &prev);
        let out = ctx.partial_step(r, &base);
        memo.insert(b.to_vec(), out.clone());
        out
    }

    let mut acc = ctx.loc(MultiPoly::zero(&ring), 0);
    let mut by_k: HashMap<u32, MultiPoly> = HashMap::new();
    for (key, c) in op.terms() {
        let dv = derive(ctx, &mut memo, &key.d.0);
        let mut e = key.x.0.clone();
        e.extend(key.s.0.iter().copied());
        let term = dv.numerator().mul_term(&crate::exact_math::Monomial(e), c);
        let entry = by_k.entry(dv.denom_exponent()).or_insert_with(|| MultiPoly::zero(&ring));
        *entry = &*entry + &term;
    }
    let mut ks: Vec<_> = by_k.into_iter().collect();
    ks.sort_by_key(|(k, _)| *k);
    for (k, num) in ks {
        if !num.is_zero() {
            acc = acc.add(&ctx.loc(num, k));
        }
    }
    if acc.numerator().is_zero() {
        acc = ctx.loc(MultiPoly::zero(&ring), 0);
    }
    Ok(FsElement {
        ctx: ctx.clone(),
        coeff: acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{int, VarList};

    fn ctx(xs: &[&str], fs: &[&str]) -> Arc<FsContext> {
        let v = VarList::new(xs);
        FsContext::new(xs, fs.iter().map(|f| MultiPoly::parse(f, &v).unwrap()).collect()).unwrap()
    }

    fn ring_poly(c: &Arc<FsContext>, s: &str) -> MultiPoly {
        MultiPoly::parse(s, c.weyl().ring_vars()).unwrap()
    }

    #[test]
    fn euler_identity() {
        let c = ctx(&["x"], &["x"]);
        let v = FsElement::new(&c, &ring_poly(&c, "x"), 0).unwrap();
        let r = fs_apply(&WeylOp::parse("d_x", c.weyl()).unwrap(), &v).unwrap();
        assert_eq!(r, FsElement::new(&c, &ring_poly(&c, "s+1"), 0).unwrap());
        let m = fs_apply(&WeylOp::parse("x", c.weyl()).unwrap(), &FsElement::generator(&c)).unwrap();
        assert_eq!(m, FsElement::new(&c, &ring_poly(&c, "x"), 0).unwrap());
    }

    #[test]
    fn two_function_identity() {
        let c = ctx(&["x", "y", "z"], &["x*y", "x*z"]);
        let w = c.weyl();
        let a = fs_apply(
            &WeylOp::parse("d_x*d_y", w).unwrap(),
            &FsElement::new(&c, &ring_poly(&c, "x*y"), 0).unwrap(),
        )
        .unwrap();
        let b = fs_apply(
            &WeylOp::parse("d_x*d_z", w).unwrap(),
            &FsElement::new(&c, &ring_poly(&c, "x*z"), 0).unwrap(),
        )
        .unwrap();
        let sum = a.try_add(&b).unwrap();
        let want = FsElement::new(&c, &ring_poly(&c, "(s1+s2+1)*(s1+s2+2)"), 0).unwrap();
        assert_eq!(sum, want);
        assert_eq!(want.specialize(&[0, 0]).as_poly().unwrap().constant_term(), int(2));
    }

    #[test]
    fn specialization_examples() {
        let c = ctx(&["x"], &["x"]);
        let v = FsElement::new(&c, &ring_poly(&c, "s*x"), 0).unwrap();
        let xv = c.weyl().xvars();
        assert_eq!(v.specialize(&[2]).as_poly().unwrap(), MultiPoly::parse("2*x^3", xv).unwrap());
        let g = FsElement::generator(&c);
        let inv = g.specialize(&[-1]);
        assert_eq!(inv, LaurentLoc::new(MultiPoly::one(xv), 1, &[MultiPoly::parse("x", xv).unwrap()]));
    }
}
