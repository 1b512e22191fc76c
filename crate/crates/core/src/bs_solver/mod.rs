//! Linear-ansatz search for functional equations
//! `Σ_c δ_c • binom · f^c g f^s = b(s_1 + ⋯ + s_l) g f^s`.
//!
//! Operators are unknown combinations of normal-ordered monomials
//! `x^α ∂^β s^γ` within the declared bounds. For each degree `k` of `b`,
//! ascending, one exact sparse system with `b` monic of degree `k` is
//! solved; the first feasible `k` gives a `b` of smallest degree within
//! the bounds.

use crate::exact_math::{rational_roots, Monomial, MultiPoly, Rational, RootError, SparseRow, VarList};
use crate::exact_math::{solve_sparse, LinearSolution};
use crate::fs_module::{
    rhs_basis, term_coefficient, verify_feq_formal, FeqKind, FeqOperator, FeqSpec, FeqTerm, FormalVerdict, FsContext,
    FsError,
};
use crate::toric::{check_preserves_subring, Semigroup, SubringPreservation, ToricError};
use crate::weyl::WeylOp;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on the number of unknowns in one system.
pub const DEFAULT_MAX_UNKNOWNS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BsError {
    #[error("no functional equation with deg b <= {max_b_degree} within the ansatz bounds (this does not show that none exists)")]
    NotFoundWithinBounds { max_b_degree: u32 },
    #[error("ansatz has {unknowns} unknowns, above the cap of {cap}")]
    CapExceeded { unknowns: usize, cap: usize },
    #[error("(s+1) does not divide {0}")]
    NotDivisible(String),
    #[error("b must be a nonzero polynomial in s")]
    BadB,
    #[error("solver produced an equation that fails formal verification")]
    CertificateFailed,
    #[error("f_{0} is not in the summand")]
    NotInSummand(usize),
    #[error(transparent)]
    Fs(#[from] FsError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    /// Total `∂`-order.
    pub max_order: u32,
    pub max_s_degree: u32,
    /// Total `x`-degree of the operator coefficients.
    pub max_coeff_degree: u32,
    pub max_b_degree: u32,
    pub kind: FeqKind,
    pub c_vectors: Vec<Vec<i64>>,
    /// Keep only ansatz terms that preserve `K[S]`.
    pub subring: Option<Semigroup>,
    pub max_unknowns: usize,
}

impl AnsatzSpec {
    /// A principal ansatz `δ • f^{s+1} = b(s) f^s`.
    pub fn principal(max_order: u32, max_s_degree: u32, max_coeff_degree: u32, max_b_degree: u32) -> Self {
        AnsatzSpec {
            max_order,
            max_s_degree,
            max_coeff_degree,
            max_b_degree,
            kind: FeqKind::Principal,
            c_vectors: vec![vec![1]],
            subring: None,
            max_unknowns: DEFAULT_MAX_UNKNOWNS,
        }
    }

    /// The BMS ansatz with the unit c-vectors `e_1, …, e_l`.
    pub fn bms(l: usize, max_order: u32, max_s_degree: u32, max_coeff_degree: u32, max_b_degree: u32) -> Self {
        AnsatzSpec {
            kind: FeqKind::BmsMulti,
            c_vectors: (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect(),
            ..Self::principal(max_order, max_s_degree, max_coeff_degree, max_b_degree)
        }
    }
}

#[derive(Debug, Clone)]
pub struct BsResult {
    /// Monic, in the single variable `s`.
    pub b: MultiPoly,
    pub witness: FeqSpec,
    /// Recomputed on the witness, never taken from the solver.
    pub certificate: FormalVerdict,
    /// Every smaller degree of `b` was shown infeasible.
    pub minimal_within_bounds: bool,
    pub infeasible_degrees: Vec<u32>,
    pub unknowns: usize,
}

/// All exponent vectors of length `n` and total degree at most `deg`.
fn multi_indices(n: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for e in 0..=deg - used {
                let mut w = v.clone();
                w.push(e);
                next.push(w);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| Monomial(a.clone()).cmp(&Monomial(b.clone())));
    out
}

struct Column {
    c: usize,
    alpha: Vec<u32>,
    beta: Vec<u32>,
    gamma: Vec<u32>,
}

/// Searches for a functional equation of `f` (and `g` for relative or
/// BMS equations) within the ansatz bounds.
pub fn search_feq(ctx: &Arc<FsContext>, g: Option<&MultiPoly>, ansatz: &AnsatzSpec) -> Result<BsResult, BsError> {
    let d = ctx.d();
    let l = ctx.l();
    for c in &ansatz.c_vectors {
        if c.len() != l || c.iter().sum::<i64>() != 1 {
            return Err(FsError::MalformedC(c.clone()).into());
        }
    }
    if let Some(s) = &ansatz.subring {
        for (i, f) in ctx.f().iter().enumerate() {
            if f.terms().any(|(m, _)| !s.contains_exp(&m.0)) {
                return Err(BsError::NotInSummand(i + 1));
            }
        }
    }
    let wctx = ctx.weyl();
    let betas = multi_indices(d, ansatz.max_order);
    let alphas = multi_indices(d, ansatz.max_coeff_degree);
    let gammas = multi_indices(l, ansatz.max_s_degree);

    let raw = ansatz.c_vectors.len() * betas.len() * alphas.len() * gammas.len() + ansatz.max_b_degree as usize;
    if raw > ansatz.max_unknowns {
        return Err(BsError::CapExceeded {
            unknowns: raw,
            cap: ansatz.max_unknowns,
        });
    }

    let mut columns = Vec::new();
    for ci in 0..ansatz.c_vectors.len() {
        for beta in &betas {
            for alpha in &alphas {
                if let Some(s) = &ansatz.subring {
                    let op = WeylOp::term(wctx, alpha.clone(), beta.clone(), vec![0; l], Rational::one());
                    let shift: u32 = alpha.iter().chain(beta).sum();
                    if matches!(
                        check_preserves_subring(s, &op, shift.max(1))?,
                        SubringPreservation::Counterexample { .. }
                    ) {
                        continue;
                    }
                }
                for gamma in &gammas {
                    columns.push(Column {
                        c: ci,
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        gamma: gamma.clone(),
                    });
                }
            }
        }
    }

    // ∂^β • (coefficient_c · f^s) for every β, over a common F^K.
    let partials: Vec<BTreeMap<Vec<u32>, _>> = ansatz
        .c_vectors
        .par_iter()
        .map(|c| ctx.all_partials(&term_coefficient(ctx, c, g), ansatz.max_order))
        .collect();
    let big_k = partials
        .iter()
        .flat_map(|m| m.values().map(|v| v.denom_exponent()))
        .max()
        .unwrap_or(0);
    let lifted: Vec<BTreeMap<Vec<u32>, MultiPoly>> = partials
        .par_iter()
        .map(|m| {
            m.iter()
                .map(|(b, v)| (b.clone(), v.raise_to(big_k).numerator().clone()))
                .collect()
        })
        .collect();
    let base_k = ctx.base().pow(big_k);

    let ncols_ops = columns.len();
    let mut rows: BTreeMap<Monomial, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        let h = &lifted[col.c][&col.beta];
        let mut shift = col.alpha.clone();
        shift.extend(col.gamma.iter().copied());
        let shift = Monomial(shift);
        for (m, c) in h.terms() {
            rows.entry(m.mul(&shift)).or_default().insert(j, c.clone());
        }
    }

    let rhs: Vec<MultiPoly> = (0..=ansatz.max_b_degree)
        .map(|i| &rhs_basis(ctx, i, g) * &base_k)
        .collect();
    let mut infeasible = Vec::new();
    for k in 0..=ansatz.max_b_degree {
        let ncols = ncols_ops + k as usize;
        if ncols > ansatz.max_unknowns {
            return Err(BsError::CapExceeded {
                unknowns: ncols,
                cap: ansatz.max_unknowns,
            });
        }
        // Σ a_j col_j − Σ_{i<k} b_i R_i = R_k.
        let mut system: BTreeMap<Monomial, (BTreeMap<usize, Rational>, Rational)> = rows
            .iter()
            .map(|(m, r)| (m.clone(), (r.clone(), Rational::zero())))
            .collect();
        for i in 0..k {
            for (m, c) in rhs[i as usize].terms() {
                system.entry(m.clone()).or_default().0.insert(ncols_ops + i as usize, -c.clone());
            }
        }
        for (m, c) in rhs[k as usize].terms() {
            system.entry(m.clone()).or_default().1 = c.clone();
        }
        let sparse: Vec<SparseRow> = system.into_values().collect();
        match solve_sparse(ncols, &sparse, false) {
            LinearSolution::Infeasible => infeasible.push(k),
            LinearSolution::Solved { particular, .. } => {
                let svars = VarList::new(&["s"]);
                let mut b = MultiPoly::monomial(&svars, vec![k], Rational::one());
                for i in 0..k {
                    b.add_term(Monomial(vec![i]), particular[ncols_ops + i as usize].clone());
                }
                let mut ops: Vec<WeylOp> = ansatz.c_vectors.iter().map(|_| WeylOp::zero(wctx)).collect();
                for (j, col) in columns.iter().enumerate() {
                    if !particular[j].is_zero() {
                        let t = WeylOp::term(
                            wctx,
                            col.alpha.clone(),
                            col.beta.clone(),
                            col.gamma.clone(),
                            particular[j].clone(),
                        );
                        ops[col.c] = ops[col.c].try_add(&t).map_err(FsError::from)?;
                    }
                }
                let terms = ansatz
                    .c_vectors
                    .iter()
                    .zip(ops)
                    .map(|(c, op)| FeqTerm {
                        c: c.clone(),
                        op: FeqOperator::Weyl(op),
                    })
                    .collect();
                let witness = FeqSpec::new(ctx, ansatz.kind, g.cloned(), terms, b.clone())?;
                let certificate = verify_feq_formal(&witness)?;
                if certificate != FormalVerdict::Verified {
                    return Err(BsError::CertificateFailed);
                }
                return Ok(BsResult {
                    b,
                    witness,
                    certificate,
                    minimal_within_bounds: infeasible.len() == k as usize,
                    infeasible_degrees: infeasible,
                    unknowns: ncols,
                });
            }
        }
    }
    Err(BsError::NotFoundWithinBounds {
        max_b_degree: ansatz.max_b_degree,
    })
}

/// `h = y_1 f_1 + ⋯ + y_l f_l` over the ambient variables followed by
/// fresh `y_i`, together with its principal context.
pub fn mustata_lift(x_names: &[String], f: &[MultiPoly]) -> Result<(MultiPoly, Arc<FsContext>), BsError> {
    let l = f.len();
    if l == 0 {
        return Err(FsError::EmptyTuple.into());
    }
    if let Some(i) = f.iter().position(|p| p.is_zero()) {
        return Err(FsError::ZeroEntry(i + 1).into());
    }
    let prefix = ["y", "u", "w", "v", "z"]
        .into_iter()
        .find(|p| (1..=l).all(|i| !x_names.contains(&format!("{p}{i}"))))
        .unwrap_or("y_new");
    let mut names = x_names.to_vec();
    names.extend((1..=l).map(|i| format!("{prefix}{i}")));
    let vars = VarList::new(&names);
    let mut h = MultiPoly::zero(&vars);
    for (i, fi) in f.iter().enumerate() {
        let fi = fi.embed_by_name(&vars).map_err(FsError::from)?;
        h = &h + &(&MultiPoly::var_index(&vars, x_names.len() + i) * &fi);
    }
    let ctx = FsContext::new(&names, vec![h.clone()])?;
    Ok((h, ctx))
}

/// Exact quotient `b / (s + 1)`.
pub fn divide_by_s_plus_one(b: &MultiPoly) -> Result<MultiPoly, BsError> {
    if b.is_zero() || b.nvars() != 1 {
        return Err(BsError::BadB);
    }
    let s1 = &MultiPoly::var_index(b.vars(), 0) + &MultiPoly::one(b.vars());
    b.div_exact(&s1).ok_or_else(|| BsError::NotDivisible(b.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalExponent {
    Finite(Rational),
    /// `b/(s+1)` is constant, as for smooth hypersurfaces.
    NoFiniteRoot,
}

/// `α̃_f`: the negative of the largest root of `b(s)/(s+1)`.
pub fn minimal_exponent(b: &MultiPoly) -> Result<MinimalExponent, BsError> {
    let q = divide_by_s_plus_one(b)?;
    let roots = rational_roots(&q)?;
    Ok(match roots.last() {
        Some((r, _)) => MinimalExponent::Finite(-r.clone()),
        None => MinimalExponent::NoFiniteRoot,
    })
}
