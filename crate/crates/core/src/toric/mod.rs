//! Normal semigroup rings `K[S]`, `S = ℕ^d ∩ L (∩ V)`, as direct summands
//! of `K[x_1..x_d]`: membership, the monomial splitting `β`, its module
//! version `Θ`, operator restriction and preservation checks, and lattices
//! of invariants of diagonal groups.

mod group;
mod ideal;

pub use group::DiagonalGroup;
pub use ideal::SummandIdeal;

use crate::exact_math::{grid_points, Monomial, MultiPoly, Rational};
use crate::fs_module::{fs_apply, FsElement, FsError};
use crate::weyl::{graded_pieces, ExponentDomain, WeylError, WeylOp};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToricError {
    #[error("lattice basis must be a square {0}x{0} matrix")]
    BasisShape(usize),
    #[error("lattice basis is singular")]
    Singular,
    #[error("subspace equation has length {got}, expected {expected}")]
    EquationShape { expected: usize, got: usize },
    #[error("dimension mismatch: semigroup in {expected} variables, input in {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial has exponent {0:?} outside the semigroup")]
    NotInSubring(Vec<u32>),
    #[error("degree bound {bound} is below the largest shift {shift} of the operator")]
    BoundTooSmall { bound: u64, shift: u64 },
    #[error("semigroups cut by subspace equations are not supported here")]
    SubspaceUnsupported,
    #[error("group order must be positive")]
    BadOrder,
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Fs(#[from] FsError),
}

/// `S = ℕ^d ∩ L ∩ V`, with `L` spanned by the rows of an integer basis and
/// `V` cut out by homogeneous rational equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Semigroup {
    dim: usize,
    basis: Vec<Vec<i64>>,
    subspace: Vec<Vec<Rational>>,
    /// Integer adjugate with `basis · adj = det · I`.
    adj: Vec<Vec<i128>>,
    det: i128,
}

fn integer_inverse(basis: &[Vec<i64>]) -> Option<(Vec<Vec<i128>>, i128)> {
    let d = basis.len();
    let mut m: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from_integer(x.into())).collect();
            r.extend((0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let mut det = Rational::one();
    for col in 0..d {
        let p = (col..d).find(|&r| !m[r][col].is_zero())?;
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for x in m[col].iter_mut() {
            *x /= &pv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..2 * d {
                    let v = &m[col][j] * &f;
                    m[r][j] -= v;
                }
            }
        }
    }
    let det_i = det.to_integer().to_i128()?;
    let adj = m
        .iter()
        .map(|row| {
            row[d..]
                .iter()
                .map(|x| (x * &det).to_integer().to_i128().expect("adjugate fits"))
                .collect()
        })
        .collect();
    Some((adj, det_i))
}

impl Semigroup {
    pub fn new(basis: Vec<Vec<i64>>, subspace: Vec<Vec<Rational>>) -> Result<Self, ToricError> {
        let dim = basis.len();
        if basis.iter().any(|r| r.len() != dim) {
            return Err(ToricError::BasisShape(dim));
        }
        for eq in &subspace {
            if eq.len() != dim {
                return Err(ToricError::EquationShape {
                    expected: dim,
                    got: eq.len(),
                });
            }
        }
        let (adj, det) = integer_inverse(&basis).ok_or(ToricError::Singular)?;
        Ok(Semigroup {
            dim,
            basis,
            subspace,
            adj,
            det,
        })
    }

    /// `ℕ^d` itself.
    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(basis, vec![]).expect("identity basis")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn subspace(&self) -> &[Vec<Rational>] {
        &self.subspace
    }

    pub fn has_subspace(&self) -> bool {
        !self.subspace.is_empty()
    }

    /// `[ℤ^d : L] = |det|`.
    pub fn index(&self) -> u64 {
        self.det.unsigned_abs() as u64
    }

    /// Whether `v ∈ L`.
    pub fn in_lattice(&self, v: &[i64]) -> bool {
        // v = λ · basis with λ = v · adj / det.
        (0..self.dim).all(|j| {
            let s: i128 = (0..self.dim).map(|i| v[i] as i128 * self.adj[i][j]).sum();
            s % self.det == 0
        })
    }

    pub fn in_subspace(&self, v: &[i64]) -> bool {
        self.subspace.iter().all(|eq| {
            eq.iter()
                .zip(v)
                .map(|(a, &b)| a * Rational::from_integer(b.into()))
                .sum::<Rational>()
                .is_zero()
        })
    }

    /// Membership of a signed exponent vector in `S`.
    pub fn contains_signed(&self, v: &[i64]) -> bool {
        v.len() == self.dim && v.iter().all(|&x| x >= 0) && self.in_lattice(v) && self.in_subspace(v)
    }

    pub fn contains_exp(&self, v: &[u32]) -> bool {
        let s: Vec<i64> = v.iter().map(|&x| x as i64).collect();
        self.contains_signed(&s)
    }

    /// `g_i` with `π_i(L) = g_i ℤ` for each coordinate projection.
    pub fn coordinate_gcds(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|i| self.basis.iter().fold(0i64, |acc, r| acc.gcd(&r[i])))
            .collect()
    }

    /// For each coordinate, a lattice vector with that entry equal to one,
    /// if the projection onto the coordinate is surjective.
    pub fn coordinate_witnesses(&self) -> Vec<Option<Vec<i64>>> {
        (0..self.dim)
            .map(|i| {
                // Combine basis rows with Bézout coefficients on column i.
                let mut g = 0i64;
                let mut combo = vec![0i64; self.dim];
                for (k, row) in self.basis.iter().enumerate() {
                    let e = g.extended_gcd(&row[i]);
                    let (x, y) = (e.x, e.y);
                    for c in combo.iter_mut() {
                        *c *= x;
                    }
                    combo[k] += y;
                    g = e.gcd;
                }
                if g.abs() != 1 {
                    return None;
                }
                let mut v = vec![0i64; self.dim];
                for (k, row) in self.basis.iter().enumerate() {
                    for j in 0..self.dim {
                        v[j] += combo[k] * row[j];
                    }
                }
                if v[i] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                Some(v)
            })
            .collect()
    }

    /// The coordinate-projection hypothesis: every `π_i(L) = ℤ`.
    pub fn projections_surject(&self) -> bool {
        self.coordinate_gcds().iter().all(|&g| g == 1)
    }

    /// All exponents of `S` of total degree at most `n`, in graded-lex
    /// ascending order.
    pub fn elements_up_to_degree(&self, n: u32) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = grid_points(self.dim, n)
            .into_iter()
            .filter(|v| v.iter().sum::<u32>() <= n && self.contains_exp(v))
            .collect();
        out.sort_by(|a, b| Monomial(a.clone()).cmp(&Monomial(b.clone())));
        out
    }

    /// The graded projection `β`: keeps the terms with exponents in `S`.
    pub fn split_beta(&self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(p.vars());
        for (m, c) in p.terms() {
            if self.contains_exp(&m.0[..self.dim]) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// `Θ`: applies `β` to the coefficient of an element of `M[f^s]`. The
    /// tuple `f` must lie in `K[S]`.
    pub fn theta_split(&self, v: &FsElement) -> Result<FsElement, ToricError> {
        let ctx = v.context();
        if ctx.d() != self.dim {
            return Err(ToricError::DimensionMismatch {
                expected: self.dim,
                got: ctx.d(),
            });
        }
        for f in ctx.f() {
            if let Some((m, _)) = f.terms().find(|(m, _)| !self.contains_exp(&m.0)) {
                return Err(ToricError::NotInSubring(m.0.clone()));
            }
        }
        let coeff = v.coeff();
        let num = self.split_beta(coeff.numerator());
        Ok(FsElement::new(ctx, &num, coeff.denom_exponent())?)
    }

    /// Restriction `a ↦ β(δ•a)` of an operator on the polynomial ring.
    pub fn restrict_operator<'a>(&'a self, op: &'a WeylOp) -> RestrictedOperator<'a> {
        RestrictedOperator { semigroup: self, op }
    }
}

impl ExponentDomain for Semigroup {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.dim && self.contains_exp(v)
    }
}

/// An element of `K[S]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummandElement(MultiPoly);

impl SummandElement {
    pub fn new(s: &Semigroup, p: MultiPoly) -> Result<Self, ToricError> {
        if let Some((m, _)) = p.terms().find(|(m, _)| !s.contains_exp(&m.0)) {
            return Err(ToricError::NotInSubring(m.0.clone()));
        }
        Ok(SummandElement(p))
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.0
    }
}

pub struct RestrictedOperator<'a> {
    semigroup: &'a Semigroup,
    op: &'a WeylOp,
}

impl RestrictedOperator<'_> {
    /// `β(δ • a)`; `s` values are needed when the operator involves `s`.
    pub fn apply(&self, a: &SummandElement, s_values: Option<&[Rational]>) -> Result<SummandElement, ToricError> {
        let img = self.op.apply(a.poly(), s_values)?;
        Ok(SummandElement(self.semigroup.split_beta(&img)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubringPreservation {
    /// No counterexample of degree at most `bound`; `exact` when the
    /// graded-piece analysis proves preservation in every degree.
    PreservedUpToBound { bound: u32, exact: bool },
    /// The smallest monomial of `S` in graded-lex order whose image leaves
    /// `K[S]`.
    Counterexample { exponent: Vec<u32>, image: MultiPoly },
}

/// Decides whether `δ(K[S]) ⊆ K[S]` on monomials up to `degree_bound`.
///
/// Without a subspace `V`, `S` is Zariski dense, so a graded piece with
/// shift `μ` and nonzero coefficient polynomial preserves `K[S]` iff
/// `μ ∈ L`; this makes the answer exact in every degree.
pub fn check_preserves_subring(
    s: &Semigroup,
    op: &WeylOp,
    degree_bound: u32,
) -> Result<SubringPreservation, ToricError> {
    let ctx = op.context();
    if ctx.d() != s.dim {
        return Err(ToricError::DimensionMismatch {
            expected: s.dim,
            got: ctx.d(),
        });
    }
    let (_, pieces) = graded_pieces(op);
    let max_shift = pieces
        .keys()
        .map(|mu| mu.iter().map(|x| x.unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);
    if (degree_bound as u64) < max_shift {
        return Err(ToricError::BoundTooSmall {
            bound: degree_bound as u64,
            shift: max_shift,
        });
    }
    let exact_preserved = if s.has_subspace() {
        None
    } else {
        Some(pieces.keys().all(|mu| s.in_lattice(mu)))
    };
    let sweep = |lo: u32, hi: u32| -> Result<Option<SubringPreservation>, ToricError> {
        for v in s.elements_up_to_degree(hi) {
            if v.iter().sum::<u32>() < lo {
                continue;
            }
            let mut e = v.clone();
            e.extend(std::iter::repeat(0).take(ctx.l()));
            let xm = MultiPoly::monomial(ctx.ring_vars(), e, Rational::one());
            let img = op.act(&xm)?;
            if img.terms().any(|(m, _)| !s.contains_exp(&m.0[..s.dim])) {
                return Ok(Some(SubringPreservation::Counterexample { exponent: v, image: img }));
            }
        }
        Ok(None)
    };
    if let Some(c) = sweep(0, degree_bound)? {
        return Ok(c);
    }
    match exact_preserved {
        Some(false) => {
            // A counterexample exists in some degree; widen the sweep.
            let mut lo = degree_bound + 1;
            let mut hi = degree_bound.max(1) * 2;
            loop {
                if let Some(c) = sweep(lo, hi)? {
                    return Ok(c);
                }
                lo = hi + 1;
                hi *= 2;
            }
        }
        Some(true) => Ok(SubringPreservation::PreservedUpToBound {
            bound: degree_bound,
            exact: true,
        }),
        None => Ok(SubringPreservation::PreservedUpToBound {
            bound: degree_bound,
            exact: false,
        }),
    }
}

/// Checks `Θ(δ̃•v) = (β∘δ̃|_A)•v` for samples `v ∈ M^A[f^s]`. The right
/// side is only available through specialization, so both sides are
/// compared after `φ_t` on a grid large enough to determine them.
pub fn check_differential_summand_identity(
    s: &Semigroup,
    op: &WeylOp,
    samples: &[FsElement],
) -> Result<bool, ToricError> {
    for v in samples {
        let ctx = v.context();
        if op.context() != ctx.weyl() {
            return Err(ToricError::Fs(FsError::ContextMismatch));
        }
        for (m, _) in v.coeff().numerator().terms() {
            if !s.contains_exp(&m.0[..s.dim]) {
                return Err(ToricError::NotInSubring(m.0[..s.dim].to_vec()));
            }
        }
        let lhs = s.theta_split(&fs_apply(op, v)?)?;
        let l = ctx.l();
        let m = (0..l)
            .map(|i| {
                lhs.s_degree_in(i)
                    .max(v.s_degree_in(i) + op.s_degree() as u32 + op.order() as u32)
            })
            .max()
            .unwrap_or(0);
        for pt in grid_points(l, m) {
            let t: Vec<i64> = pt.iter().map(|&x| x as i64).collect();
            let left = lhs.specialize(&t);
            let vals: Vec<Rational> = t.iter().map(|&x| Rational::from_integer(x.into())).collect();
            let spec_op = op.specialize_drop_s(&vals);
            let image = spec_op.apply_localized(&v.specialize(&t))?;
            let right = crate::exact_math::LaurentLoc::new(
                s.split_beta(image.numerator()),
                image.denom_exponent(),
                image.factors(),
            );
            if left != right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{int, VarList};
    use crate::fs_module::FsContext;

    pub(crate) fn invariants_xy_x3_y3() -> Semigroup {
        Semigroup::new(vec![vec![1, 1], vec![3, 0]], vec![]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s = invariants_xy_x3_y3();
        assert!(s.contains_exp(&[4, 1]));
        assert!(!s.contains_exp(&[1, 0]));
        assert_eq!(s.index(), 3);
        let v = Semigroup::new(vec![vec![2, 0], vec![0, 2]], vec![]).unwrap();
        assert!(v.contains_exp(&[2, 2]));
        assert!(!v.contains_exp(&[1, 2]));
        assert_eq!(v.coordinate_gcds(), vec![2, 2]);
        assert!(s.projections_surject());
        for (i, w) in s.coordinate_witnesses().into_iter().enumerate() {
            let w = w.unwrap();
            assert_eq!(w[i], 1);
            assert!(s.in_lattice(&w));
        }
    }

    #[test]
    fn splitting_examples() {
        let s = invariants_xy_x3_y3();
        let vars = VarList::new(&["x", "y"]);
        let p = MultiPoly::parse("x^2*y^2 + x^2*y", &vars).unwrap();
        assert_eq!(s.split_beta(&p), MultiPoly::parse("x^2*y^2", &vars).unwrap());
        let v = Semigroup::new(vec![vec![2, 0], vec![0, 2]], vec![]).unwrap();
        assert!(v.split_beta(&MultiPoly::parse("x + y", &vars).unwrap()).is_zero());
    }

    #[test]
    fn preservation_examples() {
        let s = invariants_xy_x3_y3();
        let ctx = crate::weyl::WeylContext::new(&["x", "y"], &[] as &[&str]);
        let op = WeylOp::parse("d_x^4*d_y", &ctx).unwrap();
        assert_eq!(
            check_preserves_subring(&s, &op, 30).unwrap(),
            SubringPreservation::PreservedUpToBound { bound: 30, exact: true }
        );
        let dx = WeylOp::parse("d_x", &ctx).unwrap();
        match check_preserves_subring(&s, &dx, 30).unwrap() {
            SubringPreservation::Counterexample { exponent, .. } => assert_eq!(exponent, vec![1, 1]),
            other => panic!("{other:?}"),
        }
        let a = SummandElement::new(&s, MultiPoly::monomial(ctx.xvars(), vec![3, 0], int(1))).unwrap();
        let r = s.restrict_operator(&dx).apply(&a, None).unwrap();
        assert!(r.poly().is_zero());
        let x3 = WeylOp::parse("x^3", &ctx).unwrap();
        assert!(matches!(
            check_preserves_subring(&s, &x3, 30).unwrap(),
            SubringPreservation::PreservedUpToBound { exact: true, .. }
        ));
    }

    #[test]
    fn theta_and_identity() {
        let s = invariants_xy_x3_y3();
        let vars = VarList::new(&["x", "y"]);
        let ctx = FsContext::new(&["x", "y"], vec![MultiPoly::parse("x^3", &vars).unwrap()]).unwrap();
        let v = FsElement::new(&ctx, &MultiPoly::parse("x^3", &vars).unwrap(), 0).unwrap();
        let dx = WeylOp::parse("d_x", ctx.weyl()).unwrap();
        assert!(check_differential_summand_identity(&s, &dx, &[v.clone()]).unwrap());
        let op = WeylOp::parse("1/256*d_x^4*d_y", ctx.weyl()).unwrap();
        assert!(check_differential_summand_identity(&s, &op, &[v.clone()]).unwrap());
        let zero = WeylOp::zero(ctx.weyl());
        assert!(check_differential_summand_identity(&s, &zero, &[v]).unwrap());
        let mixed = FsElement::new(&ctx, &MultiPoly::parse("x^2*y^2 + x^2*y", &vars).unwrap(), 0).unwrap();
        let th = s.theta_split(&mixed).unwrap();
        let expect = FsElement::new(&ctx, &MultiPoly::parse("x^2*y^2", &vars).unwrap(), 0).unwrap();
        assert_eq!(th.coeff(), expect.coeff());
    }
}
