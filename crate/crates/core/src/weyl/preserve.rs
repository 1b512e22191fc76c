//! Deciding whether an operator maps a monomial ideal into itself.
//!
//! An operator splits into graded pieces `x^v ↦ c_μ(v) x^{v+μ}`. The piece
//! preserves `I` iff `c_μ` vanishes on `{v ∈ exps(I) : v+μ ∉ exps(I)}`,
//! which is a finite union of regions with some coordinates fixed and the
//! others bounded below. Vanishing on such a region is decided exactly by
//! the finite-grid test in the free coordinates.

use super::{WeylError, WeylOp};
use crate::exact_math::{falling_factorial, grid_witness, MultiPoly, Rational, VarList};
use crate::monomial_ideal::MonomialIdeal;
use std::collections::{BTreeMap, BTreeSet};

/// Decomposes an operator into graded pieces keyed by exponent shift; the
/// coefficient polynomials are in the variables `th_<x>..` followed by the
/// `s` variables.
pub fn graded_pieces(op: &WeylOp) -> (VarList, BTreeMap<Vec<i64>, MultiPoly>) {
    let ctx = op.context();
    let mut names: Vec<String> = ctx.xvars().names().iter().map(|n| format!("th_{n}")).collect();
    names.extend(ctx.svars().names().iter().cloned());
    let vars = VarList::new(&names);
    let d = ctx.d();
    let mut pieces: BTreeMap<Vec<i64>, MultiPoly> = BTreeMap::new();
    for (k, c) in op.terms() {
        let mu: Vec<i64> = (0..d).map(|i| k.x.0[i] as i64 - k.d.0[i] as i64).collect();
        let mut e = vec![0; d];
        e.extend(k.s.0.iter().copied());
        let mut poly = MultiPoly::monomial(&vars, e, c.clone());
        for i in 0..d {
            if k.d.0[i] > 0 {
                poly = &poly * &falling_factorial(&vars, i, k.d.0[i]);
            }
        }
        let entry = pieces.entry(mu).or_insert_with(|| MultiPoly::zero(&vars));
        *entry = &*entry + &poly;
    }
    pieces.retain(|_, p| !p.is_zero());
    (vars, pieces)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationWitness {
    /// A monomial `x^v ∈ I` with `δ•x^v ∉ I`.
    pub exponent: Vec<u32>,
    pub shift: Vec<i64>,
    pub image: MultiPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub preserved: bool,
    pub regions_checked: usize,
    pub witness: Option<PreservationWitness>,
}

/// Complement of `exps(I)` in `ℕ^d` as regions given by fixed coordinates.
pub(crate) fn complement_regions(ideal: &MonomialIdeal) -> Vec<Vec<Option<u32>>> {
    let d = ideal.dim();
    let mut regions: BTreeSet<Vec<Option<u32>>> = BTreeSet::new();
    regions.insert(vec![None; d]);
    for g in ideal.generators() {
        let mut next = BTreeSet::new();
        for r in &regions {
            if (0..d).any(|i| matches!(r[i], Some(c) if c < g[i])) {
                next.insert(r.clone());
                continue;
            }
            for i in 0..d {
                if r[i].is_none() {
                    for c in 0..g[i] {
                        let mut r2 = r.clone();
                        r2[i] = Some(c);
                        next.insert(r2);
                    }
                }
            }
        }
        regions = next;
    }
    // Drop regions contained in a less constrained one.
    let all: Vec<_> = regions.into_iter().collect();
    all.iter()
        .filter(|r| {
            !all.iter().any(|o| {
                o != *r && (0..d).all(|i| o[i].is_none() || o[i] == r[i])
            })
        })
        .cloned()
        .collect()
}

/// Decides whether `δ(I) ⊆ I` for a monomial ideal `I`. The `s` variables
/// stay symbolic, so the answer holds for every value of `s`.
pub fn preserves_ideal(op: &WeylOp, ideal: &MonomialIdeal) -> Result<PreservationReport, WeylError> {
    let ctx = op.context();
    let d = ctx.d();
    if ideal.dim() != d {
        return Err(WeylError::ContextMismatch(
            format!("operator in {d} variables"),
            format!("ideal in {} variables", ideal.dim()),
        ));
    }
    let (_, pieces) = graded_pieces(op);
    let regions = complement_regions(ideal);
    let mut checked = 0;
    for (mu, c) in &pieces {
        for g in ideal.generators() {
            'region: for r in &regions {
                let mut fixed: Vec<(usize, Rational)> = Vec::new();
                let mut lower = vec![0i64; d];
                let mut free = Vec::new();
                for i in 0..d {
                    match r[i] {
                        Some(ci) => {
                            let v = ci as i64 - mu[i];
                            if v < g[i] as i64 {
                                continue 'region;
                            }
                            lower[i] = v;
                            fixed.push((i, Rational::from_integer(v.into())));
                        }
                        None => {
                            lower[i] = (g[i] as i64).max(-mu[i]).max(0);
                            free.push(i);
                        }
                    }
                }
                checked += 1;
                let mut poly = c.eval_partial(&fixed);
                for &j in &free {
                    let shifted = &MultiPoly::var_index(poly.vars(), j)
                        + &MultiPoly::constant(poly.vars(), Rational::from_integer(lower[j].into()));
                    poly = poly.substitute(j, &shifted);
                }
                let m = free.iter().map(|&j| poly.degree_in(j)).max().unwrap_or(0);
                let witness = grid_witness(&poly, &free, m).expect("grid sized by degree");
                if let Some(u) = witness {
                    let mut v: Vec<u32> = lower.iter().map(|&x| x as u32).collect();
                    for (k, &j) in free.iter().enumerate() {
                        v[j] += u[k];
                    }
                    let xm = MultiPoly::monomial(ctx.ring_vars(), {
                        let mut e = v.clone();
                        e.extend(std::iter::repeat(0).take(ctx.l()));
                        e
                    }, Rational::from_integer(1.into()));
                    let image = op.act(&xm)?;
                    return Ok(PreservationReport {
                        preserved: false,
                        regions_checked: checked,
                        witness: Some(PreservationWitness {
                            exponent: v,
                            shift: mu.clone(),
                            image,
                        }),
                    });
                }
            }
        }
    }
    Ok(PreservationReport {
        preserved: true,
        regions_checked: checked,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::super::WeylContext;
    use super::*;

    fn image_in_ideal(image: &MultiPoly, d: usize, ideal: &MonomialIdeal) -> bool {
        image.terms().all(|(m, _)| ideal.contains(&m.0[..d]))
    }
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn xy() -> WeylContext {
        WeylContext::new(&["x", "y"], &[] as &[&str])
    }

    #[test]
    fn quotient_operator_preserves_xy() {
        let ctx = xy();
        let i = MonomialIdeal::new(2, vec![vec![1, 1]]);
        let r = preserves_ideal(&WeylOp::parse("x*d_x^2", &ctx).unwrap(), &i).unwrap();
        assert!(r.preserved);
        let r = preserves_ideal(&WeylOp::parse("d_x", &ctx).unwrap(), &i).unwrap();
        assert!(!r.preserved);
        let w = r.witness.unwrap();
        assert_eq!(w.exponent, vec![1, 1]);
        assert_eq!(w.image, MultiPoly::parse("y", ctx.ring_vars()).unwrap());
        let r = preserves_ideal(&WeylOp::parse("x^2", &ctx).unwrap(), &i).unwrap();
        assert!(r.preserved);
    }

    #[test]
    fn sampled_consistency() {
        let ctx = xy();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ideals = [
            MonomialIdeal::new(2, vec![vec![1, 1]]),
            MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 2]]),
            MonomialIdeal::new(2, vec![vec![3, 0], vec![1, 1]]),
        ];
        let ops = ["x*d_x^2", "x*d_x + y*d_y", "x^2*d_x", "d_x", "x*y*d_x*d_y", "x^3*d_x^2 - y*d_y"];
        for ideal in &ideals {
            for src in ops {
                let op = WeylOp::parse(src, &ctx).unwrap();
                let rep = preserves_ideal(&op, ideal).unwrap();
                let mut tested = 0;
                while tested < 200 {
                    let v = vec![rng.gen_range(0..=12u32), rng.gen_range(0..=12u32)];
                    if v[0] + v[1] > 12 || !ideal.contains(&v) {
                        continue;
                    }
                    tested += 1;
                    let m = MultiPoly::monomial(ctx.ring_vars(), v.clone(), Rational::from_integer(1.into()));
                    let ok = image_in_ideal(&op.act(&m).unwrap(), 2, ideal);
                    if rep.preserved {
                        assert!(ok, "{src} on {ideal} at {v:?}");
                    }
                }
                if let Some(w) = rep.witness {
                    assert!(ideal.contains(&w.exponent));
                    assert!(!image_in_ideal(&w.image, 2, ideal));
                }
            }
        }
    }
}
