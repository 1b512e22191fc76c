//! Test ideals `τ(I^λ) = ⋃_e Σ_ψ ψ(I^{⌈p^e λ⌉})` of monomial ideals.

use super::{check_lambda, is_prime, level_q, CartierMap, CharPError, PrimeFieldPoly};
use crate::exact_math::{ceil_int, floor_int, grid_points, Rational};
use crate::toric::{Semigroup, SummandIdeal};
use crate::MonomialIdeal;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashSet;

/// Work budget for one level: search nodes for polynomial rings, generator
/// products for summands.
pub const DEFAULT_SEARCH_CAP: u128 = 4_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TestIdealReport {
    /// `Σ_ψ ψ(I^{⌈p^e λ⌉})` for `e = 1, 2, …`.
    pub levels: Vec<MonomialIdeal>,
    /// The union of the levels.
    pub ideal: MonomialIdeal,
    /// First `e` with level `e` equal to level `e + 1`.
    pub stabilized_at: Option<u32>,
    /// Set when a level exceeded the work budget.
    pub capped: bool,
}

fn composition_count(k: usize, n: u64) -> u128 {
    // C(n + k − 1, k − 1), saturating.
    let mut acc: u128 = 1;
    for j in 1..k as u128 {
        acc = acc.saturating_mul(n as u128 + j) / j;
    }
    acc
}

/// Calls `visit` on `Σ μ_g a_g` for every `μ ∈ ℕ^k` with `|μ| = n`.
fn for_each_product(gens: &[Vec<u32>], n: u64, visit: &mut impl FnMut(&[u64])) {
    fn rec(gens: &[Vec<u32>], left: u64, acc: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
        let (g, rest) = gens.split_first().expect("nonempty generator list");
        if rest.is_empty() {
            for (a, &gi) in acc.iter_mut().zip(g) {
                *a += left * gi as u64;
            }
            visit(acc);
            for (a, &gi) in acc.iter_mut().zip(g) {
                *a -= left * gi as u64;
            }
            return;
        }
        for m in 0..=left {
            for (a, &gi) in acc.iter_mut().zip(g) {
                *a += m * gi as u64;
            }
            rec(rest, left - m, acc, visit);
            for (a, &gi) in acc.iter_mut().zip(g) {
                *a -= m * gi as u64;
            }
        }
    }
    let mut acc = vec![0u64; gens[0].len()];
    rec(gens, n, &mut acc, visit);
}

fn power_exponent(lambda: &Rational, q: u64) -> u64 {
    ceil_int(&(lambda * Rational::from_integer(q.into())))
        .to_u64()
        .expect("power fits")
}

/// Vertices of `{y ≥ 0 : a_j · y ≥ 1 for all j}`; the LP optimum of
/// `max Σμ` subject to `Σ μ_j a_j ≤ r`, `μ ≥ 0` is `min_y y · r` over them.
fn dual_vertices(gens: &[Vec<u32>]) -> Vec<Vec<Rational>> {
    let d = gens[0].len();
    // Constraint `c` is `y_c ≥ 0` for `c < d`, else `a_{c−d} · y ≥ 1`.
    let row = |c: usize| -> (Vec<Rational>, Rational) {
        if c < d {
            ((0..d).map(|i| Rational::from_integer(i64::from(i == c).into())).collect(), Rational::zero())
        } else {
            (gens[c - d].iter().map(|&x| Rational::from_integer(x.into())).collect(), Rational::one())
        }
    };
    let m = d + gens.len();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut pick: Vec<usize> = (0..d).collect();
    loop {
        let rows: Vec<(Vec<Rational>, Rational)> = pick.iter().map(|&c| row(c)).collect();
        if let Some(y) = solve_square(rows) {
            let feasible = (0..m).all(|c| {
                let (a, b) = row(c);
                a.iter().zip(&y).map(|(x, z)| x * z).sum::<Rational>() >= b
            });
            if feasible && !out.contains(&y) {
                out.push(y);
            }
        }
        // Next `d`-subset of `0..m` in lexicographic order.
        let Some(i) = (0..d).rev().find(|&i| pick[i] < m - d + i) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..d {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

/// Unique solution of a square system, if any.
fn solve_square(mut rows: Vec<(Vec<Rational>, Rational)>) -> Option<Vec<Rational>> {
    let n = rows.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !rows[r].0[col].is_zero())?;
        rows.swap(col, piv);
        let (pa, pb) = rows[col].clone();
        for r in 0..n {
            if r != col && !rows[r].0[col].is_zero() {
                let f = &rows[r].0[col] / &pa[col];
                for c in 0..n {
                    let t = &f * &pa[c];
                    rows[r].0[c] -= t;
                }
                let t = &f * &pb;
                rows[r].1 -= t;
            }
        }
    }
    Some(rows.iter().enumerate().map(|(i, (a, b))| b / &a[i]).collect())
}

/// Decides `x^v ∈ I^n` for `I = ⟨x^{a_1}, …, x^{a_k}⟩`, i.e. whether some
/// `μ ∈ ℕ^k` with `|μ| ≥ n` has `Σ μ_j a_j ≤ v`. Depth-first over `μ_1,
/// μ_2, …` with exact LP bounds; `None` when `budget` runs out.
struct PowerMembership {
    gens: Vec<Vec<u32>>,
    /// Dual vertices for each suffix `a_t, …, a_k`.
    duals: Vec<Vec<Vec<Rational>>>,
}

impl PowerMembership {
    fn new(gens: &[Vec<u32>]) -> Self {
        let duals = (0..gens.len()).map(|t| dual_vertices(&gens[t..])).collect();
        PowerMembership {
            gens: gens.to_vec(),
            duals,
        }
    }

    fn contains(&self, v: &[u64], n: u64, budget: &mut u128) -> Option<bool> {
        self.search(0, v.to_vec(), n, budget)
    }

    fn max_copies(g: &[u32], r: &[u64]) -> u64 {
        g.iter()
            .zip(r)
            .filter(|(&gi, _)| gi > 0)
            .map(|(&gi, &ri)| ri / gi as u64)
            .min()
            .expect("nonconstant generator")
    }

    fn search(&self, t: usize, r: Vec<u64>, need: u64, budget: &mut u128) -> Option<bool> {
        if need == 0 {
            return Some(true);
        }
        *budget = budget.checked_sub(1)?;
        let g = &self.gens[t];
        let top = Self::max_copies(g, &r);
        if t + 1 == self.gens.len() {
            return Some(top >= need);
        }
        let bound = self.duals[t]
            .iter()
            .map(|y| y.iter().zip(&r).map(|(a, &b)| a * Rational::from_integer(b.into())).sum::<Rational>())
            .min()
            .expect("bounded program");
        if floor_int(&bound) < need.into() {
            return Some(false);
        }
        for m in (0..=top.min(need)).rev() {
            let rest: Vec<u64> = r.iter().zip(g).map(|(&ri, &gi)| ri - m * gi as u64).collect();
            if self.search(t + 1, rest, need - m, budget)? {
                return Some(true);
            }
        }
        Some(false)
    }
}

/// One level `(I^n)^{[1/q]} = ⟨x^{⌊w/q⌋} : w ∈ exps(I^n)⟩` with
/// `n = ⌈λq⌉`. Since `x^u` lies in it iff `x^{q(u+1)−1} ∈ I^n`, the level
/// is found by membership tests over the box `u_i ≤ ⌊n max_j a_{j,i} / q⌋`
/// that holds every minimal generator. `None` when the search exceeds
/// `cap` nodes.
pub fn test_ideal_level(
    i: &MonomialIdeal,
    lambda: &Rational,
    p: u64,
    e: u32,
    cap: u128,
) -> Result<Option<MonomialIdeal>, CharPError> {
    check_lambda(lambda)?;
    if !is_prime(p) {
        return Err(CharPError::NotPrime(p));
    }
    let q = level_q(p, e)?;
    let n = power_exponent(lambda, q);
    let d = i.dim();
    if n == 0 || i.is_unit() {
        return Ok(Some(MonomialIdeal::unit(d)));
    }
    if i.is_zero() {
        return Ok(Some(MonomialIdeal::zero(d)));
    }
    let top: Vec<u32> = i
        .max_exponents()
        .iter()
        .map(|&m| (n * m as u64 / q) as u32)
        .collect();
    let member = PowerMembership::new(i.generators());
    let mut budget = cap;
    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut points = grid_points(d, top.iter().copied().max().unwrap_or(0));
    points.sort_by_key(|u| u.iter().sum::<u32>());
    for u in points {
        if u.iter().zip(&top).any(|(a, b)| a > b) || found.iter().any(|f| f.iter().zip(&u).all(|(a, b)| a <= b)) {
            continue;
        }
        let v: Vec<u64> = u.iter().map(|&x| q * (x as u64 + 1) - 1).collect();
        match member.contains(&v, n, &mut budget) {
            Some(true) => found.push(u),
            Some(false) => {}
            None => return Ok(None),
        }
    }
    Ok(Some(MonomialIdeal::new(d, found)))
}

/// One level, by applying every `ψ_u` to the multiples `x^m · x^w` of the
/// generators of `I^n` with `m ∈ [0, q)^d`; larger `m` only produce
/// multiples of these images.
pub fn test_ideal_level_brute_force(i: &MonomialIdeal, lambda: &Rational, p: u64, e: u32) -> Result<MonomialIdeal, CharPError> {
    check_lambda(lambda)?;
    let q = level_q(p, e)?;
    let n = power_exponent(lambda, q) as u32;
    let d = i.dim();
    let j = if i.is_zero() || n == 0 {
        i.power(n)
    } else {
        let mut prods = HashSet::new();
        for_each_product(i.generators(), n as u64, &mut |w| {
            prods.insert(w.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        });
        MonomialIdeal::new(d, prods.into_iter().collect())
    };
    let mut images = Vec::new();
    for u in grid_points(d, (q - 1) as u32) {
        if u.iter().any(|&x| x as u64 >= q) {
            continue;
        }
        let psi = CartierMap::new(p, e, u.clone())?;
        for w in j.generators() {
            let m: Vec<u32> = w
                .iter()
                .zip(&u)
                .map(|(&wi, &ui)| ((ui as i64 - wi as i64).rem_euclid(q as i64)) as u32)
                .collect();
            let v: Vec<u32> = m.iter().zip(w).map(|(a, b)| a + b).collect();
            let img = psi.apply(&PrimeFieldPoly::monomial(p, v)?)?;
            images.extend(img.terms().map(|(t, _)| t.clone()));
        }
    }
    Ok(MonomialIdeal::new(d, images))
}

/// `τ(I^λ)` in `F_p[x]`, computing levels until two consecutive ones agree
/// or `e_max` is reached.
pub fn test_ideal_monomial(
    i: &MonomialIdeal,
    lambda: &Rational,
    p: u64,
    e_max: u32,
    cap: u128,
) -> Result<TestIdealReport, CharPError> {
    let mut levels: Vec<MonomialIdeal> = Vec::new();
    let mut stabilized_at = None;
    let mut capped = false;
    for e in 1..=e_max.max(1) {
        match test_ideal_level(i, lambda, p, e, cap)? {
            Some(level) => {
                if levels.last() == Some(&level) {
                    stabilized_at = Some(e - 1);
                    levels.push(level);
                    break;
                }
                levels.push(level);
            }
            None => {
                capped = true;
                break;
            }
        }
    }
    let mut ideal = MonomialIdeal::zero(i.dim());
    for l in &levels {
        ideal = ideal.sum(l);
    }
    Ok(TestIdealReport {
        levels,
        ideal,
        stabilized_at,
        capped,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummandTestIdealReport {
    /// Through the Cartier maps of `K[S]` itself.
    pub intrinsic: SummandIdeal,
    pub intrinsic_stabilized_at: Option<u32>,
    /// `τ_R((IR)^λ) ∩ S`.
    pub retraction: SummandIdeal,
    pub polynomial: TestIdealReport,
    pub agree: bool,
    /// Coordinate projections of `L` surject and `p ∤ [ℤ^d : L]`.
    pub cartier_extensible: bool,
}

/// `Σ_u ψ^S_u(I^n)` inside `K[S]`, with `ψ^S_u(x^v) = x^{(v−u)/q}` when
/// `v − u ∈ qL`, for twists `u ∈ S` with `u_i ≤ g_i (q − 1)`. These are
/// `p^{-e}`-linear maps of `K[S]`, and images are automatically in `S`.
fn summand_level(s: &Semigroup, gens: &[Vec<u32>], lambda: &Rational, p: u64, e: u32, cap: u128) -> Result<Option<SummandIdeal>, CharPError> {
    let q = level_q(p, e)?;
    let n = power_exponent(lambda, q);
    let d = s.dim();
    if n == 0 {
        return Ok(Some(SummandIdeal::unit(d)));
    }
    if gens.is_empty() {
        return Ok(Some(SummandIdeal::new(s, vec![])?));
    }
    if composition_count(gens.len(), n) > cap {
        return Ok(None);
    }
    let mut prods: HashSet<Vec<i64>> = HashSet::new();
    for_each_product(gens, n, &mut |w| {
        prods.insert(w.iter().map(|&x| x as i64).collect());
    });
    let gcds = s.coordinate_gcds();
    let twist_top = gcds.iter().map(|&g| (g as u64 * (q - 1)) as u32).max().unwrap_or(0);
    let twists: Vec<Vec<i64>> = grid_points(d, twist_top)
        .into_iter()
        .filter(|u| u.iter().zip(&gcds).all(|(&ui, &g)| ui as u64 <= g as u64 * (q - 1)) && s.contains_exp(u))
        .map(|u| u.into_iter().map(|x| x as i64).collect())
        .collect();
    let index = s.index();
    let top: Vec<u32> = (0..d)
        .map(|c| {
            let m = prods.iter().map(|w| w[c]).max().unwrap_or(0) as u64;
            (m.div_ceil(q) + index - 1) as u32
        })
        .collect();
    let qi = q as i64;
    let ideal = SummandIdeal::from_box(s, &top, |t| {
        twists.iter().any(|u| {
            prods.iter().any(|w| {
                let v: Vec<i64> = (0..d).map(|c| qi * t[c] as i64 + u[c] - w[c]).collect();
                s.contains_signed(&v)
            })
        })
    })?;
    Ok(Some(ideal))
}

/// `τ_A(I^λ)` for `A = K[S]` and `I` generated by monomials of `S`, both
/// intrinsically and as `τ_R((IR)^λ) ∩ A`. Disagreement is an error when
/// the summand is Cartier extensible.
pub fn test_ideal_summand(
    s: &Semigroup,
    gens: &[Vec<u32>],
    lambda: &Rational,
    p: u64,
    e_max: u32,
    cap: u128,
) -> Result<SummandTestIdealReport, CharPError> {
    check_lambda(lambda)?;
    if !is_prime(p) {
        return Err(CharPError::NotPrime(p));
    }
    let index = s.index();
    if index % p == 0 {
        return Err(CharPError::IndexDivisible { p, index });
    }
    if s.has_subspace() {
        return Err(crate::toric::ToricError::SubspaceUnsupported.into());
    }
    for g in gens {
        if !s.contains_exp(g) {
            return Err(CharPError::NotInSummand(g.clone()));
        }
    }
    let mut levels: Vec<SummandIdeal> = Vec::new();
    let mut intrinsic_stabilized_at = None;
    for e in 1..=e_max.max(1) {
        match summand_level(s, gens, lambda, p, e, cap)? {
            Some(level) => {
                let done = levels.last() == Some(&level);
                levels.push(level);
                if done {
                    intrinsic_stabilized_at = Some(e - 1);
                    break;
                }
            }
            None => break,
        }
    }
    let mut all = Vec::new();
    for l in &levels {
        all.extend(l.generators().iter().cloned());
    }
    let intrinsic = SummandIdeal::new(s, all)?;
    let polynomial = test_ideal_monomial(&MonomialIdeal::new(s.dim(), gens.to_vec()), lambda, p, e_max, cap)?;
    let retraction = SummandIdeal::restrict(s, &polynomial.ideal)?;
    let agree = intrinsic == retraction;
    let cartier_extensible = s.projections_surject();
    if cartier_extensible && !agree {
        return Err(CharPError::RetractionMismatch {
            intrinsic: intrinsic.to_string(),
            retraction: retraction.to_string(),
        });
    }
    Ok(SummandTestIdealReport {
        intrinsic,
        intrinsic_stabilized_at,
        retraction,
        polynomial,
        agree,
        cartier_extensible,
    })
}
