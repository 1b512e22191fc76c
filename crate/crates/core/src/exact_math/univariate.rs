//! Univariate helpers: falling factorials, binomial polynomials and
//! rational root finding.

use super::poly::{MultiPoly, VarList};
use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// `θ_i (θ_i - 1) ⋯ (θ_i - k + 1)` as a polynomial in variable `i`.
pub fn falling_factorial(vars: &VarList, i: usize, k: u32) -> MultiPoly {
    let x = MultiPoly::var_index(vars, i);
    let mut acc = MultiPoly::one(vars);
    for j in 0..k {
        let factor = &x - &MultiPoly::constant(vars, Rational::from_integer(j.into()));
        acc = &acc * &factor;
    }
    acc
}

/// `n (n-1) ⋯ (n-k+1)` for an integer `n`.
pub fn falling_factorial_int(n: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k as i64 {
        acc *= BigInt::from(n - j);
    }
    acc
}

/// `binom(θ_i, k) = falling(θ_i, k) / k!`.
pub fn binomial_poly(vars: &VarList, i: usize, k: u32) -> MultiPoly {
    let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
    falling_factorial(vars, i, k).scale(&Rational::new(BigInt::one(), fact))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("polynomial must be univariate in a single variable")]
    NotUnivariate,
    #[error("zero polynomial has no finite root multiset")]
    ZeroPolynomial,
    #[error("factor {0} has no rational roots")]
    IrrationalFactor(String),
}

/// Roots with multiplicities, sorted ascending.
pub type RootMultiset = Vec<(Rational, u32)>;

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Finds all roots of a univariate polynomial over the rationals. The
/// polynomial must split completely; otherwise the unsplit factor is
/// reported.
pub fn rational_roots(p: &MultiPoly) -> Result<RootMultiset, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let active: Vec<usize> = (0..p.nvars()).filter(|&i| p.degree_in(i) > 0).collect();
    if active.len() > 1 {
        return Err(RootError::NotUnivariate);
    }
    let Some(&var) = active.first() else {
        return Ok(Vec::new());
    };
    let deg = p.degree_in(var) as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.0[var] as usize] = c.clone();
    }
    // Integer coefficients, constant term first.
    let l = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();

    let mut roots: Vec<(Rational, u32)> = Vec::new();
    let push = |r: Rational, roots: &mut Vec<(Rational, u32)>| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some(e) => e.1 += 1,
        None => roots.push((r, 1)),
    };
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        push(Rational::zero(), &mut roots);
    }
    'outer: while ints.len() > 1 {
        let a0 = ints[0].clone();
        let an = ints[ints.len() - 1].clone();
        let ps = divisors(&a0);
        let qs = divisors(&an);
        let mut cands: Vec<Rational> = Vec::new();
        for pd in &ps {
            for qd in &qs {
                let r = Rational::new(pd.clone(), qd.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            // Horner evaluation from the top.
            let mut acc = Rational::zero();
            for c in ints.iter().rev() {
                acc = acc * &r + Rational::from_integer(c.clone());
            }
            if acc.is_zero() {
                // Divide by (q x - p) where r = p/q.
                let (pn, qn) = (r.numer().clone(), r.denom().clone());
                let n = ints.len() - 1;
                let mut quot = vec![BigInt::zero(); n];
                let mut carry = BigInt::zero();
                for k in (0..n).rev() {
                    // coefficient of x^{k+1} in remainder chain
                    let top = &ints[k + 1] + &carry;
                    let qk = &top / &qn;
                    quot[k] = qk.clone();
                    carry = &qk * &pn;
                }
                ints = quot;
                push(r, &mut roots);
                continue 'outer;
            }
        }
        let rest = MultiPoly::from_terms(
            p.vars(),
            ints.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; p.nvars()];
                e[var] = k.to_u32().expect("degree fits");
                (e, Rational::from_integer(c.clone()))
            }),
        );
        return Err(RootError::IrrationalFactor(rest.to_string()));
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{int, rat};

    #[test]
    fn roots_of_known_b_functions() {
        let v = VarList::new(&["s"]);
        let b = MultiPoly::parse("(s+1)^2*(s+2)*(s+1/2)*(s+2/3)*(s+4/3)", &v).unwrap();
        let r = rational_roots(&b).unwrap();
        assert_eq!(
            r,
            vec![
                (int(-2), 1),
                (rat(-4, 3), 1),
                (int(-1), 2),
                (rat(-2, 3), 1),
                (rat(-1, 2), 1)
            ]
        );
        let c = MultiPoly::parse("s^2*(s^2-2)", &v).unwrap();
        assert!(matches!(rational_roots(&c), Err(RootError::IrrationalFactor(_))));
    }

    #[test]
    fn falling_and_binomial() {
        let v = VarList::new(&["t"]);
        let f = falling_factorial(&v, 0, 3);
        assert_eq!(f.eval_int(&[5]), int(60));
        assert_eq!(binomial_poly(&v, 0, 2).eval_int(&[4]), int(6));
        assert_eq!(falling_factorial_int(8, 4), BigInt::from(1680));
    }
}
