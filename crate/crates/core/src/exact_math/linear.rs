//! Exact linear solving by fraction-free (Bareiss) elimination.
//!
//! Systems are first split into connected components of the
//! unknown/equation incidence graph; each component is eliminated
//! independently on a dense integer matrix.

use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// Every solution is `particular + span(nullspace)`.
    Solved {
        particular: Vec<Rational>,
        nullspace: Vec<Vec<Rational>>,
    },
    Infeasible,
}

impl LinearSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LinearSolution::Solved { .. })
    }
}

/// Solves the dense system `A x = b`.
pub fn solve_linear_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<LinearSolution, LinearError> {
    if a.len() != b.len() {
        return Err(LinearError::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            a.len(),
            b.len()
        )));
    }
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    if let Some(i) = a.iter().position(|r| r.len() != ncols) {
        return Err(LinearError::DimensionMismatch(format!(
            "row {i} has length {} but row 0 has length {ncols}",
            a[i].len()
        )));
    }
    let rows = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let entries = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.clone()))
                .collect();
            (entries, rhs.clone())
        })
        .collect::<Vec<_>>();
    Ok(solve_sparse(ncols, &rows, true))
}

/// A sparse equation: coefficients by column, and the right-hand side.
pub type SparseRow = (BTreeMap<usize, Rational>, Rational);

/// Solves a sparse system over `ncols` unknowns. With `with_nullspace`
/// false only a particular solution is produced.
pub fn solve_sparse(ncols: usize, rows: &[SparseRow], with_nullspace: bool) -> LinearSolution {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (entries, rhs) in rows {
        let mut it = entries.keys();
        match it.next() {
            None => {
                if !rhs.is_zero() {
                    return LinearSolution::Infeasible;
                }
            }
            Some(&first) => {
                for &j in it {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut comp_cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..ncols {
        let r = find(&mut parent, j);
        comp_cols.entry(r).or_default().push(j);
    }
    let mut comp_rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (entries, _)) in rows.iter().enumerate() {
        if let Some(&j) = entries.keys().next() {
            let r = find(&mut parent, j);
            comp_rows.entry(r).or_default().push(i);
        }
    }

    let mut particular = vec![Rational::zero(); ncols];
    let mut nullspace = Vec::new();
    for (root, cols) in &comp_cols {
        let row_ids = comp_rows.get(root).cloned().unwrap_or_default();
        let local: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let sub: Vec<(Vec<(usize, Rational)>, Rational)> = row_ids
            .iter()
            .map(|&i| {
                let (entries, rhs) = &rows[i];
                (entries.iter().map(|(j, c)| (local[j], c.clone())).collect(), rhs.clone())
            })
            .collect();
        let all_zero_rhs = sub.iter().all(|(_, r)| r.is_zero());
        if all_zero_rhs && !with_nullspace {
            continue;
        }
        match solve_dense_component(cols.len(), &sub, with_nullspace) {
            None => return LinearSolution::Infeasible,
            Some((x, ns)) => {
                for (k, v) in x.into_iter().enumerate() {
                    particular[cols[k]] = v;
                }
                for vec in ns {
                    let mut full = vec![Rational::zero(); ncols];
                    for (k, v) in vec.into_iter().enumerate() {
                        full[cols[k]] = v;
                    }
                    nullspace.push(full);
                }
            }
        }
    }
    // Order nullspace vectors by their free column for determinism.
    nullspace.sort_by_key(|v| v.iter().rposition(|c| !c.is_zero()));
    LinearSolution::Solved {
        particular,
        nullspace,
    }
}

type Component = (Vec<Rational>, Vec<Vec<Rational>>);

fn solve_dense_component(
    n: usize,
    rows: &[(Vec<(usize, Rational)>, Rational)],
    with_nullspace: bool,
) -> Option<Component> {
    // Clear denominators row by row so the matrix is integral.
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|(entries, rhs)| {
            let l = entries
                .iter()
                .map(|(_, c)| c.denom().clone())
                .fold(rhs.denom().clone(), |acc, d| acc.lcm(&d));
            let mut row = vec![BigInt::zero(); n + 1];
            for (j, c) in entries {
                row[*j] = (c * Rational::from_integer(l.clone())).to_integer();
            }
            row[n] = (rhs * Rational::from_integer(l.clone())).to_integer();
            row
        })
        .collect();

    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..n {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            if factor.is_zero() {
                for x in row.iter_mut().skip(col + 1) {
                    if !x.is_zero() {
                        *x = (&*x * &pv) / &prev;
                    }
                }
            } else {
                for (j, x) in row.iter_mut().enumerate().skip(col + 1) {
                    let v = &*x * &pv - &factor * &pivot_row[j];
                    *x = v / &prev;
                }
                row[col] = BigInt::zero();
            }
        }
        prev = pv;
        pivots.push(col);
        r += 1;
    }
    if m.iter().skip(r).any(|row| !row[n].is_zero()) {
        return None;
    }

    let back_sub = |rhs_col: Option<usize>, free: Option<usize>| -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        if let Some(f) = free {
            x[f] = Rational::one();
        }
        for (pi, &pc) in pivots.iter().enumerate().rev() {
            let row = &m[pi];
            let mut acc = match rhs_col {
                Some(c) => Rational::from_integer(row[c].clone()),
                None => Rational::zero(),
            };
            for j in pc + 1..n {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rational::from_integer(row[pc].clone());
        }
        x
    };

    let particular = back_sub(Some(n), None);
    let mut ns = Vec::new();
    if with_nullspace {
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in (0..n).filter(|&j| !is_pivot[j]) {
            ns.push(back_sub(None, Some(f)));
        }
    }
    Some((particular, ns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{int, rat};

    fn check(a: &[Vec<Rational>], b: &[Rational], sol: &LinearSolution) {
        if let LinearSolution::Solved {
            particular,
            nullspace,
        } = sol
        {
            for (row, rhs) in a.iter().zip(b) {
                let v: Rational = row.iter().zip(particular).map(|(x, y)| x * y).sum();
                assert_eq!(&v, rhs);
                for nvec in nullspace {
                    let w: Rational = row.iter().zip(nvec).map(|(x, y)| x * y).sum();
                    assert!(w.is_zero());
                }
            }
        }
    }

    #[test]
    fn identity_system() {
        let a = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let b = vec![rat(3, 2), int(-7)];
        let sol = solve_linear_exact(&a, &b).unwrap();
        assert_eq!(
            sol,
            LinearSolution::Solved {
                particular: b.clone(),
                nullspace: vec![]
            }
        );
    }

    #[test]
    fn one_row_nullspace() {
        let a = vec![vec![int(1), int(1)]];
        let sol = solve_linear_exact(&a, &[int(0)]).unwrap();
        match &sol {
            LinearSolution::Solved { nullspace, .. } => {
                assert_eq!(nullspace.len(), 1);
                assert_eq!(nullspace[0], vec![int(-1), int(1)]);
            }
            _ => panic!(),
        }
        check(&a, &[int(0)], &sol);
    }

    #[test]
    fn infeasible_and_mismatch() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(
            solve_linear_exact(&a, &[int(1), int(3)]).unwrap(),
            LinearSolution::Infeasible
        );
        assert!(solve_linear_exact(&a, &[int(1)]).is_err());
    }

    #[test]
    fn rank_deficient_with_fractions() {
        let a = vec![
            vec![rat(1, 2), int(1), int(0), int(3)],
            vec![int(1), int(2), int(1), int(0)],
            vec![int(0), int(0), int(1), int(-6)],
        ];
        let b = vec![int(1), int(3), int(1)];
        let sol = solve_linear_exact(&a, &b).unwrap();
        assert!(sol.is_feasible());
        check(&a, &b, &sol);
    }
}
