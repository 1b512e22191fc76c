//! Rational polyhedra in inequality form, decided by Fourier–Motzkin
//! elimination with exact strict-inequality bookkeeping.

use super::Rational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedronError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `⟨w, x⟩ ≥ c`, or `> c` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub w: Vec<Rational>,
    pub c: Rational,
    pub strict: bool,
}

impl Inequality {
    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let v: Rational = self.w.iter().zip(x).map(|(a, b)| a * b).sum();
        if self.strict {
            v > self.c
        } else {
            v >= self.c
        }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(&self) -> Inequality {
        match self.w.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => {
                let s = lead.abs();
                Inequality {
                    w: self.w.iter().map(|c| c / &s).collect(),
                    c: &self.c / &s,
                    strict: self.strict,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// The maximum, attained.
    Optimal(Rational),
    /// The supremum, not attained because of a strict inequality.
    Supremum(Rational),
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedronQ {
    dim: usize,
    rows: Vec<Inequality>,
}

impl PolyhedronQ {
    /// The whole space of the given dimension.
    pub fn new(dim: usize) -> Self {
        PolyhedronQ { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    fn check(&self, n: usize) -> Result<(), PolyhedronError> {
        if n == self.dim {
            Ok(())
        } else {
            Err(PolyhedronError::DimensionMismatch {
                expected: self.dim,
                got: n,
            })
        }
    }

    /// Adds `⟨w, x⟩ ≥ c` (or `> c`).
    pub fn add_ge(&mut self, w: Vec<Rational>, c: Rational, strict: bool) -> Result<(), PolyhedronError> {
        self.check(w.len())?;
        self.rows.push(Inequality { w, c, strict });
        Ok(())
    }

    /// Adds `⟨w, x⟩ ≤ c` (or `< c`).
    pub fn add_le(&mut self, w: Vec<Rational>, c: Rational, strict: bool) -> Result<(), PolyhedronError> {
        self.add_ge(w.iter().map(|a| -a).collect(), -c, strict)
    }

    /// Adds `⟨w, x⟩ = c`.
    pub fn add_eq(&mut self, w: Vec<Rational>, c: Rational) -> Result<(), PolyhedronError> {
        self.add_ge(w.clone(), c.clone(), false)?;
        self.add_le(w, c, false)
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool, PolyhedronError> {
        self.check(x.len())?;
        Ok(self.rows.iter().all(|r| r.holds_at(x)))
    }

    /// Projects onto the first `keep` coordinates by eliminating the rest.
    /// Returns `None` if the system is found infeasible.
    pub fn project(&self, keep: usize) -> Option<PolyhedronQ> {
        assert!(keep <= self.dim);
        let mut rows = simplify(self.rows.clone())?;
        for j in (keep..self.dim).rev() {
            rows = eliminate(&rows, j)?;
        }
        let rows = rows
            .into_iter()
            .map(|r| Inequality {
                w: r.w[..keep].to_vec(),
                c: r.c,
                strict: r.strict,
            })
            .collect();
        Some(PolyhedronQ { dim: keep, rows })
    }

    pub fn is_feasible(&self) -> bool {
        self.project(0).is_some()
    }

    /// Maximizes `⟨objective, x⟩` over the polyhedron.
    pub fn maximize(&self, objective: &[Rational]) -> Result<LpOutcome, PolyhedronError> {
        self.check(objective.len())?;
        // New coordinate t in front, constrained to equal the objective.
        let mut rows = Vec::with_capacity(self.rows.len() + 2);
        let mut w = vec![Rational::one()];
        w.extend(objective.iter().map(|a| -a));
        rows.push(Inequality {
            w: w.clone(),
            c: Rational::zero(),
            strict: false,
        });
        rows.push(Inequality {
            w: w.iter().map(|a| -a).collect(),
            c: Rational::zero(),
            strict: false,
        });
        for r in &self.rows {
            let mut w = vec![Rational::zero()];
            w.extend(r.w.iter().cloned());
            rows.push(Inequality {
                w,
                c: r.c.clone(),
                strict: r.strict,
            });
        }
        let lifted = PolyhedronQ {
            dim: self.dim + 1,
            rows,
        };
        let Some(proj) = lifted.project(1) else {
            return Ok(LpOutcome::Infeasible);
        };
        let mut best: Option<(Rational, bool)> = None;
        for r in proj.rows {
            let a = &r.w[0];
            if a.is_negative() {
                let bound = &r.c / a;
                best = match best {
                    None => Some((bound, r.strict)),
                    Some((b, s)) => {
                        if bound < b {
                            Some((bound, r.strict))
                        } else if bound == b {
                            Some((b, s || r.strict))
                        } else {
                            Some((b, s))
                        }
                    }
                };
            }
        }
        Ok(match best {
            None => LpOutcome::Unbounded,
            Some((b, false)) => LpOutcome::Optimal(b),
            Some((b, true)) => LpOutcome::Supremum(b),
        })
    }
}

/// Normalizes, drops trivial rows and keeps only the tightest row per
/// direction. `None` means a trivially violated row was found.
fn simplify(rows: Vec<Inequality>) -> Option<Vec<Inequality>> {
    let mut best: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    for r in rows {
        let r = r.normalized();
        if r.w.iter().all(|c| c.is_zero()) {
            let zero = Rational::zero();
            let ok = if r.strict { zero > r.c } else { zero >= r.c };
            if !ok {
                return None;
            }
            continue;
        }
        match best.get_mut(&r.w) {
            None => {
                best.insert(r.w, (r.c, r.strict));
            }
            Some(entry) => {
                if r.c > entry.0 || (r.c == entry.0 && r.strict) {
                    *entry = (r.c, r.strict);
                }
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(w, (c, strict))| Inequality { w, c, strict })
            .collect(),
    )
}

fn eliminate(rows: &[Inequality], j: usize) -> Option<Vec<Inequality>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        if r.w[j].is_positive() {
            pos.push(r);
        } else if r.w[j].is_negative() {
            neg.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = &p.w[j];
            let b = -&n.w[j];
            let w: Vec<Rational> = p.w.iter().zip(&n.w).map(|(x, y)| x * &b + y * a).collect();
            let c = &p.c * &b + &n.c * a;
            out.push(Inequality {
                w,
                c,
                strict: p.strict || n.strict,
            });
        }
    }
    simplify(out)
}
