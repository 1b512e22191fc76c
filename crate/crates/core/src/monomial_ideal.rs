//! Monomial ideals given by a minimal antichain of exponent vectors.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<Vec<u32>>,
}

fn le(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    /// Builds the ideal and reduces the generators to a sorted antichain.
    pub fn new(dim: usize, gens: Vec<Vec<u32>>) -> Self {
        for g in &gens {
            assert_eq!(g.len(), dim, "generator length mismatch");
        }
        let mut gens = gens;
        gens.sort();
        gens.dedup();
        let minimal: Vec<Vec<u32>> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && le(h, g)))
            .cloned()
            .collect();
        MonomialIdeal { dim, gens: minimal }
    }

    pub fn zero(dim: usize) -> Self {
        MonomialIdeal { dim, gens: vec![] }
    }

    pub fn unit(dim: usize) -> Self {
        MonomialIdeal {
            dim,
            gens: vec![vec![0; dim]],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.gens.iter().any(|g| le(g, v))
    }

    /// Membership for signed exponents; negative coordinates are outside.
    pub fn contains_signed(&self, v: &[i64]) -> bool {
        if v.iter().any(|&x| x < 0) {
            return false;
        }
        self.gens
            .iter()
            .any(|g| g.iter().zip(v).all(|(&a, &b)| a as i64 <= b))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Self::new(self.dim, g)
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::new(self.dim, g)
    }

    pub fn power(&self, k: u32) -> Self {
        let mut acc = Self::unit(self.dim);
        for _ in 0..k {
            acc = acc.product(self);
        }
        acc
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
            }
        }
        Self::new(self.dim, g)
    }

    /// Largest generator exponent in each coordinate.
    pub fn max_exponents(&self) -> Vec<u32> {
        (0..self.dim)
            .map(|i| self.gens.iter().map(|g| g[i]).max().unwrap_or(0))
            .collect()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| format!("({})", g.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_and_membership() {
        let i = MonomialIdeal::new(2, vec![vec![1, 1], vec![2, 1], vec![0, 3]]);
        assert_eq!(i.generators(), &[vec![0, 3], vec![1, 1]]);
        assert!(i.contains(&[5, 1]));
        assert!(!i.contains(&[5, 0]));
        let sq = MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(sq.power(2).generators().len(), 3);
        assert!(sq.power(2).is_subset_of(&sq));
    }
}
