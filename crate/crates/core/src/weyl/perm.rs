use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Perm> {
        if images.contains(&0) {
            return Err(Error::InvalidInput("permutation entries are 1-based".into()));
        }
        Perm::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Product of disjoint-or-not transpositions applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Perm {
        let mut p = Perm::identity(n);
        for c in cycles.iter().rev() {
            let mut img: Vec<usize> = (0..n).collect();
            for k in 0..c.len() {
                img[c[k]] = c[(k + 1) % c.len()];
            }
            p = Perm(img).compose(&p);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Image of a subset under the permutation.
    pub fn apply_mask(&self, mask: u64) -> u64 {
        let mut out = 0;
        for (i, &j) in self.0.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out |= 1 << j;
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for s in 0..self.0.len() {
            if seen[s] || self.0[s] == s {
                continue;
            }
            let mut cyc = vec![];
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.0[i];
            }
            write!(f, "({})", cyc.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order() {
        let a = Perm::from_cycles(3, &[&[0, 1]]);
        let b = Perm::from_cycles(3, &[&[1, 2]]);
        // a ∘ b sends 1 -> 2 -> 2, 2 -> 1 -> 0.
        assert_eq!(a.compose(&b).images(), &[1, 2, 0]);
        assert!(a.compose(&a).is_identity());
        let c = Perm::new(vec![2, 0, 1]).unwrap();
        assert!(c.compose(&c.inverse()).is_identity());
        assert!(Perm::new(vec![0, 0]).is_err());
        assert_eq!(c.to_string(), "(1 3 2)");
        assert_eq!(a.apply_mask(0b001), 0b010);
    }
}
