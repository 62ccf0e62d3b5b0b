//! The hyperoctahedral group `(Z/2) wr S_n` and its permutation actions.

use std::fmt;

use super::perm::Perm;
use crate::error::{Error, Result};

/// `σ · prod_{i in I} s_i`: the flips act first, then the permutation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement {
    perm: Perm,
    flips: u64,
}

impl WreathElement {
    pub fn new(perm: Perm, flips: u64) -> Result<Self> {
        let n = perm.len();
        if n > 63 || (n < 64 && flips >> n != 0) {
            return Err(Error::SizeMismatch(format!("flip set outside 1..{n}")));
        }
        Ok(WreathElement { perm, flips })
    }

    pub fn identity(n: usize) -> Self {
        WreathElement { perm: Perm::identity(n), flips: 0 }
    }

    pub fn flip(n: usize, flips: u64) -> Result<Self> {
        WreathElement::new(Perm::identity(n), flips)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn flips(&self) -> u64 {
        self.flips
    }

    pub fn flip_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|i| self.flips >> i & 1 == 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.flips == 0 && self.perm.is_identity()
    }

    pub fn in_dn(&self) -> bool {
        self.flips.count_ones() % 2 == 0
    }

    pub fn inverse(&self) -> Self {
        // (σ s_I)^{-1} = s_I σ^{-1} = σ^{-1} s_{σ(I)}
        WreathElement { perm: self.perm.inverse(), flips: self.perm.apply_mask(self.flips) }
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fl: Vec<String> = self.flip_indices().iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}{}", self.perm, fl.join(""))
    }
}

/// `(σ s_I)(τ s_J) = στ · s_{τ^{-1}(I) Δ J}`.
pub fn wreath_mul(a: &WreathElement, b: &WreathElement) -> Result<WreathElement> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(format!("wreath product of sizes {} and {}", a.n(), b.n())));
    }
    Ok(WreathElement { perm: a.perm.compose(&b.perm), flips: b.perm.inverse().apply_mask(a.flips) ^ b.flips })
}

/// The underlying permutation.
pub fn rho(a: &WreathElement) -> Perm {
    a.perm.clone()
}

/// Action on `2n` points: `σ ⊕ σ` after the transpositions `(i, i+n)`, `i ∈ I`.
pub fn rho2(a: &WreathElement) -> Perm {
    let n = a.n();
    let mut img = vec![0; 2 * n];
    for i in 0..n {
        let s = a.perm.apply(i);
        let flipped = a.flips >> i & 1 == 1;
        img[i] = if flipped { s + n } else { s };
        img[i + n] = if flipped { s } else { s + n };
    }
    Perm::new(img).expect("bijective")
}

/// Even-weight vectors of `F_2^n` in increasing order; these index the
/// cosets `W(D_n)/S_n`.
pub fn even_vectors(n: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|v| v.count_ones() % 2 == 0).collect()
}

/// Action of `W(D_n)` on the cosets: `v ↦ σ(v + I)`.
pub fn dn_coset_action(n: usize, a: &WreathElement) -> Result<Perm> {
    if a.n() != n {
        return Err(Error::SizeMismatch(format!("element of size {} for n = {n}", a.n())));
    }
    if !a.in_dn() {
        return Err(Error::NotInDn(a.to_string()));
    }
    let vs = even_vectors(n);
    let index = |v: u64| vs.binary_search(&v).expect("even vector");
    let img = vs.iter().map(|&v| index(a.perm.apply_mask(v ^ a.flips))).collect();
    Perm::new(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: usize, cycles: &[&[usize]], flips: u64) -> WreathElement {
        WreathElement::new(Perm::from_cycles(n, cycles), flips).unwrap()
    }

    #[test]
    fn small_products() {
        let s1 = el(2, &[], 0b01);
        assert!(wreath_mul(&s1, &s1).unwrap().is_identity());
        let sigma = el(2, &[&[0, 1]], 0);
        // σ s_1 = s_2 σ
        let lhs = wreath_mul(&sigma, &s1).unwrap();
        let rhs = wreath_mul(&el(2, &[], 0b10), &sigma).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.flips(), 0b01);
        assert!(wreath_mul(&s1, &WreathElement::identity(3)).is_err());
    }

    #[test]
    fn rho2_examples() {
        assert_eq!(rho2(&el(2, &[], 0b01)), Perm::from_cycles(4, &[&[0, 2]]));
        assert_eq!(rho2(&el(2, &[&[0, 1]], 0)), Perm::from_cycles(4, &[&[0, 1], &[2, 3]]));
    }

    #[test]
    fn coset_swap() {
        let a = dn_coset_action(2, &el(2, &[], 0b11)).unwrap();
        assert_eq!(a.images(), &[1, 0]);
        assert!(matches!(dn_coset_action(2, &el(2, &[], 0b01)), Err(Error::NotInDn(_))));
        assert!(dn_coset_action(4, &WreathElement::identity(4)).unwrap().is_identity());
    }

    #[test]
    fn inverse_is_inverse() {
        let x = el(3, &[&[0, 1, 2]], 0b011);
        assert!(wreath_mul(&x, &x.inverse()).unwrap().is_identity());
        assert!(wreath_mul(&x.inverse(), &x).unwrap().is_identity());
    }
}
