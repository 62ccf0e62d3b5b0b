//! Field backends and their square-class groups.
//!
//! A [`SquareClass`] is a canonical representative of `k*/k*^2`. Each backend
//! fixes an F_2-basis of that group, which the symbol calculus relies on.

pub mod arith;
mod hilbert;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use hilbert::{hilbert_symbol, Place};

/// Largest number of formal variables supported (masks are `u64`).
pub const MAX_FORMAL_VARS: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldDescriptor {
    Rationals,
    FiniteField(u64),
    Reals,
    /// `R((t_1))...((t_g))`.
    Formal(u32),
}

impl FieldDescriptor {
    pub fn finite_field(p: u64) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Error::BadBackend(format!("fp:{p} needs an odd prime")));
        }
        Ok(FieldDescriptor::FiniteField(p))
    }

    pub fn formal(g: u32) -> Result<Self> {
        if g > MAX_FORMAL_VARS {
            return Err(Error::BadBackend(format!("formal:{g} exceeds {MAX_FORMAL_VARS} variables")));
        }
        Ok(FieldDescriptor::Formal(g))
    }

    /// Number of orderings for the real-closed style backends.
    pub fn ordering_count(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Reals => Some(1),
            FieldDescriptor::Formal(g) => Some(1u64 << g),
            _ => None,
        }
    }

    pub fn trivial(&self) -> SquareClass {
        match *self {
            FieldDescriptor::Rationals => SquareClass::Rational { primes: vec![], neg: false },
            FieldDescriptor::FiniteField(p) => SquareClass::Finite { p, nonsquare: false },
            FieldDescriptor::Reals => SquareClass::Real { neg: false },
            FieldDescriptor::Formal(g) => SquareClass::Formal { g, mask: 0 },
        }
    }

    pub fn minus_one(&self) -> SquareClass {
        match *self {
            FieldDescriptor::Rationals => SquareClass::Rational { primes: vec![], neg: true },
            FieldDescriptor::FiniteField(p) => SquareClass::Finite { p, nonsquare: p % 4 == 3 },
            FieldDescriptor::Reals => SquareClass::Real { neg: true },
            FieldDescriptor::Formal(g) => SquareClass::Formal { g, mask: 1 },
        }
    }

    pub fn two(&self) -> SquareClass {
        match *self {
            FieldDescriptor::Rationals => SquareClass::Rational { primes: vec![2], neg: false },
            FieldDescriptor::FiniteField(p) => SquareClass::Finite { p, nonsquare: arith::legendre(2, p) == -1 },
            _ => self.trivial(),
        }
    }

    /// Class of the formal variable `t_i` (1-based).
    pub fn t(&self, i: u32) -> Result<SquareClass> {
        match *self {
            FieldDescriptor::Formal(g) if (1..=g).contains(&i) => Ok(SquareClass::Formal { g, mask: 1u64 << i }),
            FieldDescriptor::Formal(g) => Err(Error::InvalidInput(format!("t{i} is not a variable of formal:{g}"))),
            other => Err(Error::UnsupportedBackend(other.to_string())),
        }
    }

    /// Formal class from a sign and a set of 1-based variable indices.
    pub fn formal_class(&self, neg: bool, gens: &[u32]) -> Result<SquareClass> {
        let mut c = if neg { self.minus_one() } else { self.trivial() };
        for &i in gens {
            c = c.mul(&self.t(i)?)?;
        }
        Ok(c)
    }

    /// Square class of a nonzero rational number.
    pub fn class_of(&self, x: &BigRational) -> Result<SquareClass> {
        canonicalize_with_bound(self, x, arith::DEFAULT_FACTOR_BOUND)
    }

    pub fn class_of_int(&self, x: i64) -> Result<SquareClass> {
        self.class_of(&BigRational::from_integer(BigInt::from(x)))
    }

    pub fn check_same(&self, other: &FieldDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BackendMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "q"),
            FieldDescriptor::FiniteField(p) => write!(f, "fp:{p}"),
            FieldDescriptor::Reals => write!(f, "r"),
            FieldDescriptor::Formal(g) => write!(f, "formal:{g}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "q" | "Q" => return Ok(FieldDescriptor::Rationals),
            "r" | "R" => return Ok(FieldDescriptor::Reals),
            _ => {}
        }
        let bad = || Error::BadBackend(format!("unknown field descriptor {s:?}"));
        if let Some(p) = s.strip_prefix("fp:") {
            return FieldDescriptor::finite_field(p.parse().map_err(|_| bad())?);
        }
        if let Some(g) = s.strip_prefix("formal:") {
            return FieldDescriptor::formal(g.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

/// Canonical representative of a square class.
///
/// Rational classes are signed squarefree integers stored as their sign and
/// ascending prime support. Formal classes use bit 0 for `-1` and bit `i` for
/// `t_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SquareClass {
    Rational { primes: Vec<u64>, neg: bool },
    Finite { p: u64, nonsquare: bool },
    Real { neg: bool },
    Formal { g: u32, mask: u64 },
}

impl SquareClass {
    pub fn field(&self) -> FieldDescriptor {
        match *self {
            SquareClass::Rational { .. } => FieldDescriptor::Rationals,
            SquareClass::Finite { p, .. } => FieldDescriptor::FiniteField(p),
            SquareClass::Real { .. } => FieldDescriptor::Reals,
            SquareClass::Formal { g, .. } => FieldDescriptor::Formal(g),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Rational { primes, neg } => primes.is_empty() && !neg,
            SquareClass::Finite { nonsquare, .. } => !nonsquare,
            SquareClass::Real { neg } => !neg,
            SquareClass::Formal { mask, .. } => *mask == 0,
        }
    }

    /// Product in `k*/k*^2`.
    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        use SquareClass::*;
        match (self, other) {
            (Rational { primes: a, neg: x }, Rational { primes: b, neg: y }) => {
                Ok(Rational { primes: arith::sym_diff(a, b), neg: x ^ y })
            }
            (Finite { p, nonsquare: x }, Finite { p: q, nonsquare: y }) if p == q => {
                Ok(Finite { p: *p, nonsquare: x ^ y })
            }
            (Real { neg: x }, Real { neg: y }) => Ok(Real { neg: x ^ y }),
            (Formal { g, mask: a }, Formal { g: h, mask: b }) if g == h => Ok(Formal { g: *g, mask: a ^ b }),
            _ => Err(Error::BackendMismatch(self.field().to_string(), other.field().to_string())),
        }
    }

    /// `-a`.
    pub fn negate(&self) -> SquareClass {
        self.mul(&self.field().minus_one()).expect("same field")
    }

    /// Decomposition into the backend's fixed F_2-basis, ascending.
    pub fn basis(&self) -> Vec<SquareClass> {
        match self {
            SquareClass::Rational { primes, neg } => {
                let mut out = Vec::with_capacity(primes.len() + 1);
                if *neg {
                    out.push(SquareClass::Rational { primes: vec![], neg: true });
                }
                out.extend(primes.iter().map(|&p| SquareClass::Rational { primes: vec![p], neg: false }));
                out
            }
            SquareClass::Finite { p, nonsquare } => {
                if *nonsquare {
                    vec![SquareClass::Finite { p: *p, nonsquare: true }]
                } else {
                    vec![]
                }
            }
            SquareClass::Real { neg } => {
                if *neg {
                    vec![SquareClass::Real { neg: true }]
                } else {
                    vec![]
                }
            }
            SquareClass::Formal { g, mask } => (0..=*g)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| SquareClass::Formal { g: *g, mask: 1u64 << i })
                .collect(),
        }
    }

    /// Signed squarefree integer representing a rational class.
    pub fn rational_value(&self) -> Option<BigInt> {
        match self {
            SquareClass::Rational { primes, neg } => Some(arith::product(primes, *neg)),
            _ => None,
        }
    }

    /// Sign under the ordering encoded by `neg_mask`: bit `i` set means
    /// `t_{i+1} < 0`. Returns `true` for negative.
    pub fn negative_under(&self, neg_mask: u64) -> bool {
        match self {
            SquareClass::Real { neg } => *neg,
            SquareClass::Formal { mask, .. } => ((mask & 1) as u32 + ((mask >> 1) & neg_mask).count_ones()) % 2 == 1,
            _ => false,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Rational { .. } => write!(f, "{}", self.rational_value().unwrap()),
            SquareClass::Finite { nonsquare, .. } => {
                write!(f, "{}", if *nonsquare { "nonsquare" } else { "1" })
            }
            SquareClass::Real { neg } => write!(f, "{}", if *neg { "-1" } else { "1" }),
            SquareClass::Formal { mask, .. } => {
                let mut parts = Vec::new();
                if mask & 1 == 1 {
                    parts.push("-1".to_string());
                }
                for i in 1..64 {
                    if mask >> i & 1 == 1 {
                        parts.push(format!("t{i}"));
                    }
                }
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join("*"))
                }
            }
        }
    }
}

/// Whether the classes are F_2-linearly independent in `k*/k*^2`.
pub fn are_independent(classes: &[SquareClass]) -> bool {
    let mut pivots: std::collections::BTreeMap<SquareClass, SquareClass> = Default::default();
    for c in classes {
        let mut v = c.clone();
        loop {
            let Some(lead) = v.basis().pop() else {
                return false;
            };
            match pivots.get(&lead) {
                Some(p) => v = v.mul(p).expect("same field"),
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    true
}

/// Canonical square class of a nonzero rational, factoring with trial
/// division up to `bound`.
pub fn canonicalize_with_bound(field: &FieldDescriptor, x: &BigRational, bound: u64) -> Result<SquareClass> {
    if x.is_zero() {
        return Err(Error::ZeroElement(x.to_string()));
    }
    let neg = x.is_negative();
    match *field {
        FieldDescriptor::Rationals => {
            let a = arith::odd_support(x.numer().magnitude(), bound)?;
            let b = arith::odd_support(x.denom().magnitude(), bound)?;
            Ok(SquareClass::Rational { primes: arith::sym_diff(&a, &b), neg })
        }
        FieldDescriptor::FiniteField(p) => {
            let n = arith::big_mod(x.numer(), p);
            let d = arith::big_mod(x.denom(), p);
            if n == 0 || d == 0 {
                return Err(Error::ZeroElement(format!("{x} mod {p}")));
            }
            Ok(SquareClass::Finite { p, nonsquare: arith::legendre(arith::mul_mod(n, d, p), p) == -1 })
        }
        FieldDescriptor::Reals => Ok(SquareClass::Real { neg }),
        FieldDescriptor::Formal(g) => Ok(SquareClass::Formal { g, mask: neg as u64 }),
    }
}

/// Canonical square class of a nonzero rational with the default bound.
pub fn canonicalize(field: &FieldDescriptor, x: &BigRational) -> Result<SquareClass> {
    canonicalize_with_bound(field, x, arith::DEFAULT_FACTOR_BOUND)
}

/// Canonical class of the Laurent monomial `c * t_1^e_1 ... t_g^e_g` over a
/// formal backend; only the leading term matters for the square class.
pub fn canonicalize_formal(field: &FieldDescriptor, coeff: &BigRational, exponents: &[i64]) -> Result<SquareClass> {
    let FieldDescriptor::Formal(g) = *field else {
        return Err(Error::UnsupportedBackend(field.to_string()));
    };
    if exponents.len() != g as usize {
        return Err(Error::SizeMismatch(format!("{} exponents for formal:{g}", exponents.len())));
    }
    if coeff.is_zero() {
        return Err(Error::ZeroElement("zero leading coefficient".into()));
    }
    let mut mask = coeff.is_negative() as u64;
    for (i, e) in exponents.iter().enumerate() {
        if e.rem_euclid(2) == 1 {
            mask |= 1u64 << (i + 1);
        }
    }
    Ok(SquareClass::Formal { g, mask })
}

/// Product of two classes.
pub fn sq_mul(a: &SquareClass, b: &SquareClass) -> Result<SquareClass> {
    a.mul(b)
}

/// Sign of `a` under an ordering given as one `+1`/`-1` per formal variable
/// (empty for the reals).
pub fn signature_at(a: &SquareClass, ordering: &[i8]) -> Result<i8> {
    let field = a.field();
    let expected = match field {
        FieldDescriptor::Reals => 0,
        FieldDescriptor::Formal(g) => g as usize,
        other => return Err(Error::UnsupportedBackend(other.to_string())),
    };
    if ordering.len() != expected {
        return Err(Error::OrderingLengthMismatch { expected, got: ordering.len() });
    }
    let mut neg_mask = 0u64;
    for (i, &s) in ordering.iter().enumerate() {
        match s {
            1 => {}
            -1 => neg_mask |= 1 << i,
            _ => return Err(Error::InvalidInput(format!("ordering entry {s} is not +-1"))),
        }
    }
    Ok(if a.negative_under(neg_mask) { -1 } else { 1 })
}

/// Convert a mask-encoded ordering to its `+-1` list.
pub fn ordering_from_mask(g: u32, neg_mask: u64) -> Vec<i8> {
    (0..g).map(|i| if neg_mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> SquareClass {
        FieldDescriptor::Rationals.class_of_int(n).unwrap()
    }

    #[test]
    fn canonical_rational_examples() {
        assert_eq!(q(18), q(2));
        assert_eq!(q(-50), q(-2));
        assert_eq!(q(-50).rational_value().unwrap(), BigInt::from(-2));
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(FieldDescriptor::Rationals.class_of(&third).unwrap(), q(3));
        assert!(matches!(FieldDescriptor::Rationals.class_of_int(0), Err(Error::ZeroElement(_))));
    }

    #[test]
    fn sq_mul_examples() {
        assert_eq!(sq_mul(&q(2), &q(3)).unwrap(), q(6));
        assert_eq!(sq_mul(&q(6), &q(10)).unwrap(), q(15));
        assert_eq!(sq_mul(&q(-1), &q(-1)).unwrap(), q(1));
        let f = FieldDescriptor::Formal(2);
        assert!(matches!(sq_mul(&q(2), &f.t(1).unwrap()), Err(Error::BackendMismatch(..))));
    }

    #[test]
    fn finite_field_classes() {
        let f = FieldDescriptor::finite_field(7).unwrap();
        assert!(f.class_of_int(2).unwrap().is_trivial());
        assert!(!f.class_of_int(3).unwrap().is_trivial());
        assert_eq!(f.minus_one(), f.class_of_int(-1).unwrap());
        let f5 = FieldDescriptor::finite_field(5).unwrap();
        assert!(f5.minus_one().is_trivial());
        assert!(matches!(f.class_of_int(14), Err(Error::ZeroElement(_))));
        assert!(FieldDescriptor::finite_field(9).is_err());
        assert!(FieldDescriptor::finite_field(2).is_err());
    }

    #[test]
    fn formal_classes_and_orderings() {
        let f = FieldDescriptor::Formal(2);
        let c = canonicalize_formal(&f, &BigRational::from_integer((-3).into()), &[3, -2]).unwrap();
        assert_eq!(c, f.formal_class(true, &[1]).unwrap());
        assert_eq!(signature_at(&c, &[1, 1]).unwrap(), -1);
        assert_eq!(signature_at(&c, &[-1, 1]).unwrap(), 1);
        assert!(matches!(signature_at(&c, &[1]), Err(Error::OrderingLengthMismatch { expected: 2, got: 1 })));
        assert!(f.t(3).is_err());
        assert!(f.two().is_trivial());
    }

    #[test]
    fn descriptors_round_trip() {
        for s in ["q", "fp:13", "r", "formal:4"] {
            assert_eq!(s.parse::<FieldDescriptor>().unwrap().to_string(), s);
        }
        assert!("fp:15".parse::<FieldDescriptor>().is_err());
        assert!("z".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn independence() {
        assert!(are_independent(&[q(2), q(3), q(5)]));
        assert!(!are_independent(&[q(2), q(3), q(6)]));
        assert!(!are_independent(&[q(1)]));
        assert!(are_independent(&[q(-1), q(-2), q(3)]));
        assert!(!are_independent(&[q(-6), q(-2), q(3)]));
    }

    #[test]
    fn basis_recombines() {
        let c = q(-30);
        let mut acc = FieldDescriptor::Rationals.trivial();
        for b in c.basis() {
            acc = acc.mul(&b).unwrap();
        }
        assert_eq!(acc, c);
        assert_eq!(c.basis().len(), 4);
    }
}
