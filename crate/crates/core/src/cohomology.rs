//! Mod-2 Galois cohomology through symbols `(a_1)...(a_n)`.
//!
//! Symbols are expanded over each backend's F_2-basis of square classes and
//! reduced with `(b)(b) = (b)(-1)`, giving the normal form used for
//! addition. Over formal fields and the reals this normal form is unique;
//! over Q equality is decided by [`is_zero`] through local invariants.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::arith::binomial;
use crate::field::{hilbert_symbol, FieldDescriptor, Place, SquareClass};
use crate::witt::{lambda_powers_upto, pfister, DiagonalForm, PfisterPresentation, WittClass};

/// A symbol in normal form: sorted basis classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Vec<SquareClass>);

impl Symbol {
    pub fn factors(&self) -> &[SquareClass] {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for c in &self.0 {
            write!(f, "({c})")?;
        }
        Ok(())
    }
}

/// An element of `H^n(k, Z/2)` as an F_2-sum of normalized symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CohClass {
    field: FieldDescriptor,
    degree: usize,
    symbols: BTreeSet<Symbol>,
}

impl CohClass {
    pub fn zero(field: FieldDescriptor, degree: usize) -> Self {
        CohClass { field, degree, symbols: BTreeSet::new() }
    }

    pub fn one(field: FieldDescriptor) -> Self {
        let mut c = CohClass::zero(field, 0);
        c.symbols.insert(Symbol(vec![]));
        c
    }

    /// The class of `(a)` in degree one.
    pub fn linear(a: &SquareClass) -> Self {
        symbol_normalize(&a.field(), std::slice::from_ref(a)).expect("same field")
    }

    /// Sum of the listed symbols, each normalized.
    pub fn from_symbols(field: FieldDescriptor, degree: usize, symbols: &[Vec<SquareClass>]) -> Result<Self> {
        let mut acc = CohClass::zero(field, degree);
        for s in symbols {
            if s.len() != degree {
                return Err(Error::SizeMismatch(format!("symbol with {} factors in degree {degree}", s.len())));
            }
            acc = acc.add(&symbol_normalize(&field, s)?)?;
        }
        Ok(acc)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn symbols(&self) -> &BTreeSet<Symbol> {
        &self.symbols
    }

    pub fn is_syntactic_zero(&self) -> bool {
        self.symbols.is_empty()
    }

    fn toggle(&mut self, s: Symbol) {
        if !self.symbols.remove(&s) {
            self.symbols.insert(s);
        }
    }

    fn finish(mut self) -> Self {
        if matches!(self.field, FieldDescriptor::FiniteField(_)) && self.degree >= 2 {
            self.symbols.clear();
        }
        self
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        self.field.check_same(&other.field)?;
        if self.degree != other.degree {
            return Err(Error::SizeMismatch(format!("adding classes of degrees {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for s in &other.symbols {
            out.toggle(s.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Basis class of `-1`, if `-1` is not a square.
fn minus_one_basis(field: &FieldDescriptor) -> Option<SquareClass> {
    let m = field.minus_one();
    if m.is_trivial() {
        None
    } else {
        Some(m)
    }
}

/// Apply `(b)(b) = (b)(-1)` until no basis class other than `-1` repeats.
fn reduce_squares(field: &FieldDescriptor, mut f: Vec<SquareClass>) -> Option<Symbol> {
    let m1 = minus_one_basis(field);
    loop {
        f.sort();
        let dup = f.windows(2).position(|w| w[0] == w[1] && Some(&w[0]) != m1.as_ref());
        match dup {
            None => return Some(Symbol(f)),
            Some(i) => match &m1 {
                Some(m) => f[i + 1] = m.clone(),
                None => return None,
            },
        }
    }
}

/// Expand `(a_1)...(a_n)` over the basis and reduce to normal form.
pub fn symbol_normalize(field: &FieldDescriptor, factors: &[SquareClass]) -> Result<CohClass> {
    for a in factors {
        field.check_same(&a.field())?;
    }
    let mut out = CohClass::zero(*field, factors.len());
    let bases: Vec<Vec<SquareClass>> = factors.iter().map(|a| a.basis()).collect();
    if bases.iter().any(|b| b.is_empty()) {
        return Ok(out);
    }
    let mut idx = vec![0usize; bases.len()];
    loop {
        let pick: Vec<SquareClass> = idx.iter().zip(&bases).map(|(&i, b)| b[i].clone()).collect();
        if let Some(s) = reduce_squares(field, pick) {
            out.toggle(s);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out.finish());
            }
            idx[k] += 1;
            if idx[k] < bases[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Normalize a symbol given by raw rationals, rejecting zero factors.
pub fn symbol_from_rationals(field: &FieldDescriptor, factors: &[num_rational::BigRational]) -> Result<CohClass> {
    let classes = factors
        .iter()
        .map(|x| {
            field.class_of(x).map_err(|e| match e {
                Error::ZeroElement(m) => Error::ZeroFactor(m),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    symbol_normalize(field, &classes)
}

/// Cup product.
pub fn cup(a: &CohClass, b: &CohClass) -> Result<CohClass> {
    a.field.check_same(&b.field)?;
    let mut out = CohClass::zero(a.field, a.degree + b.degree);
    for s in &a.symbols {
        for t in &b.symbols {
            let mut f = s.0.clone();
            f.extend(t.0.iter().cloned());
            if let Some(sym) = reduce_squares(&a.field, f) {
                out.toggle(sym);
            }
        }
    }
    Ok(out.finish())
}

/// Whether a class vanishes in `H^n(k, Z/2)`.
pub fn is_zero(c: &CohClass) -> Result<bool> {
    match c.field {
        FieldDescriptor::Rationals => rational_is_zero(c),
        _ => Ok(c.symbols.is_empty()),
    }
}

fn rational_is_zero(c: &CohClass) -> Result<bool> {
    match c.degree {
        0 | 1 => Ok(c.symbols.is_empty()),
        2 => {
            let mut places = vec![Place::Infinity, Place::Prime(2)];
            for s in &c.symbols {
                for f in &s.0 {
                    if let SquareClass::Rational { primes, .. } = f {
                        places.extend(primes.iter().map(|&p| Place::Prime(p)));
                    }
                }
            }
            places.sort();
            places.dedup();
            for v in places {
                let mut sign = 1i8;
                for s in &c.symbols {
                    sign *= hilbert_symbol(&s.0[0], &s.0[1], v)?;
                }
                if sign == -1 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => {
            // H^n(Q) -> H^n(R) is an isomorphism for n >= 3.
            let negative = c
                .symbols
                .iter()
                .filter(|s| s.0.iter().all(|f| matches!(f, SquareClass::Rational { neg: true, .. })))
                .count();
            Ok(negative % 2 == 0)
        }
    }
}

/// `e_d` of a presentation `sum c_S <<a_S>>`: the sum of symbols with odd
/// coefficient.
pub fn e_map(p: &PfisterPresentation) -> Result<CohClass> {
    let mut out = CohClass::zero(p.field, p.degree);
    for (k, gens) in &p.terms {
        if k.is_odd() {
            out = out.add(&symbol_normalize(&p.field, gens)?)?;
        }
    }
    Ok(out)
}

/// All Stiefel-Whitney classes `sw_0 .. sw_d` of a diagonal form, by the
/// elementary symmetric recursion in the degree-one classes `(a_i)`.
pub fn sw_upto(q: &DiagonalForm, d: usize) -> Result<Vec<CohClass>> {
    if d > q.dim() {
        return Err(Error::DegreeOutOfRange { degree: d, max: q.dim() });
    }
    let field = q.field();
    let mut e: Vec<CohClass> = (0..=d).map(|j| CohClass::zero(field, j)).collect();
    e[0] = CohClass::one(field);
    for (i, a) in q.entries().iter().enumerate() {
        let lin = CohClass::linear(a);
        for j in (1..=d.min(i + 1)).rev() {
            let t = cup(&e[j - 1], &lin)?;
            e[j] = e[j].add(&t)?;
        }
    }
    Ok(e)
}

/// `sw_d(q) = sum_{i_1 < ... < i_d} (a_{i_1})...(a_{i_d})`.
pub fn sw(q: &DiagonalForm, d: usize) -> Result<CohClass> {
    Ok(sw_upto(q, d)?.pop().expect("nonempty"))
}

/// Modified class: `sw_d` for odd `d`, `sw_d + (2) sw_{d-1}` for even `d`.
pub fn sw_mod(q: &DiagonalForm, d: usize) -> Result<CohClass> {
    let all = sw_upto(q, d)?;
    if d % 2 == 1 || d == 0 {
        return Ok(all[d].clone());
    }
    let two = CohClass::linear(&q.field().two());
    all[d].add(&cup(&two, &all[d - 1])?)
}

/// A lift recipe: `sum_l plain[l] lambda^l(q) + <<2>> sum_l two_scaled[l] lambda^l(q)`
/// for forms of a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftRecipe {
    pub dim: usize,
    pub degree: usize,
    pub plain: Vec<BigInt>,
    pub two_scaled: Vec<BigInt>,
}

impl LiftRecipe {
    pub fn apply(&self, q: &DiagonalForm) -> Result<WittClass> {
        if q.dim() != self.dim {
            return Err(Error::SizeMismatch(format!(
                "recipe for dimension {} applied to a form of dimension {}",
                self.dim,
                q.dim()
            )));
        }
        let field = q.field();
        let top = self.plain.len().max(self.two_scaled.len());
        let lambdas = lambda_powers_upto(q, top.saturating_sub(1))?;
        let combine = |coeffs: &[BigInt]| -> Result<WittClass> {
            let mut acc = WittClass::zero(field);
            for (l, c) in coeffs.iter().enumerate() {
                acc = acc.add(&lambdas[l].scale(c))?;
            }
            Ok(acc)
        };
        let mut out = combine(&self.plain)?;
        if !self.two_scaled.is_empty() {
            let p2 = pfister(field, &[field.two()])?;
            out = out.add(&p2.mul(&combine(&self.two_scaled)?)?)?;
        }
        Ok(out)
    }
}

/// `sum_l (-1)^l C(n-l, d-l) lambda^l`, whose `e_d` is `sw_d`.
pub fn sw_lift(n: usize, d: usize) -> Result<LiftRecipe> {
    if d > n {
        return Err(Error::DegreeOutOfRange { degree: d, max: n });
    }
    Ok(LiftRecipe { dim: n, degree: d, plain: alternating(n, d), two_scaled: vec![] })
}

/// Lift of the modified class; for even `d >= 2` adds
/// `<<2>> sum_l (-1)^l C(n-l, d-1-l) lambda^l`.
pub fn sw_mod_lift(n: usize, d: usize) -> Result<LiftRecipe> {
    let mut r = sw_lift(n, d)?;
    if d >= 2 && d % 2 == 0 {
        r.two_scaled = alternating(n, d - 1);
    }
    Ok(r)
}

fn alternating(n: usize, d: usize) -> Vec<BigInt> {
    (0..=d)
        .map(|l| {
            let c = binomial((n - l) as i64, (d - l) as i64);
            if l % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor::{Formal, Rationals};

    fn q(n: i64) -> SquareClass {
        Rationals.class_of_int(n).unwrap()
    }

    fn form(xs: &[i64]) -> DiagonalForm {
        DiagonalForm::new(Rationals, xs.iter().map(|&x| q(x)).collect()).unwrap()
    }

    fn sym(xs: &[i64]) -> CohClass {
        symbol_normalize(&Rationals, &xs.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn sw_small_forms() {
        let s1 = sw(&form(&[3, 5]), 1).unwrap();
        assert_eq!(s1, sym(&[3]).add(&sym(&[5])).unwrap());
        let m2 = sw_mod(&form(&[3, 5]), 2).unwrap();
        let expect = sym(&[3, 5]).add(&sym(&[2, 15])).unwrap();
        assert_eq!(m2, expect);
    }

    #[test]
    fn square_relation() {
        assert_eq!(sym(&[3, 3]), sym(&[3, -1]));
        assert_eq!(sym(&[6]), sym(&[2]).add(&sym(&[3])).unwrap());
        assert!(sym(&[1, 7]).is_syntactic_zero());
    }

    #[test]
    fn rational_is_zero_by_local_symbols() {
        // (2, -1) = 0 since 2 = 1 + 1; (-1, -1) != 0; (3, 5) != 0 at 3 and 5? (5/3) = -1.
        assert!(is_zero(&sym(&[2, -1])).unwrap());
        assert!(!is_zero(&sym(&[-1, -1])).unwrap());
        assert!(!is_zero(&sym(&[3, 5])).unwrap());
        // (a)(1-a) = 0.
        assert!(is_zero(&sym(&[3, -2])).unwrap());
        assert!(is_zero(&sym(&[-1, -1, -1]).add(&sym(&[-1, -3, -7])).unwrap()).unwrap());
        assert!(!is_zero(&sym(&[-1, -1, -1])).unwrap());
    }

    #[test]
    fn formal_normal_form() {
        let f = Formal(2);
        let t1 = f.t(1).unwrap();
        let s = symbol_normalize(&f, &[t1.clone(), t1.clone()]).unwrap();
        let e = symbol_normalize(&f, &[f.minus_one(), t1.clone()]).unwrap();
        assert_eq!(s, e);
        let mt = t1.negate();
        // (-t1)(t1) = 0
        assert!(symbol_normalize(&f, &[mt, t1]).unwrap().is_syntactic_zero());
    }

    #[test]
    fn finite_field_high_degree_vanishes() {
        let f = FieldDescriptor::finite_field(7).unwrap();
        let u = f.minus_one();
        assert!(symbol_normalize(&f, &[u.clone(), u.clone()]).unwrap().is_syntactic_zero());
        assert!(!symbol_normalize(&f, &[u]).unwrap().is_syntactic_zero());
    }

    #[test]
    fn e_map_of_presentation() {
        let f = Formal(2);
        let p = PfisterPresentation::new(
            f,
            2,
            vec![
                (BigInt::from(3), vec![f.t(1).unwrap(), f.t(2).unwrap()]),
                (BigInt::from(2), vec![f.t(1).unwrap(), f.minus_one()]),
            ],
        )
        .unwrap();
        let e = e_map(&p).unwrap();
        assert_eq!(e, symbol_normalize(&f, &[f.t(1).unwrap(), f.t(2).unwrap()]).unwrap());
    }

    #[test]
    fn lift_coefficients() {
        let r = sw_lift(2, 1).unwrap();
        assert_eq!(r.plain, vec![BigInt::from(2), BigInt::from(-1)]);
        let r = sw_mod_lift(2, 2).unwrap();
        assert_eq!(r.plain, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(r.two_scaled, vec![BigInt::from(2), BigInt::from(-1)]);
        // [2, -1] applied to <1,1> is 2 - 2 = 0.
        let w = sw_lift(2, 1).unwrap().apply(&form(&[1, 1])).unwrap();
        assert!(w.is_syntactic_zero());
    }
}
