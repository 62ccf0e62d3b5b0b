//! Witt ring arithmetic in the presentation by one-dimensional forms.

mod equality;
pub mod gram;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, SquareClass};

pub use equality::witt_eq;
pub use gram::{diagonalize, lambda_power_gram_oracle, GramMatrix};

/// A nondegenerate diagonal form `<a_1, ..., a_n>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    field: FieldDescriptor,
    entries: Vec<SquareClass>,
}

impl DiagonalForm {
    pub fn new(field: FieldDescriptor, entries: Vec<SquareClass>) -> Result<Self> {
        for e in &entries {
            field.check_same(&e.field())?;
        }
        Ok(DiagonalForm { field, entries })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn entries(&self) -> &[SquareClass] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Orthogonal sum.
    pub fn perp(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.field.check_same(&other.field)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DiagonalForm { field: self.field, entries })
    }

    /// Scale every entry by a class.
    pub fn scaled(&self, c: &SquareClass) -> Result<DiagonalForm> {
        let entries = self.entries.iter().map(|e| e.mul(c)).collect::<Result<Vec<_>>>()?;
        Ok(DiagonalForm { field: self.field, entries })
    }

    /// Determinant class.
    pub fn determinant(&self) -> SquareClass {
        self.entries.iter().fold(self.field.trivial(), |acc, e| acc.mul(e).expect("same field"))
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// An element of `W(k)`, a finite integer combination of classes `<a>`.
///
/// The representation is normalized: `<-a>` is folded into `-<a>`, zero
/// coefficients are dropped, and over finite fields coefficients are reduced
/// by the torsion of `W(F_p)`. Over the rationals two different normal forms
/// can still be Witt-equal; use [`witt_eq`] to compare.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittClass {
    field: FieldDescriptor,
    terms: BTreeMap<SquareClass, BigInt>,
}

impl WittClass {
    pub fn zero(field: FieldDescriptor) -> Self {
        WittClass { field, terms: BTreeMap::new() }
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::from_class(&field.trivial())
    }

    pub fn from_class(c: &SquareClass) -> Self {
        let mut w = WittClass::zero(c.field());
        w.add_term(c.clone(), BigInt::one());
        w.normalize();
        w
    }

    pub fn from_int(field: FieldDescriptor, n: i64) -> Self {
        WittClass::one(field).scale(&BigInt::from(n))
    }

    pub fn from_form(q: &DiagonalForm) -> Self {
        let mut w = WittClass::zero(q.field);
        for e in &q.entries {
            w.add_term(e.clone(), BigInt::one());
        }
        w.normalize();
        w
    }

    pub fn from_terms<I>(field: FieldDescriptor, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SquareClass, BigInt)>,
    {
        let mut w = WittClass::zero(field);
        for (c, k) in terms {
            field.check_same(&c.field())?;
            w.add_term(c, k);
        }
        w.normalize();
        Ok(w)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Normalized terms; every class is the positive representative.
    pub fn terms(&self) -> &BTreeMap<SquareClass, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, c: &SquareClass) -> BigInt {
        self.terms.get(c).cloned().unwrap_or_default()
    }

    /// True when the normal form is empty. Over Q this is sufficient but not
    /// necessary for Witt-triviality.
    pub fn is_syntactic_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients: the virtual rank.
    pub fn virtual_rank(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn add_term(&mut self, c: SquareClass, k: BigInt) {
        let slot = self.terms.entry(c).or_default();
        *slot += k;
    }

    fn normalize(&mut self) {
        let field = self.field;
        let old = std::mem::take(&mut self.terms);
        for (c, k) in old {
            let (c, k) = fold_sign(&field, c, k);
            self.add_term(c, k);
        }
        let modulus = match field {
            FieldDescriptor::FiniteField(p) if p % 4 == 3 => Some(BigInt::from(4)),
            FieldDescriptor::FiniteField(_) => Some(BigInt::from(2)),
            _ => None,
        };
        if let Some(m) = modulus {
            for k in self.terms.values_mut() {
                *k = k.mod_floor(&m);
            }
        }
        self.terms.retain(|_, k| !k.is_zero());
    }

    pub fn add(&self, other: &WittClass) -> Result<WittClass> {
        self.field.check_same(&other.field)?;
        let mut w = self.clone();
        for (c, k) in &other.terms {
            w.add_term(c.clone(), k.clone());
        }
        w.normalize();
        Ok(w)
    }

    pub fn neg(&self) -> WittClass {
        let mut w = self.clone();
        for k in w.terms.values_mut() {
            *k = -k.clone();
        }
        w.normalize();
        w
    }

    pub fn sub(&self, other: &WittClass) -> Result<WittClass> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: &BigInt) -> WittClass {
        let mut w = self.clone();
        for k in w.terms.values_mut() {
            *k *= n;
        }
        w.normalize();
        w
    }

    /// Ring product (tensor product of forms).
    pub fn mul(&self, other: &WittClass) -> Result<WittClass> {
        self.field.check_same(&other.field)?;
        let mut w = WittClass::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                w.add_term(a.mul(b)?, x * y);
            }
        }
        w.normalize();
        Ok(w)
    }

    /// Multiply by the one-dimensional form `<c>`.
    pub fn mul_class(&self, c: &SquareClass) -> Result<WittClass> {
        self.field.check_same(&c.field())?;
        let mut w = WittClass::zero(self.field);
        for (a, x) in &self.terms {
            w.add_term(a.mul(c)?, x.clone());
        }
        w.normalize();
        Ok(w)
    }

    /// Signatures at every ordering, indexed by the ordering mask (bit `i`
    /// set means `t_{i+1} < 0`).
    pub fn signature_vector(&self) -> Result<Vec<BigInt>> {
        let count = match self.field {
            FieldDescriptor::Reals => 1usize,
            FieldDescriptor::Formal(g) if g <= 24 => 1usize << g,
            FieldDescriptor::Formal(g) => {
                return Err(Error::SizeMismatch(format!("formal:{g} has too many orderings to enumerate")))
            }
            other => return Err(Error::UnsupportedBackend(other.to_string())),
        };
        Ok((0..count as u64)
            .map(|m| self.terms.iter().map(|(c, k)| if c.negative_under(m) { -k.clone() } else { k.clone() }).sum())
            .collect())
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, k)| format!("{k}<{c}>")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn fold_sign(field: &FieldDescriptor, c: SquareClass, k: BigInt) -> (SquareClass, BigInt) {
    let negated = match &c {
        SquareClass::Rational { neg, .. } | SquareClass::Real { neg } => *neg,
        SquareClass::Formal { mask, .. } => mask & 1 == 1,
        SquareClass::Finite { p, nonsquare } => *nonsquare && p % 4 == 3,
    };
    if negated {
        (c.mul(&field.minus_one()).expect("same field"), -k)
    } else {
        (c, k)
    }
}

/// Sum of integer combinations of class products, as written in formulas
/// like `sum_S c_S <<a_S>>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterPresentation {
    pub field: FieldDescriptor,
    pub degree: usize,
    pub terms: Vec<(BigInt, Vec<SquareClass>)>,
}

impl PfisterPresentation {
    pub fn new(field: FieldDescriptor, degree: usize, terms: Vec<(BigInt, Vec<SquareClass>)>) -> Result<Self> {
        for (_, gens) in &terms {
            if gens.len() != degree {
                return Err(Error::SizeMismatch(format!(
                    "Pfister term with {} slots in a degree-{degree} presentation",
                    gens.len()
                )));
            }
            for g in gens {
                field.check_same(&g.field())?;
            }
        }
        Ok(PfisterPresentation { field, degree, terms })
    }

    pub fn to_witt(&self) -> Result<WittClass> {
        let mut acc = WittClass::zero(self.field);
        for (k, gens) in &self.terms {
            acc = acc.add(&pfister(self.field, gens)?.scale(k))?;
        }
        Ok(acc)
    }
}

/// `<<a_1, ..., a_n>> = prod (<1> - <a_i>)`.
pub fn pfister(field: FieldDescriptor, alphas: &[SquareClass]) -> Result<WittClass> {
    let one = WittClass::one(field);
    let mut acc = one.clone();
    for a in alphas {
        field.check_same(&a.field())?;
        acc = acc.mul(&one.sub(&WittClass::from_class(a))?)?;
    }
    Ok(acc)
}

/// All exterior powers `lambda^0 .. lambda^d` of a diagonal form, computed by
/// the elementary symmetric recursion in the classes `<a_i>`.
pub fn lambda_powers_upto(q: &DiagonalForm, d: usize) -> Result<Vec<WittClass>> {
    if d > q.dim() {
        return Err(Error::DegreeOutOfRange { degree: d, max: q.dim() });
    }
    let mut e = vec![WittClass::zero(q.field); d + 1];
    e[0] = WittClass::one(q.field);
    for (i, a) in q.entries.iter().enumerate() {
        for j in (1..=d.min(i + 1)).rev() {
            let term = e[j - 1].mul_class(a)?;
            e[j] = e[j].add(&term)?;
        }
    }
    Ok(e)
}

/// `lambda^d(q)` as a Witt class.
pub fn lambda_power(q: &DiagonalForm, d: usize) -> Result<WittClass> {
    Ok(lambda_powers_upto(q, d)?.pop().expect("nonempty"))
}

/// `lambda^d(q)` as the diagonal form of `d`-fold entry products, subsets in
/// lexicographic order.
pub fn lambda_power_form(q: &DiagonalForm, d: usize) -> Result<DiagonalForm> {
    if d > q.dim() {
        return Err(Error::DegreeOutOfRange { degree: d, max: q.dim() });
    }
    let mut entries = Vec::new();
    for set in crate::util::combinations(q.dim(), d) {
        let mut c = q.field.trivial();
        for i in set {
            c = c.mul(&q.entries[i])?;
        }
        entries.push(c);
    }
    DiagonalForm::new(q.field, entries)
}

/// Multiply by a scalar class; both operands must share the base field.
pub fn witt_scale(q: &WittClass, a: &SquareClass) -> Result<WittClass> {
    q.mul_class(a)
}

/// Signature at each ordering, keyed by the `+-1` ordering vector.
pub fn signatures(a: &WittClass) -> Result<BTreeMap<Vec<i8>, BigInt>> {
    let g = match a.field {
        FieldDescriptor::Formal(g) => g,
        _ => 0,
    };
    Ok(a.signature_vector()?
        .into_iter()
        .enumerate()
        .map(|(m, s)| (crate::field::ordering_from_mask(g, m as u64), s))
        .collect())
}

/// Largest `d <= cap` with every signature divisible by `2^d`.
pub fn filtration_degree(a: &WittClass, cap: usize) -> Result<usize> {
    let sigs = a.signature_vector()?;
    let mut best = cap;
    for s in sigs {
        if s.is_zero() {
            continue;
        }
        let v = s.abs().trailing_zeros().and_then(|v| v.to_usize()).unwrap_or(0);
        best = best.min(v);
    }
    Ok(best)
}
