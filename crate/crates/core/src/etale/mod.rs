//! Étale algebras and their trace forms.

pub mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{are_independent, FieldDescriptor, SquareClass};
use crate::witt::{diagonalize, DiagonalForm, GramMatrix};

pub use poly::Poly;

/// Largest accepted degree of a polynomial component; bounds Gram sizes.
pub const MAX_POLY_DEGREE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EtaleComponent {
    /// `k[x]/(f)` for a monic separable `f`.
    Poly(Poly),
    /// `k(sqrt e_1, ..., sqrt e_r)` for independent classes `e_j`;
    /// the empty list is `k` itself.
    Multiquadratic(Vec<SquareClass>),
}

impl EtaleComponent {
    pub fn dim(&self) -> usize {
        match self {
            EtaleComponent::Poly(f) => f.degree().unwrap_or(0),
            EtaleComponent::Multiquadratic(e) => 1 << e.len(),
        }
    }
}

/// A finite product of field-like components over a base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleAlgebra {
    field: FieldDescriptor,
    components: Vec<EtaleComponent>,
}

impl EtaleAlgebra {
    pub fn new(field: FieldDescriptor, components: Vec<EtaleComponent>) -> Result<Self> {
        for c in &components {
            match c {
                EtaleComponent::Poly(f) => check_separable(&field, f)?,
                EtaleComponent::Multiquadratic(es) => {
                    for e in es {
                        field.check_same(&e.field())?;
                    }
                    if !are_independent(es) {
                        return Err(Error::NotIndependent(
                            es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "),
                        ));
                    }
                }
            }
        }
        Ok(EtaleAlgebra { field, components })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn components(&self) -> &[EtaleComponent] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.dim()).sum()
    }
}

fn check_separable(field: &FieldDescriptor, f: &Poly) -> Result<()> {
    if *field != FieldDescriptor::Rationals {
        return Err(Error::UnsupportedBackend(format!("polynomial components need Q, got {field}")));
    }
    match f.degree() {
        Some(d) if d > MAX_POLY_DEGREE => return Err(Error::DegreeOutOfRange { degree: d, max: MAX_POLY_DEGREE }),
        Some(d) if d >= 1 && f.is_monic() => {}
        _ => return Err(Error::InvalidInput(format!("component polynomial {f} must be monic of positive degree"))),
    }
    if f.gcd(&f.derivative()).degree() != Some(0) {
        return Err(Error::NotSquarefree(f.to_string()));
    }
    Ok(())
}

fn rat(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

/// Gram matrix of `Tr(xy)` on the standard basis: powers of `x` for
/// polynomial components, subset products `prod_{j in S} sqrt e_j` (subsets
/// by increasing bitmask) for multiquadratic ones. Only over Q.
pub fn trace_gram(e: &EtaleAlgebra) -> Result<GramMatrix> {
    if e.field != FieldDescriptor::Rationals {
        return Err(Error::UnsupportedBackend(e.field.to_string()));
    }
    let n = e.dim();
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    let mut off = 0;
    for c in &e.components {
        match c {
            EtaleComponent::Poly(f) => {
                let k = c.dim();
                let p = f.power_sums(2 * k);
                for i in 0..k {
                    for j in 0..k {
                        rows[off + i][off + j] = p[i + j].clone();
                    }
                }
                off += k;
            }
            EtaleComponent::Multiquadratic(es) => {
                let r = es.len();
                let vals: Vec<BigInt> = es.iter().map(|x| x.rational_value().expect("rational")).collect();
                for s in 0..1usize << r {
                    let mut v = BigInt::one() << r;
                    for (j, x) in vals.iter().enumerate() {
                        if s >> j & 1 == 1 {
                            v *= x;
                        }
                    }
                    rows[off + s][off + s] = rat(v);
                }
                off += 1 << r;
            }
        }
    }
    GramMatrix::new(rows)
}

/// Closed-form trace form of a multiquadratic algebra:
/// `<2^r prod_{j in S} e_j>` over all subsets `S`.
pub fn multiquadratic_trace_form(field: FieldDescriptor, es: &[SquareClass]) -> Result<DiagonalForm> {
    let r = es.len();
    let base = if r % 2 == 1 { field.two() } else { field.trivial() };
    let mut entries = Vec::with_capacity(1 << r);
    for s in 0..1usize << r {
        let mut c = base.clone();
        for (j, x) in es.iter().enumerate() {
            if s >> j & 1 == 1 {
                c = c.mul(x)?;
            }
        }
        entries.push(c);
    }
    DiagonalForm::new(field, entries)
}

/// The trace form `x -> Tr(x^2)` as a diagonal form.
pub fn trace_form(e: &EtaleAlgebra) -> Result<DiagonalForm> {
    let mut out = DiagonalForm::new(e.field, vec![])?;
    for c in &e.components {
        let piece = match c {
            EtaleComponent::Multiquadratic(es) => multiquadratic_trace_form(e.field, es)?,
            EtaleComponent::Poly(_) => {
                let single = EtaleAlgebra { field: e.field, components: vec![c.clone()] };
                diagonalize(&trace_gram(&single)?)?
            }
        };
        out = out.perp(&piece)?;
    }
    Ok(out)
}

/// `E = L[y]/(y^2 - delta)` over an étale algebra `L` with polynomial
/// components; `delta` has one unit entry per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPair {
    base: EtaleAlgebra,
    deltas: Vec<Poly>,
}

impl QuadraticPair {
    pub fn new(base: EtaleAlgebra, deltas: Vec<Poly>) -> Result<Self> {
        if deltas.len() != base.components.len() {
            return Err(Error::SizeMismatch(format!(
                "{} deltas for {} components",
                deltas.len(),
                base.components.len()
            )));
        }
        let mut reduced = Vec::with_capacity(deltas.len());
        for (c, d) in base.components.iter().zip(deltas) {
            let EtaleComponent::Poly(f) = c else {
                return Err(Error::InvalidInput("quadratic layers need polynomial base components".into()));
            };
            let d = d.rem(f);
            if d.is_zero() || f.gcd(&d).degree() != Some(0) {
                return Err(Error::NotUnit(format!("{d} mod {f}")));
            }
            reduced.push(d);
        }
        Ok(QuadraticPair { base, deltas: reduced })
    }

    pub fn base(&self) -> &EtaleAlgebra {
        &self.base
    }

    pub fn deltas(&self) -> &[Poly] {
        &self.deltas
    }
}

/// Gram matrix of `Tr_{E/k}(xy)` on the basis `x^a y^s` ordered by `(a, s)`.
pub fn quadratic_layer_trace_gram(pair: &QuadraticPair) -> Result<GramMatrix> {
    let n = 2 * pair.base.dim();
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    let mut off = 0;
    let two = rat(BigInt::from(2));
    for (c, delta) in pair.base.components.iter().zip(&pair.deltas) {
        let EtaleComponent::Poly(f) = c else { unreachable!("checked in constructor") };
        let k = c.dim();
        let dd = delta.degree().unwrap_or(0);
        let p = f.power_sums(2 * k + dd);
        // Tr_{L/k}(x^m delta)
        let tr_delta = |m: usize| -> BigRational {
            delta.coeffs().iter().enumerate().map(|(i, c)| c * &p[m + i]).fold(BigRational::zero(), |a, b| a + b)
        };
        for a in 0..k {
            for b in 0..k {
                rows[off + 2 * a][off + 2 * b] = &two * &p[a + b];
                rows[off + 2 * a + 1][off + 2 * b + 1] = &two * tr_delta(a + b);
            }
        }
        off += 2 * k;
    }
    GramMatrix::new(rows)
}

/// Trace form of the quadratic layer `E/k`.
pub fn quadratic_layer_trace_form(pair: &QuadraticPair) -> Result<DiagonalForm> {
    diagonalize(&quadratic_layer_trace_gram(pair)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{witt_eq, WittClass};
    use FieldDescriptor::Rationals;

    fn q(n: i64) -> SquareClass {
        Rationals.class_of_int(n).unwrap()
    }

    fn wf(xs: &[i64]) -> WittClass {
        WittClass::from_form(&DiagonalForm::new(Rationals, xs.iter().map(|&x| q(x)).collect()).unwrap())
    }

    #[test]
    fn quadratic_poly() {
        let e = EtaleAlgebra::new(Rationals, vec![EtaleComponent::Poly(Poly::from_ints(&[-5, 0, 1]))]).unwrap();
        let t = WittClass::from_form(&trace_form(&e).unwrap());
        assert!(witt_eq(&t, &wf(&[2, 10])).unwrap());
    }

    #[test]
    fn biquadratic() {
        let e = EtaleAlgebra::new(Rationals, vec![EtaleComponent::Multiquadratic(vec![q(2), q(3)])]).unwrap();
        let t = WittClass::from_form(&trace_form(&e).unwrap());
        assert!(witt_eq(&t, &wf(&[1, 2, 3, 6])).unwrap());
        let via_gram = WittClass::from_form(&diagonalize(&trace_gram(&e).unwrap()).unwrap());
        assert!(witt_eq(&t, &via_gram).unwrap());
    }

    #[test]
    fn validation() {
        let sq = Poly::from_ints(&[1, 2, 1]);
        assert!(matches!(EtaleAlgebra::new(Rationals, vec![EtaleComponent::Poly(sq)]), Err(Error::NotSquarefree(_))));
        assert!(matches!(
            EtaleAlgebra::new(Rationals, vec![EtaleComponent::Multiquadratic(vec![q(2), q(8)])]),
            Err(Error::NotIndependent(_))
        ));
        let base = EtaleAlgebra::new(Rationals, vec![EtaleComponent::Poly(Poly::from_ints(&[-2, 0, 1]))]).unwrap();
        assert!(matches!(QuadraticPair::new(base, vec![Poly::from_ints(&[-2, 0, 1])]), Err(Error::NotUnit(_))));
    }

    #[test]
    fn fourth_root_of_two() {
        let base = EtaleAlgebra::new(Rationals, vec![EtaleComponent::Poly(Poly::from_ints(&[-2, 0, 1]))]).unwrap();
        let pair = QuadraticPair::new(base, vec![Poly::from_ints(&[0, 1])]).unwrap();
        let g = quadratic_layer_trace_gram(&pair).unwrap();
        let expect =
            GramMatrix::from_ints(&[vec![4, 0, 0, 0], vec![0, 0, 0, 8], vec![0, 0, 8, 0], vec![0, 8, 0, 0]]).unwrap();
        assert_eq!(g, expect);
    }
}
