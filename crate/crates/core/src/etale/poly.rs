//! Dense univariate polynomials over Q.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficients stored constant term first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, m: &Poly) -> Poly {
        let dm = m.degree().expect("division by zero polynomial");
        let lead = m.leading();
        let mut r = self.coeffs.clone();
        while r.len() > dm && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] / &lead;
            if !f.is_zero() {
                for (j, c) in m.coeffs.iter().enumerate() {
                    r[top - dm + j] -= &f * c;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.scale(&(BigRational::one() / l))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Power sums `p_0 .. p_{kmax}` of the roots of a monic polynomial,
    /// from Newton's identities.
    pub fn power_sums(&self, kmax: usize) -> Vec<BigRational> {
        let n = self.degree().expect("nonzero polynomial");
        // a[i] is the coefficient of x^{n-i}.
        let a: Vec<BigRational> = (0..=n).map(|i| self.coeff(n - i)).collect();
        let mut p = vec![BigRational::from_integer(BigInt::from(n))];
        for k in 1..=kmax {
            let mut s = BigRational::zero();
            for i in 1..k.min(n + 1) {
                s += &a[i] * &p[k - i];
            }
            if k <= n {
                s += &a[k] * BigRational::from_integer(BigInt::from(k));
            }
            p.push(-s);
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
