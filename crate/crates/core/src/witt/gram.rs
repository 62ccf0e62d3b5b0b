//! Symmetric Gram matrices over Q, exterior powers and diagonalization.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::DiagonalForm;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::util::combinations;

/// A symmetric matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    rows: Vec<Vec<BigRational>>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::SizeMismatch(format!("row of length {} in a {n}x{n} matrix", r.len())));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidInput(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(GramMatrix { rows })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect())
    }

    /// Gram matrix of a diagonal form over Q.
    pub fn from_form(q: &DiagonalForm) -> Result<Self> {
        if q.field() != FieldDescriptor::Rationals {
            return Err(Error::UnsupportedBackend(q.field().to_string()));
        }
        let n = q.dim();
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        for (i, e) in q.entries().iter().enumerate() {
            rows[i][i] = BigRational::from_integer(e.rational_value().expect("rational"));
        }
        Ok(GramMatrix { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    /// `M^T G M` for a square matrix `M`.
    pub fn congruent(&self, m: &[Vec<BigRational>]) -> Result<GramMatrix> {
        let n = self.dim();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch("congruence matrix has wrong shape".into()));
        }
        let mut gm = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for k in 0..n {
                    s += &self.rows[i][k] * &m[k][j];
                }
                gm[i][j] = s;
            }
        }
        let mut out = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for k in 0..n {
                    s += &m[k][i] * &gm[k][j];
                }
                out[i][j] = s;
            }
        }
        GramMatrix::new(out)
    }

    pub fn determinant(&self) -> BigRational {
        determinant(self.rows.clone())
    }
}

/// Determinant by Gaussian elimination over Q.
pub fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Gram matrix of `lambda^d` on the basis of `d`-subsets in lexicographic
/// order; the `(I, J)` entry is the minor `det G[I, J]`.
pub fn lambda_power_gram_oracle(g: &GramMatrix, d: usize) -> Result<GramMatrix> {
    let n = g.dim();
    if d > n {
        return Err(Error::DegreeOutOfRange { degree: d, max: n });
    }
    let subsets = combinations(n, d);
    let rows = subsets
        .iter()
        .map(|i| {
            subsets
                .iter()
                .map(|j| determinant(i.iter().map(|&r| j.iter().map(|&c| g.rows[r][c].clone()).collect()).collect()))
                .collect()
        })
        .collect();
    GramMatrix::new(rows)
}

/// Diagonalize by symmetric Gaussian elimination and canonicalize the pivots.
pub fn diagonalize(g: &GramMatrix) -> Result<DiagonalForm> {
    let n = g.dim();
    let mut a = g.rows.clone();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Replace e_k by e_k + e_j; the new diagonal entry is 2 a_kj.
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][k] += t;
                }
            } else {
                return Err(Error::DegenerateMatrix(format!("row {k} vanishes after elimination")));
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for r in k..n {
                let t = &f * &a[r][k];
                a[r][i] -= t;
            }
        }
        pivots.push(pivot);
    }
    let field = FieldDescriptor::Rationals;
    let entries = pivots.iter().map(|p| field.class_of(p)).collect::<Result<Vec<_>>>()?;
    DiagonalForm::new(field, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{witt_eq, WittClass};

    #[test]
    fn oracle_on_diagonal() {
        let g = GramMatrix::from_ints(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]).unwrap();
        let l2 = lambda_power_gram_oracle(&g, 2).unwrap();
        let expect = GramMatrix::from_ints(&[vec![6, 0, 0], vec![0, 10, 0], vec![0, 0, 15]]).unwrap();
        assert_eq!(l2, expect);
        assert_eq!(lambda_power_gram_oracle(&g, 0).unwrap().dim(), 1);
    }

    #[test]
    fn hyperbolic_plane() {
        let g = GramMatrix::from_ints(&[vec![0, 1], vec![1, 0]]).unwrap();
        let d = diagonalize(&g).unwrap();
        let f = FieldDescriptor::Rationals;
        let h = DiagonalForm::new(f, vec![f.trivial(), f.minus_one()]).unwrap();
        assert!(witt_eq(&WittClass::from_form(&d), &WittClass::from_form(&h)).unwrap());
    }

    #[test]
    fn degenerate_rejected() {
        let g = GramMatrix::from_ints(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(diagonalize(&g), Err(Error::DegenerateMatrix(_))));
        assert!(GramMatrix::from_ints(&[vec![1, 2], vec![3, 1]]).is_err());
    }

    #[test]
    fn determinant_preserved_up_to_squares() {
        let g = GramMatrix::from_ints(&[vec![1, 2, 0], vec![2, 1, 3], vec![0, 3, 4]]).unwrap();
        let d = diagonalize(&g).unwrap();
        let det = FieldDescriptor::Rationals.class_of(&g.determinant()).unwrap();
        assert_eq!(d.determinant(), det);
    }
}
