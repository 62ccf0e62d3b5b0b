//! Combinatorial and integer linear-algebra helpers shared by several modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// One integer solution of `A x = b` (rows of `A` given), or `None` when
/// there is none over Z.
///
/// Column operations bring `A` to a lower echelon form `H = A V` with `V`
/// unimodular; `H y = b` then has at most one solution, found by forward
/// substitution, and `x = V y`.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // Work column-major: h[j] is column j of A V, v[j] is column j of V.
    let mut h: Vec<Vec<BigInt>> = (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect();
    let mut v: Vec<Vec<BigInt>> =
        (0..cols).map(|j| (0..cols).map(|i| BigInt::from((i == j) as u8)).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0;
    for r in 0..rows {
        if next == cols {
            break;
        }
        // Euclid across columns until one nonzero entry remains in row r.
        loop {
            let live: Vec<usize> = (next..cols).filter(|&j| !h[j][r].is_zero()).collect();
            if live.len() <= 1 {
                if let Some(&j) = live.first() {
                    h.swap(next, j);
                    v.swap(next, j);
                    if h[next][r].is_negative() {
                        for x in h[next].iter_mut().chain(v[next].iter_mut()) {
                            *x = -&*x;
                        }
                    }
                    pivots.push(r);
                    next += 1;
                }
                break;
            }
            let p = *live.iter().min_by_key(|&&j| h[j][r].abs()).unwrap();
            for &j in &live {
                if j == p {
                    continue;
                }
                let q = h[j][r].div_floor(&h[p][r]);
                for i in 0..rows {
                    let t = &q * &h[p][i];
                    h[j][i] -= t;
                }
                for i in 0..cols {
                    let t = &q * &v[p][i];
                    v[j][i] -= t;
                }
            }
        }
    }
    let mut y: Vec<BigInt> = Vec::with_capacity(pivots.len());
    for (j, &r) in pivots.iter().enumerate() {
        let mut rest = b[r].clone();
        for (l, yl) in y.iter().enumerate() {
            rest -= &h[l][r] * yl;
        }
        let (q, m) = rest.div_rem(&h[j][r]);
        if !m.is_zero() {
            return None;
        }
        y.push(q);
    }
    for r in 0..rows {
        let lhs: BigInt = y.iter().enumerate().map(|(l, yl)| &h[l][r] * yl).sum();
        if lhs != b[r] {
            return None;
        }
    }
    Some((0..cols).map(|i| y.iter().enumerate().map(|(l, yl)| &v[l][i] * yl).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn integer_solutions() {
        // 6x + 10y = 8 has integer solutions, 6x + 10y = 7 has none.
        let a = ints(&[&[6, 10]]);
        let x = solve_integer(&a, &[BigInt::from(8)]).unwrap();
        assert_eq!(&x[0] * 6 + &x[1] * 10, BigInt::from(8));
        assert!(solve_integer(&a, &[BigInt::from(7)]).is_none());
        // Rational but not integral: 2x = 1.
        assert!(solve_integer(&ints(&[&[2]]), &[BigInt::from(1)]).is_none());
        // Inconsistent overdetermined system.
        assert!(solve_integer(&ints(&[&[1, 1], &[1, 1]]), &[1.into(), 2.into()]).is_none());
        let a = ints(&[&[2, 4, 1], &[0, 3, 3], &[2, 1, -2]]);
        let b: Vec<BigInt> = vec![7.into(), 9.into(), (-2).into()];
        let x = solve_integer(&a, &b).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: BigInt = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn counts_and_order() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
