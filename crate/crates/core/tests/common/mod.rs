//! Test-only oracles shared by the integration tests and the acceptance run.

#![allow(dead_code)]

use serde_json::json;
use wittcalc::field::{hilbert_symbol, FieldDescriptor, Place};
use wittcalc::verify::Property;

/// Entries of the brute-force grid.
pub const GRID: [i64; 10] = [1, -1, 2, -2, 3, -3, 5, -5, 7, -7];

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// Residues modulo `p^3` (odd `p`) or `2^6`.
pub struct Residues {
    m: i64,
    square: Vec<bool>,
    squares: Vec<i64>,
}

impl Residues {
    pub fn new(p: u64) -> Self {
        let m = if p == 2 { 64 } else { (p * p * p) as i64 };
        let mut square = vec![false; m as usize];
        for x in 0..m {
            square[(x * x % m) as usize] = true;
        }
        let squares = (0..m).filter(|&r| square[r as usize]).collect();
        Residues { m, square, squares }
    }

    /// Whether `a x^2 + b y^2 = z^2` has a primitive solution modulo `m`.
    ///
    /// A primitive solution has a unit coordinate, which can be scaled to 1.
    pub fn solvable(&self, a: i64, b: i64) -> bool {
        let m = self.m;
        let a = a.rem_euclid(m);
        let b = b.rem_euclid(m);
        let mut b_square = vec![false; m as usize];
        for &s in &self.squares {
            b_square[(b * s % m) as usize] = true;
        }
        // z = 1
        if self.squares.iter().any(|&s| b_square[(1 - a * s).rem_euclid(m) as usize]) {
            return true;
        }
        // x = 1, then y = 1
        self.squares.iter().any(|&s| self.square[((a + b * s) % m) as usize])
            || self.squares.iter().any(|&s| self.square[((a * s + b) % m) as usize])
    }
}

/// Independent value of `(a, b)_p` by solubility search.
pub fn hilbert_brute_force(a: i64, b: i64, p: u64) -> i8 {
    if Residues::new(p).solvable(a, b) {
        1
    } else {
        -1
    }
}

/// The closed form against the search on `GRID x GRID` at every prime up to 50.
pub fn hilbert_brute_force_grid() -> Property {
    let q = FieldDescriptor::Rationals;
    let mut prop = Property::new("hilbert-brute-force");
    for p in primes_upto(50) {
        let res = Residues::new(p);
        for &a in &GRID {
            for &b in &GRID {
                let expected = if res.solvable(a, b) { 1 } else { -1 };
                let outcome = (|| {
                    let (ca, cb) = (q.class_of_int(a)?, q.class_of_int(b)?);
                    Ok(hilbert_symbol(&ca, &cb, Place::Prime(p))? == expected)
                })();
                prop.check(outcome, || json!({ "a": a, "b": b, "p": p, "expected": expected }));
            }
        }
    }
    prop
}
