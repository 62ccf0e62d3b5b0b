use std::fmt;
use std::str::FromStr;

use super::arith::{is_prime, legendre, mul_mod};
use super::SquareClass;
use crate::error::{Error, Result};

/// A place of Q: a prime or the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::BadPlace(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "\u{221e}" => Ok(Place::Infinity),
            t => Place::prime(t.parse().map_err(|_| Error::BadPlace(format!("cannot parse place {t:?}")))?),
        }
    }
}

/// Unit part of a rational class at `p`, reduced mod `m`, plus whether `p`
/// divides the class.
fn split_at(primes: &[u64], neg: bool, p: u64, m: u64) -> (bool, u64) {
    let mut r = 1 % m;
    let mut has_p = false;
    for &q in primes {
        if q == p {
            has_p = true;
        } else {
            r = mul_mod(r, q % m, m);
        }
    }
    if neg {
        r = (m - r) % m;
    }
    (has_p, r)
}

/// Hilbert symbol `(a, b)_v` over Q, returned as +1 or -1.
pub fn hilbert_symbol(a: &SquareClass, b: &SquareClass, place: Place) -> Result<i8> {
    let (SquareClass::Rational { primes: pa, neg: na }, SquareClass::Rational { primes: pb, neg: nb }) = (a, b) else {
        let bad = if matches!(a, SquareClass::Rational { .. }) { b } else { a };
        return Err(Error::UnsupportedBackend(bad.field().to_string()));
    };
    match place {
        Place::Infinity => Ok(if *na && *nb { -1 } else { 1 }),
        Place::Prime(2) => {
            let (alpha, u) = split_at(pa, *na, 2, 8);
            let (beta, v) = split_at(pb, *nb, 2, 8);
            let eps = |x: u64| (x % 4 == 3) as u32;
            let omega = |x: u64| (x == 3 || x == 5) as u32;
            let e = eps(u) * eps(v) + alpha as u32 * omega(v) + beta as u32 * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::BadPlace(format!("{p} is not prime")));
            }
            let (alpha, u) = split_at(pa, *na, p, p);
            let (beta, v) = split_at(pb, *nb, p, p);
            let mut s: i8 = 1;
            if alpha && beta && p % 4 == 3 {
                s = -s;
            }
            if beta {
                s *= legendre(u, p);
            }
            if alpha {
                s *= legendre(v, p);
            }
            Ok(s)
        }
    }
}
