//! Small number-theoretic helpers on machine words and big integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial-division bound used when none is given.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a/p)` for an odd prime `p`, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Reduce a big integer into `0..m`.
pub fn big_mod(a: &BigInt, m: u64) -> u64 {
    let r = (a % BigInt::from(m)).to_i128().expect("remainder fits");
    r.rem_euclid(m as i128) as u64
}

/// Primes dividing `n` to an odd power, ascending.
///
/// Trial division runs up to `bound`; a cofactor left over after that is
/// accepted only when it is provably prime, i.e. below `bound^2`.
pub fn odd_support(n: &BigUint, bound: u64) -> Result<Vec<u64>> {
    if n.is_zero() {
        return Err(Error::ZeroElement("0".into()));
    }
    if let Some(small) = n.to_u64() {
        return odd_support_u64(small, bound);
    }
    let mut out = Vec::new();
    let mut r = n.clone();
    let mut d: u64 = 2;
    while d <= bound {
        let dd = BigUint::from(d) * BigUint::from(d);
        if dd > r {
            break;
        }
        let mut parity = false;
        while (&r % d).is_zero() {
            r /= d;
            parity = !parity;
        }
        if parity {
            out.push(d);
        }
        if let Some(small) = r.to_u64() {
            let rest = odd_support_u64_from(small, d + 1, bound)?;
            out.extend(rest);
            return Ok(out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if r.is_one() {
        return Ok(out);
    }
    let dd = BigUint::from(d) * BigUint::from(d);
    if dd > r {
        let p = r.to_u64().ok_or_else(|| Error::FactorBoundExceeded(n.to_string()))?;
        out.push(p);
        Ok(out)
    } else {
        Err(Error::FactorBoundExceeded(n.to_string()))
    }
}

fn odd_support_u64(n: u64, bound: u64) -> Result<Vec<u64>> {
    odd_support_u64_from(n, 2, bound)
}

fn odd_support_u64_from(n: u64, start: u64, bound: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut r = n;
    let mut d = start;
    if d == 2 {
        let tz = r.trailing_zeros();
        r >>= tz;
        if tz % 2 == 1 {
            out.push(2);
        }
        d = 3;
    } else if d % 2 == 0 {
        d += 1;
    }
    while d <= bound && (d as u128) * (d as u128) <= r as u128 {
        let mut parity = false;
        while r % d == 0 {
            r /= d;
            parity = !parity;
        }
        if parity {
            out.push(d);
        }
        d += 2;
    }
    if r > 1 {
        if (d as u128) * (d as u128) > r as u128 || is_prime(r) {
            out.push(r);
        } else {
            return Err(Error::FactorBoundExceeded(n.to_string()));
        }
    }
    Ok(out)
}

/// Symmetric difference of two ascending prime lists.
pub fn sym_diff(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn product(primes: &[u64], neg: bool) -> BigInt {
    let mut v = BigInt::one();
    for &p in primes {
        v *= p;
    }
    if neg {
        -v
    } else {
        v
    }
}

pub fn sign_of(a: &BigInt) -> Sign {
    a.sign()
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
