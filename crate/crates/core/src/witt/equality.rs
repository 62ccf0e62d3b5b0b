//! Deciding equality in `W(k)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::WittClass;
use crate::error::Result;
use crate::field::{hilbert_symbol, FieldDescriptor, Place, SquareClass};

/// Whether two classes are equal in the Witt ring.
///
/// Over Q this checks that the difference is hyperbolic via rank, signed
/// determinant, signature and Hasse invariants (Hasse-Minkowski). Over F_p
/// the invariants are rank parity and signed discriminant; over the reals
/// the signature; over formal fields the normal forms are unique.
pub fn witt_eq(a: &WittClass, b: &WittClass) -> Result<bool> {
    a.field.check_same(&b.field)?;
    match a.field {
        FieldDescriptor::Formal(_) => Ok(a.terms == b.terms),
        FieldDescriptor::Reals => Ok(a.signature_vector()? == b.signature_vector()?),
        FieldDescriptor::FiniteField(_) => Ok(finite_invariants(a) == finite_invariants(b)),
        FieldDescriptor::Rationals => rational_is_hyperbolic(&a.sub(b)?),
    }
}

/// Entries of an honest form Witt-equal to `w`: each class with its
/// multiplicity, `-<a>` realized as `<-a>`.
fn honest_entries(w: &WittClass) -> Vec<(SquareClass, BigInt)> {
    w.terms
        .iter()
        .map(|(c, k)| if k.is_negative() { (c.negate(), -k.clone()) } else { (c.clone(), k.clone()) })
        .collect()
}

fn odd(k: &BigInt) -> bool {
    k.is_odd()
}

/// `(rank mod 2, (-1)^{r(r-1)/2} det)`.
fn finite_invariants(w: &WittClass) -> (bool, SquareClass) {
    let field = w.field;
    let entries = honest_entries(w);
    let rank: BigInt = entries.iter().map(|(_, m)| m.clone()).sum();
    let mut det = field.trivial();
    for (c, m) in &entries {
        if odd(m) {
            det = det.mul(c).expect("same field");
        }
    }
    let r4 = rank.mod_floor(&BigInt::from(4)).to_u32().expect("small");
    if r4 == 2 || r4 == 3 {
        det = det.negate();
    }
    (r4 % 2 == 1, det)
}

fn rational_is_hyperbolic(d: &WittClass) -> Result<bool> {
    let field = FieldDescriptor::Rationals;
    if d.terms.is_empty() {
        return Ok(true);
    }
    // Signature at the real place.
    if !d.virtual_rank().is_zero() {
        return Ok(false);
    }
    let entries = honest_entries(d);
    let rank: BigInt = entries.iter().map(|(_, m)| m.clone()).sum();
    if rank.is_odd() {
        return Ok(false);
    }
    let m: BigInt = &rank / 2;
    let mut det = field.trivial();
    for (c, k) in &entries {
        if odd(k) {
            det = det.mul(c)?;
        }
    }
    if m.is_odd() {
        det = det.negate();
    }
    if !det.is_trivial() {
        return Ok(false);
    }
    let mut places = vec![2u64];
    for (c, _) in &entries {
        if let SquareClass::Rational { primes, .. } = c {
            places.extend(primes.iter().copied());
        }
    }
    places.sort_unstable();
    places.dedup();
    let pairs_m_odd = choose2_odd(&m);
    let minus_one = field.minus_one();
    for p in places {
        let place = Place::Prime(p);
        let mut parity = false;
        for (i, (y, my)) in entries.iter().enumerate() {
            if choose2_odd(my) && hilbert_symbol(y, y, place)? == -1 {
                parity = !parity;
            }
            if !odd(my) {
                continue;
            }
            for (z, mz) in &entries[i + 1..] {
                if odd(mz) && hilbert_symbol(y, z, place)? == -1 {
                    parity = !parity;
                }
            }
        }
        let expected = pairs_m_odd && hilbert_symbol(&minus_one, &minus_one, place)? == -1;
        if parity != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `C(m, 2)` is odd.
fn choose2_odd(m: &BigInt) -> bool {
    let r = m.mod_floor(&BigInt::from(4)).to_u32().expect("small");
    r == 2 || r == 3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{DiagonalForm, WittClass};

    fn w(xs: &[i64]) -> WittClass {
        let f = FieldDescriptor::Rationals;
        WittClass::from_form(&DiagonalForm::new(f, xs.iter().map(|&x| f.class_of_int(x).unwrap()).collect()).unwrap())
    }

    #[test]
    fn classical_isometries() {
        // <1,1> = <2,2> = <5,5>, but <1,1> != <3,3> (3 is not a sum of two squares).
        assert!(witt_eq(&w(&[1, 1]), &w(&[2, 2])).unwrap());
        assert!(witt_eq(&w(&[1, 1]), &w(&[5, 5])).unwrap());
        assert!(!witt_eq(&w(&[1, 1]), &w(&[3, 3])).unwrap());
        // Every positive rational is a sum of four squares.
        assert!(witt_eq(&w(&[1, 1, 1, 1]), &w(&[7, 7, 7, 7])).unwrap());
        assert!(witt_eq(&w(&[2, 3]), &w(&[5, 30])).unwrap());
        assert!(!witt_eq(&w(&[1]), &w(&[2])).unwrap());
        assert!(witt_eq(&w(&[3, -3, 5]), &w(&[5])).unwrap());
    }

    #[test]
    fn finite_fields_agree_with_normal_form() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = FieldDescriptor::finite_field(p).unwrap();
            let u = (2..p).find(|&x| f.class_of_int(x as i64).map(|c| !c.is_trivial()).unwrap()).unwrap();
            let cls = [f.trivial(), f.class_of_int(u as i64).unwrap()];
            for a in 0..4i64 {
                for b in 0..4i64 {
                    for c in 0..4i64 {
                        for d in 0..4i64 {
                            let x = WittClass::from_terms(f, [(cls[0].clone(), a.into()), (cls[1].clone(), b.into())])
                                .unwrap();
                            let y = WittClass::from_terms(f, [(cls[0].clone(), c.into()), (cls[1].clone(), d.into())])
                                .unwrap();
                            assert_eq!(witt_eq(&x, &y).unwrap(), x == y, "p={p}");
                        }
                    }
                }
            }
        }
    }
}
