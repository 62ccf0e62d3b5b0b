//! Seeded random generators for forms, presentations and torsors.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::field::{FieldDescriptor, SquareClass};
use crate::weyl::{wreath_mul, MultiquadraticTorsor, Perm, TargetGroup, WreathElement};
use crate::witt::{DiagonalForm, PfisterPresentation};

/// Nonzero integer in `[-height, height]`.
pub fn nonzero_int<R: Rng>(rng: &mut R, height: i64) -> i64 {
    loop {
        let x = rng.gen_range(-height..=height);
        if x != 0 {
            return x;
        }
    }
}

pub fn rational_class<R: Rng>(rng: &mut R, height: i64) -> SquareClass {
    FieldDescriptor::Rationals.class_of_int(nonzero_int(rng, height)).expect("small integers factor")
}

/// Uniform class of `Formal(g)`: random sign and random generator subset.
pub fn formal_class<R: Rng>(rng: &mut R, g: u32) -> SquareClass {
    SquareClass::Formal { g, mask: rng.gen_range(0..1u64 << (g + 1)) }
}

pub fn rational_form<R: Rng>(rng: &mut R, dim: usize, height: i64) -> DiagonalForm {
    let entries = (0..dim).map(|_| rational_class(rng, height)).collect();
    DiagonalForm::new(FieldDescriptor::Rationals, entries).expect("same field")
}

pub fn formal_form<R: Rng>(rng: &mut R, g: u32, dim: usize) -> DiagonalForm {
    let entries = (0..dim).map(|_| formal_class(rng, g)).collect();
    DiagonalForm::new(FieldDescriptor::Formal(g), entries).expect("same field")
}

/// Presentation with `terms` terms of the given degree and small coefficients.
pub fn formal_presentation<R: Rng>(rng: &mut R, g: u32, degree: usize, terms: usize) -> PfisterPresentation {
    let f = FieldDescriptor::Formal(g);
    let t = (0..terms)
        .map(|_| {
            let c = BigInt::from(nonzero_int(rng, 3));
            (c, (0..degree).map(|_| formal_class(rng, g)).collect())
        })
        .collect();
    PfisterPresentation::new(f, degree, t).expect("same field")
}

/// A random involution of `W(B_n)`: a random matching with a flip set that
/// is a union of its orbits (the condition for squaring to one).
pub fn wreath_involution<R: Rng>(rng: &mut R, n: usize, even: bool) -> WreathElement {
    loop {
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(rng);
        let mut img: Vec<usize> = (0..n).collect();
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < n {
            if i + 1 < n && rng.gen_bool(0.5) {
                img[pts[i]] = pts[i + 1];
                img[pts[i + 1]] = pts[i];
                orbits.push(vec![pts[i], pts[i + 1]]);
                i += 2;
            } else {
                orbits.push(vec![pts[i]]);
                i += 1;
            }
        }
        let mut flips = 0u64;
        for o in &orbits {
            if rng.gen_bool(0.5) {
                for &p in o {
                    flips |= 1 << p;
                }
            }
        }
        if even && flips.count_ones() % 2 == 1 {
            continue;
        }
        return WreathElement::new(Perm::new(img).expect("matching"), flips).expect("n small");
    }
}

/// `m` pairwise commuting involutions, found by rejection; falls back to the
/// identity when no commuting candidate turns up.
pub fn commuting_involutions<R: Rng>(rng: &mut R, n: usize, m: usize, even: bool) -> Vec<WreathElement> {
    let mut out: Vec<WreathElement> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut pick = WreathElement::identity(n);
        for _ in 0..200 {
            let x = wreath_involution(rng, n, even);
            let commutes = out.iter().all(|y| wreath_mul(&x, y).expect("same n") == wreath_mul(y, &x).expect("same n"));
            if commutes {
                pick = x;
                break;
            }
        }
        out.push(pick);
    }
    out
}

/// Random involution-valued images for `S_n`: matchings without flips.
fn sn_involutions<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<WreathElement> {
    let mut out: Vec<WreathElement> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut pick = WreathElement::identity(n);
        for _ in 0..200 {
            let x = wreath_involution(rng, n, false);
            let x = WreathElement::new(x.perm().clone(), 0).expect("valid");
            if out.iter().all(|y| wreath_mul(&x, y).expect("same n") == wreath_mul(y, &x).expect("same n")) {
                pick = x;
                break;
            }
        }
        out.push(pick);
    }
    out
}

/// Square classes for a rank-`m` torsor: `t_1..t_m` over a formal field,
/// signed distinct primes over Q.
pub fn torsor_classes<R: Rng>(rng: &mut R, field: FieldDescriptor, m: usize) -> Vec<SquareClass> {
    match field {
        FieldDescriptor::Formal(_) => (1..=m as u32).map(|i| field.t(i).expect("g >= m")).collect(),
        _ => {
            let mut primes = vec![2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
            primes.shuffle(rng);
            primes[..m]
                .iter()
                .map(|&p| {
                    let s = if rng.gen_bool(0.3) { -p } else { p };
                    field.class_of_int(s).expect("prime")
                })
                .collect()
        }
    }
}

pub fn torsor<R: Rng>(
    rng: &mut R,
    field: FieldDescriptor,
    target: TargetGroup,
    m: usize,
) -> Result<MultiquadraticTorsor> {
    let d = torsor_classes(rng, field, m);
    let images = match target {
        TargetGroup::Bn(n) => commuting_involutions(rng, n, m, false),
        TargetGroup::Dn(n) => commuting_involutions(rng, n, m, true),
        TargetGroup::Sn(n) => sn_involutions(rng, n, m),
        TargetGroup::G2 => {
            let a = sn_involutions(rng, 2, m);
            let b = sn_involutions(rng, 3, m);
            a.iter()
                .zip(&b)
                .map(|(x, y)| {
                    let mut img = x.perm().images().to_vec();
                    img.extend(y.perm().images().iter().map(|i| i + 2));
                    WreathElement::new(Perm::new(img).expect("blocks"), 0).expect("valid")
                })
                .collect()
        }
    };
    MultiquadraticTorsor::new(field, d, target, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn torsors_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            for m in 0..=3 {
                torsor(&mut rng, FieldDescriptor::Formal(3), TargetGroup::Bn(n), m).unwrap();
                torsor(&mut rng, FieldDescriptor::Rationals, TargetGroup::Sn(n), m).unwrap();
                if n >= 2 {
                    torsor(&mut rng, FieldDescriptor::Formal(3), TargetGroup::Dn(n), m).unwrap();
                }
            }
            torsor(&mut rng, FieldDescriptor::Rationals, TargetGroup::G2, 2).unwrap();
        }
    }

    #[test]
    fn same_seed_same_draws() {
        let a = formal_form(&mut ChaCha8Rng::seed_from_u64(9), 4, 6);
        let b = formal_form(&mut ChaCha8Rng::seed_from_u64(9), 4, 6);
        assert_eq!(a, b);
    }
}
