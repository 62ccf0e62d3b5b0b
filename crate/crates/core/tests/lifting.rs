use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wittcalc::cohomology::{e_map, symbol_normalize, CohClass};
use wittcalc::field::FieldDescriptor;
use wittcalc::lifting::{bn_generator_tables, decompose, e_extract, Decomposition, EvaluationTable};
use wittcalc::sample;
use wittcalc::verify::bn_samples;
use wittcalc::weyl::{eval_a_k, MultiquadraticTorsor};
use wittcalc::witt::{filtration_degree, lambda_power, pfister, witt_eq, WittClass};
use wittcalc::Error;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn reproduces(d: &Decomposition, target: &EvaluationTable, generators: &[EvaluationTable]) -> bool {
    let got = d.reproduce(generators).unwrap();
    got.iter().zip(target.values()).all(|(a, b)| witt_eq(a, b).unwrap())
}

fn lambda_tables(samples: &[MultiquadraticTorsor], n: usize) -> Vec<EvaluationTable> {
    (0..=n).map(|i| EvaluationTable::from_fn(samples, 0, |t| lambda_power(&eval_a_k(t)?, i)).unwrap()).collect()
}

#[test]
fn extraction_examples() {
    let f = FieldDescriptor::Formal(2);
    let (t1, t2) = (f.t(1).unwrap(), f.t(2).unwrap());
    let p = pfister(f, &[t1.clone(), t2.clone()]).unwrap();
    assert_eq!(e_extract(&p, 2).unwrap(), symbol_normalize(&f, &[t1.clone(), t2.clone()]).unwrap());
    assert!(e_extract(&WittClass::zero(f), 3).unwrap().is_syntactic_zero());
    let sum =
        pfister(f, std::slice::from_ref(&t1)).unwrap().add(&pfister(f, std::slice::from_ref(&t2)).unwrap()).unwrap();
    let expected = CohClass::linear(&t1).add(&CohClass::linear(&t2)).unwrap();
    assert_eq!(e_extract(&sum, 1).unwrap(), expected);
    let presentation = wittcalc::witt::PfisterPresentation::new(
        f,
        1,
        vec![(BigInt::from(1), vec![t1.clone()]), (BigInt::from(1), vec![t2.clone()])],
    )
    .unwrap();
    assert_eq!(e_map(&presentation).unwrap(), expected);
    assert!(matches!(e_extract(&WittClass::one(f), 1), Err(Error::NotInIdealPower(_))));
    assert!(e_extract(&WittClass::one(FieldDescriptor::Rationals), 0).is_err());
}

#[test]
fn own_table_is_its_own_decomposition() {
    let samples = bn_samples(&mut rng(1), 2, 10).unwrap();
    let generators = bn_generator_tables(&samples, 2).unwrap();
    for (i, target) in generators.iter().enumerate() {
        let d = decompose(target, &generators, 2).unwrap();
        assert!(d.residual_ok);
        assert!(reproduces(&d, target, &generators));
        assert!(witt_eq(&d.coefficients[i], &WittClass::one(target.field())).unwrap(), "table {i}");
        assert!(d.constant.is_syntactic_zero());
    }
}

#[test]
fn top_lambda_power_is_recovered() {
    let samples = bn_samples(&mut rng(2), 2, 10).unwrap();
    let generators = lambda_tables(&samples, 2);
    let d = decompose(&generators[2], &generators, 2).unwrap();
    assert!(d.residual_ok);
    let f = generators[0].field();
    assert_eq!(d.coefficients, vec![WittClass::zero(f), WittClass::zero(f), WittClass::one(f)]);
    assert!(d.constant.is_syntactic_zero());
}

#[test]
fn synthetic_combination_is_reproduced() {
    let samples = bn_samples(&mut rng(3), 2, 12).unwrap();
    let generators = lambda_tables(&samples, 1);
    let f = generators[0].field();
    let coeffs = vec![pfister(f, &[f.t(1).unwrap()]).unwrap(), WittClass::from_int(f, 3)];
    let target = EvaluationTable::combine(&generators, &coeffs, 0).unwrap();
    let d = decompose(&target, &generators, 2).unwrap();
    assert!(d.residual_ok);
    assert!(reproduces(&d, &target, &generators));
}

#[test]
fn targets_outside_the_span_are_rejected() {
    let samples = bn_samples(&mut rng(4), 2, 10).unwrap();
    let constants = &lambda_tables(&samples, 2)[..1];
    let target = EvaluationTable::from_fn(&samples, 0, |t| Ok(WittClass::from_form(&eval_a_k(t)?))).unwrap();
    let varies = target.values().windows(2).any(|w| w[0] != w[1]);
    assert!(varies);
    let err = decompose(&target, constants, 2).unwrap_err();
    assert!(matches!(err, Error::NotInSpan(_) | Error::ResidualNonConstant(_)), "{err:?}");

    let other = bn_samples(&mut rng(5), 2, 10).unwrap();
    let foreign = lambda_tables(&other, 0);
    assert!(decompose(&target, &foreign, 2).is_err());
}

#[test]
fn tables_check_their_declared_degree() {
    let samples = bn_samples(&mut rng(6), 2, 4).unwrap();
    let f = samples[0].field();
    let ones = vec![WittClass::one(f); samples.len()];
    assert!(matches!(EvaluationTable::new(samples.clone(), ones, 1), Err(Error::NotInIdealPower(_))));
    assert!(EvaluationTable::new(samples, vec![], 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn extraction_agrees_with_e_map(seed in any::<u64>(), degree in 0usize..5, terms in 1usize..5) {
        let p = sample::formal_presentation(&mut rng(seed), 4, degree, terms);
        let w = p.to_witt().unwrap();
        prop_assert!(filtration_degree(&w, degree).unwrap() >= degree);
        let e = e_extract(&w, degree).unwrap();
        prop_assert_eq!(e.clone(), e_map(&p).unwrap());
        if e.is_syntactic_zero() {
            prop_assert!(filtration_degree(&w, degree + 1).unwrap() > degree);
        }
    }

    #[test]
    fn decompose_is_sound_and_complete(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let samples = bn_samples(&mut r, n, 10).unwrap();
        let generators = bn_generator_tables(&samples, n).unwrap();
        let f = samples[0].field();
        let coeffs: Vec<WittClass> = generators
            .iter()
            .map(|_| {
                let c = sample::nonzero_int(&mut r, 3);
                let k = sample::formal_class(&mut r, 3);
                WittClass::from_int(f, c).add(&pfister(f, &[k]).unwrap()).unwrap()
            })
            .collect();
        let target = EvaluationTable::combine(&generators, &coeffs, 0).unwrap();
        let d = decompose(&target, &generators, n).unwrap();
        prop_assert!(d.residual_ok);
        prop_assert!(reproduces(&d, &target, &generators));
    }
}
