//! Seeded property suites, shared by `wittcalc verify` and the test targets.
//!
//! Each suite draws from its own `ChaCha8` stream seeded with the user seed,
//! so a suite reports the same cases alone or inside `all`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cohomology::{cup, e_map, is_zero, sw, sw_lift, sw_mod, sw_mod_lift, symbol_normalize, CohClass};
use crate::error::{Error, Result};
use crate::etale::{trace_form, EtaleAlgebra, EtaleComponent, Poly};
use crate::field::{hilbert_symbol, FieldDescriptor, Place, SquareClass};
use crate::json;
use crate::lifting::{bn_generator_tables, decompose, e_extract, EvaluationTable};
use crate::sample;
use crate::weyl::{
    eval_a_k, eval_a_l, eval_g2, eval_r, eval_u, eval_v, eval_v_prime, eval_v_upto, lift_u, lift_v_prime, twist,
    MultiquadraticTorsor, Perm, TargetGroup, WreathElement,
};
use crate::witt::{
    diagonalize, filtration_degree, lambda_power, lambda_power_gram_oracle, pfister, witt_eq, DiagonalForm, GramMatrix,
    PfisterPresentation, WittClass,
};

/// Counterexamples kept per property.
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Lemma34,
    LambdaOracle,
    Hilbert,
    TraceOracle,
    WeylConsistency,
    LiftRoundtrip,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma34,
        Suite::LambdaOracle,
        Suite::Hilbert,
        Suite::TraceOracle,
        Suite::WeylConsistency,
        Suite::LiftRoundtrip,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma34 => "lemma34",
            Suite::LambdaOracle => "lambda-oracle",
            Suite::Hilbert => "hilbert",
            Suite::TraceOracle => "trace-oracle",
            Suite::WeylConsistency => "weyl-consistency",
            Suite::LiftRoundtrip => "lift-roundtrip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one property over its cases.
#[derive(Debug, Clone, PartialEq)]
pub struct Property {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexamples: Vec<Value>,
}

impl Property {
    pub fn new(name: &str) -> Self {
        Property { name: name.into(), cases: 0, failures: 0, counterexamples: vec![] }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Record a case; library errors count as failures.
    pub fn check<F>(&mut self, outcome: Result<bool>, witness: F)
    where
        F: FnOnce() -> Value,
    {
        self.cases += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => witness(),
            Err(e) => json!({ "case": witness(), "error": json::error_to_json(&e) }),
        };
        self.failures += 1;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(failure);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed(),
            "cases": self.cases,
            "failures": self.failures,
            "counterexamples": self.counterexamples,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub properties: Vec<Property>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(Property::passed)
    }

    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "passed": self.passed(),
            "properties": self.properties.iter().map(Property::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let properties = match suite {
        Suite::Lemma34 => vec![
            sw_lift_property(&mut rng, 5, 30, false),
            sw_lift_property(&mut rng, 5, 30, true),
            e_extract_vs_e_map(&mut rng, 4, 100),
            e_kernel_filtration(&mut rng, 4, 100),
        ],
        Suite::LambdaOracle => vec![lambda_oracle(&mut rng, 100, 5, 10)],
        Suite::Hilbert => vec![
            hilbert_symmetries(&mut rng, 50),
            hilbert_product_formula(&mut rng, 50),
            e_map_rational_kernel(&mut rng, 50),
        ],
        Suite::TraceOracle => {
            vec![quadratic_trace_forms(&mut rng), biquadratic_presentations(&mut rng), split_trace_forms(&mut rng)]
        }
        Suite::WeylConsistency => vec![
            bn_normalization(),
            bn_lift_identities(&mut rng, 20),
            v_recursion(&mut rng, 20),
            quadratic_pair_orbits(&mut rng, 50),
            dn_containment(&mut rng, 10),
            g2_basis(),
        ],
        Suite::LiftRoundtrip => vec![lift_roundtrip(&mut rng, 20, 12)],
    };
    SuiteReport { suite, seed, properties }
}

// ---- Stiefel-Whitney lifts and the e-maps ----

/// `e_d` of the lifted `λ`-combination equals `sw_d` (or `sw~_d`) over
/// `Formal(n)` for forms of dimension `n`.
pub fn sw_lift_property<R: Rng>(rng: &mut R, max_n: usize, forms: usize, modified: bool) -> Property {
    let mut p = Property::new(if modified { "sw-mod-lift" } else { "sw-lift" });
    for n in 0..=max_n {
        let g = n as u32;
        for _ in 0..forms {
            let q = sample::formal_form(rng, g, n);
            for d in 0..=n {
                let outcome = (|| {
                    let (recipe, expected) =
                        if modified { (sw_mod_lift(n, d)?, sw_mod(&q, d)?) } else { (sw_lift(n, d)?, sw(&q, d)?) };
                    Ok(e_extract(&recipe.apply(&q)?, d)? == expected)
                })();
                p.check(outcome, || json!({ "form": json::form_to_json(&q), "d": d }));
            }
        }
    }
    p
}

fn random_presentation<R: Rng>(rng: &mut R, g: u32, max_degree: usize) -> PfisterPresentation {
    let degree = rng.gen_range(0..=max_degree);
    let terms = rng.gen_range(1..=3);
    sample::formal_presentation(rng, g, degree, terms)
}

pub fn e_extract_vs_e_map<R: Rng>(rng: &mut R, g: u32, count: usize) -> Property {
    let mut p = Property::new("e-extract-vs-e-map");
    for _ in 0..count {
        let pres = random_presentation(rng, g, 4);
        let outcome = (|| Ok(e_extract(&pres.to_witt()?, pres.degree)? == e_map(&pres)?))();
        p.check(outcome, || json::pfister_to_json(&pres));
    }
    p
}

/// A presentation with the same `e`-image: slots shuffled, `(a, b)` replaced
/// by `(a, -ab)`, coefficients moved by even amounts.
fn same_symbol_variant<R: Rng>(rng: &mut R, pres: &PfisterPresentation) -> Result<PfisterPresentation> {
    let f = pres.field;
    let mut terms = Vec::with_capacity(pres.terms.len());
    for (k, gens) in &pres.terms {
        let mut gens = gens.clone();
        gens.shuffle(rng);
        if gens.len() >= 2 {
            gens[1] = gens[0].mul(&gens[1])?.negate();
        }
        terms.push((k + BigInt::from(2 * rng.gen_range(-1..=1)), gens));
    }
    PfisterPresentation::new(f, pres.degree, terms)
}

/// `e_d(w) = 0` forces `w` into `I^{d+1}`.
pub fn e_kernel_filtration<R: Rng>(rng: &mut R, g: u32, count: usize) -> Property {
    let mut p = Property::new("e-kernel-filtration");
    for i in 0..count {
        let pres = random_presentation(rng, g, 4);
        let d = pres.degree;
        let outcome = (|| {
            let w = if i % 4 == 3 {
                pres.to_witt()?
            } else {
                pres.to_witt()?.sub(&same_symbol_variant(rng, &pres)?.to_witt()?)?
            };
            if e_extract(&w, d)?.is_syntactic_zero() {
                Ok(filtration_degree(&w, d + 1)? > d)
            } else {
                Ok(true)
            }
        })();
        p.check(outcome, || json::pfister_to_json(&pres));
    }
    p
}

// ---- λ-operations ----

pub fn lambda_oracle<R: Rng>(rng: &mut R, count: usize, max_dim: usize, height: i64) -> Property {
    let mut p = Property::new("lambda-vs-determinant-oracle");
    for _ in 0..count {
        let dim = rng.gen_range(1..=max_dim);
        let q = sample::rational_form(rng, dim, height);
        for d in 0..=dim {
            let outcome = (|| {
                let oracle = diagonalize(&lambda_power_gram_oracle(&GramMatrix::from_form(&q)?, d)?)?;
                witt_eq(&lambda_power(&q, d)?, &WittClass::from_form(&oracle))
            })();
            p.check(outcome, || json!({ "form": json::form_to_json(&q), "d": d }));
        }
    }
    p
}

// ---- local symbols ----

fn support(c: &SquareClass) -> Vec<u64> {
    match c {
        SquareClass::Rational { primes, .. } => primes.clone(),
        _ => vec![],
    }
}

/// `(a, b)_v = (b, a)_v` and `(a, -a)_v = 1` at `∞`, 2 and the support.
pub fn hilbert_symmetries<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("hilbert-symmetries");
    for _ in 0..count {
        let a = sample::rational_class(rng, 30);
        let b = sample::rational_class(rng, 30);
        let outcome = (|| {
            let mut places = vec![Place::Infinity, Place::Prime(2)];
            places.extend(support(&a).into_iter().chain(support(&b)).map(Place::Prime));
            let mut ok = true;
            for v in places {
                ok &= hilbert_symbol(&a, &b, v)? == hilbert_symbol(&b, &a, v)?;
                ok &= hilbert_symbol(&a, &a.negate(), v)? == 1;
            }
            Ok(ok)
        })();
        p.check(outcome, || json!({ "a": json::class_to_json(&a), "b": json::class_to_json(&b) }));
    }
    p
}

pub fn hilbert_product_formula<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("hilbert-product-formula");
    for _ in 0..count {
        let a = sample::rational_class(rng, 30);
        let b = sample::rational_class(rng, 30);
        let outcome = (|| {
            let mut places = vec![Place::Infinity, Place::Prime(2)];
            let mut primes: Vec<u64> = support(&a).into_iter().chain(support(&b)).filter(|&x| x != 2).collect();
            primes.sort_unstable();
            primes.dedup();
            places.extend(primes.into_iter().map(Place::Prime));
            let mut prod = 1i8;
            for v in places {
                prod *= hilbert_symbol(&a, &b, v)?;
            }
            Ok(prod == 1)
        })();
        p.check(outcome, || json!({ "a": json::class_to_json(&a), "b": json::class_to_json(&b) }));
    }
    p
}

/// Over Q: `<<a, b>>` is hyperbolic exactly when `(a)(b) = 0`.
pub fn e_map_rational_kernel<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("e-map-rational-kernel");
    let q = FieldDescriptor::Rationals;
    for i in 0..count {
        let a = sample::rational_class(rng, 30);
        // Every third pair is forced into the kernel: b = 1 - a or b = -a.
        let b = match i % 3 {
            0 => {
                let av = a.rational_value().expect("rational");
                let c = BigInt::from(1) - av;
                if c == BigInt::from(0) {
                    q.minus_one()
                } else {
                    q.class_of(&num_rational::BigRational::from_integer(c)).expect("nonzero")
                }
            }
            _ => sample::rational_class(rng, 30),
        };
        let outcome = (|| {
            let hyperbolic = witt_eq(&pfister(q, &[a.clone(), b.clone()])?, &WittClass::zero(q))?;
            let vanishes = is_zero(&symbol_normalize(&q, &[a.clone(), b.clone()])?)?;
            Ok(hyperbolic == vanishes)
        })();
        p.check(outcome, || json!({ "a": json::class_to_json(&a), "b": json::class_to_json(&b) }));
    }
    p
}

// ---- trace forms ----

fn q_form(xs: &[i64]) -> Result<WittClass> {
    let q = FieldDescriptor::Rationals;
    let entries = xs.iter().map(|&x| q.class_of_int(x)).collect::<Result<Vec<_>>>()?;
    Ok(WittClass::from_form(&DiagonalForm::new(q, entries)?))
}

fn trace_witt(components: Vec<EtaleComponent>) -> Result<WittClass> {
    Ok(WittClass::from_form(&trace_form(&EtaleAlgebra::new(FieldDescriptor::Rationals, components)?)?))
}

/// `Q[x]/(x^2 - d)` has trace form `<2, 2d>`.
pub fn quadratic_trace_forms<R: Rng>(rng: &mut R) -> Property {
    let mut p = Property::new("quadratic-trace-form");
    let mut ds = vec![-1i64, 2, 3, 5, 6];
    for _ in 0..10 {
        let d = sample::nonzero_int(rng, 50);
        let root = (d.unsigned_abs() as f64).sqrt().round() as i64;
        if !(d > 0 && root * root == d) {
            ds.push(d);
        }
    }
    for d in ds {
        let outcome = (|| {
            witt_eq(&trace_witt(vec![EtaleComponent::Poly(Poly::from_ints(&[-d, 0, 1]))])?, &q_form(&[2, 2 * d])?)
        })();
        p.check(outcome, || json!({ "d": d }));
    }
    p
}

/// `Q(sqrt d1, sqrt d2)` presented as a multiquadratic algebra and by the
/// minimal polynomial of `sqrt d1 + sqrt d2`.
pub fn biquadratic_presentations<R: Rng>(rng: &mut R) -> Property {
    let mut p = Property::new("multiquadratic-vs-quartic");
    let mut pairs = vec![(2i64, 3i64), (2, 5), (3, 5)];
    let primes = [2i64, 3, 5, 7, 11, 13, -1, -3];
    for _ in 0..5 {
        let mut pick: Vec<i64> = primes.to_vec();
        pick.shuffle(rng);
        pairs.push((pick[0], pick[1]));
    }
    let q = FieldDescriptor::Rationals;
    for (d1, d2) in pairs {
        let outcome = (|| {
            let multi =
                trace_witt(vec![EtaleComponent::Multiquadratic(vec![q.class_of_int(d1)?, q.class_of_int(d2)?])])?;
            let s = d1 - d2;
            let quartic = Poly::from_ints(&[s * s, 0, -2 * (d1 + d2), 0, 1]);
            witt_eq(&multi, &trace_witt(vec![EtaleComponent::Poly(quartic)])?)
        })();
        p.check(outcome, || json!({ "d1": d1, "d2": d2 }));
    }
    p
}

/// Split algebras have trace form `<1, ..., 1>`.
pub fn split_trace_forms<R: Rng>(rng: &mut R) -> Property {
    let mut p = Property::new("split-trace-form");
    for n in 1..=5usize {
        let mut roots: Vec<i64> = (-6..=6).collect();
        roots.shuffle(rng);
        roots.truncate(n);
        let mut f = Poly::from_ints(&[1]);
        for &r in &roots {
            f = f.mul(&Poly::from_ints(&[-r, 1]));
        }
        let outcome = (|| {
            let ones = q_form(&vec![1; n])?;
            let by_poly = trace_witt(vec![EtaleComponent::Poly(f.clone())])?;
            let by_parts = trace_witt((0..n).map(|_| EtaleComponent::Poly(Poly::from_ints(&[0, 1]))).collect())?;
            Ok(witt_eq(&by_poly, &ones)? && witt_eq(&by_parts, &ones)?)
        })();
        p.check(outcome, || json!({ "roots": roots }));
    }
    p
}

// ---- Weyl groups ----

pub fn bn_normalization() -> Property {
    let mut p = Property::new("bn-normalized");
    for field in [FieldDescriptor::Formal(3), FieldDescriptor::Rationals] {
        for n in 1..=4 {
            let outcome = (|| {
                let t = MultiquadraticTorsor::trivial(field, TargetGroup::Bn(n))?;
                let mut ok = true;
                for d in 1..=n {
                    ok &= eval_u(&t, d)?.is_syntactic_zero() && eval_v(&t, d)?.is_syntactic_zero();
                }
                for d in 1..=2 * n {
                    ok &= eval_v_prime(&t, d)?.is_syntactic_zero();
                }
                Ok(ok)
            })();
            p.check(outcome, || json!({ "field": field.to_string(), "n": n }));
        }
    }
    p
}

fn formal_bn_torsor<R: Rng>(rng: &mut R, i: usize) -> Result<MultiquadraticTorsor> {
    let n = 1 + i % 4;
    let m = rng.gen_range(0..=3);
    sample::torsor(rng, FieldDescriptor::Formal(3), TargetGroup::Bn(n), m)
}

/// `e_d(lift_u) = u_d` and `e_d(lift_v') = v'_d`.
pub fn bn_lift_identities<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("bn-lift-e-images");
    for i in 0..count {
        let t = match formal_bn_torsor(rng, i) {
            Ok(t) => t,
            Err(e) => {
                p.check(Err(e), || json!({ "index": i }));
                continue;
            }
        };
        let n = t.target().degree();
        let outcome = (|| {
            let mut ok = true;
            for d in 0..=n {
                ok &= e_extract(&lift_u(&t, d)?, d)? == eval_u(&t, d)?;
            }
            for d in 0..=2 * n {
                ok &= e_extract(&lift_v_prime(&t, d)?, d)? == eval_v_prime(&t, d)?;
            }
            Ok(ok)
        })();
        p.check(outcome, || json::torsor_to_json(&t));
    }
    p
}

/// `v_d = sum over compositions j_1 + ... + j_k + i = d (j >= 1) of
/// u_{j_1} ... u_{j_k} v'_i`, the recursion unrolled.
pub fn v_unrolled(t: &MultiquadraticTorsor, d: usize) -> Result<CohClass> {
    let u: Vec<CohClass> = (0..=d).map(|j| eval_u(t, j)).collect::<Result<_>>()?;
    let field = t.field();
    // prefix[s] = sum of all products u_{j_1}...u_{j_k} with total degree s.
    let mut prefix: Vec<CohClass> = vec![CohClass::one(field)];
    for s in 1..=d {
        let mut acc = CohClass::zero(field, s);
        for j in 1..=s {
            acc = acc.add(&cup(&prefix[s - j], &u[j])?)?;
        }
        prefix.push(acc);
    }
    let mut out = CohClass::zero(field, d);
    for i in 0..=d {
        out = out.add(&cup(&prefix[d - i], &eval_v_prime(t, i)?)?)?;
    }
    Ok(out)
}

pub fn v_recursion<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("v-recursion-unrolled");
    for i in 0..count {
        let outcome = (|| {
            let t = formal_bn_torsor(rng, i)?;
            let n = t.target().degree();
            let v = eval_v_upto(&t, n)?;
            let mut ok = true;
            for (d, vd) in v.iter().enumerate() {
                ok &= *vd == v_unrolled(&t, d)?;
            }
            Ok(ok)
        })();
        p.check(outcome, || json!({ "index": i }));
    }
    p
}

/// Each `ρ`-orbit on `n` points is covered by `ρ_2`-orbits on `2n` points of
/// total size twice its own, and the twisted algebras have the right degrees.
pub fn quadratic_pair_orbits<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("quadratic-pair-orbits");
    for i in 0..count {
        let field = if i % 2 == 0 { FieldDescriptor::Rationals } else { FieldDescriptor::Formal(3) };
        let n = 1 + i % 5;
        let m = rng.gen_range(0..=3);
        let t = match sample::torsor(rng, field, TargetGroup::Bn(n), m) {
            Ok(t) => t,
            Err(e) => {
                p.check(Err(e), || json!({ "index": i }));
                continue;
            }
        };
        let outcome = (|| {
            let small = t.natural_set()?;
            let big = t.double_set()?;
            let mut ok = true;
            for orbit in small.orbits() {
                let covering: usize = big
                    .orbits()
                    .iter()
                    .filter(|o| orbit.contains(&(o[0] % n)))
                    .map(|o| {
                        ok &= o.iter().all(|x| orbit.contains(&(x % n)));
                        o.len()
                    })
                    .sum();
                ok &= covering == 2 * orbit.len();
            }
            ok &= twist(&t, &small)?.dim() == n && twist(&t, &big)?.dim() == 2 * n;
            Ok(ok)
        })();
        p.check(outcome, || json::torsor_to_json(&t));
    }
    p
}

/// `r` has dimension `2^{n-1}`; its normalized class has even rank for
/// `n = 2` and trivial discriminant for `n = 4` (shadows of `I^{n/2}`).
pub fn dn_containment<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("dn-r-containment");
    let q = FieldDescriptor::Rationals;
    for n in 2..=4usize {
        for _ in 0..count {
            let m = rng.gen_range(0..=3);
            let t = match sample::torsor(rng, q, TargetGroup::Dn(n), m) {
                Ok(t) => t,
                Err(e) => {
                    p.check(Err(e), || json!({ "n": n }));
                    continue;
                }
            };
            let outcome = (|| {
                let r = eval_r(&t)?;
                let dim = 1usize << (n - 1);
                let mut ok = r.dim() == dim;
                match n {
                    2 => ok &= (r.dim() - dim) % 2 == 0,
                    4 => {
                        // Signed discriminant of r - 8<1>, a form of rank 16.
                        ok &= r.determinant().is_trivial();
                    }
                    _ => {}
                }
                Ok(ok)
            })();
            p.check(outcome, || json::torsor_to_json(&t));
        }
    }
    p
}

/// The four designated `G_2` torsors over `Formal(2)`: `(t_1`-swap, split),
/// (split, `t_2`-transposition), both, neither.
pub fn g2_designated_torsors() -> Result<Vec<MultiquadraticTorsor>> {
    let f = FieldDescriptor::Formal(2);
    let swap = WreathElement::new(Perm::from_cycles(5, &[&[0, 1]]), 0)?;
    let transposition = WreathElement::new(Perm::from_cycles(5, &[&[2, 3]]), 0)?;
    let (t1, t2) = (f.t(1)?, f.t(2)?);
    Ok(vec![
        MultiquadraticTorsor::new(f, vec![t1.clone()], TargetGroup::G2, vec![swap.clone()])?,
        MultiquadraticTorsor::new(f, vec![t2.clone()], TargetGroup::G2, vec![transposition.clone()])?,
        MultiquadraticTorsor::new(f, vec![t1, t2], TargetGroup::G2, vec![swap, transposition])?,
        MultiquadraticTorsor::trivial(f, TargetGroup::G2)?,
    ])
}

/// Pairwise distinct basis invariants, no vanishing nonzero F_2-combination,
/// and the fourth basis element is the product of the second and third.
pub fn g2_basis() -> Property {
    let mut p = Property::new("g2-basis");
    let outcome = (|| {
        let torsors = g2_designated_torsors()?;
        let values: Vec<[WittClass; 4]> = torsors.iter().map(eval_g2).collect::<Result<_>>()?;
        let mut ok = true;
        for v in &values {
            ok &= v[3] == v[1].mul(&v[2])?;
        }
        for j in 0..4 {
            for k in j + 1..4 {
                let mut differ = false;
                for v in &values {
                    differ |= !witt_eq(&v[j], &v[k])?;
                }
                ok &= differ;
            }
        }
        let f = FieldDescriptor::Formal(2);
        for c in 1u8..16 {
            let mut somewhere = false;
            for v in &values {
                let mut w = WittClass::zero(f);
                for (j, b) in v.iter().enumerate() {
                    if c >> j & 1 == 1 {
                        w = w.add(b)?;
                    }
                }
                somewhere |= !witt_eq(&w, &WittClass::zero(f))?;
            }
            ok &= somewhere;
        }
        Ok(ok)
    })();
    p.check(outcome, || json!("designated G2 torsors"));
    p
}

// ---- specialization ----

/// The rational class obtained by substituting `t_i -> subs[i-1]`.
pub fn specialize_class(c: &SquareClass, subs: &[i64]) -> Result<SquareClass> {
    let q = FieldDescriptor::Rationals;
    let SquareClass::Formal { mask, .. } = c else {
        return Err(Error::UnsupportedBackend(c.field().to_string()));
    };
    let mut out = if mask & 1 == 1 { q.minus_one() } else { q.trivial() };
    for (i, &s) in subs.iter().enumerate() {
        if mask >> (i + 1) & 1 == 1 {
            out = out.mul(&q.class_of_int(s)?)?;
        }
    }
    Ok(out)
}

pub fn specialize_witt(w: &WittClass, subs: &[i64]) -> Result<WittClass> {
    let terms =
        w.terms().iter().map(|(c, k)| Ok((specialize_class(c, subs)?, k.clone()))).collect::<Result<Vec<_>>>()?;
    WittClass::from_terms(FieldDescriptor::Rationals, terms)
}

pub fn specialize_torsor(t: &MultiquadraticTorsor, subs: &[i64]) -> Result<MultiquadraticTorsor> {
    let d = t.d().iter().map(|c| specialize_class(c, subs)).collect::<Result<Vec<_>>>()?;
    MultiquadraticTorsor::new(FieldDescriptor::Rationals, d, t.target(), t.images().to_vec())
}

/// Every Witt-valued evaluator applied to a torsor, by name.
pub fn witt_invariants(t: &MultiquadraticTorsor) -> Result<Vec<(String, WittClass)>> {
    let mut out = Vec::new();
    match t.target() {
        TargetGroup::Bn(n) => {
            out.push(("aK".into(), WittClass::from_form(&eval_a_k(t)?)));
            out.push(("aL".into(), WittClass::from_form(&eval_a_l(t)?)));
            for d in 1..=n {
                out.push((format!("lift_u[{d}]"), lift_u(t, d)?));
            }
            for d in 1..=2 * n {
                out.push((format!("lift_vprime[{d}]"), lift_v_prime(t, d)?));
            }
        }
        TargetGroup::Dn(_) => out.push(("r".into(), WittClass::from_form(&eval_r(t)?))),
        TargetGroup::G2 => {
            for (i, b) in eval_g2(t)?.into_iter().enumerate() {
                out.push((format!("g2[{i}]"), b));
            }
        }
        TargetGroup::Sn(_) => out.push(("trace".into(), WittClass::from_form(&crate::weyl::eval_sn_trace(t)?))),
    }
    Ok(out)
}

/// Evaluate over `Formal(3)`, substitute `t_i -> {2, 3, 5}` (shuffled), and
/// compare with the evaluation of the substituted torsor over Q.
pub fn specialization<R: Rng>(rng: &mut R, count: usize) -> Property {
    let mut p = Property::new("specialization-naturality");
    let f = FieldDescriptor::Formal(3);
    for i in 0..count {
        let target = match i % 4 {
            0 | 1 => TargetGroup::Bn(1 + i % 3),
            2 => TargetGroup::Dn(2 + i % 3),
            _ => TargetGroup::G2,
        };
        let m = rng.gen_range(1..=3);
        let mut subs = vec![2i64, 3, 5];
        subs.shuffle(rng);
        let t = match sample::torsor(rng, f, target, m) {
            Ok(t) => t,
            Err(e) => {
                p.check(Err(e), || json!({ "index": i }));
                continue;
            }
        };
        let mut mismatch: Option<String> = None;
        let outcome = (|| {
            let over_q = witt_invariants(&specialize_torsor(&t, &subs)?)?;
            for ((name, formal), (_, rational)) in witt_invariants(&t)?.iter().zip(&over_q) {
                if !witt_eq(&specialize_witt(formal, &subs)?, rational)? {
                    mismatch = Some(name.clone());
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        p.check(outcome, || json!({ "torsor": json::torsor_to_json(&t), "substitution": subs, "invariant": mismatch }));
    }
    p
}

// ---- lifting ----

/// The `B_n` sample set used by the round-trip checks: `count` torsors over
/// `Formal(3)` with ranks cycling through 1, 2, 3.
pub fn bn_samples<R: Rng>(rng: &mut R, n: usize, count: usize) -> Result<Vec<MultiquadraticTorsor>> {
    (0..count).map(|i| sample::torsor(rng, FieldDescriptor::Formal(3), TargetGroup::Bn(n), 1 + i % 3)).collect()
}

/// A random `W(Formal(g))` element with up to two signed one-dimensional terms.
fn small_coefficient<R: Rng>(rng: &mut R, g: u32) -> Result<WittClass> {
    let mut w = WittClass::zero(FieldDescriptor::Formal(g));
    for _ in 0..rng.gen_range(0..3) {
        let c = WittClass::from_class(&sample::formal_class(rng, g));
        w = if rng.gen_bool(0.5) { w.add(&c)? } else { w.sub(&c)? };
    }
    Ok(w)
}

/// Random `W`-combinations of the `B_n` generator tables (`n = 1, 2, 3` in
/// turn) are decomposed and reproduced at every sample.
pub fn lift_roundtrip<R: Rng>(rng: &mut R, targets: usize, samples: usize) -> Property {
    let mut p = Property::new("lift-roundtrip");
    let mut tables: Vec<Option<Vec<EvaluationTable>>> = vec![None, None, None];
    for i in 0..targets {
        let n = 1 + i % 3;
        let outcome = (|| {
            if tables[n - 1].is_none() {
                let s = bn_samples(rng, n, samples)?;
                tables[n - 1] = Some(bn_generator_tables(&s, n)?);
            }
            let gens = tables[n - 1].as_ref().expect("filled");
            let coeffs = gens.iter().map(|_| small_coefficient(rng, 3)).collect::<Result<Vec<_>>>()?;
            let target = EvaluationTable::combine(gens, &coeffs, 0)?;
            let dec = decompose(&target, gens, n)?;
            let mut ok = dec.residual_ok;
            for (a, b) in dec.reproduce(gens)?.iter().zip(target.values()) {
                ok &= witt_eq(a, b)?;
            }
            Ok(ok)
        })();
        p.check(outcome, || json!({ "index": i, "n": n }));
    }
    p
}
