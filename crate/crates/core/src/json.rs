//! JSON wire formats shared by the CLI and the FFI layer.
//!
//! Square classes: an integer over Q, `0`/`1` over F_p (square / fixed
//! nonresidue), `"+"`/`"-"` over R, `{neg, gens}` over formal fields with
//! 1-based generator indices. Integers that overflow `i64` travel as strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::cohomology::CohClass;
use crate::error::{Error, Result};
use crate::etale::{EtaleAlgebra, EtaleComponent, Poly, QuadraticPair};
use crate::field::{canonicalize, FieldDescriptor, SquareClass};
use crate::lifting::{Decomposition, EvaluationTable};
use crate::weyl::{MultiquadraticTorsor, Perm, TargetGroup, WreathElement};
use crate::witt::{DiagonalForm, GramMatrix, PfisterPresentation, WittClass};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| bad(format!("{n} is not an integer"))),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| bad(format!("{s:?} is not an integer"))),
        other => Err(bad(format!("expected an integer, got {other}"))),
    }
}

pub fn usize_from_json(v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(format!("expected a nonnegative integer, got {v}")))
}

pub fn rational_to_json(x: &BigRational) -> Value {
    if x.is_integer() {
        json!(x.numer().to_string())
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => {
                    let p = BigInt::from_str(p.trim()).map_err(|_| bad(format!("bad numerator in {s:?}")))?;
                    let q = BigInt::from_str(q.trim()).map_err(|_| bad(format!("bad denominator in {s:?}")))?;
                    if q == BigInt::from(0) {
                        return Err(bad(format!("zero denominator in {s:?}")));
                    }
                    Ok(BigRational::new(p, q))
                }
                None => Ok(BigRational::from_integer(int_from_json(v)?)),
            }
        }
        _ => Ok(BigRational::from_integer(int_from_json(v)?)),
    }
}

fn field_of(obj: &Value, default: Option<FieldDescriptor>) -> Result<FieldDescriptor> {
    match obj.get("field") {
        Some(Value::String(s)) => s.parse(),
        Some(other) => Err(bad(format!("field must be a string, got {other}"))),
        None => default.ok_or_else(|| bad("missing \"field\"")),
    }
}

fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

// ---- square classes, forms, Witt classes ----

pub fn class_to_json(c: &SquareClass) -> Value {
    match c {
        SquareClass::Rational { .. } => int_to_json(&c.rational_value().expect("rational class")),
        SquareClass::Finite { nonsquare, .. } => json!(*nonsquare as u8),
        SquareClass::Real { neg } => json!(if *neg { "-" } else { "+" }),
        SquareClass::Formal { mask, .. } => {
            let gens: Vec<u32> = (1..64).filter(|i| mask >> i & 1 == 1).collect();
            json!({ "neg": mask & 1 == 1, "gens": gens })
        }
    }
}

pub fn class_from_json(field: FieldDescriptor, v: &Value) -> Result<SquareClass> {
    match field {
        FieldDescriptor::Rationals => {
            let x = int_from_json(v)?;
            canonicalize(&field, &BigRational::from_integer(x))
        }
        FieldDescriptor::FiniteField(p) => match v.as_u64() {
            Some(0) => Ok(field.trivial()),
            Some(1) => Ok(SquareClass::Finite { p, nonsquare: true }),
            _ => Err(bad(format!("F_p class must be 0 or 1, got {v}"))),
        },
        FieldDescriptor::Reals => match v.as_str() {
            Some("+") => Ok(field.trivial()),
            Some("-") | Some("−") => Ok(field.minus_one()),
            _ => Err(bad(format!("real class must be \"+\" or \"-\", got {v}"))),
        },
        FieldDescriptor::Formal(_) => {
            let neg = match v.get("neg") {
                None => false,
                Some(b) => b.as_bool().ok_or_else(|| bad("neg must be a boolean"))?,
            };
            let gens = match v.get("gens") {
                None => vec![],
                Some(g) => array(g, "gens")?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .and_then(|i| u32::try_from(i).ok())
                            .ok_or_else(|| bad(format!("bad generator index {x}")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            if !v.is_object() {
                return Err(bad(format!("formal class must be an object, got {v}")));
            }
            field.formal_class(neg, &gens)
        }
    }
}

pub fn form_to_json(q: &DiagonalForm) -> Value {
    Value::Array(q.entries().iter().map(class_to_json).collect())
}

pub fn form_from_json(field: FieldDescriptor, v: &Value) -> Result<DiagonalForm> {
    let entries = array(v, "form")?.iter().map(|x| class_from_json(field, x)).collect::<Result<Vec<_>>>()?;
    DiagonalForm::new(field, entries)
}

pub fn witt_to_json(w: &WittClass) -> Value {
    Value::Array(w.terms().iter().map(|(c, k)| json!({ "class": class_to_json(c), "coeff": int_to_json(k) })).collect())
}

pub fn witt_from_json(field: FieldDescriptor, v: &Value) -> Result<WittClass> {
    let terms = array(v, "Witt class")?
        .iter()
        .map(|t| Ok((class_from_json(field, get(t, "class")?)?, int_from_json(get(t, "coeff")?)?)))
        .collect::<Result<Vec<_>>>()?;
    WittClass::from_terms(field, terms)
}

pub fn gram_to_json(g: &GramMatrix) -> Value {
    Value::Array(g.rows().iter().map(|r| Value::Array(r.iter().map(rational_to_json).collect())).collect())
}

pub fn gram_from_json(v: &Value) -> Result<GramMatrix> {
    let rows = array(v, "Gram matrix")?
        .iter()
        .map(|r| array(r, "Gram row")?.iter().map(rational_from_json).collect())
        .collect::<Result<Vec<_>>>()?;
    GramMatrix::new(rows)
}

pub fn pfister_to_json(p: &PfisterPresentation) -> Value {
    let terms: Vec<Value> = p
        .terms
        .iter()
        .map(|(k, gens)| json!({ "coeff": int_to_json(k), "gens": gens.iter().map(class_to_json).collect::<Vec<_>>() }))
        .collect();
    json!({ "degree": p.degree, "terms": terms })
}

pub fn pfister_from_json(field: FieldDescriptor, v: &Value) -> Result<PfisterPresentation> {
    let degree = usize_from_json(get(v, "degree")?)?;
    let terms = array(get(v, "terms")?, "terms")?
        .iter()
        .map(|t| {
            let k = int_from_json(get(t, "coeff")?)?;
            let gens = array(get(t, "gens")?, "gens")?
                .iter()
                .map(|x| class_from_json(field, x))
                .collect::<Result<Vec<_>>>()?;
            Ok((k, gens))
        })
        .collect::<Result<Vec<_>>>()?;
    PfisterPresentation::new(field, degree, terms)
}

// ---- cohomology ----

pub fn coh_to_json(c: &CohClass) -> Value {
    let symbols: Vec<Value> =
        c.symbols().iter().map(|s| Value::Array(s.factors().iter().map(class_to_json).collect())).collect();
    json!({ "degree": c.degree(), "symbols": symbols })
}

pub fn coh_from_json(field: FieldDescriptor, v: &Value) -> Result<CohClass> {
    let degree = usize_from_json(get(v, "degree")?)?;
    let symbols = array(get(v, "symbols")?, "symbols")?
        .iter()
        .map(|s| array(s, "symbol")?.iter().map(|x| class_from_json(field, x)).collect())
        .collect::<Result<Vec<_>>>()?;
    CohClass::from_symbols(field, degree, &symbols)
}

// ---- étale algebras ----

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rational_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly> {
    Ok(Poly::new(array(v, "polynomial")?.iter().map(rational_from_json).collect::<Result<_>>()?))
}

pub fn etale_to_json(e: &EtaleAlgebra) -> Value {
    Value::Array(
        e.components()
            .iter()
            .map(|c| match c {
                EtaleComponent::Poly(p) => json!({ "poly": poly_to_json(p) }),
                EtaleComponent::Multiquadratic(ds) => {
                    json!({ "multiquadratic": ds.iter().map(class_to_json).collect::<Vec<_>>() })
                }
            })
            .collect(),
    )
}

pub fn etale_from_json(field: FieldDescriptor, v: &Value) -> Result<EtaleAlgebra> {
    let comps = array(v, "étale algebra")?
        .iter()
        .map(|c| {
            if let Some(p) = c.get("poly") {
                Ok(EtaleComponent::Poly(poly_from_json(p)?))
            } else if let Some(m) = c.get("multiquadratic") {
                let ds = array(m, "multiquadratic")?
                    .iter()
                    .map(|x| class_from_json(field, x))
                    .collect::<Result<Vec<_>>>()?;
                Ok(EtaleComponent::Multiquadratic(ds))
            } else {
                Err(bad("component must have \"poly\" or \"multiquadratic\""))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EtaleAlgebra::new(field, comps)
}

pub fn pair_to_json(p: &QuadraticPair) -> Value {
    json!({
        "base": etale_to_json(p.base()),
        "deltas": p.deltas().iter().map(poly_to_json).collect::<Vec<_>>(),
    })
}

pub fn pair_from_json(field: FieldDescriptor, v: &Value) -> Result<QuadraticPair> {
    let base = etale_from_json(field, get(v, "base")?)?;
    let deltas = array(get(v, "deltas")?, "deltas")?.iter().map(poly_from_json).collect::<Result<Vec<_>>>()?;
    QuadraticPair::new(base, deltas)
}

// ---- torsors and tables ----

pub fn target_to_json(t: TargetGroup) -> Value {
    match t {
        TargetGroup::Sn(n) => json!({ "type": "Sn", "n": n }),
        TargetGroup::Bn(n) => json!({ "type": "Bn", "n": n }),
        TargetGroup::Dn(n) => json!({ "type": "Dn", "n": n }),
        TargetGroup::G2 => json!({ "type": "G2", "n": 2 }),
    }
}

pub fn target_from_json(v: &Value) -> Result<TargetGroup> {
    let ty = get(v, "type")?.as_str().ok_or_else(|| bad("target type must be a string"))?;
    let n = || usize_from_json(get(v, "n")?);
    match ty.to_ascii_lowercase().as_str() {
        "s" | "sn" => Ok(TargetGroup::Sn(n()?)),
        "b" | "bn" | "c" | "cn" => Ok(TargetGroup::Bn(n()?)),
        "d" | "dn" => Ok(TargetGroup::Dn(n()?)),
        "g2" => Ok(TargetGroup::G2),
        other => Err(bad(format!("unknown target type {other:?}"))),
    }
}

pub fn wreath_to_json(x: &WreathElement) -> Value {
    let perm: Vec<usize> = x.perm().images().iter().map(|i| i + 1).collect();
    let flips: Vec<usize> = x.flip_indices().iter().map(|i| i + 1).collect();
    json!({ "perm": perm, "flips": flips })
}

pub fn wreath_from_json(n: usize, v: &Value) -> Result<WreathElement> {
    let perm = match v.get("perm") {
        None => Perm::identity(n),
        Some(p) => {
            let images = array(p, "perm")?.iter().map(usize_from_json).collect::<Result<Vec<_>>>()?;
            Perm::from_one_based(&images)?
        }
    };
    let mut flips = 0u64;
    if let Some(f) = v.get("flips") {
        for i in array(f, "flips")? {
            let i = usize_from_json(i)?;
            if i == 0 || i > n || i > 64 {
                return Err(bad(format!("flip index {i} outside 1..={n}")));
            }
            flips |= 1 << (i - 1);
        }
    }
    WreathElement::new(perm, flips)
}

pub fn torsor_to_json(t: &MultiquadraticTorsor) -> Value {
    json!({
        "field": t.field().to_string(),
        "d": t.d().iter().map(class_to_json).collect::<Vec<_>>(),
        "target": target_to_json(t.target()),
        "images": t.images().iter().map(wreath_to_json).collect::<Vec<_>>(),
    })
}

/// `default` is used when the payload carries no `field`.
pub fn torsor_from_json(default: Option<FieldDescriptor>, v: &Value) -> Result<MultiquadraticTorsor> {
    let field = field_of(v, default)?;
    let target = target_from_json(get(v, "target")?)?;
    let d = match v.get("d") {
        None => vec![],
        Some(d) => array(d, "d")?.iter().map(|x| class_from_json(field, x)).collect::<Result<_>>()?,
    };
    let images = match v.get("images") {
        None => vec![],
        Some(im) => array(im, "images")?.iter().map(|x| wreath_from_json(target.degree(), x)).collect::<Result<_>>()?,
    };
    MultiquadraticTorsor::new(field, d, target, images)
}

pub fn table_to_json(t: &EvaluationTable) -> Value {
    json!({
        "samples": t.samples().iter().map(torsor_to_json).collect::<Vec<_>>(),
        "values": t.values().iter().map(witt_to_json).collect::<Vec<_>>(),
        "degree": t.degree(),
    })
}

pub fn table_from_json(default: Option<FieldDescriptor>, v: &Value) -> Result<EvaluationTable> {
    let samples = array(get(v, "samples")?, "samples")?
        .iter()
        .map(|s| torsor_from_json(default, s))
        .collect::<Result<Vec<_>>>()?;
    let field = samples.first().map(|s| s.field()).or(default).ok_or_else(|| bad("no samples"))?;
    let values =
        array(get(v, "values")?, "values")?.iter().map(|w| witt_from_json(field, w)).collect::<Result<Vec<_>>>()?;
    let degree = match v.get("degree") {
        None => 0,
        Some(d) => usize_from_json(d)?,
    };
    EvaluationTable::new(samples, values, degree)
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    json!({
        "coefficients": d.coefficients.iter().map(witt_to_json).collect::<Vec<_>>(),
        "constant": witt_to_json(&d.constant),
        "residual_ok": d.residual_ok,
    })
}

pub fn decomposition_from_json(field: FieldDescriptor, v: &Value) -> Result<Decomposition> {
    Ok(Decomposition {
        coefficients: array(get(v, "coefficients")?, "coefficients")?
            .iter()
            .map(|w| witt_from_json(field, w))
            .collect::<Result<_>>()?,
        constant: witt_from_json(field, get(v, "constant")?)?,
        residual_ok: get(v, "residual_ok")?.as_bool().ok_or_else(|| bad("residual_ok must be a boolean"))?,
    })
}

/// An error as `{kind, message}`.
pub fn error_to_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(e.kind()));
    m.insert("message".into(), json!(e.to_string()));
    Value::Object(m)
}
