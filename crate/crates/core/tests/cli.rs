use serde_json::{json, Value};
use std::path::PathBuf;
use wittcalc::cli::{run, Outcome};
use wittcalc::field::FieldDescriptor;
use wittcalc::json::{
    decomposition_from_json, decomposition_to_json, form_from_json, form_to_json, table_to_json, torsor_from_json,
    torsor_to_json, witt_from_json, witt_to_json,
};
use wittcalc::lifting::bn_generator_tables;
use wittcalc::verify::bn_samples;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("wittcalc-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn call(args: &[&str]) -> (Outcome, Value) {
    let out = run(std::iter::once("wittcalc").chain(args.iter().copied()));
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out, v)
}

fn call_with(tag: &str, payload: &Value, args: &[&str]) -> (Outcome, Value) {
    let s = Scratch::new(tag);
    let input = s.file("in.json", &payload.to_string());
    let mut argv = args.to_vec();
    argv.extend(["--input", &input]);
    call(&argv)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn lambda_of_a_ternary_form() {
    let (out, v) = call_with("lambda", &json!({ "form": [2, 3, 5], "d": 2 }), &["form", "lambda"]);
    assert_eq!(out.code, 0);
    assert_eq!(v["command"], "form lambda");
    let got = form_from_json(FieldDescriptor::Rationals, &v["result"]).unwrap();
    let want = form_from_json(FieldDescriptor::Rationals, &json!([6, 10, 15])).unwrap();
    assert_eq!(got, want);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn u_on_the_trivial_b2_torsor_vanishes() {
    let torsor = json!({ "torsor": { "target": { "type": "Bn", "n": 2 } } });
    let (out, v) =
        call_with("u", &torsor, &["--field", "formal:2", "weyl", "eval", "--invariant", "u", "--degree", "1"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let terms = v["result"]["symbols"].as_array().unwrap();
    assert_eq!(v["result"]["degree"], 1);
    assert!(terms.is_empty(), "{}", v["result"]);
}

#[test]
fn lemma34_suite_passes() {
    let (out, v) = call(&["verify", "--suite", "lemma34", "--seed", "7"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn malformed_input_is_an_input_error() {
    let s = Scratch::new("bad");
    let input = s.file("in.json", "{ \"form\": [2, 3,");
    let (out, v) = call(&["form", "lambda", "--degree", "1", "--input", &input]);
    assert_eq!(out.code, 2);
    assert!(v["error"]["kind"].is_string());
    assert!(v["error"]["message"].as_str().unwrap().contains("malformed"));

    let (out, v) = call(&["form", "frobnicate"]);
    assert_eq!(out.code, 2);
    assert_eq!(v["error"]["kind"], "UsageError");
}

#[test]
fn domain_errors_carry_the_error_name() {
    let (out, v) = call_with("domain", &json!({ "form": [2, 3], "d": 5 }), &["form", "lambda"]);
    assert_eq!(out.code, 2);
    assert_eq!(v["error"]["kind"], "DegreeOutOfRange");
    let (out, v) = call_with("gram", &json!({ "gram": [[1, 2], [2, 4]] }), &["form", "diagonalize"]);
    assert_eq!(out.code, 2);
    assert_eq!(v["error"]["kind"], "DegenerateMatrix");
}

#[test]
fn emitted_values_parse_back() {
    let f = FieldDescriptor::Rationals;
    let (_, v) = call_with("pfister", &json!({ "classes": [-1, 3] }), &["form", "pfister"]);
    let w = witt_from_json(f, &v["result"]).unwrap();
    assert_eq!(witt_to_json(&w), v["result"]);

    let (_, v) = call_with("diag", &json!({ "gram": [[2, 1], [1, 3]] }), &["form", "diagonalize"]);
    let q = form_from_json(f, &v["result"]).unwrap();
    assert_eq!(form_to_json(&q), v["result"]);

    let samples = bn_samples(&mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9), 2, 6).unwrap();
    for t in &samples {
        let j = torsor_to_json(t);
        assert_eq!(&torsor_from_json(None, &j).unwrap(), t);
    }
}

#[test]
fn decompose_through_files() {
    let samples = bn_samples(&mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11), 2, 8).unwrap();
    let gens = bn_generator_tables(&samples, 2).unwrap();
    let s = Scratch::new("lift");
    let target = s.file("target.json", &table_to_json(&gens[1]).to_string());
    let all: Vec<Value> = gens.iter().map(table_to_json).collect();
    let generators = s.file("gens.json", &Value::Array(all).to_string());
    let (out, v) =
        call(&["--field", "formal:3", "lift", "decompose", "--target", &target, "--generators", &generators]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let d = decomposition_from_json(samples[0].field(), &v["result"]["decomposition"]).unwrap();
    assert!(d.residual_ok);
    assert_eq!(decomposition_to_json(&d), v["result"]["decomposition"]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--suite", "all", "--seed", "3", "--json-indent", "0"];
    let (a, va) = call(&args);
    let (b, vb) = call(&args);
    assert_eq!(a.code, b.code);
    assert_eq!(without_timing(va).to_string(), without_timing(vb).to_string());

    let payload = json!({ "a": [1, 1], "b": [2, 2] });
    let (_, x) = call_with("eq1", &payload, &["form", "eq"]);
    let (_, y) = call_with("eq2", &payload, &["form", "eq"]);
    assert_eq!(without_timing(x.clone()), without_timing(y));
    assert_eq!(x["result"], true);
}
