//! The `wittcalc` command line: JSON in, JSON report out.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on any
//! input or domain error (reported as `{"error": {kind, message}}`).

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cohomology::{cup, e_map, is_zero, sw, sw_mod};
use crate::error::{Error, Result};
use crate::etale::{quadratic_layer_trace_form, trace_form};
use crate::field::FieldDescriptor;
use crate::json::*;
use crate::lifting::decompose;
use crate::verify::{run_suite, Suite};
use crate::weyl::{eval_a_k, eval_a_l, eval_g2, eval_r, eval_u, eval_v, eval_v_prime, MultiquadraticTorsor};
use crate::witt::{diagonalize, filtration_degree, lambda_power_form, pfister, witt_eq, WittClass};

#[derive(Debug, Parser)]
#[command(name = "wittcalc", version, about = "Exact Witt-ring and Weyl-invariant calculator")]
pub struct Cli {
    /// Base field: q, fp:<p>, r or formal:<g>.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// JSON payload file; `-` or absent reads standard input.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Peeling depth for `lift decompose` (default depends on the Weyl type).
    #[arg(long, global = true)]
    pub n0: Option<usize>,
    /// Spaces per indentation level; 0 prints compact JSON.
    #[arg(long, global = true, default_value_t = 2)]
    pub json_indent: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadratic forms and Witt classes.
    Form {
        #[command(subcommand)]
        op: FormOp,
    },
    /// Mod-2 cohomology symbols.
    Coh {
        #[command(subcommand)]
        op: CohOp,
    },
    /// Trace forms of étale algebras.
    Etale {
        #[command(subcommand)]
        op: EtaleOp,
    },
    /// Weyl-group invariants on multiquadratic torsors.
    Weyl {
        #[command(subcommand)]
        op: WeylOp,
    },
    /// Decomposition of evaluated invariants.
    Lift {
        #[command(subcommand)]
        op: LiftOp,
    },
    /// Run seeded property suites.
    Verify {
        /// lemma34, lambda-oracle, hilbert, trace-oracle, weyl-consistency,
        /// lift-roundtrip or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FormOp {
    /// `{"form", "d"}` → the form `lambda^d`.
    Lambda {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// `{"classes"}` → the Pfister form as a Witt class.
    Pfister,
    /// `{"gram"}` (over Q) → a congruent diagonal form.
    Diagonalize,
    /// `{"a", "b"}` (forms or Witt classes) → equality in W.
    Eq,
    /// `{"class", "cap"}` → largest `n <= cap` with the class in `I^n`.
    Filtration {
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CohOp {
    /// `{"form", "d"}` → `sw_d`.
    Sw {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// `{"form", "d"}` → `sw~_d`.
    SwMod {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// `{"presentation"}` → its `e`-image.
    EMap,
    /// `{"class"}` → whether the class vanishes.
    IsZero,
    /// `{"a", "b"}` → cup product.
    Cup,
}

#[derive(Debug, Subcommand)]
pub enum EtaleOp {
    /// `{"algebra"}` → trace form.
    TraceForm,
    /// `{"pair"}` → trace form of the quadratic layer.
    PairTraceForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Invariant {
    #[value(name = "aK")]
    AK,
    #[value(name = "aL")]
    AL,
    #[value(name = "u")]
    U,
    #[value(name = "v")]
    V,
    #[value(name = "vprime")]
    VPrime,
    #[value(name = "r")]
    R,
    #[value(name = "g2")]
    G2,
}

#[derive(Debug, Subcommand)]
pub enum WeylOp {
    /// `{"torsor"}` (or a bare torsor) → the invariant's value.
    Eval {
        #[arg(long, value_enum)]
        invariant: Invariant,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LiftOp {
    /// Express a target table through generator tables.
    Decompose {
        /// Evaluation table JSON file.
        #[arg(long)]
        target: PathBuf,
        /// JSON file with an array of evaluation tables.
        #[arg(long)]
        generators: PathBuf,
    },
}

/// Exit status and the text written to standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    v.serialize(&mut ser).expect("JSON values serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn error_report(e: &Error) -> Value {
    json!({ "error": error_to_json(e) })
}

/// Parse `argv` (program name first) and run the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_input(argv, None)
}

/// As [`run`], but `stdin` stands in for standard input when no `--input` file is given.
pub fn run_with_input<I, T>(argv: I, stdin: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            let v = json!({ "error": { "kind": "UsageError", "message": e.to_string().trim() } });
            return Outcome { code: 2, stdout: render(&v, 2) };
        }
    };
    let indent = cli.json_indent;
    let start = Instant::now();
    match dispatch(&cli, stdin) {
        Ok((name, result, code)) => {
            let report = json!({
                "command": name,
                "result": result,
                "timing_ms": start.elapsed().as_secs_f64() * 1e3,
            });
            Outcome { code, stdout: render(&report, indent) }
        }
        Err(e) => Outcome { code: 2, stdout: render(&error_report(&e), indent) },
    }
}

fn read_text(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

fn payload(cli: &Cli, stdin: Option<&str>) -> Result<Value> {
    match (cli.input.as_deref(), stdin) {
        (None, Some(text)) => parse_json(text),
        (path, _) => parse_json(&read_text(path)?),
    }
}

fn field(key: &str, v: &Value) -> Result<Value> {
    v.get(key).cloned().ok_or_else(|| Error::InvalidInput(format!("payload needs {key:?}")))
}

/// `--degree` if given, otherwise the payload's `d`.
fn degree(flag: Option<usize>, v: &Value) -> Result<usize> {
    match flag {
        Some(d) => Ok(d),
        None => usize_from_json(&field("d", v)?),
    }
}

/// A Witt class given either as `[{class, coeff}]` or as a form.
fn witt_or_form(f: FieldDescriptor, v: &Value) -> Result<WittClass> {
    let is_witt = v.as_array().is_some_and(|a| a.iter().all(|x| x.get("coeff").is_some()) && !a.is_empty());
    if is_witt {
        witt_from_json(f, v)
    } else {
        Ok(WittClass::from_form(&form_from_json(f, v)?))
    }
}

fn torsor_payload(f: FieldDescriptor, v: &Value) -> Result<MultiquadraticTorsor> {
    torsor_from_json(Some(f), v.get("torsor").unwrap_or(v))
}

fn dispatch(cli: &Cli, stdin: Option<&str>) -> Result<(String, Value, i32)> {
    let f: FieldDescriptor = cli.field.parse()?;
    let ok = |name: &str, v: Value| Ok((name.to_string(), v, 0));
    match &cli.command {
        Command::Form { op } => {
            let p = payload(cli, stdin)?;
            match op {
                FormOp::Lambda { degree: d } => {
                    let q = form_from_json(f, &field("form", &p)?)?;
                    ok("form lambda", form_to_json(&lambda_power_form(&q, degree(*d, &p)?)?))
                }
                FormOp::Pfister => {
                    let classes = form_from_json(f, &field("classes", &p)?)?;
                    ok("form pfister", witt_to_json(&pfister(f, classes.entries())?))
                }
                FormOp::Diagonalize => {
                    let g = gram_from_json(&field("gram", &p)?)?;
                    ok("form diagonalize", form_to_json(&diagonalize(&g)?))
                }
                FormOp::Eq => {
                    let a = witt_or_form(f, &field("a", &p)?)?;
                    let b = witt_or_form(f, &field("b", &p)?)?;
                    ok("form eq", json!(witt_eq(&a, &b)?))
                }
                FormOp::Filtration { cap } => {
                    let w = witt_or_form(f, &field("class", &p)?)?;
                    let cap = match (cap, p.get("cap")) {
                        (Some(c), _) => *c,
                        (None, Some(c)) => usize_from_json(c)?,
                        (None, None) => 64,
                    };
                    ok("form filtration", json!(filtration_degree(&w, cap)?))
                }
            }
        }
        Command::Coh { op } => {
            let p = payload(cli, stdin)?;
            match op {
                CohOp::Sw { degree: d } => {
                    let q = form_from_json(f, &field("form", &p)?)?;
                    ok("coh sw", coh_to_json(&sw(&q, degree(*d, &p)?)?))
                }
                CohOp::SwMod { degree: d } => {
                    let q = form_from_json(f, &field("form", &p)?)?;
                    ok("coh sw-mod", coh_to_json(&sw_mod(&q, degree(*d, &p)?)?))
                }
                CohOp::EMap => {
                    let pres = pfister_from_json(f, &field("presentation", &p)?)?;
                    ok("coh e-map", coh_to_json(&e_map(&pres)?))
                }
                CohOp::IsZero => {
                    let c = coh_from_json(f, &field("class", &p)?)?;
                    ok("coh is-zero", json!(is_zero(&c)?))
                }
                CohOp::Cup => {
                    let a = coh_from_json(f, &field("a", &p)?)?;
                    let b = coh_from_json(f, &field("b", &p)?)?;
                    ok("coh cup", coh_to_json(&cup(&a, &b)?))
                }
            }
        }
        Command::Etale { op } => {
            let p = payload(cli, stdin)?;
            match op {
                EtaleOp::TraceForm => {
                    let e = etale_from_json(f, p.get("algebra").unwrap_or(&p))?;
                    ok("etale trace-form", form_to_json(&trace_form(&e)?))
                }
                EtaleOp::PairTraceForm => {
                    let pair = pair_from_json(f, p.get("pair").unwrap_or(&p))?;
                    ok("etale pair-trace-form", form_to_json(&quadratic_layer_trace_form(&pair)?))
                }
            }
        }
        Command::Weyl { op: WeylOp::Eval { invariant, degree: d } } => {
            let p = payload(cli, stdin)?;
            let t = torsor_payload(f, &p)?;
            let need = || d.ok_or_else(|| Error::InvalidInput("this invariant needs --degree".into()));
            let result = match invariant {
                Invariant::AK => form_to_json(&eval_a_k(&t)?),
                Invariant::AL => form_to_json(&eval_a_l(&t)?),
                Invariant::U => coh_to_json(&eval_u(&t, need()?)?),
                Invariant::V => coh_to_json(&eval_v(&t, need()?)?),
                Invariant::VPrime => coh_to_json(&eval_v_prime(&t, need()?)?),
                Invariant::R => form_to_json(&eval_r(&t)?),
                Invariant::G2 => Value::Array(eval_g2(&t)?.iter().map(witt_to_json).collect()),
            };
            ok("weyl eval", result)
        }
        Command::Lift { op: LiftOp::Decompose { target, generators } } => {
            let target = table_from_json(Some(f), &parse_json(&read_text(Some(target))?)?)?;
            let gens_json = parse_json(&read_text(Some(generators))?)?;
            let gens = gens_json
                .as_array()
                .ok_or_else(|| Error::InvalidInput("generators must be an array of tables".into()))?
                .iter()
                .map(|g| table_from_json(Some(f), g))
                .collect::<Result<Vec<_>>>()?;
            let n0 = match cli.n0 {
                Some(n) => n,
                None => target.samples()[0].target().default_n0(),
            };
            let d = decompose(&target, &gens, n0)?;
            ok("lift decompose", json!({ "n0": n0, "decomposition": decomposition_to_json(&d) }))
        }
        Command::Verify { suite } => {
            let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
            let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, cli.seed)).collect();
            let passed = reports.iter().all(|r| r.passed());
            let result = json!({
                "passed": passed,
                "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            Ok((format!("verify {suite}"), result, if passed { 0 } else { 1 }))
        }
    }
}
