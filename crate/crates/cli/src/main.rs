use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rado_core::algebra::json::scalar_from_json;
use rado_core::algebra::{Matrix, RingDescriptor};
use rado_core::colouring::{refute, Colouring, RefutationCertificate};
use rado_core::nonhom::{
    annihilator_base_change, compute_h, h_functoriality_check, pr_nonhom, pr_nonhom_algebra, FiniteAlgebra, ModuleData,
    DEFAULT_H_BUDGET,
};
use rado_core::regularity::{decide, Status, Verdict};
use rado_core::search::{
    finite_witness, search_report, validate_certificate, SearchWindow, WitnessOutcome, DEFAULT_BUDGET, MAX_WITNESS_SIZE,
};
use rado_core::{Error, Result};

mod schema;

/// Partition regularity of linear systems over rings and modules.
///
/// Every invocation prints one JSON document. Exit codes: 0 success, 1 input
/// error (or an unsound certificate under `verify`), 2 unsupported input or
/// exhausted budget. `RADO_BUDGET` overrides the default search budgets.
#[derive(Parser)]
#[command(name = "rado", version)]
struct Cli {
    /// Write the JSON document to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    /// Ring descriptor: Z, Q, gf:p, mod:n, X[x], X[x,y], X(x), prod:n:m1,m2,...
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Rows as inline JSON (`[[1,1,-1]]`), a `{"ring", "rows"}` object, or a
    /// path to a file holding either.
    #[arg(long)]
    matrix: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide partition regularity of `A x = 0` with a checkable verdict.
    Cc(MatrixArgs),
    /// Emit a `c_p` refutation certificate for an integer or rational matrix.
    Refute(MatrixArgs),
    /// Search a window for a monochromatic solution under a colouring.
    Search {
        #[command(flatten)]
        matrix: MatrixArgs,
        /// `cp:p`, `mfpx:p`, `mzxy:p:xyp|pxy`, `constant:c`, or colouring JSON.
        #[arg(long)]
        colouring: String,
        /// `positive:n`, `symmetric:n`, `residues:n`, `fppolys:p:d`, or window JSON.
        #[arg(long)]
        window: String,
    },
    /// Find the least window `{1..N}` on which every r-colouring has a
    /// monochromatic solution.
    Witness {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, default_value_t = 2)]
        colours: u32,
        /// Largest window in the schedule.
        #[arg(long, default_value_t = MAX_WITNESS_SIZE)]
        max: u64,
        /// Use windows `{0, ±1, ..., ±n}` instead of `{1, ..., N}`.
        #[arg(long)]
        symmetric: bool,
    },
    /// Decide a nonhomogeneous system `A m = b`.
    Nonhom {
        /// Ring descriptor (ignored with --algebra/--fixture).
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Module descriptor when it differs from the ring (`mod:n` over Z).
        #[arg(long)]
        module: Option<String>,
        /// Matrix rows; over an algebra, a k x l array of coordinate vectors.
        #[arg(long)]
        matrix: String,
        /// Right-hand side as a JSON array.
        #[arg(long)]
        b: String,
        /// Finite algebra JSON (inline or path).
        #[arg(long)]
        algebra: Option<String>,
        /// Built-in algebra fixture.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Compute `H_R(I, M) = Z / B` for a finite algebra.
    Hmodule {
        /// Built-in fixture: nonprincipal-h (alias paper-example) or
        /// nonprincipal-h-lifted.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Algebra JSON (inline or path).
        #[arg(long)]
        algebra: Option<String>,
        /// Also compare with the quotient by the annihilator of M.
        #[arg(long)]
        base_change: bool,
        /// Check functoriality along a map `f: M -> N` given as a matrix;
        /// N defaults to M.
        #[arg(long)]
        map: Option<String>,
        /// Target module `{"dim", "action", "basis"?}` for --map.
        #[arg(long)]
        target: Option<String>,
    },
    /// Re-check a verdict or refutation certificate.
    Verify {
        /// Document emitted by `cc` or `refute` (inline or path).
        #[arg(long)]
        document: String,
        /// Also search this window under the certificate's colouring.
        #[arg(long)]
        window: Option<String>,
    },
}

fn budget() -> Result<u64> {
    match std::env::var("RADO_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid("$RADO_BUDGET", format!("expected a positive integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn h_budget() -> Result<u64> {
    Ok(match std::env::var("RADO_BUDGET") {
        Ok(_) => budget()?,
        Err(_) => DEFAULT_H_BUDGET,
    })
}

/// Inline JSON, or the contents of the named file.
fn load(arg: &str, pointer: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['[', '{', '"']) || trimmed.parse::<f64>().is_ok() {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::invalid(pointer, format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::invalid(pointer, format!("malformed JSON: {e}")))
}

fn parse_ring(s: &str) -> Result<RingDescriptor> {
    s.parse().map_err(|e| match e {
        Error::InvalidInput { message, .. } => Error::invalid("/ring", message),
        other => other,
    })
}

fn load_matrix(args: &MatrixArgs) -> Result<Matrix> {
    let v = load(&args.matrix, "/matrix")?;
    schema::validate("matrix_input", &v, "/matrix")?;
    match v {
        Value::Object(_) => Matrix::from_json(&v, "/matrix"),
        _ => Matrix::parse_rows(parse_ring(&args.ring)?, &v, "/matrix"),
    }
}

fn parse_window(s: &str) -> Result<SearchWindow> {
    if s.trim_start().starts_with('{') {
        let v = load(s, "/window")?;
        schema::validate("window", &v, "/window")?;
        return serde_json::from_value(v).map_err(|e| Error::invalid("/window", e.to_string()));
    }
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<u64> {
        parts
            .get(i)
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::invalid("/window", format!("cannot parse window {s:?}")))
    };
    match parts[0] {
        "positive" => Ok(SearchWindow::Positive { n: num(1)? }),
        "symmetric" => Ok(SearchWindow::Symmetric { n: num(1)? }),
        "residues" => Ok(SearchWindow::Residues { n: num(1)? }),
        "fppolys" => Ok(SearchWindow::FpPolys {
            p: num(1)?,
            d: num(2)? as u32,
        }),
        _ => Err(Error::invalid("/window", format!("unknown window {s:?}"))),
    }
}

fn parse_colouring(s: &str) -> Result<Colouring> {
    if s.trim_start().starts_with('{') {
        let v = load(s, "/colouring")?;
        schema::validate("colouring", &v, "/colouring")?;
        return Colouring::from_json(&v, "/colouring");
    }
    let shorthand = match s.split(':').next() {
        Some("cp") | Some("mfpx") | Some("constant") => {
            let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
            let key = if kind == "constant" { "colour" } else { "p" };
            let n: u64 = rest
                .parse()
                .map_err(|_| Error::invalid("/colouring", format!("cannot parse colouring {s:?}")))?;
            let kind = match kind {
                "cp" => "cp",
                "mfpx" => "m_fpx",
                _ => "constant",
            };
            json!({"kind": kind, key: n})
        }
        Some("mzxy") => {
            let parts: Vec<&str> = s.split(':').collect();
            let p: u64 = parts
                .get(1)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::invalid("/colouring", format!("cannot parse colouring {s:?}")))?;
            json!({"kind": "m_zxy", "p": p, "order": parts.get(2).copied().unwrap_or("xyp")})
        }
        _ => return Err(Error::invalid("/colouring", format!("unknown colouring {s:?}"))),
    };
    Colouring::from_json(&shorthand, "/colouring")
}

fn load_algebra(algebra: &Option<String>, fixture: &Option<String>, p: u64) -> Result<FiniteAlgebra> {
    match (algebra, fixture) {
        (Some(a), None) => {
            let v = load(a, "/algebra")?;
            schema::validate("algebra", &v, "/algebra")?;
            FiniteAlgebra::from_json(&v)
        }
        (None, Some(f)) => FiniteAlgebra::fixture(f, p),
        _ => Err(Error::invalid("/algebra", "give exactly one of --algebra and --fixture")),
    }
}

fn u64_matrix(v: &Value, pointer: &str) -> Result<Vec<Vec<u64>>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::invalid(pointer, format!("expected rows of nonnegative integers: {e}")))
}

/// A finished command: its document and whether it reports an unsupported
/// input or an exhausted budget.
struct Outcome {
    doc: Value,
    code: u8,
}

fn ok(doc: Value) -> Outcome {
    Outcome { doc, code: 0 }
}

fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Cc(args) => {
            let a = load_matrix(args)?;
            let v = decide(&a)?;
            let code = if v.status == Status::UnknownUnsupported { 2 } else { 0 };
            Ok(Outcome {
                doc: v.to_json(&a),
                code,
            })
        }
        Command::Refute(args) => {
            let a = load_matrix(args)?;
            match refute(&a)? {
                Some(cert) => Ok(ok(serde_json::to_value(&cert).expect("serialisable"))),
                None => Ok(ok(decide(&a)?.to_json(&a))),
            }
        }
        Command::Search {
            matrix,
            colouring,
            window,
        } => {
            let a = load_matrix(matrix)?;
            let report = search_report(&a, &parse_colouring(colouring)?, &parse_window(window)?, budget()?)?;
            Ok(ok(serde_json::to_value(&report).expect("serialisable")))
        }
        Command::Witness {
            matrix,
            colours,
            max,
            symmetric,
        } => {
            let a = load_matrix(matrix)?;
            let schedule: Vec<SearchWindow> = if *symmetric {
                (0..=(max.saturating_sub(1) / 2)).map(|n| SearchWindow::Symmetric { n }).collect()
            } else {
                (1..=*max).map(|n| SearchWindow::Positive { n }).collect()
            };
            let out = finite_witness(&a, *colours, &schedule, budget()?)?;
            let code = if matches!(out, WitnessOutcome::BudgetExhausted { .. }) { 2 } else { 0 };
            Ok(Outcome {
                doc: serde_json::to_value(&out).expect("serialisable"),
                code,
            })
        }
        Command::Nonhom {
            ring,
            module,
            matrix,
            b,
            algebra,
            fixture,
            p,
        } => {
            let bv = load(b, "/b")?;
            if algebra.is_some() || fixture.is_some() {
                let alg = load_algebra(algebra, fixture, *p)?;
                let a = load(matrix, "/matrix")?;
                schema::validate("algebra_matrix", &a, "/matrix")?;
                schema::validate("fp_matrix", &bv, "/b")?;
                let a: Vec<Vec<Vec<u64>>> = serde_json::from_value(a)
                    .map_err(|e| Error::invalid("/matrix", format!("expected a k x l array of vectors: {e}")))?;
                let b = u64_matrix(&bv, "/b")?;
                let v = pr_nonhom_algebra(&alg, &a, &b, h_budget()?)?;
                return Ok(ok(serde_json::to_value(&v).expect("serialisable")));
            }
            let a = load_matrix(&MatrixArgs {
                ring: ring.clone(),
                matrix: matrix.clone(),
            })?;
            let m = match module {
                Some(m) => parse_ring(m)?,
                None => a.ring().clone(),
            };
            schema::validate("rhs", &bv, "/b")?;
            let entries = bv.as_array().ok_or_else(|| Error::invalid("/b", "expected an array"))?;
            let b = entries
                .iter()
                .enumerate()
                .map(|(i, x)| scalar_from_json(&m, x, &format!("/b/{i}")))
                .collect::<Result<Vec<_>>>()?;
            let v = pr_nonhom(&a, &b, &m)?;
            Ok(ok(serde_json::to_value(&v).expect("serialisable")))
        }
        Command::Hmodule {
            fixture,
            p,
            algebra,
            base_change,
            map,
            target,
        } => {
            let alg = load_algebra(algebra, fixture, *p)?;
            let budget = h_budget()?;
            let mut doc = serde_json::to_value(compute_h(&alg, budget)?).expect("serialisable");
            if *base_change {
                doc["base_change"] = serde_json::to_value(annihilator_base_change(&alg, budget)?).expect("serialisable");
            }
            if let Some(f) = map {
                let f = load(f, "/map")?;
                schema::validate("fp_matrix", &f, "/map")?;
                let f = u64_matrix(&f, "/map")?;
                let target = match target {
                    Some(t) => {
                        let v = load(t, "/target")?;
                        schema::validate("module", &v, "/target")?;
                        let dim = v.get("dim").and_then(Value::as_u64).unwrap_or(0) as usize;
                        let basis = match v.get("basis") {
                            Some(b) => serde_json::from_value(b.clone())
                                .map_err(|e| Error::invalid("/target/basis", e.to_string()))?,
                            None => (0..dim).map(|i| format!("n{i}")).collect(),
                        };
                        let action = serde_json::from_value(v.get("action").cloned().unwrap_or(Value::Null))
                            .map_err(|e| Error::invalid("/target/action", e.to_string()))?;
                        Some(ModuleData { basis, action })
                    }
                    None => alg.module().cloned(),
                };
                doc["functoriality"] =
                    serde_json::to_value(h_functoriality_check(&alg, target, &f, budget)?).expect("serialisable");
            }
            Ok(ok(doc))
        }
        Command::Verify { document, window } => {
            let v = load(document, "/document")?;
            schema::validate("verify_input", &v, "/document")?;
            if v.get("evidence").is_some() {
                let (a, verdict) = Verdict::from_json(&v)?;
                let result = verdict.check(&a);
                return Ok(Outcome {
                    code: u8::from(result.is_err()),
                    doc: json!({
                        "kind": "verdict",
                        "status": verdict.status.as_str(),
                        "sound": result.is_ok(),
                        "failures": result.err().into_iter().collect::<Vec<_>>(),
                    }),
                });
            }
            let cert: RefutationCertificate =
                serde_json::from_value(v).map_err(|e| Error::invalid("/document", format!("not a certificate: {e}")))?;
            let (doc, sound) = match window {
                Some(w) => {
                    let report = validate_certificate(&cert, &parse_window(w)?, budget()?)?;
                    let sound = report.consistent;
                    let mut doc = serde_json::to_value(&report).expect("serialisable");
                    doc["kind"] = json!("certificate");
                    doc["sound"] = json!(sound);
                    (doc, sound)
                }
                None => {
                    let report = cert.replay();
                    let sound = report.sound();
                    let mut doc = serde_json::to_value(&report).expect("serialisable");
                    doc["kind"] = json!("certificate");
                    doc["sound"] = json!(sound);
                    (doc, sound)
                }
            };
            Ok(Outcome {
                doc,
                code: u8::from(!sound),
            })
        }
    }
}

fn error_doc(e: &Error) -> Value {
    let debug = format!("{e:?}");
    let kind = debug.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    let mut doc = json!({"error": {"kind": kind, "message": e.to_string()}});
    if let Error::InvalidInput { pointer, .. } = e {
        doc["error"]["pointer"] = json!(pointer);
    }
    doc
}

fn emit(path: &Option<PathBuf>, doc: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("serialisable") + "\n";
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            eprint!("{e}");
            let doc = json!({"error": {"kind": "Usage", "message": e.to_string()}});
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
            return ExitCode::from(1);
        }
    };
    let (doc, code) = match run(&cli.command) {
        Ok(Outcome { doc, code }) => (doc, code),
        Err(e) => {
            eprintln!("rado: {e}");
            (error_doc(&e), if e.is_unsupported() { 2 } else { 1 })
        }
    };
    if let Err(e) = emit(&cli.output, &doc) {
        eprintln!("rado: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
