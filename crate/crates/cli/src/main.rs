//! `qrs`: expand polynomial families, check identities and evaluate the
//! weight-function integrals from the command line.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qrs_core::families::{big_qhermite, expand, FamilyId};
use qrs_core::idverify::{self, registry};
use qrs_core::qcore::{parse_rational, MultiPoly};
use qrs_core::quadrature::{self, JhiKind};
use qrs_core::report::{IdentityReport, Residual};
use qrs_core::QrsError;

#[derive(Parser, Debug)]
#[command(name = "qrs", version, about = "q-series identities, checked exactly or numerically")]
struct Cli {
    /// Truncation order for exact cases, or the index bound for polynomial cases.
    #[arg(long, global = true, env = "QRS_DEFAULT_ORDER")]
    order: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time per case (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug, Default, Clone)]
struct ParamArgs {
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Extra parameters as name=value.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    extra: Vec<String>,
}

impl ParamArgs {
    fn to_map(&self) -> Result<BTreeMap<String, String>, QrsError> {
        let mut m = BTreeMap::new();
        for (k, v) in [("q", &self.q), ("p", &self.p), ("a", &self.a), ("t", &self.t), ("tol", &self.tol)] {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        }
        for e in &self.extra {
            let (k, v) = e.split_once('=').ok_or_else(|| QrsError::Parse(format!("`{e}` is not NAME=VALUE")))?;
            m.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(m)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List registered identities.
    List,
    /// Print a family polynomial as JSON.
    Expand {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u32,
        /// Base as num/den.
        #[arg(long, default_value = "1/2")]
        q: String,
        /// Value of `a` for the big q-Hermite family (kept symbolic if absent).
        #[arg(long)]
        a: Option<String>,
    },
    /// Check one identity.
    Verify {
        #[arg(long)]
        identity: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Check every registered identity.
    VerifyAll,
    /// Evaluate an integral by quadrature.
    Integrate {
        #[arg(long, value_enum)]
        kind: IntegralKind,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 0.0)]
        d: f64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Re-read a JSON report, print it and exit with its status.
    Report {
        #[arg(long)]
        input: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IntegralKind {
    /// Askey-Wilson integral with parameters a, b, c, d.
    AskeyWilson,
    /// Orthogonality integral of H_n and H_m with parameter a.
    Ortho,
    J,
    H,
    I,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<QrsError> for Failure {
    fn from(e: QrsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::List => list(cli),
        Command::Expand { family, n, q, a } => expand_cmd(cli, family, *n, q, a.as_deref()),
        Command::Verify { identity, params } => {
            let case = idverify::find(identity).ok_or_else(|| Failure::Usage(format!("unknown identity `{identity}`")))?;
            let order = cli.order.unwrap_or(case.default_order);
            let start = Instant::now();
            let mut r = idverify::verify(identity, order, &params.to_map()?, cli.seed)?;
            if cli.timing {
                r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            finish_reports(cli, vec![r])
        }
        Command::VerifyAll => {
            let start = Instant::now();
            let mut reports = idverify::verify_all(cli.order, cli.seed);
            if cli.timing {
                // Per-case times are not tracked in the parallel run; the
                // total goes on every report.
                let ms = start.elapsed().as_millis() as u64;
                for r in &mut reports {
                    r.elapsed_ms = Some(ms);
                }
            }
            finish_reports(cli, reports)
        }
        Command::Integrate { kind, p, q, a, b, c, d, t, n, m, tol } => {
            let value = match kind {
                IntegralKind::AskeyWilson => {
                    let (lhs, rhs) = quadrature::askey_wilson_sides(*a, *b, *c, *d, *q, *tol)?;
                    serde_json::json!({ "kind": "askey-wilson", "integral": lhs, "product": rhs })
                }
                IntegralKind::Ortho => {
                    let v = quadrature::ortho_value(*n, *m, *a, *q, *tol)?;
                    serde_json::json!({ "kind": "ortho", "n": n, "m": m, "integral": v })
                }
                IntegralKind::J | IntegralKind::H | IntegralKind::I => {
                    let k = match kind {
                        IntegralKind::J => JhiKind::J,
                        IntegralKind::H => JhiKind::H,
                        _ => JhiKind::I,
                    };
                    let pp = p.unwrap_or(*q);
                    let v = quadrature::jhi_eval(k, pp, *q, *a, *t, *tol)?;
                    serde_json::json!({ "kind": format!("{k:?}"), "p": pp, "q": q, "a": a, "t": t, "integral": v })
                }
            };
            match cli.format {
                Format::Json => emit(cli, &json(&value)),
                Format::Text => emit(cli, &format!("{}\n", value["integral"])),
            }
        }
        Command::Report { input } => {
            let text = fs::read_to_string(input).map_err(|e| Failure::Usage(format!("cannot read {input}: {e}")))?;
            let reports: Vec<IdentityReport> =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{input} is not a report: {e}")))?;
            finish_reports(cli, reports)
        }
    }
}

fn list(cli: &Cli) -> Result<(), Failure> {
    match cli.format {
        Format::Json => {
            let rows: Vec<_> = registry()
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "id": c.id,
                        "paper_ref": c.paper_ref,
                        "mode": c.mode,
                        "default_order": c.default_order,
                        "symbolic": c.symbolic,
                        "bound": c.bound,
                        "domain": c.domain,
                    })
                })
                .collect();
            emit(cli, &json(&rows))
        }
        Format::Text => {
            let mut s = String::new();
            for c in registry() {
                s.push_str(&format!("{:<20} {:<16} {}\n", c.id, c.mode.name(), c.paper_ref));
            }
            emit(cli, &s)
        }
    }
}

fn expand_cmd(cli: &Cli, family: &str, n: u32, q: &str, a: Option<&str>) -> Result<(), Failure> {
    let fam = FamilyId::from_name(family).ok_or_else(|| {
        let names: Vec<_> = FamilyId::ALL.iter().map(|f| f.name()).collect();
        Failure::Usage(format!("unknown family `{family}`; expected one of {}", names.join(", ")))
    })?;
    let q = exact_flag("q", q)?;
    let poly = match (fam, a) {
        (FamilyId::BigQHermite, Some(a)) => big_qhermite(n, &MultiPoly::constant(exact_flag("a", a)?), &q),
        (_, Some(_)) => return Err(Failure::Usage("--a only applies to the big-qhermite family".into())),
        (f, None) => expand(f, n, &q),
    };
    match cli.format {
        Format::Json => emit(cli, &json(&poly.to_json())),
        Format::Text => emit(cli, &format!("{poly}\n")),
    }
}

fn exact_flag(name: &str, s: &str) -> Result<qrs_core::qcore::ExactScalar, Failure> {
    parse_rational(s).map_err(|_| Failure::Usage(format!("--{name} needs an exact rational num/den, got `{s}`")))
}

fn residual_text(r: &Residual) -> String {
    match r {
        Residual::ExactZero => "exact-zero".into(),
        Residual::Value(v) => format!("{v:.3e}"),
        Residual::Unknown => "-".into(),
    }
}

fn finish_reports(cli: &Cli, reports: Vec<IdentityReport>) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Json => json(&reports),
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let status = serde_json::to_value(r.status).expect("status serializes");
                s.push_str(&format!(
                    "{:<12} {:<20} {:<16} order {:<3} residual {}\n",
                    status.as_str().unwrap_or("?"),
                    r.id,
                    r.mode.name(),
                    r.order,
                    residual_text(&r.residual)
                ));
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            s.push_str(&format!("{} checked, {} failed\n", reports.len(), failed));
            s
        }
    };
    emit(cli, &text)?;
    let mut ok = true;
    for r in reports.iter().filter(|r| !r.passed()) {
        ok = false;
        eprintln!("FAIL {}: {}", r.id, r.witness.as_deref().unwrap_or("no witness"));
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
