//! `heunent`: evaluate the special functions, verify the identity registry,
//! tabulate operator entropies.
//!
//! Exit codes: 0 when everything requested passed, 1 when a verification
//! failed, 2 on usage errors (message on standard error).

mod args;
mod eval;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use heunent::bspline::SigmaSpec;
use heunent::entropy::{entropy_profile, profile_synchronicity, OperatorSpec};
use heunent::exactalg::{format_rational, int, Rational};
use heunent::identities::{
    registry, verify, verify_all, CheckMode, IdentityId, ModeKind, ParamRanges, Params,
    VerificationReport,
};
use heunent::specfun::DEFAULT_TOL;

use crate::eval::Function;
use crate::output::{Cell, Table};

#[derive(Parser)]
#[command(
    name = "heunent",
    version,
    about = "Heun-function identities and operator entropies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at x=... or on a grid.
    Eval(EvalArgs),
    /// Check identities; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Squared-kernel integral, Rényi and Tsallis entropies and variance on a grid.
    Entropy(EntropyArgs),
    /// Identity registry: equation label, statement, modes, default ranges.
    Registry(RegistryArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// hl, hc, 2f1, legendre, F, G, U, J, K, bspline, c_n or kn_deriv_zero.
    function: String,
    /// Parameters as key=value, e.g. `n=3 x=1/4`.
    params: Vec<String>,
    /// Exact rational result (polynomial and rational-valued functions only).
    #[arg(long)]
    exact: bool,
    /// Evaluate on a:b:count instead of a single x.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Width function for `bspline`: const:c, quad:c:d or table:file.csv.
    #[arg(long)]
    sigma: Option<String>,
    /// Relative truncation tolerance of the series.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["id", "all"])))]
struct VerifyArgs {
    #[arg(long)]
    id: Option<String>,
    /// Every identity over the default parameter ranges.
    #[arg(long)]
    all: bool,
    /// Parameters as key=value list, e.g. `n=3,i=1`; default ranges otherwise.
    #[arg(long, requires = "id")]
    params: Option<String>,
    /// exact, ode or numeric; all admissible modes otherwise.
    #[arg(long)]
    mode: Option<String>,
    /// Tolerance for numeric checks.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpKind {
    Bspline,
    Kantorovich,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long, value_enum)]
    op: OpKind,
    #[arg(long)]
    n: u32,
    /// Derivative order of the Kantorovich operator.
    #[arg(long)]
    k: Option<u32>,
    /// Width function for `bspline` (default const:1).
    #[arg(long)]
    sigma: Option<String>,
    /// a:b:count, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// CSV output (the default).
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RegistryArgs {
    #[arg(long)]
    json: bool,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Registry(a) => cmd_registry(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(table: &Table, json: bool) -> Result<(), String> {
    match table.write(io::stdout().lock(), json) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(format!("writing output: {e}")),
        _ => Ok(()),
    }
}

fn params_json(p: &Params) -> Map<String, Value> {
    p.iter()
        .map(|(k, v)| (k.to_string(), Value::from(format_rational(v))))
        .collect()
}

fn cmd_eval(a: EvalArgs) -> Result<Outcome, String> {
    let f: Function = a.function.parse()?;
    let mut params = args::parse_params(&a.params)?;
    f.validate(&params)?;
    if a.sigma.is_some() && f != Function::Bspline {
        return Err("--sigma applies only to bspline".into());
    }
    let sigma = match &a.sigma {
        Some(s) => args::parse_sigma(s)?,
        None => SigmaSpec::Constant(int(1)),
    };
    let x = params.remove("x");
    let xs: Vec<Option<Rational>> = match (&a.grid, x, f.has_variable()) {
        (Some(_), _, false) => return Err(format!("{} takes no variable", a.function)),
        (Some(_), Some(_), true) => return Err("give either x=... or --grid, not both".into()),
        (Some(g), None, true) => args::parse_grid(g)?.into_iter().map(Some).collect(),
        (None, Some(x), true) => vec![Some(x)],
        (None, None, true) => return Err("missing x=... or --grid".into()),
        (None, _, false) => vec![None],
    };

    let mut table = Table::new("eval", vec!["x", "value"]);
    table.params = params_json(&params);
    table
        .params
        .insert("function".into(), Value::from(a.function.clone()));
    table.params.insert("exact".into(), Value::Bool(a.exact));
    for x in &xs {
        let value = if a.exact {
            Cell::Text(format_rational(&eval::eval_exact(
                f,
                &params,
                x.as_ref(),
                &sigma,
            )?))
        } else {
            Cell::Float(eval::eval_float(f, &params, x.as_ref(), &sigma, a.tol)?)
        };
        let xc = x.as_ref().map_or(Cell::Text(String::new()), |x| {
            Cell::Text(format_rational(x))
        });
        table.rows.push(vec![xc, value]);
    }

    if a.json || a.grid.is_some() {
        emit(&table, a.json)?;
    } else {
        let v = match &table.rows[0][1] {
            Cell::Text(s) => s.clone(),
            Cell::Float(v) => output::fmt_f64(*v),
            _ => unreachable!(),
        };
        writeln!(io::stdout(), "{v}").map_err(|e| e.to_string())?;
    }
    Ok(Outcome::Pass)
}

fn cmd_verify(a: VerifyArgs) -> Result<Outcome, String> {
    let mode: Option<ModeKind> = a
        .mode
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(|e: heunent::Error| e.to_string())?;
    let ranges = ParamRanges::default();
    let reports: Vec<VerificationReport> = if a.all {
        let all = verify_all(&ranges);
        match (mode, a.tol) {
            (None, None) => all,
            _ => {
                let ids: Vec<IdentityId> = IdentityId::ALL.to_vec();
                run_checks(&ids, None, mode, a.tol, &ranges, true)?
            }
        }
    } else {
        let id: IdentityId =
            a.id.as_deref()
                .unwrap_or_default()
                .parse()
                .map_err(|e: heunent::Error| e.to_string())?;
        let params = a
            .params
            .as_deref()
            .map(Params::parse)
            .transpose()
            .map_err(|e| e.to_string())?;
        if let Some(m) = mode {
            if !id.admissible_modes().contains(&m) {
                return Err(format!("mode {} is not admissible for {id}", m.name()));
            }
        }
        run_checks(&[id], params, mode, a.tol, &ranges, false)?
    };

    let failed = reports.iter().filter(|r| !r.pass).count();
    let mut table = Table::new(
        "verify",
        vec!["id", "params", "mode", "max_err", "tol", "points", "pass"],
    );
    table.params.insert(
        "target".into(),
        Value::from(a.id.clone().unwrap_or_else(|| "all".into())),
    );
    if let Some(p) = &a.params {
        table.params.insert("params".into(), Value::from(p.clone()));
    }
    if let Some(m) = mode {
        table.params.insert("mode".into(), Value::from(m.name()));
    }
    if let Some(t) = a.tol {
        table.params.insert("tol".into(), json!(t));
    }
    for r in &reports {
        let tol = match &r.mode {
            CheckMode::NumericGrid { tol, .. } => *tol,
            _ => 0.0,
        };
        table.rows.push(vec![
            Cell::Text(r.id.to_string()),
            Cell::Text(r.params.to_string()),
            Cell::Text(r.mode.kind().name().to_string()),
            Cell::Float(r.max_err),
            Cell::Float(tol),
            Cell::Int(r.points_checked as u64),
            Cell::Bool(r.pass),
        ]);
    }
    table.pass = Some(failed == 0);
    table
        .trailer
        .push(format!("{} checks, {failed} failed", reports.len()));
    table.extra.insert(
        "rows".into(),
        serde_json::to_value(&reports).map_err(|e| e.to_string())?,
    );
    emit(&table, a.json)?;
    Ok(if failed == 0 {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

/// Runs `ids` over the given (or default) parameters and modes. With
/// `soft_errors`, errors become failing reports instead of aborting.
fn run_checks(
    ids: &[IdentityId],
    params: Option<Params>,
    mode: Option<ModeKind>,
    tol: Option<f64>,
    ranges: &ParamRanges,
    soft_errors: bool,
) -> Result<Vec<VerificationReport>, String> {
    let mut out = Vec::new();
    for &id in ids {
        let sets = match &params {
            Some(p) => vec![p.clone()],
            None => ranges.params_for(id),
        };
        let kinds: Vec<ModeKind> = match mode {
            Some(m) => id
                .admissible_modes()
                .iter()
                .copied()
                .filter(|&k| k == m)
                .collect(),
            None => id.admissible_modes().to_vec(),
        };
        for p in &sets {
            for &k in &kinds {
                let mut m = CheckMode::default_for(id, k, p);
                if let (CheckMode::NumericGrid { tol: t, .. }, Some(user)) = (&mut m, tol) {
                    *t = user;
                }
                match verify(id, p, &m) {
                    Ok(r) => out.push(r),
                    Err(e) if soft_errors => {
                        eprintln!("{id} {p}: {e}");
                        out.push(VerificationReport {
                            id,
                            params: p.clone(),
                            mode: m,
                            max_err: f64::NAN,
                            points_checked: 0,
                            pass: false,
                            routes: vec![],
                        });
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    Ok(out)
}

fn cmd_entropy(a: EntropyArgs) -> Result<Outcome, String> {
    let op = match a.op {
        OpKind::Bspline => {
            if a.k.is_some() {
                return Err("--k applies only to the Kantorovich operator".into());
            }
            let sigma = args::parse_sigma(a.sigma.as_deref().unwrap_or("const:1"))?;
            OperatorSpec::BSpline { n: a.n, sigma }
        }
        OpKind::Kantorovich => {
            if a.sigma.is_some() {
                return Err("--sigma applies only to the B-spline operator".into());
            }
            let k = a.k.ok_or("the Kantorovich operator needs --k")?;
            OperatorSpec::Kantorovich { n: a.n, k }
        }
    };
    op.validate().map_err(|e| e.to_string())?;
    let xs = args::parse_grid(&a.grid)?;
    let points = entropy_profile(&op, &xs).map_err(|e| e.to_string())?;

    let mut table = Table::new(
        "entropy",
        vec![
            "x",
            "squared_kernel_integral",
            "renyi",
            "tsallis",
            "variance",
        ],
    );
    table.params.insert(
        "op".into(),
        Value::from(match a.op {
            OpKind::Bspline => "bspline",
            OpKind::Kantorovich => "kantorovich",
        }),
    );
    table.params.insert("n".into(), Value::from(a.n));
    if let Some(k) = a.k {
        table.params.insert("k".into(), Value::from(k));
    }
    if let OpKind::Bspline = a.op {
        table.params.insert(
            "sigma".into(),
            Value::from(a.sigma.clone().unwrap_or_else(|| "const:1".into())),
        );
    }
    table
        .params
        .insert("grid".into(), Value::from(a.grid.clone()));
    for (x, p) in xs.iter().zip(&points) {
        table.rows.push(vec![
            Cell::Text(format_rational(x)),
            Cell::Float(p.squared_kernel_integral),
            Cell::Float(p.renyi),
            Cell::Float(p.tsallis),
            Cell::Float(p.variance),
        ]);
    }
    let pairs = ["variance/renyi", "variance/tsallis", "renyi/tsallis"];
    if points.len() >= 2 {
        let reports = profile_synchronicity(&points).map_err(|e| e.to_string())?;
        let verdict = |pass: bool| if pass { "pass" } else { "fail" };
        let summary: Vec<String> = pairs
            .iter()
            .zip(&reports)
            .map(|(name, r)| format!("{name}={}", verdict(r.pass)))
            .collect();
        table
            .trailer
            .push(format!("synchronicity {}", summary.join(" ")));
        let sync: Map<String, Value> = pairs
            .iter()
            .zip(&reports)
            .map(|(name, r)| (name.to_string(), Value::Bool(r.pass)))
            .collect();
        table
            .extra
            .insert("synchronicity".into(), Value::Object(sync));
        table.pass = Some(reports.iter().all(|r| r.pass));
    } else {
        table
            .trailer
            .push("synchronicity n/a (fewer than two points)".into());
    }
    emit(&table, a.json)?;
    Ok(Outcome::Pass)
}

fn cmd_registry(a: RegistryArgs) -> Result<Outcome, String> {
    let entries = registry();
    let mut table = Table::new(
        "registry",
        vec!["id", "equation", "modes", "default_ranges", "statement"],
    );
    for e in &entries {
        let modes: Vec<&str> = e.modes.iter().map(|m| m.name()).collect();
        table.rows.push(vec![
            Cell::Text(e.id.to_string()),
            Cell::Text(e.equation.to_string()),
            Cell::Text(modes.join(" ")),
            Cell::Text(e.default_ranges.to_string()),
            Cell::Text(e.statement.to_string()),
        ]);
    }
    table.extra.insert(
        "rows".into(),
        serde_json::to_value(&entries).map_err(|e| e.to_string())?,
    );
    emit(&table, a.json)?;
    Ok(Outcome::Pass)
}
