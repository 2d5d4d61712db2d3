//! Command-line front end. Structured results are printed as JSON, tables as
//! CSV; `--out FILE` redirects the primary output to a file.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;
use serde_json::json;

use crate::accuracy::{plan_precision, wronskian};
use crate::apriori::{predict_split_cost, AprioriModel, Family};
use crate::error::{Error, Result};
use crate::frobenius::{evaluate, Branch, EquationSpec, EvalRequest, DEFAULT_MAX_TERMS};
use crate::labs::{self, SweepConfig, WronskiMode};
use crate::mpcore::{parse_real, parse_scalar, PrecisionSpec};
use crate::spectra::{self, EigenProblem, Parity, Potential};

#[derive(Debug, Parser)]
#[command(name = "seriesode", version, about = "Arbitrary-precision Frobenius series solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one branch (and optionally its derivative) at a point.
    Eval(EvalArgs),
    /// Evaluate both branches and compare the Wronskian with its exact value.
    Wronskian(WronskianArgs),
    /// Predict the largest term and the number of terms for a model family.
    Apriori(AprioriArgs),
    /// Solve for an oscillator eigenvalue by shooting.
    Eigen(EigenArgs),
    /// Random-parameter accuracy sweep; CSV rows, JSON summary.
    Sweep(SweepArgs),
    /// Terms and wall time against precision; CSV rows.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct OutArg {
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Equation file: {"s", "nu_plus", "nu_minus", "v": [...]}.
    #[arg(long)]
    eq: PathBuf,
    /// Evaluation point, e.g. "27/2+43/7i" or "13.5+6.142857i".
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    branch: BranchArg,
    /// Precision in decimal digits.
    #[arg(long)]
    prec: u32,
    /// Also sum the derivative.
    #[arg(long)]
    deriv: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct WronskianArgs {
    #[arg(long)]
    eq: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Fixed precision in decimal digits.
    #[arg(long, conflicts_with = "digits", required_unless_present = "digits")]
    prec: Option<u32>,
    /// Plan the precision for an absolute Wronskian error of 10^-digits.
    #[arg(long)]
    digits: Option<u32>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct AprioriArgs {
    #[arg(long, default_value = "anharmonic")]
    family: String,
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    /// Evaluation radius in y; the series variable is x = y².
    #[arg(long)]
    y: f64,
    /// Target precision in decimal digits.
    #[arg(long)]
    prec: u32,
    /// Also report split-evaluation costs for k = 1..=split legs.
    #[arg(long)]
    split: Option<u32>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu: f64,
    /// Use the prefactor-corrected coefficient estimate.
    #[arg(long)]
    improved: bool,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct EigenArgs {
    #[arg(long, alias = "family", default_value = "quartic")]
    potential: String,
    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    parity: ParityArg,
    /// Level index within the parity class.
    #[arg(long, default_value_t = 0)]
    level: u32,
    /// Target digits.
    #[arg(long)]
    digits: u32,
    /// Dirichlet boundary y_b.
    #[arg(long)]
    yb: Option<String>,
    /// Eigenvalue bracket as two reals.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    bracket: Option<Vec<String>>,
    /// Double-well s parameter.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    s: String,
    /// Digits added on top of the planned precision.
    #[arg(long, default_value_t = 0)]
    extra_digits: u32,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepKind {
    /// Estimated against real errors over a precision list.
    Error,
    /// Wronskian check at a fixed or planned precision.
    Wronskian,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepKind::Error)]
    kind: SweepKind,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Precisions in digits (repeat or comma-separate).
    #[arg(long, value_delimiter = ',', default_values_t = [20u32, 200, 500])]
    prec: Vec<u32>,
    /// Wronskian sweep: plan for 10^-digits instead of using --prec.
    #[arg(long)]
    digits: Option<u32>,
    /// Also sum derivatives in the error sweep.
    #[arg(long)]
    deriv: bool,
    /// Write the JSON summary here (standard error otherwise).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Equation file; defaults to the even quartic oscillator near its
    /// ground state (and then ignores --branch).
    #[arg(long)]
    eq: Option<PathBuf>,
    #[arg(long, default_value = "10", allow_hyphen_values = true)]
    z: String,
    #[arg(long, value_enum, default_value_t = BranchArg::Minus)]
    branch: BranchArg,
    #[arg(long, value_delimiter = ',', default_values_t = [200u32, 500, 1000, 2000, 3000, 5000])]
    prec: Vec<u32>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Rejected(_) => 2,
        Error::NonConvergence { .. } | Error::BoundaryTooSmall { .. } => 3,
        _ => 4,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 4 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &OutArg, bytes: &[u8]) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_json(out: &OutArg, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit(out, &bytes)
}

fn emit_csv<T: Serialize>(out: &OutArg, rows: &[T]) -> Result<()> {
    let mut bytes = Vec::new();
    labs::write_csv(rows, &mut bytes)?;
    emit(out, &bytes)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Wronskian(a) => run_wronskian(a),
        Command::Apriori(a) => apriori(a),
        Command::Eigen(a) => eigen(a),
        Command::Sweep(a) => sweep(a),
        Command::Bench(a) => bench(a),
    }
}

fn eval(a: EvalArgs) -> Result<()> {
    let eq = EquationSpec::load(&a.eq)?;
    let z = parse_scalar(&a.z)?;
    let prec = PrecisionSpec::from_digits(a.prec);
    let req = EvalRequest::new(eq.clone(), z.clone(), a.branch.into(), prec)
        .with_derivative(a.deriv)
        .with_max_terms(a.max_terms);
    let r = evaluate(&req)?;
    emit_json(
        &a.out,
        &json!({
            "config": {
                "equation": eq,
                "z": z,
                "branch": req.branch,
                "precision": prec,
                "deriv": a.deriv,
                "max_terms": a.max_terms,
            },
            "psi": r.psi,
            "dpsi": r.dpsi,
            "diagnostics": r.diagnostics,
        }),
    )
}

fn run_wronskian(a: WronskianArgs) -> Result<()> {
    let eq = EquationSpec::load(&a.eq)?;
    let z = parse_scalar(&a.z)?;
    let prec = match (a.prec, a.digits) {
        (Some(p), _) => PrecisionSpec::from_digits(p),
        (None, Some(target)) => plan_precision(&eq, &z, target)?,
        (None, None) => return Err(Error::Config("need --prec or --digits".into())),
    };
    let report = wronskian(&eq, &z, prec)?;
    emit_json(
        &a.out,
        &json!({
            "config": {"equation": eq, "z": z, "precision": prec, "target_digits": a.digits},
            "within_estimate": report.within_estimate(),
            "report": report,
        }),
    )
}

fn apriori(a: AprioriArgs) -> Result<()> {
    let family: Family = a.family.parse()?;
    let model = AprioriModel::new(family, a.c)?;
    if a.y.is_nan() || a.y <= 0.0 {
        return Err(Error::Domain("--y must be positive".into()));
    }
    let x = a.y * a.y;
    let (m_peak, lg_max_term) = model.predict_peak(x);
    let estimate = model.estimate_terms(x, a.nu, f64::from(a.prec), a.improved)?;
    let split = match a.split {
        Some(k_max) if family == Family::Anharmonic && a.c == 0.0 => (1..=k_max.max(1))
            .map(|k| {
                let terms = predict_split_cost(a.y, f64::from(a.prec), k)?;
                Ok(json!({"k": k, "terms_per_leg": terms, "total_terms": terms * u64::from(k)}))
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::Config("--split needs the anharmonic family with c = 0".into())),
        None => Vec::new(),
    };
    emit_json(
        &a.out,
        &json!({
            "config": {"family": family, "c": a.c, "y": a.y, "x": x, "prec": a.prec, "nu": a.nu, "improved": a.improved, "split": a.split},
            "m_peak": m_peak,
            "lg_max_term": lg_max_term,
            "predicted_terms": estimate.predicted_terms,
            "estimate": estimate,
            "split": split,
        }),
    )
}

fn eigen(a: EigenArgs) -> Result<()> {
    let potential: Potential = a.potential.parse()?;
    let mut problem = match potential {
        Potential::Quartic => EigenProblem::quartic(a.parity.into(), a.level, a.digits),
        Potential::Doublewell => EigenProblem::doublewell(parse_scalar(&a.s)?, a.parity.into(), a.level, a.digits),
    }
    .with_extra_digits(a.extra_digits);
    if let Some(yb) = &a.yb {
        problem = problem.with_boundary(parse_real(yb)?);
    }
    if let Some(b) = &a.bracket {
        let lo: Rational = parse_real(&b[0])?;
        let hi: Rational = parse_real(&b[1])?;
        problem = problem.with_bracket(lo, hi);
    }
    let result = spectra::solve_eigenvalue(&problem)?;
    emit_json(&a.out, &result)
}

fn sweep(a: SweepArgs) -> Result<()> {
    let mut cfg = SweepConfig::new(a.samples, a.seed, a.prec.clone());
    cfg.derivative = a.deriv;
    let summary = match a.kind {
        SweepKind::Error => {
            let (rows, summary) = labs::run_error_sweep(&cfg)?;
            emit_csv(&a.out, &rows)?;
            serde_json::to_vec_pretty(&summary)?
        }
        SweepKind::Wronskian => {
            let mode = match a.digits {
                Some(d) => WronskiMode::Planned(d),
                None => WronskiMode::Fixed(*a.prec.first().ok_or_else(|| Error::Config("empty --prec".into()))?),
            };
            let (rows, summary) = labs::run_wronskian_sweep(&cfg, mode)?;
            emit_csv(&a.out, &rows)?;
            serde_json::to_vec_pretty(&summary)?
        }
    };
    match a.summary {
        Some(path) => std::fs::write(path, summary)?,
        None => eprintln!("{}", String::from_utf8_lossy(&summary)),
    }
    Ok(())
}

/// Quartic oscillator in `z = y²` with `ε` close to the ground state.
pub fn default_bench_equation() -> (EquationSpec, Branch) {
    let eps = Rational::from((10_603_620_904_841_829i64, 10_000_000_000_000_000i64));
    spectra::to_equation(&EigenProblem::quartic(Parity::Even, 0, 50), &eps)
}

fn bench(a: BenchArgs) -> Result<()> {
    let (eq, branch, model) = match &a.eq {
        Some(path) => (EquationSpec::load(path)?, a.branch.into(), None),
        None => {
            let (eq, branch) = default_bench_equation();
            (eq, branch, Some(AprioriModel::anharmonic(0.0)))
        }
    };
    let z = parse_scalar(&a.z)?;
    let x = z.re_f64().hypot(z.im_f64());
    let report = labs::run_scaling_bench(&eq, &z, branch, &a.prec, model.map(|m| (m, x)))?;
    emit_csv(&a.out, &report.rows)?;
    eprintln!("{}", serde_json::to_string(&json!({"fit_from_digits": labs::FIT_FROM_DIGITS, "fit": report.fit}))?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Rejection;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Rejected(Rejection::ZeroPoint)), 2);
        assert_eq!(exit_code(&Error::NonConvergence { terms: 3 }), 3);
        assert_eq!(exit_code(&Error::BoundaryTooSmall { lg_shift: -3.0 }), 3);
        assert_eq!(exit_code(&Error::Parse("x".into())), 4);
        assert_eq!(exit_code(&Error::NoSignChange { lo: "0".into(), hi: "1".into() }), 4);
    }

    #[test]
    fn unknown_flag_is_a_config_error() {
        assert_eq!(run(["seriesode", "eval", "--bogus"]), 4);
    }
}
