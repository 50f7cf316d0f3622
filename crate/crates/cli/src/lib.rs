//! Argument parsing and command execution for the `qcorr` binary.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcorr_core::sweep::{linspace, sweep_gamma_rows, sweep_q, write_csv, SweepRow};
use qcorr_core::verify::run_verification;
use qcorr_core::{analyze, basis_switch_root, entanglement_report, QcorrError, XParams};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantum discord and one-way deficit for two-qubit X states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full correlation and entanglement report for one state, as JSON.
    Compute(ComputeArgs),
    /// Sweep of q |psi-><psi-| + (1-q)|00><00| over q.
    SweepQ(SweepQArgs),
    /// Phase-damping trajectories of the a = 0 family, one curve per cy.
    SweepGamma(SweepGammaArgs),
    /// Seeded random-ensemble invariant suites.
    Verify(VerifyArgs),
    /// q at which the deficit's optimal basis for the q family reaches the equator.
    Root(RootArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub cx: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub cy: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub cz: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepQArgs {
    #[arg(long, default_value_t = 0.0)]
    pub q_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q_max: f64,
    #[arg(long, default_value_t = 201)]
    pub q_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepGammaArgs {
    #[arg(long, default_value_t = 0.26, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.13, allow_hyphen_values = true)]
    pub cx: f64,
    #[arg(long, default_value_t = 0.08, allow_hyphen_values = true)]
    pub cz: f64,
    /// Comma-separated cy values, one curve each.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.15,0.25,0.35,0.45,0.55",
        allow_hyphen_values = true
    )]
    pub cy_list: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 51)]
    pub gamma_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Samples per suite.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RootArgs {
    /// Lower end of the search bracket.
    #[arg(long, default_value_t = 0.5)]
    pub q_min: f64,
    /// Upper end of the search bracket.
    #[arg(long, default_value_t = 0.9)]
    pub q_max: f64,
    /// Bisection tolerance on q.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failure classes mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, invalid states, unwritable output: exit 2.
    Input(String),
    /// A computation or check did not succeed: exit 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<QcorrError> for CliError {
    fn from(e: QcorrError) -> Self {
        match e {
            QcorrError::InvalidInput(_)
            | QcorrError::InvalidState { .. }
            | QcorrError::NotXShape { .. } => CliError::Input(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

/// What a command produced. `ok == false` means exit 1 after emitting `text`.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let (output, out) = match &cli.command {
        Command::Compute(args) => (compute(args)?, &args.output),
        Command::SweepQ(args) => (cmd_sweep_q(args)?, &args.output),
        Command::SweepGamma(args) => (cmd_sweep_gamma(args)?, &args.output),
        Command::Verify(args) => (verify(args)?, &args.output),
        Command::Root(args) => (root(args)?, &args.output),
    };
    match &out.out {
        Some(path) => {
            std::fs::write(path, &output.text)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output {
                text: String::new(),
                ok: output.ok,
            })
        }
        None => Ok(output),
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))
}

fn compute(args: &ComputeArgs) -> Result<Output, CliError> {
    if args.output.format == Some(Format::Csv) {
        return Err(CliError::Input("compute emits JSON only".into()));
    }
    let p = XParams::new(args.a, args.b, args.cx, args.cy, args.cz)?;
    let report = analyze(&p)?;
    let entanglement = entanglement_report(&p)?;
    Ok(Output::ok(to_json(
        &json!({ "report": report, "entanglement": entanglement }),
    )?))
}

fn render_rows(rows: &[SweepRow], format: Option<Format>) -> Result<String, CliError> {
    match format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(rows, &mut buf).map_err(|e| CliError::Failure(e.to_string()))?;
            String::from_utf8(buf).map_err(|e| CliError::Failure(e.to_string()))
        }
    }
}

fn cmd_sweep_q(args: &SweepQArgs) -> Result<Output, CliError> {
    let qs = linspace(args.q_min, args.q_max, args.q_steps)?;
    Ok(Output::ok(render_rows(&sweep_q(&qs)?, args.output.format)?))
}

fn cmd_sweep_gamma(args: &SweepGammaArgs) -> Result<Output, CliError> {
    if args.cy_list.is_empty() {
        return Err(CliError::Input(
            "--cy-list must name at least one value".into(),
        ));
    }
    let gammas = linspace(args.gamma_min, args.gamma_max, args.gamma_steps)?;
    let rows = sweep_gamma_rows(args.b, args.cx, args.cz, &args.cy_list, &gammas)?;
    Ok(Output::ok(render_rows(&rows, args.output.format)?))
}

fn verify(args: &VerifyArgs) -> Result<Output, CliError> {
    let summary = run_verification(args.seed, args.n)?;
    let text = match args.output.format {
        Some(Format::Json) => to_json(&summary)?,
        Some(Format::Csv) => return Err(CliError::Input("verify emits text or JSON".into())),
        None => summary.render(),
    };
    Ok(Output {
        text,
        ok: summary.all_passed(),
    })
}

fn root(args: &RootArgs) -> Result<Output, CliError> {
    if !(0.0..=1.0).contains(&args.q_min) || !(0.0..=1.0).contains(&args.q_max) {
        return Err(CliError::Input(format!(
            "bracket [{}, {}] must lie within [0, 1]",
            args.q_min, args.q_max
        )));
    }
    let q = basis_switch_root(XParams::werner_like_q, args.q_min, args.q_max, args.tol)?;
    let text = match args.output.format {
        Some(Format::Json) => to_json(&json!({ "root": q, "tol": args.tol }))?,
        _ => format!("{q:.4}\n"),
    };
    Ok(Output::ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qcorr").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        match parse(&["sweep-gamma"]).command {
            Command::SweepGamma(a) => {
                assert_eq!(a.cy_list, vec![0.15, 0.25, 0.35, 0.45, 0.55]);
                assert_eq!((a.b, a.cx, a.cz), (0.26, 0.13, 0.08));
                assert_eq!(a.gamma_steps, 51);
            }
            _ => panic!(),
        }
        match parse(&["sweep-q"]).command {
            Command::SweepQ(a) => assert_eq!((a.q_min, a.q_max, a.q_steps), (0.0, 1.0, 201)),
            _ => panic!(),
        }
    }

    #[test]
    fn negative_values_parse() {
        match parse(&[
            "compute", "--a", "0", "--b", "0", "--cx", "-1", "--cy", "-1", "--cz", "-1",
        ])
        .command
        {
            Command::Compute(a) => assert_eq!((a.cx, a.cy, a.cz), (-1.0, -1.0, -1.0)),
            _ => panic!(),
        }
    }

    #[test]
    fn error_classes() {
        let input: CliError = QcorrError::InvalidState {
            min_eigenvalue: -0.1,
        }
        .into();
        assert_eq!(input.exit_code(), 2);
        let failure: CliError = QcorrError::RootNotFound("x".into()).into();
        assert_eq!(failure.exit_code(), 1);
    }

    #[test]
    fn root_bracket_outside_unit_interval() {
        let cli = parse(&["root", "--q-max", "1.5"]);
        assert_eq!(execute(&cli).unwrap_err().exit_code(), 2);
    }
}
