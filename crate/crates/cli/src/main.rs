use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mqc_cli::config::{
    load_state_file, parse_bell, parse_bloch, parse_family, parse_grid, resolve_alphas,
    ConfigError, ResolvedGenerator, ResolvedState,
};
use mqc_cli::output::{Format, Table};
use mqc_cli::run::{cmd_bounds, cmd_closed_forms, cmd_echo, cmd_limits, cmd_mqi, RunError};

use mqc_core::echo::EchoProtocolConfig;

/// Coherence-order spectra, entropy bounds, and echo sweeps for
/// finite-dimensional quantum states.
#[derive(Parser)]
#[command(name = "mqc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intensity spectrum I_m over the generator's coherence orders
    Mqi(SpectrumArgs),
    /// Bound-chain quantifiers across an alpha sweep
    Bounds(SpectrumArgs),
    /// Analytic closed forms for the built-in state families
    ClosedForms(ClosedFormArgs),
    /// Time-reversal echo sweep for the all-to-all Ising model
    Echo(EchoArgs),
    /// Curvature coefficient of the relative entropy and its alpha -> 1 limit
    Limits(SpectrumArgs),
}

#[derive(Args)]
struct StateArgs {
    /// State family: eqn | ghz | w (with --n and --p)
    #[arg(long)]
    family: Option<String>,

    /// Qubit count for --family
    #[arg(long)]
    n: Option<usize>,

    /// Mixing parameter in (0,1) for --family
    #[arg(long)]
    p: Option<f64>,

    /// Single-qubit state "r,theta,phi" (radians)
    #[arg(long)]
    bloch: Option<String>,

    /// Bell-diagonal correlations "ax,ay,az"
    #[arg(long)]
    bell: Option<String>,

    /// Density matrix from a JSON file `{"dim": d, "entries": [[re,im],..]}`
    #[arg(long, value_name = "PATH")]
    state_file: Option<PathBuf>,
}

#[derive(Args)]
struct GeneratorArgs {
    /// Generator: sx | sy | sz | ising | "nx,ny,nz"
    #[arg(long)]
    generator: Option<String>,

    /// Ising coupling J (with --generator ising)
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
}

#[derive(Args)]
struct AlphaArgs {
    /// Single Renyi order in (0,1)
    #[arg(long)]
    alpha: Option<f64>,

    /// Alpha sweep "START:STOP:STEP", all values in (0,1)
    #[arg(long)]
    alpha_grid: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Reserved for seeded inputs; recorded nowhere, runs are already
    /// deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    generator: GeneratorArgs,
    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClosedFormArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    generator: GeneratorArgs,
    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EchoArgs {
    /// Qubit count (2..=10)
    #[arg(long)]
    n: usize,

    /// Mixing parameter in (0,1)
    #[arg(long, default_value_t = 0.5)]
    p: f64,

    /// Rotation angle in radians
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    phi: f64,

    /// Ising coupling J; time is measured in 1/J
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,

    /// Time sweep "START:STOP:STEP"; default covers one period [0, piN/2]
    /// in 40 points
    #[arg(long)]
    t_grid: Option<String>,

    #[command(flatten)]
    alpha: AlphaArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn resolve_state(args: &StateArgs) -> Result<ResolvedState, ConfigError> {
    let mut chosen = Vec::new();
    if args.family.is_some() {
        chosen.push("--family");
    }
    if args.bloch.is_some() {
        chosen.push("--bloch");
    }
    if args.bell.is_some() {
        chosen.push("--bell");
    }
    if args.state_file.is_some() {
        chosen.push("--state-file");
    }
    if chosen.len() != 1 {
        return Err(ConfigError::invalid(
            "exactly one of --family, --bloch, --bell, --state-file is required",
        ));
    }
    if let Some(family) = &args.family {
        let n = args
            .n
            .ok_or_else(|| ConfigError::invalid("--family needs --n"))?;
        let p = args
            .p
            .ok_or_else(|| ConfigError::invalid("--family needs --p"))?;
        return Ok(ResolvedState::Family(parse_family(family, n, p)?));
    }
    if let Some(bloch) = &args.bloch {
        return Ok(ResolvedState::Qubit(parse_bloch(bloch)?));
    }
    if let Some(bell) = &args.bell {
        return Ok(ResolvedState::Bell(parse_bell(bell)?));
    }
    let path = args.state_file.as_ref().expect("one spec chosen");
    Ok(ResolvedState::Matrix(load_state_file(path)?))
}

fn resolve_generator(args: &GeneratorArgs) -> Result<ResolvedGenerator, ConfigError> {
    let spec = args
        .generator
        .as_ref()
        .ok_or_else(|| ConfigError::invalid("--generator is required"))?;
    ResolvedGenerator::parse(spec, args.coupling)
}

fn emit(table: Table, output: &OutputArgs) -> Result<(), RunError> {
    let body = table.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|source| {
            RunError::Config(ConfigError::Io {
                path: path.display().to_string(),
                source,
            })
        })?,
        None => print!("{body}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Mqi(args) => {
            let state = resolve_state(&args.state)?;
            let generator = resolve_generator(&args.generator)?;
            let alphas = resolve_alphas(args.alpha.alpha, args.alpha.alpha_grid.as_deref())?;
            emit(cmd_mqi(&state, &generator, &alphas)?, &args.output)
        }
        Command::Bounds(args) => {
            let state = resolve_state(&args.state)?;
            let generator = resolve_generator(&args.generator)?;
            let alphas = resolve_alphas(args.alpha.alpha, args.alpha.alpha_grid.as_deref())?;
            emit(cmd_bounds(&state, &generator, &alphas)?, &args.output)
        }
        Command::ClosedForms(args) => {
            let state = resolve_state(&args.state)?;
            let generator = match args.generator.generator.as_ref() {
                Some(_) => Some(resolve_generator(&args.generator)?),
                None => None,
            };
            let alphas = resolve_alphas(args.alpha.alpha, args.alpha.alpha_grid.as_deref())?;
            emit(
                cmd_closed_forms(&state, generator.as_ref(), &alphas)?,
                &args.output,
            )
        }
        Command::Echo(args) => {
            let alphas = match (args.alpha.alpha, args.alpha.alpha_grid.as_deref()) {
                (None, None) => vec![0.25, 0.5, 0.75],
                (alpha, grid) => resolve_alphas(alpha, grid)?,
            };
            let t_grid = match args.t_grid.as_deref() {
                Some(spec) => parse_grid(spec).map_err(RunError::Config)?.values(),
                None => {
                    let period = std::f64::consts::PI * args.n as f64 / 2.0;
                    (0..40).map(|k| period * k as f64 / 39.0).collect()
                }
            };
            let config =
                EchoProtocolConfig::new(args.n, args.coupling, args.p, args.phi, t_grid, alphas)?;
            emit(cmd_echo(config)?, &args.output)
        }
        Command::Limits(args) => {
            let state = resolve_state(&args.state)?;
            let generator = resolve_generator(&args.generator)?;
            let alphas = resolve_alphas(args.alpha.alpha, args.alpha.alpha_grid.as_deref())?;
            emit(cmd_limits(&state, &generator, &alphas)?, &args.output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
