//! `cascade`: batch front-end for the biexciton–exciton cascade model.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cascade_core::figures::{fig3_table, fig4_table};
use cascade_core::secure::{optimize_delay, secure_rate};
use cascade_core::sweep::{run_sweep, sweep_table, Scale, SweepSpec};
use cascade_core::table::{write_file, Table};
use cascade_core::validate::{validate_against, ValidationReport};
use cascade_core::{
    amplitudes, dephased_density, final_state, ghz_fidelity, Amplitudes, Error, Result,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Config;

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cascade",
    version,
    about = "Photon-number entanglement of a doubly driven biexciton-exciton cascade",
    long_about = "Photon-number entanglement of a doubly driven biexciton-exciton cascade.\n\n\
        Rates are in units where gamma_X = 1 unless both --gamma-b and --gamma-x are given; \
        --ratio sets gamma_B/gamma_X (default 2). The default delay puts gamma_B*dt = ln 2.\n\n\
        CASCADE_THREADS caps the number of worker threads. Exit codes: 0 success, \
        1 validation failure, 2 bad arguments, 3 I/O error."
)]
struct Cli {
    /// JSON file with run settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Branch weights alpha = exp(-G_B dt/2), beta^2 = G_B (exp(-G_B dt) - exp(-G_X dt)) / (G_X - G_B),
    /// gamma^2 = 1 - alpha^2 - beta^2, and the GHZ fidelity (alpha + gamma)^2 / 2.
    Amplitudes {
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Four-mode state alpha|0000> + beta|1001> + gamma|1111> over (EB, EX, LB, LX);
    /// with --dephase, the density matrix with coherences scaled by d.
    State {
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Delay sweep of branch weights, fidelity, channel mutual information
    /// I(A:B) = S(A) + S(B) - S(AB), its average, and I(A:B|E) if --eve is given.
    Sweep {
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        split: SplitArgs,
        /// Evaluate correlations on the four-mode GHZ state instead.
        #[arg(long)]
        ghz_reference: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Secret rate I(A:B|E) = S(AE) + S(BE) - S(E) - S(ABE) at one delay,
    /// next to the same quantity for the GHZ state.
    SecureRate {
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        split: SplitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Delay maximizing I(A:B|E) on [--dt-min, --dt-max] (default [0, 3/G_X]):
    /// 64-point scan, then golden-section refinement.
    OptimizeDt {
        #[command(flatten)]
        rates: RateArgs,
        #[arg(long, value_name = "TIME")]
        dt_min: Option<f64>,
        #[arg(long, value_name = "TIME")]
        dt_max: Option<f64>,
        #[command(flatten)]
        split: SplitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Channel mutual information I(A:B) = S(A) + S(B) - S(AB) for all seven
    /// channels, their average and the GHZ value, against G_X dt at G_B/G_X = 2.
    Fig3 {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Secret rate I(A:B|E) for channel 1 (Eve = EX, LB, LX) and channel 5
    /// (Eve = LB, LX) with GHZ baselines, against G_X dt at G_B/G_X = 2.
    Fig4 {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Checks the branch weights against an RK4 integration of
    /// dP_B/dt = -G_B P_B, dP_X/dt = G_B P_B - G_X P_X and a quantum-jump sampler.
    Validate {
        #[command(flatten)]
        rates: RateArgs,
        /// Monte Carlo trajectories [default: 1000000].
        #[arg(long, value_name = "N")]
        trials: Option<u64>,
        /// Sampler seed [default: 0].
        #[arg(long, value_name = "U64")]
        seed: Option<u64>,
        /// Shift alpha^2 up and beta^2 down by this amount before comparing.
        #[arg(long, hide = true, value_name = "DELTA")]
        corrupt: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Clone)]
struct RateArgs {
    /// Biexciton decay rate.
    #[arg(long, value_name = "RATE")]
    gamma_b: Option<f64>,
    /// Exciton decay rate.
    #[arg(long, value_name = "RATE")]
    gamma_x: Option<f64>,
    /// Gamma_B / Gamma_X.
    #[arg(long, value_name = "RATIO")]
    ratio: Option<f64>,
    /// Delay between the two pulses.
    #[arg(long, value_name = "TIME")]
    dt: Option<f64>,
    /// Coherence retained by dephasing, in [0, 1].
    #[arg(long, value_name = "D")]
    dephase: Option<f64>,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, value_name = "TIME")]
    dt_min: Option<f64>,
    #[arg(long, value_name = "TIME")]
    dt_max: Option<f64>,
    #[arg(long, value_name = "N")]
    points: Option<usize>,
    #[arg(long, value_enum)]
    scale: Option<ScaleArg>,
}

#[derive(Args, Clone)]
struct SplitArgs {
    /// Channel id 1..7; repeatable for sweeps.
    #[arg(long, value_name = "ID", value_parser = clap::value_parser!(u8).range(1..=7))]
    channel: Vec<u8>,
    /// Alice's modes, e.g. EB or EB,EX.
    #[arg(long, value_name = "MODES")]
    alice: Option<String>,
    /// Eve's modes; Bob holds the rest.
    #[arg(long, value_name = "MODES")]
    eve: Option<String>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

impl RateArgs {
    fn flags(&self) -> Config {
        Config {
            gamma_b: self.gamma_b,
            gamma_x: self.gamma_x,
            ratio: self.ratio,
            dt: self.dt,
            dephase: self.dephase,
            ..Config::default()
        }
    }
}

impl SplitArgs {
    fn apply(&self, c: &mut Config) {
        if !self.channel.is_empty() {
            c.channels = Some(self.channel.clone());
        }
        if self.alice.is_some() {
            c.alice = self.alice.clone();
        }
        if self.eve.is_some() {
            c.eve = self.eve.clone();
        }
    }
}

enum Failure {
    Usage(String),
    Io(String),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn emit(out: &mut dyn Write, output: &OutputArgs, text: &str) -> std::result::Result<(), Failure> {
    match &output.out {
        Some(path) => write_file(path, text).map_err(Failure::from),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn emit_table(
    out: &mut dyn Write,
    output: &OutputArgs,
    t: &Table,
) -> std::result::Result<(), Failure> {
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    };
    emit(out, output, &text)
}

fn table(header: &[&str], rows: Vec<Vec<f64>>) -> Table {
    Table {
        header: header.iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

fn settings(file: &Option<PathBuf>, flags: Config) -> Result<Config> {
    let base = match file {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    Ok(base.overlay(&flags))
}

fn state_table(c: &Config) -> Result<Table> {
    let p = c.params()?;
    if let Some(d) = c.dephase {
        let rho = dephased_density(&p, d)?;
        let m = rho.matrix();
        let mut rows = Vec::new();
        for r in 0..m.rows() {
            for col in 0..m.cols() {
                let z = m[(r, col)];
                if z.norm() > 0.0 {
                    rows.push(vec![r as f64, col as f64, z.re, z.im]);
                }
            }
        }
        return Ok(table(&["row", "col", "re", "im"], rows));
    }
    let psi = final_state(&p);
    let rows = psi
        .amps()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let bit = |k: usize| ((i >> (3 - k)) & 1) as f64;
            vec![i as f64, bit(0), bit(1), bit(2), bit(3), z.re, z.im]
        })
        .collect();
    Ok(table(&["index", "eb", "ex", "lb", "lx", "re", "im"], rows))
}

fn sweep_spec(c: &Config, ghz_reference: bool) -> Result<SweepSpec> {
    let (gamma_b, gamma_x) = c.rates()?;
    let scale = c.scale.unwrap_or(Scale::Log);
    Ok(SweepSpec {
        gamma_b,
        gamma_x,
        dt_min: c.dt_min.unwrap_or(1e-2 / gamma_x),
        dt_max: c.dt_max.unwrap_or(10.0 / gamma_x),
        points: c.points.unwrap_or(200),
        scale,
        channels: c.channels()?,
        splits: c.optional_split()?.into_iter().collect(),
        dephase: c.dephase,
        ghz_reference: ghz_reference || c.ghz_reference.unwrap_or(false),
    })
}

fn validation_output(
    out: &mut dyn Write,
    output: &OutputArgs,
    report: &ValidationReport,
) -> std::result::Result<(), Failure> {
    match output.format {
        None => emit(out, output, &report.to_text())?,
        Some(Format::Json) => emit(out, output, &report.to_json())?,
        Some(Format::Csv) => {
            let rows = report
                .patterns
                .iter()
                .map(|c| {
                    vec![
                        c.pattern as f64,
                        c.count as f64,
                        c.expected,
                        c.frequency,
                        c.z,
                    ]
                })
                .collect();
            emit_table(
                out,
                output,
                &table(&["pattern", "count", "expected", "frequency", "z"], rows),
            )?
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Amplitudes { rates, output } => {
            let c = settings(&cli.config, rates.flags())?;
            let p = c.params()?;
            let a = amplitudes(&p);
            let [a2, b2, g2] = a.probabilities();
            let row = vec![
                p.delta_t(),
                p.gamma_x() * p.delta_t(),
                a.alpha,
                a.beta,
                a.gamma,
                a2,
                b2,
                g2,
                ghz_fidelity(&p),
            ];
            let header = [
                "dt", "gx_dt", "alpha", "beta", "gamma", "alpha2", "beta2", "gamma2", "fidelity",
            ];
            emit_table(out, &output, &table(&header, vec![row]))
        }
        Command::State { rates, output } => {
            let c = settings(&cli.config, rates.flags())?;
            emit_table(out, &output, &state_table(&c)?)
        }
        Command::Sweep {
            rates,
            grid,
            split,
            ghz_reference,
            output,
        } => {
            let mut flags = rates.flags();
            flags.dt_min = grid.dt_min;
            flags.dt_max = grid.dt_max;
            flags.points = grid.points;
            flags.scale = grid.scale.map(|s| match s {
                ScaleArg::Linear => Scale::Linear,
                ScaleArg::Log => Scale::Log,
            });
            split.apply(&mut flags);
            let c = settings(&cli.config, flags)?;
            let spec = sweep_spec(&c, ghz_reference)?;
            let rows = run_sweep(&spec)?;
            emit_table(out, &output, &sweep_table(&spec, &rows))
        }
        Command::SecureRate {
            rates,
            split,
            output,
        } => {
            let mut flags = rates.flags();
            split.apply(&mut flags);
            let c = settings(&cli.config, flags)?;
            let p = c.params()?;
            let r = secure_rate(&p, &c.split()?, c.dephase)?;
            let row = vec![
                p.delta_t(),
                p.gamma_x() * p.delta_t(),
                r.cmi,
                r.ghz_baseline,
            ];
            emit_table(
                out,
                &output,
                &table(&["dt", "gx_dt", "cmi", "ghz_baseline"], vec![row]),
            )
        }
        Command::OptimizeDt {
            rates,
            dt_min,
            dt_max,
            split,
            output,
        } => {
            let mut flags = rates.flags();
            flags.dt_min = dt_min;
            flags.dt_max = dt_max;
            split.apply(&mut flags);
            let c = settings(&cli.config, flags)?;
            let (gb, gx) = c.rates()?;
            let s = c.split()?;
            let bracket = (c.dt_min.unwrap_or(0.0), c.dt_max.unwrap_or(3.0 / gx));
            let opt = optimize_delay(gb, gx, &s, bracket, c.dephase)?;
            let ghz = cascade_core::secure::ghz_baseline(&s)?;
            let row = vec![opt.dt, gx * opt.dt, opt.value, ghz];
            emit_table(
                out,
                &output,
                &table(&["dt", "gx_dt", "cmi", "ghz_baseline"], vec![row]),
            )
        }
        Command::Fig3 { output } => emit_table(out, &output, &fig3_table()?),
        Command::Fig4 { output } => emit_table(out, &output, &fig4_table()?),
        Command::Validate {
            rates,
            trials,
            seed,
            corrupt,
            output,
        } => {
            let mut flags = rates.flags();
            flags.trials = trials;
            flags.seed = seed;
            let c = settings(&cli.config, flags)?;
            let p = c.params()?;
            let mut expected = amplitudes(&p);
            if let Some(delta) = corrupt {
                let [a2, b2, g2] = expected.probabilities();
                expected = Amplitudes::from_probabilities(a2 + delta, b2 - delta, g2);
            }
            let report = validate_against(&p, &expected, c.trials(), c.seed())?;
            validation_output(out, &output, &report)
        }
    }
}

/// Worker cap from `CASCADE_THREADS`; `None` when unset.
fn thread_cap(raw: Option<&str>) -> std::result::Result<Option<usize>, String> {
    let Some(raw) = raw else {
        return Ok(None);
    };
    raw.trim()
        .parse()
        .ok()
        .filter(|&n: &usize| n > 0)
        .map(Some)
        .ok_or_else(|| format!("CASCADE_THREADS must be a positive integer, got {raw:?}"))
}

/// Parses `args`, runs the command and returns the process exit code.
fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out),
        Err(e) => {
            let code = e.exit_code() as u8;
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Validation) => EXIT_VALIDATION,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn main() -> ExitCode {
    let cap = thread_cap(std::env::var("CASCADE_THREADS").ok().as_deref());
    match cap {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                eprintln!("error: thread pool: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let code = execute(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr(),
    );
    ExitCode::from(code)
}
