use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperdet::commands::{self, CliError, Outcome, SelbergVariant, Settings};
use hyperdet::exec::{self, Parallel};
use hyperdet::report;
use hyperdet::schema::{self, InputError};
use hyperdet::suite::{self, SuiteConfig};
use hyperdet_core::quadrature::{BetaReading, GrowingPolicy, Options, QuadratureSpec, Rule};
use hyperdet_core::selberg::{ExpReading, SelbergParams};

/// Closed forms, critical values and numerical period matrices for weighted
/// hyperplane arrangements, with determinant checks.
///
/// Exit status: 0 when every requested check passes, 1 when a check fails or
/// the computation stops (quadrature not converged, gamma pole, ...), 2 for
/// unreadable or invalid input.
#[derive(Parser, Debug)]
#[command(name = "hyperdet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Tolerance on the relative deviation of each check.
    #[arg(long, global = true, env = "HYPERDET_TOL", default_value_t = 1e-6)]
    tol: f64,
    /// Target relative accuracy of each integral.
    #[arg(long, global = true, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Nodes per direction of the base rule.
    #[arg(long, global = true, default_value_t = 12)]
    nodes: usize,
    /// Refinement levels before giving up with MaxDepthExceeded.
    #[arg(long, global = true, default_value_t = 6)]
    max_depth: u32,
    /// Quadrature rule on each simplex.
    #[arg(long, global = true, value_enum, default_value_t = RuleArg::Auto)]
    rule: RuleArg,
    /// How growing (unbounded) chambers are integrated.
    #[arg(long, global = true, value_enum, default_value_t = GrowingArg::Compactify)]
    growing: GrowingArg,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "HYPERDET_THREADS", default_value_t = 0)]
    threads: usize,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Auto,
    TanhSinh,
    GaussJacobi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GrowingArg {
    Compactify,
    Truncate,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BetaArg {
    Relative,
    Literal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExpReadingArg {
    Corrected,
    Printed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    /// det of ∫_{U_l} Φ ω_m.
    Noexp,
    /// The same with the symmetrized forms ω̃_m.
    NoexpSym,
    /// det of ∫_{Ũ_l} e^{aΣt} Φ ω_m.
    Exp,
    /// Closed phase/discriminant factor against critical values on the U_l.
    Lemma73,
    /// Closed exponential factor against critical values on the Ũ_l.
    Lemma75,
    /// Box integrals over V_l against the triangular ones.
    Rect,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Arrangement document (JSON, schema version 1).
    input: PathBuf,
    /// Use the document's f0 (the exponential e^{-f0} and growing chambers).
    #[arg(long)]
    with_f0: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chambers, lattice, discrete invariants, βnbc bases and bijections.
    Analyze(InputArgs),
    /// Gamma factors of the beta function.
    Beta {
        #[command(flatten)]
        input: InputArgs,
        /// Reading of B(A;α;H0) with --with-f0.
        #[arg(long, value_enum, default_value_t = BetaArg::Relative)]
        beta_reading: BetaArg,
    },
    /// Critical values on the default branches.
    Critical(InputArgs),
    /// The period matrix by quadrature.
    PeriodMatrix {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        options: OptionArgs,
    },
    /// Compare det PM with the closed form.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        options: OptionArgs,
        /// Reading of B(A;α;H0) with --with-f0.
        #[arg(long, value_enum, default_value_t = BetaArg::Relative)]
        beta_reading: BetaArg,
        /// Also compare PM(A_t) with PM(A;α;f0) for t = 10, 40, 160 (report only).
        #[arg(long)]
        convergence: bool,
    },
    /// Selberg-type determinants, critical products and box integrals.
    SelbergVerify {
        /// Number of integration variables.
        #[arg(long)]
        n: usize,
        /// Points z_1 < ... < z_p, comma separated rationals.
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
        /// Exponents α_s, comma separated (x, x+yi).
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<String>,
        #[arg(long, default_value = "0.3")]
        gamma: String,
        /// Coefficient of the exponential e^{aΣt}.
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Reading of the exponential closed form.
        #[arg(long, value_enum, default_value_t = ExpReadingArg::Corrected)]
        reading: ExpReadingArg,
    },
    /// Seeded random instances checked combinatorially and numerically.
    RandomSuite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Largest number of hyperplanes.
        #[arg(long, default_value_t = 5)]
        max_p: usize,
        /// Verify the exponential identity (with a branch-covariance recheck).
        #[arg(long)]
        with_f0: bool,
        /// Where failing instances are written as fixtures.
        #[arg(long, default_value = "hyperdet-failures")]
        dump_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct OptionArgs {
    /// Reverse the orientation of a chamber (by column index).
    #[arg(long)]
    flip: Vec<usize>,
    /// Move one argument to another sheet: CHAMBER:HYPERPLANE:K adds 2πK.
    #[arg(long)]
    shift: Vec<String>,
}

impl OptionArgs {
    fn options(&self) -> Result<Options, CliError> {
        let mut branch_shifts = Vec::new();
        for s in &self.shift {
            let parts: Vec<&str> = s.split(':').collect();
            let bad = || CliError::Input(InputError::Schema(format!("--shift {s:?}: expected CHAMBER:HYPERPLANE:K")));
            if parts.len() != 3 {
                return Err(bad());
            }
            let j = parts[0].parse().map_err(|_| bad())?;
            let i = parts[1].parse().map_err(|_| bad())?;
            let k = parts[2].parse().map_err(|_| bad())?;
            branch_shifts.push((j, i, k));
        }
        Ok(Options { branch_shifts, flipped: self.flip.clone() })
    }
}

fn settings(g: &Global) -> Result<Settings, CliError> {
    let spec = QuadratureSpec {
        tol: g.quad_tol,
        nodes: g.nodes,
        max_depth: g.max_depth,
        rule: match g.rule {
            RuleArg::Auto => Rule::Auto,
            RuleArg::TanhSinh => Rule::TanhSinh,
            RuleArg::GaussJacobi => Rule::GaussJacobi,
        },
        growing: match g.growing {
            GrowingArg::Compactify => GrowingPolicy::Compactify,
            GrowingArg::Truncate => GrowingPolicy::Truncate,
        },
        ..QuadratureSpec::default()
    };
    spec.validate().map_err(|e| CliError::Compute { context: "quadrature settings".into(), error: e })?;
    if !(g.tol > 0.0) {
        return Err(CliError::Input(InputError::Schema("--tol must be positive".into())));
    }
    Ok(Settings { tol: g.tol, spec })
}

fn beta_reading(b: BetaArg) -> BetaReading {
    match b {
        BetaArg::Relative => BetaReading::Relative,
        BetaArg::Literal => BetaReading::Literal,
    }
}

fn schema_error(m: String) -> CliError {
    CliError::Input(InputError::Schema(m))
}

fn selberg_params(n: usize, z: &[String], alpha: &[String], gamma: &str, a: &str) -> Result<SelbergParams, CliError> {
    let z = z.iter().map(|s| schema::parse_rational(s)).collect::<Result<Vec<_>, _>>().map_err(schema_error)?;
    let alpha = alpha.iter().map(|s| commands::parse_complex(s)).collect::<Result<Vec<_>, _>>().map_err(schema_error)?;
    let gamma = commands::parse_complex(gamma).map_err(schema_error)?;
    let a = commands::parse_complex(a).map_err(schema_error)?;
    let params = SelbergParams { n, z, alpha, gamma, a };
    params.validate().map_err(|e| CliError::Compute { context: "Selberg parameters".into(), error: e })?;
    Ok(params)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let s = settings(&cli.global)?;
    let ex = Parallel;
    match &cli.command {
        Command::Analyze(i) => commands::analyze(&schema::load(&i.input)?, i.with_f0),
        Command::Beta { input, beta_reading: b } => commands::beta(&schema::load(&input.input)?, input.with_f0, beta_reading(*b)),
        Command::Critical(i) => commands::critical(&schema::load(&i.input)?, i.with_f0),
        Command::PeriodMatrix { input, options } => {
            commands::period_matrix(&schema::load(&input.input)?, input.with_f0, &options.options()?, &s, &ex)
        }
        Command::Verify { input, options, beta_reading: b, convergence } => commands::verify(
            &schema::load(&input.input)?,
            input.with_f0,
            &options.options()?,
            beta_reading(*b),
            *convergence,
            &s,
            &ex,
        ),
        Command::SelbergVerify { n, z, alpha, gamma, a, variant, reading } => {
            let params = selberg_params(*n, z, alpha, gamma, a)?;
            let variant = match variant {
                VariantArg::Noexp => SelbergVariant::NoExp,
                VariantArg::NoexpSym => SelbergVariant::NoExpSymmetric,
                VariantArg::Exp => SelbergVariant::Exp,
                VariantArg::Lemma73 => SelbergVariant::CriticalNoExp,
                VariantArg::Lemma75 => SelbergVariant::CriticalExp,
                VariantArg::Rect => SelbergVariant::Rectangular,
            };
            let reading = match reading {
                ExpReadingArg::Corrected => ExpReading::CORRECTED,
                ExpReadingArg::Printed => ExpReading::PRINTED,
            };
            commands::selberg_verify(&params, variant, reading, &s, &ex)
        }
        Command::RandomSuite { seed, count, dim, max_p, with_f0, dump_dir } => {
            if *dim == 0 || *max_p < *dim || *max_p > 9 || *dim > 3 {
                return Err(schema_error("random-suite needs 1 ≤ dim ≤ 3 and dim ≤ max-p ≤ 9".into()));
            }
            eprintln!("random-suite seed={seed}");
            let cfg = SuiteConfig::new(*seed, *count, *dim, *max_p, *with_f0);
            let mut r = suite::run(&cfg, &s, &ex);
            if !r.pass {
                if let Err(e) = suite::dump_failures(&mut r, dump_dir) {
                    eprintln!("could not write failure fixtures: {e}");
                }
            }
            let pass = r.pass;
            let mut report = serde_json::to_value(&r).expect("serializable");
            report["command"] = serde_json::json!("random-suite");
            Ok(Outcome { report, pass })
        }
    }
}

fn emit(value: &serde_json::Value, format: Format) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Table => write!(out, "{}", report::table(value)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    exec::init_threads(Some(cli.global.threads));
    let (value, code) = match run(&cli) {
        Ok(o) => (o.report, if o.pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            (e.to_json(), e.exit_code())
        }
    };
    if let Err(e) = emit(&value, cli.global.format) {
        eprintln!("error writing report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
