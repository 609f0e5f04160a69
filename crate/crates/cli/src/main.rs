//! `antinorm`: evaluate norms and anti-norms, compare spectral scales,
//! construct unitary witnesses and run the inequality suites.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antinorm_core::functions::ScalarFunction;
use antinorm_core::gauges::{
    antinorm_eval, antinorm_eval_matrix, norm_eval, norm_eval_matrix, AntiNormSpec, SymmetricGauge,
};
use antinorm_core::linalg::{load_matrix, ComplexMatrix, HermitianMatrix, MatrixFile};
use antinorm_core::majorization::{relation_check, Relation};
use antinorm_core::orbit::{
    agm_witness, dominance_unitary, mixed_witness_seeded, orbit_witness_seeded, triangle_witness, OrbitMode,
    WitnessResult,
};
use antinorm_core::spectral::{scale_from_json, spectral_scale, AnalyticScale, AnyScale};
use antinorm_core::verify::{run_suite, SuiteConfig};
use antinorm_core::{Error, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "antinorm",
    version,
    about = "Symmetric norms and anti-norms on Hermitian matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a symmetric norm or anti-norm on a matrix or scale.
    #[command(group(ArgGroup::new("functional").required(true).args(["norm", "antinorm"])))]
    Eval {
        /// Gauge as JSON, e.g. '{"kind":"kyfan","t":0.75}'.
        #[arg(long)]
        norm: Option<String>,
        /// Anti-norm as JSON, e.g. '{"kind":"fkdet"}'.
        #[arg(long)]
        antinorm: Option<String>,
        /// Matrix file, scale file or named analytic scale.
        input: String,
    },
    /// Decide a majorization relation between two scales.
    Relate {
        a: String,
        b: String,
        #[arg(long, default_value = "super_wlog")]
        relation: String,
    },
    /// Run inequality suites and emit one report per line.
    #[command(group(ArgGroup::new("selection").args(["suite", "case"])))]
    Check {
        /// Group of cases: all, theorems, axioms, monotonicity, witnesses.
        #[arg(long)]
        suite: Option<String>,
        /// Single case id; may be repeated.
        #[arg(long)]
        case: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "ANTINORM_SEED", default_value_t = 0)]
        seed: u64,
        /// Dimensions as a range `2-6` or a list `2,4,8`.
        #[arg(long, default_value = "2-6")]
        dims: String,
        #[arg(long, default_value_t = antinorm_core::verify::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Scale `b` for the equivalence case (file or analytic name).
        #[arg(long)]
        scale_b: Option<String>,
    },
    /// Construct and certify unitary witnesses.
    Witness {
        #[arg(long, value_enum)]
        op: WitnessOp,
        /// `convex_super` or `concave_sub` (orbit only).
        #[arg(long)]
        mode: Option<String>,
        /// Scalar function in `t` (orbit and mixed).
        #[arg(long, alias = "g")]
        f: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, env = "ANTINORM_SEED", default_value_t = 0)]
        seed: u64,
        /// Directory receiving one matrix file per unitary.
        #[arg(long)]
        out: Option<PathBuf>,
        a: PathBuf,
        b: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WitnessOp {
    Agm,
    Triangle,
    Dominance,
    Orbit,
    Mixed,
}

impl WitnessOp {
    fn name(self) -> &'static str {
        match self {
            WitnessOp::Agm => "agm",
            WitnessOp::Triangle => "triangle",
            WitnessOp::Dominance => "dominance",
            WitnessOp::Orbit => "orbit",
            WitnessOp::Mixed => "mixed",
        }
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let detail: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("error[E_USAGE]: {}", detail.join(" ").trim_start_matches("error: "));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// Returns whether everything checked passed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Eval { norm, antinorm, input } => cmd_eval(norm.as_deref(), antinorm.as_deref(), &input),
        Command::Relate { a, b, relation } => cmd_relate(&a, &b, &relation),
        Command::Check {
            suite,
            case,
            trials,
            seed,
            dims,
            tol,
            out,
            format,
            jobs,
            scale_b,
        } => {
            let mut cases = case;
            if let Some(s) = suite {
                cases.push(s);
            }
            if cases.is_empty() {
                cases.push("all".into());
            }
            let cfg = SuiteConfig {
                trials,
                dims: parse_dims(&dims)?,
                tolerance: tol,
                seed,
                cases,
                scale_b: scale_b.as_deref().map(load_any_scale).transpose()?,
            };
            cmd_check(&cfg, out.as_deref(), format, jobs)
        }
        Command::Witness {
            op,
            mode,
            f,
            eps,
            seed,
            out,
            a,
            b,
        } => cmd_witness(op, mode.as_deref(), f.as_deref(), eps, seed, out.as_deref(), &a, &b),
    }
}

enum Input {
    Matrix(ComplexMatrix),
    Scale(AnyScale),
}

/// A named analytic scale, a scale file (`{"steps": ...}`) or a matrix file.
fn load_input(source: &str) -> Result<Input> {
    let path = Path::new(source);
    if !path.exists() {
        return match AnalyticScale::named(source) {
            Ok(s) => Ok(Input::Scale(AnyScale::Analytic(s))),
            Err(Error::UnknownScale(_)) => Err(Error::Io(format!("{source}: no such file or named scale"))),
            Err(e) => Err(e),
        };
    }
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return load_matrix(path).map(Input::Matrix);
    }
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("steps").is_some() {
        Ok(Input::Scale(AnyScale::Step(scale_from_json(&text)?)))
    } else {
        load_matrix(path).map(Input::Matrix)
    }
}

fn load_any_scale(source: &str) -> Result<AnyScale> {
    match load_input(source)? {
        Input::Scale(s) => Ok(s),
        Input::Matrix(m) => Ok(AnyScale::Step(spectral_scale(&HermitianMatrix::new(m)?))),
    }
}

fn load_hermitian(path: &Path) -> Result<HermitianMatrix> {
    HermitianMatrix::new(load_matrix(path)?)
}

/// Rounds to 15 significant digits and prints the shortest representation.
fn format_value(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.14e}").parse().expect("formatted float parses");
    rounded.to_string()
}

fn cmd_eval(norm: Option<&str>, antinorm: Option<&str>, input: &str) -> Result<bool> {
    let input = load_input(input)?;
    let value = if let Some(text) = norm {
        let g: SymmetricGauge = serde_json::from_str(text)?;
        match &input {
            Input::Matrix(m) => norm_eval_matrix(&g, m)?,
            Input::Scale(s) => norm_eval(&g, s.as_scale())?,
        }
    } else {
        let spec: AntiNormSpec = serde_json::from_str(antinorm.expect("clap requires one functional"))?;
        match input {
            Input::Matrix(m) => antinorm_eval_matrix(&spec, &HermitianMatrix::new(m)?)?,
            Input::Scale(s) => antinorm_eval(&spec, s.as_scale())?,
        }
    };
    println!("{}", format_value(value));
    Ok(true)
}

fn step_scale(source: &str) -> Result<antinorm_core::spectral::SpectralScale> {
    match load_any_scale(source)? {
        AnyScale::Step(s) => Ok(s),
        AnyScale::Analytic(a) => Err(Error::Unsupported(format!(
            "relations are decided on step scales, got {}",
            a.description()
        ))),
    }
}

fn cmd_relate(a: &str, b: &str, relation: &str) -> Result<bool> {
    let relation: Relation = relation.parse()?;
    let report = relation_check(&step_scale(a)?, &step_scale(b)?, relation)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(report.holds)
}

fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParameter(format!("cannot parse dims `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once('-') {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(num).collect()
}

fn cmd_check(cfg: &SuiteConfig, out: Option<&Path>, format: Format, jobs: Option<usize>) -> Result<bool> {
    let result = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            pool.install(|| run_suite(cfg))?
        }
        None => run_suite(cfg)?,
    };
    let text = match format {
        Format::Json => result.json_lines(),
        Format::Csv => result.summary_csv(),
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(result.all_pass())
}

fn parse_function(source: Option<&str>, op: WitnessOp) -> Result<ScalarFunction> {
    let source = source.ok_or_else(|| Error::InvalidParameter(format!("--op {} needs --f", op.name())))?;
    ScalarFunction::parse_inferred(source)
}

#[allow(clippy::too_many_arguments)]
fn cmd_witness(
    op: WitnessOp,
    mode: Option<&str>,
    f: Option<&str>,
    eps: f64,
    seed: u64,
    out: Option<&Path>,
    a: &Path,
    b: &Path,
) -> Result<bool> {
    let witness: WitnessResult = match op {
        WitnessOp::Agm => agm_witness(&load_hermitian(a)?, &load_hermitian(b)?)?,
        WitnessOp::Dominance => dominance_unitary(&load_hermitian(a)?, &load_hermitian(b)?)?,
        WitnessOp::Triangle => triangle_witness(&load_matrix(a)?, &load_matrix(b)?)?,
        WitnessOp::Orbit => {
            let mode: OrbitMode = mode
                .ok_or_else(|| Error::InvalidParameter("--op orbit needs --mode".into()))?
                .parse()?;
            let f = parse_function(f, op)?;
            orbit_witness_seeded(&load_hermitian(a)?, &load_hermitian(b)?, &f, mode, eps, seed)?
        }
        WitnessOp::Mixed => {
            let g = parse_function(f, op)?;
            mixed_witness_seeded(&load_matrix(a)?, &load_matrix(b)?, &g, eps, seed)?
        }
    };
    let files: Vec<MatrixFile> = witness
        .unitaries
        .iter()
        .map(|u| MatrixFile::from_matrix(u.as_matrix()))
        .collect();
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        for (k, file) in files.iter().enumerate() {
            fs::write(
                dir.join(format!("unitary_{}.json", k + 1)),
                serde_json::to_string(file)?,
            )?;
        }
    }
    let summary = serde_json::json!({
        "op": op.name(),
        "method": witness.method,
        "psd_margin": witness.psd_margin,
        "epsilon_used": witness.epsilon_used,
        "unitaries": files,
    });
    println!("{summary}");
    Ok(true)
}
