//! Command-line front end.
//!
//! Every command is a pure function of its flags: JSON artifacts embed the
//! configuration, seed, tool version and measure label, and contain no
//! timestamps, so identical invocations produce byte-identical files.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` verification
//! failure, `3` Catalan hypothesis violated.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::clifford::MultiIndex;
use crate::error::Error;
use crate::fusion::poincare_coefficients;
use crate::haar::{unitary_measure_label, SeededSampler};
use crate::linalg::{nested_entries, ComplexMatrix};
use crate::magic::{
    block_4x4, character, character_diagonal_exact, character_spectrum_exact, clifford_magic,
    glue_identity, permutation_magic, two_by_two, verify_magic, MagicMatrix,
};
use crate::moments::{catalan, estimate_phi_moments, hypothesis_report, spectral_histogram};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_HYPOTHESIS_VIOLATED: i32 = 3;

const TOOL: &str = "clifford-magic";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "Clifford-algebra magic biunitaries and Catalan moment checks")]
pub struct Cli {
    /// Worker threads for Monte Carlo runs (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a magic matrix and check the magic biunitary axioms.
    Verify(VerifyArgs),
    /// Sample one x and compare the character with its exact diagonal.
    Character(CharacterArgs),
    /// Monte Carlo estimates of the character moments against exact values.
    Moments(MomentsArgs),
    /// Histogram of the pooled character spectrum.
    Spectrum(SpectrumArgs),
    /// Multiplicity of r_0 in (r_0 + r_1)^k from the SO(3) fusion rules.
    Fusion(FusionArgs),
    /// Full Catalan hypothesis report with a verdict.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Clifford,
    Permutation,
    TwoByTwo,
    #[value(name = "block-4x4")]
    #[serde(rename = "block-4x4")]
    Block4x4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Construction::Clifford)]
    pub construction: Construction,
    /// Clifford rank s (clifford construction).
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    /// Number of points (permutation construction).
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Size of an identity block glued on after construction.
    #[arg(long, default_value_t = 0)]
    pub glue: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = positive_f64)]
    pub tolerance: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CharacterArgs {
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = positive_f64)]
    pub tolerance: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = crate::moments::DEFAULT_BINS, value_parser = positive_usize)]
    pub bins: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; metadata goes to `<output>.json`. Without it the CSV is printed.
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FusionArgs {
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    /// Monte Carlo samples attached to the report (0 for exact only).
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report as JSON.
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(x) => Ok(x),
        Err(e) => Err(e.to_string()),
    }
}

/// Input or I/O problem reported on stderr with [`EXIT_USAGE`].
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut buffer)),
            Err(e) => Err(Failure(e.to_string())),
        },
        None => dispatch(&cli.command, &mut buffer),
    };
    let outcome = outcome.and_then(|code| {
        out.write_all(&buffer)
            .map(|()| code)
            .map_err(|e| Failure(e.to_string()))
    });
    match outcome {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: &Command, out: &mut Vec<u8>) -> Outcome {
    match command {
        Command::Verify(a) => verify(a, out),
        Command::Character(a) => character_cmd(a, out),
        Command::Moments(a) => moments(a, out),
        Command::Spectrum(a) => spectrum(a, out),
        Command::Fusion(a) => fusion(a, out),
        Command::Report(a) => report(a, out),
    }
}

fn envelope(
    command: &str,
    config: &impl Serialize,
    seed: Option<u64>,
    measure: &str,
    result: Value,
) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "config": config,
        "seed": seed,
        "measure_label": measure,
        "result": result,
    })
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure(e.to_string())),
    }
}

fn json_only(o: &OutputArgs, command: &str) -> Result<(), Failure> {
    if o.format == Format::Csv {
        return Err(Failure(format!("{command} has no CSV output")));
    }
    Ok(())
}

/// `diag(1, 0)`.
fn sample_projection_p() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
}

/// Projection onto `(1, 1) / √2`.
fn sample_projection_q() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).expect("2x2 entries")
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    json_only(&a.out, "verify")?;
    let (v, measure, element): (MagicMatrix, String, Option<Vec<Complex64>>) = match a.construction
    {
        Construction::Clifford => {
            let x = SeededSampler::new(a.seed).unitary(a.s, 0)?;
            let v = clifford_magic(&x, a.tolerance)?;
            (v, unitary_measure_label(a.s), Some(x.coeffs().to_vec()))
        }
        Construction::Permutation => (
            permutation_magic(a.n)?,
            "none (deterministic construction)".into(),
            None,
        ),
        Construction::TwoByTwo => (
            two_by_two(&sample_projection_p())?,
            "none (built-in projections)".into(),
            None,
        ),
        Construction::Block4x4 => (
            block_4x4(&sample_projection_p(), &sample_projection_q())?,
            "none (built-in projections)".into(),
            None,
        ),
    };
    let v = if a.glue > 0 {
        glue_identity(&v, a.glue)
    } else {
        v
    };
    let report = verify_magic(&v, a.tolerance);
    let result = json!({
        "x": element.map(|c| c.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()),
        "report": report,
        "matrix": v,
    });
    let doc = envelope("verify", a, Some(a.seed), &measure, result);
    emit(&to_json(&doc), a.out.output.as_deref(), out)?;
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn character_cmd(a: &CharacterArgs, out: &mut dyn Write) -> Outcome {
    json_only(&a.out, "character")?;
    let x = SeededSampler::new(a.seed).unitary(a.s, 0)?;
    let chi = character(&clifford_magic(&x, a.tolerance)?);
    let diagonal = character_diagonal_exact(&x)?;
    let spectrum = character_spectrum_exact(&x)?;
    let defect = chi.max_abs_diff(&ComplexMatrix::from_real_diagonal(&diagonal))?;
    let labels: Vec<String> = MultiIndex::all(a.s)?.map(|i| i.to_string()).collect();
    let result = json!({
        "basis": labels,
        "x": x.coeffs().iter().map(|z| z.re).collect::<Vec<_>>(),
        "character": nested_entries(&chi),
        "exact_diagonal": diagonal,
        "exact_spectrum": spectrum,
        "defect": defect,
        "tolerance": a.tolerance,
        "diagonal": defect <= a.tolerance,
    });
    let doc = envelope(
        "character",
        a,
        Some(a.seed),
        &unitary_measure_label(a.s),
        result,
    );
    emit(&to_json(&doc), a.out.output.as_deref(), out)?;
    Ok(if defect <= a.tolerance {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn moments(a: &MomentsArgs, out: &mut dyn Write) -> Outcome {
    let report = estimate_phi_moments(a.s, a.k_max, a.samples, &SeededSampler::new(a.seed))?;
    let text = match a.out.format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let result = serde_json::to_value(&report).expect("report serializes");
            to_json(&envelope(
                "moments",
                a,
                Some(a.seed),
                &report.measure_label,
                result,
            ))
        }
    };
    emit(&text, a.out.output.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Outcome {
    let hist = spectral_histogram(a.s, a.samples, a.bins, &SeededSampler::new(a.seed))?;
    let csv = hist.to_csv();
    match &a.output {
        None => emit(&csv, None, out)?,
        Some(path) => {
            emit(&csv, Some(path), out)?;
            let result = serde_json::to_value(&hist).expect("histogram serializes");
            let doc = envelope("spectrum", a, Some(a.seed), &hist.measure_label, result);
            let mut meta = path.clone().into_os_string();
            meta.push(".json");
            emit(&to_json(&doc), Some(Path::new(&meta)), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn fusion(a: &FusionArgs, out: &mut dyn Write) -> Outcome {
    let coeffs = poincare_coefficients(a.k_max);
    let rows: Vec<(u32, String, String)> = coeffs
        .iter()
        .enumerate()
        .map(|(k, m)| (k as u32, m.to_string(), catalan(k as u32).to_string()))
        .collect();
    let text = match a.out.format {
        Format::Csv => {
            let mut s = String::from("k,multiplicity,catalan,equal\n");
            for (k, m, c) in &rows {
                s.push_str(&format!("{k},{m},{c},{}\n", m == c));
            }
            s
        }
        Format::Json => {
            let result = json!({
                "coefficients": rows.iter().map(|(_, m, _)| m).collect::<Vec<_>>(),
                "catalan": rows.iter().map(|(_, _, c)| c).collect::<Vec<_>>(),
                "all_equal": rows.iter().all(|(_, m, c)| m == c),
            });
            to_json(&envelope(
                "fusion",
                a,
                None,
                "Haar state on SO(3) (fusion rules)",
                result,
            ))
        }
    };
    emit(&text, a.out.output.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn report(a: &ReportArgs, out: &mut dyn Write) -> Outcome {
    let r = hypothesis_report(a.s, a.k_max, a.samples, &SeededSampler::new(a.seed))?;
    emit(&r.to_text(), None, out)?;
    if let Some(path) = &a.output {
        let result = serde_json::to_value(&r).expect("report serializes");
        let doc = envelope("report", a, Some(a.seed), &r.measure_label, result);
        emit(&to_json(&doc), Some(path), out)?;
    }
    Ok(if r.satisfied() {
        EXIT_OK
    } else {
        EXIT_HYPOTHESIS_VIOLATED
    })
}
