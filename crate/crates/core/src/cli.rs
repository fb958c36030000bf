//! `zipf-entropy` command line: `analyze`, `gen` and `sweep`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (empty corpus,
//! insufficient fit points), 3 I/O error. Reports go to stdout (or `--out`),
//! diagnostics to stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, FrequencyTable, TokenRule, TokenizerConfig};
use crate::error::Error;
use crate::freqstats::write_spectrum_csv;
use crate::powerlaw::FitRange;
use crate::report::{analyze, Analysis, AnalysisConfig, DEFAULT_CHAIN_TOLERANCE};
use crate::zipfgen::{self, generate_spectrum, Mode, SyntheticSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zipf-entropy", version, about = "Word-frequency spectra, entropy and power-law entropy bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze text from files (or stdin) and report spectrum, fit, entropy and bound.
    Analyze(AnalyzeArgs),
    /// Write a deterministic synthetic corpus or spectrum.
    Gen(GenArgs),
    /// Evaluate entropy against the bound over a grid of (a, b).
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFormat {
    /// Corpus text, whitespace-separated tokens.
    Text,
    /// Spectrum rows `k,F(k)`.
    Csv,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input files; none or `-` reads stdin.
    pub inputs: Vec<PathBuf>,
    /// Case-fold tokens (default).
    #[arg(long, overrides_with = "no_lowercase")]
    pub lowercase: bool,
    /// Keep token case.
    #[arg(long, overrides_with = "lowercase")]
    pub no_lowercase: bool,
    #[arg(long, value_enum, default_value_t = TokenRule::UnicodeWords)]
    pub token_rule: TokenRule,
    #[arg(long, default_value_t = NonZeroUsize::MIN)]
    pub min_token_len: NonZeroUsize,
    /// Smallest k included in the power-law fit.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub fit_kmin: u64,
    /// Largest k included in the power-law fit (default: largest observed).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub fit_kmax: Option<u64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Also report entropy in bits.
    #[arg(long)]
    pub bits: bool,
    /// One report per input file instead of pooling.
    #[arg(long)]
    pub per_file: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl AnalyzeArgs {
    fn tokenizer(&self) -> TokenizerConfig {
        TokenizerConfig {
            lowercase: !self.no_lowercase,
            min_token_length: self.min_token_len,
            token_rule: self.token_rule,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Slope a (>= 1). Accepts `ln<x>` for the natural log of x.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub a: f64,
    /// Intercept b (>= 0). Accepts `ln<x>` for the natural log of x.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, value_enum, default_value_t = Mode::RoundedInteger)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = GenFormat::Text)]
    pub format: GenFormat,
    /// Truncate the k domain.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k_cap: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated slopes.
    #[arg(long, value_parser = parse_grid, default_value = "", allow_hyphen_values = true)]
    pub a: Grid,
    /// Comma-separated intercepts.
    #[arg(long, value_parser = parse_grid, default_value = "", allow_hyphen_values = true)]
    pub b: Grid,
    #[arg(long, value_enum, default_value_t = Mode::ExactReal)]
    pub mode: Mode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Grid(pub Vec<f64>);

/// A real number, or `ln<x>` for `ln(x)`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.strip_prefix("ln") {
        Some(rest) => rest
            .trim_start_matches(['(', ' '])
            .trim_end_matches(')')
            .parse::<f64>()
            .map(f64::ln),
        None => s.parse::<f64>(),
    }
    .map_err(|e| format!("`{s}`: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    if s.trim().is_empty() {
        return Ok(Grid::default());
    }
    s.split(',').map(parse_real).collect::<Result<_, _>>().map(Grid)
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(context: impl std::fmt::Display, e: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{context}: {e}"),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::EmptyCorpus | Error::EmptySpectrum | Error::InsufficientPoints { .. } => EXIT_DATA,
        Error::InapplicableBound { .. } | Error::InvalidSpectrum(_) => EXIT_DATA,
        Error::InvalidParameter(_) | Error::RealValuedSpectrum => EXIT_USAGE,
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("zipf-entropy: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command) -> Result<i32, Failure> {
    match cmd {
        Command::Analyze(args) => run_analyze(args),
        Command::Gen(args) => run_gen(args),
        Command::Sweep(args) => run_sweep(args),
    }
}

fn with_output<F>(out: Option<&Path>, body: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::io(format!("cannot write {}", path.display()), e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::io(format!("cannot write {}", path.display()), e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w).and_then(|_| w.flush()).map_err(|e| Failure::io("cannot write stdout", e))
        }
    }
}

fn is_stdin(p: &Path) -> bool {
    p.as_os_str() == "-"
}

/// Read and count every input, preserving input order.
fn count_inputs(args: &AnalyzeArgs, tokenizer: &TokenizerConfig) -> Result<Vec<(String, FrequencyTable)>, Failure> {
    if args.inputs.is_empty() {
        let text = corpus::read_to_string_lossy(io::stdin().lock()).map_err(|e| Failure::io("cannot read stdin", e))?;
        return Ok(vec![(
            "-".to_owned(),
            corpus::count_frequencies(corpus::tokenize(&text, tokenizer)),
        )]);
    }
    let files: Vec<&PathBuf> = args.inputs.iter().filter(|p| !is_stdin(p)).collect();
    let mut file_tables = corpus::count_files(&files, tokenizer)
        .map_err(|(p, e)| Failure::io(format!("cannot read {}", p.display()), e))?
        .into_iter();
    let mut stdin_table = None;
    let mut out = Vec::with_capacity(args.inputs.len());
    for p in &args.inputs {
        let table = if is_stdin(p) {
            if stdin_table.is_none() {
                let text = corpus::read_to_string_lossy(io::stdin().lock())
                    .map_err(|e| Failure::io("cannot read stdin", e))?;
                stdin_table = Some(corpus::count_frequencies(corpus::tokenize(&text, tokenizer)));
            }
            // stdin can only be consumed once; later `-` arguments see nothing
            std::mem::take(&mut stdin_table).unwrap_or_default()
        } else {
            file_tables.next().expect("one table per file")
        };
        out.push((p.display().to_string(), table));
    }
    Ok(out)
}

fn run_analyze(args: &AnalyzeArgs) -> Result<i32, Failure> {
    let tokenizer = args.tokenizer();
    let config = AnalysisConfig {
        tokenizer,
        fit_range: FitRange {
            k_min: args.fit_kmin,
            k_max: args.fit_kmax,
        },
        bits: args.bits,
        chain_tolerance: DEFAULT_CHAIN_TOLERANCE,
    };
    if let Some(hi) = args.fit_kmax {
        if hi < args.fit_kmin {
            return Err(Failure::usage(format!("--fit-kmax {hi} is below --fit-kmin {}", args.fit_kmin)));
        }
    }
    let tables = count_inputs(args, &tokenizer)?;

    let groups: Vec<(Vec<String>, FrequencyTable)> = if args.per_file {
        tables.into_iter().map(|(name, t)| (vec![name], t)).collect()
    } else {
        let names = tables.iter().map(|(n, _)| n.clone()).collect();
        let pooled = corpus::merge(tables.iter().map(|(_, t)| t));
        vec![(names, pooled)]
    };

    let mut analyses: Vec<Analysis> = Vec::with_capacity(groups.len());
    let mut code = EXIT_OK;
    for (names, table) in groups {
        let label = names.join(", ");
        match analyze(&table, names, &config) {
            Ok(a) => {
                if let Some(e) = &a.fit_error {
                    eprintln!("zipf-entropy: {label}: {e}");
                    code = code.max(error_code(e));
                } else if !a.report.bound.applicable {
                    eprintln!("zipf-entropy: {label}: bound inapplicable (a < 1), reported only");
                }
                analyses.push(a);
            }
            Err(e) => {
                if !args.per_file {
                    return Err(Failure::data(format!("{label}: {e}")));
                }
                eprintln!("zipf-entropy: {label}: {e}");
                code = code.max(error_code(&e));
            }
        }
    }

    with_output(args.out.as_deref(), |w| write_analyses(w, &analyses, args.format, args.per_file))?;
    Ok(code)
}

fn write_analyses(w: &mut dyn Write, analyses: &[Analysis], format: ReportFormat, per_file: bool) -> io::Result<()> {
    match format {
        ReportFormat::Json => {
            if per_file {
                let reports: Vec<_> = analyses.iter().map(|a| &a.report).collect();
                serde_json::to_writer_pretty(&mut *w, &reports)?;
            } else if let Some(a) = analyses.first() {
                serde_json::to_writer_pretty(&mut *w, &a.report)?;
            }
            writeln!(w)
        }
        ReportFormat::Csv => {
            if per_file {
                let mut csv = csv::Writer::from_writer(&mut *w);
                csv.write_record(["file", "k", "F(k)"])?;
                for a in analyses {
                    let name = a.report.config.inputs.join(",");
                    for (k, f) in a.spectrum.points() {
                        csv.write_record([name.as_str(), &k.to_string(), &f.to_string()])?;
                    }
                }
                csv.flush()
            } else if let Some(a) = analyses.first() {
                write_spectrum_csv(&a.spectrum, &mut *w)
            } else {
                Ok(())
            }
        }
        ReportFormat::Text => {
            for (i, a) in analyses.iter().enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                write!(w, "{}", a.report)?;
            }
            Ok(())
        }
    }
}

fn run_gen(args: &GenArgs) -> Result<i32, Failure> {
    let mut spec = SyntheticSpec::new(args.a, args.b, args.mode).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(cap) = args.k_cap.and_then(std::num::NonZeroU64::new) {
        spec = spec.with_k_cap(cap);
    }
    let generated = generate_spectrum(&spec).map_err(|e| Failure {
        code: error_code(&e),
        message: e.to_string(),
    })?;
    match args.format {
        GenFormat::Csv => with_output(args.out.as_deref(), |w| generated.write_csv(w))?,
        GenFormat::Text => {
            let tokens = generated
                .to_corpus()
                .map_err(|e| Failure::usage(format!("{e}; use --mode rounded or --format csv")))?;
            with_output(args.out.as_deref(), |w| zipfgen::write_corpus(&tokens, w))?;
        }
    }
    Ok(EXIT_OK)
}

fn run_sweep(args: &SweepArgs) -> Result<i32, Failure> {
    let rows = zipfgen::sweep(&args.a.0, &args.b.0, args.mode);
    for row in &rows {
        if let Err(e) = &row.outcome {
            eprintln!("zipf-entropy: sweep cell a={} b={}: {e}", row.a, row.b);
        }
    }
    with_output(args.out.as_deref(), |w| zipfgen::write_sweep_csv(&rows, w))?;
    Ok(EXIT_OK)
}
