//! The end-to-end analysis and its machine-readable report.
//!
//! Field layout is described by `schema/analysis_report.schema.json`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{FrequencyTable, TokenizerConfig};
use crate::entropy_bound::{chain_check, entropy, BoundReport, ChainDiagnostics, InequalityCheck};
use crate::error::{Error, Result};
use crate::freqstats::{freq_of_freq, FreqSpectrum};
use crate::powerlaw::{fit_loglog, FitRange, PowerLawFit};

/// Chain tolerance used by `analyze`; results are informational on real text.
pub const DEFAULT_CHAIN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub tokenizer: TokenizerConfig,
    pub fit_range: FitRange,
    pub bits: bool,
    pub chain_tolerance: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            tokenizer: TokenizerConfig::default(),
            fit_range: FitRange::default(),
            bits: false,
            chain_tolerance: DEFAULT_CHAIN_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub points: usize,
    pub k_min: u64,
    pub k_max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FitSection {
    Fitted(PowerLawFit),
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSection {
    pub applicable: bool,
    pub value_nats: Option<f64>,
    pub margin_nats: Option<f64>,
    /// `margin_nats >= 0`.
    pub holds: Option<bool>,
    /// Why the bound was not evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSection {
    pub tolerance: f64,
    pub sandwich_lo: InequalityCheck,
    pub sandwich_hi: InequalityCheck,
    pub n_bound: InequalityCheck,
    pub ratio: InequalityCheck,
}

impl From<ChainDiagnostics> for ChainSection {
    fn from(d: ChainDiagnostics) -> Self {
        ChainSection {
            tolerance: d.tolerance,
            sandwich_lo: d.sandwich_lower,
            sandwich_hi: d.sandwich_upper,
            n_bound: d.n_bound,
            ratio: d.ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub inputs: Vec<String>,
    pub tokenizer: TokenizerConfig,
    pub fit_k_min: u64,
    pub fit_k_max: Option<u64>,
    pub bits: bool,
    pub chain_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n_tokens: u64,
    pub vocab_size: u64,
    pub max_frequency: u64,
    pub spectrum: SpectrumSummary,
    pub entropy_nats: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy_bits: Option<f64>,
    pub fit: FitSection,
    pub bound: BoundSection,
    pub chain: Option<ChainSection>,
    pub config: ConfigEcho,
}

impl AnalysisReport {
    pub fn fit(&self) -> Option<&PowerLawFit> {
        match &self.fit {
            FitSection::Fitted(f) => Some(f),
            FitSection::Failed { .. } => None,
        }
    }

    pub fn fit_error(&self) -> Option<&str> {
        match &self.fit {
            FitSection::Fitted(_) => None,
            FitSection::Failed { error } => Some(error),
        }
    }
}

/// Result of [`analyze`]: the report plus the spectrum it summarizes.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub spectrum: FreqSpectrum<u64>,
    /// Set when the power-law fit could not be computed.
    pub fit_error: Option<Error>,
}

/// Spectrum, fit, entropy, bound and chain for one pooled table.
///
/// An empty table is an error. A failed fit is not: it is recorded in the
/// report and in [`Analysis::fit_error`].
pub fn analyze(table: &FrequencyTable, inputs: Vec<String>, config: &AnalysisConfig) -> Result<Analysis> {
    let spectrum = freq_of_freq(table)?;
    let h = entropy(table)?;

    let fit = fit_loglog(&spectrum, config.fit_range);
    let (fit_section, bound, chain, fit_error) = match fit {
        Ok(fit) => {
            let report = BoundReport::new(fit.a, fit.b, h);
            let bound = BoundSection {
                applicable: report.applicable,
                value_nats: report.bound_nats,
                margin_nats: report.margin_nats,
                holds: report.holds(),
                reason: (!report.applicable).then(|| format!("fitted slope a = {} is below 1", fit.a)),
            };
            let chain = if report.applicable {
                Some(chain_check(&spectrum, fit.a, fit.b, config.chain_tolerance)?.into())
            } else {
                None
            };
            (FitSection::Fitted(fit), bound, chain, None)
        }
        Err(e) => {
            let bound = BoundSection {
                applicable: false,
                value_nats: None,
                margin_nats: None,
                holds: None,
                reason: Some("no power-law fit".to_owned()),
            };
            (FitSection::Failed { error: e.to_string() }, bound, None, Some(e))
        }
    };

    let report = AnalysisReport {
        n_tokens: table.total_tokens(),
        vocab_size: table.vocab_size() as u64,
        max_frequency: table.max_frequency(),
        spectrum: SpectrumSummary {
            points: spectrum.len(),
            k_min: spectrum.min_k(),
            k_max: spectrum.max_k(),
        },
        entropy_nats: h.nats,
        entropy_bits: config.bits.then_some(h.bits),
        fit: fit_section,
        bound,
        chain,
        config: ConfigEcho {
            inputs,
            tokenizer: config.tokenizer,
            fit_k_min: config.fit_range.k_min,
            fit_k_max: config.fit_range.k_max,
            bits: config.bits,
            chain_tolerance: config.chain_tolerance,
        },
    };
    Ok(Analysis {
        report,
        spectrum,
        fit_error,
    })
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_owned(), |x| x.to_string())
}

fn check_line(f: &mut fmt::Formatter<'_>, name: &str, c: &InequalityCheck) -> fmt::Result {
    writeln!(f, "  {name:<12} {:<5} slack {}", if c.ok { "ok" } else { "FAIL" }, c.slack)
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs:        {}", self.config.inputs.join(", "))?;
        writeln!(f, "tokens (N):    {}", self.n_tokens)?;
        writeln!(f, "vocabulary:    {}", self.vocab_size)?;
        writeln!(f, "max freq (M):  {}", self.max_frequency)?;
        writeln!(
            f,
            "spectrum:      {} points, k in [{}, {}]",
            self.spectrum.points, self.spectrum.k_min, self.spectrum.k_max
        )?;
        write!(f, "entropy:       {} nats", self.entropy_nats)?;
        if let Some(bits) = self.entropy_bits {
            write!(f, " ({bits} bits)")?;
        }
        writeln!(f)?;
        match &self.fit {
            FitSection::Fitted(fit) => writeln!(
                f,
                "fit:           a = {}, b = {}, rmse = {} ({} points, k in [{}, {}])",
                fit.a, fit.b, fit.rmse, fit.points_used, fit.k_min, fit.k_max
            )?,
            FitSection::Failed { error } => writeln!(f, "fit:           error: {error}")?,
        }
        if self.bound.applicable {
            writeln!(
                f,
                "bound:         {} nats, margin {} ({})",
                opt(self.bound.value_nats),
                opt(self.bound.margin_nats),
                if self.bound.holds == Some(true) { "holds" } else { "violated" }
            )?;
        } else {
            writeln!(f, "bound:         inapplicable ({})", self.bound.reason.as_deref().unwrap_or("-"))?;
        }
        if let Some(chain) = &self.chain {
            writeln!(f, "chain (tolerance {}):", chain.tolerance)?;
            check_line(f, "sandwich_lo", &chain.sandwich_lo)?;
            check_line(f, "sandwich_hi", &chain.sandwich_hi)?;
            check_line(f, "n_bound", &chain.n_bound)?;
            check_line(f, "ratio", &chain.ratio)?;
        }
        Ok(())
    }
}
