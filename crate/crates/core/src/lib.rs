//! Corpus statistics around a power-law entropy bound.
//!
//! The pipeline is
//!
//! 1. [`corpus`]: tokenize text and count word frequencies `fr(w)`;
//! 2. [`freqstats`]: build the frequency-of-frequencies spectrum `F(k)`;
//! 3. [`powerlaw`]: fit `ln F(k) = -a·ln k + b` by least squares;
//! 4. [`entropy_bound`]: measure entropy, evaluate the bound
//!    `e^{b(1-1/a)}·(b/a + 1)` and check its intermediate inequalities;
//! 5. [`report`]: assemble everything into an [`AnalysisReport`].
//!
//! [`zipfgen`] produces synthetic spectra that follow the law exactly (or
//! rounded to whole counts), used to exercise the bound end to end.

pub mod cli;
pub mod corpus;
pub mod entropy_bound;
mod error;
pub mod freqstats;
mod numeric;
pub mod powerlaw;
pub mod report;
pub mod zipfgen;

pub use corpus::{count_frequencies, merge, tokenize, FrequencyTable, TokenRule, TokenizerConfig};
pub use entropy_bound::{
    chain_check, entropy, entropy_from_spectrum, theorem_bound, BoundReport, ChainDiagnostics, EntropyValue,
};
pub use error::{Error, Result};
pub use freqstats::{freq_of_freq, spectrum_to_points, FreqSpectrum};
pub use powerlaw::{fit_loglog, predicted_f, FitRange, PowerLawFit};
pub use report::{analyze, AnalysisConfig, AnalysisReport};
pub use zipfgen::{generate_spectrum, spectrum_to_corpus, sweep, Mode, SyntheticSpec, SyntheticSpectrum};
