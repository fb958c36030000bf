//! Frequency-of-frequencies spectra.
//!
//! `F(k)` is the number of distinct words that occur exactly `k` times. Only
//! `k` with `F(k) >= 1` are stored; there are no zero gaps, which keeps
//! `ln F(k)` defined for every stored point.
//!
//! Spectra derived from a corpus have whole counts (`FreqSpectrum<u64>`).
//! Synthetic spectra that follow the power law exactly carry real-valued
//! counts (`FreqSpectrum<f64>`); those exist for oracle use and cannot be
//! turned back into a corpus.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use crate::corpus::FrequencyTable;
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// A count type usable as `F(k)`.
pub trait Count: Copy + PartialOrd + fmt::Display + fmt::Debug + Send + Sync + 'static {
    fn to_f64(self) -> f64;
}

impl Count for u64 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Count for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqSpectrum<C = u64> {
    points: BTreeMap<u64, C>,
    total_tokens: C,
    vocab_size: C,
}

impl<C: Count> FreqSpectrum<C> {
    /// `(k, F(k))` in ascending `k`.
    pub fn points(&self) -> impl DoubleEndedIterator<Item = (u64, C)> + ExactSizeIterator + '_ {
        self.points.iter().map(|(&k, &f)| (k, f))
    }

    pub fn get(&self, k: u64) -> Option<C> {
        self.points.get(&k).copied()
    }

    /// Number of stored `k`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `N = Σ k·F(k)`.
    pub fn total_tokens(&self) -> C {
        self.total_tokens
    }

    /// `Σ F(k)`.
    pub fn vocab_size(&self) -> C {
        self.vocab_size
    }

    /// Largest stored `k` (`M`), or 0 when empty.
    pub fn max_k(&self) -> u64 {
        self.points.keys().next_back().copied().unwrap_or(0)
    }

    /// Smallest stored `k`, or 0 when empty.
    pub fn min_k(&self) -> u64 {
        self.points.keys().next().copied().unwrap_or(0)
    }
}

impl FreqSpectrum<u64> {
    /// Build a whole-count spectrum. Points with `F(k) = 0` are skipped;
    /// `k = 0` and repeated `k` are rejected.
    pub fn from_counts<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut map = BTreeMap::new();
        let mut total: u64 = 0;
        let mut vocab: u64 = 0;
        for (k, f) in points {
            if k == 0 {
                return Err(Error::InvalidSpectrum("k must be >= 1".into()));
            }
            if f == 0 {
                continue;
            }
            if map.insert(k, f).is_some() {
                return Err(Error::InvalidSpectrum(format!("repeated k = {k}")));
            }
            let mass = k
                .checked_mul(f)
                .and_then(|m| total.checked_add(m))
                .ok_or_else(|| Error::InvalidSpectrum("token total overflows u64".into()))?;
            total = mass;
            vocab += f;
        }
        Ok(FreqSpectrum {
            points: map,
            total_tokens: total,
            vocab_size: vocab,
        })
    }
}

impl FreqSpectrum<f64> {
    /// Build a real-valued spectrum; every `F(k)` must be finite and positive.
    pub fn from_real<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut map = BTreeMap::new();
        for (k, f) in points {
            if k == 0 {
                return Err(Error::InvalidSpectrum("k must be >= 1".into()));
            }
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::InvalidSpectrum(format!("F({k}) = {f} is not a positive finite value")));
            }
            if map.insert(k, f).is_some() {
                return Err(Error::InvalidSpectrum(format!("repeated k = {k}")));
            }
        }
        let total_tokens = compensated_sum(map.iter().map(|(&k, &f)| k as f64 * f));
        let vocab_size = compensated_sum(map.values().copied());
        Ok(FreqSpectrum {
            points: map,
            total_tokens,
            vocab_size,
        })
    }
}

impl From<&FreqSpectrum<u64>> for FreqSpectrum<f64> {
    fn from(s: &FreqSpectrum<u64>) -> Self {
        FreqSpectrum {
            points: s.points.iter().map(|(&k, &f)| (k, f as f64)).collect(),
            total_tokens: s.total_tokens as f64,
            vocab_size: s.vocab_size as f64,
        }
    }
}

/// Histogram of a table's counts.
pub fn freq_of_freq(table: &FrequencyTable) -> Result<FreqSpectrum<u64>> {
    if table.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut points: BTreeMap<u64, u64> = BTreeMap::new();
    for c in table.counts() {
        *points.entry(c).or_insert(0) += 1;
    }
    Ok(FreqSpectrum {
        points,
        total_tokens: table.total_tokens(),
        vocab_size: table.vocab_size() as u64,
    })
}

/// `(ln k, ln F(k))` for each stored point, ascending in `k`.
pub fn spectrum_to_points<C: Count>(spec: &FreqSpectrum<C>) -> Vec<(f64, f64)> {
    spec.points()
        .map(|(k, f)| ((k as f64).ln(), f.to_f64().ln()))
        .collect()
}

/// Write `k,F(k)` rows (with that header line) in ascending `k`.
pub fn write_spectrum_csv<C: Count, W: io::Write>(spec: &FreqSpectrum<C>, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "F(k)"])?;
    for (k, f) in spec.points() {
        w.write_record([k.to_string(), f.to_string()])?;
    }
    w.flush()
}
