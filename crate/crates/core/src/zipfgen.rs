//! Deterministic synthetic spectra that follow `F(k) = e^b·k^{-a}`.
//!
//! Both modes use the domain `k = 1..=floor(e^{b/a})` (optionally capped),
//! which is exactly where the model value `e^b·k^{-a}` stays at or above 1.
//!
//! * [`Mode::ExactReal`] stores the model values themselves. The bound and
//!   every intermediate inequality hold for these spectra, which makes them
//!   the reference oracle.
//! * [`Mode::RoundedInteger`] rounds half-up to whole counts so the spectrum
//!   can be materialized as an actual corpus. Rounding perturbs the law, so
//!   chain checks on these spectra are diagnostics with a wider tolerance.

use std::io;
use std::num::NonZeroU64;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy_bound::{chain_check, entropy_from_spectrum, theorem_bound, ChainDiagnostics};
use crate::error::{Error, Result};
use crate::freqstats::{Count, FreqSpectrum};

/// Largest synthetic domain generated without an explicit `k_cap`.
pub const MAX_GENERATED_K: u64 = 10_000_000;

/// Relative slack when flooring `e^{b/a}`, so that e.g. `b = ln 4, a = 1`
/// yields 4 rather than 3 when `exp(ln 4)` lands one ulp low.
const DOMAIN_EPS: f64 = 1e-12;

/// Chain tolerance for exact spectra.
pub const EXACT_CHAIN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[value(name = "exact", alias = "exact-real")]
    ExactReal,
    #[value(name = "rounded", alias = "rounded-integer")]
    RoundedInteger,
}

impl Mode {
    /// Chain-check tolerance used for spectra from this mode. Rounded spectra
    /// get `0.5·max(1, e^{b/a})`, report-only.
    pub fn chain_tolerance(self, a: f64, b: f64) -> f64 {
        match self {
            Mode::ExactReal => EXACT_CHAIN_TOLERANCE,
            Mode::RoundedInteger => 0.5 * (b / a).exp().max(1.0),
        }
    }
}

/// Generator parameters. Construct with [`SyntheticSpec::new`], which
/// enforces `a >= 1` and `b >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    a: f64,
    b: f64,
    mode: Mode,
    k_cap: Option<NonZeroU64>,
}

impl SyntheticSpec {
    pub fn new(a: f64, b: f64, mode: Mode) -> Result<Self> {
        if !(a.is_finite() && a >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "slope a = {a} violates the hypothesis a >= 1"
            )));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParameter(format!("intercept b = {b} must be finite and >= 0")));
        }
        Ok(SyntheticSpec { a, b, mode, k_cap: None })
    }

    pub fn with_k_cap(mut self, cap: NonZeroU64) -> Self {
        self.k_cap = Some(cap);
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Last `k` of the generated domain.
    pub fn k_limit(&self) -> u64 {
        let natural = ((self.b / self.a).exp() * (1.0 + DOMAIN_EPS)).floor();
        let natural = if natural >= u64::MAX as f64 { u64::MAX } else { natural as u64 };
        match self.k_cap {
            Some(cap) => natural.min(cap.get()),
            None => natural,
        }
    }

    fn model(&self, k: u64) -> f64 {
        (self.b - self.a * (k as f64).ln()).exp()
    }
}

/// A generated spectrum in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticSpectrum {
    Exact(FreqSpectrum<f64>),
    Rounded(FreqSpectrum<u64>),
}

impl SyntheticSpectrum {
    /// Materialize as a token stream; only whole-count spectra qualify.
    pub fn to_corpus(&self) -> Result<Vec<String>> {
        match self {
            SyntheticSpectrum::Exact(_) => Err(Error::RealValuedSpectrum),
            SyntheticSpectrum::Rounded(s) => Ok(spectrum_to_corpus(s)),
        }
    }

    pub fn as_real(&self) -> FreqSpectrum<f64> {
        match self {
            SyntheticSpectrum::Exact(s) => s.clone(),
            SyntheticSpectrum::Rounded(s) => s.into(),
        }
    }

    pub fn max_k(&self) -> u64 {
        match self {
            SyntheticSpectrum::Exact(s) => s.max_k(),
            SyntheticSpectrum::Rounded(s) => s.max_k(),
        }
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        match self {
            SyntheticSpectrum::Exact(s) => crate::freqstats::write_spectrum_csv(s, out),
            SyntheticSpectrum::Rounded(s) => crate::freqstats::write_spectrum_csv(s, out),
        }
    }
}

pub fn generate_spectrum(spec: &SyntheticSpec) -> Result<SyntheticSpectrum> {
    let k_limit = spec.k_limit();
    if spec.k_cap.is_none() && k_limit > MAX_GENERATED_K {
        return Err(Error::InvalidParameter(format!(
            "domain 1..={k_limit} exceeds {MAX_GENERATED_K} points; pass a k cap"
        )));
    }
    let out = match spec.mode {
        Mode::ExactReal => SyntheticSpectrum::Exact(FreqSpectrum::from_real(
            (1..=k_limit).map(|k| (k, spec.model(k))),
        )?),
        Mode::RoundedInteger => SyntheticSpectrum::Rounded(FreqSpectrum::from_counts(
            (1..=k_limit).map(|k| (k, (spec.model(k) + 0.5).floor() as u64)),
        )?),
    };
    let empty = match &out {
        SyntheticSpectrum::Exact(s) => s.is_empty(),
        SyntheticSpectrum::Rounded(s) => s.is_empty(),
    };
    if empty {
        return Err(Error::EmptySpectrum);
    }
    Ok(out)
}

/// Name of the `i`-th synthetic word.
pub fn synthetic_word(i: u64) -> String {
    format!("w{i}")
}

/// For each stored `k` (ascending), `F(k)` fresh words each repeated `k` times.
pub fn spectrum_to_corpus(spec: &FreqSpectrum<u64>) -> Vec<String> {
    let total = usize::try_from(spec.total_tokens()).unwrap_or(usize::MAX);
    let mut tokens = Vec::with_capacity(total);
    let mut next = 0u64;
    for (k, f) in spec.points() {
        for _ in 0..f {
            let w = synthetic_word(next);
            next += 1;
            for _ in 0..k {
                tokens.push(w.clone());
            }
        }
    }
    tokens
}

/// Write tokens separated by single spaces, newline-terminated.
pub fn write_corpus<W: io::Write>(tokens: &[String], mut out: W) -> io::Result<()> {
    let mut first = true;
    for t in tokens {
        if !first {
            out.write_all(b" ")?;
        }
        out.write_all(t.as_bytes())?;
        first = false;
    }
    if !tokens.is_empty() {
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Per-cell results of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    /// `N`; real-valued in exact mode.
    pub n_tokens: f64,
    pub max_k: u64,
    pub entropy_nats: f64,
    pub bound_nats: f64,
    pub margin_nats: f64,
    pub chain: ChainDiagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub mode: Mode,
    pub outcome: Result<SweepCell>,
}

fn sweep_cell(a: f64, b: f64, mode: Mode) -> Result<SweepCell> {
    let spec = SyntheticSpec::new(a, b, mode)?;
    let generated = generate_spectrum(&spec)?;
    let tolerance = mode.chain_tolerance(a, b);
    let (n_tokens, entropy, chain) = match &generated {
        SyntheticSpectrum::Exact(s) => (s.total_tokens(), entropy_from_spectrum(s)?, chain_check(s, a, b, tolerance)?),
        SyntheticSpectrum::Rounded(s) => (
            s.total_tokens().to_f64(),
            entropy_from_spectrum(s)?,
            chain_check(s, a, b, tolerance)?,
        ),
    };
    let bound = theorem_bound(a, b)?;
    Ok(SweepCell {
        n_tokens,
        max_k: generated.max_k(),
        entropy_nats: entropy.nats,
        bound_nats: bound,
        margin_nats: bound - entropy.nats,
        chain,
    })
}

/// Evaluate every `(a, b)` in the grid product, `a` outer. Cells run in
/// parallel; the result keeps grid order. Cell failures are kept in the row.
pub fn sweep(a_grid: &[f64], b_grid: &[f64], mode: Mode) -> Vec<SweepRow> {
    let cells: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| b_grid.iter().map(move |&b| (a, b)))
        .collect();
    cells
        .into_par_iter()
        .map(|(a, b)| SweepRow {
            a,
            b,
            mode,
            outcome: sweep_cell(a, b, mode),
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: [&str; 11] = [
    "a",
    "b",
    "N",
    "M",
    "entropy_nats",
    "bound_nats",
    "margin_nats",
    "sandwich_lo",
    "sandwich_hi",
    "n_bound",
    "ratio",
];

/// Sweep table as CSV. The chain columns hold slacks. Failed cells keep
/// their `a,b` and leave the remaining columns empty.
pub fn write_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER)?;
    for row in rows {
        let mut rec = vec![row.a.to_string(), row.b.to_string()];
        match &row.outcome {
            Ok(c) => {
                let n = match row.mode {
                    Mode::RoundedInteger => (c.n_tokens as u64).to_string(),
                    Mode::ExactReal => c.n_tokens.to_string(),
                };
                rec.extend([
                    n,
                    c.max_k.to_string(),
                    c.entropy_nats.to_string(),
                    c.bound_nats.to_string(),
                    c.margin_nats.to_string(),
                    c.chain.sandwich_lower.slack.to_string(),
                    c.chain.sandwich_upper.slack.to_string(),
                    c.chain.n_bound.slack.to_string(),
                    c.chain.ratio.slack.to_string(),
                ]);
            }
            Err(_) => rec.extend(std::iter::repeat_n(String::new(), 9)),
        }
        w.write_record(&rec)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::count_frequencies;
    use crate::freqstats::freq_of_freq;
    use crate::powerlaw::{fit_loglog, FitRange};
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn rounded(a: f64, b: f64) -> FreqSpectrum<u64> {
        match generate_spectrum(&SyntheticSpec::new(a, b, Mode::RoundedInteger).unwrap()).unwrap() {
            SyntheticSpectrum::Rounded(s) => s,
            _ => unreachable!(),
        }
    }

    fn exact(a: f64, b: f64) -> FreqSpectrum<f64> {
        match generate_spectrum(&SyntheticSpec::new(a, b, Mode::ExactReal).unwrap()).unwrap() {
            SyntheticSpectrum::Exact(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn rounded_slope_one_ln4() {
        // 4/k for k = 1..4: 4, 2, 1.33, 1
        let s = rounded(1.0, 4f64.ln());
        assert_eq!(s.points().collect::<Vec<_>>(), [(1, 4), (2, 2), (3, 1), (4, 1)]);
        assert_eq!(s.total_tokens(), 15);
        assert_eq!(s.max_k(), 4);
    }

    #[test]
    fn rounded_single_point() {
        let s = rounded(2.0, 0.0);
        assert_eq!(s.points().collect::<Vec<_>>(), [(1, 1)]);
        assert_eq!((s.total_tokens(), s.max_k()), (1, 1));
    }

    #[test]
    fn exact_sandwich_a15_b6() {
        let s = exact(1.5, 6.0);
        // e^{6/1.5} = e^4 = 54.598...
        assert_eq!(s.max_k(), 54);
        let masses: Vec<f64> = s.points().map(|(k, f)| k as f64 * f).collect();
        assert!(masses.windows(2).all(|w| w[1] < w[0]));
        for (k, f) in s.points() {
            let mass = k as f64 * f;
            let analytic = 6f64.exp() / (k as f64).sqrt();
            assert!((mass - analytic).abs() < 1e-9 * analytic);
            assert!(mass >= 4f64.exp() - 1e-9 && mass <= 6f64.exp() + 1e-9);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SyntheticSpec::new(0.5, 2.0, Mode::ExactReal).is_err());
        assert!(SyntheticSpec::new(1.0, -1.0, Mode::RoundedInteger).is_err());
        assert!(SyntheticSpec::new(f64::NAN, 1.0, Mode::RoundedInteger).is_err());
        let huge = SyntheticSpec::new(1.0, 30.0, Mode::ExactReal).unwrap();
        assert!(generate_spectrum(&huge).is_err());
        let capped = huge.with_k_cap(NonZeroU64::new(10).unwrap());
        assert_eq!(generate_spectrum(&capped).unwrap().max_k(), 10);
    }

    #[test]
    fn exact_spectrum_is_not_a_corpus() {
        let g = generate_spectrum(&SyntheticSpec::new(1.0, 2.0, Mode::ExactReal).unwrap()).unwrap();
        assert_eq!(g.to_corpus(), Err(Error::RealValuedSpectrum));
    }

    #[test]
    fn corpus_examples() {
        let s = FreqSpectrum::from_counts([(2, 1)]).unwrap();
        assert_eq!(spectrum_to_corpus(&s), ["w0", "w0"]);

        let s = FreqSpectrum::from_counts([(1, 2), (3, 1)]).unwrap();
        let c = spectrum_to_corpus(&s);
        assert_eq!(c.len(), 5);
        let t = count_frequencies(&c);
        assert_eq!(t.vocab_size(), 3);
        assert_eq!(freq_of_freq(&t).unwrap(), s);

        let s = rounded(1.0, 4f64.ln());
        let c = spectrum_to_corpus(&s);
        assert_eq!(c.len(), 15);
        assert_eq!(freq_of_freq(&count_frequencies(&c)).unwrap(), s);
    }

    #[test]
    fn corpus_text() {
        let mut buf = Vec::new();
        write_corpus(&spectrum_to_corpus(&rounded(2.0, 0.0)), &mut buf).unwrap();
        assert_eq!(buf, b"w0\n");
    }

    #[test]
    fn exact_fit_closes_the_loop() {
        for a in [1.0, 1.5, 2.0, 2.5] {
            for b in [2.0, 4.0, 6.0] {
                let fit = fit_loglog(&exact(a, b), FitRange::default()).unwrap();
                assert!((fit.a - a).abs() < 1e-9 && (fit.b - b).abs() < 1e-9, "{a} {b}: {fit:?}");
            }
        }
    }

    #[test]
    fn sweep_single_cell() {
        let rows = sweep(&[1.0], &[LN_2], Mode::ExactReal);
        assert_eq!(rows.len(), 1);
        let cell = rows[0].outcome.as_ref().unwrap();
        assert!((cell.bound_nats - (1.0 + LN_2)).abs() < 1e-12);
    }

    #[test]
    fn sweep_grid_holds() {
        let rows = sweep(&[1.0, 2.0], &[4.0, 6.0], Mode::ExactReal);
        assert_eq!(rows.len(), 4);
        let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(order, [(1.0, 4.0), (1.0, 6.0), (2.0, 4.0), (2.0, 6.0)]);
        for r in &rows {
            let c = r.outcome.as_ref().unwrap();
            assert!(c.margin_nats >= 0.0);
            assert!(c.chain.all_ok(), "{:?}", c.chain);
        }
    }

    #[test]
    fn sweep_empty_and_failing_cells() {
        assert!(sweep(&[], &[1.0], Mode::ExactReal).is_empty());
        assert!(sweep(&[1.0], &[], Mode::RoundedInteger).is_empty());
        let rows = sweep(&[0.5, 1.0], &[2.0], Mode::RoundedInteger);
        assert!(rows[0].outcome.is_err());
        assert!(rows[1].outcome.is_ok());
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER.join(","));
        assert_eq!(lines[1], "0.5,2,,,,,,,,,");
        assert!(lines[2].starts_with("1,2,"));
    }

    proptest! {
        #[test]
        fn round_trip_identity(fs in prop::collection::btree_map(1u64..40, 1u64..6, 1..10)) {
            let s = FreqSpectrum::from_counts(fs).unwrap();
            let back = freq_of_freq(&count_frequencies(spectrum_to_corpus(&s))).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn exact_mode_satisfies_bound(a in 1.0f64..3.0, b in 0.0f64..7.0) {
            let s = exact(a, b);
            let e = entropy_from_spectrum(&s).unwrap().nats;
            prop_assert!(e <= theorem_bound(a, b).unwrap());
            let d = chain_check(&s, a, b, EXACT_CHAIN_TOLERANCE).unwrap();
            prop_assert!(d.all_ok(), "{:?}", d);
        }
    }
}
