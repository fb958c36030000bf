//! Shannon entropy of a corpus, the power-law entropy bound, and numeric
//! checks of each inequality the bound is derived from.
//!
//! Entropy is the usual non-negative `E = -Σ p(w)·ln p(w)` with
//! `p(w) = fr(w)/N`, in nats. If the spectrum follows
//! `ln F(k) = -a·ln k + b` with `a >= 1`, then
//!
//! ```text
//! E <= e^{b(1 - 1/a)} · (b/a + 1)
//! ```
//!
//! via the intermediate steps
//!
//! ```text
//! e^{b/a} <= k·F(k) <= e^b        for every stored k
//! N       >= M·e^{b/a}
//! M/N     <= e^{-b/a}
//! ```
//!
//! [`chain_check`] evaluates those steps on a concrete spectrum.
//!
//! Summation order: per-word (or per-k) terms are sorted by probability,
//! smallest first, and accumulated with a compensated sum.

use serde::{Deserialize, Serialize};

use crate::corpus::FrequencyTable;
use crate::error::{Error, Result};
use crate::freqstats::{Count, FreqSpectrum};
use crate::numeric::{compensated_sum, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub nats: f64,
    pub bits: f64,
}

impl EntropyValue {
    pub fn from_nats(nats: f64) -> Self {
        EntropyValue {
            nats,
            bits: nats / std::f64::consts::LN_2,
        }
    }
}

/// `-Σ q·ln q` over `(probability, multiplicity)` pairs, smallest first.
fn entropy_of(mut terms: Vec<(f64, f64)>) -> EntropyValue {
    terms.sort_by(|x, y| x.0.total_cmp(&y.0));
    let nats = compensated_sum(terms.into_iter().map(|(p, mult)| {
        if p > 0.0 {
            -mult * p * p.ln()
        } else {
            0.0
        }
    }));
    EntropyValue::from_nats(nats.max(0.0))
}

/// Entropy of the word distribution of `table`.
pub fn entropy(table: &FrequencyTable) -> Result<EntropyValue> {
    if table.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = table.total_tokens() as f64;
    Ok(entropy_of(table.counts().map(|c| (c as f64 / n, 1.0)).collect()))
}

/// Entropy regrouped by frequency class: `-Σ_k F(k)·(k/N)·ln(k/N)`.
pub fn entropy_from_spectrum<C: Count>(spec: &FreqSpectrum<C>) -> Result<EntropyValue> {
    if spec.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let n = spec.total_tokens().to_f64();
    Ok(entropy_of(
        spec.points().map(|(k, f)| (k as f64 / n, f.to_f64())).collect(),
    ))
}

/// Closed-form bound `e^{b(1-1/a)}·(b/a + 1)` in nats. Requires `a >= 1`.
///
/// The value is only positive for `b > -a`; the generator and the bound's
/// derivation both assume `b >= 0`.
pub fn theorem_bound(a: f64, b: f64) -> Result<f64> {
    if !b.is_finite() {
        return Err(Error::InvalidParameter(format!("intercept b = {b} is not finite")));
    }
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::InapplicableBound { a });
    }
    Ok((b * (1.0 - 1.0 / a)).exp() * (b / a + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub a: f64,
    pub b: f64,
    pub applicable: bool,
    /// `None` when `a < 1`.
    pub bound_nats: Option<f64>,
    /// `bound - entropy`, when applicable.
    pub margin_nats: Option<f64>,
}

impl BoundReport {
    pub fn new(a: f64, b: f64, entropy: EntropyValue) -> Self {
        match theorem_bound(a, b) {
            Ok(bound) => BoundReport {
                a,
                b,
                applicable: true,
                bound_nats: Some(bound),
                margin_nats: Some(bound - entropy.nats),
            },
            Err(_) => BoundReport {
                a,
                b,
                applicable: false,
                bound_nats: None,
                margin_nats: None,
            },
        }
    }

    /// Whether the measured entropy sits at or below the bound.
    pub fn holds(&self) -> Option<bool> {
        self.margin_nats.map(|m| m >= 0.0)
    }
}

/// One inequality: `slack >= 0` means it holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub slack: f64,
    pub ok: bool,
}

impl InequalityCheck {
    fn new(slack: f64, tolerance: f64) -> Self {
        InequalityCheck {
            slack,
            ok: slack >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    /// `min_k (k·F(k) - e^{b/a})`.
    pub sandwich_lower: InequalityCheck,
    /// `e^b - max_k k·F(k)`.
    pub sandwich_upper: InequalityCheck,
    /// `N - M·e^{b/a}`.
    pub n_bound: InequalityCheck,
    /// `e^{-b/a} - M/N`.
    pub ratio: InequalityCheck,
    pub tolerance: f64,
}

impl ChainDiagnostics {
    pub fn all_ok(&self) -> bool {
        self.sandwich_lower.ok && self.sandwich_upper.ok && self.n_bound.ok && self.ratio.ok
    }
}

/// Evaluate the intermediate inequalities over the stored `k` of `spec`.
///
/// `N - M·e^{b/a}` is computed as the sum of the per-k lower-sandwich slacks
/// minus one `e^{b/a}` for every `k` in `1..=M` that is not stored. This is
/// algebraically identical and avoids cancelling two large totals.
pub fn chain_check<C: Count>(spec: &FreqSpectrum<C>, a: f64, b: f64, tolerance: f64) -> Result<ChainDiagnostics> {
    if spec.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::InapplicableBound { a });
    }
    if !b.is_finite() {
        return Err(Error::InvalidParameter(format!("intercept b = {b} is not finite")));
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tolerance} must be >= 0")));
    }
    let lo = (b / a).exp();
    let hi = b.exp();

    let mut min_lower = f64::INFINITY;
    let mut max_mass = f64::NEG_INFINITY;
    let mut lower_sum = CompensatedSum::default();
    for (k, f) in spec.points() {
        let mass = k as f64 * f.to_f64();
        let s = mass - lo;
        min_lower = min_lower.min(s);
        max_mass = max_mass.max(mass);
        lower_sum.add(s);
    }
    let m = spec.max_k();
    let gaps = (m - spec.len() as u64) as f64;
    lower_sum.add(-gaps * lo);
    let n_slack = lower_sum.value();
    let n = spec.total_tokens().to_f64();
    let ratio_slack = n_slack / (n * lo);

    Ok(ChainDiagnostics {
        sandwich_lower: InequalityCheck::new(min_lower, tolerance),
        sandwich_upper: InequalityCheck::new(hi - max_mass, tolerance),
        n_bound: InequalityCheck::new(n_slack, tolerance),
        ratio: InequalityCheck::new(ratio_slack, tolerance),
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::count_frequencies;
    use crate::freqstats::freq_of_freq;
    use proptest::prelude::*;

    /// Direct left-to-right `-Σ p ln p` over words.
    fn naive_entropy(counts: &[u64]) -> f64 {
        let n: u64 = counts.iter().sum();
        counts
            .iter()
            .map(|&c| {
                let p = c as f64 / n as f64;
                -p * p.ln()
            })
            .sum()
    }

    #[test]
    fn uniform_and_degenerate() {
        for n in [1usize, 2, 5, 64, 1000] {
            let t = count_frequencies((0..n).map(|i| format!("w{i}")));
            let e = entropy(&t).unwrap();
            assert!((e.nats - (n as f64).ln()).abs() < 1e-12, "n={n}: {}", e.nats);
        }
        let e = entropy(&FrequencyTable::from_counts([("a", 7)])).unwrap();
        assert_eq!(e.nats, 0.0);
    }

    #[test]
    fn three_to_one() {
        // -(0.75 ln 0.75 + 0.25 ln 0.25) = 0.56233514461880835...
        let e = entropy(&FrequencyTable::from_counts([("a", 3), ("b", 1)])).unwrap();
        assert!((e.nats - 0.562_335_144_618_808_4).abs() < 1e-12);
        assert!((e.bits - e.nats / std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn spectrum_route_examples() {
        let s = FreqSpectrum::from_counts([(1, 9)]).unwrap();
        assert!((entropy_from_spectrum(&s).unwrap().nats - 9f64.ln()).abs() < 1e-12);
        let s = FreqSpectrum::from_counts([(3, 1), (1, 1)]).unwrap();
        assert!((entropy_from_spectrum(&s).unwrap().nats - 0.562_335_144_618_808_4).abs() < 1e-12);
        let s = FreqSpectrum::from_counts([(2, 2)]).unwrap();
        assert!((entropy_from_spectrum(&s).unwrap().nats - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(entropy(&FrequencyTable::new()), Err(Error::EmptyCorpus));
        let s = FreqSpectrum::from_counts(Vec::new()).unwrap();
        assert_eq!(entropy_from_spectrum(&s), Err(Error::EmptySpectrum));
        assert_eq!(chain_check(&s, 1.0, 1.0, 0.0), Err(Error::EmptySpectrum));
    }

    #[test]
    fn bound_closed_form() {
        for b in [0.0, std::f64::consts::LN_2, 3.0, 5.0] {
            assert!((theorem_bound(1.0, b).unwrap() - (b + 1.0)).abs() < 1e-12);
        }
        assert!((theorem_bound(1.0, std::f64::consts::LN_2).unwrap() - 1.693_147_180_559_945_3).abs() < 1e-12);
        // 6·e^5 = 890.47895461545962...
        let v = theorem_bound(2.0, 10.0).unwrap();
        assert!((v - 890.478_954_615_459_6).abs() / 890.478_954_615_459_6 < 1e-9, "{v}");
    }

    #[test]
    fn bound_rejects_flat_slopes() {
        assert_eq!(theorem_bound(0.5, 2.0), Err(Error::InapplicableBound { a: 0.5 }));
        assert!(matches!(theorem_bound(f64::NAN, 2.0), Err(Error::InapplicableBound { .. })));
        assert!(matches!(theorem_bound(1.5, f64::INFINITY), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn bound_report_applicability() {
        let e = EntropyValue::from_nats(1.0);
        let r = BoundReport::new(1.0, 2.0, e);
        assert!(r.applicable);
        assert_eq!(r.bound_nats, Some(3.0));
        assert_eq!(r.margin_nats, Some(2.0));
        assert_eq!(r.holds(), Some(true));
        let r = BoundReport::new(0.0, 0.0, e);
        assert!(!r.applicable);
        assert_eq!((r.bound_nats, r.margin_nats, r.holds()), (None, None, None));
    }

    fn exact(a: f64, b: f64) -> FreqSpectrum<f64> {
        let kmax = (b / a).exp().floor() as u64;
        FreqSpectrum::from_real((1..=kmax).map(|k| (k, (b - a * (k as f64).ln()).exp()))).unwrap()
    }

    #[test]
    fn chain_on_exact_law() {
        for (a, b) in [(1.5, 6.0), (2.0, 4.0), (1.25, 8.0)] {
            let s = exact(a, b);
            let d = chain_check(&s, a, b, 0.0).unwrap();
            // k·F(k) = e^b·k^{1-a} decreases in k: minimum at k = M, maximum (= e^b) at k = 1
            let m = s.max_k() as f64;
            let analytic_lower = b.exp() * m.powf(1.0 - a) - (b / a).exp();
            assert!((d.sandwich_lower.slack - analytic_lower).abs() < 1e-9);
            assert!(d.sandwich_upper.slack.abs() < 1e-9);
            assert!(d.sandwich_lower.slack >= -1e-9 && d.n_bound.slack >= -1e-9 && d.ratio.slack >= -1e-9);
        }
    }

    #[test]
    fn chain_slope_one_is_tight() {
        let s = exact(1.0, 4.0);
        let d = chain_check(&s, 1.0, 4.0, 1e-9).unwrap();
        assert!(d.sandwich_lower.slack.abs() < 1e-9);
        assert!(d.sandwich_upper.slack.abs() < 1e-9);
        assert!(d.all_ok());
    }

    #[test]
    fn chain_reports_violation() {
        // k·F(k) = 1 and 200 against e^b = e^0 = 1
        let s = FreqSpectrum::from_counts([(1, 1), (2, 100)]).unwrap();
        let d = chain_check(&s, 1.0, 0.0, 1e-9).unwrap();
        assert!(!d.sandwich_upper.ok);
        assert_eq!(d.sandwich_upper.slack, -199.0);
        assert!(d.sandwich_lower.ok);
        assert_eq!(chain_check(&s, 0.9, 0.0, 0.0), Err(Error::InapplicableBound { a: 0.9 }));
    }

    #[test]
    fn chain_counts_missing_k() {
        // stored k = {1, 4}; M = 4, so two of the four terms are missing
        let s = FreqSpectrum::from_counts([(1, 10), (4, 1)]).unwrap();
        let (a, b) = (1.0, 0.0);
        let d = chain_check(&s, a, b, 0.0).unwrap();
        let n = 14.0;
        assert!((d.n_bound.slack - (n - 4.0)).abs() < 1e-12);
        assert!((d.ratio.slack - (1.0 - 4.0 / n)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn entropy_matches_naive_sum(counts in prop::collection::vec(1u64..50, 1..20)) {
            let t = FrequencyTable::from_counts(counts.iter().enumerate().map(|(i, &c)| (format!("w{i}"), c)));
            let e = entropy(&t).unwrap();
            prop_assert!((e.nats - naive_entropy(&counts)).abs() < 1e-12);
            let via_spectrum = entropy_from_spectrum(&freq_of_freq(&t).unwrap()).unwrap();
            prop_assert!((e.nats - via_spectrum.nats).abs() < 1e-12);
            prop_assert!(e.nats >= 0.0 && e.nats <= (counts.len() as f64).ln() + 1e-12);
        }

        #[test]
        fn entropy_scale_invariant(counts in prop::collection::vec(1u64..50, 1..20), c in 2u64..20) {
            let t = FrequencyTable::from_counts(counts.iter().enumerate().map(|(i, &c)| (format!("w{i}"), c)));
            let e1 = entropy(&t).unwrap().nats;
            let e2 = entropy(&t.scaled(c)).unwrap().nats;
            prop_assert!((e1 - e2).abs() < 1e-12);
        }

        #[test]
        fn bound_increases_in_b(a in 1.0f64..5.0, b1 in 0.0f64..20.0, db in 1e-3f64..5.0) {
            prop_assert!(theorem_bound(a, b1).unwrap() < theorem_bound(a, b1 + db).unwrap());
        }
    }
}
