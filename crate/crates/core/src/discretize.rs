//! Sampling and periodization of windows.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::window::TpfftWindow;
use crate::zak;

/// Relative size below which a decaying tail is dropped.
pub const TRUNCATION_RTOL: f64 = 1e-14;

/// Samples `values[i] = f(step · (start + i))`; zero outside the stored range.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub start: i64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl SampledSignal {
    pub fn empty(step: f64) -> Self {
        Self {
            start: 0,
            step,
            values: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Location of the first sample.
    pub fn offset(&self) -> f64 {
        self.start as f64 * self.step
    }

    /// Index one past the last stored sample.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    /// Value at integer index `n` (zero outside the support).
    pub fn at(&self, n: i64) -> f64 {
        if n < self.start || n >= self.end() {
            0.0
        } else {
            self.values[(n - self.start) as usize]
        }
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i as i64, v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Periodizes an integer-step signal: `P_K s(n) = Σ_j s(n − jK)`, `n ∈ {0..K−1}`.
    pub fn periodize(&self, period: usize) -> Result<PeriodicSignal> {
        if period == 0 {
            return Err(Error::InvalidParameter("period must be positive".into()));
        }
        let mut values = vec![0.0; period];
        for (n, v) in self.indexed() {
            values[n.rem_euclid(period as i64) as usize] += v;
        }
        Ok(PeriodicSignal {
            period,
            step: self.step,
            values,
        })
    }
}

/// One period of a periodic sequence; `values.len() == period` samples of spacing `step`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSignal {
    pub period: usize,
    pub step: f64,
    pub values: Vec<f64>,
}

impl PeriodicSignal {
    /// Length of the period in time units.
    pub fn period_length(&self) -> f64 {
        self.period as f64 * self.step
    }
}

/// `S_h g` over an index range.
pub fn sample(w: &TpfftWindow, step: f64, range: RangeInclusive<i64>) -> Result<SampledSignal> {
    check_step(step)?;
    let start = *range.start();
    if range.is_empty() {
        return Ok(SampledSignal::empty(step));
    }
    let values = range
        .map(|k| w.eval(step * k as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledSignal {
        start,
        step,
        values,
    })
}

/// `S_h g` over the index range outside of which `|g| < 1e-14 · max|g|`.
pub fn sample_truncated(w: &TpfftWindow, step: f64) -> Result<SampledSignal> {
    check_step(step)?;
    let peak = peak_bound(w)?;
    let cb = w.decay_constant()?;
    let d = w.decay_length();
    let reach = d * (cb / (TRUNCATION_RTOL * peak)).ln().max(0.0);
    let n = (reach / step).ceil() as i64 + 1;
    // one-sided windows vanish on the opposite half line
    let lo = if w.negative_count() == 0 { 0 } else { -n };
    let hi = if w.positive_count() == 0 { 0 } else { n };
    sample(w, step, lo..=hi)
}

/// A lower bound on `max|g|` cheap enough for truncation decisions.
fn peak_bound(w: &TpfftWindow) -> Result<f64> {
    let d = w.decay_length();
    let mut peak = 0.0_f64;
    for i in -64..=64 {
        peak = peak.max(w.eval(d * i as f64 / 16.0)?);
    }
    Ok(peak.max(f64::MIN_POSITIVE))
}

/// `P_K g(x) = Z_K g(x, 0)`; repeated poles go through the divided difference.
pub fn periodize_closed(w: &TpfftWindow, period: f64, x: f64) -> Result<f64> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "period must be positive, got {period}"
        )));
    }
    Ok(zak::zak(w, period, x, 0.0)?.re)
}

/// `Q_{K,N} g(l) = N^{−1/2} Z_K g(l/N, 0)` for `l ∈ {0..KN−1}`.
pub fn qkn_window(w: &TpfftWindow, period: usize, oversampling: usize) -> Result<Vec<f64>> {
    if period == 0 || oversampling == 0 {
        return Err(Error::InvalidParameter(
            "K and N must be positive integers".into(),
        ));
    }
    let norm = (oversampling as f64).sqrt().recip();
    let k = period as f64;
    let n = oversampling as f64;
    (0..period * oversampling)
        .map(|l| Ok(norm * periodize_closed(w, k, l as f64 / n)?))
        .collect()
}

/// `P_K S g` as a vector of length `K`, the window of a Gabor system on `ℂ^K`.
pub fn periodized_samples(w: &TpfftWindow, period: usize) -> Result<Vec<f64>> {
    qkn_window(w, period, 1)
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "sampling step must be positive, got {step}"
        )))
    }
}
