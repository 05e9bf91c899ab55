//! Totally positive windows of finite type.
//!
//! A window is specified through the poles of its Fourier transform,
//! `ĝ(ξ) = C ∏_k (1 + 2πj δ_k ξ)^{-1}`, with nonzero real `δ_k`. For pairwise
//! distinct parameters the window has the closed form
//! `g(x) = Σ_i w_i e^{-x/δ_i} h(x δ_i)` with partial fraction weights
//! `w_i = C / |δ_i| · ∏_{k≠i} (1 - δ_k/δ_i)^{-1}` and the Heaviside convention
//! `h(0) = 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative gap below which two pole parameters count as repeated.
pub const DISTINCT_RTOL: f64 = 1e-12;

/// Default relative perturbation used by [`TpfftWindow::perturbed`].
pub const DEFAULT_PERTURBATION: f64 = 1e-7;

/// Unit step with `h(0) = 1/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Heaviside;

impl Heaviside {
    #[inline]
    pub fn eval(x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            0.0
        } else {
            0.5
        }
    }
}

/// On-disk window specification, `{"deltas": [...], "scale": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub deltas: Vec<f64>,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

/// A totally positive function of finite type, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TpfftWindow {
    deltas: Vec<f64>,
    scale: f64,
    positive: usize,
    negative: usize,
    weights: Option<Vec<f64>>,
}

impl TpfftWindow {
    /// Builds a window from its pole parameters. Input order is preserved.
    pub fn new(deltas: &[f64], scale: f64) -> Result<Self> {
        if deltas.len() < 2 {
            return Err(Error::TooFewPoles {
                count: deltas.len(),
            });
        }
        for (index, &d) in deltas.iter().enumerate() {
            if !d.is_finite() {
                return Err(Error::NonFiniteDelta { index });
            }
            if d == 0.0 {
                return Err(Error::ZeroDelta { index });
            }
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::NonpositiveScale { scale });
        }
        let positive = deltas.iter().filter(|&&d| d > 0.0).count();
        let weights = pairwise_distinct(deltas).then(|| partial_fraction_weights(deltas, scale));
        Ok(Self {
            deltas: deltas.to_vec(),
            scale,
            positive,
            negative: deltas.len() - positive,
            weights,
        })
    }

    /// Window with unit scale `C = 1`.
    pub fn with_deltas(deltas: &[f64]) -> Result<Self> {
        Self::new(deltas, 1.0)
    }

    pub fn from_spec(spec: &WindowSpec) -> Result<Self> {
        Self::new(&spec.deltas, spec.scale)
    }

    /// Splits repeated parameters apart by a relative `eps` so the pointwise
    /// formula applies. The j-th repeat of a value is multiplied by `1 + j·eps`;
    /// the result only approximates the confluent window, to `O(eps)` at best
    /// and worse when the weights cancel.
    pub fn perturbed(deltas: &[f64], scale: f64, eps: f64) -> Result<Self> {
        let out: Vec<f64> = deltas
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let repeats = deltas[..i].iter().filter(|&&o| same_pole(o, d)).count();
                d * (1.0 + repeats as f64 * eps)
            })
            .collect();
        Self::new(&out, scale)
    }

    pub fn spec(&self) -> WindowSpec {
        WindowSpec {
            deltas: self.deltas.clone(),
            scale: self.scale,
        }
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Type of the window (number of poles).
    pub fn order(&self) -> usize {
        self.deltas.len()
    }

    /// Number of positive pole parameters.
    pub fn positive_count(&self) -> usize {
        self.positive
    }

    /// Number of negative pole parameters.
    pub fn negative_count(&self) -> usize {
        self.negative
    }

    pub fn is_distinct(&self) -> bool {
        self.weights.is_some()
    }

    /// Partial fraction weights `C·C_i/|δ_i|`, present only for distinct poles.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub(crate) fn distinct_weights(&self) -> Result<&[f64]> {
        self.weights.as_deref().ok_or(Error::RepeatedPoles)
    }

    /// True when the parameter multiset is closed under negation.
    pub fn is_even(&self) -> bool {
        let mut pos: Vec<f64> = self.deltas.iter().copied().filter(|d| *d > 0.0).collect();
        let mut neg: Vec<f64> = self
            .deltas
            .iter()
            .filter(|d| **d < 0.0)
            .map(|d| -d)
            .collect();
        if pos.len() != neg.len() {
            return false;
        }
        pos.sort_by(f64::total_cmp);
        neg.sort_by(f64::total_cmp);
        pos.iter().zip(&neg).all(|(a, b)| same_pole(*a, *b))
    }

    /// Largest `|δ_i|`; the window decays like `e^{-|x|/max|δ|}`.
    pub fn decay_length(&self) -> f64 {
        self.deltas.iter().fold(0.0_f64, |acc, d| acc.max(d.abs()))
    }

    /// `Σ|w_i|`, the constant in `|g(x)| ≤ Σ|w_i| e^{-|x|/max|δ|}`.
    pub fn decay_constant(&self) -> Result<f64> {
        Ok(self.distinct_weights()?.iter().map(|w| w.abs()).sum())
    }

    /// Pointwise value `g(x)`. The exact value is nonnegative; cancellation
    /// near `x = 0` for one-sided windows can leave a negative residue of
    /// rounding size, which is clamped.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_unclamped(x)?.max(0.0))
    }

    /// The explicit-formula sum before rounding residue below zero is clamped.
    pub fn eval_unclamped(&self, x: f64) -> Result<f64> {
        let weights = self.distinct_weights()?;
        Ok(eval_terms(&self.deltas, weights, x))
    }

    /// `ĝ(ξ) = C ∏_k (1 + 2πj δ_k ξ)^{-1}`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        self.deltas
            .iter()
            .fold(Complex64::new(self.scale, 0.0), |acc, &d| {
                acc / Complex64::new(1.0, 2.0 * PI * d * xi)
            })
    }
}

#[inline]
fn eval_terms(deltas: &[f64], weights: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for (&d, &w) in deltas.iter().zip(weights) {
        let step = Heaviside::eval(x * d);
        if step > 0.0 {
            sum += w * step * (-x / d).exp();
        }
    }
    sum
}

pub(crate) fn same_pole(a: f64, b: f64) -> bool {
    (a - b).abs() < DISTINCT_RTOL * a.abs().max(b.abs())
}

pub(crate) fn pairwise_distinct(deltas: &[f64]) -> bool {
    deltas
        .iter()
        .enumerate()
        .all(|(i, &a)| deltas[i + 1..].iter().all(|&b| !same_pole(a, b)))
}

/// `C_i = ∏_{k≠i} (1 - δ_k/δ_i)^{-1}`, multiplying factors in order of
/// increasing `|1 - δ_k/δ_i|`. Each factor is formed as `(δ_i − δ_k)/δ_i`,
/// whose numerator is exact for nearby poles.
pub(crate) fn partial_fraction_coefficients(deltas: &[f64]) -> Vec<f64> {
    deltas
        .iter()
        .enumerate()
        .map(|(i, &di)| {
            let mut factors: Vec<f64> = deltas
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, &dk)| (di - dk) / di)
                .collect();
            factors.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
            factors.iter().fold(1.0, |acc, f| acc / f)
        })
        .collect()
}

fn partial_fraction_weights(deltas: &[f64], scale: f64) -> Vec<f64> {
    partial_fraction_coefficients(deltas)
        .into_iter()
        .zip(deltas)
        .map(|(c, d)| scale * c / d.abs())
        .collect()
}
