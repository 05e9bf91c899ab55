//! Gabor systems on `ℂ^L`.
//!
//! Vectors are indexed `0..L` with nonnegative remainders. The system
//! generated by `g` with time step `a` and `M` modulations consists of
//! `M_{l/M} T_{ka} g` for `k ∈ 0..L/a`, `l ∈ 0..M`, stored in that order
//! (column `k·M + l`).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative threshold on the lower bound for frame and Riesz decisions.
pub const BOUND_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGaborSystem {
    len: usize,
    a: usize,
    m: usize,
    window: Vec<Complex64>,
}

/// Lower and upper bound with the resulting classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

impl Bounds {
    fn new(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            holds: lower > BOUND_RTOL * upper,
        }
    }
}

impl FiniteGaborSystem {
    pub fn new(window: Vec<Complex64>, a: usize, m: usize) -> Result<Self> {
        let len = window.len();
        if len == 0 || a == 0 || m == 0 {
            return Err(Error::InvalidParameter(
                "L, a and M must be positive".into(),
            ));
        }
        if !len.is_multiple_of(a) {
            return Err(Error::Divisibility(format!(
                "L/a = {len}/{a} is not an integer"
            )));
        }
        if !len.is_multiple_of(m) {
            return Err(Error::Divisibility(format!(
                "L/M = {len}/{m} is not an integer"
            )));
        }
        Ok(Self { len, a, m, window })
    }

    pub fn from_real(window: &[f64], a: usize, m: usize) -> Result<Self> {
        Self::new(
            window.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            a,
            m,
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn time_step(&self) -> usize {
        self.a
    }

    pub fn modulations(&self) -> usize {
        self.m
    }

    /// `N = L/a`
    pub fn shifts(&self) -> usize {
        self.len / self.a
    }

    /// `N·M`
    pub fn size(&self) -> usize {
        self.shifts() * self.m
    }

    pub fn window(&self) -> &[Complex64] {
        &self.window
    }

    pub fn with_window(&self, window: Vec<Complex64>) -> Result<Self> {
        if window.len() != self.len {
            return Err(Error::ShapeMismatch(format!(
                "window of length {} for L = {}",
                window.len(),
                self.len
            )));
        }
        Self::new(window, self.a, self.m)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        (self.len, self.a, self.m) == (other.len, other.a, other.m)
    }

    /// `L × N·M` matrix with columns `M_{l/M} T_{ka} g`, column index `k·M + l`.
    pub fn synthesis_matrix(&self) -> DMatrix<Complex64> {
        let mut s = DMatrix::zeros(self.len, self.size());
        for k in 0..self.shifts() {
            for l in 0..self.m {
                let col = tf_shift_unchecked(&self.window, (k * self.a) as i64, l as i64, self.m);
                s.set_column(k * self.m + l, &DVector::from_vec(col));
            }
        }
        s
    }

    /// `S = G G^*`
    pub fn frame_operator(&self) -> DMatrix<Complex64> {
        let g = self.synthesis_matrix();
        &g * g.adjoint()
    }

    /// Coefficients `⟨f, M_{l/M} T_{ka} g⟩` in column order.
    pub fn analysis(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(f.len())?;
        let g = self.synthesis_matrix();
        Ok((g.adjoint() * DVector::from_column_slice(f))
            .as_slice()
            .to_vec())
    }

    /// `Σ c_{k,l} M_{l/M} T_{ka} g`.
    pub fn synthesis(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        if c.len() != self.size() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for {} vectors",
                c.len(),
                self.size()
            )));
        }
        let g = self.synthesis_matrix();
        Ok((g * DVector::from_column_slice(c)).as_slice().to_vec())
    }

    /// Extreme squared singular values of the synthesis matrix.
    pub fn frame_bounds(&self) -> Bounds {
        let sv = self.synthesis_matrix().singular_values();
        let upper = sv.max().powi(2);
        let lower = if self.size() < self.len {
            0.0
        } else {
            sv.min().powi(2)
        };
        Bounds::new(lower, upper)
    }

    /// Singular values of the synthesis matrix in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .synthesis_matrix()
            .singular_values()
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Extreme eigenvalues of the Gram matrix `G^* G`.
    pub fn riesz_bounds(&self) -> Bounds {
        let g = self.synthesis_matrix();
        let gram = g.adjoint() * g;
        let ev = gram.symmetric_eigenvalues();
        Bounds::new(ev.min(), ev.max())
    }

    /// Window `S^+ g` of the canonical dual system.
    pub fn canonical_dual(&self) -> Result<Self> {
        let eig = self.frame_operator().symmetric_eigen();
        let cutoff = BOUND_RTOL * eig.eigenvalues.amax();
        let inv = eig
            .eigenvalues
            .map(|v| if v > cutoff { v.recip() } else { 0.0 });
        let vecs = &eig.eigenvectors;
        let pinv =
            vecs * DMatrix::from_diagonal(&inv.map(|v| Complex64::new(v, 0.0))) * vecs.adjoint();
        let dual = pinv * DVector::from_column_slice(&self.window);
        self.with_window(dual.as_slice().to_vec())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.len {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "vector of length {n} for L = {}",
                self.len
            )))
        }
    }
}

/// `M_{l/M} T_k f(t) = f((t − k) mod L) e^{2πj l t/M}`.
pub fn tf_shift_finite(f: &[Complex64], k: i64, l: i64, m: usize) -> Result<Vec<Complex64>> {
    if m == 0 || !f.len().is_multiple_of(m) {
        return Err(Error::Divisibility(format!(
            "L/M = {}/{m} is not an integer",
            f.len()
        )));
    }
    Ok(tf_shift_unchecked(f, k, l, m))
}

fn tf_shift_unchecked(f: &[Complex64], k: i64, l: i64, m: usize) -> Vec<Complex64> {
    let len = f.len() as i64;
    let m = m as i64;
    (0..len)
        .map(|t| {
            let turns = (l * t).rem_euclid(m) as f64 / m as f64;
            f[(t - k).rem_euclid(len) as usize] * Complex64::from_polar(1.0, 2.0 * PI * turns)
        })
        .collect()
}

/// Analysis with `g`, synthesis with `γ`; returns `f̂` and `‖f − f̂‖/‖f‖`.
pub fn reconstruct(
    f: &[Complex64],
    sys_g: &FiniteGaborSystem,
    sys_gamma: &FiniteGaborSystem,
) -> Result<(Vec<Complex64>, f64)> {
    if !sys_g.same_shape(sys_gamma) {
        return Err(Error::ShapeMismatch(format!(
            "systems (L, a, M) = {:?} and {:?}",
            (sys_g.len, sys_g.a, sys_g.m),
            (sys_gamma.len, sys_gamma.a, sys_gamma.m)
        )));
    }
    let coeffs = sys_g.analysis(f)?;
    let f_hat = sys_gamma.synthesis(&coeffs)?;
    let norm = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let err = f
        .iter()
        .zip(&f_hat)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((f_hat, err / norm))
}
