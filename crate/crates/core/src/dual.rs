//! Compactly supported dual windows.
//!
//! For `αβ < 1` and an offset `x ∈ [0, α)` the dual window values
//! `γ(x + αi)` come from one row of the pseudoinverse of the collocation
//! matrix `P = (g(x + αi − k/β))`. The row index set `k1..=k2` and the sample
//! index set `i1..=i2` are chosen so that the row is orthogonal to every
//! column `w_k` with `k ≠ 0`, including those outside `P`, which is exactly
//! the Wexler–Raz condition for `γ`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::discretize::SampledSignal;
use crate::error::{Error, Result};
use crate::lattice::{ceil_snapped, floor_snapped, LatticeParams};
use crate::window::TpfftWindow;

/// Rank cutoff relative to the largest singular value.
pub const RANK_RTOL: f64 = 1e-10;
/// Maximum entry of `P^+ P − I` accepted as a left inverse.
pub const LEFT_INVERSE_TOL: f64 = 1e-8;

/// Index ranges for one offset `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportPlan {
    pub r: i64,
    pub k1: i64,
    pub k2: i64,
    pub i1: i64,
    pub i2: i64,
    pub l: i64,
    pub x: f64,
}

impl SupportPlan {
    pub fn rows(&self) -> usize {
        (self.i2 - self.i1 + 1) as usize
    }

    pub fn cols(&self) -> usize {
        (self.k2 - self.k1 + 1) as usize
    }

    /// Zero-based column of `k = 0`.
    pub fn central_col(&self) -> usize {
        (-self.k1) as usize
    }

    /// Support point `x + αi` for each row.
    pub fn points(&self, alpha: f64) -> impl Iterator<Item = (i64, f64)> + '_ {
        (self.i1..=self.i2).map(move |i| (i, self.x + alpha * i as f64))
    }
}

/// Index arithmetic for an offset `x ∈ [0, α)` and support parameter `L ≥ 0`.
///
/// `m` and `n` count the positive and negative pole parameters.
pub fn plan_support(
    lattice: &LatticeParams,
    m: usize,
    n: usize,
    l: i64,
    x: f64,
) -> Result<SupportPlan> {
    if l < 0 {
        return Err(Error::InvalidParameter(format!("L must be >= 0, got {l}")));
    }
    let alpha = lattice.alpha();
    if !(0.0..alpha).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "offset x = {x} outside [0, {alpha})"
        )));
    }
    let r = lattice.redundancy_index()?;
    let (m, n) = (m as i64, n as i64);
    let k1 = -(r + 1) * m - l;
    let k2 = (r + 1) * n + l;
    let ab = lattice.product();
    let i1 = floor_snapped((k1 + m - 1) as f64 / ab - x / alpha) + 1;
    let i2 = ceil_snapped((k2 - n + 1) as f64 / ab - x / alpha) - 1;
    let plan = SupportPlan {
        r,
        k1,
        k2,
        i1,
        i2,
        l,
        x,
    };
    if plan.rows() <= plan.cols() {
        return Err(Error::ShapeMismatch(format!(
            "plan has {} rows for {} columns",
            plan.rows(),
            plan.cols()
        )));
    }
    Ok(plan)
}

/// `P = (g(x + αi − k/β))` for `i1 ≤ i ≤ i2`, `k1 ≤ k ≤ k2`.
pub fn build_p(
    w: &TpfftWindow,
    plan: &SupportPlan,
    lattice: &LatticeParams,
) -> Result<DMatrix<f64>> {
    let (alpha, beta) = (lattice.alpha(), lattice.beta());
    let mut p = DMatrix::zeros(plan.rows(), plan.cols());
    for (row, i) in (plan.i1..=plan.i2).enumerate() {
        for (col, k) in (plan.k1..=plan.k2).enumerate() {
            p[(row, col)] = w.eval(plan.x + alpha * i as f64 - k as f64 / beta)?;
        }
    }
    Ok(p)
}

/// `G = (g(x_i − y_k))` for arbitrary point sequences.
pub fn collocation_matrix(w: &TpfftWindow, xs: &[f64], ys: &[f64]) -> Result<DMatrix<f64>> {
    let mut g = DMatrix::zeros(xs.len(), ys.len());
    for (i, &x) in xs.iter().enumerate() {
        for (k, &y) in ys.iter().enumerate() {
            g[(i, k)] = w.eval(x - y)?;
        }
    }
    Ok(g)
}

/// Dual window values at one offset.
#[derive(Debug, Clone, PartialEq)]
pub struct DualAt {
    pub plan: SupportPlan,
    /// `γ(x + αi)` for `i = i1..=i2`.
    pub values: Vec<f64>,
    /// `max |P^+ P − I|`.
    pub left_inverse_residual: f64,
    pub rank: usize,
}

impl DualAt {
    pub fn points(&self, alpha: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.plan
            .points(alpha)
            .zip(&self.values)
            .map(|((_, t), &v)| (t, v))
    }

    /// `v · w_k = Σ_i q_{0,i} g(x + αi − k/β)`, which is `δ_{k,0}` for a dual.
    pub fn pairing(&self, w: &TpfftWindow, lattice: &LatticeParams, k: i64) -> Result<f64> {
        let (alpha, beta) = (lattice.alpha(), lattice.beta());
        let mut acc = 0.0;
        for ((_, t), &v) in self.plan.points(alpha).zip(&self.values) {
            acc += v / beta * w.eval(t - k as f64 / beta)?;
        }
        Ok(acc)
    }
}

/// Dual window values `γ(x + αi)` for one offset `x ∈ [0, α)`.
pub fn dual_at(w: &TpfftWindow, lattice: &LatticeParams, l: i64, x: f64) -> Result<DualAt> {
    let plan = plan_support(lattice, w.positive_count(), w.negative_count(), l, x)?;
    dual_with_plan(w, lattice, plan)
}

fn dual_with_plan(w: &TpfftWindow, lattice: &LatticeParams, plan: SupportPlan) -> Result<DualAt> {
    let p = build_p(w, &plan, lattice)?;
    let cols = plan.cols();
    let sv = p.clone().singular_values();
    let cutoff = RANK_RTOL * sv.max();
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    if rank < cols {
        return Err(Error::RankDeficient {
            rank,
            expected: cols,
        });
    }
    // with full column rank P^+ = R^{-1} Q^T, and Householder QR keeps the
    // left-inverse residual near eps·cond where the SVD route loses digits
    let qr = p.clone().qr();
    let pinv = qr
        .r()
        .solve_upper_triangular(&qr.q().transpose())
        .ok_or(Error::RankDeficient {
            rank: cols - 1,
            expected: cols,
        })?;
    let residual = (&pinv * &p - DMatrix::<f64>::identity(cols, cols)).amax();
    if residual.is_nan() || residual >= LEFT_INVERSE_TOL {
        return Err(Error::LeftInverseResidual { residual });
    }
    let beta = lattice.beta();
    let values = pinv
        .row(plan.central_col())
        .iter()
        .map(|q| beta * q)
        .collect();
    Ok(DualAt {
        plan,
        values,
        left_inverse_residual: residual,
        rank,
    })
}

/// Offsets `pα/count`, `p = 0..count`.
pub fn continuous_offsets(alpha: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|p| p as f64 * alpha / count as f64)
        .collect()
}

/// Integer offsets `{0, …, α−1}` for an integer time step.
pub fn integer_offsets(lattice: &LatticeParams) -> Result<Vec<f64>> {
    let a = lattice.integer_alpha().ok_or_else(|| {
        Error::Divisibility(format!("alpha = {} is not an integer", lattice.alpha()))
    })?;
    Ok((0..a).map(|x| x as f64).collect())
}

/// Dual window sampled on a set of offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWindowTable {
    pub lattice: LatticeParams,
    pub l: i64,
    pub positive: usize,
    pub negative: usize,
    pub entries: Vec<DualAt>,
}

impl DualWindowTable {
    pub fn compute(
        w: &TpfftWindow,
        lattice: &LatticeParams,
        l: i64,
        offsets: &[f64],
    ) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one offset required".into(),
            ));
        }
        let entries = offsets
            .par_iter()
            .map(|&x| dual_at(w, lattice, l, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            lattice: *lattice,
            l,
            positive: w.positive_count(),
            negative: w.negative_count(),
            entries,
        })
    }

    /// Table over the integer offsets, i.e. the sampled dual `Sγ`.
    pub fn discrete(w: &TpfftWindow, lattice: &LatticeParams, l: i64) -> Result<Self> {
        Self::compute(w, lattice, l, &integer_offsets(lattice)?)
    }

    /// `[(−rm − L − 1)/β, (rn + L + 1)/β]`, which contains the support.
    pub fn support_bound(&self) -> (f64, f64) {
        let r = self.entries[0].plan.r;
        let beta = self.lattice.beta();
        let (m, n) = (self.positive as i64, self.negative as i64);
        (
            (-r * m - self.l - 1) as f64 / beta,
            (r * n + self.l + 1) as f64 / beta,
        )
    }

    /// Smallest interval containing every stored support point.
    pub fn support_interval(&self) -> (f64, f64) {
        let alpha = self.lattice.alpha();
        self.entries
            .iter()
            .flat_map(|e| e.points(alpha).map(|(t, _)| t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
                (lo.min(t), hi.max(t))
            })
    }

    /// Largest `max |P^+ P − I|` across offsets.
    pub fn max_left_inverse_residual(&self) -> f64 {
        self.entries
            .iter()
            .fold(0.0_f64, |acc, e| acc.max(e.left_inverse_residual))
    }

    /// All `(x, i, x + αi, γ)` rows in offset order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, i64, f64, f64)> + '_ {
        let alpha = self.lattice.alpha();
        self.entries.iter().flat_map(move |e| {
            e.plan
                .points(alpha)
                .zip(&e.values)
                .map(move |((i, t), &v)| (e.plan.x, i, t, v))
        })
    }

    /// `Sγ` on the integers; requires an integer `α` and offsets `{0..α−1}`.
    pub fn sampled(&self) -> Result<SampledSignal> {
        let a = self.lattice.integer_alpha().ok_or_else(|| {
            Error::Divisibility(format!(
                "alpha = {} is not an integer",
                self.lattice.alpha()
            ))
        })?;
        let mut by_index: BTreeMap<i64, f64> = BTreeMap::new();
        let mut seen = vec![false; a as usize];
        for e in &self.entries {
            let x = e.plan.x;
            if x.fract() != 0.0 {
                continue;
            }
            seen[x as usize] = true;
            for (i, &v) in (e.plan.i1..=e.plan.i2).zip(&e.values) {
                by_index.insert(x as i64 + a * i, v);
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidParameter(
                "table does not cover every integer offset".into(),
            ));
        }
        let (&start, _) = by_index.first_key_value().expect("nonempty table");
        let (&last, _) = by_index.last_key_value().expect("nonempty table");
        let values = (start..=last)
            .map(|n| by_index.get(&n).copied().unwrap_or(0.0))
            .collect();
        Ok(SampledSignal {
            start,
            step: 1.0,
            values,
        })
    }
}

/// Size of the discontinuity of `γ` at an offset where `i1` or `i2` changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDiagnostic {
    pub x: f64,
    /// `max_i |γ(x⁻ + αi) − γ(x⁺ + αi)|`
    pub size: f64,
}

/// Offsets in `[0, α)` at which the plan's `i1` or `i2` changes.
pub fn jump_offsets(lattice: &LatticeParams, m: usize, n: usize, l: i64) -> Result<Vec<f64>> {
    let plan = plan_support(lattice, m, n, l, 0.0)?;
    let ab = lattice.product();
    let alpha = lattice.alpha();
    let mut xs: Vec<f64> = [
        (plan.k1 + m as i64 - 1) as f64 / ab,
        (plan.k2 - n as i64 + 1) as f64 / ab,
    ]
    .iter()
    .map(|c| {
        let f = c - c.floor();
        let f = if (1e-12..=1.0 - 1e-12).contains(&f) {
            f
        } else {
            0.0
        };
        alpha * f
    })
    .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * alpha);
    Ok(xs)
}

/// One-sided jump sizes of `γ` at every index-change offset.
pub fn jump_diagnostics(
    w: &TpfftWindow,
    lattice: &LatticeParams,
    l: i64,
) -> Result<Vec<JumpDiagnostic>> {
    let alpha = lattice.alpha();
    let eps = 1e-9 * alpha;
    let (m, n) = (w.positive_count(), w.negative_count());
    jump_offsets(lattice, m, n, l)?
        .into_iter()
        .map(|xj| {
            let (left_x, shift) = if xj - eps < 0.0 {
                (xj - eps + alpha, 1)
            } else {
                (xj - eps, 0)
            };
            let left = dual_at(w, lattice, l, left_x)?;
            let right = dual_at(w, lattice, l, xj + eps)?;
            let mut side: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
            for (i, &v) in (left.plan.i1..=left.plan.i2).zip(&left.values) {
                side.entry(i + shift).or_default().0 = v;
            }
            for (i, &v) in (right.plan.i1..=right.plan.i2).zip(&right.values) {
                side.entry(i).or_default().1 = v;
            }
            let size = side
                .values()
                .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
            Ok(JumpDiagnostic { x: xj, size })
        })
        .collect()
}

/// Schoenberg–Whitney interlacing `y_{i−n} < x_i < y_{i+m}` for `1 ≤ i ≤ N`,
/// with `y_k = −∞` for `k ≤ 0` and `y_k = +∞` for `k > N`.
pub fn sw_check(xs: &[f64], ys: &[f64], m: usize, n: usize) -> Result<bool> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    Ok((0..xs.len()).all(|i| sw_window(ys, i, m, n).contains(xs[i])))
}

struct OpenInterval(f64, f64);

impl OpenInterval {
    fn contains(&self, v: f64) -> bool {
        self.0 < v && v < self.1
    }
}

/// Admissible open interval for the zero-based position `i`.
fn sw_window(ys: &[f64], i: usize, m: usize, n: usize) -> OpenInterval {
    let big_n = ys.len();
    let lo = if i >= n { ys[i - n] } else { f64::NEG_INFINITY };
    let hi = if i + m < big_n {
        ys[i + m]
    } else {
        f64::INFINITY
    };
    OpenInterval(lo, hi)
}

/// Increasing selection of `ys.len()` points from `xs` that interlaces with
/// `ys` in the Schoenberg–Whitney sense, if one exists.
pub fn sw_selection(xs: &[f64], ys: &[f64], m: usize, n: usize) -> Option<Vec<usize>> {
    let mut picked = Vec::with_capacity(ys.len());
    let mut next = 0;
    for i in 0..ys.len() {
        let window = sw_window(ys, i, m, n);
        while next < xs.len() && xs[next] <= window.0 {
            next += 1;
        }
        if next < xs.len() && window.contains(xs[next]) {
            picked.push(next);
            next += 1;
        } else {
            return None;
        }
    }
    Some(picked)
}

/// Largest deviation from the discrete Wexler–Raz relations
/// `⟨γ, M_{l/a} T_{kM} g⟩ = (a/M) δ_{k,0} δ_{l,0}` over `|k| ≤ kmax`, `0 ≤ l < l_count`.
pub fn wexler_raz_discrete(
    g: &SampledSignal,
    gamma: &SampledSignal,
    a: usize,
    m: usize,
    kmax: i64,
    l_count: usize,
) -> Result<f64> {
    if a == 0 || m == 0 {
        return Err(Error::InvalidParameter("a and M must be positive".into()));
    }
    if a >= m {
        return Err(Error::Density {
            product: a as f64 / m as f64,
        });
    }
    let expected = a as f64 / m as f64;
    let mut worst = 0.0_f64;
    for k in -kmax..=kmax {
        for l in 0..l_count {
            let target = if k == 0 && l == 0 { expected } else { 0.0 };
            let v = wexler_raz_pairing(g, gamma, a, m, k, l as i64);
            worst = worst.max((v - target).norm());
        }
    }
    Ok(worst)
}

/// `⟨γ, M_{l/a} T_{kM} g⟩ = Σ_n γ(n) g(n − kM) e^{−2πj l n/a}` for real sequences.
pub fn wexler_raz_pairing(
    g: &SampledSignal,
    gamma: &SampledSignal,
    a: usize,
    m: usize,
    k: i64,
    l: i64,
) -> Complex64 {
    let shift = k * m as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, gv) in gamma.indexed() {
        let gs = g.at(n - shift);
        if gs == 0.0 || gv == 0.0 {
            continue;
        }
        let turns = (l * n).rem_euclid(a as i64) as f64 / a as f64;
        acc += gv * gs * Complex64::from_polar(1.0, -2.0 * PI * turns);
    }
    acc
}
