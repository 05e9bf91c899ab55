//! Zak transform of totally positive windows.
//!
//! `Z_α g(x, ξ) = Σ_k g(x − αk) e^{2πjαkξ}` is evaluated three ways: by the
//! partial fraction closed form (distinct poles), by a divided difference over
//! the knots `a_i = 1/δ_i` (repeated poles allowed), and by a truncated series
//! that serves as an independent oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::window::{same_pole, TpfftWindow};

/// Denominator moduli below this are treated as a pole on the torus.
pub const POLE_TOL: f64 = 1e-14;

/// Highest knot multiplicity handled by [`zak_divdiff`].
pub const MAX_MULTIPLICITY: usize = 4;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Reduces `(x, ξ)` to the fundamental domain `[0,α) × [0,1/α)`.
///
/// Returns the reduced point together with the quasiperiodic phase factor `c`
/// such that `Z(x, ξ) = c · Z(x_red, ξ_red)`.
pub fn reduce_to_fundamental(alpha: f64, x: f64, xi: f64) -> (f64, f64, Complex64) {
    let mut xi_red = xi - (xi * alpha).floor() / alpha;
    if xi_red >= 1.0 / alpha || xi_red < 0.0 {
        xi_red = 0.0;
    }
    let mut n = (x / alpha).floor();
    let mut x_red = x - n * alpha;
    if x_red >= alpha {
        x_red -= alpha;
        n += 1.0;
    }
    if x_red < 0.0 {
        x_red = 0.0;
    }
    // (αnξ) reduced mod 1 before forming the phase
    let turns = (alpha * n * xi_red).rem_euclid(1.0);
    (x_red, xi_red, Complex64::from_polar(1.0, 2.0 * PI * turns))
}

/// Closed-form Zak transform for windows with distinct poles.
pub fn zak_closed(w: &TpfftWindow, alpha: f64, x: f64, xi: f64) -> Result<Complex64> {
    let weights = w.distinct_weights()?;
    check_alpha(alpha)?;
    let (xr, xir, phase) = reduce_to_fundamental(alpha, x, xi);
    let rot = Complex64::from_polar(1.0, 2.0 * PI * alpha * xir);
    let mut sum = Complex64::new(0.0, 0.0);
    for (&d, &wt) in w.deltas().iter().zip(weights) {
        if d > 0.0 {
            // w e^{-x/δ} / (1 − e^{-α/δ} e^{-2πjαξ})
            let denom = Complex64::new(1.0, 0.0) - rot.conj() * (-alpha / d).exp();
            check_denominator(denom)?;
            sum += wt * (-xr / d).exp() / denom;
        } else {
            // same term multiplied through by e^{α/δ} e^{2πjαξ}, which keeps
            // every exponent nonpositive
            let ad = d.abs();
            let denom = Complex64::new(1.0, 0.0) - rot * (-alpha / ad).exp();
            check_denominator(denom)?;
            sum += wt * ((xr - alpha) / ad).exp() * rot / denom;
        }
    }
    Ok(phase * sum)
}

/// Zak transform as a divided difference `[a_1,…,a_m | r_{x,ξ}]` with knots
/// `a_i = 1/δ_i`, where `r_{x,ξ}(y) = (−1)^{m−1} (∏ a_i) e^{−xy} / (1 − e^{−α(y + 2πjξ)})`.
///
/// Coincident knots use derivatives of `r_{x,ξ}` (up to multiplicity
/// [`MAX_MULTIPLICITY`]).
pub fn zak_divdiff(w: &TpfftWindow, alpha: f64, x: f64, xi: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    let knots = grouped_knots(w.deltas())?;
    let (xr, xir, phase) = reduce_to_fundamental(alpha, x, xi);
    let m = knots.len();
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let c = sign * w.scale() * w.deltas().iter().map(|d| 1.0 / d).product::<f64>();
    let r = RFunction {
        x: xr,
        alpha,
        phi: 2.0 * PI * alpha * xir,
        c,
    };

    let mut derivs: Vec<[Complex64; MAX_MULTIPLICITY]> = Vec::with_capacity(m);
    for &t in &knots {
        derivs.push(r.taylor(t)?);
    }
    // Newton table over sorted knots, updated in place
    let mut table: Vec<Complex64> = derivs.iter().map(|d| d[0]).collect();
    for order in 1..m {
        for i in 0..m - order {
            let (lo, hi) = (knots[i], knots[i + order]);
            table[i] = if lo == hi {
                derivs[i][order]
            } else {
                (table[i + 1] - table[i]) / (hi - lo)
            };
        }
    }
    Ok(phase * table[0])
}

/// Zak transform by whichever exact route applies to the window.
pub fn zak(w: &TpfftWindow, alpha: f64, x: f64, xi: f64) -> Result<Complex64> {
    if w.is_distinct() {
        zak_closed(w, alpha, x, xi)
    } else {
        zak_divdiff(w, alpha, x, xi)
    }
}

/// Truncated series `Σ_{|k|≤kmax} f(x − αk) e^{2πjαkξ}` for any window function.
pub fn zak_series_fn<F>(f: F, alpha: f64, x: f64, xi: f64, kmax: usize) -> Complex64
where
    F: Fn(f64) -> f64,
{
    let kmax = kmax as i64;
    (-kmax..=kmax)
        .map(|k| {
            let kf = k as f64;
            let turns = (alpha * kf * xi).rem_euclid(1.0);
            f(x - alpha * kf) * Complex64::from_polar(1.0, 2.0 * PI * turns)
        })
        .sum()
}

/// Series truncation index for which the decay tail of `w` stays below `tol/10`.
pub fn series_cutoff(w: &TpfftWindow, alpha: f64, x: f64, tol: f64) -> Result<usize> {
    let d = w.decay_length();
    let cb = w.decay_constant()?;
    let geometric = 1.0 - (-alpha / d).exp();
    let reach = d * (20.0 * cb / (tol * geometric)).ln().max(0.0);
    Ok(((x.abs() + reach) / alpha).ceil() as usize + 1)
}

/// Truncated-series oracle for the Zak transform of a window with distinct poles.
pub fn zak_series(w: &TpfftWindow, alpha: f64, x: f64, xi: f64, tol: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "series tolerance must be positive, got {tol}"
        )));
    }
    let kmax = series_cutoff(w, alpha, x, tol)?;
    let weights = w.distinct_weights()?.to_vec();
    let deltas = w.deltas().to_vec();
    let g = move |t: f64| {
        deltas
            .iter()
            .zip(&weights)
            .map(|(&d, &wt)| {
                let h = crate::window::Heaviside::eval(t * d);
                if h > 0.0 {
                    wt * h * (-t / d).exp()
                } else {
                    0.0
                }
            })
            .sum::<f64>()
    };
    Ok(zak_series_fn(g, alpha, x, xi, kmax))
}

/// `Z_α g` sampled on the fundamental domain at `x_p = pα/nx`, `ξ_q = q/(α·nxi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZakGrid {
    pub alpha: f64,
    pub nx: usize,
    pub nxi: usize,
    /// Row-major: `values[p * nxi + q]`.
    pub values: Vec<Complex64>,
}

impl ZakGrid {
    pub fn compute(w: &TpfftWindow, alpha: f64, nx: usize, nxi: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if nx == 0 || nxi == 0 {
            return Err(Error::InvalidParameter(
                "grid sizes must be positive".into(),
            ));
        }
        let values = (0..nx * nxi)
            .into_par_iter()
            .map(|idx| {
                let (p, q) = (idx / nxi, idx % nxi);
                zak(w, alpha, x_node(alpha, nx, p), xi_node(alpha, nxi, q))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            nx,
            nxi,
            values,
        })
    }

    pub fn x(&self, p: usize) -> f64 {
        x_node(self.alpha, self.nx, p)
    }

    pub fn xi(&self, q: usize) -> f64 {
        xi_node(self.alpha, self.nxi, q)
    }

    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.values[p * self.nxi + q]
    }

    pub fn abs2(&self, p: usize, q: usize) -> f64 {
        self.get(p, q).norm_sqr()
    }

    /// `(min, max)` of `|Z|²` over the grid.
    pub fn abs2_range(&self) -> (f64, f64) {
        self.values
            .iter()
            .map(|v| v.norm_sqr())
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Strict local minima of `|Z|²` below `threshold`, with periodic
    /// neighbours in both directions (`|Z|` is periodic on the torus).
    pub fn local_minima_below(&self, threshold: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.nx {
            for q in 0..self.nxi {
                let v = self.abs2(p, q);
                if v >= threshold {
                    continue;
                }
                let mut is_min = true;
                'nb: for dp in [-1i64, 0, 1] {
                    for dq in [-1i64, 0, 1] {
                        if dp == 0 && dq == 0 {
                            continue;
                        }
                        let pp = (p as i64 + dp).rem_euclid(self.nx as i64) as usize;
                        let qq = (q as i64 + dq).rem_euclid(self.nxi as i64) as usize;
                        if self.abs2(pp, qq) <= v && (pp, qq) != (p, q) {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

fn x_node(alpha: f64, nx: usize, p: usize) -> f64 {
    p as f64 * alpha / nx as f64
}

fn xi_node(alpha: f64, nxi: usize, q: usize) -> f64 {
    q as f64 / (alpha * nxi as f64)
}

/// The zero of `Z_α g` on the line `ξ = 1/(2α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZakZero {
    pub x0: f64,
    pub xi0: f64,
    pub residual: f64,
}

/// Nodes of the coarse scan preceding golden-section refinement.
pub const ZERO_SCAN_NODES: usize = 256;

/// Locates the zero of `Z_α g(·, 1/(2α))` in `[0, α)`.
///
/// The coarse scan brackets the minimizer of `|Z|` (equivalently `|Z|²`);
/// golden-section search on `|Z|` then resolves it to rounding level.
pub fn find_zak_zero(w: &TpfftWindow, alpha: f64, tol: f64) -> Result<ZakZero> {
    check_alpha(alpha)?;
    let xi0 = 1.0 / (2.0 * alpha);
    let modulus = |x: f64| zak(w, alpha, x, xi0).map(|z| z.norm());
    let h = alpha / ZERO_SCAN_NODES as f64;
    let mut best = (0usize, f64::INFINITY);
    for p in 0..ZERO_SCAN_NODES {
        let v = modulus(p as f64 * h)?;
        if v < best.1 {
            best = (p, v);
        }
    }
    let centre = best.0 as f64 * h;
    let (x, _) = golden_section(centre - h, centre + h, &modulus)?;
    let x0 = x.rem_euclid(alpha);
    let x0 = if x0 >= alpha { 0.0 } else { x0 };
    let residual = modulus(x0)?;
    if residual >= tol {
        return Err(Error::ZeroNotResolved { x0, residual, tol });
    }
    Ok(ZakZero { x0, xi0, residual })
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub(crate) fn golden_section<F>(mut a: f64, mut b: f64, f: &F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d)?;
        }
    }
    let (x, v) = if fc < fd { (c, fc) } else { (d, fd) };
    Ok((x, v))
}

/// Signal space in which the critical-density frame property is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    /// `ℓ²(ℤ)`: `k ∈ {0..M−1}`, `ξ` dense in `[0, 1/M)`.
    Sequence,
    /// `L²(𝕋_K)`: `x` dense in `[0, M)`, `ξ = l/K`.
    Periodic,
    /// `ℂ^K`: `k ∈ {0..M−1}`, `ξ = l/K`.
    Finite,
}

/// Grid resolutions and threshold for [`critical_bounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalOptions {
    pub dense_nodes: usize,
    pub frame_tol: f64,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        Self {
            dense_nodes: 4096,
            frame_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalBounds {
    /// Lower bound estimate `min |Z_M g|²` over the evaluation set.
    pub lower: f64,
    /// `max |Z_M g|²` over the evaluation set.
    pub upper: f64,
    pub is_frame: bool,
    /// Location `(x, ξ)` of the minimum.
    pub argmin: (f64, f64),
}

/// Frame bounds at critical density `α = M`, `β = 1/M` from `|Z_M g|²`.
pub fn critical_bounds(
    w: &TpfftWindow,
    m: usize,
    k: Option<usize>,
    setting: Setting,
    opts: CriticalOptions,
) -> Result<CriticalBounds> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let alpha = m as f64;
    let period_ratio = match (setting, k) {
        (Setting::Sequence, _) => None,
        (_, None) => {
            return Err(Error::InvalidParameter(
                "period K is required for periodic and finite settings".into(),
            ))
        }
        (_, Some(0)) => return Err(Error::InvalidParameter("K must be positive".into())),
        (_, Some(kk)) => {
            if kk % m != 0 {
                return Err(Error::Divisibility(format!(
                    "K/M = {kk}/{m} is not an integer"
                )));
            }
            Some((kk, kk / m))
        }
    };
    let abs2 = |x: f64, xi: f64| zak(w, alpha, x, xi).map(|z| z.norm_sqr());

    let points: Vec<(f64, f64)> = match (setting, period_ratio) {
        (Setting::Sequence, _) => {
            let n = opts.dense_nodes;
            (0..m)
                .flat_map(|kk| (0..n).map(move |q| (kk as f64, q as f64 / (alpha * n as f64))))
                .collect()
        }
        (Setting::Periodic, Some((kk, ratio))) => {
            let n = opts.dense_nodes;
            (0..ratio)
                .flat_map(|l| {
                    (0..n).map(move |p| (p as f64 * alpha / n as f64, l as f64 / kk as f64))
                })
                .collect()
        }
        (Setting::Finite, Some((kk, ratio))) => (0..m)
            .flat_map(|x| (0..ratio).map(move |l| (x as f64, l as f64 / kk as f64)))
            .collect(),
        _ => unreachable!(),
    };
    let values = points
        .par_iter()
        .map(|&(x, xi)| abs2(x, xi))
        .collect::<Result<Vec<_>>>()?;

    let (mut imin, mut upper) = (0usize, 0.0_f64);
    for (i, &v) in values.iter().enumerate() {
        if v < values[imin] {
            imin = i;
        }
        upper = upper.max(v);
    }
    let mut lower = values[imin];
    let mut argmin = points[imin];

    // a sampled minimum can sit beside a dip; refine along the dense direction
    match setting {
        Setting::Sequence => {
            let h = 1.0 / (alpha * opts.dense_nodes as f64);
            let (x, xi) = argmin;
            let (xi_ref, v) = golden_section(xi - h, xi + h, &|s| abs2(x, s))?;
            if v < lower {
                lower = v;
                argmin = (x, xi_ref.rem_euclid(1.0 / alpha));
            }
        }
        Setting::Periodic => {
            let h = alpha / opts.dense_nodes as f64;
            let (x, xi) = argmin;
            let (x_ref, v) = golden_section(x - h, x + h, &|s| abs2(s, xi))?;
            if v < lower {
                lower = v;
                argmin = (x_ref.rem_euclid(alpha), xi);
            }
        }
        Setting::Finite => {}
    }

    Ok(CriticalBounds {
        lower,
        upper,
        is_frame: lower > opts.frame_tol,
        argmin,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )))
    }
}

fn check_denominator(denom: Complex64) -> Result<()> {
    let modulus = denom.norm();
    if modulus < POLE_TOL {
        Err(Error::PoleOnTorus { modulus })
    } else {
        Ok(())
    }
}

/// Knots `1/δ_i`, sorted, with near-coincident ones snapped to a common value.
fn grouped_knots(deltas: &[f64]) -> Result<Vec<f64>> {
    let mut knots: Vec<f64> = deltas.iter().map(|d| 1.0 / d).collect();
    knots.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < knots.len() {
        let mut j = i + 1;
        while j < knots.len() && same_pole(knots[i], knots[j]) {
            knots[j] = knots[i];
            j += 1;
        }
        if j - i > MAX_MULTIPLICITY {
            return Err(Error::MultiplicityTooHigh {
                knot: knots[i],
                multiplicity: j - i,
                max: MAX_MULTIPLICITY,
            });
        }
        i = j;
    }
    Ok(knots)
}

/// `r_{x,ξ}(y) = c · e^{−xy} · u(y)` with `u(y) = 1/(1 − e^{−α(y + 2πjξ)})`.
struct RFunction {
    x: f64,
    alpha: f64,
    /// `2παξ`
    phi: f64,
    c: f64,
}

impl RFunction {
    /// Taylor coefficients `r^{(n)}(y)/n!` for `n < MAX_MULTIPLICITY`.
    ///
    /// `e^{−xy} u^{(k)}(y)` is expanded through the geometric series that
    /// converges on the side of `y`: in `q = e^{−α(y + 2πjξ)}` for `y > 0`
    /// and in `p = 1/q` for `y < 0`, so that all exponentials stay bounded.
    fn taylor(&self, y: f64) -> Result<[Complex64; MAX_MULTIPLICITY]> {
        let one = Complex64::new(1.0, 0.0);
        let a = self.alpha;
        // scaled[k] = e^{−xy} u^{(k)}(y)
        let mut scaled = [Complex64::new(0.0, 0.0); MAX_MULTIPLICITY];
        if y > 0.0 {
            let q = Complex64::from_polar((-a * y).exp(), -self.phi);
            let s = one - q;
            check_denominator(s)?;
            let e0 = (-self.x * y).exp();
            let li = polylog_neg_over_z(q, s);
            scaled[0] = e0 / s;
            for k in 1..MAX_MULTIPLICITY {
                scaled[k] = e0 * (-a).powi(k as i32) * q * li[k];
            }
        } else {
            let p = Complex64::from_polar((a * y).exp(), self.phi);
            let s = one - p;
            check_denominator(s)?;
            // e^{−xy}·p, bounded because x < α
            let p0 = Complex64::from_polar(((a - self.x) * y).exp(), self.phi);
            let li = polylog_neg_over_z(p, s);
            scaled[0] = -p0 / s;
            for k in 1..MAX_MULTIPLICITY {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                scaled[k] = p0 * (-a).powi(k as i32) * sign * li[k];
            }
        }
        // Leibniz rule with d^p/dy^p e^{−xy} = (−x)^p e^{−xy}
        let mut out = [Complex64::new(0.0, 0.0); MAX_MULTIPLICITY];
        let mut fact = 1.0;
        for n in 0..MAX_MULTIPLICITY {
            if n > 0 {
                fact *= n as f64;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..=n {
                acc += binomial(n, p) * (-self.x).powi(p as i32) * scaled[n - p];
            }
            out[n] = self.c * acc / fact;
        }
        Ok(out)
    }
}

/// `Li_{−k}(z)/z` for `k = 1, 2, 3`, given `s = 1 − z` (index 0 unused).
fn polylog_neg_over_z(z: Complex64, s: Complex64) -> [Complex64; MAX_MULTIPLICITY] {
    let s2 = s * s;
    [
        Complex64::new(0.0, 0.0),
        1.0 / s2,
        (1.0 + z) / (s2 * s),
        (1.0 + 4.0 * z + z * z) / (s2 * s2),
    ]
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
