use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tpgabor::discretize::{periodize_closed, periodized_samples, qkn_window, sample_truncated};
use tpgabor::dual::{continuous_offsets, jump_diagnostics};
use tpgabor::finite::reconstruct;
use tpgabor::zak::{critical_bounds, find_zak_zero};
use tpgabor::{
    CriticalOptions, DualWindowTable, FiniteGaborSystem, LatticeParams, SampledSignal, Setting,
    TpfftWindow, WindowSpec, ZakGrid,
};

use crate::output::Payload;
use crate::parse::to_f64;
use crate::{
    Cli, CliError, Command, DualCmd, DualKind, FrameCheckCmd, ReconstructCmd, Space, UsageError,
    WindowCmd, WindowOpts, ZakCmd,
};

type Res<T> = std::result::Result<T, CliError>;

/// Residual below which a located Zak zero is accepted.
const ZERO_TOL: f64 = 1e-8;

pub(crate) fn execute(cli: &Cli) -> Res<Value> {
    let (name, (mut summary, payload)) = match &cli.command {
        Command::Window(c) => ("window", window(c)?),
        Command::Zak(c) => ("zak", zak(c)?),
        Command::Dual(c) => ("dual", dual(c)?),
        Command::FrameCheck(c) => ("frame-check", frame_check(c, cli.out.is_some())?),
        Command::Reconstruct(c) => ("reconstruct", reconstruct_trials(c)?),
    };
    summary["command"] = json!(name);
    summary["status"] = json!("ok");
    if let (Some(path), Some(payload)) = (&cli.out, payload) {
        payload.save(path, cli.format)?;
        summary["out"] = json!(path.display().to_string());
    }
    Ok(summary)
}

fn build_window(opts: &WindowOpts) -> Res<TpfftWindow> {
    let spec = match (&opts.source.delta, &opts.source.spec) {
        (Some(d), _) => WindowSpec {
            deltas: d.0.clone(),
            scale: 1.0,
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| UsageError::new("--spec", e.to_string()))?
        }
        (None, None) => return Err(UsageError::new("--delta", "a window is required").into()),
    };
    let scale = opts.scale.map(to_f64).unwrap_or(spec.scale);
    let w = match opts.perturb {
        Some(eps) if !(eps > 0.0 && eps < 1e-2) => {
            return Err(
                UsageError::new("--perturb", format!("expected 0 < eps < 1e-2, got {eps}")).into(),
            )
        }
        Some(eps) => TpfftWindow::perturbed(&spec.deltas, scale, eps)?,
        None => TpfftWindow::new(&spec.deltas, scale)?,
    };
    Ok(w)
}

fn describe(w: &TpfftWindow) -> Value {
    json!({
        "deltas": w.deltas(),
        "scale": w.scale(),
        "order": w.order(),
        "positive": w.positive_count(),
        "negative": w.negative_count(),
        "is_even": w.is_even(),
    })
}

fn window(c: &WindowCmd) -> Res<(Value, Option<Payload>)> {
    if c.range.is_none() && c.sample.is_none() {
        return Err(UsageError::new("--range", "one of --range or --sample is required").into());
    }
    if let Some((a, b)) = c.range {
        let step = c
            .step
            .ok_or_else(|| UsageError::new("--step", "--range requires --step"))?;
        let count = ((b - a) / step).floor().to_integer();
        if count > 10_000_000 {
            return Err(UsageError::new("--step", "more than 10^7 points").into());
        }
        let w = build_window(&c.window)?;
        let points = (0..=count)
            .map(|i| {
                let x = to_f64(a + step * Rational64::from_integer(i));
                w.eval(x).map(|v| (x, v))
            })
            .collect::<tpgabor::Result<Vec<_>>>()?;
        let max = points.iter().fold(0.0_f64, |m, p| m.max(p.1));
        let summary = json!({
            "window": describe(&w),
            "range": [to_f64(a), to_f64(b)],
            "step": to_f64(step),
            "points": points.len(),
            "max": max,
        });
        return Ok((summary, Some(Payload::Curve(points))));
    }
    let h = c.sample.expect("checked above");
    let w = build_window(&c.window)?;
    let Some(period) = c.period else {
        let s = sample_truncated(&w, to_f64(h))?;
        let summary = json!({
            "window": describe(&w),
            "step": to_f64(h),
            "samples": s.len(),
            "first_index": s.start,
            "last_index": s.end(),
        });
        return Ok((summary, Some(Payload::Signal(s))));
    };
    if *h.numer() != 1 {
        return Err(UsageError::new("--sample", "with --period the step must be 1/N").into());
    }
    if period == 0 {
        return Err(UsageError::new("--period", "must be positive").into());
    }
    let n = *h.denom() as usize;
    let values = if c.normalize {
        qkn_window(&w, period, n)?
    } else {
        (0..period * n)
            .map(|l| periodize_closed(&w, period as f64, l as f64 / n as f64))
            .collect::<tpgabor::Result<Vec<_>>>()?
    };
    let energy: f64 = values.iter().map(|v| v * v).sum();
    let summary = json!({
        "window": describe(&w),
        "step": to_f64(h),
        "period": period,
        "samples": values.len(),
        "normalized": c.normalize,
        "energy": energy,
    });
    let s = SampledSignal {
        start: 0,
        step: to_f64(h),
        values,
    };
    Ok((summary, Some(Payload::Signal(s))))
}

fn zak(c: &ZakCmd) -> Res<(Value, Option<Payload>)> {
    let w = build_window(&c.window)?;
    let alpha = to_f64(c.alpha);
    let (nx, nxi) = c.grid;
    let grid = ZakGrid::compute(&w, alpha, nx, nxi)?;
    let (lo, hi) = grid.abs2_range();
    let zero = find_zak_zero(&w, alpha, ZERO_TOL)?;
    let summary = json!({
        "window": describe(&w),
        "alpha": alpha,
        "grid": [nx, nxi],
        "abs2_min": lo,
        "abs2_max": hi,
        "zero": { "x0": zero.x0, "xi0": zero.xi0, "residual": zero.residual },
    });
    Ok((summary, Some(Payload::Zak(grid))))
}

fn dual(c: &DualCmd) -> Res<(Value, Option<Payload>)> {
    let lattice = LatticeParams::exact(c.alpha, c.beta)?;
    let alpha = lattice.alpha();
    let offsets = match (c.xgrid, &c.x_values) {
        (Some(0), _) => return Err(UsageError::new("--xgrid", "must be positive").into()),
        (Some(n), _) => continuous_offsets(alpha, n),
        (None, Some(list)) => {
            let zero = Rational64::from_integer(0);
            if list.0.iter().any(|&x| x < zero || x >= c.alpha) {
                return Err(UsageError::new("--x-values", "offsets must lie in [0, alpha)").into());
            }
            list.0.iter().map(|&x| to_f64(x)).collect()
        }
        (None, None) => {
            return Err(
                UsageError::new("--xgrid", "one of --xgrid or --x-values is required").into(),
            )
        }
    };
    let w = build_window(&c.window)?;
    let l = i64::from(c.l);
    let table = DualWindowTable::compute(&w, &lattice, l, &offsets)?;
    let jumps = jump_diagnostics(&w, &lattice, l)?;
    let plan = &table.entries[0].plan;
    let (lo, hi) = table.support_interval();
    let (blo, bhi) = table.support_bound();
    let summary = json!({
        "window": describe(&w),
        "alpha": alpha,
        "beta": lattice.beta(),
        "L": l,
        "r": plan.r,
        "k1": plan.k1,
        "k2": plan.k2,
        "offsets": offsets.len(),
        "support_interval": [lo, hi],
        "support_bound": [blo, bhi],
        "support_within_bound": blo <= lo && hi <= bhi,
        "max_left_inverse_residual": table.max_left_inverse_residual(),
        "jumps": jumps.iter().map(|j| json!({ "x": j.x, "size": j.size })).collect::<Vec<_>>(),
        "max_jump": jumps.iter().fold(0.0_f64, |m, j| m.max(j.size)),
    });
    Ok((summary, Some(Payload::Dual(table))))
}

fn check_divides(len: usize, step: usize, flag: &'static str, name: &str) -> Res<()> {
    if step == 0 {
        return Err(UsageError::new(flag, "must be positive").into());
    }
    if !len.is_multiple_of(step) {
        return Err(
            UsageError::new(flag, format!("L/{name} = {len}/{step} is not an integer")).into(),
        );
    }
    Ok(())
}

fn frame_check(c: &FrameCheckCmd, has_out: bool) -> Res<(Value, Option<Payload>)> {
    let m = c.m;
    if c.space != Space::Cl {
        if c.a.is_some_and(|a| a != m) {
            return Err(
                UsageError::new("--a", "this space is checked at critical density a = M").into(),
            );
        }
        if has_out {
            return Err(UsageError::new("--out", "no data payload for this space").into());
        }
    }
    let opts = CriticalOptions::default();
    match c.space {
        Space::Cl => {
            let len = c
                .len
                .ok_or_else(|| UsageError::new("--L", "required for --space cl"))?;
            let a =
                c.a.ok_or_else(|| UsageError::new("--a", "required for --space cl"))?;
            if len == 0 {
                return Err(UsageError::new("--L", "must be positive").into());
            }
            check_divides(len, a, "--a", "a")?;
            check_divides(len, m, "--M", "M")?;
            let w = build_window(&c.window)?;
            let sys = FiniteGaborSystem::from_real(&periodized_samples(&w, len)?, a, m)?;
            let f = sys.frame_bounds();
            let r = sys.riesz_bounds();
            let mut summary = json!({
                "window": describe(&w),
                "space": "cl",
                "L": len,
                "a": a,
                "M": m,
                "vectors": sys.size(),
                "frame": { "lower": f.lower, "upper": f.upper },
                "is_frame": f.holds,
                "riesz": { "lower": r.lower, "upper": r.upper },
                "is_riesz": r.holds,
            });
            if a == m {
                let z = critical_bounds(&w, m, Some(len), Setting::Finite, opts)?;
                summary["zak"] = json!({
                    "abs2_min": z.lower,
                    "abs2_max": z.upper,
                    "normalization": "frame bounds = M * |Z_M g(k, l/L)|^2",
                });
            }
            Ok((summary, Some(Payload::Synthesis(sys))))
        }
        Space::Seq | Space::Periodic => {
            if m == 0 {
                return Err(UsageError::new("--M", "must be positive").into());
            }
            let (setting, len, name) = if c.space == Space::Seq {
                (Setting::Sequence, None, "seq")
            } else {
                let len = c
                    .len
                    .ok_or_else(|| UsageError::new("--L", "required for --space periodic"))?;
                check_divides(len, m, "--M", "M")?;
                (Setting::Periodic, Some(len), "periodic")
            };
            let w = build_window(&c.window)?;
            let b = critical_bounds(&w, m, len, setting, opts)?;
            let summary = json!({
                "window": describe(&w),
                "space": name,
                "L": len,
                "M": m,
                "abs2_min": b.lower,
                "abs2_max": b.upper,
                "argmin": [b.argmin.0, b.argmin.1],
                "is_frame": b.is_frame,
            });
            Ok((summary, None))
        }
    }
}

/// Real and imaginary parts uniform in `[-1, 1)`, drawn in that order.
pub fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn reconstruct_trials(c: &ReconstructCmd) -> Res<(Value, Option<Payload>)> {
    if c.len == 0 {
        return Err(UsageError::new("--L", "must be positive").into());
    }
    check_divides(c.len, c.a, "--a", "a")?;
    check_divides(c.len, c.m, "--M", "M")?;
    if c.trials == 0 {
        return Err(UsageError::new("--trials", "must be positive").into());
    }
    let w = build_window(&c.window)?;
    let sys = FiniteGaborSystem::from_real(&periodized_samples(&w, c.len)?, c.a, c.m)?;
    let dual = match c.dual {
        DualKind::Algorithm => {
            let lattice = LatticeParams::exact(
                Rational64::from_integer(c.a as i64),
                Rational64::new(1, c.m as i64),
            )?;
            let table = DualWindowTable::discrete(&w, &lattice, i64::from(c.dual_l))?;
            let p = table.sampled()?.periodize(c.len)?;
            sys.with_window(p.values.iter().map(|&v| Complex64::new(v, 0.0)).collect())?
        }
        DualKind::Canonical => sys.canonical_dual()?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let errors = (0..c.trials)
        .map(|_| reconstruct(&random_signal(&mut rng, c.len), &sys, &dual).map(|r| r.1))
        .collect::<tpgabor::Result<Vec<_>>>()?;
    let max = errors.iter().fold(0.0_f64, |m, &e| m.max(e));
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let summary = json!({
        "window": describe(&w),
        "L": c.len,
        "a": c.a,
        "M": c.m,
        "dual": match c.dual { DualKind::Algorithm => "algorithm", DualKind::Canonical => "canonical" },
        "dual_L": c.dual_l,
        "trials": c.trials,
        "seed": c.seed,
        "generator": "ChaCha8Rng",
        "max_rel_error": max,
        "mean_rel_error": mean,
    });
    Ok((summary, Some(Payload::Trials(errors))))
}
