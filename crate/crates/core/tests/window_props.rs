use proptest::prelude::*;
use tpgabor::TpfftWindow;

fn distinct_deltas() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0.25f64..3.0, any::<bool>()), 2..=4)
        .prop_map(|v| {
            v.into_iter()
                .map(|(mag, neg)| if neg { -mag } else { mag })
                .collect::<Vec<f64>>()
        })
        .prop_filter("well separated", |d| {
            d.iter().enumerate().all(|(i, a)| {
                d[i + 1..]
                    .iter()
                    .all(|b| (a - b).abs() > 0.05 * a.abs().max(b.abs()))
            })
        })
}

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn nonnegative_on_fine_grid(d in distinct_deltas()) {
        let w = TpfftWindow::with_deltas(&d).unwrap();
        let cb = w.decay_constant().unwrap();
        for i in -50_000..=50_000 {
            let x = i as f64 * 1e-3;
            let v = w.eval_unclamped(x).unwrap();
            prop_assert!(v >= -1e-14 * cb, "g({x}) = {v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_decay_bound(d in distinct_deltas(), t in 0.0f64..60.0, neg in any::<bool>()) {
        let w = TpfftWindow::with_deltas(&d).unwrap();
        let dmax = w.decay_length();
        let cb = w.decay_constant().unwrap();
        let x = if neg { -(dmax + t) } else { dmax + t };
        let v = w.eval(x).unwrap();
        prop_assert!(v.abs() <= cb * (-x.abs() / dmax).exp() * (1.0 + 1e-12));
    }

    #[test]
    fn continuous_at_origin(d in distinct_deltas()) {
        let w = TpfftWindow::with_deltas(&d).unwrap();
        let g0 = w.eval(0.0).unwrap();
        let e = 1e-8;
        for s in [1.0, -1.0] {
            // linear extrapolation removes the first-order slope term
            let limit = 2.0 * w.eval(s * e).unwrap() - w.eval(s * 2.0 * e).unwrap();
            prop_assert!((limit - g0).abs() < 1e-10, "side {s}: {limit} vs {g0}");
        }
    }

    #[test]
    fn scale_is_linear(d in distinct_deltas(), c in 0.1f64..10.0, x in -5.0f64..5.0) {
        let a = TpfftWindow::new(&d, 1.0).unwrap();
        let b = TpfftWindow::new(&d, c).unwrap();
        prop_assert!((b.eval(x).unwrap() - c * a.eval(x).unwrap()).abs() < 1e-13 * c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn integral_equals_fourier_at_zero(d in distinct_deltas(), c in 0.5f64..2.0) {
        let w = TpfftWindow::new(&d, c).unwrap();
        let dmax = w.decay_length();
        let cb = w.decay_constant().unwrap();
        let reach = dmax * (cb / 1e-12).ln();
        let f = |x: f64| w.eval(x).unwrap();
        let total = simpson(f, -reach, 0.0, 200_000) + simpson(f, 0.0, reach, 200_000);
        prop_assert!((total - w.fourier(0.0).re).abs() < 1e-6 * c);
    }
}

#[test]
fn convolution_of_two_sided_exponentials() {
    let a = TpfftWindow::with_deltas(&[1.0, -1.0]).unwrap();
    let b = TpfftWindow::with_deltas(&[0.5, -0.5]).unwrap();
    let ab = TpfftWindow::with_deltas(&[1.0, -1.0, 0.5, -0.5]).unwrap();
    for &x in &[-3.0, -1.2, -0.4, 0.0, 0.3, 1.0, 2.5, 6.0] {
        // split at the kinks t = 0 and t = x
        let f = |t: f64| a.eval(t).unwrap() * b.eval(x - t).unwrap();
        let (lo, hi) = (f64::min(0.0, x), f64::max(0.0, x));
        let mut conv = simpson(f, -40.0, lo, 80_000) + simpson(f, hi, 40.0 + hi, 80_000);
        if hi > lo {
            conv += simpson(f, lo, hi, 2_000);
        }
        assert!((conv - ab.eval(x).unwrap()).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn fourier_decays_monotonically() {
    let w = TpfftWindow::with_deltas(&[1.0, 0.5, 1.0 / 3.0]).unwrap();
    let mut prev = f64::INFINITY;
    for i in 1..200 {
        let v = w.fourier(i as f64 * 0.05).norm();
        assert!(v < prev);
        prev = v;
    }
}
