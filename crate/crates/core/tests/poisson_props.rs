use proptest::prelude::*;
use scatterflat::exactlin::Permutation;
use scatterflat::poisson::*;
use scatterflat::Complex64;

fn planted(tones: &[(f64, f64)], r_max: f64, count: usize, window: Window) -> PeakReport {
    let samples = SpectralSamples::from_fn(r_max, count, |r| {
        Ok(tones.iter().map(|&(t, amp)| Complex64::from_polar(amp, -t * r)).sum())
    })
    .unwrap()
    .with_window(window);
    detect_peaks(&windowed_fft(&samples), DEFAULT_THRESHOLD).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_tones_are_recovered(
        t0 in 0.5f64..2.0,
        gaps in prop::array::uniform3(0.3f64..1.5),
        amps in prop::array::uniform4(0.2f64..1.0),
    ) {
        let mut ts = vec![t0];
        for g in gaps {
            ts.push(ts.last().unwrap() + g);
        }
        let tones: Vec<(f64, f64)> = ts.iter().copied().zip(amps).collect();
        let report = planted(&tones, 200.0, 4096, Window::default_gaussian(200.0));
        prop_assert_eq!(report.peaks.len(), 4);
        for (p, t) in report.peaks.iter().zip(&ts) {
            prop_assert!((p.location - t).abs() < report.resolution);
        }
    }

    #[test]
    fn reduction_invariance(eta in prop::array::uniform3(-80.0f64..80.0), t in -50.0f64..50.0, u in -50.0f64..50.0) {
        let w12: Permutation = "12".parse().unwrap();
        let moved = [eta[0] + t, eta[1] + t, eta[2] + u];
        prop_assume!((eta[0] - eta[1]).abs() > 1e-6);
        prop_assert!((sl3_reduce(&w12, eta).unwrap() - sl3_reduce(&w12, moved).unwrap()).abs() < 1e-12);
        prop_assert!(sl3_reduce_residual(&w12, eta).unwrap() < 1e-10);
        let w23: Permutation = "23".parse().unwrap();
        prop_assume!((eta[1] - eta[2]).abs() > 1e-6);
        prop_assert!(sl3_reduce_residual(&w23, eta).unwrap() < 1e-10);
    }
}

#[test]
fn window_swap_agrees_on_planted_tones() {
    let tones: Vec<(f64, f64)> = (2..=8).map(|n| (2.0 * f64::from(n).ln(), 1.0 / f64::from(n))).collect();
    let g = planted(&tones, 300.0, 8192, Window::default_gaussian(300.0));
    let h = planted(&tones, 300.0, 8192, Window::Hann);
    assert_eq!(g.peaks.len(), 7);
    for (a, t) in g.peaks.iter().zip(&tones) {
        assert!((a.location - t.0).abs() < g.resolution);
        assert!(h.peaks.iter().any(|b| (b.location - a.location).abs() < g.resolution));
    }
}

#[test]
fn phi_samples_are_healthy() {
    let s = sample_phi(100.0, 1 << 12).unwrap();
    assert!(s.unitarity_deviation < 1e-9);
    assert!(s.values.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
    assert!(sample_phi(2500.0, 1 << 12).is_err());
}

#[test]
fn synthetic_lifts() {
    let w12: Permutation = "12".parse().unwrap();
    let t0 = 1.7;
    let report = planted(&[(t0, 1.0)], 200.0, 4096, Window::default_gaussian(200.0));
    let vectors = sl3_pattern(&w12, &report).unwrap();
    assert_eq!(vectors.len(), 1);
    assert!((vectors[0][0] - t0).abs() < report.resolution);
    assert_eq!(vectors[0][0], vectors[0][1]);
    assert_eq!(vectors[0][2], 0.0);
    let flat = planted(&[(0.0, 1.0)], 200.0, 4096, Window::default_gaussian(200.0));
    assert!(sl3_pattern(&w12, &flat).unwrap().is_empty());
}
