use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use beta_ensemble::acceptance::ols_slope;
use beta_ensemble::ensembles::EnsembleSpec;
use beta_ensemble::rng::mix64;
use beta_ensemble::statistics::{run_fluctuation_experiment, summarize, Normalization, Window};

#[test]
fn arcs_sharing_an_endpoint_are_correlated_by_half() {
    let spec = EnsembleSpec::circular(1 << 14, 2.0).unwrap();
    let thetas = [-FRAC_PI_2, 0.0, FRAC_PI_2];
    let s = run_fluctuation_experiment(&spec, &thetas, 4000, 61, Normalization::Theorem, None).unwrap();
    // windows: (−π/2, 0], (−π/2, π/2], (0, π/2]
    assert_eq!(s.windows[1], Window::Arc { theta_lo: -FRAC_PI_2, theta_hi: FRAC_PI_2 });
    let r = summarize(&s).unwrap();
    let adjacent = r.correlation(0, 2);
    let nested = [r.correlation(0, 1), r.correlation(1, 2)];
    assert!(adjacent < 0.0 && (adjacent + 0.5).abs() < 0.25, "adjacent {adjacent}");
    for rho in nested {
        assert!(rho > 0.0 && (rho - 0.5).abs() < 0.25, "nested {rho}");
    }
}

#[test]
fn distinct_jacobi_caps_decorrelate() {
    let spec = EnsembleSpec::jacobi(1 << 13, 2.0, 1.0, 1.0).unwrap();
    let s = run_fluctuation_experiment(&spec, &[FRAC_PI_4, FRAC_PI_2], 4000, 62, Normalization::Theorem, None).unwrap();
    let rho = summarize(&s).unwrap().correlation(0, 1);
    assert!(rho.abs() < 0.15, "ρ = {rho}");
}

#[test]
fn count_variance_grows_like_log_n_at_beta_four() {
    let beta = 4.0;
    let ns = [1usize << 8, 1 << 10, 1 << 12, 1 << 14];
    let mut vars = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        let spec = EnsembleSpec::circular(n, beta).unwrap();
        let s = run_fluctuation_experiment(&spec, &[0.0, FRAC_PI_2], 16_000, mix64(63, i as u64), Normalization::Theorem, None)
            .unwrap();
        let c: Vec<f64> = s.count_column(0).iter().map(|&c| c as f64).collect();
        let m = c.iter().sum::<f64>() / c.len() as f64;
        vars.push(c.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (c.len() - 1) as f64);
    }
    let logs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let slope = ols_slope(&logs, &vars);
    let target = 2.0 / (PI * PI * beta);
    assert!((slope - target).abs() < 0.15 * target, "slope {slope} vs {target}");
}

#[test]
fn phase_and_count_statistics_agree_up_to_rounding() {
    for spec in [EnsembleSpec::circular(512, 1.0).unwrap(), EnsembleSpec::jacobi(512, 2.0, 1.0, 1.0).unwrap()] {
        let thetas = match spec.kind {
            beta_ensemble::ensembles::EnsembleKind::Circular => vec![-1.0, 0.5, 2.0],
            beta_ensemble::ensembles::EnsembleKind::Jacobi => vec![0.5, 2.0],
        };
        let by_count = run_fluctuation_experiment(&spec, &thetas, 300, 64, Normalization::Theorem, None).unwrap();
        let by_phase = run_fluctuation_experiment(&spec, &thetas, 300, 64, Normalization::Section4, None).unwrap();
        assert_eq!(by_count.counts, by_phase.counts);
        // |count − phase/2π| ≤ 1 per endpoint, so the statistics differ by
        // at most two count-scale units
        let unit = (PI * PI * spec.beta / (spec.n as f64).ln()).sqrt();
        for (x, y) in by_count.values.iter().zip(&by_phase.values) {
            assert!((x - y).abs() <= 2.0 * unit + 1e-12, "{x} vs {y}");
        }
    }
}

#[test]
fn summary_of_a_small_run_is_well_formed() {
    let spec = EnsembleSpec::circular(64, 2.0).unwrap();
    let s = run_fluctuation_experiment(&spec, &[0.0, 1.0, 2.0, 3.0], 200, 65, Normalization::Theorem, None).unwrap();
    assert_eq!(s.columns(), 6);
    let r = summarize(&s).unwrap();
    assert_eq!(r.covariance.len(), 6);
    for i in 0..6 {
        assert!(r.covariance[i][i] > 0.0);
        assert!((r.correlation(i, i) - 1.0).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&r.ks_pvalue[i]));
        for j in 0..6 {
            assert_eq!(r.covariance[i][j], r.covariance[j][i]);
        }
    }
}
