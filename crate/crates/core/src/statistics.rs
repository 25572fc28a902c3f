//! Normalized counting statistics and their Monte Carlo summaries.
//!
//! Circular samples are summarized over every arc `(θ_j, θ_l]` with `j < l`;
//! Jacobi samples over the caps `[2 cos θ_j, 2]`. Both are centered at the
//! mean count and scaled by `sqrt(π²β / ln n)`, which leaves a limiting
//! variance of 2 for an arc (two independent endpoint fluctuations) and 1 for
//! a cap.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::ensembles::{arc_count_from_phases, cap_count_from_phase, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::prufer::terminal_phases;
use crate::rng::run_trials;

/// Which scaling turns a count (or phase) into a fluctuation statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `sqrt(π²β / ln n) · (count − mean count)`.
    #[default]
    Theorem,
    /// `sqrt(β / (4 ln n)) · (ψ − mean phase)`, read off the unwrapped
    /// phase instead of the integer count. Differs from `Theorem` by the
    /// rounding of `ψ / 2π` only.
    Section4,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Theorem => "theorem",
            Self::Section4 => "section4",
        })
    }
}

/// `sqrt(π²β / ln n)`. Takes `n` as a real so the scale can be evaluated
/// off the integers.
pub fn count_scale(n: f64, beta: f64) -> f64 {
    (PI * PI * beta / n.ln()).sqrt()
}

fn phase_scale(n: f64, beta: f64) -> f64 {
    (beta / (4.0 * n.ln())).sqrt()
}

/// `sqrt(π²β / ln n) · (count − n(hi − lo)/2π)`.
pub fn normalize_circular(count: usize, n: usize, beta: f64, theta_lo: f64, theta_hi: f64) -> f64 {
    let mean = n as f64 * (theta_hi - theta_lo) / TAU;
    count_scale(n as f64, beta) * (count as f64 - mean)
}

/// `sqrt(π²β / ln n) · (count − nθ/π)`.
pub fn normalize_jacobi(count: usize, n: usize, beta: f64, theta: f64) -> f64 {
    count_scale(n as f64, beta) * (count as f64 - n as f64 * theta / PI)
}

/// Phase form of [`normalize_circular`]: `ψ(hi) − ψ(lo)` against `n(hi − lo)`.
pub fn normalize_circular_phase(psi_lo: f64, psi_hi: f64, n: usize, beta: f64, theta_lo: f64, theta_hi: f64) -> f64 {
    phase_scale(n as f64, beta) * (psi_hi - psi_lo - n as f64 * (theta_hi - theta_lo))
}

/// Phase form of [`normalize_jacobi`]: `ψ_{2n-1}(θ) + π` against `2nθ + π`,
/// i.e. the count times 2π before rounding.
pub fn normalize_jacobi_phase(psi: f64, n: usize, beta: f64, theta: f64) -> f64 {
    phase_scale(n as f64, beta) * (psi - 2.0 * n as f64 * theta)
}

/// One column of a fluctuation experiment: an arc for circular samples, a
/// cap `[2 cos θ, 2]` (reported by its angle) for Jacobi ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Window {
    Arc { theta_lo: f64, theta_hi: f64 },
    Cap { theta: f64 },
}

/// Per-trial counts and normalized statistics, stored row-major as
/// `trials × columns`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSample {
    pub spec: EnsembleSpec,
    pub thetas: Vec<f64>,
    pub windows: Vec<Window>,
    pub normalization: Normalization,
    pub trials: usize,
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl FluctuationSample {
    pub fn columns(&self) -> usize {
        self.windows.len()
    }

    pub fn row(&self, trial: usize) -> &[f64] {
        let j = self.columns();
        &self.values[trial * j..(trial + 1) * j]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.values.iter().skip(col).step_by(self.columns()).copied().collect()
    }

    pub fn count_column(&self, col: usize) -> Vec<usize> {
        self.counts.iter().skip(col).step_by(self.columns()).copied().collect()
    }

    /// Limiting variance of each column: 2 for an arc, 1 for a cap.
    pub fn limit_variance(&self) -> f64 {
        match self.spec.kind {
            EnsembleKind::Circular => 2.0,
            EnsembleKind::Jacobi => 1.0,
        }
    }
}

/// The arcs `(θ_j, θ_l]`, `j < l`, or the caps at each `θ_j`.
pub fn windows_for(kind: EnsembleKind, thetas: &[f64]) -> Result<Vec<Window>> {
    if thetas.is_empty() {
        return Err(Error::Config("at least one angle is required".into()));
    }
    if thetas.iter().any(|t| !t.is_finite()) || thetas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("angles must be finite, sorted and distinct: {thetas:?}")));
    }
    match kind {
        EnsembleKind::Circular => {
            if thetas.len() < 2 {
                return Err(Error::Config("circular arcs need at least two angles".into()));
            }
            if !(thetas[0] > -PI && thetas[thetas.len() - 1] < PI) {
                return Err(Error::Config(format!("circular angles must lie in (-π, π): {thetas:?}")));
            }
            let mut out = Vec::new();
            for (j, &lo) in thetas.iter().enumerate() {
                for &hi in &thetas[j + 1..] {
                    out.push(Window::Arc {
                        theta_lo: lo,
                        theta_hi: hi,
                    });
                }
            }
            Ok(out)
        }
        EnsembleKind::Jacobi => {
            if !(thetas[0] > 0.0 && thetas[thetas.len() - 1] < PI) {
                return Err(Error::Config(format!("Jacobi angles must lie in (0, π): {thetas:?}")));
            }
            Ok(thetas.iter().map(|&theta| Window::Cap { theta }).collect())
        }
    }
}

/// Draws `trials` paths and evaluates every window from one terminal phase
/// per angle. Rows are in trial order whatever the worker count.
pub fn run_fluctuation_experiment(
    spec: &EnsembleSpec,
    thetas: &[f64],
    trials: usize,
    seed: u64,
    normalization: Normalization,
    workers: Option<usize>,
) -> Result<FluctuationSample> {
    spec.validate()?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if spec.n < 2 {
        return Err(Error::Config("fluctuation statistics need n ≥ 2".into()));
    }
    let windows = windows_for(spec.kind, thetas)?;
    let (n, beta) = (spec.n, spec.beta);
    let rows = run_trials(seed, trials, workers, |_, rng| {
        let path = spec.draw_path(rng)?;
        let psi = terminal_phases(&path, thetas);
        let eta = path.eta().unwrap_or(0.0);
        let mut counts = Vec::with_capacity(windows.len());
        let mut values = Vec::with_capacity(windows.len());
        for (j, &lo) in thetas.iter().enumerate() {
            match spec.kind {
                EnsembleKind::Circular => {
                    for (l, &hi) in thetas.iter().enumerate().skip(j + 1) {
                        let c = arc_count_from_phases(psi[j], psi[l], eta);
                        counts.push(c);
                        values.push(match normalization {
                            Normalization::Theorem => normalize_circular(c, n, beta, lo, hi),
                            Normalization::Section4 => normalize_circular_phase(psi[j], psi[l], n, beta, lo, hi),
                        });
                    }
                }
                EnsembleKind::Jacobi => {
                    let c = cap_count_from_phase(psi[j]);
                    counts.push(c);
                    values.push(match normalization {
                        Normalization::Theorem => normalize_jacobi(c, n, beta, lo),
                        Normalization::Section4 => normalize_jacobi_phase(psi[j], n, beta, lo),
                    });
                }
            }
        }
        Ok((counts, values))
    })?;
    let mut counts = Vec::with_capacity(trials * windows.len());
    let mut values = Vec::with_capacity(trials * windows.len());
    for (c, v) in rows {
        counts.extend(c);
        values.extend(v);
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Degenerate(format!("non-finite statistic {bad}")));
    }
    Ok(FluctuationSample {
        spec: *spec,
        thetas: thetas.to_vec(),
        windows,
        normalization,
        trials,
        counts,
        values,
    })
}

/// Column summaries of a [`FluctuationSample`].
///
/// KS distances and p-values compare each column, divided by the square
/// root of its limiting variance, with the standard normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    pub ks_distance: Vec<f64>,
    pub ks_pvalue: Vec<f64>,
    pub skewness: Vec<f64>,
    pub excess_kurtosis: Vec<f64>,
    pub limit_variance: f64,
    pub trials: usize,
    pub n: usize,
    pub beta: f64,
}

impl ExperimentReport {
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        self.covariance[i][j] / (self.covariance[i][i] * self.covariance[j][j]).sqrt()
    }
}

/// Mean, unbiased covariance, skewness and excess kurtosis (moment
/// estimators `g1`, `g2`) and KS fit of every column.
pub fn summarize(sample: &FluctuationSample) -> Result<ExperimentReport> {
    let m = sample.trials;
    if m < 2 {
        return Err(Error::InsufficientData { needed: 2, got: m });
    }
    let j = sample.columns();
    let cols: Vec<Vec<f64>> = (0..j).map(|c| sample.column(c)).collect();
    let mean: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / m as f64).collect();
    for (c, col) in cols.iter().enumerate() {
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::Degenerate(format!("column {c} is constant ({})", col[0])));
        }
    }
    let mut covariance = vec![vec![0.0; j]; j];
    for a in 0..j {
        for b in a..j {
            let s: f64 = cols[a]
                .iter()
                .zip(&cols[b])
                .map(|(x, y)| (x - mean[a]) * (y - mean[b]))
                .sum();
            covariance[a][b] = s / (m - 1) as f64;
            covariance[b][a] = covariance[a][b];
        }
    }
    let mut skewness = Vec::with_capacity(j);
    let mut excess_kurtosis = Vec::with_capacity(j);
    let mut ks_distance = Vec::with_capacity(j);
    let mut ks_pvalue = Vec::with_capacity(j);
    let sd_limit = sample.limit_variance().sqrt();
    for (c, col) in cols.iter().enumerate() {
        let (g1, g2) = shape_moments(col, mean[c]);
        skewness.push(g1);
        excess_kurtosis.push(g2);
        let scaled: Vec<f64> = col.iter().map(|v| v / sd_limit).collect();
        let (d, p) = if scaled.len() >= KS_MIN_SAMPLES {
            ks_statistic(&scaled, standard_normal_cdf)?
        } else {
            (f64::NAN, f64::NAN)
        };
        ks_distance.push(d);
        ks_pvalue.push(p);
    }
    Ok(ExperimentReport {
        mean,
        covariance,
        ks_distance,
        ks_pvalue,
        skewness,
        excess_kurtosis,
        limit_variance: sample.limit_variance(),
        trials: m,
        n: sample.spec.n,
        beta: sample.spec.beta,
    })
}

fn shape_moments(xs: &[f64], mean: f64) -> (f64, f64) {
    let m = xs.len() as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= m;
    m3 /= m;
    m4 /= m;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

const KS_MIN_SAMPLES: usize = 8;
const KOLMOGOROV_TERMS: usize = 100;

/// `P(K > λ)` for the Kolmogorov distribution.
///
/// The alternating series converges fast for large `λ`; below 1 the theta
/// transformed form is used instead.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        let a = -PI * PI / (8.0 * lambda * lambda);
        let cdf: f64 = (1..=KOLMOGOROV_TERMS)
            .map(|k| {
                let odd = (2 * k - 1) as f64;
                (a * odd * odd).exp()
            })
            .sum::<f64>()
            * TAU.sqrt()
            / lambda;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let tail: f64 = (1..=KOLMOGOROV_TERMS)
        .map(|k| {
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * kf * kf * lambda * lambda).exp()
        })
        .sum();
    (2.0 * tail).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test: `(sup |F_m − F|, P(K > √m d))`.
pub fn ks_statistic<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> Result<(f64, f64)> {
    if values.len() < KS_MIN_SAMPLES {
        return Err(Error::InsufficientData {
            needed: KS_MIN_SAMPLES,
            got: values.len(),
        });
    }
    if let Some(bad) = values.iter().find(|v| v.is_nan()) {
        return Err(Error::Domain(format!("KS input contains {bad}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / m).max((i + 1) as f64 / m - f);
    }
    let d = d.clamp(0.0, 1.0);
    Ok((d, kolmogorov_survival(m.sqrt() * d)))
}
