//! Finite-n checks of the martingale machinery behind the fluctuation
//! limits.
//!
//! The phase splits as `ψ_m(θ) = (m+1)θ + Σ_k Υ(ψ_k, α_k)`, and the sum is
//! compared with the martingale `S(m, θ) = Σ_k Υ̃(ψ_k, α_k)` built from the
//! linear part of `Υ`. The statistics here are the conditional covariance
//! sum (stability), the conditional fourth-moment sum (moment) and the size
//! of `Σ (Υ − Υ̃)` (approximation), each evaluated along one realized
//! trajectory with `m` terms and normalized by `ln m`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::distributions::{sample_sym_beta, sample_theta, sym_beta_moments, theta_moments};
use crate::ensembles::CoefficientLaw;
use crate::error::{Error, Result};
use crate::prufer::{evolve_phase, upsilon_sc, PhaseTrajectory, VerblunskyPath};
use crate::quadrature::{integrate, Tolerance};
use crate::rng::run_trials;

/// `sup_k sqrt(k+1) · sup_ψ E|Υ(ψ, α_k)|` for Jacobi coefficients with
/// `β = 2, a = 1, b = 1.5`. Brute-force quadrature gives 1.56 for k ≤ 20
/// and the large-k limit `2 sqrt(2/π) ≈ 1.596`, rounded up.
pub const JACOBI_ABS_INCREMENT_CONSTANT: f64 = 1.6;

/// `sup_k (k+1)² · sup_ψ |E{Υ − 2α sin ψ − α² sin 2ψ}|` for the same law.
/// Quadrature peaks at 3.31 (k = 5) and tends to 2.44.
pub const JACOBI_SIGNED_REMAINDER_CONSTANT: f64 = 3.5;

/// `sup_k (k+1)^{3/2} · sup_ψ E|Υ − 2α sin ψ − α² sin 2ψ|` for the same law.
/// Quadrature peaks at 1.35 (k = 5) and tends to 1.06. The absolute
/// remainder is of order `E|α|³`, so `(k+1)^{-3/2}` is the true rate.
pub const JACOBI_ABS_REMAINDER_CONSTANT: f64 = 1.5;

fn check_terms(path: &VerblunskyPath, needed: usize) -> Result<()> {
    if path.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: path.len(),
        });
    }
    Ok(())
}

fn check_count(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("need at least 2 terms for a ln m normalization, got {m}")));
    }
    Ok(())
}

fn check_angle(law: &CoefficientLaw, theta: f64) -> Result<()> {
    let ok = match law {
        CoefficientLaw::Circular { .. } => theta.is_finite(),
        CoefficientLaw::Jacobi { .. } => 0.0 < theta && theta < PI,
    };
    if !ok {
        return Err(Error::Domain(format!("θ = {theta} is outside the domain of the ensemble")));
    }
    Ok(())
}

/// `ψ_0(θ), …, ψ_{len}(θ)` along the first `len` coefficients.
fn phases(theta: f64, path: &VerblunskyPath, len: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(len + 1);
    let mut p = theta;
    psi.push(p);
    for &alpha in &path.alphas()[..len] {
        let (s, c) = p.sin_cos();
        p += theta + upsilon_sc(s, c, alpha);
        psi.push(p);
    }
    psi
}

/// The first `len` coefficients drawn from `law`. Circular paths carry
/// `η = 0`; it plays no part in the diagnostics.
pub fn draw_coefficients<R: Rng + ?Sized>(law: &CoefficientLaw, len: usize, rng: &mut R) -> Result<VerblunskyPath> {
    match *law {
        CoefficientLaw::Circular { beta } => {
            let alphas = (0..len)
                .map(|k| sample_theta(CoefficientLaw::theta_param(beta, k), rng).value())
                .collect();
            VerblunskyPath::circular(alphas, 0.0)
        }
        CoefficientLaw::Jacobi { beta, a, b } => {
            let alphas = (0..len)
                .map(|k| sample_sym_beta(CoefficientLaw::jacobi_param(beta, a, b, k), rng))
                .collect();
            VerblunskyPath::real(alphas)
        }
    }
}

/// `S(m, θ)` for `m = 1, …, len`: running sums of `Υ̃(ψ_k(θ), α_k)`.
pub fn martingale_sum(traj: &PhaseTrajectory, path: &VerblunskyPath, law: &CoefficientLaw) -> Result<Vec<f64>> {
    let psi = traj.history().ok_or(Error::HistoryMissing)?;
    if psi.len() != path.len() + 1 {
        return Err(Error::Domain(format!(
            "trajectory has {} phases but the path has {} coefficients",
            psi.len(),
            path.len()
        )));
    }
    let mut s = 0.0;
    Ok(path
        .alphas()
        .iter()
        .zip(psi)
        .enumerate()
        .map(|(k, (&alpha, &p))| {
            s += law.upsilon_tilde(k, p, alpha);
            s
        })
        .collect())
}

/// `(1/ln m) Σ_{k<m} E{Υ̃(ψ_k(θ₁), α_k) Υ̃(ψ_k(θ₂), α_k) | past}`.
///
/// Circular: `Σ 4/(β(k+1)+2) cos(ψ_k(θ₁) − ψ_k(θ₂))`.
/// Jacobi: `Σ ε_k [cos(ψ_k(θ₁) − ψ_k(θ₂)) − cos(ψ_k(θ₁) + ψ_k(θ₂))]`.
pub fn stability_statistic(
    path: &VerblunskyPath,
    theta1: f64,
    theta2: f64,
    m: usize,
    law: &CoefficientLaw,
) -> Result<f64> {
    check_count(m)?;
    check_angle(law, theta1)?;
    check_angle(law, theta2)?;
    check_terms(path, m - 1)?;
    let p1 = phases(theta1, path, m - 1);
    let p2 = if theta1 == theta2 {
        p1.clone()
    } else {
        phases(theta2, path, m - 1)
    };
    let sum: f64 = p1
        .iter()
        .zip(&p2)
        .enumerate()
        .map(|(k, (a, b))| {
            let w = law.stability_weight(k);
            match law {
                CoefficientLaw::Circular { .. } => w * (a - b).cos(),
                CoefficientLaw::Jacobi { .. } => w * ((a - b).cos() - (a + b).cos()),
            }
        })
        .sum();
    Ok(sum / (m as f64).ln())
}

/// `E{Υ̃(ψ, α_k)⁴}` given `ψ`.
///
/// Circular: `48/((ν+1)(ν+3))`, free of `ψ`. Jacobi: `16 sin⁴ψ` times the
/// fourth central moment of `α_k`.
pub fn conditional_fourth_moment(law: &CoefficientLaw, k: usize, psi: f64) -> f64 {
    match *law {
        CoefficientLaw::Circular { beta } => 6.0 * theta_moments(CoefficientLaw::theta_param(beta, k)).m4,
        CoefficientLaw::Jacobi { beta, a, b } => {
            let mu4 = sym_beta_moments(CoefficientLaw::jacobi_param(beta, a, b, k)).central4();
            16.0 * psi.sin().powi(4) * mu4
        }
    }
}

/// `(1/ln² m) Σ_{k<m} E{Υ̃(ψ_k(θ), α_k)⁴ | past}` with the conditional
/// moments in closed form.
pub fn moment_statistic(path: &VerblunskyPath, theta: f64, m: usize, law: &CoefficientLaw) -> Result<f64> {
    check_count(m)?;
    check_angle(law, theta)?;
    let sum: f64 = match law {
        CoefficientLaw::Circular { .. } => (0..m).map(|k| conditional_fourth_moment(law, k, 0.0)).sum(),
        CoefficientLaw::Jacobi { .. } => {
            check_terms(path, m - 1)?;
            phases(theta, path, m - 1)
                .iter()
                .enumerate()
                .map(|(k, &p)| conditional_fourth_moment(law, k, p))
                .sum()
        }
    };
    let l = (m as f64).ln();
    Ok(sum / (l * l))
}

/// [`moment_statistic`] with each conditional expectation replaced by the
/// average over `draws` fresh coefficients.
pub fn moment_statistic_mc<R: Rng + ?Sized>(
    path: &VerblunskyPath,
    theta: f64,
    m: usize,
    law: &CoefficientLaw,
    draws: usize,
    rng: &mut R,
) -> Result<f64> {
    check_count(m)?;
    check_angle(law, theta)?;
    check_terms(path, m - 1)?;
    if draws == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut sum = 0.0;
    for (k, &p) in phases(theta, path, m - 1).iter().enumerate() {
        let mut acc = 0.0;
        for _ in 0..draws {
            let alpha = draw_one(law, k, rng);
            acc += law.upsilon_tilde(k, p, alpha).powi(4);
        }
        sum += acc / draws as f64;
    }
    let l = (m as f64).ln();
    Ok(sum / (l * l))
}

fn draw_one<R: Rng + ?Sized>(law: &CoefficientLaw, k: usize, rng: &mut R) -> Complex64 {
    match *law {
        CoefficientLaw::Circular { beta } => sample_theta(CoefficientLaw::theta_param(beta, k), rng).value(),
        CoefficientLaw::Jacobi { beta, a, b } => {
            Complex64::new(sample_sym_beta(CoefficientLaw::jacobi_param(beta, a, b, k), rng), 0.0)
        }
    }
}

/// Size of `R = Σ_{k<m} (Υ − Υ̃)(ψ_k(θ), α_k)` under both conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxStatistic {
    /// `|R| / sqrt(ln m)`.
    pub abs_sum: f64,
    /// `R² / ln m`.
    pub squared_sum: f64,
}

pub fn approx_statistic(path: &VerblunskyPath, theta: f64, m: usize, law: &CoefficientLaw) -> Result<ApproxStatistic> {
    check_count(m)?;
    check_angle(law, theta)?;
    check_terms(path, m)?;
    let psi = phases(theta, path, m);
    let r: f64 = path.alphas()[..m]
        .iter()
        .enumerate()
        .map(|(k, &alpha)| {
            let (s, c) = psi[k].sin_cos();
            upsilon_sc(s, c, alpha) - law.upsilon_tilde(k, psi[k], alpha)
        })
        .sum();
    let l = (m as f64).ln();
    Ok(ApproxStatistic {
        abs_sum: r.abs() / l.sqrt(),
        squared_sum: r * r / l,
    })
}

/// `|Σ_k ε_k e^{iX_k}|` against its summation-by-parts bound, with
/// `X_{k+1} = X_k + δ + Y_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Checks `|Σ ε_k e^{iX_k}| ≤ (2‖ε‖_∞ + Σ|ε_k − ε_{k−1}| + Σ|ε_k Y_k|) / |1 − e^{iδ}|`.
pub fn sum_bound_check(epsilons: &[f64], x0: f64, delta: f64, ys: &[f64]) -> Result<SumBound> {
    if !(delta > 0.0 && delta < TAU) {
        return Err(Error::Domain(format!("δ = {delta} must lie in (0, 2π)")));
    }
    if epsilons.len() != ys.len() {
        return Err(Error::Domain(format!(
            "{} weights but {} perturbations",
            epsilons.len(),
            ys.len()
        )));
    }
    let mut x = x0;
    let mut sum = Complex64::new(0.0, 0.0);
    for (&e, &y) in epsilons.iter().zip(ys) {
        sum += e * Complex64::from_polar(1.0, x);
        x += delta + y;
    }
    let sup = epsilons.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let variation: f64 = epsilons.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let drift: f64 = epsilons.iter().zip(ys).map(|(e, y)| (e * y).abs()).sum();
    let gap = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, delta)).norm();
    let lhs = sum.norm();
    let rhs = (2.0 * sup + variation + drift) / gap;
    Ok(SumBound {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-12 * rhs.max(1.0),
    })
}

/// Two-point partition function of the circular ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub quadrature: f64,
    pub closed_form: f64,
}

/// `∫∫ |e^{iφ₁} − e^{iφ₂}|^β dφ₁dφ₂/(2π)²` by quadrature against
/// `Γ(β+1)/Γ(β/2+1)²`.
///
/// The double integral depends only on `u = φ₁ − φ₂` and is symmetric
/// about `π`, so it equals `(1/π) ∫_0^π (2 sin(u/2))^β du`; `u = πv²`
/// removes the `u^β` endpoint behaviour.
pub fn partition_check(beta: f64) -> Result<PartitionCheck> {
    crate::error::check_param("beta", beta, beta > 0.0 && beta.is_finite(), "β > 0")?;
    let quadrature = integrate(
        |v| 2.0 * v * (2.0 * (0.5 * PI * v * v).sin()).powf(beta),
        0.0,
        1.0,
        Tolerance::default(),
    )?
    .value;
    let closed_form = (ln_gamma(beta + 1.0) - 2.0 * ln_gamma(0.5 * beta + 1.0)).exp();
    Ok(PartitionCheck {
        quadrature,
        closed_form,
    })
}

/// Which statistic a [`HypothesisTrace`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisLabel {
    StabilityDiagonal,
    StabilityCross,
    Moment,
    ApproxAbs,
    ApproxSquared,
}

impl HypothesisLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::StabilityDiagonal => "stability_diagonal",
            Self::StabilityCross => "stability_cross",
            Self::Moment => "moment",
            Self::ApproxAbs => "approx_abs",
            Self::ApproxSquared => "approx_squared",
        }
    }
}

/// Trial means of one statistic across a grid of term counts.
///
/// Cross stability is averaged in absolute value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisTrace {
    pub label: HypothesisLabel,
    pub n_values: Vec<usize>,
    pub statistic_values: Vec<f64>,
    pub target: f64,
}

/// Per-trial values of all five statistics at one term count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisRow {
    pub stability_diagonal: f64,
    pub stability_cross: f64,
    pub moment: f64,
    pub approx: ApproxStatistic,
}

/// Evaluates every statistic at each term count in `m_values`, on the
/// prefixes of one path.
pub fn hypothesis_rows(
    path: &VerblunskyPath,
    theta1: f64,
    theta2: f64,
    m_values: &[usize],
    law: &CoefficientLaw,
) -> Result<Vec<HypothesisRow>> {
    m_values
        .iter()
        .map(|&m| {
            Ok(HypothesisRow {
                stability_diagonal: stability_statistic(path, theta1, theta1, m, law)?,
                stability_cross: stability_statistic(path, theta1, theta2, m, law)?,
                moment: moment_statistic(path, theta1, m, law)?,
                approx: approx_statistic(path, theta1, m, law)?,
            })
        })
        .collect()
}

/// Trial-averaged statistics over `m_values` (sorted, each ≥ 2), with the
/// diagonal evaluated at `theta1` and the cross term at `(theta1, theta2)`.
pub fn hypothesis_traces(
    law: &CoefficientLaw,
    m_values: &[usize],
    theta1: f64,
    theta2: f64,
    trials: usize,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<HypothesisTrace>> {
    if m_values.is_empty() || m_values.windows(2).any(|w| w[0] >= w[1]) || m_values[0] < 2 {
        return Err(Error::Config(format!("term counts must be sorted, distinct and ≥ 2: {m_values:?}")));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if theta1 == theta2 {
        return Err(Error::Config("the cross statistic needs two distinct angles".into()));
    }
    check_angle(law, theta1)?;
    check_angle(law, theta2)?;
    let len = *m_values.last().expect("non-empty");
    let rows = run_trials(seed, trials, workers, |_, rng| {
        let path = draw_coefficients(law, len, rng)?;
        hypothesis_rows(&path, theta1, theta2, m_values, law)
    })?;
    let mean_of = |f: &dyn Fn(&HypothesisRow) -> f64| -> Vec<f64> {
        (0..m_values.len())
            .map(|i| rows.iter().map(|r| f(&r[i])).sum::<f64>() / trials as f64)
            .collect()
    };
    let target = 4.0 / law.beta();
    Ok(vec![
        HypothesisTrace {
            label: HypothesisLabel::StabilityDiagonal,
            n_values: m_values.to_vec(),
            statistic_values: mean_of(&|r| r.stability_diagonal),
            target,
        },
        HypothesisTrace {
            label: HypothesisLabel::StabilityCross,
            n_values: m_values.to_vec(),
            statistic_values: mean_of(&|r| r.stability_cross.abs()),
            target: 0.0,
        },
        HypothesisTrace {
            label: HypothesisLabel::Moment,
            n_values: m_values.to_vec(),
            statistic_values: mean_of(&|r| r.moment),
            target: 0.0,
        },
        HypothesisTrace {
            label: HypothesisLabel::ApproxAbs,
            n_values: m_values.to_vec(),
            statistic_values: mean_of(&|r| r.approx.abs_sum),
            target: 0.0,
        },
        HypothesisTrace {
            label: HypothesisLabel::ApproxSquared,
            n_values: m_values.to_vec(),
            statistic_values: mean_of(&|r| r.approx.squared_sum),
            target: 0.0,
        },
    ])
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// Sample mean and `sd / sqrt(len)` of at least two values.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let (mut n, mut s, mut s2) = (0.0, 0.0, 0.0);
        for x in values {
            n += 1.0;
            s += x;
            s2 += x * x;
        }
        let mean = s / n;
        let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
        Estimate {
            mean,
            se: (var / n).sqrt(),
        }
    }
}

/// How a Monte Carlo estimate must relate to its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentAudit {
    pub name: &'static str,
    pub estimate: Estimate,
    pub target: f64,
    pub relation: Relation,
}

impl MomentAudit {
    /// Within `z` standard errors of the target, or of being below it.
    pub fn passes(&self, z: f64) -> bool {
        let slack = z * self.estimate.se;
        match self.relation {
            Relation::Equal => (self.estimate.mean - self.target).abs() <= slack,
            Relation::AtMost => self.estimate.mean - slack <= self.target,
        }
    }
}

/// Monte Carlo audit of the circular increment identities for `α ~ Θ_ν`
/// at phases `ψ`, `φ`.
pub fn circular_moment_audits<R: Rng + ?Sized>(
    nu: f64,
    psi: f64,
    phi: f64,
    draws: usize,
    rng: &mut R,
) -> Result<Vec<MomentAudit>> {
    let p = crate::distributions::ThetaParam::new(nu)?;
    let alphas: Vec<Complex64> = (0..draws).map(|_| sample_theta(p, rng).value()).collect();
    let over = |f: &dyn Fn(Complex64) -> f64| Estimate::from_values(alphas.iter().map(|&a| f(a)));
    let ut = crate::prufer::upsilon_tilde_c;
    let up = |ps: f64, a: Complex64| {
        let (s, c) = ps.sin_cos();
        upsilon_sc(s, c, a)
    };
    let q = (nu + 1.0) * (nu + 3.0);
    Ok(vec![
        MomentAudit {
            name: "covariance",
            estimate: over(&|a| ut(psi, a) * ut(phi, a)),
            target: 4.0 / (nu + 1.0) * (psi - phi).cos(),
            relation: Relation::Equal,
        },
        MomentAudit {
            name: "fourth_moment",
            estimate: over(&|a| ut(psi, a).powi(4)),
            target: 48.0 / q,
            relation: Relation::Equal,
        },
        MomentAudit {
            name: "mean_increment",
            estimate: over(&|a| up(psi, a)),
            target: 0.0,
            relation: Relation::Equal,
        },
        MomentAudit {
            name: "linearization_error",
            estimate: over(&|a| (up(psi, a) - ut(psi, a)).powi(2)),
            target: 16.0 / q,
            relation: Relation::AtMost,
        },
        MomentAudit {
            name: "second_moment",
            estimate: over(&|a| up(psi, a).powi(2)),
            target: 8.0 / (nu + 1.0),
            relation: Relation::AtMost,
        },
    ])
}

/// Monte Carlo audit of the Jacobi increment bounds for `α_k` at phase
/// `ψ`, against the frozen constants (valid for `β = 2, a = 1, b = 1.5`).
pub fn jacobi_moment_audits<R: Rng + ?Sized>(
    law: &CoefficientLaw,
    k: usize,
    psi: f64,
    draws: usize,
    rng: &mut R,
) -> Result<Vec<MomentAudit>> {
    let CoefficientLaw::Jacobi { beta, a, b } = *law else {
        return Err(Error::Config("Jacobi audits need a Jacobi law".into()));
    };
    let p = CoefficientLaw::jacobi_param(beta, a, b, k);
    let alphas: Vec<f64> = (0..draws).map(|_| sample_sym_beta(p, rng)).collect();
    let over = |f: &dyn Fn(f64) -> f64| Estimate::from_values(alphas.iter().map(|&x| f(x)));
    let (s, c) = psi.sin_cos();
    let up = |x: f64| upsilon_sc(s, c, Complex64::new(x, 0.0));
    let remainder = move |x: f64| up(x) - 2.0 * x * s - x * x * (2.0 * psi).sin();
    let kp = k as f64 + 1.0;
    let mean = p.mean();
    Ok(vec![
        MomentAudit {
            name: "centred_mean",
            estimate: over(&|x| crate::prufer::upsilon_tilde_j(psi, x, mean)),
            target: 0.0,
            relation: Relation::Equal,
        },
        MomentAudit {
            name: "abs_increment",
            estimate: over(&|x| up(x).abs()),
            target: JACOBI_ABS_INCREMENT_CONSTANT / kp.sqrt(),
            relation: Relation::AtMost,
        },
        MomentAudit {
            name: "signed_remainder",
            estimate: over(&remainder),
            target: JACOBI_SIGNED_REMAINDER_CONSTANT / (kp * kp),
            relation: Relation::AtMost,
        },
        MomentAudit {
            name: "abs_remainder",
            estimate: over(&|x| remainder(x).abs()),
            target: JACOBI_ABS_REMAINDER_CONSTANT / kp.powf(1.5),
            relation: Relation::AtMost,
        },
    ])
}

/// Runs the phase recursion with history; convenience for
/// [`martingale_sum`].
pub fn trajectory(theta: f64, path: &VerblunskyPath) -> PhaseTrajectory {
    evolve_phase(theta, path, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    const CIRC2: CoefficientLaw = CoefficientLaw::Circular { beta: 2.0 };
    const JAC: CoefficientLaw = CoefficientLaw::Jacobi {
        beta: 2.0,
        a: 1.0,
        b: 1.5,
    };

    #[test]
    fn martingale_sum_needs_history() {
        let path = draw_coefficients(&CIRC2, 10, &mut stream(1, 0)).unwrap();
        let fast = evolve_phase(0.4, &path, false);
        assert_eq!(martingale_sum(&fast, &path, &CIRC2), Err(Error::HistoryMissing));
        let s = martingale_sum(&trajectory(0.4, &path), &path, &CIRC2).unwrap();
        assert_eq!(s.len(), 10);
    }

    #[test]
    fn martingale_vanishes_at_the_mean_path() {
        let (beta, a, b) = (2.0, 1.0, 1.5);
        let law = CoefficientLaw::Jacobi { beta, a, b };
        let means = (0..30).map(|k| law.mean(k)).collect();
        let path = VerblunskyPath::real(means).unwrap();
        let s = martingale_sum(&trajectory(1.1, &path), &path, &law).unwrap();
        assert!(s.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn circular_diagonal_is_deterministic() {
        let law = CoefficientLaw::Circular { beta: 2.0 };
        let m = 1 << 14;
        let path = draw_coefficients(&law, m, &mut stream(3, 0)).unwrap();
        let v = stability_statistic(&path, 0.7, 0.7, m, &law).unwrap();
        let exact: f64 = (0..m).map(|k| 4.0 / (2.0 * (k as f64 + 1.0) + 2.0)).sum::<f64>() / (m as f64).ln();
        assert!((v - exact).abs() < 1e-12);
        assert!(v > 1.7 && v < 2.1);
    }

    #[test]
    fn circular_moment_statistic_decreases() {
        let law = CoefficientLaw::Circular { beta: 2.0 };
        let path = draw_coefficients(&law, 1 << 14, &mut stream(3, 1)).unwrap();
        let a = moment_statistic(&path, 0.2, 1 << 13, &law).unwrap();
        let b = moment_statistic(&path, 0.2, 1 << 14, &law).unwrap();
        assert!(b < a);
        let law4 = CoefficientLaw::Circular { beta: 4.0 };
        assert!(moment_statistic(&path, 0.2, 1 << 14, &law4).unwrap() < 0.05);
    }

    #[test]
    fn moment_statistic_closed_form_matches_inner_monte_carlo() {
        let law = CoefficientLaw::Jacobi {
            beta: 4.0,
            a: 1.0,
            b: 1.0,
        };
        let m = 64;
        let path = draw_coefficients(&law, m, &mut stream(5, 0)).unwrap();
        let exact = moment_statistic(&path, PI / 2.0, m, &law).unwrap();
        let mc = moment_statistic_mc(&path, PI / 2.0, m, &law, 20_000, &mut stream(5, 1)).unwrap();
        assert!((exact - mc).abs() < 0.03 * exact, "{exact} vs {mc}");
    }

    #[test]
    fn zero_path_has_no_approximation_error() {
        let path = VerblunskyPath::circular(vec![Complex64::new(0.0, 0.0); 20], 0.0).unwrap();
        let r = approx_statistic(&path, 0.9, 20, &CIRC2).unwrap();
        assert_eq!((r.abs_sum, r.squared_sum), (0.0, 0.0));
    }

    #[test]
    fn length_and_domain_checks() {
        let path = draw_coefficients(&JAC, 10, &mut stream(2, 0)).unwrap();
        assert!(approx_statistic(&path, 1.0, 11, &JAC).is_err());
        assert!(approx_statistic(&path, 1.0, 10, &JAC).is_ok());
        assert!(stability_statistic(&path, 1.0, 2.0, 11, &JAC).is_ok());
        assert!(stability_statistic(&path, 1.0, 2.0, 12, &JAC).is_err());
        assert!(stability_statistic(&path, 0.0, 2.0, 5, &JAC).is_err());
        assert!(moment_statistic(&path, 1.0, 1, &JAC).is_err());
    }

    #[test]
    fn geometric_sum_bound() {
        let r = sum_bound_check(&[1.0; 9], 0.0, PI, &[0.0; 9]).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-15 && r.ok);
        assert!(sum_bound_check(&[1.0], 0.0, 0.0, &[0.0]).is_err());
        assert!(sum_bound_check(&[1.0], 0.0, TAU, &[0.0]).is_err());
        assert!(sum_bound_check(&[1.0, 2.0], 0.0, 1.0, &[0.0]).is_err());
    }

    #[test]
    fn sum_bound_along_a_circular_run() {
        let beta = 2.0;
        let m = 4096;
        let law = CoefficientLaw::Circular { beta };
        let path = draw_coefficients(&law, m, &mut stream(8, 0)).unwrap();
        let (t1, t2) = (0.3, 1.4);
        let p1 = phases(t1, &path, m);
        let p2 = phases(t2, &path, m);
        let x: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a - b).collect();
        let delta = t1 - t2 + TAU;
        let ys: Vec<f64> = x.windows(2).map(|w| w[1] - w[0] - (t1 - t2)).collect();
        let eps: Vec<f64> = (0..m).map(|k| law.stability_weight(k)).collect();
        let r = sum_bound_check(&eps, x[0], delta, &ys).unwrap();
        assert!(r.ok);
        let total: f64 = eps.iter().sum();
        assert!(r.lhs < 3.0 && total > 10.0, "{} {}", r.lhs, total);
    }

    #[test]
    fn partition_function_values() {
        for (beta, z) in [(2.0, 2.0), (4.0, 6.0)] {
            let p = partition_check(beta).unwrap();
            assert!((p.closed_form - z).abs() < 1e-12);
            assert!((p.quadrature - z).abs() < 1e-10);
        }
        let tiny = partition_check(1e-6).unwrap();
        assert!((tiny.quadrature - 1.0).abs() < 1e-5 && (tiny.closed_form - 1.0).abs() < 1e-5);
        assert!(partition_check(0.0).is_err());
    }

    #[test]
    fn traces_have_the_requested_shape() {
        let t = hypothesis_traces(&CIRC2, &[16, 64, 256], 0.3, 1.0, 8, 2, None).unwrap();
        assert_eq!(t.len(), 5);
        assert!(t.iter().all(|tr| tr.n_values.len() == 3 && tr.statistic_values.len() == 3));
        assert!(t.iter().flat_map(|tr| &tr.statistic_values).all(|v| v.is_finite()));
        assert!(hypothesis_traces(&CIRC2, &[64, 16], 0.3, 1.0, 8, 2, None).is_err());
        assert!(hypothesis_traces(&CIRC2, &[16], 0.3, 0.3, 8, 2, None).is_err());
    }

    #[test]
    fn circular_audits_hold() {
        let mut rng = stream(21, 0);
        for nu in [2.0, 5.0, 17.0] {
            for audit in circular_moment_audits(nu, 0.4, 2.1, 200_000, &mut rng).unwrap() {
                assert!(audit.passes(4.0), "ν={nu} {audit:?}");
            }
        }
    }

    #[test]
    fn jacobi_audits_hold() {
        let mut rng = stream(22, 0);
        for k in [0, 1, 2, 5, 20, 100, 1000] {
            for psi in [0.3, 1.2, 2.5] {
                for audit in jacobi_moment_audits(&JAC, k, psi, 100_000, &mut rng).unwrap() {
                    assert!(audit.passes(4.0), "k={k} ψ={psi} {audit:?}");
                }
            }
        }
    }
}
