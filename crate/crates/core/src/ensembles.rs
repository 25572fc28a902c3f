//! Samplers for the circular and Jacobi β-ensembles and O(n) interval counts.
//!
//! Circular: independent `α_k ~ Θ_{β(k+1)+1}` for `k = 0 … n-2` and a uniform
//! boundary phase `η`; the points are the solutions of
//! `ψ_{n-1}(θ) + η ∈ 2πℤ`.
//!
//! Jacobi: independent real `α_k`, `k = 0 … 2n-2`, with
//!
//! ```text
//! α_k ~ B(kβ/4 + a, kβ/4 + b)                  k even
//! α_k ~ B((k-1)β/4 + a + b, (k+1)β/4)          k odd
//! ```
//!
//! and points `2 cos θ` for `θ ∈ (0, π)` with `ψ_{2n-1}(θ) ≡ π (mod 2π)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{sample_sym_beta, sample_theta, SymBetaParam, ThetaParam};
use crate::error::{check_param, Error, Result};
use crate::prufer::{terminal_phases, VerblunskyPath};
use crate::szego::{find_points, solve_phase_levels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Circular,
    Jacobi,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EnsembleKind::Circular => "circular",
            EnsembleKind::Jacobi => "jacobi",
        })
    }
}

/// Which ensemble, how many points, and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub beta: f64,
    /// Jacobi edge exponent at `x = 2`; ignored for circular.
    pub a: f64,
    /// Jacobi edge exponent at `x = -2`; ignored for circular.
    pub b: f64,
}

impl EnsembleSpec {
    pub fn circular(n: usize, beta: f64) -> Result<Self> {
        Self::new(EnsembleKind::Circular, n, beta, 1.0, 1.0)
    }

    pub fn jacobi(n: usize, beta: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(EnsembleKind::Jacobi, n, beta, a, b)
    }

    pub fn new(kind: EnsembleKind, n: usize, beta: f64, a: f64, b: f64) -> Result<Self> {
        let spec = Self { kind, n, beta, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "n",
                value: 0.0,
                expected: "n >= 1",
            });
        }
        check_param("beta", self.beta, self.beta > 0.0, "beta > 0")?;
        if self.kind == EnsembleKind::Jacobi {
            check_param("a", self.a, self.a > 0.0, "a > 0")?;
            check_param("b", self.b, self.b > 0.0, "b > 0")?;
        }
        Ok(())
    }

    pub fn law(&self) -> CoefficientLaw {
        match self.kind {
            EnsembleKind::Circular => CoefficientLaw::Circular { beta: self.beta },
            EnsembleKind::Jacobi => CoefficientLaw::Jacobi {
                beta: self.beta,
                a: self.a,
                b: self.b,
            },
        }
    }

    /// Number of Verblunsky coefficients in a path for this spec.
    pub fn path_len(&self) -> usize {
        match self.kind {
            EnsembleKind::Circular => self.n - 1,
            EnsembleKind::Jacobi => 2 * self.n - 1,
        }
    }

    pub fn draw_path<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<VerblunskyPath> {
        match self.kind {
            EnsembleKind::Circular => draw_circular_path(self.n, self.beta, rng),
            EnsembleKind::Jacobi => draw_jacobi_path(self.n, self.beta, self.a, self.b, rng),
        }
    }
}

/// The law of the `k`-th coefficient, independent of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CoefficientLaw {
    Circular { beta: f64 },
    Jacobi { beta: f64, a: f64, b: f64 },
}

impl CoefficientLaw {
    pub fn beta(&self) -> f64 {
        match *self {
            CoefficientLaw::Circular { beta } | CoefficientLaw::Jacobi { beta, .. } => beta,
        }
    }

    /// `Θ_ν` parameter `ν = β(k+1) + 1` of the circular coefficients.
    pub fn theta_param(beta: f64, k: usize) -> ThetaParam {
        ThetaParam::new(beta * (k as f64 + 1.0) + 1.0).expect("beta > 0 gives nu > 1")
    }

    /// `B(s, t)` parameters of the `k`-th Jacobi coefficient.
    pub fn jacobi_param(beta: f64, a: f64, b: f64, k: usize) -> SymBetaParam {
        let k = k as f64;
        let (s, t) = if k % 2.0 == 0.0 {
            (k * beta / 4.0 + a, k * beta / 4.0 + b)
        } else {
            ((k - 1.0) * beta / 4.0 + a + b, (k + 1.0) * beta / 4.0)
        };
        SymBetaParam::new(s, t).expect("beta, a, b > 0 give positive shapes")
    }

    /// `E{α_k}`; zero for the rotation-invariant circular law.
    pub fn mean(&self, k: usize) -> f64 {
        match *self {
            CoefficientLaw::Circular { .. } => 0.0,
            CoefficientLaw::Jacobi { beta, a, b } => Self::jacobi_param(beta, a, b, k).mean(),
        }
    }

    /// Coefficient `w_k` of the conditional covariance of the linearized
    /// increments: `E{Υ̃(ψ)Υ̃(φ) | past} = w_k cos(ψ-φ)` (circular) or
    /// `w_k [cos(ψ-φ) - cos(ψ+φ)]` (Jacobi).
    pub fn stability_weight(&self, k: usize) -> f64 {
        let kf = k as f64;
        match *self {
            CoefficientLaw::Circular { beta } => 4.0 / (beta * (kf + 1.0) + 2.0),
            CoefficientLaw::Jacobi { beta, a, b } => {
                let kb = kf * beta;
                let c = kb + 2.0 * a + 2.0 * b;
                let num = if k.is_multiple_of(2) {
                    4.0 * (kb + 4.0 * a) * (kb + 4.0 * b)
                } else {
                    4.0 * ((kf - 1.0) * beta + 4.0 * a + 4.0 * b) * (kf + 1.0) * beta
                };
                num / (c * c * (c + 2.0))
            }
        }
    }

    /// Linearized increment `Υ̃(ψ_k, α_k)` appropriate to the law.
    pub fn upsilon_tilde(&self, k: usize, psi: f64, alpha: Complex64) -> f64 {
        match self {
            CoefficientLaw::Circular { .. } => crate::prufer::upsilon_tilde_c(psi, alpha),
            CoefficientLaw::Jacobi { .. } => crate::prufer::upsilon_tilde_j(psi, alpha.re, self.mean(k)),
        }
    }
}

/// Circular path: `n - 1` coefficients `α_k ~ Θ_{β(k+1)+1}` and `η ~ U[0, 2π)`.
pub fn draw_circular_path<R: Rng + ?Sized>(n: usize, beta: f64, rng: &mut R) -> Result<VerblunskyPath> {
    EnsembleSpec::circular(n, beta)?;
    let alphas = (0..n - 1)
        .map(|k| sample_theta(CoefficientLaw::theta_param(beta, k), rng).value())
        .collect();
    let eta = TAU * rng.random::<f64>();
    VerblunskyPath::circular(alphas, eta)
}

/// Jacobi path: `2n - 1` real coefficients with the alternating Beta laws.
pub fn draw_jacobi_path<R: Rng + ?Sized>(
    n: usize,
    beta: f64,
    a: f64,
    b: f64,
    rng: &mut R,
) -> Result<VerblunskyPath> {
    EnsembleSpec::jacobi(n, beta, a, b)?;
    let alphas = (0..2 * n - 1)
        .map(|k| sample_sym_beta(CoefficientLaw::jacobi_param(beta, a, b, k), rng))
        .collect();
    VerblunskyPath::real(alphas)
}

/// A sorted point configuration: angles in `(-π, π)` for the circular
/// ensemble, values in `(-2, 2)` for the Jacobi ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSample {
    pub points: Vec<f64>,
    pub spec: EnsembleSpec,
}

/// Extracts the point configuration encoded by a path.
pub fn points_from_path(spec: &EnsembleSpec, path: &VerblunskyPath) -> Result<PointSample> {
    if path.len() != spec.path_len() {
        return Err(Error::Config(format!(
            "path has {} coefficients, the ensemble needs {}",
            path.len(),
            spec.path_len()
        )));
    }
    let points = match spec.kind {
        EnsembleKind::Circular => {
            let eta = path
                .eta()
                .ok_or_else(|| Error::Config("circular points need a boundary phase".into()))?;
            find_points(path, eta, spec.n - 1)?
        }
        EnsembleKind::Jacobi => {
            let degree = 2 * spec.n - 1;
            let thetas = solve_phase_levels(path, degree, 0.0, PI, PI, 2 * (degree + 1), spec.n)?;
            let mut xs: Vec<f64> = thetas.iter().map(|t| 2.0 * t.cos()).collect();
            xs.sort_by(f64::total_cmp);
            xs
        }
    };
    Ok(PointSample {
        points,
        spec: *spec,
    })
}

/// Draws a path and extracts the full point configuration.
///
/// Root finding costs O(n²) per sample; counting workloads should use
/// [`count_in_arc`] / [`count_jacobi`] instead.
pub fn sample_points<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<PointSample> {
    spec.validate()?;
    let path = spec.draw_path(rng)?;
    points_from_path(spec, &path)
}

/// Number of points in an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountStatistic {
    pub count: usize,
    pub interval: (f64, f64),
}

/// `#{m : ψ(lo) < 2πm - η ≤ ψ(hi)}`.
pub fn arc_count_from_phases(psi_lo: f64, psi_hi: f64, eta: f64) -> usize {
    let hi = ((psi_hi + eta) / TAU).floor();
    let lo = ((psi_lo + eta) / TAU).floor();
    (hi - lo).max(0.0) as usize
}

/// `N(θ) = floor((ψ_{2n-1}(θ) + π) / 2π)`.
pub fn cap_count_from_phase(psi: f64) -> usize {
    ((psi + PI) / TAU).floor().max(0.0) as usize
}

/// Points of a circular sample in the arc `(lo, hi]`, from two terminal
/// phases in O(n).
pub fn count_in_arc(path: &VerblunskyPath, theta_lo: f64, theta_hi: f64) -> Result<CountStatistic> {
    if !(-PI < theta_lo && theta_lo < theta_hi && theta_hi < PI) {
        return Err(Error::Domain(format!(
            "arc ({theta_lo}, {theta_hi}] must satisfy -π < lo < hi < π"
        )));
    }
    let eta = path
        .eta()
        .ok_or_else(|| Error::Config("arc counts need a circular path".into()))?;
    let psi = terminal_phases(path, &[theta_lo, theta_hi]);
    Ok(CountStatistic {
        count: arc_count_from_phases(psi[0], psi[1], eta),
        interval: (theta_lo, theta_hi),
    })
}

/// Points of a Jacobi sample in `[2 cos θ, 2]`, from one terminal phase.
///
/// The reported interval is in the `x` coordinate.
pub fn count_jacobi(path: &VerblunskyPath, theta: f64) -> Result<CountStatistic> {
    if !(0.0 < theta && theta < PI) {
        return Err(Error::Domain(format!("θ = {theta} must lie in (0, π)")));
    }
    if !path.is_real() || path.eta().is_some() {
        return Err(Error::Config("Jacobi counts need a real path".into()));
    }
    let psi = terminal_phases(path, &[theta])[0];
    Ok(CountStatistic {
        count: cap_count_from_phase(psi),
        interval: (2.0 * theta.cos(), 2.0),
    })
}
