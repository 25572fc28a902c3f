//! Prüfer phase recursion.
//!
//! For a sequence of Verblunsky coefficients `α_k` the unwrapped phase of the
//! Blaschke product `B_k(e^{iθ})` obeys
//!
//! ```text
//! ψ_0(θ) = θ,    ψ_{k+1}(θ) = ψ_k(θ) + θ + Υ(ψ_k(θ), α_k),
//! Υ(ψ, α) = -2 Im log(1 - α e^{iψ}).
//! ```
//!
//! The principal branch is used throughout; since `Re(1 - α e^{iψ}) ≥ 1 - |α| > 0`
//! the argument never crosses the cut. Phases are kept unwrapped so that the
//! winding number, and with it the eigenvalue count, can be read off directly.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// One realization of the Verblunsky coefficients `α_0, …, α_{m-1}`, plus the
/// boundary phase `η` for circular paths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerblunskyPath {
    alphas: Vec<Complex64>,
    eta: Option<f64>,
}

impl VerblunskyPath {
    /// A complex path with boundary phase `eta ∈ [0, 2π)`.
    pub fn circular(alphas: Vec<Complex64>, eta: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&eta) {
            return Err(Error::Domain(format!("boundary phase {eta} outside [0, 2π)")));
        }
        check_disk(&alphas)?;
        Ok(Self {
            alphas,
            eta: Some(eta),
        })
    }

    /// A real path; the target phase of such paths is fixed to `π`.
    pub fn real(alphas: Vec<f64>) -> Result<Self> {
        let alphas: Vec<Complex64> = alphas.into_iter().map(|a| Complex64::new(a, 0.0)).collect();
        check_disk(&alphas)?;
        Ok(Self { alphas, eta: None })
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn eta(&self) -> Option<f64> {
        self.eta
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.alphas.iter().all(|a| a.im == 0.0)
    }
}

fn check_disk(alphas: &[Complex64]) -> Result<()> {
    match alphas.iter().position(|a| !(a.norm() < 1.0)) {
        Some(k) => Err(Error::Domain(format!(
            "coefficient α_{k} = {} is not inside the unit disk",
            alphas[k]
        ))),
        None => Ok(()),
    }
}

/// `Υ(ψ, α) = -2 Im log(1 - α e^{iψ})`, in `(-π, π)`.
pub fn upsilon(psi: f64, alpha: Complex64) -> Result<f64> {
    if !(alpha.norm() < 1.0) {
        return Err(Error::Domain(format!("|α| = {} must be < 1", alpha.norm())));
    }
    let (s, c) = psi.sin_cos();
    Ok(upsilon_sc(s, c, alpha))
}

/// `Υ` given `sin ψ` and `cos ψ`.
#[inline]
pub(crate) fn upsilon_sc(sin: f64, cos: f64, alpha: Complex64) -> f64 {
    // α e^{iψ} = (a c - b s) + i (a s + b c)
    let re = alpha.re * cos - alpha.im * sin;
    let im = alpha.re * sin + alpha.im * cos;
    2.0 * im.atan2(1.0 - re)
}

/// First-order part of `Υ` for rotation-invariant coefficients:
/// `2 Im(e^{iψ} α)`.
pub fn upsilon_tilde_c(psi: f64, alpha: Complex64) -> f64 {
    let (s, c) = psi.sin_cos();
    2.0 * (alpha.re * s + alpha.im * c)
}

/// First-order centred part of `Υ` for real coefficients:
/// `2 (α - E α) sin ψ`.
pub fn upsilon_tilde_j(psi: f64, alpha: f64, mean_alpha: f64) -> f64 {
    2.0 * (alpha - mean_alpha) * psi.sin()
}

/// Values of `ψ_k(θ)` along a path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTrajectory {
    theta: f64,
    psi: Vec<f64>,
    full_history: bool,
}

impl PhaseTrajectory {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn has_history(&self) -> bool {
        self.full_history
    }

    /// `ψ_0, …, ψ_m` when computed with history.
    pub fn history(&self) -> Option<&[f64]> {
        self.full_history.then_some(self.psi.as_slice())
    }

    /// The last phase `ψ_m(θ)` where `m` is the path length.
    pub fn terminal(&self) -> f64 {
        *self.psi.last().expect("trajectory always holds ψ_0")
    }
}

/// Runs the phase recursion at `theta` over the whole path.
///
/// Takes O(m) time; memory is O(1) unless `keep_history` is set.
pub fn evolve_phase(theta: f64, path: &VerblunskyPath, keep_history: bool) -> PhaseTrajectory {
    let mut psi = theta;
    let mut history = Vec::with_capacity(if keep_history { path.len() + 1 } else { 1 });
    if keep_history {
        history.push(psi);
    }
    for &alpha in path.alphas() {
        let (s, c) = psi.sin_cos();
        psi += theta + upsilon_sc(s, c, alpha);
        if keep_history {
            history.push(psi);
        }
    }
    if !keep_history {
        history.push(psi);
    }
    PhaseTrajectory {
        theta,
        psi: history,
        full_history: keep_history,
    }
}

/// `ψ_k(θ)` after the first `steps` coefficients of the path.
pub fn phase_after(theta: f64, path: &VerblunskyPath, steps: usize) -> f64 {
    let mut psi = theta;
    for &alpha in &path.alphas()[..steps] {
        let (s, c) = psi.sin_cos();
        psi += theta + upsilon_sc(s, c, alpha);
    }
    psi
}

/// Terminal phases at several angles in a single pass over the path.
pub fn terminal_phases(path: &VerblunskyPath, thetas: &[f64]) -> Vec<f64> {
    let mut psi = thetas.to_vec();
    for &alpha in path.alphas() {
        for (p, &theta) in psi.iter_mut().zip(thetas) {
            let (s, c) = p.sin_cos();
            *p += theta + upsilon_sc(s, c, alpha);
        }
    }
    psi
}
