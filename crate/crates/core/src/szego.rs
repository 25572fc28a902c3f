//! Szegő recurrence and Blaschke products.
//!
//! This module evaluates the orthogonal polynomials directly from
//!
//! ```text
//! Φ_{k+1}(z)  = z Φ_k(z) - conj(α_k) Φ*_k(z)
//! Φ*_{k+1}(z) = Φ*_k(z)  - α_k z Φ_k(z),      Φ_0 = Φ*_0 = 1
//! ```
//!
//! and forms `B_k(z) = z Φ_k(z) / Φ*_k(z)`. It never touches the phase
//! recursion, so it serves as an independent check of [`crate::prufer`].
//! Point extraction, on the other hand, uses the unwrapped phase: it is
//! monotone in `θ`, so a grid plus bisection finds every root.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::prufer::{phase_after, VerblunskyPath};

/// `Φ_k(z)` and `Φ*_k(z)` at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyPair {
    pub phi: Complex64,
    pub phi_star: Complex64,
    pub degree: usize,
}

fn check_degree(path: &VerblunskyPath, k: usize) -> Result<()> {
    if k > path.len() {
        return Err(Error::Domain(format!(
            "degree {k} exceeds the path length {}",
            path.len()
        )));
    }
    Ok(())
}

#[inline]
fn szego_step(phi: Complex64, phi_star: Complex64, alpha: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let zphi = z * phi;
    (zphi - alpha.conj() * phi_star, phi_star - alpha * zphi)
}

/// Runs the recurrence `k` steps at `z`. No rescaling is applied.
pub fn eval_polys(path: &VerblunskyPath, z: Complex64, k: usize) -> Result<PolyPair> {
    check_degree(path, k)?;
    let (mut phi, mut phi_star) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for &alpha in &path.alphas()[..k] {
        (phi, phi_star) = szego_step(phi, phi_star, alpha, z);
    }
    Ok(PolyPair {
        phi,
        phi_star,
        degree: k,
    })
}

fn check_unimodular(z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("|z| = {} is not on the unit circle", z.norm())));
    }
    Ok(())
}

/// `B_0(z), …, B_{k_max}(z)` for `z` on the unit circle.
///
/// Both polynomials are divided by `|Φ*_k|` after every step; only their
/// ratio matters and this keeps long recursions away from overflow.
pub fn blaschke_sequence(path: &VerblunskyPath, z: Complex64, k_max: usize) -> Result<Vec<Complex64>> {
    check_unimodular(z)?;
    check_degree(path, k_max)?;
    let (mut phi, mut phi_star) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(z);
    for (k, &alpha) in path.alphas()[..k_max].iter().enumerate() {
        (phi, phi_star) = szego_step(phi, phi_star, alpha, z);
        let scale = phi_star.norm();
        if !(scale > f64::MIN_POSITIVE) || !scale.is_finite() {
            return Err(Error::Degenerate(format!(
                "|Φ*_{}(z)| = {scale:e} at z = {z}",
                k + 1
            )));
        }
        phi /= scale;
        phi_star /= scale;
        out.push(z * phi / phi_star);
    }
    Ok(out)
}

/// `B_k(z) = z Φ_k(z) / Φ*_k(z)` for `z` on the unit circle.
pub fn blaschke(path: &VerblunskyPath, z: Complex64, k: usize) -> Result<Complex64> {
    Ok(*blaschke_sequence(path, z, k)?
        .last()
        .expect("sequence holds B_0"))
}

/// Finds every `θ` in `(lo, hi)` where `ψ_degree(θ) + offset ∈ 2πℤ`.
///
/// The interval is cut into `cells` equal pieces; monotonicity of the phase
/// means each lattice level crossed inside a cell is bracketed by that cell.
pub(crate) fn solve_phase_levels(
    path: &VerblunskyPath,
    degree: usize,
    lo: f64,
    hi: f64,
    offset: f64,
    cells: usize,
    expected: usize,
) -> Result<Vec<f64>> {
    check_degree(path, degree)?;
    let width = (hi - lo) / cells as f64;
    let grid: Vec<f64> = (0..=cells).map(|i| lo + width * i as f64).collect();
    let phases: Vec<f64> = grid.iter().map(|&t| phase_after(t, path, degree)).collect();
    let mut roots = Vec::with_capacity(expected);
    for i in 0..cells {
        let (a, b) = (phases[i] + offset, phases[i + 1] + offset);
        // Levels 2πm with a < 2πm ≤ b.
        let first = (a / TAU).floor() as i64 + 1;
        let last = (b / TAU).floor() as i64;
        for m in first..=last {
            let level = TAU * m as f64 - offset;
            roots.push(bisect(path, degree, grid[i], grid[i + 1], level));
        }
    }
    if roots.len() != expected {
        return Err(Error::BracketFailure {
            expected,
            found: roots.len(),
        });
    }
    Ok(roots)
}

/// Bisection on the monotone phase down to a bracket narrower than `1e-10`
/// with phase residual below `1e-10`, or until the bracket cannot shrink.
fn bisect(path: &VerblunskyPath, degree: usize, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        let residual = phase_after(mid, path, degree) - level;
        if hi - lo < 1e-10 && residual.abs() < 1e-10 {
            break;
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let next = 0.5 * (lo + hi);
        if next == mid {
            break;
        }
        mid = next;
    }
    mid
}

/// All `θ ∈ (-π, π)` with `B_degree(e^{iθ}) = e^{-i target_phase}`, sorted.
///
/// A Blaschke product of degree `degree + 1` takes each unimodular value
/// exactly `degree + 1` times, so anything else is reported as a
/// [`Error::BracketFailure`].
pub fn find_points(path: &VerblunskyPath, target_phase: f64, degree_index: usize) -> Result<Vec<f64>> {
    if !(0.0..TAU).contains(&target_phase) {
        return Err(Error::Domain(format!("target phase {target_phase} outside [0, 2π)")));
    }
    let count = degree_index + 1;
    solve_phase_levels(path, degree_index, -PI, PI, target_phase, 4 * count, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prufer::evolve_phase;
    use crate::rng::stream;
    use rand::Rng;

    fn random_circular(seed: u64, len: usize) -> VerblunskyPath {
        let mut rng = stream(seed, 1);
        let a = (0..len)
            .map(|_| Complex64::from_polar(0.6 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>()))
            .collect();
        VerblunskyPath::circular(a, TAU * rng.random::<f64>()).unwrap()
    }

    #[test]
    fn first_polynomials() {
        let path = VerblunskyPath::circular(vec![Complex64::new(0.3, -0.4)], 1.0).unwrap();
        let z = Complex64::new(0.2, 0.5);
        let p0 = eval_polys(&path, z, 0).unwrap();
        assert_eq!((p0.phi, p0.phi_star), (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)));
        let p1 = eval_polys(&path, z, 1).unwrap();
        let a = path.alphas()[0];
        assert!((p1.phi - (z - a.conj())).norm() < 1e-15);
        assert!((p1.phi_star - (1.0 - a * z)).norm() < 1e-15);
        assert!(eval_polys(&path, z, 2).is_err());
    }

    #[test]
    fn reversed_polynomial_has_same_modulus_on_circle() {
        let path = random_circular(3, 40);
        for i in 0..16 {
            let z = Complex64::from_polar(1.0, -PI + TAU * (i as f64 + 0.3) / 16.0);
            let p = eval_polys(&path, z, 40).unwrap();
            assert!((p.phi.norm() - p.phi_star.norm()).abs() < 1e-10 * p.phi.norm());
        }
    }

    #[test]
    fn blaschke_basics() {
        let path = random_circular(5, 10);
        let z = Complex64::from_polar(1.0, 0.77);
        assert_eq!(blaschke(&path, z, 0).unwrap(), z);
        let zero = VerblunskyPath::circular(vec![Complex64::new(0.0, 0.0); 7], 0.0).unwrap();
        let b = blaschke(&zero, z, 7).unwrap();
        assert!((b - z.powi(8)).norm() < 1e-14);
        assert!(blaschke(&path, Complex64::new(0.5, 0.0), 3).is_err());
    }

    #[test]
    fn blaschke_matches_phase_recursion() {
        let path = random_circular(7, 120);
        for i in 0..64 {
            let theta = -PI + TAU * (i as f64 + 0.5) / 64.0;
            let z = Complex64::from_polar(1.0, theta);
            let seq = blaschke_sequence(&path, z, 120).unwrap();
            let traj = evolve_phase(theta, &path, true);
            for (b, psi) in seq.iter().zip(traj.history().unwrap()) {
                assert!((b.norm() - 1.0).abs() < 1e-10);
                assert!((b - Complex64::from_polar(1.0, *psi)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_path_points_are_equally_spaced() {
        let n = 9;
        let eta = 1.1;
        let zero = VerblunskyPath::circular(vec![Complex64::new(0.0, 0.0); n - 1], eta).unwrap();
        let pts = find_points(&zero, eta, n - 1).unwrap();
        let mut expected: Vec<f64> = (0..n)
            .map(|j| {
                let t = (-eta + TAU * j as f64) / n as f64;
                t - TAU * ((t + PI) / TAU).floor()
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        for (p, e) in pts.iter().zip(&expected) {
            assert!((p - e).abs() < 1e-10, "{p} vs {e}");
        }
    }

    #[test]
    fn found_points_solve_the_boundary_condition() {
        let path = crate::ensembles::draw_circular_path(50, 2.0, &mut stream(11, 0)).unwrap();
        let eta = path.eta().unwrap();
        let pts = find_points(&path, eta, 49).unwrap();
        assert_eq!(pts.len(), 50);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let target = Complex64::from_polar(1.0, -eta);
        for &t in &pts {
            let b = blaschke(&path, Complex64::from_polar(1.0, t), 49).unwrap();
            assert!((b - target).norm() < 1e-8, "{t} {}", (b - target).norm());
        }
    }

    #[test]
    fn target_phase_validation() {
        let path = random_circular(1, 3);
        assert!(find_points(&path, -0.1, 3).is_err());
        assert!(find_points(&path, TAU, 3).is_err());
    }
}
