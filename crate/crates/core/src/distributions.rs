//! The two coefficient laws of the matrix models.
//!
//! * `Θ_ν` on the open unit disk, with density `(ν-1)/(2π) (1-|z|²)^{(ν-3)/2}`.
//! * The symmetric-support Beta law `B(s, t)` on `(-1, 1)`, with density
//!   proportional to `(1-x)^{s-1} (1+x)^{t-1}`.
//!
//! Alongside the samplers live the closed-form moments of both laws and the
//! digamma-based expectation `E{-X² log(1-X²)}` for `X ~ B(s, t)`.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{check_param, Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Parameter of the `Θ_ν` law. Always `ν > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaParam {
    nu: f64,
}

impl ThetaParam {
    pub fn new(nu: f64) -> Result<Self> {
        check_param("nu", nu, nu > 1.0, "nu > 1")?;
        Ok(Self { nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Shape parameters of `B(s, t)`. Both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymBetaParam {
    s: f64,
    t: f64,
}

impl SymBetaParam {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        check_param("s", s, s > 0.0, "s > 0")?;
        check_param("t", t, t > 0.0, "t > 0")?;
        Ok(Self { s, t })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `E{X} = (t-s)/(t+s)`.
    pub fn mean(&self) -> f64 {
        (self.t - self.s) / (self.t + self.s)
    }
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskSample(Complex64);

impl DiskSample {
    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Largest double strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Draws from `Θ_ν`.
///
/// The argument is uniform and the radius comes from the inverse CDF
/// `1 - |z|² = V^{2/(ν-1)}`, `V ~ U(0, 1]`.
pub fn sample_theta<R: Rng + ?Sized>(p: ThetaParam, rng: &mut R) -> DiskSample {
    let angle = TAU * rng.random::<f64>();
    let v = 1.0 - rng.random::<f64>();
    let r2 = -(2.0 / (p.nu - 1.0) * v.ln()).exp_m1();
    let r = r2.sqrt().min(BELOW_ONE);
    let (sin, cos) = angle.sin_cos();
    DiskSample(Complex64::new(r * cos, r * sin))
}

/// Draws from `B(s, t)` as `(G_t - G_s)/(G_t + G_s)` with independent
/// standard gamma variates of shapes `t` and `s`, i.e. `2g - 1` for
/// `g ~ Beta(t, s)`.
pub fn sample_sym_beta<R: Rng + ?Sized>(p: SymBetaParam, rng: &mut R) -> f64 {
    let gs = Gamma::new(p.s, 1.0).expect("shape validated by SymBetaParam");
    let gt = Gamma::new(p.t, 1.0).expect("shape validated by SymBetaParam");
    loop {
        let a: f64 = gt.sample(rng);
        let b: f64 = gs.sample(rng);
        let x = (a - b) / (a + b);
        // Both variates can underflow for very small shapes.
        if x.abs() < 1.0 {
            return x;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaMoments {
    /// `E|X|²`
    pub m2: f64,
    /// `E|X|⁴`
    pub m4: f64,
}

pub fn theta_moments(p: ThetaParam) -> ThetaMoments {
    let nu = p.nu;
    ThetaMoments {
        m2: 2.0 / (nu + 1.0),
        m4: 8.0 / ((nu + 1.0) * (nu + 3.0)),
    }
}

/// Raw moments one to four and the variance of `B(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymBetaMoments {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub var: f64,
}

impl SymBetaMoments {
    pub fn raw(&self, k: usize) -> f64 {
        match k {
            0 => 1.0,
            1 => self.m1,
            2 => self.m2,
            3 => self.m3,
            4 => self.m4,
            _ => panic!("only moments up to order four are available"),
        }
    }

    /// `E{(X - EX)⁴}` from the raw moments.
    pub fn central4(&self) -> f64 {
        let m = self.m1;
        self.m4 - 4.0 * m * self.m3 + 6.0 * m * m * self.m2 - 3.0 * m.powi(4)
    }
}

pub fn sym_beta_moments(p: SymBetaParam) -> SymBetaMoments {
    let (s, t) = (p.s, p.t);
    let d = t - s;
    let u = t + s;
    let m1 = d / u;
    let m2 = (d * d + u) / (u * (u + 1.0));
    let m3 = d * (d * d + 3.0 * u + 2.0) / (u * (1.0 + u) * (u + 2.0));
    let m4 = (d * d * (d * d + 6.0 * u + 8.0) + 3.0 * u * u + 6.0 * u)
        / (u * (1.0 + u) * (u + 2.0) * (u + 3.0));
    let var = 4.0 * s * t / (u * u * (u + 1.0));
    SymBetaMoments { m1, m2, m3, m4, var }
}

/// Switch point between upward recurrence and the asymptotic series.
const DIGAMMA_ASYMPTOTIC_FROM: f64 = 10.0;

/// `B_{2k}/(2k)` for k = 1..7.
const DIGAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// The digamma function `Ψ(x) = d/dx log Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < DIGAMMA_ASYMPTOTIC_FROM {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for c in DIGAMMA_SERIES {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// `E{-X² log(1 - X²)}` for `X ~ B(s, t)`, obtained by differentiating the
/// Beta integral in both shape parameters.
pub fn expected_neg_x2log(p: SymBetaParam) -> f64 {
    let (s, t) = (p.s, p.t);
    let u = s + t;
    let d = s - t;
    let psi = |x: f64| digamma(x).expect("shape parameters are positive");
    let bracket = 2.0 * psi(u) - psi(t) - psi(s) - 2.0 * LN_2;
    (d * d + u) / (u * (1.0 + u)) * bracket
        + 4.0 * (u * d * d + t * t + s * s) / (u * u * (1.0 + u) * (1.0 + u))
}

/// Supremum of `E{-X² log(1-X²)} (s+t)²` along the diagonal `s = t`.
///
/// Calibrated from the quadrature oracle at `s = t ∈ {1, 2, 5, …, 160}`,
/// where the product rises monotonically (1.707, 2.177, …, 2.986) towards
/// its limit `3 = lim (2s)² E{X⁴}`.
pub const LOG_MOMENT_DECAY_CONSTANT: f64 = 3.0;

/// Density of `B(s, t)` at `x ∈ (-1, 1)`.
pub fn sym_beta_density(p: SymBetaParam, x: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let (s, t) = (p.s, p.t);
    let log_norm = (1.0 - s - t) * LN_2 + ln_gamma(s + t) - ln_gamma(s) - ln_gamma(t);
    (log_norm + (s - 1.0) * (1.0 - x).ln() + (t - 1.0) * (1.0 + x).ln()).exp()
}

/// `E{f(X)}` for `X ~ B(s, t)` by adaptive quadrature.
///
/// `f` receives `x` together with `1 − |x|` computed without cancellation,
/// so integrands with `log(1 − x²)` stay accurate at the endpoints. Each half
/// is mapped by `x = ±(1 − u²)`, which also absorbs `(1 ∓ x)^{s-1}` for
/// shapes below one.
pub fn sym_beta_expectation<F: Fn(f64, f64) -> f64>(p: SymBetaParam, f: F, tol: Tolerance) -> Result<f64> {
    use statrs::function::gamma::ln_gamma;
    let (s, t) = (p.s, p.t);
    let log_norm = (1.0 - s - t) * LN_2 + ln_gamma(s + t) - ln_gamma(s) - ln_gamma(t);
    let half = |sign: f64, near: f64, far: f64| {
        integrate(
            |u: f64| {
                let gap = u * u;
                let log_w = log_norm + (near - 1.0) * gap.ln() + (far - 1.0) * (2.0 - gap).ln();
                2.0 * u * f(sign * (1.0 - gap), gap) * log_w.exp()
            },
            0.0,
            1.0,
            Tolerance {
                abs: 0.5 * tol.abs,
                ..tol
            },
        )
    };
    Ok(half(1.0, s, t)?.value + half(-1.0, t, s)?.value)
}

/// [`expected_neg_x2log`] by quadrature.
pub fn expected_neg_x2log_quadrature(p: SymBetaParam) -> Result<f64> {
    sym_beta_expectation(
        p,
        |x, gap| {
            let log_1mx2 = if gap < 0.5 { gap.ln() + (2.0 - gap).ln() } else { (1.0 - x * x).ln() };
            -x * x * log_1mx2
        },
        Tolerance::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_open_unit;
    use crate::rng::stream;
    use proptest::prelude::*;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn parameter_validation() {
        assert!(ThetaParam::new(1.0).is_err());
        assert!(ThetaParam::new(f64::NAN).is_err());
        assert!(ThetaParam::new(1.0001).is_ok());
        assert!(SymBetaParam::new(0.0, 1.0).is_err());
        assert!(SymBetaParam::new(1.0, -2.0).is_err());
    }

    #[test]
    fn theta_moment_closed_forms() {
        let m = theta_moments(ThetaParam::new(3.0).unwrap());
        assert!((m.m2 - 0.5).abs() < 1e-15 && (m.m4 - 1.0 / 3.0).abs() < 1e-15);
        let m = theta_moments(ThetaParam::new(5.0).unwrap());
        assert!((m.m2 - 1.0 / 3.0).abs() < 1e-15 && (m.m4 - 1.0 / 6.0).abs() < 1e-15);
        let m = theta_moments(ThetaParam::new(1e12).unwrap());
        assert!(m.m2 < 1e-11 && m.m4 < 1e-23);
    }

    #[test]
    fn theta_sampler_matches_moments() {
        let mut rng = stream(1, 0);
        for nu in [3.0, 5.0] {
            let p = ThetaParam::new(nu).unwrap();
            let draws: Vec<f64> = (0..200_000)
                .map(|_| sample_theta(p, &mut rng).value().norm_sqr())
                .collect();
            let (m2, se2) = mean_and_se(&draws);
            let fourth: Vec<f64> = draws.iter().map(|w| w * w).collect();
            let (m4, se4) = mean_and_se(&fourth);
            let exact = theta_moments(p);
            assert!((m2 - exact.m2).abs() < 4.0 * se2, "nu={nu}: {m2} vs {}", exact.m2);
            assert!((m4 - exact.m4).abs() < 4.0 * se4, "nu={nu}: {m4} vs {}", exact.m4);
        }
    }

    #[test]
    fn theta_near_one_stays_in_disk() {
        let p = ThetaParam::new(1.0 + 1e-9).unwrap();
        let mut rng = stream(2, 0);
        for _ in 0..10_000 {
            assert!(sample_theta(p, &mut rng).value().norm() < 1.0);
        }
    }

    #[test]
    fn uniform_moments_by_direct_integration() {
        // B(1, 1) is uniform on (-1, 1); integrate x^k / 2 directly.
        let m = sym_beta_moments(SymBetaParam::new(1.0, 1.0).unwrap());
        for k in 1..=4 {
            let oracle = integrate(|x| 0.5 * x.powi(k as i32), -1.0, 1.0, Tolerance::default())
                .unwrap()
                .value;
            assert!((m.raw(k) - oracle).abs() < 1e-14, "k={k}");
        }
        assert!((m.m2 - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.m4 - 0.2).abs() < 1e-15);
        assert!((m.var - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn beta_moments_match_quadrature_of_density() {
        for (s, t) in [(0.7, 2.5), (3.0, 1.5), (4.0, 4.0)] {
            let p = SymBetaParam::new(s, t).unwrap();
            let m = sym_beta_moments(p);
            for k in 1..=4 {
                let oracle = sym_beta_expectation(p, |x, _| x.powi(k as i32), Tolerance::default()).unwrap();
                assert!((m.raw(k) - oracle).abs() < 1e-10, "s={s} t={t} k={k}");
            }
            let pointwise = integrate_open_unit(|x| x * x * sym_beta_density(p, x), Tolerance::default());
            if s >= 1.0 && t >= 1.0 {
                assert!((pointwise.unwrap().value - m.m2).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn symmetric_beta_has_vanishing_odd_moments() {
        for s in [0.3, 1.0, 7.5] {
            let m = sym_beta_moments(SymBetaParam::new(s, s).unwrap());
            assert_eq!(m.m1, 0.0);
            assert_eq!(m.m3, 0.0);
        }
    }

    proptest! {
        #[test]
        fn variance_is_second_central_moment(s in 0.5f64..10.0, t in 0.5f64..10.0) {
            let m = sym_beta_moments(SymBetaParam::new(s, t).unwrap());
            prop_assert!((m.var - (m.m2 - m.m1 * m.m1)).abs() < 1e-13);
        }

        #[test]
        fn sym_beta_draws_are_deterministic_and_inside(seed in any::<u64>(), s in 0.05f64..20.0, t in 0.05f64..20.0) {
            let p = SymBetaParam::new(s, t).unwrap();
            let a: Vec<f64> = { let mut r = stream(seed, 0); (0..16).map(|_| sample_sym_beta(p, &mut r)).collect() };
            let b: Vec<f64> = { let mut r = stream(seed, 0); (0..16).map(|_| sample_sym_beta(p, &mut r)).collect() };
            prop_assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
            prop_assert!(a.iter().all(|x| x.abs() < 1.0));
        }
    }

    #[test]
    fn sym_beta_sampler_mean() {
        let mut rng = stream(5, 0);
        for (s, t) in [(1.0, 1.0), (2.0, 5.0), (0.5, 3.0)] {
            let p = SymBetaParam::new(s, t).unwrap();
            let draws: Vec<f64> = (0..200_000).map(|_| sample_sym_beta(p, &mut rng)).collect();
            let (m, se) = mean_and_se(&draws);
            assert!((m - p.mean()).abs() < 4.0 * se, "s={s} t={t}: {m}");
            let sq: Vec<f64> = draws.iter().map(|x| x * x).collect();
            let (m2, se2) = mean_and_se(&sq);
            assert!((m2 - sym_beta_moments(p).m2).abs() < 4.0 * se2);
        }
    }

    /// Euler–Mascheroni constant from the harmonic sum with Euler–Maclaurin
    /// tail corrections.
    fn euler_gamma_oracle() -> f64 {
        let n = 1000.0f64;
        let h: f64 = (1..=1000).map(|k| 1.0 / k as f64).sum();
        h - n.ln() - 1.0 / (2.0 * n) + 1.0 / (12.0 * n * n) - 1.0 / (120.0 * n.powi(4))
    }

    #[test]
    fn digamma_values() {
        let g = euler_gamma_oracle();
        assert!((digamma(1.0).unwrap() + g).abs() < 1e-10);
        // Ψ(10) = H_9 - γ
        let h9: f64 = (1..=9).map(|k| 1.0 / k as f64).sum();
        let psi10 = digamma(10.0).unwrap();
        assert!((psi10 - (h9 - g)).abs() < 1e-10);
        assert!((psi10 - 10f64.ln()).abs() < 0.06);
        // Ψ(1/2) = -γ - 2 log 2
        assert!((digamma(0.5).unwrap() - (-g - 2.0 * LN_2)).abs() < 1e-10);
    }

    #[test]
    fn digamma_recurrence() {
        for x in [0.5, 1.0, 3.7, 9.5, 10.0, 42.0] {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((lhs - 1.0 / x).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn digamma_domain() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
    }

    #[test]
    fn log_moment_matches_quadrature() {
        let grid = [1.0, 2.0, 5.0, 10.0, 20.0];
        for &s in &grid {
            for &t in &grid {
                let p = SymBetaParam::new(s, t).unwrap();
                let closed = expected_neg_x2log(p);
                let quad = expected_neg_x2log_quadrature(p).unwrap();
                assert!(((closed - quad) / quad).abs() < 1e-8, "s={s} t={t}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn log_moment_decays_like_inverse_square() {
        let mut prev = f64::INFINITY;
        for s in [5.0, 10.0, 20.0, 40.0, 1e4] {
            let v = expected_neg_x2log(SymBetaParam::new(s, s).unwrap());
            assert!(v < prev);
            assert!(v * (2.0 * s).powi(2) < LOG_MOMENT_DECAY_CONSTANT);
            prev = v;
        }
        assert!(prev < 1e-7);
    }
}
