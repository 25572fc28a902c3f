//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule: the summed error estimate must fall below
/// `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest
/// error estimate until the tolerance is met.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration bounds [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    while error > tol.abs.max(tol.rel * value.abs()) {
        if heap.len() >= tol.max_intervals || !value.is_finite() {
            return Err(Error::QuadratureNonconvergence { estimate: value, error });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Segment cannot be split further in floating point.
            return Err(Error::QuadratureNonconvergence { estimate: value, error });
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(Integral { value, error })
}

/// Integrates over `(-1, 1)` for integrands with algebraic or logarithmic
/// behaviour at both endpoints.
///
/// Each half is mapped by `x = ±(1 - u²)`, which turns `(1 ∓ x)^{s-1}` into
/// `u^{2s-1}` after the Jacobian and keeps the endpoints out of the node set.
pub fn integrate_open_unit<F: Fn(f64) -> f64>(f: F, tol: Tolerance) -> Result<Integral> {
    let half_tol = Tolerance {
        abs: 0.5 * tol.abs,
        ..tol
    };
    let upper = integrate(|u| 2.0 * u * f(1.0 - u * u), 0.0, 1.0, half_tol)?;
    let lower = integrate(|u| 2.0 * u * f(u * u - 1.0), 0.0, 1.0, half_tol)?;
    Ok(Integral {
        value: upper.value + lower.value,
        error: upper.error + lower.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate(|x| (30.0 * x).sin(), 0.0, std::f64::consts::PI, Tolerance::default())
            .unwrap();
        assert!(r.value.abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn endpoint_singularities() {
        // ∫_{-1}^{1} (1-x²)^{-1/2} dx = π
        let r = integrate_open_unit(|x| (1.0 - x * x).powf(-0.5), Tolerance::default()).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-11, "{}", r.value);
        // ∫_{-1}^{1} log(1-x²) dx = 4 log 2 - 4
        let r = integrate_open_unit(|x| (1.0 - x * x).ln(), Tolerance::default()).unwrap();
        assert!((r.value - (4.0 * 2f64.ln() - 4.0)).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn non_integrable_reports_nonconvergence() {
        let tol = Tolerance {
            max_intervals: 200,
            ..Tolerance::default()
        };
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, tol);
        assert!(matches!(r, Err(Error::QuadratureNonconvergence { .. })));
    }
}
