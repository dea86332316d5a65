//! Piecewise-cubic Hermite interpolation on uniform grids, with prescribed
//! node slopes. Used for surface-profile tables (clamped) and curve
//! resampling (periodic, possibly lifted).

use crate::scalar::Real;

#[inline]
fn basis<T: Real>(xi: T) -> (T, T, T, T) {
    let one = T::one();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let xi2 = xi * xi;
    let xi3 = xi2 * xi;
    (
        two * xi3 - three * xi2 + one, // H00
        xi3 - two * xi2 + xi,          // H10
        -two * xi3 + three * xi2,      // H01
        xi3 - xi2,                     // H11
    )
}

#[inline]
fn basis_deriv<T: Real>(xi: T) -> (T, T, T, T) {
    let one = T::one();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let four = T::of(4.0);
    let six = T::of(6.0);
    let xi2 = xi * xi;
    (
        six * xi2 - six * xi,
        three * xi2 - four * xi + one,
        -six * xi2 + six * xi,
        three * xi2 - two * xi,
    )
}

/// Hermite value on one interval: endpoint values `f0`, `f1`, endpoint
/// slopes `d0`, `d1`, interval width `h`, local coordinate `xi` in [0, 1].
#[inline]
pub fn eval_interval<T: Real>(f0: T, f1: T, d0: T, d1: T, h: T, xi: T) -> T {
    let (h00, h10, h01, h11) = basis(xi);
    h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1
}

/// Derivative (with respect to the underlying coordinate, not `xi`).
#[inline]
pub fn eval_interval_deriv<T: Real>(f0: T, f1: T, d0: T, d1: T, h: T, xi: T) -> T {
    let (g00, g10, g01, g11) = basis_deriv(xi);
    (g00 * f0 + g01 * f1) / h + g10 * d0 + g11 * d1
}

/// Integral of the Hermite cubic over a full interval (corrected trapezoid):
/// h/2 (f0 + f1) + h²/12 (d0 − d1). Exact for the cubic.
#[inline]
pub fn integral_interval<T: Real>(f0: T, f1: T, d0: T, d1: T, h: T) -> T {
    h / T::of(2.0) * (f0 + f1) + h * h / T::of(12.0) * (d0 - d1)
}

/// Clamped interpolant over `[0, h·(n−1)]` given node values and slopes.
/// Arguments outside the range are clamped to the boundary intervals.
pub struct UniformHermite<'a, T> {
    pub h: T,
    pub f: &'a [T],
    pub d: &'a [T],
}

impl<'a, T: Real> UniformHermite<'a, T> {
    pub fn eval(&self, x: T) -> T {
        let (k, xi) = self.locate(x);
        eval_interval(self.f[k], self.f[k + 1], self.d[k], self.d[k + 1], self.h, xi)
    }

    pub fn eval_deriv(&self, x: T) -> T {
        let (k, xi) = self.locate(x);
        eval_interval_deriv(self.f[k], self.f[k + 1], self.d[k], self.d[k + 1], self.h, xi)
    }

    fn locate(&self, x: T) -> (usize, T) {
        let n = self.f.len();
        debug_assert!(n >= 2 && self.d.len() == n);
        let t = (x / self.h).floor();
        let mut k = t.to_isize().unwrap_or(0);
        if k < 0 {
            k = 0;
        }
        if k as usize >= n - 1 {
            k = (n - 2) as isize;
        }
        let k = k as usize;
        let xi = x / self.h - T::of(k as f64);
        (k, xi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let p = |x: f64| 2.0 - x + 0.5 * x * x + 0.25 * x * x * x;
        let dp = |x: f64| -1.0 + x + 0.75 * x * x;
        let h = 0.4;
        let f: Vec<f64> = (0..6).map(|j| p(h * j as f64)).collect();
        let d: Vec<f64> = (0..6).map(|j| dp(h * j as f64)).collect();
        let interp = UniformHermite { h, f: &f, d: &d };
        for i in 0..50 {
            let x = 2.0 * i as f64 / 49.0;
            assert!((interp.eval(x) - p(x)).abs() < 1e-13);
            assert!((interp.eval_deriv(x) - dp(x)).abs() < 1e-12);
        }
        let int = integral_interval(f[0], f[1], d[0], d[1], h);
        let exact = |x: f64| 2.0 * x - 0.5 * x * x + x * x * x / 6.0 + x * x * x * x / 16.0;
        assert!((int - (exact(h) - exact(0.0))).abs() < 1e-14);
    }

    #[test]
    fn interpolation_error_is_fourth_order() {
        let err = |h: f64| -> f64 {
            let n = (2.0 / h) as usize + 1;
            let f: Vec<f64> = (0..n).map(|j| (h * j as f64).sin()).collect();
            let d: Vec<f64> = (0..n).map(|j| (h * j as f64).cos()).collect();
            let interp = UniformHermite { h, f: &f, d: &d };
            (0..200)
                .map(|i| {
                    let x = 1.8 * i as f64 / 199.0;
                    (interp.eval(x) - x.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        assert!(err(0.1) / err(0.05) > 12.0);
    }
}
