//! Periodic 4th-order centered finite differences on uniform grids.
//!
//! Sequences may carry a linear lift: the angle of a curve winding once
//! around the pole satisfies u[j+N] = u[j] + 2π, so neighbours across the
//! seam are read through [`lifted`].

use crate::scalar::Real;

/// Value of the lifted sequence at index `j + off`, where
/// `x[j + n] = x[j] + shift`.
#[inline]
pub fn lifted<T: Real>(x: &[T], j: usize, off: isize, shift: T) -> T {
    let n = x.len() as isize;
    let idx = j as isize + off;
    let wrapped = idx.rem_euclid(n);
    let cycles = (idx - wrapped) / n;
    x[wrapped as usize] + T::of(cycles as f64) * shift
}

/// First derivative, 4th order: (8(f₊₁−f₋₁) − (f₊₂−f₋₂)) / 12h.
#[inline]
pub fn d1<T: Real>(x: &[T], j: usize, h: T, shift: T) -> T {
    let eight = T::of(8.0);
    let num = eight * (lifted(x, j, 1, shift) - lifted(x, j, -1, shift))
        - (lifted(x, j, 2, shift) - lifted(x, j, -2, shift));
    num / (T::of(12.0) * h)
}

/// Second derivative, 4th order:
/// (−f₊₂ + 16f₊₁ − 30f + 16f₋₁ − f₋₂) / 12h².
#[inline]
pub fn d2<T: Real>(x: &[T], j: usize, h: T, shift: T) -> T {
    let sixteen = T::of(16.0);
    let num = -(lifted(x, j, 2, shift) + lifted(x, j, -2, shift))
        + sixteen * (lifted(x, j, 1, shift) + lifted(x, j, -1, shift))
        - T::of(30.0) * x[j];
    num / (T::of(12.0) * h * h)
}

/// Solves the cyclic tridiagonal system with sub/main/super diagonals
/// `a`, `b`, `c` and corner entries `a[0]` (row 0, col n−1) and `c[n−1]`
/// (row n−1, col 0), via the Sherman–Morrison correction of the Thomas
/// algorithm. Overwrites `rhs` with the solution.
pub fn solve_cyclic_tridiag<T: Real>(a: &[T], b: &[T], c: &[T], rhs: &mut [T]) {
    let n = rhs.len();
    assert!(n >= 3, "cyclic tridiagonal solve needs n >= 3");
    assert_eq!(a.len(), n);
    assert_eq!(b.len(), n);
    assert_eq!(c.len(), n);

    // Rank-one split: B = A_tri + u vᵀ with u = (γ, 0, …, 0, c[n−1])ᵀ,
    // v = (1, 0, …, 0, a[0]/γ)ᵀ.
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - c[n - 1] * a[0] / gamma;

    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = c[n - 1];

    thomas(a, &bb, c, rhs);
    thomas(a, &bb, c, &mut u);

    let frac = (rhs[0] + a[0] * rhs[n - 1] / gamma)
        / (T::one() + u[0] + a[0] * u[n - 1] / gamma);
    for j in 0..n {
        rhs[j] = rhs[j] - frac * u[j];
    }
}

/// Plain Thomas algorithm (no corner entries). Overwrites `rhs`.
fn thomas<T: Real>(a: &[T], b: &[T], c: &[T], rhs: &mut [T]) {
    let n = rhs.len();
    let mut cp = vec![T::zero(); n];
    cp[0] = c[0] / b[0];
    rhs[0] = rhs[0] / b[0];
    for j in 1..n {
        let m = b[j] - a[j] * cp[j - 1];
        cp[j] = c[j] / m;
        rhs[j] = (rhs[j] - a[j] * rhs[j - 1]) / m;
    }
    for j in (0..n - 1).rev() {
        rhs[j] = rhs[j] - cp[j] * rhs[j + 1];
    }
}
