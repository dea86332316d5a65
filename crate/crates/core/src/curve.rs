//! Discrete closed curves in the polar chart: pointwise geometry (speed,
//! frame, geodesic curvature), integral quantities (length, enclosed area),
//! arclength redistribution, and the standard initial-curve families.
//!
//! The angle is stored unwrapped (monotone lift, u[j+N] = u[j] + 2π·winding)
//! so periodic finite differences are well defined; it is reduced mod 2π
//! only at I/O boundaries. Derivatives use 4th-order centered stencils; the
//! periodic trapezoid rule integrates length and area.

use crate::error::{Error, Result};
use crate::fd;
use crate::geodesics::ChartPoint;
use crate::hermite;
use crate::scalar::Real;
use crate::surface::SurfaceProfile;
use crate::tolerances as tol;

pub const MIN_RESOLUTION: usize = 16;

/// Closed curve snapshot with cached per-sample geometry. Immutable;
/// evolution produces successor snapshots.
#[derive(Debug, Clone)]
pub struct DiscreteCurve<T> {
    r: Vec<T>,
    /// Unwrapped angle lift.
    u: Vec<T>,
    winding: i32,
    ccw: bool,
    speed: Vec<T>,
    tangent: Vec<(T, T)>,
    normal: Vec<(T, T)>,
    kappa: Vec<T>,
    ds: Vec<T>,
    length: T,
    area: T,
}

impl<T: Real> DiscreteCurve<T> {
    /// Builds a curve from chart samples, unwrapping the angle.
    pub fn new(surface: &SurfaceProfile<T>, points: &[ChartPoint<T>]) -> Result<Self> {
        let n = points.len();
        if n < MIN_RESOLUTION {
            return Err(Error::parameter(
                "points",
                format!("need at least {MIN_RESOLUTION} samples, got {n}"),
            ));
        }
        let tau = T::of(2.0) * T::PI();
        let pi = T::PI();
        let mut u = Vec::with_capacity(n);
        u.push(points[0].u);
        for j in 1..n {
            let mut d = (points[j].u - points[j - 1].u) % tau;
            if d > pi {
                d = d - tau;
            }
            if d < -pi {
                d = d + tau;
            }
            let prev = u[j - 1];
            u.push(prev + d);
        }
        let mut closure = (points[0].u - points[n - 1].u) % tau;
        if closure > pi {
            closure = closure - tau;
        }
        if closure < -pi {
            closure = closure + tau;
        }
        let total = u[n - 1] + closure - u[0];
        let winding = (total / tau).round().as_f64() as i32;
        let r: Vec<T> = points.iter().map(|p| p.r).collect();
        Self::from_lifted(surface, r, u, winding)
    }

    /// Builds from an already-lifted angle sequence (the flow integrator's
    /// fast path; winding cannot change without embeddedness loss).
    pub fn from_lifted(
        surface: &SurfaceProfile<T>,
        r: Vec<T>,
        u: Vec<T>,
        winding: i32,
    ) -> Result<Self> {
        let n = r.len();
        if n < MIN_RESOLUTION || u.len() != n {
            return Err(Error::parameter("r", "bad sample counts"));
        }
        for j in 0..n {
            if !(r[j] > T::zero()) || !r[j].is_finite() || !u[j].is_finite() {
                return Err(Error::parameter(
                    "r",
                    format!("invalid chart sample at index {j}"),
                ));
            }
            if r[j] > surface.r_max() {
                return Err(Error::parameter(
                    "r",
                    format!("sample {j} at r = {} beyond r_max = {}", r[j], surface.r_max()),
                ));
            }
        }
        let tau = T::of(2.0) * T::PI();
        let shift = tau * T::of(winding as f64);
        // Adjacent samples must be distinct.
        for j in 0..n {
            let rn = r[(j + 1) % n];
            let un = fd::lifted(&u, j, 1, shift);
            let dr = rn - r[j];
            let du = un - u[j];
            if dr.abs() + du.abs() * r[j] < T::of(1e-14) {
                return Err(Error::Degeneracy(format!(
                    "adjacent samples {j}, {} coincide",
                    (j + 1) % n
                )));
            }
        }

        let dp = T::one() / T::of(n as f64);
        let mut speed = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        let mut kappa = Vec::with_capacity(n);
        let mut ds = Vec::with_capacity(n);
        let mut length = T::zero();
        let mut area = T::zero();
        let min_speed = T::of(tol::MIN_SPEED);
        for j in 0..n {
            let rd = fd::d1(&r, j, dp, T::zero());
            let ud = fd::d1(&u, j, dp, shift);
            let rdd = fd::d2(&r, j, dp, T::zero());
            let udd = fd::d2(&u, j, dp, shift);
            let phi = surface.phi(r[j]);
            let dphi = surface.dphi(r[j]);
            let v2 = rd * rd + phi * phi * ud * ud;
            let v = v2.sqrt();
            if v < min_speed {
                return Err(Error::Degeneracy(format!(
                    "parametric speed {v} below {min_speed} at sample {j}"
                )));
            }
            // κ = [φ(ṙü − u̇r̈) + φ²φ′u̇³ + 2φ′ṙ²u̇] / v³; reduces to the
            // radial-graph formula when u is the parameter.
            let k = (phi * (rd * udd - ud * rdd)
                + phi * phi * dphi * ud * ud * ud
                + T::of(2.0) * dphi * rd * rd * ud)
                / (v * v2);
            speed.push(v);
            tangent.push((rd / v, ud / v));
            normal.push((phi * ud / v, -rd / (phi * v)));
            kappa.push(k);
            let w = v * dp;
            ds.push(w);
            length = length + w;
            area = area + surface.capital_phi(r[j]) * ud * dp;
        }

        // Orientation from the chart shoelace area.
        let mut shoelace = T::zero();
        for j in 0..n {
            let (x0, y0) = (r[j] * u[j].cos(), r[j] * u[j].sin());
            let jn = (j + 1) % n;
            let (x1, y1) = (r[jn] * u[jn].cos(), r[jn] * u[jn].sin());
            shoelace = shoelace + x0 * y1 - x1 * y0;
        }

        Ok(DiscreteCurve {
            r,
            u,
            winding,
            ccw: shoelace > T::zero(),
            speed,
            tangent,
            normal,
            kappa,
            ds,
            length,
            area,
        })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn point(&self, j: usize) -> ChartPoint<T> {
        ChartPoint {
            r: self.r[j],
            u: self.u[j],
        }
    }

    pub fn r_values(&self) -> &[T] {
        &self.r
    }

    pub fn u_values(&self) -> &[T] {
        &self.u
    }

    /// Angle reduced to [0, 2π), the I/O representation.
    pub fn u_mod_tau(&self, j: usize) -> T {
        let tau = T::of(2.0) * T::PI();
        let mut v = self.u[j] % tau;
        if v < T::zero() {
            v = v + tau;
        }
        v
    }

    pub fn winding(&self) -> i32 {
        self.winding
    }

    pub fn is_ccw(&self) -> bool {
        self.ccw
    }

    pub fn speeds(&self) -> &[T] {
        &self.speed
    }

    pub fn tangent(&self, j: usize) -> (T, T) {
        self.tangent[j]
    }

    pub fn normal(&self, j: usize) -> (T, T) {
        self.normal[j]
    }

    pub fn kappas(&self) -> &[T] {
        &self.kappa
    }

    pub fn arc_weights(&self) -> &[T] {
        &self.ds
    }

    pub fn length(&self) -> T {
        self.length
    }

    /// Signed enclosed area ∮Φ(r) du (Stokes with area form φ dr∧du);
    /// positive for counterclockwise curves, valid whether or not the pole
    /// is enclosed.
    pub fn area(&self) -> T {
        self.area
    }

    pub fn kappa_min(&self) -> T {
        self.kappa.iter().cloned().fold(T::infinity(), T::min)
    }

    pub fn kappa_max(&self) -> T {
        self.kappa.iter().cloned().fold(-T::infinity(), T::max)
    }

    pub fn r_min(&self) -> T {
        self.r.iter().cloned().fold(T::infinity(), T::min)
    }

    pub fn r_max(&self) -> T {
        self.r.iter().cloned().fold(-T::infinity(), T::max)
    }

    pub fn mean_radius(&self) -> T {
        self.r.iter().cloned().sum::<T>() / T::of(self.len() as f64)
    }

    pub fn chart_centroid(&self) -> (T, T) {
        let n = T::of(self.len() as f64);
        let mut cx = T::zero();
        let mut cy = T::zero();
        for j in 0..self.len() {
            let (x, y) = self.point(j).xy();
            cx = cx + x;
            cy = cy + y;
        }
        (cx / n, cy / n)
    }

    /// Winding number of the curve around a chart point.
    pub fn winding_about(&self, x: T, y: T) -> i32 {
        let pts: Vec<(T, T)> = (0..self.len()).map(|j| self.point(j).xy()).collect();
        winding_number_xy(&pts, x, y)
    }

    /// Chart-polygon self-intersection test (adjacent edges excluded).
    pub fn is_embedded(&self) -> bool {
        let n = self.len();
        let pts: Vec<(T, T)> = (0..n).map(|j| self.point(j).xy()).collect();
        for i in 0..n {
            let a0 = pts[i];
            let a1 = pts[(i + 1) % n];
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let b0 = pts[j];
                let b1 = pts[(j + 1) % n];
                if segments_intersect(a0, a1, b0, b1) {
                    return false;
                }
            }
        }
        true
    }

    /// Resamples to uniform arclength with periodic cubic interpolation of
    /// (r, u); the sample count is preserved.
    pub fn redistribute(&self, surface: &SurfaceProfile<T>) -> Result<Self> {
        let n = self.len();
        let tau = T::of(2.0) * T::PI();
        let shift = tau * T::of(self.winding as f64);
        let dp = T::one() / T::of(n as f64);

        // Node slopes of r(p) and w(p) = u(p) − shift·p (periodic part).
        let mut r_slope = Vec::with_capacity(n);
        let mut w_slope = Vec::with_capacity(n);
        let mut w = Vec::with_capacity(n);
        for j in 0..n {
            r_slope.push(fd::d1(&self.r, j, dp, T::zero()));
            w_slope.push(fd::d1(&self.u, j, dp, shift) - shift);
            w.push(self.u[j] - shift * T::of(j as f64) * dp);
        }

        let eval = |f: &[T], d: &[T], p: T| -> (T, T) {
            let pw = p - p.floor();
            let scaled = pw * T::of(n as f64);
            let mut k = scaled.floor().to_usize().unwrap_or(0);
            if k >= n {
                k = n - 1;
            }
            let xi = scaled - T::of(k as f64);
            let kn = (k + 1) % n;
            (
                hermite::eval_interval(f[k], f[kn], d[k] * dp, d[kn] * dp, T::one(), xi),
                hermite::eval_interval_deriv(f[k], f[kn], d[k] * dp, d[kn] * dp, T::one(), xi)
                    / dp,
            )
        };
        let velocity = |p: T| -> T {
            let (rv, rd) = eval(&self.r, &r_slope, p);
            let (_, wd) = eval(&w, &w_slope, p);
            let ud = wd + shift;
            let phi = surface.phi(rv);
            (rd * rd + phi * phi * ud * ud).sqrt()
        };

        // Cumulative arclength by per-interval Simpson.
        let mut s = vec![T::zero(); n + 1];
        for j in 0..n {
            let pj = T::of(j as f64) * dp;
            let v_mid = velocity(pj + dp / T::of(2.0));
            let seg = dp / T::of(6.0)
                * (self.speed[j] + T::of(4.0) * v_mid + self.speed[(j + 1) % n]);
            s[j + 1] = s[j] + seg;
        }
        let total = s[n];
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::Degeneracy("arclength accumulation failed".into()));
        }

        let mut new_r = Vec::with_capacity(n);
        let mut new_u = Vec::with_capacity(n);
        let mut k = 0usize;
        for m in 0..n {
            let target = total * T::of(m as f64) / T::of(n as f64);
            while k + 1 < n && s[k + 1] <= target {
                k += 1;
            }
            // Invert the Hermite cubic of s on interval k by Newton.
            let v0 = self.speed[k];
            let v1 = self.speed[(k + 1) % n];
            let mut xi = (target - s[k]) / (s[k + 1] - s[k]);
            for _ in 0..8 {
                let val = hermite::eval_interval(s[k], s[k + 1], v0 * dp, v1 * dp, T::one(), xi);
                let der =
                    hermite::eval_interval_deriv(s[k], s[k + 1], v0 * dp, v1 * dp, T::one(), xi);
                let step = (val - target) / der;
                xi = xi - step;
                if step.abs() < T::of(1e-15) {
                    break;
                }
            }
            let p_star = (T::of(k as f64) + xi.max(T::zero()).min(T::one())) * dp;
            let (rv, _) = eval(&self.r, &r_slope, p_star);
            let (wv, _) = eval(&w, &w_slope, p_star);
            new_r.push(rv);
            new_u.push(wv + shift * p_star);
        }
        Self::from_lifted(surface, new_r, new_u, self.winding)
    }

    /// Reinterprets the curve as a radial graph r(u) on the uniform angle
    /// grid, resampling by inverting the (monotone) angle lift.
    pub fn to_radial_graph(&self) -> Result<RadialGraph<T>> {
        if self.winding != 1 {
            return Err(Error::Degeneracy(
                "only curves winding once around the pole are radial graphs".into(),
            ));
        }
        let n = self.len();
        let tau = T::of(2.0) * T::PI();
        let shift = tau;
        let dp = T::one() / T::of(n as f64);
        let mut u_slope = Vec::with_capacity(n);
        for j in 0..n {
            let d = fd::d1(&self.u, j, dp, shift);
            if !(d > T::zero()) {
                return Err(Error::Degeneracy(
                    "angle is not monotone; curve is not a radial graph".into(),
                ));
            }
            u_slope.push(d);
        }
        let mut r_slope = Vec::with_capacity(n);
        for j in 0..n {
            r_slope.push(fd::d1(&self.r, j, dp, T::zero()));
        }

        let u0 = self.u[0];
        let mut values = Vec::with_capacity(n);
        let mut k = 0usize;
        for m in 0..n {
            let target = u0 + tau * T::of(m as f64) / T::of(n as f64);
            while k + 1 <= n && fd::lifted(&self.u, 0, k as isize + 1, shift) <= target {
                k += 1;
            }
            let uk = fd::lifted(&self.u, 0, k as isize, shift);
            let ukn = fd::lifted(&self.u, 0, k as isize + 1, shift);
            let kk = k % n;
            let kn = (k + 1) % n;
            let mut xi = (target - uk) / (ukn - uk);
            for _ in 0..8 {
                let val = hermite::eval_interval(
                    uk,
                    ukn,
                    u_slope[kk] * dp,
                    u_slope[kn] * dp,
                    T::one(),
                    xi,
                );
                let der = hermite::eval_interval_deriv(
                    uk,
                    ukn,
                    u_slope[kk] * dp,
                    u_slope[kn] * dp,
                    T::one(),
                    xi,
                );
                let step = (val - target) / der;
                xi = xi - step;
                if step.abs() < T::of(1e-15) {
                    break;
                }
            }
            let xi = xi.max(T::zero()).min(T::one());
            let rk = fd::lifted(&self.r, 0, k as isize, T::zero());
            let rkn = fd::lifted(&self.r, 0, k as isize + 1, T::zero());
            let rv = hermite::eval_interval(
                rk,
                rkn,
                r_slope[kk] * dp,
                r_slope[kn] * dp,
                T::one(),
                xi,
            );
            values.push(rv);
        }
        // The resampled graph starts at angle u0; rotate so that values[m]
        // sits at u = 2πm/N + u0. Graph angles are defined up to rotation;
        // keep u0 as the offset.
        RadialGraph::with_offset(values, self.u_mod_tau(0))
    }
}

/// Periodic radial graph r(u_j) on the uniform grid u_j = offset + 2πj/N.
#[derive(Debug, Clone)]
pub struct RadialGraph<T> {
    values: Vec<T>,
    offset: T,
}

/// Pointwise graph quantities: v = √((∂ᵤr)² + φ²) and the graph-form
/// curvature κ = −(φ/v³)∂²ᵤr + (φ′/v)(1 + (∂ᵤr)²/v²).
#[derive(Debug, Clone)]
pub struct GraphGeometry<T> {
    pub dr: Vec<T>,
    pub ddr: Vec<T>,
    pub v: Vec<T>,
    pub kappa: Vec<T>,
}

impl<T: Real> RadialGraph<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        Self::with_offset(values, T::zero())
    }

    pub fn with_offset(values: Vec<T>, offset: T) -> Result<Self> {
        if values.len() < MIN_RESOLUTION {
            return Err(Error::parameter(
                "values",
                format!("need at least {MIN_RESOLUTION} samples"),
            ));
        }
        if values.iter().any(|r| !(*r > T::zero()) || !r.is_finite()) {
            return Err(Error::parameter("values", "radii must be positive and finite"));
        }
        Ok(RadialGraph { values, offset })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn angle(&self, j: usize) -> T {
        self.offset + T::of(2.0) * T::PI() * T::of(j as f64) / T::of(self.len() as f64)
    }

    pub fn mean_radius(&self) -> T {
        self.values.iter().cloned().sum::<T>() / T::of(self.len() as f64)
    }

    pub fn geometry(&self, surface: &SurfaceProfile<T>) -> GraphGeometry<T> {
        let n = self.len();
        let du = T::of(2.0) * T::PI() / T::of(n as f64);
        let mut dr = Vec::with_capacity(n);
        let mut ddr = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        let mut kappa = Vec::with_capacity(n);
        for j in 0..n {
            let d1 = fd::d1(&self.values, j, du, T::zero());
            let d2 = fd::d2(&self.values, j, du, T::zero());
            let phi = surface.phi(self.values[j]);
            let dphi = surface.dphi(self.values[j]);
            let v2 = d1 * d1 + phi * phi;
            let vj = v2.sqrt();
            let k = -(phi / (vj * v2)) * d2 + (dphi / vj) * (T::one() + d1 * d1 / v2);
            dr.push(d1);
            ddr.push(d2);
            v.push(vj);
            kappa.push(k);
        }
        GraphGeometry { dr, ddr, v, kappa }
    }

    /// Loss-free conversion: samples (r_j, u_j) in order of increasing u.
    pub fn to_curve(&self, surface: &SurfaceProfile<T>) -> Result<DiscreteCurve<T>> {
        let n = self.len();
        let r = self.values.clone();
        let u: Vec<T> = (0..n).map(|j| self.angle(j)).collect();
        DiscreteCurve::from_lifted(surface, r, u, 1)
    }
}

/// Initial-curve families.
#[derive(Debug, Clone)]
pub enum CurveKind<T> {
    Circle {
        radius: T,
    },
    PerturbedCircle {
        radius: T,
        mode: usize,
        amplitude: T,
    },
    FourierGraph {
        c0: T,
        cos_coeffs: Vec<(usize, T)>,
        sin_coeffs: Vec<(usize, T)>,
    },
    ChartEllipse {
        semi_x: T,
        semi_y: T,
        center: (T, T),
    },
}

#[derive(Debug, Clone)]
pub enum InitialCurve<T> {
    Graph(RadialGraph<T>),
    Parametric(Vec<ChartPoint<T>>),
}

impl<T: Real> InitialCurve<T> {
    pub fn to_discrete(&self, surface: &SurfaceProfile<T>) -> Result<DiscreteCurve<T>> {
        match self {
            InitialCurve::Graph(g) => g.to_curve(surface),
            InitialCurve::Parametric(pts) => DiscreteCurve::new(surface, pts),
        }
    }
}

/// Builds an initial curve at resolution `n`, validating that it stays in
/// the annulus (grid_step, r_max). Convexity is reported by callers via
/// `kappa_min`, not enforced here.
pub fn initial_curve<T: Real>(
    surface: &SurfaceProfile<T>,
    kind: &CurveKind<T>,
    n: usize,
) -> Result<InitialCurve<T>> {
    if n < MIN_RESOLUTION {
        return Err(Error::parameter("n", format!("resolution below {MIN_RESOLUTION}")));
    }
    let tau = T::of(2.0) * T::PI();
    let check_annulus = |r: T| -> Result<T> {
        if r <= surface.grid_step() || r >= surface.r_max() {
            Err(Error::parameter(
                "kind",
                format!(
                    "curve leaves the annulus ({}, {}): r = {r}",
                    surface.grid_step(),
                    surface.r_max()
                ),
            ))
        } else {
            Ok(r)
        }
    };
    match kind {
        CurveKind::Circle { radius } => {
            check_annulus(*radius)?;
            Ok(InitialCurve::Graph(RadialGraph::new(vec![*radius; n])?))
        }
        CurveKind::PerturbedCircle {
            radius,
            mode,
            amplitude,
        } => {
            let mut values = Vec::with_capacity(n);
            for j in 0..n {
                let u = tau * T::of(j as f64) / T::of(n as f64);
                let r = *radius + *amplitude * (T::of(*mode as f64) * u).cos();
                values.push(check_annulus(r)?);
            }
            Ok(InitialCurve::Graph(RadialGraph::new(values)?))
        }
        CurveKind::FourierGraph {
            c0,
            cos_coeffs,
            sin_coeffs,
        } => {
            let mut values = Vec::with_capacity(n);
            for j in 0..n {
                let u = tau * T::of(j as f64) / T::of(n as f64);
                let mut r = *c0;
                for (k, ck) in cos_coeffs {
                    r = r + *ck * (T::of(*k as f64) * u).cos();
                }
                for (k, sk) in sin_coeffs {
                    r = r + *sk * (T::of(*k as f64) * u).sin();
                }
                values.push(check_annulus(r)?);
            }
            Ok(InitialCurve::Graph(RadialGraph::new(values)?))
        }
        CurveKind::ChartEllipse {
            semi_x,
            semi_y,
            center,
        } => {
            let mut pts = Vec::with_capacity(n);
            for j in 0..n {
                let t = tau * T::of(j as f64) / T::of(n as f64);
                let x = center.0 + *semi_x * t.cos();
                let y = center.1 + *semi_y * t.sin();
                let r = (x * x + y * y).sqrt();
                check_annulus(r)?;
                pts.push(ChartPoint { r, u: y.atan2(x) });
            }
            Ok(InitialCurve::Parametric(pts))
        }
    }
}

/// Winding number of a chart polygon around (x, y) via summed signed turns.
pub fn winding_number_xy<T: Real>(pts: &[(T, T)], x: T, y: T) -> i32 {
    let mut total = T::zero();
    let n = pts.len();
    for j in 0..n {
        let (ax, ay) = (pts[j].0 - x, pts[j].1 - y);
        let (bx, by) = (pts[(j + 1) % n].0 - x, pts[(j + 1) % n].1 - y);
        let cross = ax * by - ay * bx;
        let dot = ax * bx + ay * by;
        total = total + cross.atan2(dot);
    }
    (total / (T::of(2.0) * T::PI())).round().as_f64() as i32
}

fn segments_intersect<T: Real>(a0: (T, T), a1: (T, T), b0: (T, T), b1: (T, T)) -> bool {
    let orient = |p: (T, T), q: (T, T), r: (T, T)| -> T {
        (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
    };
    let d1 = orient(a0, a1, b0);
    let d2 = orient(a0, a1, b1);
    let d3 = orient(b0, b1, a0);
    let d4 = orient(b0, b1, a1);
    (d1 * d2 < T::zero()) && (d3 * d4 < T::zero())
}

/// Symmetric Hausdorff distance between two chart polylines in the chart
/// plane (a Euclidean proxy metric used for scheme cross-validation).
pub fn chart_hausdorff<T: Real>(a: &DiscreteCurve<T>, b: &DiscreteCurve<T>) -> T {
    let pts_a: Vec<(T, T)> = (0..a.len()).map(|j| a.point(j).xy()).collect();
    let pts_b: Vec<(T, T)> = (0..b.len()).map(|j| b.point(j).xy()).collect();
    one_sided_hausdorff(&pts_a, &pts_b).max(one_sided_hausdorff(&pts_b, &pts_a))
}

fn one_sided_hausdorff<T: Real>(from: &[(T, T)], to: &[(T, T)]) -> T {
    let mut worst = T::zero();
    let n = to.len();
    for &p in from {
        let mut best = T::infinity();
        for j in 0..n {
            let d = point_segment_distance(p, to[j], to[(j + 1) % n]);
            best = best.min(d);
        }
        worst = worst.max(best);
    }
    worst
}

fn point_segment_distance<T: Real>(p: (T, T), a: (T, T), b: (T, T)) -> T {
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let (apx, apy) = (p.0 - a.0, p.1 - a.1);
    let denom = abx * abx + aby * aby;
    let t = if denom > T::zero() {
        ((apx * abx + apy * aby) / denom).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let (dx, dy) = (apx - t * abx, apy - t * aby);
    (dx * dx + dy * dy).sqrt()
}
