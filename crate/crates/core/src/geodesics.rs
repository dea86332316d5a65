//! Geodesics on a rotationally symmetric surface: shooting integrator,
//! point-to-point distance, radial gradients, support functions and
//! inner/outer radii.
//!
//! The geodesic equations of g = dr² + φ(r)²du² are r″ = φφ′(u′)² and
//! u″ = −2(φ′/φ) r′u′; the Clairaut constant φ(r)²u′ is conserved. On a
//! Hadamard surface minimizers are unique, the swept angle along a geodesic
//! is monotone, and the terminal miss of the shooting map is monotone in the
//! launch angle, which makes bracketed root finding robust.

use crate::curve::{self, DiscreteCurve};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::surface::SurfaceProfile;
use crate::tolerances as tol;

/// Polar-chart point. The pole is represented by [`Location::Pole`], never
/// by r = 0, to keep the chart singularity out of the data types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint<T> {
    pub r: T,
    pub u: T,
}

impl<T: Real> ChartPoint<T> {
    pub fn new(r: T, u: T) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::parameter("r", format!("chart radius must be positive, got {r}")));
        }
        Ok(ChartPoint { r, u })
    }

    /// Chart map (x, y) = (r cos u, r sin u). Not an isometry.
    pub fn xy(&self) -> (T, T) {
        (self.r * self.u.cos(), self.r * self.u.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location<T> {
    Pole,
    Point(ChartPoint<T>),
}

impl<T: Real> Location<T> {
    pub fn from_xy(x: T, y: T) -> Self {
        let r = (x * x + y * y).sqrt();
        if r < T::of(1e-12) {
            Location::Pole
        } else {
            Location::Point(ChartPoint { r, u: y.atan2(x) })
        }
    }

    pub fn xy(&self) -> (T, T) {
        match self {
            Location::Pole => (T::zero(), T::zero()),
            Location::Point(p) => p.xy(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GeodesicState<T> {
    pub s: T,
    pub r: T,
    pub u: T,
    pub r_vel: T,
    pub u_vel: T,
}

/// A unit-speed geodesic arc with its sampled states.
#[derive(Debug, Clone)]
pub struct GeodesicArc<T> {
    pub start: Location<T>,
    pub direction: T,
    pub length: T,
    pub states: Vec<GeodesicState<T>>,
}

impl<T: Real> GeodesicArc<T> {
    pub fn endpoint(&self) -> &GeodesicState<T> {
        self.states.last().expect("arc has at least the initial state")
    }

    /// Worst unit-speed defect |(r′)² + φ²(u′)² − 1| over the samples.
    pub fn unit_speed_defect(&self, surface: &SurfaceProfile<T>) -> T {
        self.states
            .iter()
            .map(|st| {
                let phi = surface.phi(st.r);
                ((st.r_vel * st.r_vel + phi * phi * st.u_vel * st.u_vel) - T::one()).abs()
            })
            .fold(T::zero(), T::max)
    }

    /// Worst relative drift of the Clairaut constant φ²u′ over the samples.
    pub fn clairaut_drift(&self, surface: &SurfaceProfile<T>) -> T {
        let nu = |st: &GeodesicState<T>| {
            let phi = surface.phi(st.r);
            phi * phi * st.u_vel
        };
        let first = nu(&self.states[0]);
        let scale = first.abs().max(T::of(1e-30));
        self.states
            .iter()
            .map(|st| (nu(st) - first).abs() / scale)
            .fold(T::zero(), T::max)
    }
}

fn geodesic_rhs<T: Real>(surface: &SurfaceProfile<T>, y: &[T; 4]) -> [T; 4] {
    let phi = surface.phi(y[0]);
    let dphi = surface.dphi(y[0]);
    [
        y[2],
        y[3],
        phi * dphi * y[3] * y[3],
        -T::of(2.0) * (dphi / phi) * y[2] * y[3],
    ]
}

fn rk4_geodesic<T: Real>(surface: &SurfaceProfile<T>, y: &[T; 4], h: T) -> [T; 4] {
    let half = T::of(0.5);
    let k1 = geodesic_rhs(surface, y);
    let mut y2 = *y;
    for i in 0..4 {
        y2[i] = y[i] + half * h * k1[i];
    }
    let k2 = geodesic_rhs(surface, &y2);
    let mut y3 = *y;
    for i in 0..4 {
        y3[i] = y[i] + half * h * k2[i];
    }
    let k3 = geodesic_rhs(surface, &y3);
    let mut y4 = *y;
    for i in 0..4 {
        y4[i] = y[i] + h * k3[i];
    }
    let k4 = geodesic_rhs(surface, &y4);
    let mut out = *y;
    let sixth = T::one() / T::of(6.0);
    for i in 0..4 {
        out[i] = y[i] + h * sixth * (k1[i] + T::of(2.0) * (k2[i] + k3[i]) + k4[i]);
    }
    out
}

/// Integrates a geodesic of given arclength from a point or the pole.
/// `direction` is the angle from the outward radial direction toward +u;
/// radial rays from the pole are closed-form.
pub fn shoot<T: Real>(
    surface: &SurfaceProfile<T>,
    from: Location<T>,
    direction: T,
    length: T,
    step: T,
) -> Result<GeodesicArc<T>> {
    if !(length > T::zero()) {
        return Err(Error::parameter("length", "must be positive"));
    }
    if !(step > T::zero()) {
        return Err(Error::parameter("step", "must be positive"));
    }
    let start = match from {
        Location::Pole => {
            // Radial ray: u constant, r = arclength.
            let mut states = Vec::new();
            let mut s = T::zero();
            loop {
                states.push(GeodesicState {
                    s,
                    r: s,
                    u: direction,
                    r_vel: T::one(),
                    u_vel: T::zero(),
                });
                if s >= length {
                    break;
                }
                s = (s + step).min(length);
            }
            if length > surface.r_max() {
                return Err(Error::Range {
                    exit_arclength: surface.r_max().as_f64(),
                });
            }
            return Ok(GeodesicArc {
                start: from,
                direction,
                length,
                states,
            });
        }
        Location::Point(p) => p,
    };

    let phi0 = surface.phi(start.r);
    let mut y = [start.r, start.u, direction.cos(), direction.sin() / phi0];
    let mut s = T::zero();
    let mut states = vec![GeodesicState {
        s,
        r: y[0],
        u: y[1],
        r_vel: y[2],
        u_vel: y[3],
    }];
    let max_steps = 4_000_000usize;
    for _ in 0..max_steps {
        if s >= length {
            break;
        }
        let h = adaptive_step(step, y[0]).min(length - s);
        y = rk4_geodesic(surface, &y, h);
        s = s + h;
        if y[0] > surface.r_max() {
            return Err(Error::Range {
                exit_arclength: s.as_f64(),
            });
        }
        states.push(GeodesicState {
            s,
            r: y[0],
            u: y[1],
            r_vel: y[2],
            u_vel: y[3],
        });
    }
    Ok(GeodesicArc {
        start: from,
        direction,
        length,
        states,
    })
}

#[inline]
fn adaptive_step<T: Real>(base: T, r: T) -> T {
    // The angular equation stiffens like φ′/φ ~ 1/r near the pole.
    base.min((r / T::of(24.0)).max(T::of(1e-10)))
}

/// Tuning knobs of the shooting distance solver.
#[derive(Debug, Clone, Copy)]
pub struct DistanceOpts<T> {
    pub step: T,
    pub miss_tol: T,
    pub max_evals: usize,
}

impl<T: Real> DistanceOpts<T> {
    pub fn precise(surface: &SurfaceProfile<T>) -> Self {
        // Tighter than the 1e-9·r_max contract so that distance symmetry
        // holds to 1e-9 relative as well.
        DistanceOpts {
            step: T::of(2e-3),
            miss_tol: T::of(0.1) * T::of(tol::DISTANCE_MISS_REL) * surface.r_max(),
            max_evals: 80,
        }
    }

    pub fn coarse() -> Self {
        DistanceOpts {
            step: T::of(2e-2),
            miss_tol: T::of(1e-6),
            max_evals: 60,
        }
    }
}

/// A solved point-to-point geodesic: length, launch angle at p, and the
/// terminal unit velocity at q (pointing away from p, coordinate
/// components). `circle_curvature` is J′/J of the scalar Jacobi field, the
/// curvature at q of the geodesic circle centered at p.
#[derive(Debug, Clone, Copy)]
pub struct Connection<T> {
    pub distance: T,
    pub launch_angle: T,
    pub terminal_r_vel: T,
    pub terminal_u_vel: T,
    pub circle_curvature: T,
}

enum Sweep<T> {
    Crossing {
        s: T,
        r: T,
        r_vel: T,
        u_vel: T,
        jacobi: (T, T),
    },
    /// Left the annulus or exceeded the length cap before sweeping the
    /// target angle (launch too radial-outward).
    Exited,
    /// Step budget exhausted creeping around the pole (launch too
    /// radial-inward); the current tiny radius still gives the miss its
    /// correct sign.
    Stalled { r: T },
}

/// Integrates from (r1, 0) with launch angle `beta` until the swept angle
/// reaches `du_target`, carrying the scalar Jacobi field J″ = −𝒦 J.
fn sweep_to_angle<T: Real>(
    surface: &SurfaceProfile<T>,
    r1: T,
    beta: T,
    du_target: T,
    step: T,
    s_cap: T,
) -> Sweep<T> {
    let phi0 = surface.phi(r1);
    // State: (r, w, r′, w′, J, J′).
    let rhs = |y: &[T; 6]| -> [T; 6] {
        let phi = surface.phi(y[0]);
        let dphi = surface.dphi(y[0]);
        let k = surface.gauss(y[0]);
        [
            y[2],
            y[3],
            phi * dphi * y[3] * y[3],
            -T::of(2.0) * (dphi / phi) * y[2] * y[3],
            y[5],
            -k * y[4],
        ]
    };
    let rk4 = |y: &[T; 6], h: T| -> [T; 6] {
        let half = T::of(0.5);
        let k1 = rhs(y);
        let mut y2 = *y;
        for i in 0..6 {
            y2[i] = y[i] + half * h * k1[i];
        }
        let k2 = rhs(&y2);
        let mut y3 = *y;
        for i in 0..6 {
            y3[i] = y[i] + half * h * k2[i];
        }
        let k3 = rhs(&y3);
        let mut y4 = *y;
        for i in 0..6 {
            y4[i] = y[i] + h * k3[i];
        }
        let k4 = rhs(&y4);
        let mut out = *y;
        let sixth = T::one() / T::of(6.0);
        for i in 0..6 {
            out[i] = y[i] + h * sixth * (k1[i] + T::of(2.0) * (k2[i] + k3[i]) + k4[i]);
        }
        out
    };

    let mut y = [
        r1,
        T::zero(),
        beta.cos(),
        beta.sin() / phi0,
        T::zero(),
        T::one(),
    ];
    let mut s = T::zero();
    let r_cap = surface.r_max();
    let max_steps = 1_500_000usize;
    let mut capped = true;
    for _ in 0..max_steps {
        if y[1] >= du_target {
            capped = false;
            break;
        }
        if s > s_cap || y[0] > r_cap {
            return Sweep::Exited;
        }
        let h = adaptive_step(step, y[0]);
        let prev = y;
        let prev_s = s;
        y = rk4(&y, h);
        s = s + h;
        if y[1] >= du_target {
            // Refine the crossing: Newton on the step fraction, re-stepping
            // from the pre-crossing state each time.
            let frac = ((du_target - prev[1]) / (y[1] - prev[1]))
                .max(T::zero())
                .min(T::one());
            let mut state = prev;
            let mut ds = h * frac;
            for _ in 0..4 {
                state = rk4(&prev, ds);
                let err = state[1] - du_target;
                if err.abs() < T::of(1e-14) * du_target.max(T::one()) {
                    break;
                }
                let correction = err / state[3].max(T::of(1e-300));
                ds = ds - correction;
                if ds < T::zero() {
                    ds = T::zero();
                }
            }
            return Sweep::Crossing {
                s: prev_s + ds,
                r: state[0],
                r_vel: state[2],
                u_vel: state[3],
                jacobi: (state[4], state[5]),
            };
        }
    }
    if y[1] >= du_target {
        return Sweep::Crossing {
            s,
            r: y[0],
            r_vel: y[2],
            u_vel: y[3],
            jacobi: (y[4], y[5]),
        };
    }
    if capped {
        Sweep::Stalled { r: y[0] }
    } else {
        Sweep::Exited
    }
}

/// Solves the geodesic boundary value problem between two chart points by
/// shooting with bracketed secant iteration on the launch angle. Radial and
/// through-pole configurations use closed forms.
pub fn solve_between<T: Real>(
    surface: &SurfaceProfile<T>,
    p: ChartPoint<T>,
    q: ChartPoint<T>,
    opts: &DistanceOpts<T>,
) -> Result<Connection<T>> {
    let pi = T::PI();
    let tau = T::of(2.0) * pi;
    let mut du = (q.u - p.u) % tau;
    if du > pi {
        du = du - tau;
    }
    if du < -pi {
        du = du + tau;
    }
    let mirrored = du < T::zero();
    let du_abs = du.abs();

    const MERIDIAN_EPS: f64 = 1e-9;
    // Through-pole window: the closed form d = r1 + r2 has error
    // ~ δ²·sinh(min r)/2 at δ = π − Δu, so the window widens as either
    // endpoint approaches the pole (where the shooting root in β is no
    // longer resolvable anyway).
    let allowed = opts.miss_tol.max(T::of(1e-12));
    let r_small = p.r.min(q.r).min(T::one()).max(T::of(1e-9));
    let pole_eps = (T::of(2.0) * allowed / r_small)
        .sqrt()
        .max(T::of(1e-4))
        .min(T::of(0.05));

    if du_abs < T::of(MERIDIAN_EPS) {
        // Same meridian.
        let d = (q.r - p.r).abs();
        if d < T::of(1e-300) {
            return Ok(Connection {
                distance: T::zero(),
                launch_angle: T::zero(),
                terminal_r_vel: T::one(),
                terminal_u_vel: T::zero(),
                circle_curvature: T::infinity(),
            });
        }
        let sign = if q.r > p.r { T::one() } else { -T::one() };
        let kc = jacobi_along_meridian(surface, p.r, q.r);
        return Ok(Connection {
            distance: d,
            launch_angle: if sign > T::zero() { T::zero() } else { pi },
            terminal_r_vel: sign,
            terminal_u_vel: T::zero(),
            circle_curvature: kc,
        });
    }
    if du_abs > pi - pole_eps {
        // Minimizer passes through the pole: meridian down, meridian up.
        let d = p.r + q.r;
        let kc = jacobi_through_pole(surface, p.r, q.r);
        return Ok(Connection {
            distance: d,
            launch_angle: pi,
            terminal_r_vel: T::one(),
            terminal_u_vel: T::zero(),
            circle_curvature: kc,
        });
    }

    let s_cap = T::of(2.0) * (p.r + q.r) + T::of(4.0);
    let miss = |beta: T| -> (T, Option<Sweep<T>>) {
        match sweep_to_angle(surface, p.r, beta, du_abs, opts.step, s_cap) {
            Sweep::Exited => (surface.r_max() - q.r + T::one(), None),
            Sweep::Stalled { r } => (r - q.r, None),
            Sweep::Crossing {
                s,
                r,
                r_vel,
                u_vel,
                jacobi,
            } => (
                r - q.r,
                Some(Sweep::Crossing {
                    s,
                    r,
                    r_vel,
                    u_vel,
                    jacobi,
                }),
            ),
        }
    };

    // Bracket: near-radial outward never sweeps the angle (miss > 0),
    // near-radial inward swings around the pole at small radius (miss < 0).
    let eps = T::of(1e-7);
    let mut lo = eps;
    let mut hi = pi - eps;

    // Initial guess: direction of the straight chart segment.
    let (px, py) = p.xy();
    let (qx, qy) = q.xy();
    let (dx, dy) = (qx - px, qy - py);
    let (rx, ry) = (px / p.r, py / p.r);
    let cross = rx * dy - ry * dx;
    let dot = rx * dx + ry * dy;
    let mut beta = cross.abs().atan2(dot).max(lo).min(hi);

    let (mut f_beta, mut best) = miss(beta);
    let mut evals = 1;
    let mut prev: Option<(T, T)> = None;

    while f_beta.abs() > opts.miss_tol && evals < opts.max_evals {
        if f_beta > T::zero() {
            lo = beta;
        } else {
            hi = beta;
        }

        // Secant step when the last two evaluations allow it, clipped to
        // the bracket; bisection otherwise.
        let mut next = match prev {
            Some((b_prev, f_prev)) if (f_beta - f_prev).abs() > T::of(1e-300) => {
                beta - f_beta * (beta - b_prev) / (f_beta - f_prev)
            }
            _ => (lo + hi) / T::of(2.0),
        };
        if !(next > lo && next < hi) {
            next = (lo + hi) / T::of(2.0)
        }
        prev = Some((beta, f_beta));
        beta = next;
        let (f, b) = miss(beta);
        f_beta = f;
        if b.is_some() {
            best = b;
        }
        evals += 1;
        if hi - lo < T::of(1e-15) {
            break;
        }
    }

    let crossing = match best {
        Some(Sweep::Crossing {
            s,
            r: _,
            r_vel,
            u_vel,
            jacobi,
        }) if f_beta.abs() <= T::of(100.0) * opts.miss_tol => (s, r_vel, u_vel, jacobi),
        _ => {
            return Err(Error::Search(format!(
                "distance shooting failed: p=({}, {}), q=({}, {}), residual miss {}",
                p.r, p.u, q.r, q.u, f_beta
            )))
        }
    };

    let (s, r_vel, u_vel, (jac, djac)) = crossing;
    let phi_q = surface.phi(q.r);
    let norm = (r_vel * r_vel + phi_q * phi_q * u_vel * u_vel).sqrt();
    let u_sign = if mirrored { -T::one() } else { T::one() };
    Ok(Connection {
        distance: s,
        launch_angle: if mirrored { -beta } else { beta },
        terminal_r_vel: r_vel / norm,
        terminal_u_vel: u_sign * u_vel / norm,
        circle_curvature: djac / jac,
    })
}

/// J′/J at q for the geodesic circle centered at (r1, ·) through (r2, same
/// meridian): integrate J″ = −𝒦(r(s))J along the radial segment.
fn jacobi_along_meridian<T: Real>(surface: &SurfaceProfile<T>, r1: T, r2: T) -> T {
    let d = (r2 - r1).abs();
    let sign = if r2 > r1 { T::one() } else { -T::one() };
    integrate_jacobi(surface, d, |s| r1 + sign * s)
}

fn jacobi_through_pole<T: Real>(surface: &SurfaceProfile<T>, r1: T, r2: T) -> T {
    integrate_jacobi(surface, r1 + r2, |s| (s - r1).abs())
}

fn integrate_jacobi<T: Real>(surface: &SurfaceProfile<T>, length: T, r_of_s: impl Fn(T) -> T) -> T {
    let n = 400usize;
    let h = length / T::of(n as f64);
    let mut j = T::zero();
    let mut dj = T::one();
    let rhs = |s: T, y: (T, T)| -> (T, T) { (y.1, -surface.gauss(r_of_s(s)) * y.0) };
    let half = T::of(0.5);
    let sixth = T::one() / T::of(6.0);
    for i in 0..n {
        let s = h * T::of(i as f64);
        let k1 = rhs(s, (j, dj));
        let k2 = rhs(s + half * h, (j + half * h * k1.0, dj + half * h * k1.1));
        let k3 = rhs(s + half * h, (j + half * h * k2.0, dj + half * h * k2.1));
        let k4 = rhs(s + h, (j + h * k3.0, dj + h * k3.1));
        j = j + h * sixth * (k1.0 + T::of(2.0) * (k2.0 + k3.0) + k4.0);
        dj = dj + h * sixth * (k1.1 + T::of(2.0) * (k2.1 + k3.1) + k4.1);
    }
    dj / j
}

/// Minimizing geodesic distance. Distances to the pole are exact; generic
/// pairs are solved by shooting with bisection/secant on the launch angle.
pub fn distance<T: Real>(
    surface: &SurfaceProfile<T>,
    p: Location<T>,
    q: Location<T>,
) -> Result<T> {
    distance_with(surface, p, q, &DistanceOpts::precise(surface))
}

pub fn distance_with<T: Real>(
    surface: &SurfaceProfile<T>,
    p: Location<T>,
    q: Location<T>,
    opts: &DistanceOpts<T>,
) -> Result<T> {
    match (p, q) {
        (Location::Pole, Location::Pole) => Ok(T::zero()),
        (Location::Pole, Location::Point(x)) | (Location::Point(x), Location::Pole) => Ok(x.r),
        (Location::Point(a), Location::Point(b)) => {
            Ok(solve_between(surface, a, b, opts)?.distance)
        }
    }
}

/// Unit gradient of the distance-to-p0 function at x, i.e. the terminal
/// velocity of the minimizing geodesic from p0 to x, in (r, u) coordinate
/// components.
pub fn radial_gradient<T: Real>(
    surface: &SurfaceProfile<T>,
    p0: Location<T>,
    x: ChartPoint<T>,
) -> Result<(T, T)> {
    match p0 {
        Location::Pole => Ok((T::one(), T::zero())),
        Location::Point(p) => {
            let conn = solve_between(surface, p, x, &DistanceOpts::precise(surface))?;
            if conn.distance == T::zero() {
                return Err(Error::Domain("radial gradient undefined at the base point".into()));
            }
            Ok((conn.terminal_r_vel, conn.terminal_u_vel))
        }
    }
}

/// Support function of a closed curve with respect to p0, per sample:
/// sinh(r_{p0})·⟨∂r, N⟩ (the unit-curvature normalization is kept
/// verbatim), plus the φ(r_{p0})·⟨∂r, N⟩ variant.
#[derive(Debug, Clone)]
pub struct SupportValues<T> {
    pub sinh_weighted: Vec<T>,
    pub phi_weighted: Vec<T>,
}

pub fn support_function<T: Real>(
    surface: &SurfaceProfile<T>,
    p0: Location<T>,
    curve: &DiscreteCurve<T>,
) -> Result<SupportValues<T>> {
    let (x0, y0) = p0.xy();
    if curve.winding_about(x0, y0).abs() != 1 {
        return Err(Error::parameter("p0", "must lie strictly inside the curve"));
    }
    let n = curve.len();
    let mut sinh_weighted = Vec::with_capacity(n);
    let mut phi_weighted = Vec::with_capacity(n);
    let opts = DistanceOpts {
        step: T::of(5e-3),
        miss_tol: T::of(1e-8) * surface.r_max(),
        max_evals: 60,
    };
    for j in 0..n {
        let x = curve.point(j);
        let (rad, grad) = match p0 {
            Location::Pole => (x.r, (T::one(), T::zero())),
            Location::Point(p) => {
                let conn = solve_between(surface, p, x, &opts)?;
                (conn.distance, (conn.terminal_r_vel, conn.terminal_u_vel))
            }
        };
        let (nr, nu) = curve.normal(j);
        let phi = surface.phi(x.r);
        let inner = grad.0 * nr + phi * phi * grad.1 * nu;
        sinh_weighted.push(rad.sinh() * inner);
        phi_weighted.push(surface.phi(rad) * inner);
    }
    Ok(SupportValues {
        sinh_weighted,
        phi_weighted,
    })
}

/// Inner/outer radius search settings. Defaults follow the artifact's
/// accuracy target of ~1e-3: 16×16 candidate grid, Nelder–Mead refinement
/// with a 200-evaluation budget, coarse shooting distances.
#[derive(Debug, Clone, Copy)]
pub struct SearchSettings<T> {
    pub grid: usize,
    pub nm_budget: usize,
    /// Curve subsampling stride; 0 picks ~64 samples automatically.
    pub curve_stride: usize,
    pub distance_step: T,
    pub distance_tol: T,
}

impl<T: Real> Default for SearchSettings<T> {
    fn default() -> Self {
        SearchSettings {
            grid: 16,
            nm_budget: 200,
            curve_stride: 0,
            distance_step: T::of(2e-2),
            distance_tol: T::of(1e-6),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RadiiEstimate<T> {
    pub rho_minus: T,
    pub rho_plus: T,
    pub center_minus: Location<T>,
    pub center_plus: Location<T>,
    /// Estimated absolute accuracy of the reported radii.
    pub accuracy: T,
}

/// Inner radius ρ₋ = max over centers inside Ω of the min distance to the
/// curve; outer radius ρ₊ = min over centers of the max distance. Candidate
/// centers come from a fixed chart grid followed by deterministic
/// Nelder–Mead refinement, so results are reproducible.
pub fn inradius_outradius<T: Real>(
    surface: &SurfaceProfile<T>,
    curve: &DiscreteCurve<T>,
    settings: &SearchSettings<T>,
) -> Result<RadiiEstimate<T>> {
    if !curve.is_embedded() {
        return Err(Error::parameter("curve", "self-intersecting curve has no radii"));
    }
    let n = curve.len();
    let stride = if settings.curve_stride == 0 {
        (n / 64).max(1)
    } else {
        settings.curve_stride
    };
    let samples: Vec<ChartPoint<T>> = (0..n).step_by(stride).map(|j| curve.point(j)).collect();
    let m = samples.len();
    let opts = DistanceOpts {
        step: settings.distance_step,
        miss_tol: settings.distance_tol,
        max_evals: 60,
    };

    let dist_to_sample = |center: Location<T>, j: usize| -> Result<T> {
        match center {
            Location::Pole => Ok(samples[j].r),
            Location::Point(c) => Ok(solve_between(surface, c, samples[j], &opts)?.distance),
        }
    };

    // Distance profile around the curve with parabolic refinement of the
    // extremum over the subsample index. Centers within 1e-5 of the origin
    // snap to the pole: well below the search accuracy, and it keeps the
    // shooting solver away from microscopic start radii.
    let profile = |x: T, y: T| -> Result<(T, T)> {
        let center = if (x * x + y * y).sqrt() < T::of(2e-4) {
            Location::Pole
        } else {
            Location::from_xy(x, y)
        };
        let mut d = Vec::with_capacity(m);
        for j in 0..m {
            d.push(dist_to_sample(center, j)?);
        }
        let (mut jmin, mut jmax) = (0usize, 0usize);
        for j in 1..m {
            if d[j] < d[jmin] {
                jmin = j;
            }
            if d[j] > d[jmax] {
                jmax = j;
            }
        }
        let refine = |j: usize, minimum: bool| -> T {
            let fm = d[(j + m - 1) % m];
            let f0 = d[j];
            let fp = d[(j + 1) % m];
            let denom = fp - T::of(2.0) * f0 + fm;
            if denom.abs() < T::of(1e-14) {
                return f0;
            }
            let corr = (fp - fm) * (fp - fm) / (T::of(8.0) * denom);
            let v = f0 - corr;
            if minimum {
                v.min(f0)
            } else {
                v.max(f0)
            }
        };
        Ok((refine(jmin, true), refine(jmax, false)))
    };

    let inside = |x: T, y: T| curve.winding_about(x, y).abs() == 1;

    // Candidate grid over the chart bounding box.
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (
        T::infinity(),
        -T::infinity(),
        T::infinity(),
        -T::infinity(),
    );
    for j in 0..n {
        let (x, y) = curve.point(j).xy();
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let g = settings.grid.max(2);
    let mut candidates: Vec<(T, T)> = Vec::new();
    if inside(T::zero(), T::zero()) {
        candidates.push((T::zero(), T::zero()));
    }
    let (cx, cy) = curve.chart_centroid();
    if inside(cx, cy) {
        candidates.push((cx, cy));
    }
    for i in 0..g {
        for k in 0..g {
            let fx = (T::of(i as f64) + T::of(0.5)) / T::of(g as f64);
            let fy = (T::of(k as f64) + T::of(0.5)) / T::of(g as f64);
            let x = xmin + (xmax - xmin) * fx;
            let y = ymin + (ymax - ymin) * fy;
            if inside(x, y) {
                candidates.push((x, y));
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::Degeneracy("no candidate centers inside the curve".into()));
    }

    let mut best_min: Option<((T, T), T)> = None;
    let mut best_max: Option<((T, T), T)> = None;
    for &(x, y) in &candidates {
        let (fmin, fmax) = profile(x, y)?;
        if best_min.map_or(true, |(_, v)| fmin > v) {
            best_min = Some(((x, y), fmin));
        }
        if best_max.map_or(true, |(_, v)| fmax < v) {
            best_max = Some(((x, y), fmax));
        }
    }
    let (start_min, _) = best_min.unwrap();
    let (start_max, _) = best_max.unwrap();

    let scale = ((xmax - xmin) + (ymax - ymin)) / T::of(2.0 * g as f64);
    let neg_inf = -T::infinity();
    // ρ₋: maximize the min distance (reject centers outside Ω).
    let (center_min_xy, rho_minus, simplex_min) = nelder_mead(
        start_min,
        scale,
        settings.nm_budget,
        |x, y| {
            if !inside(x, y) {
                return Ok(neg_inf);
            }
            profile(x, y).map(|(fmin, _)| fmin)
        },
        true,
    )?;
    // ρ₊: minimize the max distance.
    let (center_max_xy, rho_plus, simplex_max) = nelder_mead(
        start_max,
        scale,
        settings.nm_budget,
        |x, y| {
            if !inside(x, y) {
                return Ok(T::infinity());
            }
            profile(x, y).map(|(_, fmax)| fmax)
        },
        false,
    )?;

    let sampling_term = {
        let ds = curve.length() / T::of(m as f64);
        let kmax = curve
            .kappas()
            .iter()
            .fold(T::zero(), |acc, &k| acc.max(k.abs()));
        ds * ds * kmax / T::of(8.0)
    };
    let accuracy = simplex_min
        .max(simplex_max)
        .max(settings.distance_tol)
        .max(sampling_term * T::of(0.1))
        .max(T::of(1e-6));

    Ok(RadiiEstimate {
        rho_minus,
        rho_plus,
        center_minus: Location::from_xy(center_min_xy.0, center_min_xy.1),
        center_plus: Location::from_xy(center_max_xy.0, center_max_xy.1),
        accuracy,
    })
}

/// Deterministic Nelder–Mead in the chart plane. Returns (point, value,
/// final simplex diameter).
fn nelder_mead<T: Real>(
    start: (T, T),
    scale: T,
    budget: usize,
    mut f: impl FnMut(T, T) -> Result<T>,
    maximize: bool,
) -> Result<((T, T), T, T)> {
    let sgn = if maximize { -T::one() } else { T::one() };
    let mut eval = |p: (T, T)| -> Result<T> { Ok(sgn * f(p.0, p.1)?) };

    let offsets = [(T::zero(), T::zero()), (scale, T::zero()), (T::zero(), scale)];
    let mut simplex: Vec<((T, T), T)> = Vec::with_capacity(3);
    let mut used = 0usize;
    for off in offsets {
        let p = (start.0 + off.0, start.1 + off.1);
        let v = eval(p)?;
        used += 1;
        simplex.push((p, v));
    }

    while used < budget {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0];
        let worst = simplex[2];
        let mid = (
            (simplex[0].0 .0 + simplex[1].0 .0) / T::of(2.0),
            (simplex[0].0 .1 + simplex[1].0 .1) / T::of(2.0),
        );
        let refl = (
            mid.0 + (mid.0 - worst.0 .0),
            mid.1 + (mid.1 - worst.0 .1),
        );
        let f_refl = eval(refl)?;
        used += 1;
        if f_refl < best.1 {
            let exp = (
                mid.0 + T::of(2.0) * (mid.0 - worst.0 .0),
                mid.1 + T::of(2.0) * (mid.1 - worst.0 .1),
            );
            let f_exp = eval(exp)?;
            used += 1;
            simplex[2] = if f_exp < f_refl { (exp, f_exp) } else { (refl, f_refl) };
        } else if f_refl < simplex[1].1 {
            simplex[2] = (refl, f_refl);
        } else {
            let contr = (
                mid.0 + T::of(0.5) * (worst.0 .0 - mid.0),
                mid.1 + T::of(0.5) * (worst.0 .1 - mid.1),
            );
            let f_contr = eval(contr)?;
            used += 1;
            if f_contr < worst.1 {
                simplex[2] = (contr, f_contr);
            } else {
                for i in 1..3 {
                    let shrunk = (
                        best.0 .0 + T::of(0.5) * (simplex[i].0 .0 - best.0 .0),
                        best.0 .1 + T::of(0.5) * (simplex[i].0 .1 - best.0 .1),
                    );
                    let v = eval(shrunk)?;
                    used += 1;
                    simplex[i] = (shrunk, v);
                }
            }
        }
        let diam = simplex_diameter(&simplex);
        if diam < T::of(1e-7) {
            break;
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let diam = simplex_diameter(&simplex);
    Ok((simplex[0].0, sgn * simplex[0].1, diam))
}

fn simplex_diameter<T: Real>(simplex: &[((T, T), T)]) -> T {
    let mut d = T::zero();
    for i in 0..simplex.len() {
        for j in i + 1..simplex.len() {
            let dx = simplex[i].0 .0 - simplex[j].0 .0;
            let dy = simplex[i].0 .1 - simplex[j].0 .1;
            d = d.max((dx * dx + dy * dy).sqrt());
        }
    }
    d
}

/// Keeps the winding test available to callers holding only raw points.
pub fn winding_number<T: Real>(points_xy: &[(T, T)], x: T, y: T) -> i32 {
    curve::winding_number_xy(points_xy, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{initial_curve, CurveKind, InitialCurve};
    use crate::surface::PinchKind;

    const SINH_1: f64 = 1.1752011936438014;

    fn hyperbolic() -> SurfaceProfile<f64> {
        SurfaceProfile::build_constant_curvature(1.0).unwrap()
    }

    fn tanh_profile() -> SurfaceProfile<f64> {
        SurfaceProfile::build_from_curvature(PinchKind::TanhPinch, 1.0, 2.0, 1.0, 10.0, 1e-3)
            .unwrap()
    }

    /// Closed-form geodesics of the hyperbolic plane via the hyperboloid
    /// model; independent of the shooting integrator.
    fn hyperboloid_exp(r: f64, u: f64, beta: f64, s: f64) -> (f64, f64) {
        let p = [r.cosh(), r.sinh() * u.cos(), r.sinh() * u.sin()];
        let er = [r.sinh(), r.cosh() * u.cos(), r.cosh() * u.sin()];
        let eu = [0.0, -u.sin(), u.cos()];
        let v: Vec<f64> = (0..3)
            .map(|i| beta.cos() * er[i] + beta.sin() * eu[i])
            .collect();
        let x: Vec<f64> = (0..3).map(|i| s.cosh() * p[i] + s.sinh() * v[i]).collect();
        (x[0].acosh(), x[2].atan2(x[1]))
    }

    fn law_of_cosines(r1: f64, r2: f64, du: f64) -> f64 {
        (r1.cosh() * r2.cosh() - r1.sinh() * r2.sinh() * du.cos()).acosh()
    }

    #[test]
    fn pole_shoot_is_radial() {
        let s = hyperbolic();
        let arc = shoot(&s, Location::Pole, 0.7, 1.3, 1e-2).unwrap();
        let end = arc.endpoint();
        assert_eq!(end.r, 1.3);
        assert_eq!(end.u, 0.7);
    }

    #[test]
    fn meridians_are_geodesics() {
        let s = tanh_profile();
        let from = Location::Point(ChartPoint::new(1.0, 0.0).unwrap());
        let arc = shoot(&s, from, 0.0, 0.5, 1e-3).unwrap();
        let end = arc.endpoint();
        assert!((end.r - 1.5).abs() < 1e-10);
        assert!(end.u.abs() < 1e-12);
    }

    #[test]
    fn tangential_shoot_matches_hyperboloid_model() {
        let s = hyperbolic();
        let from = Location::Point(ChartPoint::new(1.0, 0.0).unwrap());
        let beta = std::f64::consts::FRAC_PI_2;
        let arc = shoot(&s, from, beta, 1.0, 1e-3).unwrap();
        let end = arc.endpoint();
        let (r_exp, u_exp) = hyperboloid_exp(1.0, 0.0, beta, 1.0);
        assert!((end.r - r_exp).abs() < 1e-8, "r: {} vs {}", end.r, r_exp);
        assert!((end.u - u_exp).abs() < 1e-8, "u: {} vs {}", end.u, u_exp);
    }

    #[test]
    fn arcs_conserve_unit_speed_and_clairaut() {
        for surf in [hyperbolic(), tanh_profile()] {
            let from = Location::Point(ChartPoint::new(1.2, 0.3).unwrap());
            let arc = shoot(&surf, from, 1.1, 2.0, 2e-3).unwrap();
            assert!(arc.unit_speed_defect(&surf) < 1e-8);
            assert!(arc.clairaut_drift(&surf) < 1e-8);
        }
    }

    #[test]
    fn shoot_reports_annulus_exit() {
        let s = SurfaceProfile::build_constant_curvature_with(1.0, 2.0, 1e-3).unwrap();
        let from = Location::Point(ChartPoint::new(1.5, 0.0).unwrap());
        match shoot(&s, from, 0.0, 1.0, 1e-2) {
            Err(Error::Range { exit_arclength }) => assert!(exit_arclength < 0.6),
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn distance_radial_cases() {
        let s = tanh_profile();
        let p = ChartPoint::new(1.0, 0.4).unwrap();
        assert_eq!(
            distance(&s, Location::Pole, Location::Point(p)).unwrap(),
            1.0
        );
        let q = ChartPoint::new(2.0, 0.4).unwrap();
        let d = distance(&s, Location::Point(p), Location::Point(q)).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_through_pole() {
        let s = hyperbolic();
        let p = ChartPoint::new(1.0, 0.0).unwrap();
        let q = ChartPoint::new(1.0, std::f64::consts::PI).unwrap();
        let d = distance(&s, Location::Point(p), Location::Point(q)).unwrap();
        // Law-of-cosines oracle: acosh(cosh²1 + sinh²1) = 2 exactly.
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_law_of_cosines() {
        let s = hyperbolic();
        // Deterministic LCG so the 100 pairs are reproducible.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let r1 = 0.2 + 2.3 * rnd();
            let r2 = 0.2 + 2.3 * rnd();
            let u1 = std::f64::consts::TAU * rnd();
            let du = 0.02 + (std::f64::consts::PI - 0.04) * rnd();
            let p = ChartPoint::new(r1, u1).unwrap();
            let q = ChartPoint::new(r2, u1 + du).unwrap();
            let d = distance(&s, Location::Point(p), Location::Point(q)).unwrap();
            let oracle = law_of_cosines(r1, r2, du);
            worst = worst.max((d - oracle).abs());
        }
        assert!(worst < 1e-7, "worst distance error {worst}");
    }

    #[test]
    fn distance_is_symmetric() {
        let s = tanh_profile();
        let pairs = [
            ((1.0, 0.1), (1.7, 1.2)),
            ((0.6, 2.0), (2.1, 4.0)),
            ((1.4, -0.4), (1.2, 0.9)),
        ];
        for ((r1, u1), (r2, u2)) in pairs {
            let p = Location::Point(ChartPoint::new(r1, u1).unwrap());
            let q = Location::Point(ChartPoint::new(r2, u2).unwrap());
            let d1 = distance(&s, p, q).unwrap();
            let d2 = distance(&s, q, p).unwrap();
            assert!((d1 - d2).abs() < 1e-9 * d1.max(1.0), "{d1} vs {d2}");
        }
    }

    #[test]
    fn triangle_inequality_holds() {
        let s = tanh_profile();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let mut pts = Vec::new();
            for _ in 0..3 {
                pts.push(Location::Point(
                    ChartPoint::new(0.3 + 2.0 * rnd(), std::f64::consts::TAU * rnd()).unwrap(),
                ));
            }
            let dab = distance(&s, pts[0], pts[1]).unwrap();
            let dbc = distance(&s, pts[1], pts[2]).unwrap();
            let dac = distance(&s, pts[0], pts[2]).unwrap();
            assert!(dac <= dab + dbc + 1e-7, "{dac} > {dab} + {dbc}");
        }
    }

    #[test]
    fn radial_gradient_cases() {
        let s = tanh_profile();
        let x = ChartPoint::new(1.5, 0.7).unwrap();
        assert_eq!(radial_gradient(&s, Location::Pole, x).unwrap(), (1.0, 0.0));

        let p0 = Location::Point(ChartPoint::new(0.5, 0.7).unwrap());
        let (gr, gu) = radial_gradient(&s, p0, x).unwrap();
        assert!((gr - 1.0).abs() < 1e-9);
        assert!(gu.abs() < 1e-9);
    }

    #[test]
    fn radial_gradient_matches_hyperboloid_model() {
        let s = hyperbolic();
        let (r1, u1) = (0.8, 0.3);
        let (r2, u2) = (1.4, 1.1);
        let p0 = Location::Point(ChartPoint::new(r1, u1).unwrap());
        let x = ChartPoint::new(r2, u2).unwrap();
        let (gr, gu) = radial_gradient(&s, p0, x).unwrap();

        // Oracle: terminal velocity of the hyperboloid-model geodesic.
        let d = law_of_cosines(r1, r2, u2 - u1);
        let p = [r1.cosh(), r1.sinh() * u1.cos(), r1.sinh() * u1.sin()];
        let q = [r2.cosh(), r2.sinh() * u2.cos(), r2.sinh() * u2.sin()];
        let v: Vec<f64> = (0..3).map(|i| (q[i] - d.cosh() * p[i]) / d.sinh()).collect();
        let w: Vec<f64> = (0..3).map(|i| d.sinh() * p[i] + d.cosh() * v[i]).collect();
        let er = [r2.sinh(), r2.cosh() * u2.cos(), r2.cosh() * u2.sin()];
        let eu = [0.0, -u2.sin(), u2.cos()];
        let mink = |a: &[f64], b: &[f64]| -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let gr_oracle = mink(&w, &er);
        let gu_oracle = mink(&w, &eu) / r2.sinh();
        assert!((gr - gr_oracle).abs() < 1e-7, "{gr} vs {gr_oracle}");
        assert!((gu - gu_oracle).abs() < 1e-7, "{gu} vs {gu_oracle}");
    }

    #[test]
    fn support_function_of_circle_is_sinh() {
        let s = hyperbolic();
        let c = match initial_curve(&s, &CurveKind::Circle { radius: 1.0 }, 128).unwrap() {
            InitialCurve::Graph(g) => g.to_curve(&s).unwrap(),
            _ => unreachable!(),
        };
        let sv = support_function(&s, Location::Pole, &c).unwrap();
        for v in &sv.sinh_weighted {
            assert!((v - SINH_1).abs() < 1e-10);
        }
        for v in &sv.phi_weighted {
            assert!((v - SINH_1).abs() < 1e-10);
        }
    }

    #[test]
    fn support_function_positive_for_convex_graph() {
        let s = tanh_profile();
        let kind = CurveKind::FourierGraph {
            c0: 1.5,
            cos_coeffs: vec![(2, 0.05)],
            sin_coeffs: vec![(3, 0.02)],
        };
        let c = match initial_curve(&s, &kind, 128).unwrap() {
            InitialCurve::Graph(g) => g.to_curve(&s).unwrap(),
            _ => unreachable!(),
        };
        let sv = support_function(&s, Location::Pole, &c).unwrap();
        let min = sv.sinh_weighted.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > 0.0, "support min {min}");
    }

    #[test]
    fn support_function_rejects_outside_base() {
        let s = tanh_profile();
        let c = match initial_curve(&s, &CurveKind::Circle { radius: 1.0 }, 64).unwrap() {
            InitialCurve::Graph(g) => g.to_curve(&s).unwrap(),
            _ => unreachable!(),
        };
        let outside = Location::Point(ChartPoint::new(3.0, 0.0).unwrap());
        assert!(support_function(&s, outside, &c).is_err());
    }

    #[test]
    fn circle_radii_recovered() {
        let s = hyperbolic();
        let c = match initial_curve(&s, &CurveKind::Circle { radius: 1.0 }, 128).unwrap() {
            InitialCurve::Graph(g) => g.to_curve(&s).unwrap(),
            _ => unreachable!(),
        };
        let est = inradius_outradius(&s, &c, &SearchSettings::default()).unwrap();
        assert!((est.rho_minus - 1.0).abs() < 1e-4, "rho- {}", est.rho_minus);
        assert!((est.rho_plus - 1.0).abs() < 1e-4, "rho+ {}", est.rho_plus);
        assert!(est.rho_minus <= est.rho_plus + 1e-9);
        // The objective is flat to second order at the pole, so the center
        // position is much looser than the radius value.
        match est.center_minus {
            Location::Pole => {}
            Location::Point(p) => assert!(p.r < 0.05, "center drifted to r={}", p.r),
        }
    }
}
