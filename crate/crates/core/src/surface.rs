//! Rotationally symmetric pinched Hadamard surfaces, represented through the
//! warp function φ of the metric g = dr² + φ(r)² du².
//!
//! Everything geometric derives from φ: the Gauss curvature 𝒦 = −φ″/φ, the
//! stability weight ψ = (φ′)² − φφ″, the area primitive Φ(r) = ∫₀ʳ φ, and the
//! curvature primitive K̂(r) = ∫₀ʳ 𝒦φ used for Gauss–Bonnet residuals.
//! Closed forms are used for constant curvature; pinched families are
//! tabulated by integrating φ″ = −𝒦(r)φ with φ(0) = 0, φ′(0) = 1.

use crate::error::{Error, Result};
use crate::hermite::{integral_interval, UniformHermite};
use crate::scalar::Real;
use crate::tolerances as tol;

/// Curvature profile families with negative pinched curvature
/// 𝒦(r) ∈ [−b², −a²], non-increasing in r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinchKind {
    /// 𝒦(r) = −a² − (b²−a²)·tanh(c r²)
    TanhPinch,
    /// 𝒦(r) = −(a² + b²c r²) / (1 + c r²)
    RationalPinch,
}

#[derive(Debug, Clone)]
enum Family<T> {
    ConstantCurvature,
    Pinch { kind: PinchKind, c: T },
    Tabulated,
}

#[derive(Debug, Clone)]
struct Table<T> {
    h: T,
    phi: Vec<T>,
    dphi: Vec<T>,
    ddphi: Vec<T>,
    cap_phi: Vec<T>,
    psi: Vec<T>,
    dpsi: Vec<T>,
    khat: Vec<T>,
    khat_d: Vec<T>,
    /// 𝒦 at the nodes with interpolation slopes; only consulted when the
    /// family has no closed-form curvature (`Tabulated`).
    kappa_nodes: Vec<T>,
    kappa_slopes: Vec<T>,
}

#[derive(Debug, Clone)]
enum Repr<T> {
    Closed,
    Table(Box<Table<T>>),
}

/// A rotationally symmetric surface profile. Immutable after construction;
/// all evaluators are pure.
#[derive(Debug, Clone)]
pub struct SurfaceProfile<T> {
    a: T,
    b: T,
    r_max: T,
    grid_step: T,
    family: Family<T>,
    repr: Repr<T>,
}

impl<T: Real> SurfaceProfile<T> {
    /// Hyperbolic model of curvature −a²: φ(r) = sinh(ar)/a in closed form.
    pub fn build_constant_curvature(a: T) -> Result<Self> {
        let r_max = T::of(tol::DEFAULT_R_MAX_FACTOR) / a;
        Self::build_constant_curvature_with(a, r_max, T::of(tol::DEFAULT_GRID_STEP))
    }

    pub fn build_constant_curvature_with(a: T, r_max: T, grid_step: T) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("r_max", r_max)?;
        check_positive("grid_step", grid_step)?;
        Ok(SurfaceProfile {
            a,
            b: a,
            r_max,
            grid_step,
            family: Family::ConstantCurvature,
            repr: Repr::Closed,
        })
    }

    /// Integrates φ″ = −𝒦(r)φ for a pinched curvature family, along with
    /// Φ′ = φ, ψ′ = 𝒦′φ² and K̂′ = 𝒦φ, with a classical 4th-order one-step
    /// method on a fixed grid. The first node is seeded by the Taylor
    /// expansion around the pole to sidestep the coordinate degeneracy.
    pub fn build_from_curvature(
        kind: PinchKind,
        a: T,
        b: T,
        c: T,
        r_max: T,
        grid_step: T,
    ) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("c", c)?;
        check_positive("r_max", r_max)?;
        check_positive("grid_step", grid_step)?;
        if b < a {
            return Err(Error::parameter("b", format!("requires b >= a, got b = {b}, a = {a}")));
        }
        let family = Family::Pinch { kind, c };
        let m = (r_max / grid_step).ceil().to_usize().unwrap_or(0);
        if m < 16 {
            return Err(Error::parameter(
                "grid_step",
                "tabulation needs at least 16 nodes",
            ));
        }

        let kappa = |r: T| pinch_kappa(kind, a, b, c, r);
        let dkappa = |r: T| pinch_dkappa(kind, a, b, c, r);

        let h = grid_step;
        let n = m + 1;
        let mut phi = vec![T::zero(); n];
        let mut dphi = vec![T::zero(); n];
        let mut cap_phi = vec![T::zero(); n];
        let mut psi = vec![T::zero(); n];
        let mut khat = vec![T::zero(); n];

        phi[0] = T::zero();
        dphi[0] = T::one();
        cap_phi[0] = T::zero();
        psi[0] = T::one();
        khat[0] = T::zero();

        // Taylor seed at r = h: φ = r + c3 r³ + c5 r⁵ with c3 = −𝒦₀/6,
        // c5 = −(𝒦₂ − 𝒦₀²/6)/20, 𝒦₂ estimated from the profile itself.
        let k0 = kappa(T::zero());
        let k2 = (kappa(h) - k0) / (h * h);
        let c3 = -k0 / T::of(6.0);
        let c5 = -(k2 - k0 * k0 / T::of(6.0)) / T::of(20.0);
        let h2 = h * h;
        let h3 = h2 * h;
        let h4 = h2 * h2;
        let h5 = h4 * h;
        phi[1] = h + c3 * h3 + c5 * h5;
        dphi[1] = T::one() + T::of(3.0) * c3 * h2 + T::of(5.0) * c5 * h4;
        cap_phi[1] = h2 / T::of(2.0) + c3 * h4 / T::of(4.0) + c5 * h5 * h / T::of(6.0);
        psi[1] = T::one() + k2 * h4 / T::of(2.0);
        khat[1] = k0 * h2 / T::of(2.0) + (k2 + k0 * c3) * h4 / T::of(4.0);

        // State y = (φ, φ′, Φ, ψ, K̂).
        let deriv = |r: T, y: &[T; 5]| -> [T; 5] {
            let k = kappa(r);
            [y[1], -k * y[0], y[0], dkappa(r) * y[0] * y[0], k * y[0]]
        };
        let mut y = [phi[1], dphi[1], cap_phi[1], psi[1], khat[1]];
        for j in 1..m {
            let r = h * T::of(j as f64);
            y = rk4_step(&deriv, r, &y, h);
            phi[j + 1] = y[0];
            dphi[j + 1] = y[1];
            cap_phi[j + 1] = y[2];
            psi[j + 1] = y[3];
            khat[j + 1] = y[4];
        }

        let ddphi: Vec<T> = (0..n)
            .map(|j| -kappa(h * T::of(j as f64)) * phi[j])
            .collect();
        let dpsi: Vec<T> = (0..n)
            .map(|j| dkappa(h * T::of(j as f64)) * phi[j] * phi[j])
            .collect();
        let khat_d: Vec<T> = (0..n).map(|j| -ddphi[j]).collect();

        let table = Table {
            h,
            phi,
            dphi,
            ddphi,
            cap_phi,
            psi,
            dpsi,
            khat,
            khat_d,
            kappa_nodes: Vec::new(),
            kappa_slopes: Vec::new(),
        };
        let profile = SurfaceProfile {
            a,
            b,
            r_max: h * T::of(m as f64),
            grid_step,
            family,
            repr: Repr::Table(Box::new(table)),
        };
        profile.verify_invariants()?;
        Ok(profile)
    }

    /// Builds a profile from a user-supplied uniform table of
    /// (φ, φ′, φ″) values at r_j = j·grid_step. The Gauss curvature is
    /// recovered from 𝒦 = −φ″/φ so the identity holds by construction.
    pub fn from_table(
        a: T,
        b: T,
        grid_step: T,
        phi: Vec<T>,
        dphi: Vec<T>,
        ddphi: Vec<T>,
    ) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("grid_step", grid_step)?;
        if b < a {
            return Err(Error::parameter("b", "requires b >= a"));
        }
        let n = phi.len();
        if n < 17 || dphi.len() != n || ddphi.len() != n {
            return Err(Error::parameter(
                "table",
                "needs >= 17 aligned nodes for (phi, dphi, ddphi)",
            ));
        }
        let h = grid_step;

        let mut kappa_nodes = vec![T::zero(); n];
        for j in 1..n {
            kappa_nodes[j] = -ddphi[j] / phi[j];
        }
        // Even extension: 𝒦(0) from a parabola in r through nodes 1 and 2.
        kappa_nodes[0] = (T::of(4.0) * kappa_nodes[1] - kappa_nodes[2]) / T::of(3.0);
        let mut kappa_slopes = vec![T::zero(); n];
        for j in 1..n - 1 {
            kappa_slopes[j] = (kappa_nodes[j + 1] - kappa_nodes[j - 1]) / (T::of(2.0) * h);
        }
        kappa_slopes[0] = (kappa_nodes[1] - kappa_nodes[0]) / h;
        kappa_slopes[n - 1] = (kappa_nodes[n - 1] - kappa_nodes[n - 2]) / h;

        let mut cap_phi = vec![T::zero(); n];
        let mut khat = vec![T::zero(); n];
        let khat_d: Vec<T> = (0..n).map(|j| -ddphi[j]).collect();
        for j in 0..n - 1 {
            cap_phi[j + 1] =
                cap_phi[j] + integral_interval(phi[j], phi[j + 1], dphi[j], dphi[j + 1], h);
            khat[j + 1] =
                khat[j] - integral_interval(ddphi[j], ddphi[j + 1], T::zero(), T::zero(), h);
        }

        let psi: Vec<T> = (0..n)
            .map(|j| dphi[j] * dphi[j] - phi[j] * ddphi[j])
            .collect();
        let mut dpsi = vec![T::zero(); n];
        for j in 1..n - 1 {
            dpsi[j] = (psi[j + 1] - psi[j - 1]) / (T::of(2.0) * h);
        }

        let table = Table {
            h,
            phi,
            dphi,
            ddphi,
            cap_phi,
            psi,
            dpsi,
            khat,
            khat_d,
            kappa_nodes,
            kappa_slopes,
        };
        let profile = SurfaceProfile {
            a,
            b,
            r_max: h * T::of((n - 1) as f64),
            grid_step,
            family: Family::Tabulated,
            repr: Repr::Table(Box::new(table)),
        };
        profile.verify_invariants()?;
        Ok(profile)
    }

    fn verify_invariants(&self) -> Result<()> {
        let table = match &self.repr {
            Repr::Closed => return Ok(()),
            Repr::Table(t) => t,
        };
        let band_tol = T::of(tol::CURVATURE_BAND_REL) * self.b * self.b;
        let strictly_pinched = self.b > self.a && !matches!(self.family, Family::Tabulated);
        let n = table.phi.len();
        for j in 1..n {
            let r = table.h * T::of(j as f64);
            if !(table.phi[j] > T::zero()) {
                return Err(self.violation("phi_positive", r, table.phi[j]));
            }
            if !(table.dphi[j] > T::zero()) {
                return Err(self.violation("dphi_positive", r, table.dphi[j]));
            }
            let k = -table.ddphi[j] / table.phi[j];
            if k > -self.a * self.a + band_tol || k < -self.b * self.b - band_tol {
                return Err(self.violation("curvature_band", r, k));
            }
            if table.psi[j] > T::one() + T::of(tol::PSI_UPPER_SLACK) {
                return Err(self.violation("psi_upper", r, table.psi[j]));
            }
            if strictly_pinched
                && table.psi[j] > table.psi[j - 1] + T::of(tol::PSI_MONOTONE_SLACK)
            {
                return Err(self.violation("psi_monotone", r, table.psi[j] - table.psi[j - 1]));
            }
            // Geodesic-circle curvature comparison a coth(ar) ≤ φ′/φ ≤ b coth(br).
            let kc = table.dphi[j] / table.phi[j];
            let slack = T::of(1e-7) * (T::one() / r + self.b);
            let lo = self.a * (self.a * r).coth();
            let hi = self.b * (self.b * r).coth();
            if kc < lo - slack || kc > hi + slack {
                return Err(self.violation("circle_curvature_bounds", r, kc));
            }
        }
        Ok(())
    }

    fn violation(&self, invariant: &'static str, r: T, value: T) -> Error {
        Error::Construction {
            invariant,
            location: r.as_f64(),
            detail: format!("offending value {value}"),
        }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn grid_step(&self) -> T {
        self.grid_step
    }

    pub fn family_id(&self) -> String {
        match &self.family {
            Family::ConstantCurvature => format!("constant_curvature(a={})", self.a),
            Family::Pinch { kind, c } => {
                let name = match kind {
                    PinchKind::TanhPinch => "tanh_pinch",
                    PinchKind::RationalPinch => "rational_pinch",
                };
                format!("{}(a={},b={},c={})", name, self.a, self.b, c)
            }
            Family::Tabulated => format!("tabulated(a={},b={})", self.a, self.b),
        }
    }

    #[inline]
    fn clamp_r(&self, r: T) -> T {
        if r < T::zero() {
            T::zero()
        } else if r > self.r_max {
            self.r_max
        } else {
            r
        }
    }

    /// Warp function φ(r).
    pub fn phi(&self, r: T) -> T {
        match &self.repr {
            Repr::Closed => (self.a * r).sinh() / self.a,
            Repr::Table(t) => t.interp(|t| (&t.phi, &t.dphi)).eval(self.clamp_r(r)),
        }
    }

    /// φ′(r).
    pub fn dphi(&self, r: T) -> T {
        match &self.repr {
            Repr::Closed => (self.a * r).cosh(),
            Repr::Table(t) => t.interp(|t| (&t.dphi, &t.ddphi)).eval(self.clamp_r(r)),
        }
    }

    /// φ″(r), recovered from −𝒦(r)·φ(r) so that 𝒦 = −φ″/φ is exact.
    pub fn ddphi(&self, r: T) -> T {
        match &self.repr {
            Repr::Closed => self.a * (self.a * r).sinh(),
            Repr::Table(_) => -self.gauss(r) * self.phi(r),
        }
    }

    /// Gauss curvature 𝒦(r).
    pub fn gauss(&self, r: T) -> T {
        match &self.family {
            Family::ConstantCurvature => -self.a * self.a,
            Family::Pinch { kind, c } => pinch_kappa(*kind, self.a, self.b, *c, self.clamp_r(r)),
            Family::Tabulated => match &self.repr {
                Repr::Table(t) => t
                    .interp(|t| (&t.kappa_nodes, &t.kappa_slopes))
                    .eval(self.clamp_r(r)),
                Repr::Closed => unreachable!(),
            },
        }
    }

    /// ψ(r) = (φ′)² − φφ″, integrated alongside φ via ψ′ = 𝒦′φ² to avoid
    /// the catastrophic cancellation of the direct formula at large r.
    pub fn psi(&self, r: T) -> T {
        match &self.repr {
            Repr::Closed => T::one(),
            Repr::Table(t) => t.interp(|t| (&t.psi, &t.dpsi)).eval(self.clamp_r(r)),
        }
    }

    /// Area primitive Φ(r) = ∫₀ʳ φ(ρ) dρ.
    pub fn capital_phi(&self, r: T) -> T {
        match &self.repr {
            Repr::Closed => ((self.a * r).cosh() - T::one()) / (self.a * self.a),
            Repr::Table(t) => t.interp(|t| (&t.cap_phi, &t.phi)).eval(self.clamp_r(r)),
        }
    }

    /// Curvature primitive K̂(r) = ∫₀ʳ 𝒦(ρ)φ(ρ) dρ, the radial reduction of
    /// ∫𝒦 dA used by Gauss–Bonnet checks.
    pub fn gauss_area_primitive(&self, r: T) -> T {
        match &self.repr {
            Repr::Closed => T::one() - (self.a * r).cosh(),
            Repr::Table(t) => t.interp(|t| (&t.khat, &t.khat_d)).eval(self.clamp_r(r)),
        }
    }

    /// Curvature κ° = φ′(r)/φ(r) of the geodesic circle of radius r about
    /// the pole; lies in [a·coth(ar), b·coth(br)].
    pub fn geodesic_circle_curvature(&self, r: T) -> Result<T> {
        if !(r > T::zero()) {
            return Err(Error::Domain(format!("geodesic circle radius must be positive, got {r}")));
        }
        if r > self.r_max {
            return Err(Error::Domain(format!(
                "geodesic circle radius {r} beyond validity radius {}",
                self.r_max
            )));
        }
        Ok(self.dphi(r) / self.phi(r))
    }
}

impl<T: Real> Table<T> {
    fn interp<'a>(&'a self, pick: impl Fn(&'a Self) -> (&'a [T], &'a [T])) -> UniformHermite<'a, T> {
        let (f, d) = pick(self);
        UniformHermite { h: self.h, f, d }
    }
}

fn pinch_kappa<T: Real>(kind: PinchKind, a: T, b: T, c: T, r: T) -> T {
    let a2 = a * a;
    let b2 = b * b;
    match kind {
        PinchKind::TanhPinch => -a2 - (b2 - a2) * (c * r * r).tanh(),
        PinchKind::RationalPinch => {
            let cr2 = c * r * r;
            -(a2 + b2 * cr2) / (T::one() + cr2)
        }
    }
}

fn pinch_dkappa<T: Real>(kind: PinchKind, a: T, b: T, c: T, r: T) -> T {
    let a2 = a * a;
    let b2 = b * b;
    let two = T::of(2.0);
    match kind {
        PinchKind::TanhPinch => {
            let s = (c * r * r).cosh();
            -(b2 - a2) * two * c * r / (s * s)
        }
        PinchKind::RationalPinch => {
            let d = T::one() + c * r * r;
            -two * c * r * (b2 - a2) / (d * d)
        }
    }
}

/// Length and area of a geodesic disk of radius ρ in the model of constant
/// curvature −a²: L = 2π sinh(aρ)/a, A = 2π(cosh(aρ) − 1)/a².
pub fn model_disk<T: Real>(a: T, rho: T) -> Result<(T, T)> {
    check_positive("a", a)?;
    check_positive("rho", rho)?;
    let tau = T::of(2.0) * T::PI();
    let l = tau * (a * rho).sinh() / a;
    let area = tau * ((a * rho).cosh() - T::one()) / (a * a);
    Ok((l, area))
}

fn rk4_step<T: Real, const N: usize>(
    f: &impl Fn(T, &[T; N]) -> [T; N],
    x: T,
    y: &[T; N],
    h: T,
) -> [T; N] {
    let half = T::of(0.5);
    let sixth = T::one() / T::of(6.0);
    let k1 = f(x, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + half * h * k1[i];
    }
    let k2 = f(x + half * h, &y2);
    let mut y3 = *y;
    for i in 0..N {
        y3[i] = y[i] + half * h * k2[i];
    }
    let k3 = f(x + half * h, &y3);
    let mut y4 = *y;
    for i in 0..N {
        y4[i] = y[i] + h * k3[i];
    }
    let k4 = f(x + h, &y4);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + h * sixth * (k1[i] + T::of(2.0) * (k2[i] + k3[i]) + k4[i]);
    }
    out
}

fn check_positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::parameter(name, format!("must be positive and finite, got {v}")))
    }
}
