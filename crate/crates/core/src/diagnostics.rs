//! Evaluation of the flow's geometric guarantees on recorded runs:
//! monotonicity of length/area/deficit, convexity preservation, radius
//! bounds with the isoperimetric-deficit inequality, the non-escape area
//! condition, Hessian comparison bounds, Gauss–Bonnet residuals, and
//! exponential rate fits.
//!
//! Every inequality is graded as `LHS ≤ RHS + slack`: a violation within
//! slack is a warning (truncation-scale), beyond it a failure
//! (theorem-scale). All checks are pure; identical inputs give identical
//! reports.

use crate::curve::DiscreteCurve;
use crate::error::{Error, Result};
use crate::geodesics::{self, Location};
use crate::scalar::Real;
use crate::surface::SurfaceProfile;
use crate::tolerances as tol;

/// One time slice of the monitored functionals.
#[derive(Debug, Clone)]
pub struct DiagnosticsRecord<T> {
    pub step: u64,
    pub t: T,
    pub length: T,
    pub area: T,
    /// Δ = L² − 4πA − a²A², recomputed exactly from the stored L, A.
    pub deficit: T,
    pub h: T,
    pub kappa_min: T,
    pub kappa_max: T,
    pub sup_kappa_minus_h: T,
    pub gb_residual: T,
    pub r_min: T,
    pub r_max: T,
    pub rho_minus: Option<T>,
    pub rho_plus: Option<T>,
    pub rho_minus_center: Option<(T, T)>,
    pub rho_plus_center: Option<(T, T)>,
    pub radii_accuracy: Option<T>,
    pub support_min: Option<T>,
    pub support_max: Option<T>,
    pub dt_used: T,
    pub flags: Vec<CheckFlag<T>>,
}

/// Streaming pass/fail flag; `violation` > 0 measures how far past the
/// slack the inequality went.
#[derive(Debug, Clone)]
pub struct CheckFlag<T> {
    pub name: &'static str,
    pub pass: bool,
    pub violation: T,
}

impl<T: Real> DiagnosticsRecord<T> {
    pub fn ensure_finite(&self) -> Result<()> {
        let all = [
            self.t,
            self.length,
            self.area,
            self.deficit,
            self.h,
            self.kappa_min,
            self.kappa_max,
            self.sup_kappa_minus_h,
            self.gb_residual,
            self.r_min,
            self.r_max,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degeneracy(format!(
                "non-finite diagnostics at step {}",
                self.step
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warning,
    Failure,
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Warning => "warning",
            CheckStatus::Failure => "failure",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckLocation<T> {
    pub t: T,
    pub index: usize,
}

/// Outcome of one named check over a run record.
#[derive(Debug, Clone)]
pub struct CheckReport<T> {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Worst signed violation (LHS − RHS); negative means satisfied.
    pub worst_slack: T,
    pub location: Option<CheckLocation<T>>,
    pub detail: String,
}

fn grade<T: Real>(violation: T, slack: T) -> CheckStatus {
    if violation <= T::zero() {
        CheckStatus::Pass
    } else if violation <= slack {
        CheckStatus::Warning
    } else {
        CheckStatus::Failure
    }
}

fn report_worst<T: Real>(
    name: &'static str,
    slack: T,
    samples: impl IntoIterator<Item = (T, CheckLocation<T>)>,
    detail: impl Into<String>,
) -> CheckReport<T> {
    let mut worst = -T::infinity();
    let mut loc = None;
    for (violation, location) in samples {
        if violation > worst {
            worst = violation;
            loc = Some(location);
        }
    }
    if loc.is_none() {
        worst = T::zero();
    }
    CheckReport {
        name,
        status: grade(worst, slack),
        worst_slack: worst,
        location: loc,
        detail: detail.into(),
    }
}

/// Length/area/deficit monotonicity over consecutive records. For α = 0 the
/// length decreases and the area is conserved; for α = 1 the roles swap;
/// the deficit is non-increasing for both.
pub fn check_monotonicity<T: Real>(
    records: &[DiagnosticsRecord<T>],
    alpha: T,
    conserved_rel_tol: T,
) -> Vec<CheckReport<T>> {
    let mut out = Vec::new();
    if records.len() < 2 {
        return out;
    }
    let l0 = records[0].length;
    let a0 = records[0].area;
    let delta0 = records[0].deficit;
    let loc = |r: &DiagnosticsRecord<T>, i: usize| CheckLocation { t: r.t, index: i };

    let deficit_slack = T::of(tol::DEFICIT_SLACK_REL) * delta0.abs() + T::of(tol::DEFICIT_SLACK_ABS);
    out.push(report_worst(
        "deficit_monotone",
        deficit_slack,
        records
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[1].deficit - w[0].deficit - deficit_slack, loc(&w[1], i + 1))),
        format!("Delta(t) non-increasing within slack {}", deficit_slack),
    ));

    if alpha == T::zero() {
        let slack = T::of(tol::MONOTONE_SLACK_REL) * l0;
        out.push(report_worst(
            "length_monotone",
            slack,
            records
                .windows(2)
                .enumerate()
                .map(|(i, w)| (w[1].length - w[0].length - slack, loc(&w[1], i + 1))),
            "L(t) non-increasing for the area-preserving flow",
        ));
        let ctol = conserved_rel_tol * a0.abs();
        out.push(report_worst(
            "area_conserved",
            ctol,
            records
                .iter()
                .enumerate()
                .map(|(i, r)| ((r.area - a0).abs() - ctol, loc(r, i))),
            format!("|A(t) − A0| within {conserved_rel_tol} relative"),
        ));
    } else if alpha == T::one() {
        let slack = T::of(tol::MONOTONE_SLACK_REL) * a0;
        out.push(report_worst(
            "area_monotone",
            slack,
            records
                .windows(2)
                .enumerate()
                .map(|(i, w)| (w[0].area - w[1].area - slack, loc(&w[1], i + 1))),
            "A(t) non-decreasing for the length-preserving flow",
        ));
        let ctol = conserved_rel_tol * l0.abs();
        out.push(report_worst(
            "length_conserved",
            ctol,
            records
                .iter()
                .enumerate()
                .map(|(i, r)| ((r.length - l0).abs() - ctol, loc(r, i))),
            format!("|L(t) − L0| within {conserved_rel_tol} relative"),
        ));
    }
    out
}

/// Lower bound r₁ on the inner radius from the initial data:
/// r₁ = (2/a)·acoth((L₀ + √Δ₀)/(A₀·a)).
pub fn inner_radius_lower_bound<T: Real>(a: T, l0: T, a0: T, delta0: T) -> Result<T> {
    let arg = (l0 + delta0.max(T::zero()).sqrt()) / (a0 * a);
    if !(arg > T::one()) {
        return Err(Error::Domain(format!(
            "acoth argument {arg} <= 1; requires L0 > a*A0"
        )));
    }
    Ok(T::of(2.0) / a * arg.acoth())
}

/// Radius bounds on every record that carries ρ values:
/// r₁ ≤ ρ₋ ≤ L₀/2, ρ₊ ≤ L₀, plus the deficit inequality
/// √Δ ≥ |L − A·a·coth(aρ₋/2)|.
pub fn check_radius_bounds<T: Real>(
    a: T,
    l0: T,
    a0: T,
    delta0: T,
    records: &[DiagnosticsRecord<T>],
) -> Result<Vec<CheckReport<T>>> {
    let r1 = inner_radius_lower_bound(a, l0, a0, delta0)?;
    let r2 = l0;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut outer = Vec::new();
    let mut osserman = Vec::new();
    let mut ordering = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let (rm, rp) = match (rec.rho_minus, rec.rho_plus) {
            (Some(rm), Some(rp)) => (rm, rp),
            _ => continue,
        };
        let acc = rec.radii_accuracy.unwrap_or_else(|| T::of(tol::RADII_ACCURACY));
        let loc = CheckLocation {
            t: rec.t,
            index: i,
        };
        lower.push((r1 - rm - acc, loc.clone()));
        upper.push((rm - l0 / T::of(2.0) - acc, loc.clone()));
        outer.push((rp - r2 - acc, loc.clone()));
        ordering.push((rm - rp - acc, loc.clone()));
        let model = rec.area * a * (a * rm / T::of(2.0)).coth();
        let lhs = (rec.length - model).abs();
        let rhs = rec.deficit.max(T::zero()).sqrt();
        // coth is steep near 0, so fold the radii accuracy into the slack.
        let sens = rec.area * a * a / (a * rm / T::of(2.0)).sinh().powi(2) * acc;
        osserman.push((lhs - rhs - sens, loc));
    }
    let slack = T::of(tol::CHECK_SLACK_REL) * l0;
    Ok(vec![
        report_worst("inner_radius_lower", slack, lower, format!("r1 = {r1} <= rho_minus")),
        report_worst("inner_radius_upper", slack, upper, "rho_minus <= L0/2"),
        report_worst("outer_radius_upper", slack, outer, "rho_plus <= L0"),
        report_worst("radius_ordering", slack, ordering, "rho_minus <= rho_plus"),
        report_worst(
            "deficit_radius_inequality",
            slack,
            osserman,
            "sqrt(Delta) >= |L − A·a·coth(a·rho_minus/2)|",
        ),
    ])
}

/// Convexity preservation: κ_min(t) ≥ min(κ_min(0), a) − tolerance.
pub fn check_convexity<T: Real>(
    records: &[DiagnosticsRecord<T>],
    epsilon0: T,
) -> CheckReport<T> {
    let slack = T::of(tol::CONVEXITY_SLACK);
    report_worst(
        "convexity_preservation",
        slack,
        records.iter().enumerate().map(|(i, r)| {
            (
                (epsilon0 - slack) - r.kappa_min,
                CheckLocation { t: r.t, index: i },
            )
        }),
        format!("kappa_min(t) >= {epsilon0} − {slack}"),
    )
}

/// The non-escape area condition: the flow cannot drift to infinity when
/// A₀ ≤ (2π/b²)(cosh(b·r₁) − 1) with r₁ the inner-radius lower bound.
#[derive(Debug, Clone, Copy)]
pub struct EscapeCondition<T> {
    pub satisfied: bool,
    /// RHS − A₀; non-negative means the non-escape condition holds.
    pub margin: T,
    pub rhs: T,
    pub r1: T,
}

pub fn check_escape_condition<T: Real>(
    a: T,
    b: T,
    l0: T,
    a0: T,
    delta0: T,
) -> Result<EscapeCondition<T>> {
    if !(l0 > T::zero()) || !(a0 > T::zero()) {
        return Err(Error::parameter("l0", "requires positive L0 and A0"));
    }
    let r1 = inner_radius_lower_bound(a, l0, a0, delta0)?;
    let tau = T::of(2.0) * T::PI();
    let rhs = tau / (b * b) * ((b * r1).cosh() - T::one());
    let margin = rhs - a0;
    Ok(EscapeCondition {
        satisfied: margin >= T::zero(),
        margin,
        rhs,
        r1,
    })
}

/// Least-squares exponential rate fit over a window of one-signed values.
#[derive(Debug, Clone, Copy)]
pub struct ExpFit<T> {
    pub rate: T,
    pub r_squared: T,
    pub window: (T, T),
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct WindowRule<T> {
    pub lo_abs: T,
    pub hi_abs: T,
    pub min_points: usize,
    /// If the amplitude band never fills (neutral modes), fall back to all
    /// points past this fraction of the time span.
    pub fallback_skip_fraction: Option<T>,
}

pub fn fit_exponential<T: Real>(series: &[(T, T)], rule: &WindowRule<T>) -> Result<ExpFit<T>> {
    let in_band: Vec<(T, T)> = series
        .iter()
        .filter(|(_, v)| v.abs() > rule.lo_abs && v.abs() < rule.hi_abs)
        .cloned()
        .collect();
    let chosen: Vec<(T, T)> = if in_band.len() >= rule.min_points {
        in_band
    } else if let Some(frac) = rule.fallback_skip_fraction {
        let (t0, t1) = match (series.first(), series.last()) {
            (Some(f), Some(l)) => (f.0, l.0),
            _ => return Err(Error::Inconclusive("empty series".into())),
        };
        let t_skip = t0 + frac * (t1 - t0);
        series
            .iter()
            .filter(|(t, v)| *t >= t_skip && v.abs() > rule.lo_abs)
            .cloned()
            .collect()
    } else {
        in_band
    };
    if chosen.len() < rule.min_points {
        return Err(Error::Inconclusive(format!(
            "amplitude never entered the fit window ({} usable points)",
            chosen.len()
        )));
    }
    let sign = chosen[0].1.signum();
    if chosen.iter().any(|(_, v)| v.signum() != sign) {
        return Err(Error::Inconclusive("window values change sign".into()));
    }

    let n = T::of(chosen.len() as f64);
    let mut st = T::zero();
    let mut sy = T::zero();
    for (t, v) in &chosen {
        st = st + *t;
        sy = sy + v.abs().ln();
    }
    let (tbar, ybar) = (st / n, sy / n);
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (t, v) in &chosen {
        let dx = *t - tbar;
        let dy = v.abs().ln() - ybar;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() {
        return Err(Error::Inconclusive("degenerate time window".into()));
    }
    let rate = sxy / sxx;
    let ss_res = syy - sxy * sxy / sxx;
    let r_squared = if syy > T::zero() {
        T::one() - ss_res / syy
    } else {
        T::one()
    };
    Ok(ExpFit {
        rate,
        r_squared,
        window: (chosen[0].0, chosen[chosen.len() - 1].0),
        n_points: chosen.len(),
    })
}

/// Gauss–Bonnet residual ∮κ ds − 2π + ∫_Ω 𝒦 dA, with the area integral
/// reduced to the radial primitive K̂(r) = ∫₀ʳ 𝒦φ (no 2-D meshing).
pub fn gauss_bonnet_residual<T: Real>(
    surface: &SurfaceProfile<T>,
    curve: &DiscreteCurve<T>,
) -> T {
    let n = curve.len();
    let dp = T::one() / T::of(n as f64);
    let mut total_kappa = T::zero();
    let mut gauss_area = T::zero();
    for j in 0..n {
        total_kappa = total_kappa + curve.kappas()[j] * curve.arc_weights()[j];
        let u_dot = curve.tangent(j).1 * curve.speeds()[j];
        gauss_area = gauss_area + surface.gauss_area_primitive(curve.point(j).r) * u_dot * dp;
    }
    let turning = if curve.is_ccw() { T::one() } else { -T::one() };
    total_kappa - turning * T::of(2.0) * T::PI() + gauss_area
}

/// Hessian comparison of the radial distance from p0 along a curve. At each
/// sample the exact identities Hess r(X, X) = κ°·|X⊥|² reduce the three
/// bounds to the geodesic-circle curvature κ°, which is computed from the
/// scalar Jacobi field along the minimizing geodesic (closed form when p0
/// is the pole).
#[derive(Debug, Clone)]
pub struct HessianReport<T> {
    pub tangent: CheckReport<T>,
    pub normal: CheckReport<T>,
    pub mixed: CheckReport<T>,
    /// Worst spread κ° − a·coth(ar) and b·coth(br) − κ°; both collapse to 0
    /// in constant curvature.
    pub worst_equality_gap: T,
}

pub fn check_hessian_comparison<T: Real>(
    surface: &SurfaceProfile<T>,
    curve: &DiscreteCurve<T>,
    p0: Location<T>,
) -> Result<HessianReport<T>> {
    let (x0, y0) = p0.xy();
    if curve.winding_about(x0, y0).abs() != 1 {
        return Err(Error::parameter("p0", "must lie strictly inside the curve"));
    }
    let a = surface.a();
    let b = surface.b();
    let n = curve.len();
    let mut tangent = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut mixed = Vec::with_capacity(n);
    let mut gap = T::zero();
    let opts = geodesics::DistanceOpts::precise(surface);
    for j in 0..n {
        let x = curve.point(j);
        let (rad, grad, kc) = match p0 {
            Location::Pole => (
                x.r,
                (T::one(), T::zero()),
                surface.dphi(x.r) / surface.phi(x.r),
            ),
            Location::Point(p) => {
                let conn = geodesics::solve_between(surface, p, x, &opts)?;
                (
                    conn.distance,
                    (conn.terminal_r_vel, conn.terminal_u_vel),
                    conn.circle_curvature,
                )
            }
        };
        let phi = surface.phi(x.r);
        let (tr, tu) = curve.tangent(j);
        let (nr, nu) = curve.normal(j);
        let tdot = tr * grad.0 + phi * phi * tu * grad.1;
        let ndot = nr * grad.0 + phi * phi * nu * grad.1;
        let lo = a * (a * rad).coth();
        let hi = b * (b * rad).coth();
        gap = gap.max(kc - lo).max(hi - kc);

        let loc = || CheckLocation {
            t: T::zero(),
            index: j,
        };
        let slack_scale = T::of(1e-7) * (T::one() + kc.abs());
        let _ = slack_scale;

        // Tangent: a coth(ar)(1 − ⟨T,∂r⟩²) ≤ ⟨∇_T ∂r, T⟩ ≤ b coth(br)(…).
        let weight_t = T::one() - tdot * tdot;
        let hess_tt = kc * weight_t;
        tangent.push(((lo * weight_t - hess_tt).max(hess_tt - hi * weight_t), loc()));
        // Normal: a coth(ar)·⟨T,∂r⟩² ≤ ⟨∇_N ∂r, N⟩ ≤ b coth(br)·⟨T,∂r⟩².
        let weight_n = tdot * tdot;
        let hess_nn = kc * weight_n;
        normal.push(((lo * weight_n - hess_nn).max(hess_nn - hi * weight_n), loc()));
        // Mixed: ℱ_{a,b}(r) ≤ ⟨∇_N ∂r, T⟩ ≤ ℱ_{b,a}(r) with
        // 2ℱ_{a,b} = a coth(ar)(1 − 2⟨T,∂r⟩⟨N,∂r⟩) − b coth(br).
        let hess_nt = -kc * ndot * tdot;
        let two = T::of(2.0);
        let f_ab = (lo * (T::one() - two * tdot * ndot) - hi) / two;
        let f_ba = (hi * (T::one() - two * tdot * ndot) - lo) / two;
        mixed.push(((f_ab - hess_nt).max(hess_nt - f_ba), loc()));
    }
    let slack = T::of(1e-7) * (T::one() + b);
    Ok(HessianReport {
        tangent: report_worst("hessian_tangent", slack, tangent, "tangent inequality"),
        normal: report_worst("hessian_normal", slack, normal, "normal inequality"),
        mixed: report_worst("hessian_mixed", slack, mixed, "mixed-term inequality"),
        worst_equality_gap: gap,
    })
}

/// Per-mode outcome of a linear-response experiment.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumEntry<T> {
    pub mode: usize,
    pub lambda_predicted: T,
    pub fitted_rate: T,
    pub relative_error: T,
    pub r_squared: T,
    pub window: (T, T),
    pub n_points: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport<T> {
    pub surface_id: String,
    pub radius: T,
    pub entries: Vec<SpectrumEntry<T>>,
}

impl<T: Real> SpectrumReport<T> {
    pub fn new(surface_id: String, radius: T, mut entries: Vec<SpectrumEntry<T>>) -> Self {
        entries.sort_by_key(|e| e.mode);
        SpectrumReport {
            surface_id,
            radius,
            entries,
        }
    }

    /// Recomputes λ_i = (−i² + ψ(𝔯))/φ(𝔯)² from the profile and checks the
    /// stored predictions against it.
    pub fn validate(&self, surface: &SurfaceProfile<T>) -> Result<()> {
        let psi = surface.psi(self.radius);
        let phi = surface.phi(self.radius);
        for e in &self.entries {
            let lam = (-T::of((e.mode * e.mode) as f64) + psi) / (phi * phi);
            if (lam - e.lambda_predicted).abs() > T::of(1e-9) * lam.abs().max(T::one()) {
                return Err(Error::Parameter {
                    name: "entries",
                    message: format!(
                        "stored prediction {} for mode {} disagrees with profile value {lam}",
                        e.lambda_predicted, e.mode
                    ),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{initial_curve, CurveKind, InitialCurve};
    use crate::geodesics::ChartPoint;
    use crate::surface::{model_disk, PinchKind};

    fn hyperbolic() -> SurfaceProfile<f64> {
        SurfaceProfile::build_constant_curvature(1.0).unwrap()
    }

    fn tanh_profile() -> SurfaceProfile<f64> {
        SurfaceProfile::build_from_curvature(PinchKind::TanhPinch, 1.0, 2.0, 1.0, 10.0, 1e-3)
            .unwrap()
    }

    fn curve_of(s: &SurfaceProfile<f64>, kind: &CurveKind<f64>, n: usize) -> DiscreteCurve<f64> {
        match initial_curve(s, kind, n).unwrap() {
            InitialCurve::Graph(g) => g.to_curve(s).unwrap(),
            InitialCurve::Parametric(p) => DiscreteCurve::new(s, &p).unwrap(),
        }
    }

    fn record_from(l: f64, a: f64, t: f64) -> DiagnosticsRecord<f64> {
        let deficit = l * l - 4.0 * std::f64::consts::PI * a - a * a;
        DiagnosticsRecord {
            step: (t * 1000.0) as u64,
            t,
            length: l,
            area: a,
            deficit,
            h: 1.0,
            kappa_min: 1.0,
            kappa_max: 1.0,
            sup_kappa_minus_h: 0.0,
            gb_residual: 0.0,
            r_min: 1.0,
            r_max: 1.0,
            rho_minus: None,
            rho_plus: None,
            rho_minus_center: None,
            rho_plus_center: None,
            radii_accuracy: None,
            support_min: None,
            support_max: None,
            dt_used: 1e-3,
            flags: Vec::new(),
        }
    }

    #[test]
    fn monotonicity_passes_on_decreasing_length() {
        let records: Vec<_> = (0..10)
            .map(|i| record_from(8.0 - 0.1 * i as f64, 3.0, i as f64))
            .collect();
        let reports = check_monotonicity(&records, 0.0, 1e-6);
        for r in &reports {
            assert_eq!(r.status, CheckStatus::Pass, "{}: {}", r.name, r.worst_slack);
        }
    }

    #[test]
    fn monotonicity_flags_tampered_deficit() {
        let mut records: Vec<_> = (0..10)
            .map(|i| record_from(8.0 - 0.1 * i as f64, 3.0, i as f64))
            .collect();
        // Must exceed the natural per-record decrease (~1.6) to violate.
        records[5].deficit += 10.0;
        let reports = check_monotonicity(&records, 0.0, 1e-6);
        let deficit = reports.iter().find(|r| r.name == "deficit_monotone").unwrap();
        assert_eq!(deficit.status, CheckStatus::Failure);
        assert_eq!(deficit.location.as_ref().unwrap().index, 5);
    }

    #[test]
    fn stationary_circle_records_are_constant() {
        let records: Vec<_> = (0..5).map(|i| record_from(7.0, 3.4, i as f64)).collect();
        let reports = check_monotonicity(&records, 0.0, 1e-12);
        for r in &reports {
            assert_ne!(r.status, CheckStatus::Failure);
        }
    }

    #[test]
    fn circle_deficit_vanishes_and_r1_is_radius() {
        // Equality case: Δ = 0 and r1 = 2·acoth(coth(1/2)) = 1.
        let (l, a) = model_disk(1.0, 1.0).unwrap();
        let delta = l * l - 4.0 * std::f64::consts::PI * a - a * a;
        assert!(delta.abs() < 1e-10);
        let r1 = inner_radius_lower_bound(1.0, l, a, delta.max(0.0)).unwrap();
        assert!((r1 - 1.0).abs() < 1e-8, "r1 = {r1}");
    }

    #[test]
    fn radius_bounds_hold_with_exact_radii() {
        let (l, a) = model_disk(1.0, 1.0).unwrap();
        let delta: f64 = l * l - 4.0 * std::f64::consts::PI * a - a * a;
        let mut rec = record_from(l, a, 0.0);
        rec.deficit = delta.max(0.0);
        rec.rho_minus = Some(1.0);
        rec.rho_plus = Some(1.0);
        rec.radii_accuracy = Some(1e-6);
        let reports = check_radius_bounds(1.0, l, a, delta.max(0.0), &[rec]).unwrap();
        for r in &reports {
            assert_ne!(r.status, CheckStatus::Failure, "{}: {}", r.name, r.worst_slack);
        }
    }

    #[test]
    fn escape_condition_boundary_case() {
        // Circle on a = b = 1: the condition collapses to RHS = A0 exactly.
        let (l, a) = model_disk(1.0, 1.0).unwrap();
        let delta: f64 = (l * l - 4.0 * std::f64::consts::PI * a - a * a).max(0.0);
        let cond = check_escape_condition(1.0, 1.0, l, a, delta).unwrap();
        assert!(cond.margin.abs() < 1e-8 * a, "margin {}", cond.margin);
    }

    #[test]
    fn escape_condition_pinched_circle() {
        // Same circle judged against b = 2: the model area at r1 shrinks by
        // the (2π/b²)(cosh(b r1) − 1) formula; margin is just reported.
        let (l, a) = model_disk(1.0, 1.0).unwrap();
        let delta: f64 = (l * l - 4.0 * std::f64::consts::PI * a - a * a).max(0.0);
        let cond = check_escape_condition(1.0, 2.0, l, a, delta).unwrap();
        let expected_rhs = 2.0 * std::f64::consts::PI / 4.0 * ((2.0 * cond.r1).cosh() - 1.0);
        assert!((cond.rhs - expected_rhs).abs() < 1e-12);
        assert_eq!(cond.satisfied, cond.margin >= 0.0);
        assert!(cond.satisfied, "small circles satisfy the condition under pinching");
    }

    #[test]
    fn escape_condition_fails_for_skinny_curves() {
        // A0 → 0 at fixed L0: r1 ≈ 2A0/L0, RHS = O(A0²), so the margin is
        // negative; long skinny curves do not certify non-escape.
        let cond = check_escape_condition(1.0, 1.0, 10.0, 1e-3, 100.0 - 4.0 * std::f64::consts::PI * 1e-3).unwrap();
        assert!(!cond.satisfied);
        assert!(cond.margin < 0.0);
    }

    #[test]
    fn fit_exponential_exact_decay() {
        let series: Vec<(f64, f64)> = (0..500)
            .map(|i| {
                let t = 0.01 * i as f64;
                (t, (-2.0 * t).exp())
            })
            .collect();
        let rule = WindowRule {
            lo_abs: 1e-6,
            hi_abs: 0.5,
            min_points: 10,
            fallback_skip_fraction: None,
        };
        let fit = fit_exponential(&series, &rule).unwrap();
        assert!((fit.rate + 2.0).abs() < 1e-6, "rate {}", fit.rate);
        assert!(fit.r_squared > 0.999999);
    }

    #[test]
    fn fit_exponential_modulated_decay() {
        let series: Vec<(f64, f64)> = (0..500)
            .map(|i| {
                let t = 0.01 * i as f64;
                (t, (-2.0 * t).exp() * (1.0 + 0.01 * (50.0 * t).sin()))
            })
            .collect();
        let rule = WindowRule {
            lo_abs: 1e-6,
            hi_abs: 0.5,
            min_points: 10,
            fallback_skip_fraction: None,
        };
        let fit = fit_exponential(&series, &rule).unwrap();
        assert!((fit.rate + 2.0).abs() < 1e-2, "rate {}", fit.rate);
    }

    #[test]
    fn fit_exponential_empty_window_is_inconclusive() {
        let series: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, 1.0)).collect();
        let rule = WindowRule {
            lo_abs: 1e-6,
            hi_abs: 0.5,
            min_points: 10,
            fallback_skip_fraction: None,
        };
        assert!(matches!(
            fit_exponential(&series, &rule),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn fit_exponential_neutral_fallback() {
        let series: Vec<(f64, f64)> = (0..200).map(|i| (0.05 * i as f64, 1e-3)).collect();
        let rule = WindowRule {
            lo_abs: 1e-9,
            hi_abs: 0.5e-3,
            min_points: 10,
            fallback_skip_fraction: Some(0.1),
        };
        let fit = fit_exponential(&series, &rule).unwrap();
        assert!(fit.rate.abs() < 1e-12);
    }

    #[test]
    fn hessian_comparison_collapses_in_constant_curvature() {
        let s = hyperbolic();
        let kind = CurveKind::FourierGraph {
            c0: 1.3,
            cos_coeffs: vec![(2, 0.05)],
            sin_coeffs: vec![],
        };
        let c = curve_of(&s, &kind, 64);
        let rep = check_hessian_comparison(&s, &c, Location::Pole).unwrap();
        assert!(rep.worst_equality_gap < 1e-8, "gap {}", rep.worst_equality_gap);
        assert_ne!(rep.tangent.status, CheckStatus::Failure);
        assert_ne!(rep.normal.status, CheckStatus::Failure);
        assert_ne!(rep.mixed.status, CheckStatus::Failure);
    }

    #[test]
    fn hessian_comparison_holds_on_pinched_profile() {
        let s = tanh_profile();
        let kind = CurveKind::FourierGraph {
            c0: 1.5,
            cos_coeffs: vec![(2, 0.05)],
            sin_coeffs: vec![(3, 0.02)],
        };
        let c = curve_of(&s, &kind, 48);
        for p0 in [
            Location::Pole,
            Location::Point(ChartPoint::new(0.3, 0.5).unwrap()),
        ] {
            let rep = check_hessian_comparison(&s, &c, p0).unwrap();
            assert_ne!(rep.tangent.status, CheckStatus::Failure, "{:?}", rep.tangent);
            assert_ne!(rep.normal.status, CheckStatus::Failure, "{:?}", rep.normal);
            assert_ne!(rep.mixed.status, CheckStatus::Failure, "{:?}", rep.mixed);
        }
    }

    #[test]
    fn spectrum_report_validates_against_profile() {
        let s = hyperbolic();
        let lam2 = (-4.0 + 1.0) / 1.0f64.sinh().powi(2);
        let entry = SpectrumEntry {
            mode: 2,
            lambda_predicted: lam2,
            fitted_rate: lam2 * 1.01,
            relative_error: 0.01,
            r_squared: 0.999,
            window: (0.0, 1.0),
            n_points: 100,
        };
        let report = SpectrumReport::new(s.family_id(), 1.0, vec![entry]);
        assert!(report.validate(&s).is_ok());

        let bad = SpectrumEntry {
            lambda_predicted: lam2 + 0.1,
            ..entry
        };
        let report = SpectrumReport::new(s.family_id(), 1.0, vec![bad]);
        assert!(report.validate(&s).is_err());
    }
}
