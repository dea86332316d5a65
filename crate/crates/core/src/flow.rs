//! Time integration of the constrained flow ∂t γ = (h(t) − κ)N in
//! parametric and radial-graph form.
//!
//! The global term h = ∮κ^{1+α}ds / ∮κ^α ds is evaluated with the same
//! quadrature weights as length and area, so the discrete identity
//! ∮(h − κ)κ^α ds = 0 holds to rounding; for the area-preserving flow this
//! is what keeps the enclosed area from drifting at first order. h is
//! recomputed at every internal stage of multi-stage steps.

use crate::curve::{DiscreteCurve, GraphGeometry, RadialGraph};
use crate::diagnostics::{CheckFlag, DiagnosticsRecord, SpectrumEntry, WindowRule};
use crate::error::{Error, Result};
use crate::fd;
use crate::geodesics::{self, Location, SearchSettings};
use crate::scalar::Real;
use crate::surface::SurfaceProfile;
use crate::tolerances as tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ExplicitRk4,
    SemiImplicitGraph,
}

#[derive(Debug, Clone, Copy)]
pub enum DtPolicy<T> {
    Fixed(T),
    Cfl { safety: T },
}

#[derive(Debug, Clone)]
pub struct FlowConfig<T> {
    /// Flow exponent: 0 = area-preserving, 1 = length-preserving. Any α ≥ 0
    /// is accepted for exploration; theorem-tagged diagnostics assume 0 or 1.
    pub alpha: T,
    pub scheme: Scheme,
    pub dt: DtPolicy<T>,
    pub t_end: T,
    /// Parametric-only tangential resampling cadence; 0 disables.
    pub redistribution_stride: usize,
    /// Restoring gain on the enclosed-area drift; 0 (default) measures the
    /// raw scheme.
    pub area_feedback_gain: T,
    pub kappa_ceiling: Option<T>,
    pub escape_ceiling: Option<T>,
    pub slope_ceiling: T,
    pub embed_check_stride: usize,
    pub diag_stride: usize,
    /// Inner/outer radii every k-th diagnostic record; 0 disables.
    pub radii_every: usize,
    /// Support function extrema every k-th diagnostic record; 0 disables.
    pub support_every: usize,
    /// Curve snapshots every k-th diagnostic record; 0 disables.
    pub snapshot_every: usize,
    pub search: SearchSettings<T>,
}

impl<T: Real> FlowConfig<T> {
    pub fn new(alpha: T, scheme: Scheme, dt: DtPolicy<T>, t_end: T) -> Self {
        FlowConfig {
            alpha,
            scheme,
            dt,
            t_end,
            redistribution_stride: 0,
            area_feedback_gain: T::zero(),
            kappa_ceiling: None,
            escape_ceiling: None,
            slope_ceiling: T::of(tol::SLOPE_CEILING_DEFAULT),
            embed_check_stride: 50,
            diag_stride: 10,
            radii_every: 0,
            support_every: 0,
            snapshot_every: 0,
            search: SearchSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha < T::zero() || !self.alpha.is_finite() {
            return Err(Error::parameter("alpha", "flow exponent must be >= 0"));
        }
        if let DtPolicy::Cfl { safety } = self.dt {
            if !(safety > T::zero() && safety <= T::one()) {
                return Err(Error::parameter("safety", "CFL safety factor must be in (0, 1]"));
            }
        }
        if let DtPolicy::Fixed(dt) = self.dt {
            if !(dt > T::zero()) {
                return Err(Error::parameter("dt", "fixed time step must be positive"));
            }
        }
        if !(self.t_end > T::zero()) {
            return Err(Error::parameter("t_end", "must be positive"));
        }
        if self.diag_stride == 0 {
            return Err(Error::parameter("diag_stride", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum Representation<T> {
    Parametric(DiscreteCurve<T>),
    Graph(RadialGraph<T>),
}

#[derive(Debug, Clone)]
pub struct FlowState<T> {
    pub t: T,
    pub step: u64,
    pub rep: Representation<T>,
    pub last_h: T,
}

impl<T: Real> FlowState<T> {
    pub fn new(rep: Representation<T>) -> Self {
        FlowState {
            t: T::zero(),
            step: 0,
            rep,
            last_h: T::zero(),
        }
    }

    pub fn curve_view(&self, surface: &SurfaceProfile<T>) -> Result<DiscreteCurve<T>> {
        match &self.rep {
            Representation::Parametric(c) => Ok(c.clone()),
            Representation::Graph(g) => g.to_curve(surface),
        }
    }
}

/// κ^α with the conventions the constrained flows need: α = 0 is identically
/// 1; negative κ is allowed only for integer α (even powers drop the sign).
fn kappa_pow<T: Real>(kappa: T, alpha: T) -> Result<T> {
    if alpha == T::zero() {
        return Ok(T::one());
    }
    if kappa > T::zero() {
        return Ok(kappa.powf(alpha));
    }
    let rounded = alpha.round();
    if (alpha - rounded).abs() < T::of(1e-12) && rounded >= T::zero() {
        let k = rounded.as_f64() as i64;
        let mag = kappa.abs().powf(alpha);
        return Ok(if k % 2 == 0 { mag } else { mag * kappa.signum() });
    }
    Err(Error::Domain(format!(
        "kappa^alpha undefined: kappa = {kappa} <= 0 with fractional alpha = {alpha}"
    )))
}

/// Global term over explicit (κ, ds) samples: ∮κ·κ^α ds / ∮κ^α ds.
pub fn global_term_weighted<T: Real>(kappa: &[T], weights: &[T], alpha: T) -> Result<T> {
    let mut num = T::zero();
    let mut den = T::zero();
    for (&k, &w) in kappa.iter().zip(weights) {
        let ka = kappa_pow(k, alpha)?;
        num = num + k * ka * w;
        den = den + ka * w;
    }
    if den == T::zero() {
        return Err(Error::Degeneracy("global term denominator vanished".into()));
    }
    Ok(num / den)
}

/// Global term of a parametric curve with the arclength weights of
/// `length_area`, so that ∮(h − κ)κ^α ds = 0 holds discretely.
pub fn global_term<T: Real>(
    _surface: &SurfaceProfile<T>,
    curve: &DiscreteCurve<T>,
    alpha: T,
) -> Result<T> {
    global_term_weighted(curve.kappas(), curve.arc_weights(), alpha)
}

/// Same average evaluated with the graph volume element
/// μ = (φ²/v)du + (∂ᵤr/v)dr; pulled back along the graph this equals v du,
/// so the two routes agree to rounding. Both are exposed for comparison.
pub fn global_term_mu_weighted<T: Real>(
    surface: &SurfaceProfile<T>,
    graph: &RadialGraph<T>,
    alpha: T,
) -> Result<T> {
    let geo = graph.geometry(surface);
    let n = graph.len();
    let du = T::of(2.0) * T::PI() / T::of(n as f64);
    let weights: Vec<T> = (0..n)
        .map(|j| {
            let phi = surface.phi(graph.values()[j]);
            (phi * phi / geo.v[j] + geo.dr[j] / geo.v[j] * geo.dr[j]) * du
        })
        .collect();
    global_term_weighted(&geo.kappa, &weights, alpha)
}

/// Per-step constants the steppers need: the flow exponent, the optional
/// restoring area feedback and its reference area.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<T> {
    pub alpha: T,
    pub gain: T,
    pub a0: T,
}

impl<T: Real> StepContext<T> {
    pub fn plain(alpha: T) -> Self {
        StepContext {
            alpha,
            gain: T::zero(),
            a0: T::zero(),
        }
    }
}

fn effective_h<T: Real>(h: T, ctx: &StepContext<T>, area: T, length: T, dt: T) -> T {
    if ctx.gain == T::zero() {
        h
    } else {
        h - ctx.gain * (area - ctx.a0) / (length * dt)
    }
}

/// One explicit 4th-order multi-stage step of the parametric flow
/// (ṙ, u̇) = (h − κ)(Nʳ, Nᵘ); h is recomputed at every stage.
pub fn step_parametric<T: Real>(
    surface: &SurfaceProfile<T>,
    curve: &DiscreteCurve<T>,
    dt: T,
    ctx: &StepContext<T>,
) -> Result<(DiscreteCurve<T>, T)> {
    let n = curve.len();
    let winding = curve.winding();
    let velocity = |c: &DiscreteCurve<T>| -> Result<(Vec<T>, Vec<T>, T)> {
        let h = global_term(surface, c, ctx.alpha)?;
        let h_eff = effective_h(h, ctx, c.area(), c.length(), dt);
        let mut vr = Vec::with_capacity(n);
        let mut vu = Vec::with_capacity(n);
        for j in 0..n {
            let f = h_eff - c.kappas()[j];
            let (nr, nu) = c.normal(j);
            vr.push(f * nr);
            vu.push(f * nu);
        }
        Ok((vr, vu, h))
    };

    let half = T::of(0.5);
    let r0 = curve.r_values();
    let u0 = curve.u_values();
    let advance = |kr: &[T], ku: &[T], factor: T| -> Result<DiscreteCurve<T>> {
        let mut r = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        for j in 0..n {
            r.push(r0[j] + factor * kr[j]);
            u.push(u0[j] + factor * ku[j]);
        }
        DiscreteCurve::from_lifted(surface, r, u, winding)
    };

    let (k1r, k1u, h) = velocity(curve)?;
    let c2 = advance(&k1r, &k1u, half * dt)?;
    let (k2r, k2u, _) = velocity(&c2)?;
    let c3 = advance(&k2r, &k2u, half * dt)?;
    let (k3r, k3u, _) = velocity(&c3)?;
    let c4 = advance(&k3r, &k3u, dt)?;
    let (k4r, k4u, _) = velocity(&c4)?;

    let sixth = T::one() / T::of(6.0);
    let two = T::of(2.0);
    let mut r = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for j in 0..n {
        r.push(r0[j] + dt * sixth * (k1r[j] + two * (k2r[j] + k3r[j]) + k4r[j]));
        u.push(u0[j] + dt * sixth * (k1u[j] + two * (k2u[j] + k3u[j]) + k4u[j]));
    }
    Ok((DiscreteCurve::from_lifted(surface, r, u, winding)?, h))
}

/// One semi-implicit step of the radial-graph flow
/// ∂t r = (v/φ)(h − κ): the full 4th-order right-hand side is explicit and
/// a frozen-coefficient 3-point stabilizer (1/v²)∂ᵤᵤ acts implicitly on the
/// increment, leaving a periodic cyclic-tridiagonal solve per step.
pub fn step_graph<T: Real>(
    surface: &SurfaceProfile<T>,
    graph: &RadialGraph<T>,
    dt: T,
    ctx: &StepContext<T>,
) -> Result<(RadialGraph<T>, T)> {
    let n = graph.len();
    let du = T::of(2.0) * T::PI() / T::of(n as f64);
    let geo = graph.geometry(surface);
    let weights: Vec<T> = geo.v.iter().map(|&v| v * du).collect();
    let h = global_term_weighted(&geo.kappa, &weights, ctx.alpha)?;
    let h_eff = if ctx.gain == T::zero() {
        h
    } else {
        let mut area = T::zero();
        let mut length = T::zero();
        for j in 0..n {
            area = area + surface.capital_phi(graph.values()[j]) * du;
            length = length + weights[j];
        }
        effective_h(h, ctx, area, length, dt)
    };

    let mut rhs = Vec::with_capacity(n);
    for j in 0..n {
        let phi = surface.phi(graph.values()[j]);
        rhs.push(dt * (geo.v[j] / phi) * (h_eff - geo.kappa[j]));
    }

    // (I − dt·C·D₂)δ = dt·RHS with C = diag(1/v²) frozen at the current
    // state; unconditionally stable against the explicit 4th-order
    // diffusion (λ₄(θ) − 2λ₂(θ) ≥ 0 for all θ).
    let mut sub = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n);
    for j in 0..n {
        let c = dt / (geo.v[j] * geo.v[j] * du * du);
        sub.push(-c);
        diag.push(T::one() + T::of(2.0) * c);
        sup.push(-c);
    }
    fd::solve_cyclic_tridiag(&sub, &diag, &sup, &mut rhs);

    let mut values = graph.values().to_vec();
    for j in 0..n {
        values[j] = values[j] + rhs[j];
        if !(values[j] > T::zero()) || !values[j].is_finite() {
            return Err(Error::Degeneracy(format!(
                "graph radius became invalid at sample {j}"
            )));
        }
    }
    Ok((RadialGraph::with_offset(values, graph.offset())?, h))
}

#[derive(Debug, Clone, PartialEq)]
pub enum HaltReason<T> {
    /// Reached t_end.
    Completed,
    /// sup|κ − h| and the radial deviation stayed below the convergence
    /// thresholds for the whole trailing window.
    Converged,
    BlowUp { kappa_max: T },
    Escape { r_min: T, r_max: T },
    EmbeddednessLoss,
    GraphBreakdown { max_slope: T },
}

impl<T> HaltReason<T> {
    pub fn label(&self) -> &'static str {
        match self {
            HaltReason::Completed => "completed",
            HaltReason::Converged => "converged",
            HaltReason::BlowUp { .. } => "blow_up",
            HaltReason::Escape { .. } => "escape",
            HaltReason::EmbeddednessLoss => "embeddedness_loss",
            HaltReason::GraphBreakdown { .. } => "graph_breakdown",
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, HaltReason::Completed | HaltReason::Converged)
    }
}

#[derive(Debug, Clone)]
pub struct CurveSnapshot<T> {
    pub step: u64,
    pub t: T,
    pub u: Vec<T>,
    pub r: Vec<T>,
    pub kappa: Vec<T>,
    pub ds: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct RunRecord<T> {
    pub alpha: T,
    pub initial_length: T,
    pub initial_area: T,
    /// ε₀ = min(κ_min(0), a), the convexity-preservation floor.
    pub epsilon0: T,
    pub records: Vec<DiagnosticsRecord<T>>,
    pub snapshots: Vec<CurveSnapshot<T>>,
    pub halt: HaltReason<T>,
    pub final_curve: DiscreteCurve<T>,
    pub final_t: T,
    pub steps: u64,
}

fn explicit_dt_bound<T: Real>(curve: &DiscreteCurve<T>, safety: T) -> T {
    let min_ds = curve
        .arc_weights()
        .iter()
        .cloned()
        .fold(T::infinity(), T::min);
    safety * min_ds * min_ds / T::of(2.0)
}

fn graph_dt_bound<T: Real>(geo: &GraphGeometry<T>, du: T, safety: T) -> T {
    let v_min = geo.v.iter().cloned().fold(T::infinity(), T::min);
    T::of(tol::SEMI_IMPLICIT_DT_FACTOR) * safety * (du * v_min) * (du * v_min) / T::of(2.0)
}

/// Integrates to t_end or a halt condition, emitting diagnostics records
/// every `diag_stride` steps and snapshots per `snapshot_every`.
pub fn run<T: Real>(
    surface: &SurfaceProfile<T>,
    initial: Representation<T>,
    config: &FlowConfig<T>,
) -> Result<RunRecord<T>> {
    config.validate()?;
    if matches!(config.scheme, Scheme::SemiImplicitGraph)
        && matches!(initial, Representation::Parametric(_))
    {
        return Err(Error::parameter(
            "scheme",
            "semi-implicit scheme needs a radial-graph initial curve",
        ));
    }
    let mut state = FlowState::new(initial);
    let first_view = state.curve_view(surface)?;
    let initial_length = first_view.length();
    let initial_area = first_view.area();
    let epsilon0 = first_view.kappa_min().min(surface.a());
    let kappa_ceiling = config.kappa_ceiling.unwrap_or_else(|| {
        T::of(tol::BLOWUP_FACTOR) * first_view.kappa_max().max(surface.b())
    });
    let escape_hi = config
        .escape_ceiling
        .unwrap_or_else(|| surface.r_max() - T::of(tol::ESCAPE_MARGIN_STEPS) * surface.grid_step());
    let escape_lo = T::of(tol::ESCAPE_MARGIN_STEPS) * surface.grid_step();
    let ctx = StepContext {
        alpha: config.alpha,
        gain: config.area_feedback_gain,
        a0: initial_area,
    };

    let mut records: Vec<DiagnosticsRecord<T>> = Vec::new();
    let mut snapshots: Vec<CurveSnapshot<T>> = Vec::new();
    let mut delta0: Option<T> = None;
    let mut consecutive_converged = 0usize;
    let mut last_dt = T::zero();

    let halt;
    loop {
        let curve = state.curve_view(surface)?;

        // Halt detection, in priority order.
        let kmax = curve.kappa_max();
        if kmax.abs() >= kappa_ceiling {
            halt = HaltReason::BlowUp { kappa_max: kmax };
            break;
        }
        let (r_lo, r_hi) = (curve.r_min(), curve.r_max());
        if r_hi >= escape_hi || r_lo <= escape_lo {
            halt = HaltReason::Escape {
                r_min: r_lo,
                r_max: r_hi,
            };
            break;
        }
        if matches!(state.rep, Representation::Parametric(_))
            && config.embed_check_stride > 0
            && state.step % config.embed_check_stride as u64 == 0
            && !curve.is_embedded()
        {
            halt = HaltReason::EmbeddednessLoss;
            break;
        }
        if let Representation::Graph(g) = &state.rep {
            let geo = g.geometry(surface);
            let max_slope = geo.dr.iter().fold(T::zero(), |acc, d| acc.max(d.abs()));
            if max_slope >= config.slope_ceiling {
                halt = HaltReason::GraphBreakdown { max_slope };
                break;
            }
        }

        // Diagnostics record.
        if state.step % config.diag_stride as u64 == 0 {
            let record_index = records.len();
            let record = assemble_record(
                surface,
                &curve,
                config,
                state.step,
                state.t,
                last_dt,
                records.last(),
                delta0,
                epsilon0,
                initial_length,
                initial_area,
                record_index,
            )?;
            if delta0.is_none() {
                delta0 = Some(record.deficit);
            }
            // Convergence window bookkeeping.
            let r_mid = (record.r_min + record.r_max) / T::of(2.0);
            let dev = (record.r_max - record.r_min) / T::of(2.0);
            let converged_now = record.sup_kappa_minus_h < T::of(tol::CONVERGENCE_KAPPA_TOL)
                && dev < T::of(tol::CONVERGENCE_RADIUS_REL) * r_mid;
            if converged_now {
                consecutive_converged += 1;
            } else {
                consecutive_converged = 0;
            }
            if config.snapshot_every > 0 && record_index % config.snapshot_every == 0 {
                snapshots.push(snapshot_of(&curve, state.step, state.t));
            }
            records.push(record);
            if consecutive_converged >= tol::CONVERGENCE_WINDOW {
                halt = HaltReason::Converged;
                break;
            }
        }

        if state.t >= config.t_end {
            halt = HaltReason::Completed;
            break;
        }

        // Advance one step. A step that produces invalid samples is a
        // numerical explosion and is reported as blow-up.
        let stepped = match &state.rep {
            Representation::Parametric(c) => {
                let dt = match config.dt {
                    DtPolicy::Fixed(dt) => dt,
                    DtPolicy::Cfl { safety } => explicit_dt_bound(c, safety),
                }
                .min(config.t_end - state.t)
                .max(T::of(1e-300));
                step_parametric(surface, c, dt, &ctx).and_then(|(next, h)| {
                    let next = if config.redistribution_stride > 0
                        && (state.step + 1) % config.redistribution_stride as u64 == 0
                    {
                        next.redistribute(surface)?
                    } else {
                        next
                    };
                    Ok((Representation::Parametric(next), h, dt))
                })
            }
            Representation::Graph(g) => {
                let dt = match config.dt {
                    DtPolicy::Fixed(dt) => dt,
                    DtPolicy::Cfl { safety } => {
                        let du = T::of(2.0) * T::PI() / T::of(g.len() as f64);
                        graph_dt_bound(&g.geometry(surface), du, safety)
                    }
                }
                .min(config.t_end - state.t)
                .max(T::of(1e-300));
                step_graph(surface, g, dt, &ctx)
                    .map(|(next, h)| (Representation::Graph(next), h, dt))
            }
        };
        match stepped {
            Ok((rep, h, dt)) => {
                state.rep = rep;
                state.last_h = h;
                state.t = state.t + dt;
                last_dt = dt;
            }
            Err(Error::Degeneracy(_)) | Err(Error::Parameter { .. }) => {
                halt = HaltReason::BlowUp { kappa_max: kmax };
                break;
            }
            Err(e) => return Err(e),
        }
        state.step += 1;
    }

    let final_curve = state.curve_view(surface)?;
    Ok(RunRecord {
        alpha: config.alpha,
        initial_length,
        initial_area,
        epsilon0,
        records,
        snapshots,
        halt,
        final_curve,
        final_t: state.t,
        steps: state.step,
    })
}

fn snapshot_of<T: Real>(curve: &DiscreteCurve<T>, step: u64, t: T) -> CurveSnapshot<T> {
    CurveSnapshot {
        step,
        t,
        u: (0..curve.len()).map(|j| curve.u_mod_tau(j)).collect(),
        r: curve.r_values().to_vec(),
        kappa: curve.kappas().to_vec(),
        ds: curve.arc_weights().to_vec(),
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble_record<T: Real>(
    surface: &SurfaceProfile<T>,
    curve: &DiscreteCurve<T>,
    config: &FlowConfig<T>,
    step: u64,
    t: T,
    dt_used: T,
    prev: Option<&DiagnosticsRecord<T>>,
    delta0: Option<T>,
    epsilon0: T,
    initial_length: T,
    initial_area: T,
    record_index: usize,
) -> Result<DiagnosticsRecord<T>> {
    let length = curve.length();
    let area = curve.area();
    let a = surface.a();
    let deficit = length * length - T::of(4.0) * T::PI() * area - a * a * area * area;
    let h = global_term(surface, curve, config.alpha)?;
    let kappa_min = curve.kappa_min();
    let kappa_max = curve.kappa_max();
    let sup_kh = curve
        .kappas()
        .iter()
        .map(|&k| (k - h).abs())
        .fold(T::zero(), T::max);
    let gb = crate::diagnostics::gauss_bonnet_residual(surface, curve);

    let want_radii = config.radii_every > 0 && record_index % config.radii_every == 0;
    let want_support = config.support_every > 0 && record_index % config.support_every == 0;
    let mut rho_minus = None;
    let mut rho_plus = None;
    let mut rho_minus_center = None;
    let mut rho_plus_center = None;
    let mut radii_accuracy = None;
    if want_radii {
        let est = geodesics::inradius_outradius(surface, curve, &config.search)?;
        rho_minus = Some(est.rho_minus);
        rho_plus = Some(est.rho_plus);
        rho_minus_center = Some(est.center_minus.xy());
        rho_plus_center = Some(est.center_plus.xy());
        radii_accuracy = Some(est.accuracy);
    }
    let mut support_min = None;
    let mut support_max = None;
    if want_support {
        let p0 = if curve.winding() == 1 {
            Location::Pole
        } else if let Some((x, y)) = rho_minus_center {
            Location::from_xy(x, y)
        } else {
            let est = geodesics::inradius_outradius(surface, curve, &config.search)?;
            est.center_minus
        };
        let sv = geodesics::support_function(surface, p0, curve)?;
        support_min = Some(sv.sinh_weighted.iter().cloned().fold(T::infinity(), T::min));
        support_max = Some(
            sv.sinh_weighted
                .iter()
                .cloned()
                .fold(-T::infinity(), T::max),
        );
    }

    // Streaming check flags: convexity floor, deficit monotonicity and the
    // constrained-quantity monotonicity against the previous record.
    let mut flags = Vec::new();
    flags.push(CheckFlag {
        name: "convexity_floor",
        violation: (epsilon0 - T::of(tol::CONVEXITY_SLACK)) - kappa_min,
        pass: kappa_min >= epsilon0 - T::of(tol::CONVEXITY_SLACK),
    });
    if let Some(p) = prev {
        let slack = T::of(tol::DEFICIT_SLACK_REL) * delta0.unwrap_or(deficit).abs()
            + T::of(tol::DEFICIT_SLACK_ABS);
        let viol = deficit - p.deficit - slack;
        flags.push(CheckFlag {
            name: "deficit_monotone",
            violation: viol,
            pass: viol <= T::zero(),
        });
        if config.alpha == T::zero() {
            let viol = length - p.length - T::of(tol::MONOTONE_SLACK_REL) * initial_length;
            flags.push(CheckFlag {
                name: "length_monotone",
                violation: viol,
                pass: viol <= T::zero(),
            });
        } else if config.alpha == T::one() {
            let viol = p.area - area - T::of(tol::MONOTONE_SLACK_REL) * initial_area;
            flags.push(CheckFlag {
                name: "area_monotone",
                violation: viol,
                pass: viol <= T::zero(),
            });
        }
    }

    let record = DiagnosticsRecord {
        step,
        t,
        length,
        area,
        deficit,
        h,
        kappa_min,
        kappa_max,
        sup_kappa_minus_h: sup_kh,
        gb_residual: gb,
        r_min: curve.r_min(),
        r_max: curve.r_max(),
        rho_minus,
        rho_plus,
        rho_minus_center,
        rho_plus_center,
        radii_accuracy,
        support_min,
        support_max,
        dt_used,
        flags,
    };
    record.ensure_finite()?;
    Ok(record)
}

/// Runs the linear-response experiment for one Fourier mode: evolve
/// r = 𝔯 + ε cos(iu) with the semi-implicit graph scheme, project the
/// radial deviation on cos(iu), and fit the exponential decay rate against
/// the prediction λ_i = (−i² + ψ(𝔯))/φ(𝔯)².
pub fn mode_experiment<T: Real>(
    surface: &SurfaceProfile<T>,
    radius: T,
    mode: usize,
    eps: T,
    config: &FlowConfig<T>,
) -> Result<SpectrumEntry<T>> {
    if mode == 0 {
        return Err(Error::parameter("mode", "mode index must be >= 1"));
    }
    if !(eps > T::zero()) || eps > T::of(1e-2) * radius {
        return Err(Error::parameter(
            "eps",
            "perturbation must be positive and at most 1e-2 of the radius",
        ));
    }
    config.validate()?;
    let n = 256usize;
    let tau = T::of(2.0) * T::PI();
    let values: Vec<T> = (0..n)
        .map(|j| {
            let u = tau * T::of(j as f64) / T::of(n as f64);
            radius + eps * (T::of(mode as f64) * u).cos()
        })
        .collect();
    let mut graph = RadialGraph::new(values)?;
    let ctx = StepContext {
        alpha: config.alpha,
        gain: config.area_feedback_gain,
        a0: T::zero(),
    };

    let amplitude = |g: &RadialGraph<T>| -> T {
        let mean = g.mean_radius();
        let mut acc = T::zero();
        for j in 0..n {
            let u = tau * T::of(j as f64) / T::of(n as f64);
            acc = acc + (g.values()[j] - mean) * (T::of(mode as f64) * u).cos();
        }
        acc * T::of(2.0) / T::of(n as f64)
    };

    let mut series: Vec<(T, T)> = Vec::new();
    let mut t = T::zero();
    let mut step = 0u64;
    let floor = T::of(tol::FIT_WINDOW_LO) * eps * T::of(0.2);
    while t < config.t_end {
        if step % config.diag_stride as u64 == 0 {
            let a_i = amplitude(&graph);
            series.push((t, a_i));
            if a_i.abs() < floor {
                break;
            }
        }
        let dt = match config.dt {
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::Cfl { safety } => {
                let du = tau / T::of(n as f64);
                graph_dt_bound(&graph.geometry(surface), du, safety)
            }
        }
        .min(config.t_end - t)
        .max(T::of(1e-300));
        let (next, _) = step_graph(surface, &graph, dt, &ctx)?;
        graph = next;
        t = t + dt;
        step += 1;
    }

    let psi = surface.psi(radius);
    let phi = surface.phi(radius);
    let predicted = (-T::of((mode * mode) as f64) + psi) / (phi * phi);
    let rule = WindowRule {
        lo_abs: T::of(tol::FIT_WINDOW_LO) * eps,
        hi_abs: T::of(tol::FIT_WINDOW_HI) * eps,
        min_points: tol::FIT_MIN_POINTS,
        fallback_skip_fraction: Some(T::of(0.1)),
    };
    let fit = crate::diagnostics::fit_exponential(&series, &rule)?;
    let denom = predicted.abs().max(T::of(1e-12));
    Ok(SpectrumEntry {
        mode,
        lambda_predicted: predicted,
        fitted_rate: fit.rate,
        relative_error: (fit.rate - predicted).abs() / denom,
        r_squared: fit.r_squared,
        window: fit.window,
        n_points: fit.n_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{initial_curve, CurveKind, InitialCurve};
    use crate::surface::PinchKind;

    const COTH_1: f64 = 1.3130352854993312;

    fn hyperbolic() -> SurfaceProfile<f64> {
        SurfaceProfile::build_constant_curvature(1.0).unwrap()
    }

    fn tanh_profile() -> SurfaceProfile<f64> {
        SurfaceProfile::build_from_curvature(PinchKind::TanhPinch, 1.0, 2.0, 1.0, 10.0, 1e-3)
            .unwrap()
    }

    fn graph_of(s: &SurfaceProfile<f64>, kind: &CurveKind<f64>, n: usize) -> RadialGraph<f64> {
        match initial_curve(s, kind, n).unwrap() {
            InitialCurve::Graph(g) => g,
            _ => unreachable!(),
        }
    }

    fn curve_of(s: &SurfaceProfile<f64>, kind: &CurveKind<f64>, n: usize) -> DiscreteCurve<f64> {
        graph_of(s, kind, n).to_curve(s).unwrap()
    }

    fn fourier_kind() -> CurveKind<f64> {
        CurveKind::FourierGraph {
            c0: 1.5,
            cos_coeffs: vec![(2, 0.05)],
            sin_coeffs: vec![(3, 0.02)],
        }
    }

    #[test]
    fn global_term_on_circle_is_circle_curvature() {
        let s = hyperbolic();
        let c = curve_of(&s, &CurveKind::Circle { radius: 1.0 }, 128);
        for alpha in [0.0, 1.0, 0.7, 2.0] {
            let h = global_term(&s, &c, alpha).unwrap();
            assert!((h - COTH_1).abs() < 1e-12, "alpha={alpha}: {h}");
        }
    }

    #[test]
    fn discrete_zero_mean_identity() {
        let s = tanh_profile();
        let c = curve_of(&s, &fourier_kind(), 128);
        for alpha in [0.0, 1.0] {
            let h = global_term(&s, &c, alpha).unwrap();
            let mut acc = 0.0;
            for (&k, &w) in c.kappas().iter().zip(c.arc_weights()) {
                acc += (h - k) * k.powf(alpha) * w;
            }
            assert!(acc.abs() < 1e-14 * c.length(), "alpha={alpha}: {acc}");
        }
    }

    #[test]
    fn fractional_alpha_requires_positive_curvature() {
        let s = hyperbolic();
        // Strong mode-5 perturbation dips κ below zero.
        let kind = CurveKind::PerturbedCircle {
            radius: 1.0,
            mode: 5,
            amplitude: 0.2,
        };
        let c = curve_of(&s, &kind, 128);
        assert!(c.kappa_min() < 0.0, "test intends a nonconvex curve");
        assert!(global_term(&s, &c, 0.5).is_err());
        assert!(global_term(&s, &c, 0.0).is_ok());
        assert!(global_term(&s, &c, 2.0).is_ok());
    }

    #[test]
    fn mu_weighting_equals_arclength_weighting() {
        let s = tanh_profile();
        let g = graph_of(&s, &fourier_kind(), 128);
        let c = g.to_curve(&s).unwrap();
        for alpha in [0.0, 1.0] {
            let h_mu = global_term_mu_weighted(&s, &g, alpha).unwrap();
            let h_ds = global_term(&s, &c, alpha).unwrap();
            assert!((h_mu - h_ds).abs() < 1e-12, "alpha={alpha}");
        }
    }

    #[test]
    fn circle_is_stationary_parametric() {
        let s = hyperbolic();
        let c0 = curve_of(&s, &CurveKind::Circle { radius: 1.0 }, 128);
        let ctx = StepContext {
            alpha: 0.0,
            gain: 0.0,
            a0: c0.area(),
        };
        let mut c = c0.clone();
        let dt = 1e-3;
        for _ in 0..1000 {
            let (next, _) = step_parametric(&s, &c, dt, &ctx).unwrap();
            c = next;
        }
        let mut worst: f64 = 0.0;
        for j in 0..c.len() {
            worst = worst.max((c.r_values()[j] - 1.0).abs());
        }
        assert!(worst < 1e-10, "displacement {worst} over unit time");
    }

    #[test]
    fn circle_is_fixed_point_of_graph_scheme() {
        let s = tanh_profile();
        let g = graph_of(&s, &CurveKind::Circle { radius: 1.0 }, 128);
        let ctx = StepContext {
            alpha: 0.0,
            gain: 0.0,
            a0: 0.0,
        };
        let (next, h) = step_graph(&s, &g, 1e-2, &ctx).unwrap();
        let kappa_circ = s.geodesic_circle_curvature(1.0).unwrap();
        assert!((h - kappa_circ).abs() < 1e-12);
        for j in 0..g.len() {
            assert!((next.values()[j] - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn ap_flow_conserves_area() {
        let s = hyperbolic();
        let c0 = curve_of(&s, &fourier_kind(), 128);
        let a0 = c0.area();
        let ctx = StepContext {
            alpha: 0.0,
            gain: 0.0,
            a0,
        };
        let mut c = c0;
        let dt = 2e-4;
        let mut lengths = vec![c.length()];
        for _ in 0..1000 {
            let (next, _) = step_parametric(&s, &c, dt, &ctx).unwrap();
            c = next;
            lengths.push(c.length());
        }
        let drift = (c.area() - a0).abs() / a0;
        assert!(drift < 1e-9, "area drift {drift}");
        for w in lengths.windows(2) {
            assert!(w[1] <= w[0] + 1e-10 * lengths[0], "length not monotone");
        }
    }

    #[test]
    fn lp_flow_conserves_length() {
        let s = hyperbolic();
        let c0 = curve_of(&s, &fourier_kind(), 128);
        let l0 = c0.length();
        let ctx = StepContext {
            alpha: 1.0,
            gain: 0.0,
            a0: c0.area(),
        };
        let mut c = c0;
        let dt = 2e-4;
        let mut areas = vec![c.area()];
        for _ in 0..1000 {
            let (next, _) = step_parametric(&s, &c, dt, &ctx).unwrap();
            c = next;
            areas.push(c.area());
        }
        let drift = (c.length() - l0).abs() / l0;
        // Spatial-mismatch floor at N=128; shrinks 16× at N=256.
        assert!(drift < 1e-8, "length drift {drift}");
        for w in areas.windows(2) {
            assert!(w[1] >= w[0] - 1e-10 * areas[0], "area not monotone");
        }
    }

    #[test]
    fn rk4_drift_shrinks_under_joint_refinement() {
        // At CFL-bounded dt the conservation drift is dominated by the
        // spatial mismatch, so refinement halves dt and doubles N together;
        // both error components then shrink by >= 4.
        let s = hyperbolic();
        let kind = CurveKind::PerturbedCircle {
            radius: 1.0,
            mode: 2,
            amplitude: 0.2,
        };
        let drift = |n: usize, dt: f64| -> f64 {
            let c0 = curve_of(&s, &kind, n);
            let a0 = c0.area();
            let ctx = StepContext {
                alpha: 0.0,
                gain: 0.0,
                a0,
            };
            let mut c = c0;
            let steps = (0.5 / dt) as usize;
            for _ in 0..steps {
                let (next, _) = step_parametric(&s, &c, dt, &ctx).unwrap();
                c = next;
            }
            (c.area() - a0).abs() / a0
        };
        let d1 = drift(48, 2e-3);
        let d2 = drift(96, 1e-3);
        assert!(d1 / d2 >= 6.0, "refinement ratio {} ({d1} vs {d2})", d1 / d2);
    }

    #[test]
    fn semi_implicit_drift_is_first_order_in_dt() {
        let s = hyperbolic();
        let kind = CurveKind::PerturbedCircle {
            radius: 1.0,
            mode: 2,
            amplitude: 0.05,
        };
        let drift = |dt: f64| -> f64 {
            let g0 = graph_of(&s, &kind, 64);
            let c0 = g0.to_curve(&s).unwrap();
            let a0 = c0.area();
            let ctx = StepContext {
                alpha: 0.0,
                gain: 0.0,
                a0,
            };
            let mut g = g0;
            let steps = (0.5 / dt) as usize;
            for _ in 0..steps {
                let (next, _) = step_graph(&s, &g, dt, &ctx).unwrap();
                g = next;
            }
            (g.to_curve(&s).unwrap().area() - a0).abs() / a0
        };
        let d1 = drift(2e-3);
        let d2 = drift(1e-3);
        let ratio = d1 / d2;
        assert!(
            ratio > 1.5 && ratio < 3.0,
            "first-order ratio expected, got {ratio} ({d1} vs {d2})"
        );
    }

    #[test]
    fn run_completes_on_stationary_circle() {
        let s = hyperbolic();
        let g = graph_of(&s, &CurveKind::Circle { radius: 1.0 }, 64);
        let mut config = FlowConfig::new(0.0, Scheme::ExplicitRk4, DtPolicy::Fixed(1e-3), 0.05);
        config.diag_stride = 10;
        let rec = run(&s, Representation::Parametric(g.to_curve(&s).unwrap()), &config).unwrap();
        assert_eq!(rec.halt.label(), "completed");
        assert!(rec.records.len() >= 2);
        for r in &rec.records {
            assert!(r.flags.iter().all(|f| f.pass));
        }
    }

    #[test]
    fn run_halts_on_escape() {
        let s = hyperbolic();
        let g = graph_of(&s, &CurveKind::Circle { radius: 1.5 }, 64);
        let mut config = FlowConfig::new(0.0, Scheme::ExplicitRk4, DtPolicy::Fixed(1e-3), 1.0);
        config.escape_ceiling = Some(1.2);
        let rec = run(&s, Representation::Parametric(g.to_curve(&s).unwrap()), &config).unwrap();
        match rec.halt {
            HaltReason::Escape { r_min, r_max } => {
                assert!(r_max >= 1.2);
                assert!(r_min > 0.0);
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn run_halts_on_blowup_with_unstable_step() {
        let s = hyperbolic();
        let kind = CurveKind::PerturbedCircle {
            radius: 1.0,
            mode: 4,
            amplitude: 0.05,
        };
        let c = curve_of(&s, &kind, 64);
        let mut config = FlowConfig::new(0.0, Scheme::ExplicitRk4, DtPolicy::Fixed(0.05), 10.0);
        config.diag_stride = 1;
        config.embed_check_stride = 0;
        let rec = run(&s, Representation::Parametric(c), &config).unwrap();
        assert!(
            matches!(rec.halt, HaltReason::BlowUp { .. })
                || matches!(rec.halt, HaltReason::Escape { .. }),
            "expected a singular halt, got {:?}",
            rec.halt
        );
    }

    #[test]
    fn run_halts_on_graph_breakdown() {
        let s = hyperbolic();
        let g = graph_of(
            &s,
            &CurveKind::PerturbedCircle {
                radius: 1.0,
                mode: 3,
                amplitude: 0.05,
            },
            64,
        );
        let mut config =
            FlowConfig::new(0.0, Scheme::SemiImplicitGraph, DtPolicy::Fixed(1e-3), 1.0);
        config.slope_ceiling = 0.01;
        let rec = run(&s, Representation::Graph(g), &config).unwrap();
        assert!(matches!(rec.halt, HaltReason::GraphBreakdown { .. }));
    }

    #[test]
    fn run_converges_to_geodesic_circle() {
        let s = tanh_profile();
        let g = graph_of(
            &s,
            &CurveKind::PerturbedCircle {
                radius: 1.0,
                mode: 2,
                amplitude: 0.01,
            },
            64,
        );
        let mut config =
            FlowConfig::new(0.0, Scheme::SemiImplicitGraph, DtPolicy::Fixed(5e-3), 40.0);
        config.diag_stride = 5;
        let rec = run(&s, Representation::Graph(g), &config).unwrap();
        assert_eq!(rec.halt.label(), "converged", "halt {:?}", rec.halt);
        let rbar = rec.final_curve.mean_radius();
        let dev = rec
            .final_curve
            .r_values()
            .iter()
            .map(|r| (r - rbar).abs())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-6 * rbar);
    }

    #[test]
    fn mode_experiment_recovers_rate() {
        let s = hyperbolic();
        let mut config =
            FlowConfig::new(0.0, Scheme::SemiImplicitGraph, DtPolicy::Fixed(1e-3), 8.0);
        config.diag_stride = 2;
        let entry = mode_experiment(&s, 1.0, 2, 1e-3, &config).unwrap();
        assert!(
            entry.relative_error < 0.05,
            "mode 2: predicted {}, fitted {}",
            entry.lambda_predicted,
            entry.fitted_rate
        );
        assert!(entry.r_squared > 0.999);
    }

    #[test]
    fn area_feedback_restores_drift() {
        let s = hyperbolic();
        let g = graph_of(
            &s,
            &CurveKind::PerturbedCircle {
                radius: 1.0,
                mode: 2,
                amplitude: 0.05,
            },
            64,
        );
        let c0 = g.to_curve(&s).unwrap();
        let a0 = c0.area();
        let run_with_gain = |gain: f64| -> f64 {
            let ctx = StepContext {
                alpha: 0.0,
                gain,
                a0,
            };
            let mut g2 = g.clone();
            let dt = 2e-3;
            for _ in 0..500 {
                let (next, _) = step_graph(&s, &g2, dt, &ctx).unwrap();
                g2 = next;
            }
            (g2.to_curve(&s).unwrap().area() - a0).abs() / a0
        };
        let raw = run_with_gain(0.0);
        let fed = run_with_gain(0.5);
        assert!(fed < raw, "feedback should reduce drift: {fed} vs {raw}");
    }
}
