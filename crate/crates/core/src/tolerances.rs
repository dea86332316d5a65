//! The single table of tolerances and default knobs used across the crate.
//!
//! Inequality checks separate theorem violations from truncation error:
//! `LHS ≤ RHS + slack` passes, a violation within the stated slack is a
//! warning, beyond it a failure. Scale factors are noted per constant.

/// Gauss curvature band check −b² ≤ 𝒦 ≤ −a², absolute, × b².
pub const CURVATURE_BAND_REL: f64 = 1e-8;

/// ψ ≤ 1 check on pinched profiles, absolute (ψ is O(1) by construction).
pub const PSI_UPPER_SLACK: f64 = 1e-8;

/// ψ monotonicity check between adjacent grid nodes, absolute.
pub const PSI_MONOTONE_SLACK: f64 = 1e-10;

/// Geodesic unit-speed defect along integrated arcs, absolute.
pub const UNIT_SPEED_TOL: f64 = 1e-8;

/// Clairaut constant conservation along arcs, relative.
pub const CLAIRAUT_REL_TOL: f64 = 1e-8;

/// Terminal miss of the distance shooting solver, × r_max.
pub const DISTANCE_MISS_REL: f64 = 1e-9;

/// Frame orthonormality of cached curve tangent/normal, absolute.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Parametric speed below this is a degenerate parametrization.
pub const MIN_SPEED: f64 = 1e-12;

/// Convergence declaration: sup|κ − h| threshold, absolute (1/length).
pub const CONVERGENCE_KAPPA_TOL: f64 = 1e-6;

/// Convergence declaration: max|r − r̄| threshold, × mean radius.
pub const CONVERGENCE_RADIUS_REL: f64 = 1e-6;

/// Consecutive diagnostic strides both convergence conditions must hold.
pub const CONVERGENCE_WINDOW: usize = 100;

/// Isoperimetric-deficit monotonicity slack, × Δ(0) plus absolute floor.
pub const DEFICIT_SLACK_REL: f64 = 1e-9;
pub const DEFICIT_SLACK_ABS: f64 = 1e-12;

/// L (resp. A) monotonicity slack, × initial value.
pub const MONOTONE_SLACK_REL: f64 = 1e-9;

/// Convexity preservation: κ_min(t) ≥ min(κ_min(0), a) − this, absolute.
pub const CONVEXITY_SLACK: f64 = 1e-6;

/// Generic inequality-check slack, × the natural scale of the inequality.
pub const CHECK_SLACK_REL: f64 = 1e-9;

/// Blow-up halt: κ ceiling factor × max(κ_max(0), b).
pub const BLOWUP_FACTOR: f64 = 1e3;

/// Escape halt margin below r_max, × grid_step.
pub const ESCAPE_MARGIN_STEPS: f64 = 5.0;

/// Reported accuracy target of the inner/outer radius search (length).
pub const RADII_ACCURACY: f64 = 1e-3;

/// Default validity radius of a profile tabulation, × 1/a.
pub const DEFAULT_R_MAX_FACTOR: f64 = 20.0;

/// Default profile tabulation step (length).
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

/// Default CFL safety factor σ for the explicit scheme.
pub const CFL_SAFETY_DEFAULT: f64 = 0.8;

/// Semi-implicit default time step, × the explicit parabolic bound.
pub const SEMI_IMPLICIT_DT_FACTOR: f64 = 10.0;

/// Graph representation breaks down when max|∂ᵤr| exceeds this.
pub const SLOPE_CEILING_DEFAULT: f64 = 20.0;

/// Fit window for mode experiments: |a_i| ∈ (ε·FIT_WINDOW_LO, ε·FIT_WINDOW_HI).
pub const FIT_WINDOW_LO: f64 = 1e-6;
pub const FIT_WINDOW_HI: f64 = 0.5;

/// Minimum points a rate fit needs.
pub const FIT_MIN_POINTS: usize = 10;
