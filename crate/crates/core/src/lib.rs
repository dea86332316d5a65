//! Constrained curvature flows of closed curves on rotationally symmetric
//! pinched Hadamard surfaces.
//!
//! The crate simulates the flow ∂t γ = (h(t) − κ) N, where the nonlocal term
//! h(t) = ∮κ^{1+α}ds / ∮κ^α ds makes the flow area-preserving (α = 0) or
//! length-preserving (α = 1), and verifies the geometric invariants the flow
//! is supposed to satisfy: monotonicity of length/area and of the
//! isoperimetric deficit, convexity preservation, inner/outer radius bounds,
//! Gauss–Bonnet consistency, and the linearization spectrum around geodesic
//! circles.
//!
//! All numerics are generic over the scalar type (see [`scalar::Real`]);
//! concrete `f64`/`f32` aliases live at the crate root.

pub mod curve;
pub mod diagnostics;
pub mod error;
pub mod fd;
pub mod flow;
pub mod geodesics;
pub mod hermite;
pub mod scalar;
pub mod surface;
pub mod tolerances;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations, the default working precision.
pub type SurfaceProfile64 = surface::SurfaceProfile<f64>;
pub type ChartPoint64 = geodesics::ChartPoint<f64>;
pub type Location64 = geodesics::Location<f64>;
pub type DiscreteCurve64 = curve::DiscreteCurve<f64>;
pub type RadialGraph64 = curve::RadialGraph<f64>;
pub type FlowConfig64 = flow::FlowConfig<f64>;
pub type FlowState64 = flow::FlowState<f64>;
pub type RunRecord64 = flow::RunRecord<f64>;
pub type DiagnosticsRecord64 = diagnostics::DiagnosticsRecord<f64>;
pub type SpectrumReport64 = diagnostics::SpectrumReport<f64>;

/// `f32` instantiations of the geometric layer.
pub type SurfaceProfile32 = surface::SurfaceProfile<f32>;
pub type DiscreteCurve32 = curve::DiscreteCurve<f32>;
