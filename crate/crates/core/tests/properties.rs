//! Property tests for the geometric invariants that hold for whole families
//! of inputs rather than single examples.

use proptest::prelude::*;

use ccflow_core::curve::{initial_curve, CurveKind, DiscreteCurve, InitialCurve};
use ccflow_core::diagnostics::gauss_bonnet_residual;
use ccflow_core::flow::global_term;
use ccflow_core::geodesics::{distance, ChartPoint, Location};
use ccflow_core::surface::{PinchKind, SurfaceProfile};
use ccflow_core::SurfaceProfile64;

fn tanh_profile() -> SurfaceProfile64 {
    SurfaceProfile::build_from_curvature(PinchKind::TanhPinch, 1.0, 2.0, 1.0, 10.0, 2e-3).unwrap()
}

fn hyperbolic() -> SurfaceProfile64 {
    SurfaceProfile::build_constant_curvature(1.0).unwrap()
}

fn fourier_curve(
    s: &SurfaceProfile64,
    c0: f64,
    c2: f64,
    s3: f64,
    n: usize,
) -> DiscreteCurve<f64> {
    let kind = CurveKind::FourierGraph {
        c0,
        cos_coeffs: vec![(2, c2)],
        sin_coeffs: vec![(3, s3)],
    };
    match initial_curve(s, &kind, n).unwrap() {
        InitialCurve::Graph(g) => g.to_curve(s).unwrap(),
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn length_dominates_area(c0 in 0.8f64..2.2, c2 in -0.08f64..0.08, s3 in -0.05f64..0.05) {
        let s = tanh_profile();
        let c = fourier_curve(&s, c0, c2, s3, 96);
        prop_assert!(c.length() >= s.a() * c.area() - 1e-12 * c.length());
    }

    #[test]
    fn gauss_bonnet_on_fourier_graphs(c0 in 0.9f64..2.0, c2 in -0.06f64..0.06, s3 in -0.04f64..0.04) {
        let s = tanh_profile();
        let c = fourier_curve(&s, c0, c2, s3, 256);
        let res = gauss_bonnet_residual(&s, &c);
        prop_assert!(res.abs() < 1e-6, "residual {res}");
    }

    #[test]
    fn zero_mean_identity_all_alpha(c0 in 1.0f64..1.8, c2 in -0.05f64..0.05, alpha in 0usize..3) {
        let s = tanh_profile();
        let c = fourier_curve(&s, c0, c2, 0.01, 96);
        let alpha = alpha as f64;
        let h = global_term(&s, &c, alpha).unwrap();
        let mut acc = 0.0;
        for (&k, &w) in c.kappas().iter().zip(c.arc_weights()) {
            acc += (h - k) * k.powf(alpha) * w;
        }
        prop_assert!(acc.abs() < 1e-12 * c.length(), "identity residual {acc}");
    }

    #[test]
    fn redistribute_is_geometry_preserving(c0 in 1.0f64..1.8, c2 in -0.06f64..0.06, s3 in -0.04f64..0.04) {
        let s = tanh_profile();
        let c = fourier_curve(&s, c0, c2, s3, 128);
        let rd = c.redistribute(&s).unwrap();
        prop_assert!((rd.length() - c.length()).abs() < 1e-7 * c.length());
        prop_assert!((rd.area() - c.area()).abs() < 1e-7 * c.area());
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &w in rd.arc_weights() {
            lo = lo.min(w);
            hi = hi.max(w);
        }
        prop_assert!(hi / lo < 1.0 + 1e-4, "ds ratio {}", hi / lo);
    }

    #[test]
    fn orientation_reversal_flips_kappa(c0 in 1.0f64..1.8, c2 in -0.06f64..0.06) {
        let s = hyperbolic();
        let c = fourier_curve(&s, c0, c2, 0.0, 64);
        let reversed: Vec<ChartPoint<f64>> =
            (0..c.len()).rev().map(|j| c.point(j)).collect();
        let r = DiscreteCurve::new(&s, &reversed).unwrap();
        // Sample j of the reversed curve is sample n-1-j of the original.
        for j in 0..c.len() {
            let orig = c.kappas()[c.len() - 1 - j];
            prop_assert!((r.kappas()[j] + orig).abs() < 1e-9);
        }
        prop_assert!((r.area() + c.area()).abs() < 1e-10 * c.area().abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn distance_symmetry_and_triangle(
        r1 in 0.3f64..2.2,
        r2 in 0.3f64..2.2,
        r3 in 0.3f64..2.2,
        u1 in 0.0f64..6.2,
        u2 in 0.0f64..6.2,
        u3 in 0.0f64..6.2,
    ) {
        let s = tanh_profile();
        let p = Location::Point(ChartPoint::new(r1, u1).unwrap());
        let q = Location::Point(ChartPoint::new(r2, u2).unwrap());
        let w = Location::Point(ChartPoint::new(r3, u3).unwrap());
        let dpq = distance(&s, p, q).unwrap();
        let dqp = distance(&s, q, p).unwrap();
        prop_assert!((dpq - dqp).abs() < 1e-9 * dpq.max(1.0), "{dpq} vs {dqp}");
        let dqw = distance(&s, q, w).unwrap();
        let dpw = distance(&s, p, w).unwrap();
        prop_assert!(dpw <= dpq + dqw + 1e-7);
    }
}
