//! Caustics, level surfaces, Maxwell-Klein sets and their pre-images.
//!
//! Symbolic objects are exact polynomials in the initial coordinates, the
//! spatial coordinates, the caustic parameter `lam` and time `t`. Sampled
//! checks evaluate them in floating point with explicit tolerances.

mod caustic;
mod checks;
mod doublepoints;
mod export;
mod hotcool;
mod level;
mod maxwell;
mod perestroika;
mod rational;

pub use caustic::{compute_caustic, CausticData, LAMBDA};
pub use checks::{cusp_and_normal_checks, CheckConfig, CheckReport, CheckResult};
pub use doublepoints::{
    complex_double_points, complex_double_points_in, ComplexDoublePoint, DoublePointWindow, DoublePointsResult,
};
pub use export::{export_curves, Curve, CurveKind, CurvePoint, CurveSet, ExportOptions};
pub use hotcool::{deflate, hot_cool, hot_cool_boundaries, BoundarySource, Deflation, HotCoolBoundary, HotCoolLabel, Label};
pub use level::{double_point_gcd, level_surface, level_surface_symbolic};
pub use maxwell::{
    classify_b_point, factorisation_holds, maxwell_klein, pre_maxwell, BPointClass, MaxwellKleinData, NodeKind, PreMaxwell,
};
pub use perestroika::{perestroika_detect, perestroika_polynomials, PerestroikaPoint};
pub use rational::{on_curve, reduce_fraction, substitute_rational, CompiledCurve, RationalCurve};

use thiserror::Error;

use crate::action::ActionError;
use crate::polyalg::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("operation requires dimension {required}, got {got}")]
    Dimension { required: usize, got: usize },
    #[error("pre-caustic equation does not determine `{0}`")]
    PreCausticDegenerate(String),
    #[error("the two caustic parameterisations disagree")]
    RouteMismatch,
    #[error("deflation by (x0 - lam)^3 left a nonzero remainder")]
    Deflation,
    #[error("fewer than two critical points: reduced action has degree {0} in x0")]
    FewCriticalPoints(u32),
    #[error("reduced action has degree {0} in x0, at least 4 required")]
    DegreeTooLow(u32),
    #[error("C_t^3 does not divide the double discriminant (found exponent {0})")]
    CausticExponent(u32),
    #[error("residual factor is not a perfect square; obstruction: {0}")]
    NotSquare(String),
    #[error("(x0 - xc)^2 does not divide the pre-Maxwell numerator")]
    PreMaxwellDivision,
    #[error("time must be positive, got {0}")]
    Time(f64),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
