//! Stochastic turbulence: the ζ process of real turbulence, the resultant η
//! process of complex turbulence, and recurrence statistics over seeded
//! Brownian ensembles.

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::polyalg::PolyError;

mod brownian;
mod eta;
mod stats;
mod zeros;
mod zeta;

pub use brownian::BrownianScenario;
pub use eta::{eta_at, eta_factorised, eta_process, eta_resultant, rational_time, EtaProcess, EtaZero};
pub use stats::{
    exchangeability_test, recurrence_stats, stats_csv, ChiSquareTest, HorizonStats, ZetaEnsemble, MIN_PATHS,
};
pub use zeros::{detect_zeros, ProcessTag, ZeroCrossingRecord};
pub use zeta::{
    branch_zeros, zeta_ddim, zeta_orthogonal, zeta_orthogonal_values, BranchEvent, BranchEventKind, ProcessSample,
    SampledProcess, ZetaDdimConfig, ZetaSystem, ZETA_GRAZE_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TurbulenceError {
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("path dimension {0} is not supported (expected 1, 2 or 3)")]
    Dimension(usize),
    #[error("path values must have equal length of at least 2")]
    PathShape,
    #[error("path has {path} components but the data is {data}-dimensional")]
    PathDimension { path: usize, data: usize },
    #[error("search window needs one interval per caustic parameter")]
    Window,
    #[error("resultant of f''' and f'''' vanishes identically (repeated-root family)")]
    EtaDegenerate,
    #[error("recurrence statistics need at least 100 paths, got {0}")]
    TooFewPaths(usize),
    #[error("statistics: {0}")]
    Statistics(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
