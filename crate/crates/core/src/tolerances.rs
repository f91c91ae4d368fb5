//! Numerical tolerances shared by the solvers, the verification harness and
//! the acceptance suite. Every threshold lives here so that tests and library
//! code agree on one value.

/// Slack used by `FeasibleRegion::contains` for LMO vertices and iterates.
pub const MEMBERSHIP: f64 = 1e-9;

/// Looser membership slack for accumulated solver trajectories.
pub const TRAJECTORY_MEMBERSHIP: f64 = 1e-8;

/// Relative error allowed between closed-form and finite-difference gradients.
pub const GRADIENT_CHECK: f64 = 1e-4;

/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Absolute slack added to every approximation-guarantee bound.
pub const BOUND_SLACK: f64 = 1e-6;

/// Pivot tolerance of the dense simplex method.
pub const PIVOT: f64 = 1e-9;

/// Symmetry tolerance for matrices (max-abs of H - H^T).
pub const SYMMETRY: f64 = 1e-12;

/// Eigenvalues in [-PSD_CLAMP, 0) are treated as zero when assembling kernels.
pub const PSD_CLAMP: f64 = 1e-9;

/// Determinants at or below this magnitude are treated as singular.
pub const SINGULAR_DET: f64 = 1e-300;

/// Bisection tolerance for the capped-simplex projection shift.
pub const PROJECTION_BISECTION: f64 = 1e-10;

/// Iterate cap slack for the measured-greedy coordinate bound.
pub const MEASURED_CAP: f64 = 1e-12;

/// Antitone-gradient tolerance for DR-submodularity probes.
pub const DR_CHECK: f64 = 1e-8;

/// Concavity-probe tolerance.
pub const CONCAVITY_CHECK: f64 = 1e-9;

/// Multiplier applied to the empirical Lipschitz ratio.
pub const SMOOTHNESS_INFLATION: f64 = 1.5;

/// Bundle of the tolerances above, for callers that want to override some.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub membership: f64,
    pub gradient_check: f64,
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            membership: MEMBERSHIP,
            gradient_check: GRADIENT_CHECK,
            bound_slack: BOUND_SLACK,
        }
    }
}
