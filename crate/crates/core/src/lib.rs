//! Frank-Wolfe algorithms for maximizing `F(x) = G(x) + C(x)`, where G is a
//! non-negative smooth DR-submodular function and C a smooth concave one,
//! over convex bodies with a linear maximization oracle.
//!
//! * [`problem`]: points, oracle traits, the weighted objective pair and
//!   solver reports.
//! * [`objectives`]: quadratic, softmax-extension, similarity, D-optimal and
//!   log-barrier objectives, the non-oblivious surrogate, and seeded
//!   instance generators.
//! * [`regions`]: boxes, cardinality bodies and packing polytopes.
//! * [`solvers`]: greedy, measured-greedy, gradient-combining and
//!   non-oblivious Frank-Wolfe, plus classic Frank-Wolfe and projected
//!   gradient ascent.
//! * [`verify`]: finite differences, structural probes, a grid maximizer and
//!   guarantee-bound checks.
//! * [`bench`]: experiment runners, the instance text format, CSV and SVG
//!   output.

pub mod bench;
pub mod error;
pub mod linalg;
pub mod objectives;
pub mod problem;
pub mod regions;
pub mod rng;
pub mod solvers;
pub mod tolerances;
pub mod vecops;
pub mod verify;

pub use error::{Error, Result};
pub use problem::{
    evaluate_f, gradient_f, Objective, ObjectiveFlags, ObjectivePair, OracleCounts, Point,
    ProblemInstance, SharedObjective, SolverReport,
};
pub use regions::{FeasibleRegion, LmoResult, PolytopeData, RegionKind};
pub use solvers::{Algorithm, SolverConfig};
