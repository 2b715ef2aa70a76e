//! Extremal convex small polygons.
//!
//! A *small* polygon has unit diameter. This crate builds the classical
//! extremal families (regular, `R⁺ₙ₋₁`, Reuleaux subdivisions, Tamvakis),
//! the `Bₙ` and `Qₙ` families for `n = 2^s`, evaluates their perimeter,
//! width, diameter and area straight from vertex coordinates, carries the
//! matching closed forms, and solves the two angle-parametrized maximal
//! perimeter problems.
//!
//! The crate is `no_std` and only needs `alloc`. Elementary functions come
//! from `libm` so results are bit-identical across platforms.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod constructions;
pub mod geometry;
pub mod math;
pub mod optimizer;

pub use bounds::{closed_form, upper_bounds, BoundSet, ClosedForm, GapKind};
pub use constructions::{
    b_family, from_angles_b, from_angles_q, q_family, regular, regular_plus, reuleaux_subdivision,
    tamvakis, AngleFamily, AngleParamB, AngleParamQ, ConstructionError,
};
pub use geometry::{
    Diameter, Family, GeometryError, GraphShape, MetricsReport, Params, Point2, Polygon,
    SmallPolygon,
};
pub use optimizer::{
    build_b_problem, build_q_problem, certify, solve, CertifyError, NlpProblem, SolveError,
    SolveReport, SolverConfig,
};

/// Tolerance used to classify a vertex pair as a diameter-graph edge.
pub const DIAMETER_TOL: f64 = 1e-9;

/// Cross products at or below this value count as collinear (non-convex).
pub const CONVEXITY_TOL: f64 = 1e-12;
