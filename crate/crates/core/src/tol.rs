//! Numerical thresholds shared by the whole crate.
//!
//! All geometry lives in a unit-scale, dimensionless workspace, so absolute
//! thresholds are meaningful.

/// Singular values below `RANK_REL * sigma_max` count as zero.
pub const RANK_REL: f64 = 1e-9;

/// Absolute floor under every relative test.
pub const ABS_FLOOR: f64 = 1e-12;

/// Distance below which a revolute axis is taken to pass through a point.
pub const LINE_POINT: f64 = 1e-9;

/// Residual allowed when intersecting several axis lines.
pub const COMMON_POINT: f64 = 1e-8;

/// Leaf predicates of the case checklists: `|a x b| <= PREDICATE` or `|a . b| <= PREDICATE`.
pub const PREDICATE: f64 = 1e-9;

/// Non-degeneracy leaves must clear this margin.
pub const NON_DEGENERATE: f64 = 1e-6;

/// Moment block norm under which a constraint wrench is a pure force.
pub const MOMENT: f64 = 1e-9;

/// Relative threshold used to classify pitch.
pub const PITCH: f64 = 1e-9;
