//! Screw-theory constraint analysis for spherical (SO(3)) parallel robots.
//!
//! The crate is `no_std` with `alloc`. Geometry is dimensionless and meant to
//! live in a unit-scale workspace, which is what makes the absolute
//! tolerances in [`tol`] meaningful.

#![no_std]

extern crate alloc;

/// The linear-algebra crate used in public signatures.
pub use nalgebra;

pub mod catalog;
pub mod checklist;
pub mod constraint;
pub mod error;
pub mod limb;
pub mod linalg;
pub mod propositions;
pub mod rate;
pub mod sample;
pub mod screw;
pub mod tol;

pub use catalog::{
    build_robot, catalog, catalog_counts, count_robots, expand_permutations, instantiate_geometry,
    verify_all, verify_variant, CatalogCounts, JointSymbol, Marker, VariantDescriptor,
    VerificationReport,
};
pub use checklist::{check_case_conditions, checklist_for, Checklist, ConditionChecklist};
pub use constraint::{
    actuation_analysis, analyze_limb, check_so3_necessary, classify_limb,
    closed_form_direction_5system, constraint_wrench_space, ActuationReport, CaseTag,
    ConstraintReport, SystemFamily, VariantClass,
};
pub use error::{Error, Result};
pub use limb::{
    axes_common_point, build_limb, classify_joint_category, limb_twist_matrix, Category, JointSpec,
    JointType, LimbModel, LimbSpec, Signature,
};
pub use propositions::{check_geometric_propositions, PropositionReport};
pub use rate::{
    assemble_extended_jacobian, block_inverse, dependent_translation, feasible_projector,
    forward_rates, platform_twist_space, project_feasible, verify_so3_platform, BlockInverse,
    JacobianBlocks, PlatformTwistSpace, PlatformVerdict, RobotModel,
};
pub use screw::{
    adjoint_transform, elliptic_polar, make_twist_prismatic, make_twist_revolute, pitch,
    reciprocal_product, PitchClass, RigidTransform, Screw, ScrewKind, Vec3,
};
