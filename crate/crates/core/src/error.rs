use alloc::boxed::Box;
use alloc::string::String;

use crate::screw::ScrewKind;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("direction vector has zero length")]
    ZeroDirection,

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("expected a {expected} screw, got a {found}")]
    KindMismatch {
        expected: ScrewKind,
        found: ScrewKind,
    },

    #[error("screw has both blocks zero")]
    DegenerateScrew,

    #[error("rotation matrix is not orthonormal with determinant +1")]
    InvalidRotation,

    #[error("limb has {count} joints, at least 3 are required")]
    TooFewJoints { count: usize },

    #[error("limb has {count} joints, at most 5 are supported")]
    TooManyJoints { count: usize },

    #[error("at least two revolute joints are required, found {count}")]
    NotEnoughRevolutes { count: usize },

    #[error("all revolute axes are parallel")]
    AllParallel,

    #[error("closed form needs a 5-revolute limb, signature is ({n_zero}, {n_inf})")]
    NotFiveSystem { n_zero: usize, n_inf: usize },

    #[error("limb does not match the descriptor: {reason}")]
    SystemMismatch { reason: String },

    #[error("joint index {index} is out of range for a {len}-joint limb")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("joint {index} has no unique actuation wrench")]
    NoUniqueActuationWrench { index: usize },

    #[error("limb {limb}: {source}")]
    SingularLimb {
        limb: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("block A = G_av^T is singular")]
    SingularA,

    #[error("Schur complement D - C A^-1 B is singular")]
    SingularSchur,

    #[error("extended Jacobian G^T is singular")]
    SingularJacobian,

    #[error("block inverse needs 3 actuation and 3 constraint columns, got {actuators} and {constraints}")]
    NotSquare {
        actuators: usize,
        constraints: usize,
    },

    #[error("a robot needs at least 3 limbs, got {count}")]
    TooFewLimbs { count: usize },

    #[error("expected one actuated joint per limb ({limbs} limbs), got {actuated}")]
    ActuatorCount { limbs: usize, actuated: usize },

    #[error("limb {limb} is not expressed about the robot center")]
    CenterMismatch { limb: usize },

    #[error("gave up after {attempts} resampling attempts")]
    ExhaustedResampling { attempts: usize },

    #[error("descriptor `{id}` is a redundant limb and cannot be assembled into a robot")]
    RedundantDescriptor { id: String },

    #[error("invalid descriptor id `{input}`: {reason}")]
    InvalidDescriptor { input: String, reason: String },
}
