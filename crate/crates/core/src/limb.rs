//! Limb specifications and their analyzable form.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::screw::{make_twist_prismatic, make_twist_revolute, unit, Screw, Vec3};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JointType {
    Revolute,
    Prismatic,
}

impl JointType {
    pub fn symbol(self) -> char {
        match self {
            JointType::Revolute => 'R',
            JointType::Prismatic => 'P',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSpec {
    pub joint_type: JointType,
    pub direction: Vec3,
    /// Any point on the axis. Unused for prismatic joints.
    pub point: Vec3,
}

impl JointSpec {
    pub fn revolute(direction: Vec3, point: Vec3) -> Self {
        Self {
            joint_type: JointType::Revolute,
            direction,
            point,
        }
    }

    pub fn prismatic(direction: Vec3) -> Self {
        Self {
            joint_type: JointType::Prismatic,
            direction,
            point: Vec3::zeros(),
        }
    }

    pub fn is_revolute(&self) -> bool {
        self.joint_type == JointType::Revolute
    }

    /// Twist of this joint taken about `reference`.
    pub fn twist_about(&self, reference: &Vec3) -> Result<Screw> {
        match self.joint_type {
            JointType::Revolute => make_twist_revolute(self.direction, self.point - reference),
            JointType::Prismatic => make_twist_prismatic(self.direction),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimbSpec {
    pub joints: Vec<JointSpec>,
    pub center: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    /// Revolute axis through the center.
    A,
    /// Revolute axis missing the center.
    B,
    /// Prismatic joints do not take part in the classification.
    NotApplicable,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::A => "A",
            Category::B => "B",
            Category::NotApplicable => "-",
        })
    }
}

/// Counts of zero-pitch (revolute) and infinite-pitch (prismatic) joints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n_zero: usize,
    pub n_inf: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimbModel {
    spec: LimbSpec,
    twists: Vec<Screw>,
    signature: Signature,
    categories: Vec<Category>,
}

impl LimbModel {
    pub fn spec(&self) -> &LimbSpec {
        &self.spec
    }

    pub fn joints(&self) -> &[JointSpec] {
        &self.spec.joints
    }

    pub fn center(&self) -> Vec3 {
        self.spec.center
    }

    /// Joint twists about the limb center.
    pub fn twists(&self) -> &[Screw] {
        &self.twists
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    /// Position of joint `i` relative to the center.
    pub fn l(&self, i: usize) -> Vec3 {
        self.spec.joints[i].point - self.spec.center
    }

    /// Unit direction of joint `i`.
    pub fn s(&self, i: usize) -> Vec3 {
        if self.spec.joints[i].is_revolute() {
            self.twists[i].a()
        } else {
            self.twists[i].b()
        }
    }

    /// Same geometry re-analyzed about another center.
    pub fn with_center(&self, center: Vec3) -> Result<LimbModel> {
        build_limb(LimbSpec {
            joints: self.spec.joints.clone(),
            center,
        })
    }

    pub fn pattern(&self) -> alloc::string::String {
        self.spec
            .joints
            .iter()
            .map(|j| j.joint_type.symbol())
            .collect()
    }
}

pub fn build_limb(spec: LimbSpec) -> Result<LimbModel> {
    let n = spec.joints.len();
    if n < 3 {
        return Err(Error::TooFewJoints { count: n });
    }
    if n > 5 {
        return Err(Error::TooManyJoints { count: n });
    }
    if !spec.center.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite { what: "center" });
    }
    let twists = spec
        .joints
        .iter()
        .map(|j| j.twist_about(&spec.center))
        .collect::<Result<Vec<_>>>()?;
    let n_zero = spec.joints.iter().filter(|j| j.is_revolute()).count();
    let categories = spec
        .joints
        .iter()
        .map(|j| classify_joint_category(j, &spec.center))
        .collect();
    Ok(LimbModel {
        signature: Signature {
            n_zero,
            n_inf: n - n_zero,
        },
        spec,
        twists,
        categories,
    })
}

/// One row per joint, `[a | b]` of its twist about the limb center.
pub fn limb_twist_matrix(limb: &LimbModel) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(limb.len(), 6);
    for (i, t) in limb.twists.iter().enumerate() {
        let v = t.to_vector();
        m.set_row(i, &v.transpose());
    }
    m
}

pub fn line_point_distance(direction: &Vec3, point: &Vec3, q: &Vec3) -> f64 {
    let n = direction.norm();
    if n == 0.0 {
        return (q - point).norm();
    }
    (q - point).cross(direction).norm() / n
}

pub fn classify_joint_category(joint: &JointSpec, center: &Vec3) -> Category {
    match joint.joint_type {
        JointType::Prismatic => Category::NotApplicable,
        JointType::Revolute => {
            if line_point_distance(&joint.direction, &joint.point, center) <= tol::LINE_POINT {
                Category::A
            } else {
                Category::B
            }
        }
    }
}

/// Least-squares meeting point of the revolute axes, if they are concurrent.
///
/// Prismatic joints are skipped.
pub fn axes_common_point(joints: &[JointSpec]) -> Result<Option<Vec3>> {
    let axes: Vec<(Vec3, Vec3)> = joints
        .iter()
        .filter(|j| j.is_revolute())
        .map(|j| Ok((unit(j.direction)?, j.point)))
        .collect::<Result<_>>()?;
    if axes.len() < 2 {
        return Err(Error::NotEnoughRevolutes { count: axes.len() });
    }
    let independent = axes.iter().enumerate().any(|(i, (d, _))| {
        axes[i + 1..]
            .iter()
            .any(|(e, _)| d.cross(e).norm() > tol::NON_DEGENERATE)
    });
    if !independent {
        return Err(Error::AllParallel);
    }
    let mut lhs = Matrix3::zeros();
    let mut rhs = Vec3::zeros();
    for (d, p) in &axes {
        let proj = Matrix3::identity() - d * d.transpose();
        lhs += proj;
        rhs += proj * p;
    }
    let x = match lhs.lu().solve(&rhs) {
        Some(x) => x,
        None => return Ok(None),
    };
    let worst = axes
        .iter()
        .map(|(d, p)| line_point_distance(d, p, &x))
        .fold(0.0, f64::max);
    Ok((worst <= tol::COMMON_POINT).then_some(x))
}
