//! Plücker screw algebra.
//!
//! A [`Screw`] is a pair of 3-vectors tagged as a twist or a wrench:
//!
//! * twist: `a` is the angular block, `b` the linear block,
//! * wrench: `a` is the force block, `b` the moment block.
//!
//! Moment-type blocks follow the row convention `s x l`: a revolute axis with
//! unit direction `s` through a point `l` (relative to the reference point)
//! has linear block `s x l`, and a force `f` through `p` has moment `f x p`.
//! Using the same orientation for both kinds keeps the Klein pairing
//! consistent (it is the physical power up to a global sign), and lets one
//! 6x6 matrix transform twists and wrenches alike.

use core::fmt;

use nalgebra::{Matrix3, Matrix6, Rotation3, Unit, Vector6};

use crate::error::{Error, Result};
use crate::tol;

pub type Vec3 = nalgebra::Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScrewKind {
    Twist,
    Wrench,
}

impl ScrewKind {
    pub fn dual(self) -> Self {
        match self {
            ScrewKind::Twist => ScrewKind::Wrench,
            ScrewKind::Wrench => ScrewKind::Twist,
        }
    }
}

impl fmt::Display for ScrewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScrewKind::Twist => f.write_str("twist"),
            ScrewKind::Wrench => f.write_str("wrench"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Screw {
    a: Vec3,
    b: Vec3,
    kind: ScrewKind,
}

impl Screw {
    /// Builds a screw from raw blocks. Both blocks zero is rejected.
    pub fn new(kind: ScrewKind, a: Vec3, b: Vec3) -> Result<Self> {
        if !(a.iter().chain(b.iter()).all(|x| x.is_finite())) {
            return Err(Error::NonFinite { what: "screw" });
        }
        if a.norm() <= tol::ABS_FLOOR && b.norm() <= tol::ABS_FLOOR {
            return Err(Error::DegenerateScrew);
        }
        Ok(Self { a, b, kind })
    }

    pub fn twist(angular: Vec3, linear: Vec3) -> Result<Self> {
        Self::new(ScrewKind::Twist, angular, linear)
    }

    pub fn wrench(force: Vec3, moment: Vec3) -> Result<Self> {
        Self::new(ScrewKind::Wrench, force, moment)
    }

    /// Unit force along `direction` acting on the line through `point`.
    pub fn force_through(direction: Vec3, point: Vec3) -> Result<Self> {
        let f = unit(direction)?;
        Self::wrench(f, f.cross(&point))
    }

    /// Stacks the blocks as `[a; b]`.
    pub fn from_vector(kind: ScrewKind, v: &Vector6<f64>) -> Result<Self> {
        Self::new(
            kind,
            v.fixed_rows::<3>(0).into(),
            v.fixed_rows::<3>(3).into(),
        )
    }

    pub fn a(&self) -> Vec3 {
        self.a
    }

    pub fn b(&self) -> Vec3 {
        self.b
    }

    pub fn kind(&self) -> ScrewKind {
        self.kind
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        let mut v = Vector6::zeros();
        v.fixed_rows_mut::<3>(0).copy_from(&self.a);
        v.fixed_rows_mut::<3>(3).copy_from(&self.b);
        v
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.a.norm_squared() + self.b.norm_squared())
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
            kind: self.kind,
        }
    }
}

pub(crate) fn unit(v: Vec3) -> Result<Vec3> {
    if !v.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite { what: "direction" });
    }
    let n = v.norm();
    if n <= tol::ABS_FLOOR {
        return Err(Error::ZeroDirection);
    }
    Ok(v / n)
}

/// Twist of a revolute joint: `[s | s x point]` with `s` the unit direction.
pub fn make_twist_revolute(direction: Vec3, point_on_axis: Vec3) -> Result<Screw> {
    let s = unit(direction)?;
    if !point_on_axis.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite { what: "axis point" });
    }
    Screw::twist(s, s.cross(&point_on_axis))
}

/// Twist of a prismatic joint: `[0 | s]`.
pub fn make_twist_prismatic(direction: Vec3) -> Result<Screw> {
    let s = unit(direction)?;
    Screw::twist(Vec3::zeros(), s)
}

/// Klein pairing `t.a . w.b + t.b . w.a`; zero when the wrench does no work on the twist.
pub fn reciprocal_product(t: &Screw, w: &Screw) -> Result<f64> {
    if t.kind != ScrewKind::Twist {
        return Err(Error::KindMismatch {
            expected: ScrewKind::Twist,
            found: t.kind,
        });
    }
    if w.kind != ScrewKind::Wrench {
        return Err(Error::KindMismatch {
            expected: ScrewKind::Wrench,
            found: w.kind,
        });
    }
    Ok(klein(&t.to_vector(), &w.to_vector()))
}

pub(crate) fn klein(x: &Vector6<f64>, y: &Vector6<f64>) -> f64 {
    x.fixed_rows::<3>(0).dot(&y.fixed_rows::<3>(3))
        + x.fixed_rows::<3>(3).dot(&y.fixed_rows::<3>(0))
}

/// Swaps the blocks and toggles the kind: `[0 | s]` twist becomes `[s | 0]` wrench.
pub fn elliptic_polar(s: &Screw) -> Screw {
    Screw {
        a: s.b,
        b: s.a,
        kind: s.kind.dual(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PitchClass {
    ZeroPitch,
    FinitePitch(f64),
    InfinitePitch,
}

impl PitchClass {
    /// Numeric pitch; `None` for infinite pitch.
    pub fn value(&self) -> Option<f64> {
        match *self {
            PitchClass::ZeroPitch => Some(0.0),
            PitchClass::FinitePitch(h) => Some(h),
            PitchClass::InfinitePitch => None,
        }
    }
}

pub fn pitch(s: &Screw) -> Result<PitchClass> {
    let na = s.a.norm();
    let nb = s.b.norm();
    if na <= tol::ABS_FLOOR && nb <= tol::ABS_FLOOR {
        return Err(Error::DegenerateScrew);
    }
    if na <= tol::PITCH * nb {
        return Ok(PitchClass::InfinitePitch);
    }
    let h = s.a.dot(&s.b) / (na * na);
    // relative to the screw's own scale so that unnormalized screws classify alike
    if libm::fabs(h) <= tol::PITCH * (1.0 + nb / na) {
        Ok(PitchClass::ZeroPitch)
    } else {
        Ok(PitchClass::FinitePitch(h))
    }
}

/// Proper rigid motion `x -> R x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    rotation: Matrix3<f64>,
    translation: Vec3,
}

impl RigidTransform {
    pub fn new(rotation: Matrix3<f64>, translation: Vec3) -> Result<Self> {
        if !(rotation
            .iter()
            .chain(translation.iter())
            .all(|x| x.is_finite()))
        {
            return Err(Error::NonFinite { what: "transform" });
        }
        let ortho = (rotation.transpose() * rotation - Matrix3::identity()).amax();
        if ortho > 1e-9 || libm::fabs(rotation.determinant() - 1.0) > 1e-9 {
            return Err(Error::InvalidRotation);
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64, translation: Vec3) -> Result<Self> {
        let axis = Unit::new_normalize(unit(axis)?);
        Ok(Self {
            rotation: Rotation3::from_axis_angle(&axis, angle).into_inner(),
            translation,
        })
    }

    /// Rotation by `angle` about the line through `point` along `axis`.
    pub fn rotation_about_line(axis: Vec3, point: Vec3, angle: f64) -> Result<Self> {
        let r = Self::from_axis_angle(axis, angle, Vec3::zeros())?;
        Ok(Self {
            translation: point - r.rotation * point,
            ..r
        })
    }

    pub fn translation_along(direction: Vec3, distance: f64) -> Result<Self> {
        Ok(Self {
            rotation: Matrix3::identity(),
            translation: unit(direction)? * distance,
        })
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    pub fn apply_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn apply_direction(&self, d: &Vec3) -> Vec3 {
        self.rotation * d
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// The 6x6 action `[[R, 0], [-[t]x R, R]]` on `[a; b]` stacked screws.
    pub fn adjoint(&self) -> Matrix6<f64> {
        let r = self.rotation;
        let tx = self.translation.cross_matrix();
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&r);
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-(tx * r)));
        m
    }
}

/// Re-expresses a screw after moving the body by `x`.
///
/// With the shared `s x l` moment orientation the same matrix acts on twists
/// and wrenches, and the Klein pairing between them is preserved.
pub fn adjoint_transform(x: &RigidTransform, s: &Screw) -> Screw {
    let v = x.adjoint() * s.to_vector();
    Screw {
        a: v.fixed_rows::<3>(0).into(),
        b: v.fixed_rows::<3>(3).into(),
        kind: s.kind,
    }
}
