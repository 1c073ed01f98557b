//! Constraint wrenches, restriction twists and the SO(3) necessary condition.
//!
//! The twist matrix `M` of a limb has one row `[s | s x l]` per joint. A
//! vector `x = (x_a, x_b)` in its kernel pairs to zero with every joint
//! twist when read as the wrench `(force = x_b, moment = x_a)`, so the kernel
//! is the restriction-twist space and its block swap is the constraint
//! wrench space.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, DVector, Vector6};

use crate::error::{Error, Result};
use crate::limb::{limb_twist_matrix, Category, JointType, LimbModel, Signature};
use crate::linalg::{self, SortedSvd};
use crate::screw::{elliptic_polar, klein, Screw, ScrewKind, Vec3};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemFamily {
    S5_0,
    S4_0_1inf,
    S3_0_2inf,
    S4_0,
    S3_0_1inf,
    S3_0,
    Other,
}

impl SystemFamily {
    pub const TABLE: [SystemFamily; 6] = [
        SystemFamily::S5_0,
        SystemFamily::S4_0_1inf,
        SystemFamily::S3_0_2inf,
        SystemFamily::S4_0,
        SystemFamily::S3_0_1inf,
        SystemFamily::S3_0,
    ];

    pub fn from_signature(sig: Signature) -> Self {
        match (sig.n_zero, sig.n_inf) {
            (5, 0) => SystemFamily::S5_0,
            (4, 1) => SystemFamily::S4_0_1inf,
            (3, 2) => SystemFamily::S3_0_2inf,
            (4, 0) => SystemFamily::S4_0,
            (3, 1) => SystemFamily::S3_0_1inf,
            (3, 0) => SystemFamily::S3_0,
            _ => SystemFamily::Other,
        }
    }

    /// `(n_zero, n_inf)` joint counts; `None` for `Other`.
    pub fn signature(self) -> Option<Signature> {
        let (n_zero, n_inf) = match self {
            SystemFamily::S5_0 => (5, 0),
            SystemFamily::S4_0_1inf => (4, 1),
            SystemFamily::S3_0_2inf => (3, 2),
            SystemFamily::S4_0 => (4, 0),
            SystemFamily::S3_0_1inf => (3, 1),
            SystemFamily::S3_0 => (3, 0),
            SystemFamily::Other => return None,
        };
        Some(Signature { n_zero, n_inf })
    }

    /// Rank of the joint-twist matrix for a valid limb of this family.
    pub fn expected_rank(self) -> Option<usize> {
        match self {
            SystemFamily::S5_0 | SystemFamily::S4_0_1inf | SystemFamily::S3_0_2inf => Some(5),
            // four axes through one point only span the three rotations
            SystemFamily::S4_0 => Some(3),
            SystemFamily::S3_0_1inf => Some(4),
            SystemFamily::S3_0 => Some(3),
            SystemFamily::Other => None,
        }
    }

    /// Label as written in the catalog table.
    pub fn label(self) -> &'static str {
        match self {
            SystemFamily::S5_0 => "5$0",
            SystemFamily::S4_0_1inf => "4$0-1$∞",
            SystemFamily::S3_0_2inf => "3$0-2$∞",
            SystemFamily::S4_0 => "4$0",
            SystemFamily::S3_0_1inf => "3$0-1$∞",
            SystemFamily::S3_0 => "3$0",
            SystemFamily::Other => "other",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            SystemFamily::S5_0 => "S5_0",
            SystemFamily::S4_0_1inf => "S4_0_1inf",
            SystemFamily::S3_0_2inf => "S3_0_2inf",
            SystemFamily::S4_0 => "S4_0",
            SystemFamily::S3_0_1inf => "S3_0_1inf",
            SystemFamily::S3_0 => "S3_0",
            SystemFamily::Other => "Other",
        }
    }

    /// Accepts either the key or the table label (`$inf` may stand for `$∞`).
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim().replace("inf", "∞").replace(' ', "");
        [
            SystemFamily::S5_0,
            SystemFamily::S4_0_1inf,
            SystemFamily::S3_0_2inf,
            SystemFamily::S4_0,
            SystemFamily::S3_0_1inf,
            SystemFamily::S3_0,
            SystemFamily::Other,
        ]
        .into_iter()
        .find(|f| f.key() == s.trim() || f.label() == t)
    }
}

impl fmt::Display for SystemFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    CaseI,
    CaseII,
    NotApplicable,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::CaseI => "I",
            CaseTag::CaseII => "II",
            CaseTag::NotApplicable => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariantClass {
    pub system: SystemFamily,
    pub case_tag: CaseTag,
}

impl fmt::Display for VariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case_tag {
            CaseTag::NotApplicable => write!(f, "{}", self.system),
            c => write!(f, "{} case {}", self.system, c),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub constraint_wrenches: Vec<Screw>,
    pub restriction_twists: Vec<Screw>,
    pub rank: usize,
    /// Rank of the direction block of the twist matrix.
    pub rank_c1: usize,
    /// Rank of the moment block of the twist matrix.
    pub rank_c2: usize,
    pub so3_necessary: bool,
    pub redundant: bool,
    pub classification: VariantClass,
    /// Largest moment-block norm among the unit constraint wrenches.
    pub max_moment: f64,
    pub diagnostics: Vec<String>,
}

fn wrench_from_kernel(x: &DVector<f64>) -> Screw {
    let v = Vector6::from_iterator(x.iter().copied());
    let twist = Screw::from_vector(ScrewKind::Twist, &v).expect("kernel vectors have unit norm");
    elliptic_polar(&twist)
}

/// Orthonormal basis of the wrenches reciprocal to every joint twist.
pub fn constraint_wrench_space(limb: &LimbModel) -> Vec<Screw> {
    let svd = SortedSvd::new(&limb_twist_matrix(limb));
    // canonicalize in wrench order so reports read naturally
    svd.nullspace()
        .into_iter()
        .map(|x| {
            let w = wrench_from_kernel(&x);
            let c = linalg::canonicalize(DVector::from_iterator(6, w.to_vector().iter().copied()));
            Screw::from_vector(
                ScrewKind::Wrench,
                &Vector6::from_iterator(c.iter().copied()),
            )
            .expect("unit norm")
        })
        .collect()
}

pub fn restriction_twists(wrenches: &[Screw]) -> Vec<Screw> {
    wrenches.iter().map(elliptic_polar).collect()
}

/// Closed-form force direction of the single constraint wrench of a 5R limb.
///
/// Expanding the 5x6 kernel by cofactors along the direction columns gives,
/// with `m_i = l_i x s_i`,
///
/// `x_b = sum_T sign(T) det[s_T] (m_a x m_b)`
///
/// over the ten 3-subsets `T` of the joints, `{a, b}` being the other two.
/// The result is unscaled and vanishes when the limb is not a 5-system.
pub fn closed_form_direction_5system(limb: &LimbModel) -> Result<Vec3> {
    let sig = limb.signature();
    if sig.n_zero != 5 || sig.n_inf != 0 {
        return Err(Error::NotFiveSystem {
            n_zero: sig.n_zero,
            n_inf: sig.n_inf,
        });
    }
    let s: Vec<Vec3> = (0..5).map(|i| limb.s(i)).collect();
    let m: Vec<Vec3> = (0..5).map(|i| limb.l(i).cross(&s[i])).collect();
    let mut out = Vec3::zeros();
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let rest: Vec<usize> = (0..5).filter(|&q| q != i && q != j && q != k).collect();
                let (a, b) = (rest[0], rest[1]);
                let det = s[i].dot(&s[j].cross(&s[k]));
                let sign = if (i + j + k + 3) % 2 == 0 { 1.0 } else { -1.0 };
                out += m[a].cross(&m[b]) * (sign * det);
            }
        }
    }
    Ok(out)
}

fn max_moment(wrenches: &[Screw]) -> f64 {
    wrenches.iter().map(|w| w.b().norm()).fold(0.0, f64::max)
}

fn necessary_from(wrenches: &[Screw]) -> bool {
    (1..=3).contains(&wrenches.len()) && max_moment(wrenches) <= tol::MOMENT
}

/// Every constraint wrench is a pure force through the center and the limb
/// keeps at least three degrees of freedom.
pub fn check_so3_necessary(limb: &LimbModel) -> bool {
    necessary_from(&constraint_wrench_space(limb))
}

fn parallel(a: &Vec3, b: &Vec3) -> bool {
    a.cross(b).norm() <= tol::PREDICATE * a.norm().max(1.0) * b.norm().max(1.0)
}

/// Size of the largest group made of mutually parallel off-center revolutes
/// plus the prismatic joints orthogonal to them.
fn largest_parallel_group(limb: &LimbModel) -> usize {
    let joints = limb.joints();
    let cats = limb.categories();
    let mut best = 0;
    for i in 0..joints.len() {
        if cats[i] != Category::B {
            continue;
        }
        let d = limb.s(i);
        let count = (0..joints.len())
            .filter(|&j| match joints[j].joint_type {
                JointType::Revolute => cats[j] == Category::B && parallel(&d, &limb.s(j)),
                JointType::Prismatic => libm::fabs(d.dot(&limb.s(j))) <= tol::PREDICATE,
            })
            .count();
        best = best.max(count);
    }
    best
}

pub fn is_redundant(limb: &LimbModel) -> bool {
    limb.categories()
        .iter()
        .filter(|c| **c == Category::A)
        .count()
        >= 4
}

pub fn classify_limb(limb: &LimbModel) -> VariantClass {
    let system = SystemFamily::from_signature(limb.signature());
    let case_tag = match system {
        SystemFamily::S5_0 | SystemFamily::S4_0_1inf | SystemFamily::S3_0_2inf => {
            if largest_parallel_group(limb) >= 3 {
                CaseTag::CaseII
            } else {
                CaseTag::CaseI
            }
        }
        SystemFamily::S4_0 | SystemFamily::S3_0 => CaseTag::CaseI,
        SystemFamily::S3_0_1inf => CaseTag::CaseII,
        SystemFamily::Other => CaseTag::NotApplicable,
    };
    VariantClass { system, case_tag }
}

pub fn analyze_limb(limb: &LimbModel) -> ConstraintReport {
    let m = limb_twist_matrix(limb);
    let rank = linalg::rank(&m);
    let rank_c1 = linalg::rank(&m.columns(0, 3).into_owned());
    let rank_c2 = linalg::rank(&m.columns(3, 3).into_owned());
    let constraint_wrenches = constraint_wrench_space(limb);
    let restriction_twists = restriction_twists(&constraint_wrenches);
    let classification = classify_limb(limb);
    let redundant = is_redundant(limb);
    let max_moment = max_moment(&constraint_wrenches);
    let so3_necessary = necessary_from(&constraint_wrenches);

    let mut diagnostics = Vec::new();
    let n_a = limb
        .categories()
        .iter()
        .filter(|c| **c == Category::A)
        .count();
    if n_a >= 4 {
        diagnostics.push(format!("{n_a} axes through the center: redundant limb"));
    }
    if let Some(expected) = classification.system.expected_rank() {
        if rank != expected {
            diagnostics.push(format!("twist rank {rank}, family expects {expected}"));
        }
    }
    if constraint_wrenches.is_empty() {
        diagnostics.push(String::from("no constraint wrench: limb is unconstrained"));
    } else if constraint_wrenches.len() > 3 {
        diagnostics.push(format!(
            "{} constraint wrenches: fewer than three degrees of freedom",
            constraint_wrenches.len()
        ));
    }
    if max_moment > tol::MOMENT {
        diagnostics.push(String::from(
            "constraint wrench misses the center (restriction twist has finite pitch)",
        ));
    }
    ConstraintReport {
        constraint_wrenches,
        restriction_twists,
        rank,
        rank_c1,
        rank_c2,
        so3_necessary,
        redundant,
        classification,
        max_moment,
        diagnostics,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActuationReport {
    pub index: usize,
    /// Scaled so that its pairing with the actuated joint twist is one.
    pub wrench: Screw,
    pub g_av_zero: bool,
}

impl ActuationReport {
    pub fn force(&self) -> Vec3 {
        self.wrench.a()
    }

    pub fn moment(&self) -> Vec3 {
        self.wrench.b()
    }
}

/// The wrench that transmits the actuated joint's effort to the platform.
///
/// It is reciprocal to every other joint twist, works on the actuated one,
/// and is taken orthogonal to the constraint wrenches so it is unique.
pub fn actuation_analysis(limb: &LimbModel, actuated_index: usize) -> Result<ActuationReport> {
    let n = limb.len();
    if actuated_index >= n {
        return Err(Error::IndexOutOfRange {
            index: actuated_index,
            len: n,
        });
    }
    let m = limb_twist_matrix(limb);
    let full = SortedSvd::new(&m);
    let rows: Vec<usize> = (0..n).filter(|&i| i != actuated_index).collect();
    let reduced = m.select_rows(rows.iter());
    let red = SortedSvd::new(&reduced);
    if red.rank() == full.rank() {
        return Err(Error::NoUniqueActuationWrench {
            index: actuated_index,
        });
    }
    // kernel vectors in twist order; orthogonality is the same in either order
    let w_basis = full.nullspace();
    let mut k = DMatrix::from_columns(&red.nullspace());
    for w in &w_basis {
        let coeffs = w.transpose() * &k;
        k -= w * coeffs;
    }
    let top = SortedSvd::new(&k);
    let x: DVector<f64> = top.u.column(0).into_owned();
    let t = limb.twists()[actuated_index].to_vector();
    let xv = Vector6::from_iterator(x.iter().copied());
    // pairing of joint twist with wrench (x_b, x_a) is the plain dot with x
    let p = t.dot(&xv);
    if libm::fabs(p) <= tol::NON_DEGENERATE {
        return Err(Error::NoUniqueActuationWrench {
            index: actuated_index,
        });
    }
    let wrench = wrench_from_kernel(&x).scaled(1.0 / p);
    debug_assert!(libm::fabs(klein(&t, &wrench.to_vector()) - 1.0) < 1e-9);
    let g_av_zero = wrench.a().norm() <= tol::MOMENT * wrench.norm();
    Ok(ActuationReport {
        index: actuated_index,
        wrench,
        g_av_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limb::{build_limb, JointSpec, LimbSpec};
    use crate::screw::reciprocal_product;

    fn limb(joints: Vec<JointSpec>) -> LimbModel {
        build_limb(LimbSpec {
            joints,
            center: Vec3::zeros(),
        })
        .unwrap()
    }

    fn spherical() -> LimbModel {
        limb(alloc::vec![
            JointSpec::revolute(Vec3::x(), Vec3::zeros()),
            JointSpec::revolute(Vec3::y(), Vec3::zeros()),
            JointSpec::revolute(Vec3::z(), Vec3::zeros()),
        ])
    }

    #[test]
    fn spherical_limb_transmits_three_central_forces() {
        let l = spherical();
        let ws = constraint_wrench_space(&l);
        assert_eq!(ws.len(), 3);
        for w in &ws {
            assert_eq!(w.kind(), ScrewKind::Wrench);
            assert!(w.b().norm() < 1e-15);
        }
        let forces = nalgebra::Matrix3::from_columns(&[ws[0].a(), ws[1].a(), ws[2].a()]);
        assert!(forces.determinant().abs() > 0.5);
        assert!(check_so3_necessary(&l));
    }

    #[test]
    fn three_prismatic_limb_transmits_pure_moments() {
        let l = limb(alloc::vec![
            JointSpec::prismatic(Vec3::x()),
            JointSpec::prismatic(Vec3::y()),
            JointSpec::prismatic(Vec3::z()),
        ]);
        let ws = constraint_wrench_space(&l);
        assert_eq!(ws.len(), 3);
        for w in &ws {
            assert!(w.a().norm() < 1e-15);
        }
        assert!(!check_so3_necessary(&l));
    }

    #[test]
    fn restriction_twists_are_block_swaps() {
        let r = analyze_limb(&spherical());
        for (w, t) in r.constraint_wrenches.iter().zip(&r.restriction_twists) {
            assert_eq!(t.a(), w.b());
            assert_eq!(t.b(), w.a());
            assert_eq!(t.kind(), ScrewKind::Twist);
        }
        assert_eq!(r.rank + r.constraint_wrenches.len(), 6);
        assert_eq!((r.rank_c1, r.rank_c2), (3, 0));
    }

    #[test]
    fn four_parallel_axes_give_zero_direction() {
        let d = Vec3::new(0.2, -0.3, 0.9);
        let l = limb(alloc::vec![
            JointSpec::revolute(d, Vec3::new(0.1, 0.5, 0.0)),
            JointSpec::revolute(d, Vec3::new(-0.4, 0.2, 0.3)),
            JointSpec::revolute(d, Vec3::new(0.7, -0.1, 0.2)),
            JointSpec::revolute(d, Vec3::new(0.3, 0.3, -0.6)),
            JointSpec::revolute(Vec3::x(), Vec3::new(0.0, 0.4, 0.1)),
        ]);
        assert!(closed_form_direction_5system(&l).unwrap().norm() < 1e-14);
    }

    #[test]
    fn closed_form_needs_five_revolutes() {
        assert_eq!(
            closed_form_direction_5system(&spherical()),
            Err(Error::NotFiveSystem {
                n_zero: 3,
                n_inf: 0
            })
        );
    }

    #[test]
    fn classification_examples() {
        let four = limb(alloc::vec![
            JointSpec::revolute(Vec3::x(), Vec3::zeros()),
            JointSpec::revolute(Vec3::y(), Vec3::zeros()),
            JointSpec::revolute(Vec3::z(), Vec3::zeros()),
            JointSpec::revolute(Vec3::new(1.0, 1.0, 0.0), Vec3::zeros()),
        ]);
        let r = analyze_limb(&four);
        assert_eq!(
            r.classification,
            VariantClass {
                system: SystemFamily::S4_0,
                case_tag: CaseTag::CaseI
            }
        );
        assert!(r.redundant);

        let rrrpp = limb(alloc::vec![
            JointSpec::revolute(Vec3::x(), Vec3::zeros()),
            JointSpec::revolute(Vec3::y(), Vec3::zeros()),
            JointSpec::revolute(Vec3::z(), Vec3::zeros()),
            JointSpec::prismatic(Vec3::new(0.3, 0.1, 1.0)),
            JointSpec::prismatic(Vec3::new(-0.5, 1.0, 0.2)),
        ]);
        assert_eq!(
            classify_limb(&rrrpp),
            VariantClass {
                system: SystemFamily::S3_0_2inf,
                case_tag: CaseTag::CaseI
            }
        );
        assert_eq!(
            classify_limb(&spherical()),
            VariantClass {
                system: SystemFamily::S3_0,
                case_tag: CaseTag::CaseI
            }
        );
        assert!(!analyze_limb(&spherical()).redundant);
    }

    #[test]
    fn family_labels_parse_back() {
        for f in SystemFamily::TABLE {
            assert_eq!(SystemFamily::parse(f.label()), Some(f));
            assert_eq!(SystemFamily::parse(f.key()), Some(f));
        }
        assert_eq!(
            SystemFamily::parse("4$0-1$inf"),
            Some(SystemFamily::S4_0_1inf)
        );
    }

    #[test]
    fn actuation_of_spherical_limb_is_a_pure_moment() {
        let l = spherical();
        let a = actuation_analysis(&l, 0).unwrap();
        assert!(a.g_av_zero);
        assert!(a.force().norm() < 1e-12);
        let t = l.twists()[0];
        assert!((reciprocal_product(&t, &a.wrench).unwrap() - 1.0).abs() < 1e-12);
        for t in &l.twists()[1..] {
            assert!(reciprocal_product(t, &a.wrench).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn actuation_index_checked() {
        assert_eq!(
            actuation_analysis(&spherical(), 7),
            Err(Error::IndexOutOfRange { index: 7, len: 3 })
        );
    }

    #[test]
    fn locked_joint_has_no_actuation_wrench() {
        // joint 3 duplicates joint 1, so dropping either loses nothing
        let l = limb(alloc::vec![
            JointSpec::revolute(Vec3::x(), Vec3::zeros()),
            JointSpec::revolute(Vec3::y(), Vec3::zeros()),
            JointSpec::revolute(Vec3::x(), Vec3::zeros()),
        ]);
        assert_eq!(
            actuation_analysis(&l, 0),
            Err(Error::NoUniqueActuationWrench { index: 0 })
        );
    }
}
