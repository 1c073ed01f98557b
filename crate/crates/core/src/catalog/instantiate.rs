//! Random geometry that realizes a table row by construction.

use alloc::vec::Vec;

use super::descriptor::VariantDescriptor;
use crate::constraint::{CaseTag, SystemFamily};
use crate::error::{Error, Result};
use crate::limb::{build_limb, limb_twist_matrix, JointSpec, LimbModel, LimbSpec};
use crate::linalg::SortedSvd;
use crate::sample::{derive_seed, Sampler};
use crate::screw::Vec3;

pub const MAX_ATTEMPTS: usize = 100;

/// Smallest kept singular value relative to the largest. Below this the
/// sample is too close to an unintended degeneracy and is redrawn.
const SEPARATION: f64 = 1e-3;

fn through(s: &mut Sampler, c: &Vec3, d: &Vec3) -> Vec3 {
    c + d * s.signed(0.2, 1.0)
}

/// A point at distance `[0.2, 1]` from the line through `c` along `d`.
fn offset(s: &mut Sampler, c: &Vec3, d: &Vec3) -> Vec3 {
    c + s.offset_from(d, 0.2, 1.0) + d * s.uniform(-1.0, 1.0)
}

fn independent_triple(s: &mut Sampler) -> (Vec3, Vec3, Vec3) {
    loop {
        let (a, b, c) = (s.unit_vector(), s.unit_vector(), s.unit_vector());
        if libm::fabs(a.dot(&b.cross(&c))) >= 0.2 {
            return (a, b, c);
        }
    }
}

/// Joint specs in role order.
fn roles_geometry(desc: &VariantDescriptor, s: &mut Sampler, c: &Vec3) -> Vec<JointSpec> {
    let r = JointSpec::revolute;
    let p = JointSpec::prismatic;
    let n_i = desc
        .pattern
        .iter()
        .filter(|j| j.marker == super::Marker::I)
        .count();
    match (desc.class.system, desc.class.case_tag) {
        (SystemFamily::S5_0, CaseTag::CaseI) if n_i == 3 => {
            let s1 = s.unit_vector();
            let s3 = s.away_from(&s1, 0.3);
            let s5 = s1.cross(&s3).normalize();
            let s4 = s.unit_vector();
            alloc::vec![
                r(s1, through(s, c, &s1)),
                r(s1, offset(s, c, &s1)),
                r(s3, through(s, c, &s3)),
                r(s4, c + s3 * s.signed(0.3, 1.0)),
                r(s5, through(s, c, &s5)),
            ]
        }
        (SystemFamily::S5_0, CaseTag::CaseI) => {
            let s1 = s.unit_vector();
            let s3 = s.orthogonal_to(&s1);
            let s5 = s1.cross(&s3);
            let s4 = s.unit_vector();
            let p2 = c + s1 * s.uniform(-1.0, 1.0) + s5 * s.signed(0.3, 1.0);
            let p5 = c + s1 * s.signed(0.3, 1.0) + s5 * s.uniform(-1.0, 1.0);
            alloc::vec![
                r(s1, through(s, c, &s1)),
                r(s1, p2),
                r(s3, through(s, c, &s3)),
                r(s4, c + s3 * s.signed(0.3, 1.0)),
                r(s5, p5),
            ]
        }
        (SystemFamily::S5_0, _) => {
            let d = s.unit_vector();
            let mut out: Vec<JointSpec> = (0..3).map(|_| r(d, offset(s, c, &d))).collect();
            if desc.intersection_at_center {
                let s4 = s.away_from(&d, 0.3);
                let s5 = d.cross(&s4).normalize();
                out.push(r(s4, through(s, c, &s4)));
                out.push(r(s5, through(s, c, &s5)));
            } else {
                let q = c + d * s.signed(0.3, 1.0);
                let s4 = s.orthogonal_to(&d);
                let s5 = d.cross(&s4).normalize();
                out.push(r(s4, q));
                out.push(r(s5, q));
            }
            out
        }
        (SystemFamily::S4_0_1inf, CaseTag::CaseI) => {
            let s1 = s.unit_vector();
            let s3 = s.away_from(&s1, 0.3);
            let s4 = s1.cross(&s3).normalize();
            alloc::vec![
                r(s1, through(s, c, &s1)),
                r(s1, offset(s, c, &s1)),
                r(s3, through(s, c, &s3)),
                r(s4, through(s, c, &s4)),
                p(s.orthogonal_to(&s1)),
            ]
        }
        (SystemFamily::S4_0_1inf, _) => {
            let d = s.unit_vector();
            let s3 = s.away_from(&d, 0.3);
            let s4 = d.cross(&s3).normalize();
            alloc::vec![
                r(d, offset(s, c, &d)),
                r(d, offset(s, c, &d)),
                r(s3, through(s, c, &s3)),
                r(s4, through(s, c, &s4)),
                p(s.orthogonal_to(&d)),
            ]
        }
        (SystemFamily::S3_0_2inf, CaseTag::CaseI) => {
            let (a, b, e) = independent_triple(s);
            let s4 = s.unit_vector();
            let s5 = s.away_from(&s4, 0.3);
            alloc::vec![
                r(a, through(s, c, &a)),
                r(b, through(s, c, &b)),
                r(e, through(s, c, &e)),
                p(s4),
                p(s5),
            ]
        }
        (SystemFamily::S3_0_2inf, _) => {
            let (a, b, d) = independent_triple(s);
            let s4 = s.orthogonal_to(&d);
            let s5 = loop {
                let v = s.orthogonal_to(&d);
                if v.cross(&s4).norm() >= 0.3 {
                    break v;
                }
            };
            alloc::vec![
                r(a, through(s, c, &a)),
                r(b, through(s, c, &b)),
                r(d, offset(s, c, &d)),
                p(s4),
                p(s5),
            ]
        }
        (SystemFamily::S4_0, _) => (0..4)
            .map(|_| {
                let d = s.unit_vector();
                r(d, through(s, c, &d))
            })
            .collect(),
        (SystemFamily::S3_0_1inf, _) => {
            let (a, b, e) = independent_triple(s);
            alloc::vec![
                r(a, through(s, c, &a)),
                r(b, through(s, c, &b)),
                r(e, through(s, c, &e)),
                p(s.unit_vector()),
            ]
        }
        _ => {
            let (a, b, e) = independent_triple(s);
            alloc::vec![
                r(a, through(s, c, &a)),
                r(b, through(s, c, &b)),
                r(e, through(s, c, &e)),
            ]
        }
    }
}

fn well_separated(limb: &LimbModel, rank: usize) -> bool {
    let svd = SortedSvd::new(&limb_twist_matrix(limb));
    svd.rank() == rank && svd.sigma(rank - 1) >= SEPARATION * svd.sigma_max()
}

/// Draws a limb realizing `descriptor` around `center`.
///
/// Every marker holds exactly: through-center axes are built from the center,
/// parallel joints share one direction value. Draws whose twist rank differs
/// from the family's, or sits too close to a drop in rank, are redrawn.
pub fn instantiate_geometry(
    descriptor: &VariantDescriptor,
    seed: u64,
    center: Vec3,
) -> Result<LimbModel> {
    let rank = descriptor
        .system()
        .expected_rank()
        .ok_or(Error::ExhaustedResampling { attempts: 0 })?;
    let roles = descriptor.roles();
    for attempt in 0..MAX_ATTEMPTS {
        let mut s = Sampler::new(derive_seed(seed, attempt as u64));
        let by_role = roles_geometry(descriptor, &mut s, &center);
        let mut joints = by_role.clone();
        for (k, &pos) in roles.iter().enumerate() {
            joints[pos] = by_role[k];
        }
        let limb = build_limb(LimbSpec { joints, center })?;
        if well_separated(&limb, rank) {
            return Ok(limb);
        }
    }
    Err(Error::ExhaustedResampling {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::constraint::check_so3_necessary;
    use crate::limb::Category;

    #[test]
    fn typical_case_has_three_central_axes() {
        let d: VariantDescriptor = "R^i R^i R^i".parse().unwrap();
        let limb = instantiate_geometry(&d, 0, Vec3::zeros()).unwrap();
        assert_eq!(limb.categories(), &[Category::A; 3]);
    }

    #[test]
    fn deterministic() {
        let d: VariantDescriptor = "R^i R^i R^i P P".parse().unwrap();
        let c = Vec3::new(0.1, 0.2, 0.3);
        assert_eq!(
            instantiate_geometry(&d, 5, c).unwrap(),
            instantiate_geometry(&d, 5, c).unwrap()
        );
    }

    #[test]
    fn every_row_instantiates_and_meets_the_necessary_condition() {
        for d in catalog() {
            let limb = instantiate_geometry(&d, 1, Vec3::new(0.3, -0.1, 0.2)).unwrap();
            assert!(check_so3_necessary(&limb), "{}", d.id);
            for (sym, joint) in d.pattern.iter().zip(limb.joints()) {
                assert_eq!(sym.joint_type, joint.joint_type, "{}", d.id);
            }
        }
    }
}
