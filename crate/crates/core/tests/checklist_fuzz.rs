//! Random limbs built from a small pool of directions and points, so that the
//! special coincidences the condition lists talk about happen often.

use spherolimb_core::sample::{derive_seed, Sampler};
use spherolimb_core::{
    build_limb, catalog, check_case_conditions, check_so3_necessary, instantiate_geometry,
    JointSpec, JointType, LimbSpec, Vec3,
};

fn structured_joint(s: &mut Sampler, kind: JointType, dirs: &[Vec3; 3], c: &Vec3) -> JointSpec {
    let d = match s.index(4) {
        3 => s.unit_vector(),
        i => dirs[i],
    };
    match kind {
        JointType::Prismatic => JointSpec::prismatic(d),
        JointType::Revolute => {
            let p = match s.index(4) {
                0 => *c + d * s.uniform(-1.0, 1.0),
                1 => *c + dirs[s.index(3)] * s.signed(0.2, 1.0),
                2 => *c + s.point() * 0.5,
                _ => s.point(),
            };
            JointSpec::revolute(d, p)
        }
    }
}

#[test]
fn conditions_imply_the_necessary_condition() {
    let mut accepted = 0;
    for (row, desc) in catalog().iter().enumerate() {
        for trial in 0..200 {
            let mut s = Sampler::new(derive_seed(row as u64, trial));
            let c = s.point();
            let d0 = s.unit_vector();
            let d1 = s.away_from(&d0, 0.3);
            let dirs = [d0, d1, d0.cross(&d1).normalize()];
            let joints = if trial % 2 == 0 {
                desc.pattern
                    .iter()
                    .map(|j| structured_joint(&mut s, j.joint_type, &dirs, &c))
                    .collect()
            } else {
                // a valid realization with one or two joints redrawn from its own axes
                let base = instantiate_geometry(desc, trial, c).unwrap();
                let mut joints = base.joints().to_vec();
                let own = [base.s(0), base.s(1), base.s(2)];
                for _ in 0..1 + s.index(2) {
                    let k = s.index(joints.len());
                    joints[k] = structured_joint(&mut s, joints[k].joint_type, &own, &c);
                }
                joints
            };
            let limb = build_limb(LimbSpec { joints, center: c }).unwrap();
            let verdict = check_case_conditions(&limb, desc).unwrap();
            if verdict.overall {
                accepted += 1;
                assert!(
                    check_so3_necessary(&limb),
                    "{} trial {trial}: {verdict:#?}",
                    desc.id
                );
            }
        }
    }
    assert!(
        accepted > 1000,
        "only {accepted} limbs met their conditions"
    );
}
