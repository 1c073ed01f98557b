use proptest::prelude::*;
use spherolimb_core::{
    adjoint_transform, build_limb, constraint_wrench_space, elliptic_polar, make_twist_prismatic,
    make_twist_revolute, pitch, reciprocal_product, JointSpec, LimbSpec, PitchClass,
    RigidTransform, Screw, Vec3,
};

fn vec3() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-1.0..1.0f64).prop_map(Vec3::from)
}

fn direction() -> impl Strategy<Value = Vec3> {
    vec3().prop_filter("non-zero", |v| v.norm() > 0.1)
}

fn transform() -> impl Strategy<Value = RigidTransform> {
    (direction(), -3.2..3.2f64, vec3())
        .prop_map(|(axis, angle, t)| RigidTransform::from_axis_angle(axis, angle, t * 2.0).unwrap())
}

fn screw() -> impl Strategy<Value = Screw> {
    (vec3(), vec3(), any::<bool>())
        .prop_filter("non-degenerate", |(a, b, _)| a.norm() + b.norm() > 0.1)
        .prop_map(|(a, b, twist)| {
            if twist {
                Screw::twist(a, b).unwrap()
            } else {
                Screw::wrench(a, b).unwrap()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn polarity_is_an_involution(s in screw()) {
        let back = elliptic_polar(&elliptic_polar(&s));
        prop_assert_eq!(back, s);
        prop_assert_ne!(elliptic_polar(&s).kind(), s.kind());
    }

    #[test]
    fn transforms_keep_pitch(d in direction(), p in vec3(), x in transform()) {
        let t = make_twist_revolute(d, p).unwrap();
        let moved = adjoint_transform(&x, &t);
        prop_assert_eq!(pitch(&moved).unwrap(), PitchClass::ZeroPitch);

        let h = 0.7;
        let helical = Screw::twist(t.a(), t.b() + t.a() * h).unwrap();
        match pitch(&adjoint_transform(&x, &helical)).unwrap() {
            PitchClass::FinitePitch(g) => prop_assert!((g - h).abs() <= 1e-10),
            other => prop_assert!(false, "{:?}", other),
        }

        let slide = make_twist_prismatic(d).unwrap();
        prop_assert_eq!(pitch(&adjoint_transform(&x, &slide)).unwrap(), PitchClass::InfinitePitch);
    }

    #[test]
    fn transforms_keep_the_pairing(ta in vec3(), tb in vec3(), wa in vec3(), wb in vec3(), x in transform()) {
        let t = Screw::twist(ta + Vec3::x(), tb).unwrap();
        let w = Screw::wrench(wa, wb + Vec3::y()).unwrap();
        let before = reciprocal_product(&t, &w).unwrap();
        let after = reciprocal_product(&adjoint_transform(&x, &t), &adjoint_transform(&x, &w)).unwrap();
        prop_assert!((before - after).abs() <= 1e-10 * (1.0 + before.abs()));
    }

    #[test]
    fn axis_point_choice_does_not_matter(d in direction(), p in vec3(), k in -5.0..5.0f64) {
        let a = make_twist_revolute(d, p).unwrap();
        let b = make_twist_revolute(d, p + d * k).unwrap();
        prop_assert!((a.to_vector() - b.to_vector()).amax() <= 1e-12);
    }

    #[test]
    fn transforms_commute_with_building(d in direction(), p in vec3(), x in transform()) {
        let moved = adjoint_transform(&x, &make_twist_revolute(d, p).unwrap());
        let rebuilt = make_twist_revolute(x.apply_direction(&d), x.apply_point(&p)).unwrap();
        prop_assert!((moved.to_vector() - rebuilt.to_vector()).amax() <= 1e-10);
    }

    #[test]
    fn constraint_space_dimension_and_reciprocity(
        joints in prop::collection::vec((direction(), vec3(), any::<bool>()), 3..=5),
        center in vec3(),
    ) {
        let specs: Vec<JointSpec> = joints
            .iter()
            .map(|(d, p, r)| if *r { JointSpec::revolute(*d, *p) } else { JointSpec::prismatic(*d) })
            .collect();
        let limb = build_limb(LimbSpec { joints: specs, center }).unwrap();
        let m = spherolimb_core::limb_twist_matrix(&limb);
        let rank = spherolimb_core::linalg::rank(&m);
        let ws = constraint_wrench_space(&limb);
        prop_assert_eq!(ws.len(), 6 - rank);
        for t in limb.twists() {
            for w in &ws {
                prop_assert!(reciprocal_product(t, w).unwrap().abs() <= 1e-9);
            }
        }
    }
}
