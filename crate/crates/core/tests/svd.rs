use nalgebra::DMatrix;
use proptest::prelude::*;
use spherolimb_core::linalg::SortedSvd;

fn recompose(s: &SortedSvd) -> DMatrix<f64> {
    let k = s.sigma.len();
    let sig = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.sigma.clone()));
    s.u.columns(0, k.min(s.u.ncols())) * sig.view((0, 0), (k.min(s.u.ncols()), k)) * s.v.transpose()
}

/// Stacked constraint wrenches of three identical-family limbs: rank 3 with
/// near-zero moment rows. nalgebra's own SVD misfactors this one.
#[test]
// the literals are the exact bits that triggered the bug
#[allow(clippy::excessive_precision)]
fn constraint_stack_with_tiny_rows() {
    #[rustfmt::skip]
    let rows = [
        [2.02129971279156190e-2, 8.17282173928583822e-1, 4.18498222761080230e-1, 7.66169359620256341e-1, 2.51056937526711987e-1, 9.52481598221044945e-1],
        [-2.67410401471602222e-1, 5.59434966487258767e-1, 5.17055676242960671e-1, -6.42452728027802289e-1, -9.45469992271073867e-1, 2.79493674821028770e-1],
        [-9.63370703276731355e-1, -1.38138938934567190e-1, 7.46667707357665522e-1, 1.54597745365581060e-2, -2.07501585137666478e-1, -1.21087120641797164e-1],
        [4.51467054843105303e-18, 0.0, -5.65819201183064179e-17, 0.0, 6.65958815551428787e-18, 0.0],
        [4.69101853260230709e-17, 7.27200171476946717e-18, -2.97336518050236313e-17, 1.85946048649580974e-17, -1.08687082995291550e-17, 1.10346058663233087e-17],
        [-4.48260968329635218e-18, -4.15023625013824065e-19, 1.33303593807216733e-16, -3.24061787520566684e-18, 2.46504374636196814e-17, -3.01108990489130996e-17],
    ];
    let m = DMatrix::from_fn(6, 6, |r, c| rows[r][c]);
    let s = SortedSvd::new(&m);
    assert_eq!(s.rank(), 3);
    assert!((recompose(&s) - &m).amax() <= 1e-14);
}

fn matrix() -> impl Strategy<Value = DMatrix<f64>> {
    (1usize..=7, 1usize..=12).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(-1.0..1.0f64, r * c),
            prop::collection::vec(0u8..4, r),
        )
            .prop_map(move |(data, kinds)| {
                let mut m = DMatrix::from_vec(r, c, data);
                for (i, k) in kinds.iter().enumerate() {
                    match k {
                        0 => m.row_mut(i).fill(0.0),
                        1 => m.row_mut(i).scale_mut(1e-17),
                        _ => {}
                    }
                }
                m
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn factorization_is_exact(m in matrix()) {
        let s = SortedSvd::new(&m);
        prop_assert!((recompose(&s) - &m).amax() <= 1e-13);
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        let v = &s.v;
        prop_assert!((v.transpose() * v - DMatrix::identity(v.ncols(), v.ncols())).amax() <= 1e-13);
        let r = s.rank();
        let u = s.u.columns(0, r);
        prop_assert!((u.transpose() * u - DMatrix::identity(r, r)).amax() <= 1e-12);
        for x in s.nullspace() {
            prop_assert!((&m * x).amax() <= 1e-9 * s.sigma_max().max(1.0));
        }
    }
}
