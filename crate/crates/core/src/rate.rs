//! Robot-level rate kinematics.
//!
//! With the platform twist written `X = [v; ω]` about the robot center, every
//! actuation wrench `w_a` gives `q̇_a = w_aᵀ X` and every constraint wrench
//! `w_c` gives `0 = w_cᵀ X`. Stacking the wrenches as columns of
//! `G = [G_a G_c]`, with force rows `G_·v` over moment rows `G_·w`, yields
//!
//! ```text
//! [q̇_a; 0] = [[G_avᵀ, G_awᵀ], [G_cvᵀ, G_cwᵀ]] [v; ω]
//! ```
//!
//! Here `v` is the twist's linear block in the crate's `s x l` convention.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Matrix3, Matrix6, Vector6};

use crate::constraint::{actuation_analysis, check_so3_necessary, constraint_wrench_space};
use crate::error::{Error, Result};
use crate::limb::{limb_twist_matrix, LimbModel};
use crate::linalg::{self, SortedSvd};
use crate::screw::{Screw, ScrewKind, Vec3};
use crate::tol;

/// Three or more limbs sharing one rotation center, one actuator each.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    limbs: Vec<LimbModel>,
    center: Vec3,
    actuated: Vec<usize>,
}

impl RobotModel {
    pub fn new(limbs: Vec<LimbModel>, center: Vec3, actuated: Vec<usize>) -> Result<Self> {
        if limbs.len() < 3 {
            return Err(Error::TooFewLimbs { count: limbs.len() });
        }
        if actuated.len() != limbs.len() {
            return Err(Error::ActuatorCount {
                limbs: limbs.len(),
                actuated: actuated.len(),
            });
        }
        for (i, (limb, &a)) in limbs.iter().zip(&actuated).enumerate() {
            if (limb.center() - center).norm() > tol::ABS_FLOOR {
                return Err(Error::CenterMismatch { limb: i });
            }
            if a >= limb.len() {
                return Err(Error::IndexOutOfRange {
                    index: a,
                    len: limb.len(),
                });
            }
        }
        Ok(Self {
            limbs,
            center,
            actuated,
        })
    }

    pub fn limbs(&self) -> &[LimbModel] {
        &self.limbs
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn actuated(&self) -> &[usize] {
        &self.actuated
    }

    /// Same mechanism with every twist and wrench taken about `reference`.
    pub fn rereferenced(&self, reference: Vec3) -> Result<RobotModel> {
        let limbs = self
            .limbs
            .iter()
            .map(|l| l.with_center(reference))
            .collect::<Result<Vec<_>>>()?;
        RobotModel::new(limbs, reference, self.actuated.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianBlocks {
    pub g_av: DMatrix<f64>,
    pub g_aw: DMatrix<f64>,
    pub g_cv: DMatrix<f64>,
    pub g_cw: DMatrix<f64>,
}

impl JacobianBlocks {
    /// Builds the blocks from wrench columns `[force; moment]`.
    pub fn from_wrenches(actuation: &[Screw], constraint: &[Screw]) -> Self {
        let split = |ws: &[Screw]| {
            let f = DMatrix::from_fn(3, ws.len(), |r, c| ws[c].a()[r]);
            let m = DMatrix::from_fn(3, ws.len(), |r, c| ws[c].b()[r]);
            (f, m)
        };
        let (g_av, g_aw) = split(actuation);
        let (g_cv, g_cw) = split(constraint);
        Self {
            g_av,
            g_aw,
            g_cv,
            g_cw,
        }
    }

    /// Blocks whose transposes are `A, B, C, D` of the partitioned `Gᵀ`.
    pub fn from_transposed(
        a: Matrix3<f64>,
        b: Matrix3<f64>,
        c: Matrix3<f64>,
        d: Matrix3<f64>,
    ) -> Self {
        let dm = |m: Matrix3<f64>| DMatrix::from_column_slice(3, 3, m.transpose().as_slice());
        Self {
            g_av: dm(a),
            g_aw: dm(b),
            g_cv: dm(c),
            g_cw: dm(d),
        }
    }

    pub fn actuators(&self) -> usize {
        self.g_av.ncols()
    }

    pub fn constraints(&self) -> usize {
        self.g_cv.ncols()
    }

    /// `G_a` with force rows over moment rows.
    pub fn g_a(&self) -> DMatrix<f64> {
        stack(&self.g_av, &self.g_aw)
    }

    pub fn g_c(&self) -> DMatrix<f64> {
        stack(&self.g_cv, &self.g_cw)
    }

    /// `Gᵀ`, one row per wrench.
    pub fn g_transpose(&self) -> DMatrix<f64> {
        let a = self.g_a();
        let c = self.g_c();
        let mut g = DMatrix::zeros(6, a.ncols() + c.ncols());
        g.columns_mut(0, a.ncols()).copy_from(&a);
        g.columns_mut(a.ncols(), c.ncols()).copy_from(&c);
        g.transpose()
    }
}

fn stack(top: &DMatrix<f64>, bottom: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(6, top.ncols());
    m.rows_mut(0, 3).copy_from(top);
    m.rows_mut(3, 3).copy_from(bottom);
    m
}

pub fn assemble_extended_jacobian(robot: &RobotModel) -> Result<JacobianBlocks> {
    let mut actuation = Vec::with_capacity(robot.limbs.len());
    let mut constraint = Vec::new();
    for (i, (limb, &a)) in robot.limbs.iter().zip(&robot.actuated).enumerate() {
        let report = actuation_analysis(limb, a).map_err(|e| Error::SingularLimb {
            limb: i,
            source: alloc::boxed::Box::new(e),
        })?;
        actuation.push(report.wrench);
        constraint.extend(constraint_wrench_space(limb));
    }
    Ok(JacobianBlocks::from_wrenches(&actuation, &constraint))
}

/// The four blocks of `(Gᵀ)⁻¹`, named by position:
/// `[v; ω] = [[Q, R], [S, T]] [q̇_a; 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockInverse {
    pub q: Matrix3<f64>,
    pub r: Matrix3<f64>,
    pub s: Matrix3<f64>,
    pub t: Matrix3<f64>,
}

impl BlockInverse {
    pub fn assembled(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.q);
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&self.r);
        m.fixed_view_mut::<3, 3>(3, 0).copy_from(&self.s);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(&self.t);
        m
    }
}

/// Relative size below which a 3x3 block is treated as singular.
const SINGULAR_REL: f64 = 1e-10;

/// `scale` is the size of the whole system, so a block that is roundoff
/// next to the others counts as singular even if it is well conditioned.
fn invert3(m: &Matrix3<f64>, scale: f64) -> Option<Matrix3<f64>> {
    let svd = SortedSvd::new(&DMatrix::from_column_slice(3, 3, m.as_slice()));
    let (lo, hi) = (svd.sigma(2), svd.sigma_max());
    if hi == 0.0 || lo <= SINGULAR_REL * hi.max(scale) {
        return None;
    }
    m.try_inverse()
}

fn fixed3(m: &DMatrix<f64>) -> Matrix3<f64> {
    Matrix3::from_fn(|r, c| m[(r, c)])
}

/// Schur-complement inverse of `Gᵀ = [[A, B], [C, D]]` with `A = G_avᵀ`,
/// `B = G_awᵀ`, `C = G_cvᵀ`, `D = G_cwᵀ`:
///
/// ```text
/// Q = A⁻¹ + A⁻¹ B (D - C A⁻¹ B)⁻¹ C A⁻¹     R = -A⁻¹ B (D - C A⁻¹ B)⁻¹
/// S = -(D - C A⁻¹ B)⁻¹ C A⁻¹                T = (D - C A⁻¹ B)⁻¹
/// ```
pub fn block_inverse(blocks: &JacobianBlocks) -> Result<BlockInverse> {
    if blocks.actuators() != 3 || blocks.constraints() != 3 {
        return Err(Error::NotSquare {
            actuators: blocks.actuators(),
            constraints: blocks.constraints(),
        });
    }
    let a = fixed3(&blocks.g_av).transpose();
    let b = fixed3(&blocks.g_aw).transpose();
    let c = fixed3(&blocks.g_cv).transpose();
    let d = fixed3(&blocks.g_cw).transpose();
    let scale = [a, b, c, d].iter().map(|m| m.amax()).fold(0.0, f64::max);
    let a_inv = invert3(&a, scale).ok_or(Error::SingularA)?;
    let schur = d - c * a_inv * b;
    let t = invert3(&schur, scale).ok_or(Error::SingularSchur)?;
    let q = a_inv + a_inv * b * t * c * a_inv;
    let r = -(a_inv * b * t);
    let s = -(t * c * a_inv);
    Ok(BlockInverse { q, r, s, t })
}

/// Platform twist `[v; ω]` produced by actuator rates `qdot`.
///
/// Uses the block inverse when it applies and otherwise solves the stacked
/// system directly (least squares when there are more than six wrenches).
pub fn forward_rates(blocks: &JacobianBlocks, qdot: &[f64]) -> Result<Vector6<f64>> {
    let k = blocks.actuators();
    if qdot.len() != k {
        return Err(Error::ActuatorCount {
            limbs: k,
            actuated: qdot.len(),
        });
    }
    if let Ok(inv) = block_inverse(blocks) {
        let qa = nalgebra::Vector3::from_column_slice(qdot);
        let v = inv.q * qa;
        let w = inv.s * qa;
        return Ok(Vector6::new(v[0], v[1], v[2], w[0], w[1], w[2]));
    }
    let gt = blocks.g_transpose();
    let svd = SortedSvd::new(&gt);
    if svd.rank() < 6 {
        return Err(Error::SingularJacobian);
    }
    let mut rhs = DVector::zeros(gt.nrows());
    rhs.rows_mut(0, k).copy_from_slice(qdot);
    let x = linalg::pinv(&gt) * rhs;
    Ok(Vector6::from_iterator(x.iter().copied()))
}

/// Translation of the reference point induced by actuation, `v = Q q̇_a`.
pub fn dependent_translation(blocks: &JacobianBlocks, qdot: &[f64]) -> Result<Vec3> {
    let x = forward_rates(blocks, qdot)?;
    Ok(Vec3::new(x[0], x[1], x[2]))
}

/// `I - G_c G_c†`, the orthogonal projector onto twists the constraints allow.
pub fn feasible_projector(blocks: &JacobianBlocks) -> Matrix6<f64> {
    let p = linalg::complement_projector(&blocks.g_c());
    Matrix6::from_fn(|r, c| p[(r, c)])
}

pub fn project_feasible(blocks: &JacobianBlocks, xdot: &Vector6<f64>) -> Vector6<f64> {
    feasible_projector(blocks) * xdot
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlatformTwistSpace {
    pub basis: Vec<Screw>,
    pub dimension: usize,
}

/// Twists available to every limb at once.
///
/// The common subspace is the eigenvalue-one eigenspace of the mean of the
/// limbs' orthogonal projectors onto their joint-twist spans.
pub fn platform_twist_space(robot: &RobotModel) -> PlatformTwistSpace {
    let n = robot.limbs.len() as f64;
    let mut mean = DMatrix::<f64>::zeros(6, 6);
    for limb in &robot.limbs {
        mean += linalg::range_projector(&limb_twist_matrix(limb).transpose()) / n;
    }
    // the mean is symmetric positive semidefinite, so its SVD is its eigensystem
    let svd = SortedSvd::new(&mean);
    let picked: Vec<Vector6<f64>> = (0..6)
        .filter(|&i| svd.sigma(i) >= 1.0 - tol::RANK_REL)
        .map(|i| Vector6::from_iterator(svd.v.column(i).iter().copied()))
        .collect();
    let basis: Vec<Screw> = picked
        .into_iter()
        .map(|v| {
            let c = linalg::canonicalize(DVector::from_iterator(6, v.iter().copied()));
            Screw::from_vector(ScrewKind::Twist, &Vector6::from_iterator(c.iter().copied()))
                .expect("unit eigenvector")
        })
        .collect();
    PlatformTwistSpace {
        dimension: basis.len(),
        basis,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlatformVerdict {
    pub ok: bool,
    pub per_limb_necessary: Vec<bool>,
    /// Rank of the stacked constraint forces.
    pub g_cv_rank: usize,
    pub twist_space_dimension: usize,
    /// Largest linear block among the common twists, about the center.
    pub center_velocity_residual: f64,
    pub diagnostics: Vec<String>,
}

pub fn verify_so3_platform(robot: &RobotModel) -> PlatformVerdict {
    let per_limb_necessary: Vec<bool> = robot.limbs.iter().map(check_so3_necessary).collect();
    let wrenches: Vec<Screw> = robot
        .limbs
        .iter()
        .flat_map(constraint_wrench_space)
        .collect();
    let forces = DMatrix::from_fn(3, wrenches.len(), |r, c| wrenches[c].a()[r]);
    let g_cv_rank = if wrenches.is_empty() {
        0
    } else {
        linalg::rank(&forces)
    };
    let space = platform_twist_space(robot);
    let center_velocity_residual = space.basis.iter().map(|t| t.b().norm()).fold(0.0, f64::max);

    let mut diagnostics = Vec::new();
    for (i, ok) in per_limb_necessary.iter().enumerate() {
        if !ok {
            diagnostics.push(format!("limb {i}: constraint wrenches miss the center"));
        }
    }
    if g_cv_rank != 3 {
        diagnostics.push(format!("constraint forces have rank {g_cv_rank}, need 3"));
    }
    if space.dimension != 3 {
        diagnostics.push(format!(
            "common twist space has dimension {}, need 3",
            space.dimension
        ));
    }
    if center_velocity_residual > 1e-8 {
        diagnostics.push(format!(
            "center moves with velocity {center_velocity_residual:e}"
        ));
    }
    PlatformVerdict {
        ok: diagnostics.is_empty(),
        per_limb_necessary,
        g_cv_rank,
        twist_space_dimension: space.dimension,
        center_velocity_residual,
        diagnostics,
    }
}
