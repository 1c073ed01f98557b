//! Rank decisions, nullspaces and projectors on small dense matrices.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::tol;

/// Singular value decomposition with singular values sorted in decreasing order.
///
/// Short-wide inputs are padded with zero rows so that a full set of right
/// singular vectors is always available.
pub struct SortedSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl SortedSvd {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let (r, c) = m.shape();
        let padded;
        let a = if r < c {
            padded = {
                let mut p = DMatrix::zeros(c, c);
                p.view_mut((0, 0), (r, c)).copy_from(m);
                p
            };
            &padded
        } else {
            m
        };
        let (u, sigma, v) = jacobi_svd(a.clone());
        let mut order: Vec<usize> = (0..sigma.len()).collect();
        order.sort_by(|&i, &j| {
            sigma[j]
                .partial_cmp(&sigma[i])
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let k = order.len();
        let mut su = DMatrix::zeros(a.nrows(), k);
        let mut sv = DMatrix::zeros(c, k);
        let mut sorted = Vec::with_capacity(k);
        for (dst, &src) in order.iter().enumerate() {
            su.set_column(dst, &u.column(src));
            sv.set_column(dst, &v.column(src));
            sorted.push(sigma[src]);
        }
        let sigma = sorted;
        // drop the padding rows again
        let su = su.rows(0, r).into_owned();
        Self {
            u: su,
            sigma,
            v: sv,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn threshold(&self) -> f64 {
        let t = tol::RANK_REL * self.sigma_max();
        if t > tol::ABS_FLOOR {
            t
        } else {
            tol::ABS_FLOOR
        }
    }

    pub fn rank(&self) -> usize {
        let t = self.threshold();
        self.sigma.iter().filter(|&&s| s > t).count()
    }

    /// Orthonormal basis of the right nullspace, canonicalized.
    pub fn nullspace(&self) -> Vec<DVector<f64>> {
        let r = self.rank();
        (r..self.v.ncols())
            .map(|j| canonicalize(self.v.column(j).into_owned()))
            .collect()
    }

    /// Orthonormal basis of the column space.
    pub fn range(&self) -> DMatrix<f64> {
        let r = self.rank();
        self.u.columns(0, r).into_owned()
    }

    /// Smallest singular value among the first `n` (zero if fewer exist).
    pub fn sigma(&self, i: usize) -> f64 {
        self.sigma.get(i).copied().unwrap_or(0.0)
    }
}

/// One-sided Jacobi SVD of a matrix with at least as many rows as columns.
///
/// Used instead of nalgebra's bidiagonal SVD, which returns wrong
/// factorizations for some rank-deficient inputs with (near) zero rows, the
/// exact shape of stacked constraint wrenches. Left vectors of zero singular
/// values are returned as zero columns.
fn jacobi_svd(a: DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (m, n) = a.shape();
    // column-major storage, so each column is a contiguous slice
    let mut u: Vec<f64> = a.as_slice().to_vec();
    let mut v: Vec<f64> = DMatrix::<f64>::identity(n, n).as_slice().to_vec();
    let mut norms: Vec<f64> = u.chunks(m).map(|c| c.iter().map(|x| x * x).sum()).collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                let gamma: f64 = (0..m).map(|r| u[p * m + r] * u[q * m + r]).sum();
                if gamma == 0.0 || libm::fabs(gamma) <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t =
                    libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut u, m, p, q, c, s);
                rotate(&mut v, n, p, q, c, s);
                norms[p] = alpha - t * gamma;
                norms[q] = beta + t * gamma;
            }
        }
        if !rotated {
            break;
        }
        // refresh the running norms against drift
        for (j, col) in u.chunks(m).enumerate() {
            norms[j] = col.iter().map(|x| x * x).sum();
        }
    }
    let mut sigma = Vec::with_capacity(n);
    for col in u.chunks_mut(m) {
        let norm = libm::sqrt(col.iter().map(|x| x * x).sum());
        sigma.push(norm);
        if norm > 0.0 {
            col.iter_mut().for_each(|x| *x /= norm);
        }
    }
    (
        DMatrix::from_vec(m, n, u),
        sigma,
        DMatrix::from_vec(n, n, v),
    )
}

fn rotate(data: &mut [f64], rows: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = data.split_at_mut(q * rows);
    let cp = &mut head[p * rows..(p + 1) * rows];
    let cq = &mut tail[..rows];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    SortedSvd::new(m).rank()
}

/// Flips the sign so that the first component above the noise floor is positive.
pub fn canonicalize(mut v: DVector<f64>) -> DVector<f64> {
    let scale = v.amax();
    if let Some(x) = v.iter().find(|x| libm::fabs(**x) > 1e-12 * scale.max(1.0)) {
        if *x < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// `I - U Uᵀ` for an orthonormal basis `U` of the column space of `g`.
pub fn complement_projector(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let mut p = DMatrix::identity(n, n);
    if g.ncols() == 0 {
        return p;
    }
    let u = SortedSvd::new(g).range();
    p -= &u * u.transpose();
    p
}

/// Orthogonal projector onto the column space of `g`.
pub fn range_projector(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    if g.ncols() == 0 {
        return DMatrix::zeros(n, n);
    }
    let u = SortedSvd::new(g).range();
    &u * u.transpose()
}

/// Moore-Penrose pseudo-inverse with the crate's rank threshold.
pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let s = SortedSvd::new(m);
    let t = s.threshold();
    let (r, c) = m.shape();
    let mut out = DMatrix::zeros(c, r);
    for (i, &sv) in s.sigma.iter().enumerate() {
        if sv > t && i < s.u.ncols() {
            out += s.v.column(i) * s.u.column(i).transpose() / sv;
        }
    }
    out
}

/// Condition-aware smallest singular value relative to the largest.
pub fn relative_sigma_min(m: &DMatrix<f64>) -> f64 {
    let s = SortedSvd::new(m);
    let n = m.nrows().min(m.ncols());
    if n == 0 || s.sigma_max() == 0.0 {
        return 0.0;
    }
    s.sigma(n - 1) / s.sigma_max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace_of_short_wide_matrix() {
        let m = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let s = SortedSvd::new(&m);
        assert_eq!(s.rank(), 2);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).amax() < 1e-14);
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sigma_sorted_descending() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(alloc::vec![0.5, 3.0, 1.0]));
        let s = SortedSvd::new(&m);
        assert_eq!(s.sigma, alloc::vec![3.0, 1.0, 0.5]);
    }

    #[test]
    fn tiny_singular_values_count_as_zero() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(alloc::vec![1.0, 1e-11, 0.0]));
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn canonical_sign() {
        let v = canonicalize(DVector::from_vec(alloc::vec![0.0, -2.0, 1.0]));
        assert_eq!(v[1], 2.0);
    }

    #[test]
    fn projector_properties() {
        let g = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        let p = complement_projector(&g);
        assert!((&p * &p - &p).amax() < 1e-14);
        assert!((g.transpose() * &p).amax() < 1e-14);
        assert!((p.clone() - p.transpose()).amax() < 1e-15);
    }

    #[test]
    fn pinv_of_rank_deficient() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let p = pinv(&m);
        assert!((&m * &p * &m - &m).amax() < 1e-12);
    }
}
