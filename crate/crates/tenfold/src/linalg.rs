//! Small dense-matrix helpers shared by the physics modules.
//!
//! Everything operates on `ndarray` matrices; eigen/det/SVD work is delegated
//! to LAPACK through `ndarray-linalg`.

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Determinant, Eig, Eigh, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;
pub type RMat = Array2<f64>;

pub const IM: C64 = C64 { re: 0.0, im: 1.0 };

pub fn cmat(rows: &[&[C64]]) -> CMat {
    let nr = rows.len();
    let nc = rows[0].len();
    Array2::from_shape_fn((nr, nc), |(i, j)| rows[i][j])
}

pub fn rmat(rows: &[&[f64]]) -> RMat {
    let nr = rows.len();
    let nc = rows[0].len();
    Array2::from_shape_fn((nr, nc), |(i, j)| rows[i][j])
}

pub fn ceye(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn reye(n: usize) -> RMat {
    Array2::eye(n)
}

/// Complex matrix from its real and imaginary parts.
pub fn complex_from_parts(re: &RMat, im: &RMat) -> CMat {
    let mut out = CMat::zeros(re.raw_dim());
    out.zip_mut_with(re, |o, &x| o.re = x);
    out.zip_mut_with(im, |o, &y| o.im = y);
    out
}

pub fn real_part(m: &CMat) -> RMat {
    m.mapv(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.mapv(|z| z.im)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.mapv(|x| C64::new(x, 0.0))
}

/// Max-norm (entrywise) of a complex matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_r(m: &RMat) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    max_abs(&(m - &dagger(m)))
}

pub fn unitarity_residual(u: &CMat) -> f64 {
    max_abs(&(dagger(u).dot(u) - ceye(u.nrows())))
}

pub fn check_unitary(u: &CMat, tol: f64) -> Result<()> {
    let residual = unitarity_residual(u);
    if residual < tol {
        Ok(())
    } else {
        Err(Error::NonUnitary { residual })
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending, eigenvectors as columns.
/// The backend hands row-major buffers to LAPACK unchanged, so for complex
/// Hermitian input it diagonalizes the transpose and the returned vectors are
/// conjugated; undo that here so that m.dot(v_j) = vals_j * v_j holds.
pub fn eigh(m: &CMat) -> Result<(Array1<f64>, CMat)> {
    let (vals, vecs) = m.eigh(UPLO::Lower)?;
    Ok((vals, vecs.mapv(|z| z.conj())))
}

/// Real-symmetric eigendecomposition, eigenvalues ascending.
pub fn eigh_real(m: &RMat) -> Result<(Array1<f64>, RMat)> {
    Ok(m.eigh(UPLO::Lower)?)
}

pub fn eigvalsh(m: &CMat) -> Result<Array1<f64>> {
    Ok(m.eigh(UPLO::Lower)?.0)
}

pub fn det(m: &CMat) -> Result<C64> {
    Ok(m.det()?)
}

pub fn det_real(m: &RMat) -> Result<f64> {
    Ok(m.det()?)
}

/// Eigenphases of a unitary matrix, each in (-pi, pi], ascending.
pub fn unitary_eigenphases(w: &CMat) -> Result<Vec<f64>> {
    let (vals, _) = w.eig()?;
    let mut phases: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(phases)
}

/// Nearest unitary matrix in Frobenius norm (polar factor via SVD).
pub fn unitarize(m: &CMat) -> Result<CMat> {
    let (u, _, vt) = m.svd(true, true)?;
    Ok(u.unwrap().dot(&vt.unwrap()))
}

pub fn kron_r(a: &RMat, b: &RMat) -> RMat {
    ndarray::linalg::kron(a, b)
}

/// Orthogonal O and phases (x_j, y_j) with O^T X O and O^T Y O simultaneously
/// diagonal, for commuting real-symmetric X, Y. Degenerate X-clusters are
/// resolved by diagonalizing Y inside each cluster.
fn simultaneous_diag_sym(x: &RMat, y: &RMat) -> Result<(RMat, Vec<(f64, f64)>)> {
    const CLUSTER_TOL: f64 = 1e-8;
    let n = x.nrows();
    let (xe, mut o) = eigh_real(x)?;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && xe[end] - xe[end - 1] < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = o.slice(s![.., start..end]).to_owned();
            let yb = block.t().dot(y).dot(&block);
            let (_, yv) = eigh_real(&yb)?;
            o.slice_mut(s![.., start..end]).assign(&block.dot(&yv));
        }
        start = end;
    }
    let vals = (0..n)
        .map(|j| {
            let col = o.column(j);
            (col.dot(&x.dot(&col)), col.dot(&y.dot(&col)))
        })
        .collect();
    Ok((o, vals))
}

/// Takagi factorization U = V V^T of a symmetric unitary matrix; V is unitary.
///
/// Re(U) and Im(U) of a symmetric unitary commute, so a real orthogonal O
/// diagonalizes both: O^T U O = diag(e^{i theta_j}), and V = O diag(e^{i theta_j / 2}).
pub fn takagi_symmetric_unitary(u: &CMat) -> Result<CMat> {
    const TOL: f64 = 1e-10;
    check_unitary(u, 1e-12)?;
    let sym_residual = max_abs(&(u - &u.t().to_owned()));
    if sym_residual >= TOL {
        return Err(Error::InvalidRepresentation {
            residual: sym_residual,
        });
    }
    let (o, vals) = simultaneous_diag_sym(&real_part(u), &imag_part(u))?;
    let mut v = to_complex(&o);
    for (j, &(xj, yj)) in vals.iter().enumerate() {
        let half = C64::from_polar(1.0, 0.5 * yj.atan2(xj));
        v.column_mut(j).mapv_inplace(|z| z * half);
    }
    let residual = max_abs(&(&v.dot(&v.t().to_owned()) - u));
    if residual >= TOL {
        return Err(Error::InvalidRepresentation { residual });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau_x() -> CMat {
        cmat(&[
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ])
    }

    #[test]
    fn eigh_ascending_order() {
        let h = cmat(&[
            &[C64::new(2.0, 0.0), C64::new(0.0, -1.0)],
            &[C64::new(0.0, 1.0), C64::new(-1.0, 0.0)],
        ]);
        let (vals, vecs) = eigh(&h).unwrap();
        assert!(vals[0] < vals[1]);
        // Columns are eigenvectors.
        let r = h.dot(&vecs) - vecs.dot(&CMat::from_diag(&vals.mapv(|x| C64::new(x, 0.0))));
        assert!(max_abs(&r) < 1e-12);
    }

    #[test]
    fn unitarize_recovers_unitary() {
        let m = cmat(&[
            &[C64::new(0.9, 0.1), C64::new(0.1, 0.0)],
            &[C64::new(-0.1, 0.0), C64::new(0.95, -0.05)],
        ]);
        let u = unitarize(&m).unwrap();
        assert!(unitarity_residual(&u) < 1e-12);
    }

    #[test]
    fn takagi_identity() {
        let v = takagi_symmetric_unitary(&ceye(3)).unwrap();
        assert!(max_abs(&(&v.dot(&v.t().to_owned()) - &ceye(3))) < 1e-12);
    }

    #[test]
    fn takagi_tau_x() {
        let u = tau_x();
        let v = takagi_symmetric_unitary(&u).unwrap();
        assert!(unitarity_residual(&v) < 1e-12);
        assert!(max_abs(&(&v.dot(&v.t().to_owned()) - &u)) < 1e-12);
    }

    #[test]
    fn takagi_random_symmetric_unitary() {
        // O diag(e^{i theta}) O^T for a fixed rotation O is symmetric unitary.
        let c = 0.6f64.cos();
        let s = 0.6f64.sin();
        let o = rmat(&[&[c, -s], &[s, c]]);
        let d = CMat::from_diag(&Array1::from(vec![
            C64::from_polar(1.0, 0.3),
            C64::from_polar(1.0, -1.2),
        ]));
        let u = to_complex(&o).dot(&d).dot(&to_complex(&o).t().to_owned());
        let v = takagi_symmetric_unitary(&u).unwrap();
        assert!(max_abs(&(&v.dot(&v.t().to_owned()) - &u)) < 1e-12);
    }

    #[test]
    fn takagi_rejects_asymmetric() {
        let u = cmat(&[
            &[C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ]);
        assert!(matches!(
            takagi_symmetric_unitary(&u),
            Err(Error::InvalidRepresentation { .. })
        ));
    }

    #[test]
    fn unitary_eigenphases_of_diagonal() {
        let d = CMat::from_diag(&Array1::from(vec![
            C64::from_polar(1.0, 1.0),
            C64::from_polar(1.0, -2.0),
        ]));
        let phases = unitary_eigenphases(&d).unwrap();
        assert!((phases[0] + 2.0).abs() < 1e-12);
        assert!((phases[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kron_dimensions() {
        let a = reye(2);
        let b = rmat(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let k = kron_r(&a, &b);
        assert_eq!(k.shape(), &[4, 4]);
        assert_eq!(k[(0, 1)], -1.0);
        assert_eq!(k[(2, 3)], -1.0);
        assert_eq!(k[(0, 3)], 0.0);
    }
}
