//! Dense Hermitian eigensolver.
//!
//! Matrices up to [`JACOBI_MAX_DIM`] are diagonalized with the cyclic complex
//! Jacobi method; larger ones go through nalgebra's symmetric QR solver. Both
//! return eigenvalues in ascending order and eigenvectors whose first
//! non-negligible component is real and positive.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const JACOBI_MAX_DIM: usize = 64;
pub const MAX_DIM: usize = 4096;

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 80;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors, stored
/// as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<Complex64>,
}

/// Largest `|a_ij - conj(a_ji)|` over the matrix.
pub fn hermiticity_defect(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(a: &DMatrix<Complex64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidState(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    if a.nrows() > MAX_DIM {
        return Err(Error::InvalidState(format!("dimension {} exceeds {MAX_DIM}", a.nrows())));
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidState("matrix has non-finite entries".into()));
    }
    let scale = a.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let defect = hermiticity_defect(a);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigensystem(a: &DMatrix<Complex64>) -> Result<HermitianEigen> {
    check_hermitian(a)?;
    let n = a.nrows();
    let (values, vectors) = if n <= JACOBI_MAX_DIM {
        let mut work = to_row_major(a);
        let mut v = identity(n);
        jacobi(&mut work, n, Some(&mut v));
        let values: Vec<f64> = (0..n).map(|i| work[i * n + i].re).collect();
        (values, DMatrix::from_row_slice(n, n, &v))
    } else {
        let eig = nalgebra::SymmetricEigen::new(a.clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut sorted_vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = vectors.column(src).into_owned();
        fix_phase(&mut col);
        sorted_vectors.set_column(dst, &col);
    }
    Ok(HermitianEigen {
        values: DVector::from_iterator(n, order.iter().map(|&i| values[i])),
        vectors: sorted_vectors,
    })
}

/// Ascending eigenvalues only.
pub fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let n = a.nrows();
    let mut values = if n <= JACOBI_MAX_DIM {
        let mut work = to_row_major(a);
        jacobi(&mut work, n, None);
        (0..n).map(|i| work[i * n + i].re).collect::<Vec<_>>()
    } else {
        nalgebra::SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest eigenvalue of the principal submatrix `a[idx, idx]`. No checks:
/// `a` must already be known Hermitian. Sizes above 2 go through
/// tridiagonal QR, which beats Jacobi here since no vectors are needed.
pub(crate) fn principal_max_eigenvalue(a: &DMatrix<Complex64>, idx: &[usize]) -> f64 {
    let r = idx.len();
    match r {
        0 => return 0.0,
        1 => return a[(idx[0], idx[0])].re,
        2 => {
            let (x, y) = (a[(idx[0], idx[0])].re, a[(idx[1], idx[1])].re);
            let off = a[(idx[0], idx[1])].norm();
            let half = 0.5 * (x - y);
            return 0.5 * (x + y) + half.hypot(off);
        }
        _ => {}
    }
    let sub = DMatrix::from_fn(r, r, |i, j| a[(idx[i], idx[j])]);
    sub.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn to_row_major(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = a.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(a[(i, j)]);
        }
    }
    out
}

fn identity(n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    v
}

fn fix_phase(col: &mut DVector<Complex64>) {
    let scale = col.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return;
    }
    if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8 * scale) {
        let phase = lead.conj() / lead.norm();
        col.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Cyclic complex Jacobi on a row-major `n x n` Hermitian matrix. On return
/// the diagonal holds the eigenvalues; when `vectors` is given it accumulates
/// the rotations (row-major, eigenvectors in columns).
fn jacobi(a: &mut [Complex64], n: usize, mut vectors: Option<&mut Vec<Complex64>>) {
    // symmetrize the diagonal so rounding in imaginary parts cannot leak in
    for i in 0..n {
        a[i * n + i].im = 0.0;
    }
    let frob_sq: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if frob_sq == 0.0 {
        return;
    }
    let target = (f64::EPSILON * f64::EPSILON) * frob_sq;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // negligible relative to both diagonal entries: drop it
                if mag < f64::EPSILON * 1e-2 * (app.abs().min(aqq.abs())) {
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e = apq.conj() / mag;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = akp * c - akq * e * s;
                    let new_kq = akp * s + akq * e * c;
                    a[k * n + p] = new_kp;
                    a[k * n + q] = new_kq;
                    a[p * n + k] = new_kp.conj();
                    a[q * n + k] = new_kq.conj();
                }
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);

                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * e * s;
                        v[k * n + q] = vkp * s + vkq * e * c;
                    }
                }
            }
        }
    }
}
