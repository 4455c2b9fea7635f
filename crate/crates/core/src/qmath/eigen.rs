//! Spectra of small Hermitian matrices and the quantities built on them.
//!
//! The eigensolver is a cyclic Jacobi iteration with complex rotations. Each
//! rotation first removes the phase of the pivot `a_pq` and then applies the
//! classical real rotation that annihilates it, so the whole step is one
//! unitary `J` acting as `A ← J† A J` on two rows and two columns.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::matrix::{ComplexMatrix, DensityMatrix};

/// Input asymmetry tolerated by [`eig_hermitian`].
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which a Jacobi sweep loop stops.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in `[ENTROPY_CLAMP, 0)` count as exact zeros.
pub const ENTROPY_CLAMP: f64 = -1e-10;
/// Eigenvalues below this make [`vn_entropy`] fail.
pub const ENTROPY_REJECT: f64 = -1e-8;

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::NotSquare(h.rows(), h.cols()));
    }
    let defect = h.hermitian_defect();
    if defect.is_nan() || defect > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();

    // Work on the exactly Hermitian part.
    let mut a = h.clone();
    for r in 0..n {
        a[(r, r)] = Complex64::new(h[(r, r)].re, 0.0);
        for c in r + 1..n {
            let v = (h[(r, c)] + h[(c, r)].conj()) * 0.5;
            a[(r, c)] = v;
            a[(c, r)] = v.conj();
        }
    }

    let scale = frobenius(&a).max(1.0);
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_TOL * scale {
            let mut values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
            values.sort_by(f64::total_cmp);
            return Ok(values);
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    Err(Error::NoConvergence(JACOBI_MAX_SWEEPS))
}

fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = (apq / mag).conj();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase * -s;
    let j_qq = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

fn frobenius(a: &ComplexMatrix) -> f64 {
    a.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum += a[(r, c)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Von Neumann entropy `−Σ λ log₂ λ` in bits, with `0·log 0 = 0`.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let values = eig_hermitian(rho.matrix())?;
    entropy_of_spectrum(&values)
}

/// Entropy in bits of a (numerically) nonnegative spectrum.
pub(crate) fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in values {
        if lambda < ENTROPY_REJECT {
            return Err(Error::NotPositive(lambda));
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    let max = (values.len().max(1) as f64).log2();
    Ok(s.clamp(0.0, max))
}

/// `Σ |λᵢ|` of a Hermitian matrix.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.iter().map(|l| l.abs()).sum())
}
