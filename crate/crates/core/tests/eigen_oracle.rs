//! Jacobi eigenvalues against Sylvester-inertia bisection.

use cascade_core::qmath::{eig_hermitian, trace_norm, Complex64};
use cascade_core::ComplexMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        h[(r, r)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for c in r + 1..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    h
}

/// Eigenvalues of `h` below `sigma`: negative pivots of the LDLᴴ
/// factorization of `h − σI`.
fn count_below(h: &ComplexMatrix, sigma: f64) -> usize {
    let n = h.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|r| (0..n).map(|c| h[(r, c)]).collect())
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= sigma;
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut d = a[k][k].re;
        if d == 0.0 {
            d = -f64::EPSILON;
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let l = a[i][k] / d;
            for j in k + 1..n {
                let sub = l * a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    negatives
}

fn bisect_eigenvalue(h: &ComplexMatrix, k: usize, bound: f64) -> f64 {
    let (mut lo, mut hi) = (-bound, bound);
    while hi - lo > 1e-14 * bound.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if count_below(h, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn frobenius(h: &ComplexMatrix) -> f64 {
    h.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn random_8x8_hermitian_matches_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let h = random_hermitian(8, &mut rng);
        let bound = frobenius(&h) + 1.0;
        let jacobi = eig_hermitian(&h).unwrap();
        for (k, &ev) in jacobi.iter().enumerate() {
            let oracle = bisect_eigenvalue(&h, k, bound);
            assert!((ev - oracle).abs() < 1e-10, "k={k}: {ev} vs {oracle}");
        }
    }
}

#[test]
fn trace_norm_is_sum_of_absolute_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let h = random_hermitian(16, &mut rng);
        let bound = frobenius(&h) + 1.0;
        let oracle: f64 = (0..16).map(|k| bisect_eigenvalue(&h, k, bound).abs()).sum();
        assert!((trace_norm(&h).unwrap() - oracle).abs() < 1e-9);
    }
}

#[test]
fn degenerate_spectrum() {
    // diag(1, 1, 1, −2) rotated by a Householder reflection
    let v = [0.5, 0.5, 0.5, 0.5];
    let mut q = ComplexMatrix::identity(4);
    for r in 0..4 {
        for c in 0..4 {
            q[(r, c)] -= Complex64::new(2.0 * v[r] * v[c], 0.0);
        }
    }
    let d = ComplexMatrix::from_diag(&[1.0, 1.0, 1.0, -2.0]);
    let h = q.matmul(&d).unwrap().matmul(&q.adjoint()).unwrap();
    let ev = eig_hermitian(&h).unwrap();
    let want = [-2.0, 1.0, 1.0, 1.0];
    for (a, b) in ev.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
}
