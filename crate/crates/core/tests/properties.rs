use cascade_core::cascade::{early_shape, late_emission};
use cascade_core::entanglement::subset_entropy;
use cascade_core::qmath::{eig_hermitian, partial_transpose_matrix, vn_entropy, Complex64};
use cascade_core::{
    amplitudes, apply_second_pulse, early_state, final_state, ghz_fidelity, ghz_state,
    ComplexMatrix, DecayParams, DensityMatrix, ModeSet, StateVector, SubsystemShape,
};
use proptest::prelude::*;

fn random_state(parts: &[f64]) -> StateVector {
    let amps = parts
        .chunks(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect::<Vec<_>>();
    let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(amps.into_iter().map(|z| z / n).collect())
}

fn random_matrix(n: usize, parts: &[f64]) -> ComplexMatrix {
    let data = parts
        .chunks(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect::<Vec<_>>();
    ComplexMatrix::new(n, n, data).unwrap()
}

fn hermitian(n: usize, parts: &[f64]) -> ComplexMatrix {
    let m = random_matrix(n, parts);
    let mut h = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            h[(r, c)] = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
        }
    }
    h
}

/// Modified Gram–Schmidt on the columns.
fn unitary(n: usize, parts: &[f64]) -> ComplexMatrix {
    let m = random_matrix(n, parts);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|c| (0..n).map(|r| m[(r, c)]).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let dot: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let sub = cols[k][i] * dot;
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            u[(r, c)] = cols[c][r];
        }
    }
    u
}

fn parts(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pure_state_bipartitions_have_equal_entropies(p in parts(32), mask in 1u8..15) {
        prop_assume!(p.iter().any(|x| x.abs() > 1e-3));
        let rho = DensityMatrix::from_pure(&random_state(&p)).unwrap();
        let a = mask_set(mask);
        let sa = subset_entropy(&rho, a).unwrap();
        let sb = subset_entropy(&rho, a.complement()).unwrap();
        prop_assert!((sa - sb).abs() < 1e-9, "{} vs {}", sa, sb);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(h in parts(128), u in parts(128)) {
        let h = hermitian(8, &h);
        let u = unitary(8, &u);
        let rotated = u.matmul(&h).unwrap().matmul(&u.adjoint()).unwrap();
        let e1 = eig_hermitian(&h).unwrap();
        let e2 = eig_hermitian(&rotated).unwrap();
        for (a, b) in e1.iter().zip(&e2) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn entropy_is_unitarily_invariant(p in parts(32), u in parts(32)) {
        prop_assume!(p.iter().any(|x| x.abs() > 1e-3));
        let psi = random_state(&p);
        let rho = subset_density(&psi);
        let u = unitary(4, &u);
        let rotated = u.matmul(rho.matrix()).unwrap().matmul(&u.adjoint()).unwrap();
        let rotated = hermitize(rotated);
        let s1 = vn_entropy(&rho).unwrap();
        let s2 = vn_entropy(&DensityMatrix::new(rotated).unwrap()).unwrap();
        prop_assert!((s1 - s2).abs() < 1e-9);
    }

    #[test]
    fn partial_transpose_is_an_involution(m in parts(512), sub in prop::collection::vec(0usize..4, 0..4)) {
        let m = random_matrix(16, &m);
        let shape = SubsystemShape::qubits(4);
        let once = partial_transpose_matrix(&m, &shape, &sub).unwrap();
        let twice = partial_transpose_matrix(&once, &shape, &sub).unwrap();
        prop_assert_eq!(twice.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn pipeline_matches_closed_form(gb in 0.05f64..20.0, gx in 0.05f64..20.0, dt in 0.0f64..5.0) {
        let p = DecayParams::new(gb, gx, dt).unwrap();
        let pulsed = apply_second_pulse(&early_state(&p), &early_shape()).unwrap();
        let built = late_emission(&pulsed).unwrap();
        let closed = final_state(&p);
        for (a, b) in built.amps().iter().zip(closed.amps()) {
            prop_assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn fidelity_matches_inner_product(gb in 0.05f64..20.0, gx in 0.05f64..20.0, dt in 0.0f64..5.0) {
        let p = DecayParams::new(gb, gx, dt).unwrap();
        let overlap = ghz_state(4).unwrap().inner(&final_state(&p)).unwrap().norm_sqr();
        prop_assert!((ghz_fidelity(&p) - overlap).abs() < 1e-12);
    }

    #[test]
    fn weights_are_normalized(gb in 1e-3f64..1e3, gx in 1e-3f64..1e3, dt in 0.0f64..50.0) {
        let p = DecayParams::new(gb, gx, dt).unwrap();
        let [a2, b2, g2] = amplitudes(&p).probabilities();
        prop_assert!((a2 + b2 + g2 - 1.0).abs() < 1e-12);
        prop_assert!(a2 >= 0.0 && b2 >= 0.0 && g2 >= 0.0);
    }
}

fn mask_set(mask: u8) -> ModeSet {
    let modes: Vec<_> = cascade_core::ModeLabel::ALL
        .iter()
        .copied()
        .filter(|m| mask & (1 << m.ordinal()) != 0)
        .collect();
    ModeSet::of(&modes)
}

/// Two-qubit reduced state of the first two modes.
fn subset_density(psi: &StateVector) -> DensityMatrix {
    let rho = DensityMatrix::from_pure(psi).unwrap();
    cascade_core::qmath::partial_trace(&rho, &SubsystemShape::qubits(4), &[0, 1]).unwrap()
}

fn hermitize(m: ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut h = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            h[(r, c)] = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
        }
    }
    h
}

#[test]
fn degenerate_rates_are_continuous() {
    for gb in [0.1, 1.0, 2.0, 7.5] {
        for dt in [0.01, 0.3, 1.0, 4.0] {
            let b2 =
                |gx: f64| amplitudes(&DecayParams::new(gb, gx, dt).unwrap()).probabilities()[1];
            let at = b2(gb);
            assert!((at - gb * dt * (-gb * dt).exp()).abs() < 1e-14);
            for eps in [1e-6, -1e-6, 1e-10, -1e-10] {
                assert!(
                    (at - b2(gb * (1.0 + eps))).abs() < 1e-5,
                    "gb={gb} dt={dt} eps={eps}"
                );
            }
        }
    }
}

#[test]
fn fidelity_increases_with_exciton_rate() {
    let gb = 1.0;
    let dt = std::f64::consts::LN_2 / gb;
    let ratios: Vec<f64> = (0..20)
        .map(|i| 0.1 * 1000f64.powf(i as f64 / 19.0))
        .collect();
    let f: Vec<f64> = ratios
        .iter()
        .map(|&r| ghz_fidelity(&DecayParams::new(gb, r * gb, dt).unwrap()))
        .collect();
    assert!(f.windows(2).all(|w| w[1] > w[0]), "{f:?}");
}
