use std::collections::BTreeSet;

use super::*;
use crate::hilbert::make_space;
use crate::scalar::cis;

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

fn resonant(g: f64, n: usize) -> CouplingSpec {
    // omega_0 - omega_c = -1.7
    CouplingSpec::uniform(g, n, 10.0, 11.7)
}

fn drive(rabi: f64, phase: f64, qubits: &[usize]) -> DriveSpec {
    DriveSpec { rabi, phase, frequency: 10.0, applies_to: set(qubits) }
}

#[test]
fn single_qubit_collective_is_local() {
    let s = make_space(3, 1).unwrap();
    let ops = collective_ops::<f64>(s, &set(&[2])).unwrap();
    assert_eq!(ops.sx, embed_qubit_op(s, 2, &pauli::x()).unwrap());
    assert!(collective_ops::<f64>(s, &set(&[])).is_err());
    assert!(collective_ops::<f64>(s, &set(&[4])).is_err());
}

#[test]
fn primed_set_identities() {
    let s = SpaceDescriptor::qubits(4).unwrap();
    let full = collective_ops::<f64>(s, &all_qubits(s)).unwrap().sx;
    let primed = collective_ops::<f64>(s, &target_qubits(s)).unwrap().sx;
    let x1 = embed_qubit_op(s, 1, &pauli::x()).unwrap();
    assert!((&full - &primed).max_abs_diff(&x1) < 1e-15);
    let lhs = &full.matmul(&full) - &primed.matmul(&primed);
    let mut rhs = OperatorMatrix::identity(s);
    rhs.add_scaled(cr(2.0), &x1.matmul(&primed));
    assert!(lhs.max_abs_diff(&rhs) < 1e-13);
}

#[test]
fn collective_commutators() {
    let s = make_space(3, 1).unwrap();
    for included in [set(&[1]), set(&[1, 3]), set(&[1, 2, 3])] {
        let o = collective_ops::<f64>(s, &included).unwrap();
        assert!((&o.sz.commutator(&o.splus) + &o.splus.scale_real(2.0)).max_abs() < 1e-13);
        assert!((&o.sz.commutator(&o.sminus) - &o.sminus.scale_real(2.0)).max_abs() < 1e-13);
        // With sigma_z = |0><0| - |1><1| and sigma_+ = |1><0|: [S_+, S_-] = -S_z.
        assert!((&o.splus.commutator(&o.sminus) + &o.sz).max_abs() < 1e-13);
    }
}

#[test]
fn drive_only_limits() {
    let s = make_space(2, 2).unwrap();
    let c = resonant(0.0, 2);
    let h = h_interaction::<f64>(s, &c, &drive(3.0, PI, &[1, 2]), 0.4).unwrap();
    let sx = collective_ops::<f64>(s, &all_qubits(s)).unwrap().sx;
    assert!(h.max_abs_diff(&sx.scale_real(-1.5)) < 1e-14);
    let h = h_interaction::<f64>(s, &c, &drive(3.0, 0.0, &[2]), 0.4).unwrap();
    let sxp = collective_ops::<f64>(s, &target_qubits(s)).unwrap().sx;
    assert!(h.max_abs_diff(&sxp.scale_real(1.5)) < 1e-14);
}

const PI: f64 = std::f64::consts::PI;

#[test]
fn coupling_at_time_zero() {
    let s = make_space(2, 3).unwrap();
    let g = 0.8;
    let h = h_interaction::<f64>(s, &resonant(g, 2), &drive(0.0, 0.0, &[]), 0.0).unwrap();
    let (a, ad) = cavity_ops::<f64>(s).unwrap();
    let o = collective_ops::<f64>(s, &all_qubits(s)).unwrap();
    let expect = (&a.matmul(&o.splus) + &ad.matmul(&o.sminus)).scale_real(g);
    assert!(h.max_abs_diff(&expect) < 1e-14);
}

#[test]
fn non_resonant_drive_rejected() {
    let s = make_space(1, 1).unwrap();
    let mut d = drive(1.0, 0.0, &[1]);
    d.frequency = 10.5;
    assert!(matches!(
        h_interaction::<f64>(s, &resonant(1.0, 1), &d, 0.0),
        Err(Error::UnsupportedConfiguration(_))
    ));
}

#[test]
fn rotated_frame_is_conjugated_coupling() {
    // Oracle: direct conjugation exp(i H1 t) H2(t) exp(-i H1 t), H1 = -(Omega/2) S_x.
    for (nq, cut) in [(1, 3), (2, 2), (3, 5)] {
        let s = make_space(nq, cut).unwrap();
        let c = resonant(0.37, nq);
        let omega = 4.3;
        let h1 = drive_term::<f64>(s, &drive(omega, PI, &(1..=nq).collect::<Vec<_>>())).unwrap();
        let h2 = interaction_hamiltonian::<f64>(s, &c, &[]).unwrap();
        for t in [0.0, 0.31, 1.7, 5.2] {
            let u1 = h1.exp_i_hermitian(t);
            let expect = u1.adjoint().matmul(&h2.at(t)).matmul(&u1);
            let got = h_rotated_full::<f64>(s, &c, omega, t).unwrap();
            assert!(got.max_abs_diff(&expect) < 1e-10, "nq={nq} t={t}: {}", got.max_abs_diff(&expect));
        }
    }
}

#[test]
fn fast_terms_revive() {
    let s = make_space(2, 2).unwrap();
    let c = resonant(0.5, 2);
    let delta = c.detuning(1);
    let omega = 9.0;
    let fast = |t: f64| {
        &h_rotated_full::<f64>(s, &c, omega, t).unwrap() - &h_rotated_rwa::<f64>(s, &c, t).unwrap()
    };
    let f0 = fast(0.0);
    let t = 2.0 * PI * 3.0 / omega;
    // Photon-lowering entries carry e^{i delta t}, raising entries its conjugate.
    let expect = OperatorMatrix::from_fn(s, |i, j| {
        let (_, mi) = s.split_index(i);
        let (_, mj) = s.split_index(j);
        if mi < mj {
            f0[(i, j)] * cis(delta * t)
        } else {
            f0[(i, j)] * cis(-delta * t)
        }
    });
    assert!(fast(t).max_abs_diff(&expect) < 1e-12);
    assert!(fast(t + 0.3 / omega).max_abs_diff(&expect) > 1e-3);
}

#[test]
fn rwa_properties() {
    let s = make_space(2, 3).unwrap();
    let c = resonant(0.6, 2);
    let (a, ad) = cavity_ops::<f64>(s).unwrap();
    let sx = collective_ops::<f64>(s, &all_qubits(s)).unwrap().sx;
    let h0 = h_rotated_rwa::<f64>(s, &c, 0.0).unwrap();
    assert!(h0.max_abs_diff(&(&a + &ad).matmul(&sx).scale_real(0.3)) < 1e-14);
    for t in [0.0, 0.7, 3.3] {
        let h = h_rotated_rwa::<f64>(s, &c, t).unwrap();
        assert!(h.is_hermitian(1e-12));
        assert!(h.commutator(&sx).max_abs() < 1e-12);
    }
}

#[test]
fn builders_are_hermitian() {
    let s = make_space(3, 2).unwrap();
    let mut c = resonant(0.9, 3);
    c.qubit_freq[1] = 10.4;
    let drives = [drive(2.0, 1.1, &[1, 3])];
    let h = interaction_hamiltonian::<f64>(s, &c, &drives).unwrap();
    let c = resonant(0.9, 3);
    for t in [0.0, 0.123, 2.5, 17.0] {
        assert!(h.at(t).is_hermitian(1e-12));
        assert!(h_rotated_full::<f64>(s, &c, 3.0, t).unwrap().is_hermitian(1e-12));
        assert!(h_rotated_rwa::<f64>(s, &c, t).unwrap().is_hermitian(1e-12));
    }
    assert!(h_step3::<f64>(s, 1.0, 0.3).unwrap().is_hermitian(1e-12));
}

#[test]
fn rotated_frame_needs_common_detuning() {
    let s = make_space(2, 1).unwrap();
    let mut c = resonant(0.5, 2);
    c.qubit_freq[1] = 9.0;
    assert!(h_rotated_rwa::<f64>(s, &c, 0.0).is_err());
}

#[test]
fn step3_limits() {
    let s = SpaceDescriptor::qubits(3).unwrap();
    let sx = collective_ops::<f64>(s, &all_qubits(s)).unwrap().sx;
    assert!(h_step3::<f64>(s, 1.4, 1.4).unwrap().max_abs_diff(&sx.scale_real(0.7)) < 1e-15);
    let x1 = embed_qubit_op(s, 1, &pauli::x::<f64>()).unwrap();
    assert!(h_step3::<f64>(s, 1.4, 0.0).unwrap().max_abs_diff(&x1.scale_real(0.7)) < 1e-15);
}
