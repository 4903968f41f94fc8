use std::f64::consts::PI;

use ntcp_core::analysis::{
    cavity_robustness, rabi_deviation_sensitivity, run_experiment, CavityState, ExperimentConfig,
};
use ntcp_core::effective::{combined_evolution, factorized_propagator, ideal_ntcp};
use ntcp_core::hamiltonians::{
    drive_term, interaction_hamiltonian, rotated_full_hamiltonian, rotated_rwa_hamiltonian, CouplingSpec, DriveSpec,
};
use ntcp_core::hilbert::{
    channel_fidelity, default_probes, make_space, unitary_channel, OperatorMatrix, SpaceDescriptor,
};
use ntcp_core::integrator::{compose, propagate, PropagatorOptions};
use ntcp_core::protocol::{
    schedule_method_a, schedule_method_b, schedule_propagator, solve_parameters, Decoupling, Realization,
};

fn mhz(x: f64) -> f64 {
    2.0 * PI * x * 1e6
}

/// Largest entry difference restricted to photon numbers `<= cut` on both sides.
fn block_diff(a: &OperatorMatrix<f64>, b: &OperatorMatrix<f64>, cut: usize) -> f64 {
    let s = a.space();
    let mut worst: f64 = 0.0;
    for i in 0..s.dim() {
        for j in 0..s.dim() {
            if s.split_index(i).1 <= cut && s.split_index(j).1 <= cut {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
    }
    worst
}

#[test]
fn propagators_stay_unitary() {
    let space = make_space(2, 3).unwrap();
    let c = CouplingSpec::uniform(0.3, 2, 9.4, 10.0);
    let d = DriveSpec { rabi: 6.0, phase: PI, frequency: 9.4, applies_to: [1, 2].into_iter().collect() };
    let h = interaction_hamiltonian::<f64>(space, &c, &[d]).unwrap();
    for tol in [1e-4, 1e-6, 1e-8] {
        let r = propagate(&h, 0.0, 7.0, &PropagatorOptions::with_tol(tol)).unwrap();
        assert!(r.max_unitarity_defect < 10.0 * tol, "tol {tol}: {}", r.max_unitarity_defect);
    }
}

#[test]
fn tighter_tolerance_never_moves_away_from_closed_form() {
    let delta = -2.0;
    let g = 0.3;
    let space = make_space(1, 20).unwrap();
    let h = rotated_rwa_hamiltonian::<f64>(space, &CouplingSpec::uniform(g, 1, 10.0 + delta, 10.0)).unwrap();
    let tau = 2.0 * PI / 2.0;
    let exact = factorized_propagator::<f64>(space, g, delta, tau).unwrap();
    let devs: Vec<f64> = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8]
        .iter()
        .map(|&tol| block_diff(&propagate(&h, 0.0, tau, &PropagatorOptions::with_tol(tol)).unwrap().propagator, &exact, 6))
        .collect();
    assert!(devs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{devs:?}");
    assert!(devs[5] < 1e-8);
}

#[test]
fn interaction_frame_equals_drive_times_rotated_frame() {
    let space = make_space(2, 3).unwrap();
    let c = CouplingSpec::uniform(0.4, 2, 9.2, 10.0);
    let omega = 8.0;
    let drive = DriveSpec { rabi: omega, phase: PI, frequency: 9.2, applies_to: [1, 2].into_iter().collect() };
    let tol = 1e-8;
    let opts = PropagatorOptions::with_tol(tol);
    let tau = 2.0 * PI / 0.8;
    let direct = propagate(&interaction_hamiltonian::<f64>(space, &c, &[drive.clone()]).unwrap(), 0.0, tau, &opts).unwrap();
    let rotated = propagate(&rotated_full_hamiltonian::<f64>(space, &c, omega).unwrap(), 0.0, tau, &opts).unwrap();
    let h1 = drive_term::<f64>(space, &drive).unwrap();
    let lifted = h1.exp_i_hermitian(tau).matmul(&rotated.propagator);
    assert!(direct.propagator.max_abs_diff(&lifted) < 5.0 * tol);
}

#[test]
fn fast_terms_fade_as_the_drive_grows() {
    let space = make_space(2, 4).unwrap();
    let (g, delta) = (0.5, -1.0);
    let c = CouplingSpec::uniform(g, 2, 10.0 + delta, 10.0);
    let tau = 2.0 * PI;
    let opts = PropagatorOptions::with_tol(1e-9);
    let rwa = propagate(&rotated_rwa_hamiltonian::<f64>(space, &c).unwrap(), 0.0, tau, &opts).unwrap();
    let dev = |ratio: f64| {
        let full = propagate(&rotated_full_hamiltonian::<f64>(space, &c, ratio * 1.0).unwrap(), 0.0, tau, &opts).unwrap();
        block_diff(&full.propagator, &rwa.propagator, 2)
    };
    let (d10, d50) = (dev(10.0), dev(50.0));
    assert!(d50 < d10, "{d10} {d50}");
}

#[test]
fn composing_with_the_inverse_gives_identity() {
    let space = make_space(1, 2).unwrap();
    let c = CouplingSpec::uniform(0.2, 1, 9.0, 10.0);
    let h = interaction_hamiltonian::<f64>(space, &c, &[]).unwrap();
    let opts = PropagatorOptions::with_tol(1e-9);
    let fwd = propagate(&h, 0.0, 3.0, &opts).unwrap();
    let mut back = fwd.clone();
    back.propagator = fwd.propagator.adjoint();
    let id = compose(&[fwd.clone(), back]).unwrap();
    assert!(id.propagator.max_abs_diff(&OperatorMatrix::identity(space)) < 1e-12 + 2.0 * fwd.max_unitarity_defect);
}

#[test]
fn methods_a_and_b_agree() {
    let p = solve_parameters(mhz(22.0), 0, 15.0, 2, None).unwrap();
    let space = make_space(3, 3).unwrap();
    let tol = 1e-7;
    let opts = PropagatorOptions::with_tol(tol);
    for dec in [Decoupling::Ideal, Decoupling::Finite { factor: 50.0 }] {
        let a = schedule_propagator::<f64>(&schedule_method_a(&p, dec).unwrap(), space, &opts).unwrap();
        let b = schedule_propagator::<f64>(&schedule_method_b(&p, dec).unwrap(), space, &opts).unwrap();
        assert!(a.propagator.max_abs_diff(&b.propagator) < 10.0 * tol);
    }
}

#[test]
fn full_dynamics_approach_the_gate_and_spread_shrinks() {
    let states = [CavityState::Vacuum, CavityState::Fock { n: 1 }];
    let opts = PropagatorOptions::with_tol(1e-7);
    let run = |ratio: f64| {
        let p = solve_parameters(mhz(22.0), 0, ratio, 1, None).unwrap();
        cavity_robustness(&schedule_method_a(&p, Decoupling::Ideal).unwrap(), 6, &states, &opts).unwrap()
    };
    let (r15, r50) = (run(15.0), run(50.0));
    assert!(r50.spread < r15.spread, "{} {}", r15.spread, r50.spread);
    assert!(r50.fidelities["vacuum"] > r15.fidelities["vacuum"]);
    assert!(r50.fidelities.values().all(|&f| f > 0.99 && f <= 1.0));
}

#[test]
fn effective_model_is_blind_to_the_cavity_state() {
    let p = solve_parameters(mhz(22.0), 0, 15.0, 1, None).unwrap();
    let space = make_space(2, 8).unwrap();
    let gate = combined_evolution::<f64>(SpaceDescriptor::qubits(2).unwrap(), &p).unwrap();
    let u = gate.matrix.extend_to_cavity(space).unwrap();
    let ideal = ideal_ntcp::<f64>(1).unwrap().matrix;
    let probes = default_probes::<f64>(ideal.space());
    let cavity = SpaceDescriptor::cavity(8).unwrap();
    let f: Vec<f64> = [CavityState::Vacuum, CavityState::Fock { n: 3 }, CavityState::Thermal { nbar: 0.1 }]
        .iter()
        .map(|s| {
            let rho = s.prepare::<f64>(cavity).unwrap().density;
            channel_fidelity(unitary_channel(&u, &rho), &ideal, &probes).unwrap()
        })
        .collect();
    assert!(f.iter().all(|&x| (x - f[0]).abs() < 1e-13 && (x - 1.0).abs() < 1e-10), "{f:?}");
}

#[test]
fn zero_deviation_reproduces_the_unperturbed_run() {
    let p = solve_parameters(mhz(22.0), 0, 15.0, 1, None).unwrap();
    let s = schedule_method_a(&p, Decoupling::Ideal).unwrap();
    let opts = PropagatorOptions::with_tol(1e-7);
    let base = cavity_robustness(&s, 4, &[CavityState::Vacuum], &opts).unwrap().fidelities["vacuum"];
    let st = rabi_deviation_sensitivity(&s, 4, 0.0, 3, 11, &opts).unwrap();
    assert!(st.fidelities.iter().all(|&f| f == base));
    assert!(rabi_deviation_sensitivity(&s, 4, 0.3, 3, 11, &opts).is_err());
}

#[test]
fn rabi_deviation_regression() {
    let p = solve_parameters(mhz(22.0), 0, 15.0, 2, None).unwrap();
    let s = schedule_method_a(&p, Decoupling::Ideal).unwrap();
    let opts = PropagatorOptions::with_tol(1e-7);
    let st = rabi_deviation_sensitivity(&s, 3, 0.05, 16, 2024, &opts).unwrap();
    assert_eq!(st.fidelities.len(), 16);
    assert!((st.mean - 0.887686237).abs() < 1e-8, "{}", st.mean);
    assert!((st.min - 0.874917655).abs() < 1e-8, "{}", st.min);
    assert!((st.max - 0.894928848).abs() < 1e-8, "{}", st.max);
    assert_eq!(st, rabi_deviation_sensitivity(&s, 3, 0.05, 16, 2024, &opts).unwrap());
}

#[test]
fn larger_deviation_does_not_help_on_average() {
    let p = solve_parameters(mhz(22.0), 0, 50.0, 1, None).unwrap();
    let s = schedule_method_a(&p, Decoupling::Ideal).unwrap();
    let opts = PropagatorOptions::with_tol(1e-7);
    let m0 = rabi_deviation_sensitivity(&s, 4, 0.0, 8, 5, &opts).unwrap().mean;
    let m1 = rabi_deviation_sensitivity(&s, 4, 0.1, 8, 5, &opts).unwrap().mean;
    assert!(m1 <= m0, "{m0} {m1}");
}

#[test]
fn charge_report_echoes_reference_numbers() {
    let c = ExperimentConfig {
        realization: Realization::Charge,
        n: 2,
        g_hz: 22e6,
        omega_ratio: 15.0,
        fock_cutoff: 3,
        ..Default::default()
    };
    let r = run_experiment(&c).unwrap();
    let to_mhz = |w: f64| w / (2.0 * PI * 1e6);
    assert!((to_mhz(r.params.omega_prime) - 330.0).abs() < 1e-9);
    assert!((to_mhz(r.params.omega1) - 352.0).abs() < 1e-9);
    assert!((to_mhz(r.params.omega_r) - 11.0).abs() < 1e-9);
    assert!((r.timing.t_op * 1e9 - 68.18).abs() < 0.01);
    assert!(r.degeneracy.is_some());
    assert!(r.warnings.iter().any(|w| w.contains("794 ns")));
    assert!(r.full_fidelity["vacuum"] > 0.8 && r.full_fidelity["vacuum"] <= 1.0);
}

#[test]
fn minimal_two_qubit_run() {
    let c = ExperimentConfig { n: 1, fock_cutoff: 3, ..Default::default() };
    let r = run_experiment(&c).unwrap();
    assert!((r.effective_fidelity - 1.0).abs() < 1e-12);
    assert_eq!(r, run_experiment(&c).unwrap());
}
