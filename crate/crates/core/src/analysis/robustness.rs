use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cavity::{CavityState, PreparedCavityState};
use crate::effective::ideal_ntcp;
use crate::error::{Error, Result};
use crate::hilbert::{channel_fidelity, default_probes, make_space, unitary_channel, SpaceDescriptor};
use crate::integrator::{PropagationResult, PropagatorOptions};
use crate::protocol::{schedule_propagator, Schedule};

/// Full-dynamics propagator of a schedule on `n + 1` qubits and a cavity truncated at `fock_cutoff`.
pub fn full_propagator(schedule: &Schedule, fock_cutoff: usize, opts: &PropagatorOptions) -> Result<PropagationResult<f64>> {
    let space = make_space(schedule.num_qubits(), fock_cutoff)?;
    schedule_propagator(schedule, space, opts)
}

fn cavity_space(fock_cutoff: usize) -> Result<SpaceDescriptor> {
    SpaceDescriptor::cavity(fock_cutoff)
}

/// Channel fidelity of `propagator` to the ideal gate for each prepared cavity state.
pub fn fidelities_for_states(
    propagator: &PropagationResult<f64>,
    n: usize,
    states: &[PreparedCavityState<f64>],
) -> Result<Vec<f64>> {
    let ideal = ideal_ntcp::<f64>(n)?.matrix;
    let probes = default_probes::<f64>(ideal.space());
    states
        .par_iter()
        .map(|s| channel_fidelity(unitary_channel(&propagator.propagator, &s.density), &ideal, &probes))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    /// Channel fidelity to the ideal gate, by cavity-state label.
    pub fidelities: BTreeMap<String, f64>,
    pub truncation_weights: BTreeMap<String, f64>,
    /// `max - min` over the fidelities.
    pub spread: f64,
    pub step_count: usize,
    pub estimated_error: f64,
    /// Largest top-Fock population reached from vacuum inputs.
    pub truncation_leakage: f64,
}

pub fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Full-dynamics fidelity of the schedule for each initial cavity state.
pub fn cavity_robustness(
    schedule: &Schedule,
    fock_cutoff: usize,
    cavity_states: &[CavityState],
    opts: &PropagatorOptions,
) -> Result<RobustnessReport> {
    if cavity_states.is_empty() {
        return Err(Error::InvalidArgument("at least one cavity state is required".into()));
    }
    let cavity = cavity_space(fock_cutoff)?;
    let prepared = cavity_states.iter().map(|s| s.prepare::<f64>(cavity)).collect::<Result<Vec<_>>>()?;
    let result = full_propagator(schedule, fock_cutoff, opts)?;
    let values = fidelities_for_states(&result, schedule.n, &prepared)?;
    Ok(RobustnessReport {
        spread: spread(values.iter().copied()),
        fidelities: prepared.iter().map(|s| s.label.clone()).zip(values).collect(),
        truncation_weights: prepared.iter().map(|s| (s.label.clone(), s.truncation_weight)).collect(),
        step_count: result.step_count,
        estimated_error: result.estimated_error,
        truncation_leakage: result.truncation_leakage,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityStats {
    pub fraction: f64,
    pub trials: usize,
    pub seed: u64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Per-trial fidelities in trial order.
    pub fidelities: Vec<f64>,
}

/// Per-qubit Rabi scale factors `1 + fraction * u`, `u` uniform in `[-1, 1]`, one row per trial.
pub fn rabi_factors(num_qubits: usize, fraction: f64, trials: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| (0..num_qubits).map(|_| 1.0 + fraction * rng.gen_range(-1.0..=1.0)).collect())
        .collect()
}

/// Vacuum-cavity fidelity statistics when each qubit's Rabi frequencies are scaled
/// by an independent random factor within `±fraction`.
pub fn rabi_deviation_sensitivity(
    schedule: &Schedule,
    fock_cutoff: usize,
    fraction: f64,
    trials: usize,
    seed: u64,
    opts: &PropagatorOptions,
) -> Result<SensitivityStats> {
    if !(0.0..=0.2).contains(&fraction) {
        return Err(Error::InvalidParameter { name: "deviation_fraction", reason: format!("must lie in [0, 0.2], got {fraction}") });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter { name: "trials", reason: "must be positive".into() });
    }
    let vacuum = [CavityState::Vacuum.prepare::<f64>(cavity_space(fock_cutoff)?)?];
    let fidelities = rabi_factors(schedule.num_qubits(), fraction, trials, seed)
        .par_iter()
        .map(|f| {
            let perturbed = schedule.with_rabi_scaling(f)?;
            let result = full_propagator(&perturbed, fock_cutoff, opts)?;
            Ok(fidelities_for_states(&result, schedule.n, &vacuum)?[0])
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SensitivityStats {
        fraction,
        trials,
        seed,
        mean: fidelities.iter().sum::<f64>() / trials as f64,
        min: fidelities.iter().copied().fold(f64::INFINITY, f64::min),
        max: fidelities.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        fidelities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_are_seeded_and_bounded() {
        let a = rabi_factors(3, 0.05, 10, 7);
        assert_eq!(a, rabi_factors(3, 0.05, 10, 7));
        assert_ne!(a, rabi_factors(3, 0.05, 10, 8));
        assert!(a.iter().flatten().all(|f| (0.95..=1.05).contains(f)));
        assert!(rabi_factors(2, 0.0, 4, 1).iter().flatten().all(|&f| f == 1.0));
    }

    #[test]
    fn spread_of_values() {
        assert_eq!(spread([0.9, 0.95, 0.92]), 0.95 - 0.9);
        assert_eq!(spread(Vec::<f64>::new()), 0.0);
    }
}
