//! Hamiltonian builders with `hbar = 1`: every energy is an angular frequency in rad/s.
//!
//! Conventions: `sigma_z = |0><0| - |1><1|` (ground state `|0>`), `sigma_+ = |1><0|`,
//! `sigma_- = |0><1|`, `sigma_x = sigma_+ + sigma_-`. Interaction-picture Hamiltonians
//! are taken with respect to `H0 = -(omega_0/2) S_z + omega_c a^dagger a` and assume
//! resonant drives (`omega = omega_0`).

mod circuit;

pub use circuit::{
    charge_basis_transform, charge_qubit_map, degeneracy_deviations, flux_for_frequency, rabi_voltage,
    CircuitParams, ChargeMapping, DegeneracyDeviations, E_CHARGE, H_PLANCK, HBAR,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{cavity_ops, embed_qubit_op, pauli, OperatorMatrix, SpaceDescriptor};
use crate::integrator::TimeDependentHamiltonian;
use crate::scalar::{cis, cr, Real};

/// Classical pulse applied to a set of qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    /// Rabi frequency `Omega >= 0` [rad/s].
    pub rabi: f64,
    /// Initial pulse phase `phi` [rad].
    pub phase: f64,
    /// Carrier frequency `omega` [rad/s].
    pub frequency: f64,
    /// 1-based qubit indices.
    pub applies_to: BTreeSet<usize>,
}

/// Qubit-cavity coupling. The detuning of qubit `j` is always derived as
/// `qubit_freq[j-1] - cavity_freq`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    /// Coupling constant `g` [rad/s].
    pub g: f64,
    pub coupled_qubits: BTreeSet<usize>,
    /// Transition frequency `omega_0` of every qubit [rad/s].
    pub qubit_freq: Vec<f64>,
    /// Cavity frequency `omega_c` [rad/s].
    pub cavity_freq: f64,
}

impl CouplingSpec {
    /// All qubits at one transition frequency, all coupled.
    pub fn uniform(g: f64, num_qubits: usize, qubit_freq: f64, cavity_freq: f64) -> Self {
        CouplingSpec {
            g,
            coupled_qubits: (1..=num_qubits).collect(),
            qubit_freq: vec![qubit_freq; num_qubits],
            cavity_freq,
        }
    }

    pub fn detuning(&self, qubit: usize) -> f64 {
        self.qubit_freq[qubit - 1] - self.cavity_freq
    }

    fn validate(&self, space: SpaceDescriptor) -> Result<()> {
        if self.qubit_freq.len() != space.num_qubits() {
            return Err(Error::DimensionMismatch { expected: space.num_qubits(), found: self.qubit_freq.len() });
        }
        self.coupled_qubits.iter().try_for_each(|&j| space.check_qubit(j))
    }

    /// Common detuning of the coupled set; the rotated-frame builders require one.
    fn common_detuning(&self) -> Result<f64> {
        let mut it = self.coupled_qubits.iter().map(|&j| self.detuning(j));
        let first = it.next().ok_or_else(|| Error::InvalidArgument("no coupled qubits".into()))?;
        for d in it {
            if (d - first).abs() > 1e-12 * first.abs().max(1.0) {
                return Err(Error::UnsupportedConfiguration(
                    "rotated-frame Hamiltonians need a common detuning".into(),
                ));
            }
        }
        Ok(first)
    }
}

/// Collective operators `S_z, S_+, S_-, S_x` summed over a qubit subset.
#[derive(Clone, Debug)]
pub struct CollectiveOps<T> {
    pub sz: OperatorMatrix<T>,
    pub splus: OperatorMatrix<T>,
    pub sminus: OperatorMatrix<T>,
    pub sx: OperatorMatrix<T>,
}

pub fn collective_ops<T: Real>(space: SpaceDescriptor, included: &BTreeSet<usize>) -> Result<CollectiveOps<T>> {
    if included.is_empty() {
        return Err(Error::InvalidArgument("collective operators need a non-empty qubit set".into()));
    }
    let mut ops = CollectiveOps {
        sz: OperatorMatrix::zeros(space),
        splus: OperatorMatrix::zeros(space),
        sminus: OperatorMatrix::zeros(space),
        sx: OperatorMatrix::zeros(space),
    };
    let one = cr(T::one());
    for &j in included {
        ops.sz.add_scaled(one, &embed_qubit_op(space, j, &pauli::z())?);
        ops.splus.add_scaled(one, &embed_qubit_op(space, j, &pauli::raising())?);
        ops.sminus.add_scaled(one, &embed_qubit_op(space, j, &pauli::lowering())?);
        ops.sx.add_scaled(one, &embed_qubit_op(space, j, &pauli::x())?);
    }
    Ok(ops)
}

/// `{1, ..., n}`.
pub fn all_qubits(space: SpaceDescriptor) -> BTreeSet<usize> {
    (1..=space.num_qubits()).collect()
}

/// `{2, ..., n}`: the target register.
pub fn target_qubits(space: SpaceDescriptor) -> BTreeSet<usize> {
    (2..=space.num_qubits()).collect()
}

fn resonance_check(coupling: &CouplingSpec, drive: &DriveSpec) -> Result<()> {
    for &j in &drive.applies_to {
        let w0 = coupling.qubit_freq[j - 1];
        if (drive.frequency - w0).abs() > 1e-9 * w0.abs().max(1.0) {
            return Err(Error::UnsupportedConfiguration(format!(
                "drive on qubit {j} at {} rad/s is not resonant with omega_0 = {w0} rad/s",
                drive.frequency
            )));
        }
    }
    Ok(())
}

/// Drive term `(Omega/2)(e^{i phi} S_- + e^{-i phi} S_+)` over `drive.applies_to`.
pub fn drive_term<T: Real>(space: SpaceDescriptor, drive: &DriveSpec) -> Result<OperatorMatrix<T>> {
    let mut h = OperatorMatrix::zeros(space);
    if drive.applies_to.is_empty() || drive.rabi == 0.0 {
        return Ok(h);
    }
    drive.applies_to.iter().try_for_each(|&j| space.check_qubit(j))?;
    let ops = collective_ops::<T>(space, &drive.applies_to)?;
    let half = T::of(drive.rabi / 2.0);
    let phase = T::of(drive.phase);
    h.add_scaled(cis(phase) * half, &ops.sminus);
    h.add_scaled(cis(-phase) * half, &ops.splus);
    Ok(h)
}

/// Interaction-picture Hamiltonian `H1 + H2(t)` for several drives and one coupling,
/// as a harmonic decomposition `C + sum_k (e^{i w_k t} X_k + h.c.)`.
pub fn interaction_hamiltonian<T: Real>(
    space: SpaceDescriptor,
    coupling: &CouplingSpec,
    drives: &[DriveSpec],
) -> Result<TimeDependentHamiltonian<T>> {
    coupling.validate(space)?;
    let mut constant = OperatorMatrix::zeros(space);
    for d in drives {
        resonance_check(coupling, d)?;
        constant = &constant + &drive_term(space, d)?;
    }
    let mut terms: Vec<(f64, OperatorMatrix<T>)> = Vec::new();
    if coupling.g != 0.0 && !coupling.coupled_qubits.is_empty() {
        let (a, _) = cavity_ops::<T>(space)?;
        for &j in &coupling.coupled_qubits {
            let delta = coupling.detuning(j);
            let x = a.matmul(&embed_qubit_op(space, j, &pauli::raising())?).scale_real(T::of(coupling.g));
            match terms.iter_mut().find(|(w, _)| *w == delta) {
                Some((_, op)) => *op = &*op + &x,
                None => terms.push((delta, x)),
            }
        }
    }
    Ok(TimeDependentHamiltonian::harmonic(
        space,
        constant,
        terms.into_iter().map(|(w, x)| (T::of(w), x)).collect(),
    ))
}

/// `H1 + H2(t)` in the interaction picture with respect to `H0`, for one drive.
pub fn h_interaction<T: Real>(
    space: SpaceDescriptor,
    coupling: &CouplingSpec,
    drive: &DriveSpec,
    t: T,
) -> Result<OperatorMatrix<T>> {
    Ok(interaction_hamiltonian(space, coupling, std::slice::from_ref(drive))?.at(t))
}

/// Exact rotated-frame Hamiltonian `exp(i H1 t) H2 exp(-i H1 t)` for `H1 = -(Omega/2) S_x`
/// (pulse phase `pi`), including the `e^{±i Omega t}` terms.
pub fn rotated_full_hamiltonian<T: Real>(
    space: SpaceDescriptor,
    coupling: &CouplingSpec,
    rabi: f64,
) -> Result<TimeDependentHamiltonian<T>> {
    coupling.validate(space)?;
    let delta = coupling.common_detuning()?;
    let ops = collective_ops::<T>(space, &coupling.coupled_qubits)?;
    let (a, _) = cavity_ops::<T>(space)?;
    let g = T::of(coupling.g);
    let half = T::of(0.5);
    let quarter = T::of(0.25);

    let slow = a.matmul(&ops.sx).scale_real(g * half);
    // (S_z - S_- + S_+) e^{-i Omega t}
    let minus_part = &(&ops.sz - &ops.sminus) + &ops.splus;
    // -(S_z + S_- - S_+) e^{+i Omega t}
    let plus_part = &(&ops.sz + &ops.sminus) - &ops.splus;
    let low = a.matmul(&minus_part).scale_real(g * quarter);
    let high = a.matmul(&plus_part).scale_real(-g * quarter);
    Ok(TimeDependentHamiltonian::harmonic(
        space,
        OperatorMatrix::zeros(space),
        vec![(T::of(delta), slow), (T::of(delta - rabi), low), (T::of(delta + rabi), high)],
    ))
}

pub fn h_rotated_full<T: Real>(space: SpaceDescriptor, coupling: &CouplingSpec, rabi: f64, t: T) -> Result<OperatorMatrix<T>> {
    Ok(rotated_full_hamiltonian(space, coupling, rabi)?.at(t))
}

/// Strong-drive limit of the rotated frame: `(g/2)(e^{i delta t} a + e^{-i delta t} a^dagger) S_x`.
pub fn rotated_rwa_hamiltonian<T: Real>(
    space: SpaceDescriptor,
    coupling: &CouplingSpec,
) -> Result<TimeDependentHamiltonian<T>> {
    coupling.validate(space)?;
    let delta = coupling.common_detuning()?;
    let ops = collective_ops::<T>(space, &coupling.coupled_qubits)?;
    let (a, _) = cavity_ops::<T>(space)?;
    let x = a.matmul(&ops.sx).scale_real(T::of(coupling.g / 2.0));
    Ok(TimeDependentHamiltonian::harmonic(space, OperatorMatrix::zeros(space), vec![(T::of(delta), x)]))
}

pub fn h_rotated_rwa<T: Real>(space: SpaceDescriptor, coupling: &CouplingSpec, t: T) -> Result<OperatorMatrix<T>> {
    Ok(rotated_rwa_hamiltonian(space, coupling)?.at(t))
}

/// Decoupled single-qubit drives: `(Omega_1/2) sigma_{x,1} + (Omega_r/2) S'_x`.
pub fn h_step3<T: Real>(space: SpaceDescriptor, omega1: f64, omega_r: f64) -> Result<OperatorMatrix<T>> {
    let mut h = embed_qubit_op(space, 1, &pauli::x::<T>())?.scale_real(T::of(omega1 / 2.0));
    let targets = target_qubits(space);
    if !targets.is_empty() {
        let ops = collective_ops::<T>(space, &targets)?;
        h.add_scaled(cr(T::of(omega_r / 2.0)), &ops.sx);
    }
    Ok(h)
}

#[cfg(test)]
mod tests;
