use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{
    charge_qubit_map, flux_for_frequency, interaction_hamiltonian, rabi_voltage, CircuitParams, CouplingSpec,
    DriveSpec,
};
use crate::hilbert::SpaceDescriptor;
use crate::integrator::{compose, propagate, PropagationResult, PropagatorOptions, TimeDependentHamiltonian};
use crate::scalar::Real;

use super::params::ParamSet;

/// Default large detuning of a decoupled qubit, in units of `g`.
pub const DEFAULT_DECOUPLE_FACTOR: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    MethodA,
    MethodB,
    Charge,
    Atomic,
}

impl Realization {
    pub fn tag(self) -> &'static str {
        match self {
            Realization::MethodA => "method-a",
            Realization::MethodB => "method-b",
            Realization::Charge => "charge",
            Realization::Atomic => "atomic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepLabel {
    I,
    Ii,
    Iii,
}

/// How a qubit leaves the interaction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decoupling {
    /// Coupling term removed; the recorded detuning is `DEFAULT_DECOUPLE_FACTOR g`.
    Ideal,
    /// Coupling kept at detuning `factor g`.
    Finite { factor: f64 },
}

impl Decoupling {
    fn factor(self) -> f64 {
        match self {
            Decoupling::Ideal => DEFAULT_DECOUPLE_FACTOR,
            Decoupling::Finite { factor } => factor,
        }
    }

    fn keeps_coupling(self) -> bool {
        matches!(self, Decoupling::Finite { .. })
    }
}

/// Resonant pulse on one qubit [rad/s, rad].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitDrive {
    pub rabi: f64,
    pub phase: f64,
    pub frequency: f64,
}

/// Charge-qubit control values realizing one step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeControls {
    /// ac gate-voltage amplitude per qubit [V]; zero for undriven qubits.
    pub gate_voltage: Vec<f64>,
    /// Reduced flux per qubit.
    pub flux_ratio: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub label: StepLabel,
    /// [s]
    pub duration: f64,
    /// Coupling constant used in this step [rad/s].
    pub g: f64,
    pub cavity_freq: f64,
    /// Transition frequency per qubit [rad/s]; detunings derive from it.
    pub qubit_freq: Vec<f64>,
    /// Whether the coupling term of each qubit is present.
    pub coupled: Vec<bool>,
    pub drives: Vec<Option<QubitDrive>>,
    pub charge: Option<ChargeControls>,
}

impl ScheduleStep {
    pub fn detuning(&self, qubit: usize) -> f64 {
        self.qubit_freq[qubit - 1] - self.cavity_freq
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_freq.len()
    }

    /// Interaction-picture Hamiltonian of this step, in the frame of its own free
    /// Hamiltonian, with local time starting at zero.
    pub fn hamiltonian<T: Real>(&self, space: SpaceDescriptor) -> Result<TimeDependentHamiltonian<T>> {
        if space.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), found: space.num_qubits() });
        }
        let coupling = CouplingSpec {
            g: self.g,
            coupled_qubits: (1..=self.num_qubits()).filter(|&j| self.coupled[j - 1]).collect(),
            qubit_freq: self.qubit_freq.clone(),
            cavity_freq: self.cavity_freq,
        };
        let drives: Vec<DriveSpec> = self
            .drives
            .iter()
            .enumerate()
            .filter_map(|(j, d)| {
                d.map(|d| DriveSpec {
                    rabi: d.rabi,
                    phase: d.phase,
                    frequency: d.frequency,
                    applies_to: [j + 1].into_iter().collect(),
                })
            })
            .collect();
        interaction_hamiltonian(space, &coupling, &drives)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtraTimes {
    /// Cavity retuning time [s].
    pub tau_a: f64,
    /// Atom transport time, paid four times [s].
    pub tau_m: f64,
}

impl ExtraTimes {
    pub fn total(&self) -> f64 {
        self.tau_a + 4.0 * self.tau_m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub realization: Realization,
    pub n: usize,
    pub decoupling: Decoupling,
    pub steps: Vec<ScheduleStep>,
    pub extra_times: Option<ExtraTimes>,
    pub warnings: Vec<String>,
}

impl Schedule {
    pub fn num_qubits(&self) -> usize {
        self.n + 1
    }

    /// Sum of the dynamical step durations.
    pub fn dynamical_time(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }

    /// Wall-clock time including retuning and transport.
    pub fn total_time(&self) -> f64 {
        self.dynamical_time() + self.extra_times.map_or(0.0, |e| e.total())
    }

    pub fn with_rabi_scaling(&self, factors: &[f64]) -> Result<Schedule> {
        if factors.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), found: factors.len() });
        }
        let mut out = self.clone();
        for step in &mut out.steps {
            for (d, f) in step.drives.iter_mut().zip(factors) {
                if let Some(d) = d {
                    d.rabi *= f;
                }
            }
        }
        Ok(out)
    }
}

fn drive(rabi: f64, phase: f64, frequency: f64) -> Option<QubitDrive> {
    Some(QubitDrive { rabi, phase, frequency })
}

fn prepare(params: &ParamSet, decoupling: Decoupling) -> Result<Vec<String>> {
    params.require_consistent()?;
    if let Decoupling::Finite { factor } = decoupling {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter { name: "decouple_factor", reason: format!("must be positive, got {factor}") });
        }
    }
    Ok(params.violated().iter().map(|c| format!("condition `{c}` violated")).collect())
}

/// Method A: the cavity frequency stays fixed and each qubit is retuned.
pub fn schedule_method_a(params: &ParamSet, decoupling: Decoupling) -> Result<Schedule> {
    let warnings = prepare(params, decoupling)?;
    let nq = params.n + 1;
    let wc = params.cavity_freq;
    let big = decoupling.factor() * params.g;
    let keep = decoupling.keeps_coupling();

    let w1 = wc + params.delta;
    let step1 = ScheduleStep {
        label: StepLabel::I,
        duration: params.tau,
        g: params.g,
        cavity_freq: wc,
        qubit_freq: vec![w1; nq],
        coupled: vec![true; nq],
        drives: vec![drive(params.omega, PI, w1); nq],
        charge: None,
    };

    let w2 = wc + params.delta_prime;
    let wd = wc + big;
    let mut qubit_freq = vec![w2; nq];
    qubit_freq[0] = wd;
    let mut drives = vec![drive(params.omega_prime, 0.0, w2); nq];
    drives[0] = None;
    let mut coupled = vec![true; nq];
    coupled[0] = keep;
    let step2 = ScheduleStep {
        label: StepLabel::Ii,
        duration: params.tau_prime,
        g: params.g_prime,
        cavity_freq: wc,
        qubit_freq,
        coupled,
        drives,
        charge: None,
    };

    let mut drives = vec![drive(params.omega_r, 0.0, wd); nq];
    drives[0] = drive(params.omega1, 0.0, wd);
    let step3 = ScheduleStep {
        label: StepLabel::Iii,
        duration: params.tau,
        g: params.g,
        cavity_freq: wc,
        qubit_freq: vec![wd; nq],
        coupled: vec![keep; nq],
        drives,
        charge: None,
    };

    Ok(Schedule {
        realization: Realization::MethodA,
        n: params.n,
        decoupling,
        steps: vec![step1, step2, step3],
        extra_times: None,
        warnings,
    })
}

/// Method B: target frequencies stay fixed and the cavity is retuned; qubit 1 is
/// detuned only during step (ii).
pub fn schedule_method_b(params: &ParamSet, decoupling: Decoupling) -> Result<Schedule> {
    let warnings = prepare(params, decoupling)?;
    let nq = params.n + 1;
    let big = decoupling.factor() * params.g;
    let keep = decoupling.keeps_coupling();
    // Step (i) shares its absolute frequencies with method A.
    let wt = params.cavity_freq + params.delta;

    let step1 = ScheduleStep {
        label: StepLabel::I,
        duration: params.tau,
        g: params.g,
        cavity_freq: wt - params.delta,
        qubit_freq: vec![wt; nq],
        coupled: vec![true; nq],
        drives: vec![drive(params.omega, PI, wt); nq],
        charge: None,
    };

    let wc2 = wt - params.delta_prime;
    let mut qubit_freq = vec![wt; nq];
    qubit_freq[0] = wc2 + big;
    let mut drives = vec![drive(params.omega_prime, 0.0, wt); nq];
    drives[0] = None;
    let mut coupled = vec![true; nq];
    coupled[0] = keep;
    let step2 = ScheduleStep {
        label: StepLabel::Ii,
        duration: params.tau_prime,
        g: params.g_prime,
        cavity_freq: wc2,
        qubit_freq,
        coupled,
        drives,
        charge: None,
    };

    let mut drives = vec![drive(params.omega_r, 0.0, wt); nq];
    drives[0] = drive(params.omega1, 0.0, wt);
    let step3 = ScheduleStep {
        label: StepLabel::Iii,
        duration: params.tau,
        g: params.g,
        cavity_freq: wt - big,
        qubit_freq: vec![wt; nq],
        coupled: vec![keep; nq],
        drives,
        charge: None,
    };

    Ok(Schedule {
        realization: Realization::MethodB,
        n: params.n,
        decoupling,
        steps: vec![step1, step2, step3],
        extra_times: None,
        warnings,
    })
}

/// Method-A schedule annotated with the gate voltages and flux biases of charge qubits.
pub fn schedule_charge(params: &ParamSet, circuit: &CircuitParams) -> Result<Schedule> {
    let mapped = charge_qubit_map(circuit, params.cavity_freq)?;
    if (mapped.g - params.g).abs() > 0.01 * params.g {
        return Err(Error::InconsistentParameters {
            violated: vec![format!("coupling: circuit gives g = {} rad/s, parameters need {} rad/s", mapped.g, params.g)],
        });
    }
    let mut schedule = schedule_method_a(params, Decoupling::Ideal)?;
    schedule.realization = Realization::Charge;
    for step in &mut schedule.steps {
        let gate_voltage = step
            .drives
            .iter()
            .map(|d| d.map_or(Ok(0.0), |d| rabi_voltage(d.rabi, circuit)))
            .collect::<Result<Vec<_>>>()?;
        let flux_ratio = step
            .qubit_freq
            .iter()
            .map(|&w| flux_for_frequency(w, circuit.e_j0))
            .collect::<Result<Vec<_>>>()?;
        step.charge = Some(ChargeControls { gate_voltage, flux_ratio });
    }
    Ok(schedule)
}

/// Atoms shuttled through one cavity: the unitaries of method B with ideal
/// decoupling, plus cavity retuning and transport times.
pub fn schedule_atoms(params: &ParamSet, tau_a: f64, tau_m: f64) -> Result<Schedule> {
    for (name, v) in [("tau_a", tau_a), ("tau_m", tau_m)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter { name, reason: format!("must be non-negative, got {v}") });
        }
    }
    let mut schedule = schedule_method_b(params, Decoupling::Ideal)?;
    schedule.realization = Realization::Atomic;
    schedule.extra_times = Some(ExtraTimes { tau_a, tau_m });
    Ok(schedule)
}

/// Interchange form with frequencies in Hz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDocument {
    pub realization: Realization,
    pub n: usize,
    pub decoupling: Decoupling,
    pub steps: Vec<StepDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_times: Option<ExtraTimesDocument>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDocument {
    pub label: StepLabel,
    pub duration_s: f64,
    pub coupling_hz: f64,
    pub cavity_freq_hz: f64,
    pub qubit_freq_hz: Vec<f64>,
    pub detuning_hz: Vec<f64>,
    pub coupled: Vec<bool>,
    pub drive: Vec<Option<DriveDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<ChargeControls>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveDocument {
    pub rabi_hz: f64,
    pub phase_rad: f64,
    pub freq_hz: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtraTimesDocument {
    pub tau_a_s: f64,
    pub tau_m_s: f64,
}

const TWO_PI: f64 = 2.0 * PI;

impl From<&Schedule> for ScheduleDocument {
    fn from(s: &Schedule) -> Self {
        ScheduleDocument {
            realization: s.realization,
            n: s.n,
            decoupling: s.decoupling,
            steps: s
                .steps
                .iter()
                .map(|st| StepDocument {
                    label: st.label,
                    duration_s: st.duration,
                    coupling_hz: st.g / TWO_PI,
                    cavity_freq_hz: st.cavity_freq / TWO_PI,
                    qubit_freq_hz: st.qubit_freq.iter().map(|w| w / TWO_PI).collect(),
                    detuning_hz: (1..=st.num_qubits()).map(|j| st.detuning(j) / TWO_PI).collect(),
                    coupled: st.coupled.clone(),
                    drive: st
                        .drives
                        .iter()
                        .map(|d| {
                            d.map(|d| DriveDocument {
                                rabi_hz: d.rabi / TWO_PI,
                                phase_rad: d.phase,
                                freq_hz: d.frequency / TWO_PI,
                            })
                        })
                        .collect(),
                    charge: st.charge.clone(),
                })
                .collect(),
            extra_times: s.extra_times.map(|e| ExtraTimesDocument { tau_a_s: e.tau_a, tau_m_s: e.tau_m }),
            warnings: s.warnings.clone(),
        }
    }
}

impl TryFrom<ScheduleDocument> for Schedule {
    type Error = Error;

    fn try_from(d: ScheduleDocument) -> Result<Self> {
        let nq = d.n + 1;
        if d.steps.len() != 3 {
            return Err(Error::InvalidArgument(format!("a schedule has three steps, found {}", d.steps.len())));
        }
        let steps = d
            .steps
            .into_iter()
            .map(|st| {
                let lens = [st.qubit_freq_hz.len(), st.coupled.len(), st.drive.len(), st.detuning_hz.len()];
                if lens.iter().any(|&l| l != nq) {
                    return Err(Error::DimensionMismatch { expected: nq, found: *lens.iter().find(|&&l| l != nq).unwrap() });
                }
                if !(st.duration_s > 0.0) {
                    return Err(Error::InvalidParameter { name: "duration_s", reason: "must be positive".into() });
                }
                let step = ScheduleStep {
                    label: st.label,
                    duration: st.duration_s,
                    g: st.coupling_hz * TWO_PI,
                    cavity_freq: st.cavity_freq_hz * TWO_PI,
                    qubit_freq: st.qubit_freq_hz.iter().map(|f| f * TWO_PI).collect(),
                    coupled: st.coupled,
                    drives: st
                        .drive
                        .iter()
                        .map(|d| d.map(|d| QubitDrive { rabi: d.rabi_hz * TWO_PI, phase: d.phase_rad, frequency: d.freq_hz * TWO_PI }))
                        .collect(),
                    charge: st.charge,
                };
                for (j, &det) in st.detuning_hz.iter().enumerate() {
                    let derived = step.detuning(j + 1) / TWO_PI;
                    if (derived - det).abs() > 1e-6 * det.abs().max(1.0) {
                        return Err(Error::InvalidArgument(format!(
                            "detuning_hz[{j}] = {det} disagrees with qubit and cavity frequencies ({derived})"
                        )));
                    }
                }
                Ok(step)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Schedule {
            realization: d.realization,
            n: d.n,
            decoupling: d.decoupling,
            steps,
            extra_times: d.extra_times.map(|e| ExtraTimes { tau_a: e.tau_a_s, tau_m: e.tau_m_s }),
            warnings: d.warnings,
        })
    }
}

/// Full dynamics of every step, each propagated over its own duration and composed
/// in chronological order.
pub fn propagate_schedule<T: Real>(
    schedule: &Schedule,
    space: SpaceDescriptor,
    opts: &PropagatorOptions,
) -> Result<Vec<PropagationResult<T>>> {
    schedule
        .steps
        .par_iter()
        .map(|step| propagate(&step.hamiltonian::<T>(space)?, 0.0, step.duration, opts))
        .collect()
}

pub fn schedule_propagator<T: Real>(
    schedule: &Schedule,
    space: SpaceDescriptor,
    opts: &PropagatorOptions,
) -> Result<PropagationResult<T>> {
    compose(&propagate_schedule(schedule, space, opts)?)
}
