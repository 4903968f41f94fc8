use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::cavity::CavityState;
use super::leakage::{leakage_probabilities, LeakageCase, LeakageEstimate, LeakageSpec};
use super::robustness::{cavity_robustness, rabi_deviation_sensitivity, RobustnessReport, SensitivityStats};
use crate::effective::{combined_evolution, ideal_ntcp};
use crate::error::{Error, Result};
use crate::hamiltonians::{degeneracy_deviations, CircuitParams, DegeneracyDeviations, E_CHARGE, HBAR, H_PLANCK};
use crate::hilbert::{gate_fidelity, SpaceDescriptor};
use crate::integrator::PropagatorOptions;
use crate::protocol::{
    schedule_atoms, schedule_charge, schedule_method_a, schedule_method_b, solve_parameters, timing_budget,
    ConditionCheck, Decoupling, ParamSet, Realization, Schedule, ScheduleDocument, TimingBudget,
};

const TWO_PI: f64 = 2.0 * PI;

/// Charge-qubit circuit in SI units with energies given as frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitConfig {
    pub e_j0_hz: f64,
    pub e_c_hz: f64,
    pub c_g_farad: f64,
    /// Quantum gate-voltage amplitude [V]; derived from the resonator or from `g` when absent.
    pub v0_qu: Option<f64>,
    pub length_m: Option<f64>,
    pub c0_farad_per_m: Option<f64>,
    pub max_voltage: Option<f64>,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        CircuitConfig {
            e_j0_hz: 5e9,
            e_c_hz: 32e9,
            c_g_farad: 1e-15,
            v0_qu: None,
            length_m: None,
            c0_farad_per_m: None,
            max_voltage: None,
        }
    }
}

impl CircuitConfig {
    /// Circuit parameters; without resonator data `V0_qu` is chosen so the circuit realizes `g`.
    pub fn to_params(&self, g: f64) -> CircuitParams {
        let e_c = H_PLANCK * self.e_c_hz;
        let v0_qu = match (self.v0_qu, self.length_m, self.c0_farad_per_m) {
            (Some(v), _, _) => Some(v),
            (None, Some(_), Some(_)) => None,
            _ => Some(g * HBAR * E_CHARGE / (2.0 * e_c * self.c_g_farad)),
        };
        CircuitParams {
            e_j0: H_PLANCK * self.e_j0_hz,
            e_c,
            c_g: self.c_g_farad,
            v0: 0.0,
            v0_qu,
            flux_ratio: 0.5,
            length: self.length_m,
            c0: self.c0_farad_per_m,
            max_voltage: self.max_voltage,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LeakageConfig {
    pub case: LeakageCase,
    /// Leakage-transition detuning in units of `g`.
    pub delta_ratio: f64,
}

impl Default for LeakageConfig {
    fn default() -> Self {
        LeakageConfig { case: LeakageCase::S, delta_ratio: 10.0 }
    }
}

/// One sweep dimension: explicit `values`, or `count` points from `start` to `stop`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
}

impl SweepAxis {
    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) => match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            },
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "sweep axis `{}` needs either `values` or all of `start`, `stop`, `count`",
                    self.parameter
                )))
            }
        };
        if pts.is_empty() {
            return Err(Error::InvalidArgument(format!("sweep axis `{}` has an empty range", self.parameter)));
        }
        Ok(pts)
    }
}

/// Parameter names a sweep axis may reference.
pub const SWEEPABLE: &[&str] = &[
    "n",
    "g_hz",
    "omega_ratio",
    "k",
    "g_prime_hz",
    "cavity_freq_hz",
    "fock_cutoff",
    "tol",
    "decouple_factor",
    "rabi_deviation",
    "trials",
    "t1_s",
    "t2_s",
    "quality_factor",
    "tau_a_s",
    "tau_m_s",
    "leakage_delta_ratio",
];

/// Flat experiment description; frequencies in Hz, times in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub realization: Realization,
    pub n: usize,
    pub g_hz: f64,
    pub omega_ratio: f64,
    /// Parity index; signed so that a negative value is reported by name.
    pub k: i64,
    pub g_prime_hz: Option<f64>,
    /// Defaults to 10 GHz, or 51.2 GHz for atoms.
    pub cavity_freq_hz: Option<f64>,
    pub fock_cutoff: usize,
    pub tol: f64,
    pub cavity_states: Vec<CavityState>,
    /// Large detuning of decoupled qubits in units of `g`; absent means ideal decoupling.
    pub decouple_factor: Option<f64>,
    pub full_dynamics: bool,
    pub rabi_deviation: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Default 1 us, or 30 ms for atoms.
    pub t1_s: Option<f64>,
    pub t2_s: Option<f64>,
    /// Default 1e5, or 2e8 for atoms.
    pub quality_factor: Option<f64>,
    /// Atom case only; default 1 us each.
    pub tau_a_s: Option<f64>,
    pub tau_m_s: Option<f64>,
    pub circuit: CircuitConfig,
    pub leakage: LeakageConfig,
    pub sweep: Vec<SweepAxis>,
    pub out: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            realization: Realization::MethodA,
            n: 1,
            g_hz: 22e6,
            omega_ratio: 15.0,
            k: 0,
            g_prime_hz: None,
            cavity_freq_hz: None,
            fock_cutoff: 5,
            tol: 1e-6,
            cavity_states: vec![CavityState::Vacuum],
            decouple_factor: None,
            full_dynamics: true,
            rabi_deviation: None,
            trials: 16,
            seed: 0,
            t1_s: None,
            t2_s: None,
            quality_factor: None,
            tau_a_s: None,
            tau_m_s: None,
            circuit: CircuitConfig::default(),
            leakage: LeakageConfig::default(),
            sweep: Vec::new(),
            out: None,
        }
    }
}

fn integral(name: &str, v: f64) -> Result<u64> {
    if v >= 0.0 && v.fract() == 0.0 && v.is_finite() {
        Ok(v as u64)
    } else {
        Err(Error::InvalidArgument(format!("`{name}` needs a non-negative integer, got {v}")))
    }
}

impl ExperimentConfig {
    fn is_atomic(&self) -> bool {
        self.realization == Realization::Atomic
    }

    pub fn cavity_freq(&self) -> f64 {
        TWO_PI * self.cavity_freq_hz.unwrap_or(if self.is_atomic() { 51.2e9 } else { 10e9 })
    }

    pub fn t1(&self) -> f64 {
        self.t1_s.unwrap_or(if self.is_atomic() { 3e-2 } else { 1e-6 })
    }

    pub fn t2(&self) -> f64 {
        self.t2_s.unwrap_or(if self.is_atomic() { 3e-2 } else { 1e-6 })
    }

    pub fn quality(&self) -> f64 {
        self.quality_factor.unwrap_or(if self.is_atomic() { 2e8 } else { 1e5 })
    }

    pub fn decoupling(&self) -> Decoupling {
        self.decouple_factor.map_or(Decoupling::Ideal, |factor| Decoupling::Finite { factor })
    }

    pub fn propagator_options(&self) -> PropagatorOptions {
        PropagatorOptions::with_tol(self.tol)
    }

    /// Checks that do not need the solver: sweep axes and ranges.
    pub fn validate(&self) -> Result<()> {
        for axis in &self.sweep {
            if !SWEEPABLE.contains(&axis.parameter.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "sweep axis references unknown parameter `{}` (known: {})",
                    axis.parameter,
                    SWEEPABLE.join(", ")
                )));
            }
            axis.points()?;
        }
        if self.cavity_states.is_empty() {
            return Err(Error::InvalidArgument("`cavity_states` must not be empty".into()));
        }
        Ok(())
    }

    /// Sets a sweepable parameter.
    pub fn set(&mut self, name: &str, v: f64) -> Result<()> {
        match name {
            "n" => self.n = integral(name, v)? as usize,
            "g_hz" => self.g_hz = v,
            "omega_ratio" => self.omega_ratio = v,
            "k" => {
                if v.fract() != 0.0 || !v.is_finite() {
                    return Err(Error::InvalidArgument(format!("`k` needs an integer, got {v}")));
                }
                self.k = v as i64
            }
            "g_prime_hz" => self.g_prime_hz = Some(v),
            "cavity_freq_hz" => self.cavity_freq_hz = Some(v),
            "fock_cutoff" => self.fock_cutoff = integral(name, v)? as usize,
            "tol" => self.tol = v,
            "decouple_factor" => self.decouple_factor = Some(v),
            "rabi_deviation" => self.rabi_deviation = Some(v),
            "trials" => self.trials = integral(name, v)? as usize,
            "t1_s" => self.t1_s = Some(v),
            "t2_s" => self.t2_s = Some(v),
            "quality_factor" => self.quality_factor = Some(v),
            "tau_a_s" => self.tau_a_s = Some(v),
            "tau_m_s" => self.tau_m_s = Some(v),
            "leakage_delta_ratio" => self.leakage.delta_ratio = v,
            _ => return Err(Error::InvalidArgument(format!("unknown parameter `{name}`"))),
        }
        Ok(())
    }

    /// Grid of configurations in row-major order (the first axis varies slowest).
    pub fn sweep_points(&self) -> Result<Vec<SweepPoint>> {
        self.validate()?;
        if self.sweep.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one axis".into()));
        }
        let axes: Vec<(String, Vec<f64>)> =
            self.sweep.iter().map(|a| Ok((a.parameter.clone(), a.points()?))).collect::<Result<_>>()?;
        let mut points = vec![SweepPoint { values: Vec::new(), config: ExperimentConfig { sweep: Vec::new(), ..self.clone() } }];
        for (name, values) in &axes {
            let mut next = Vec::with_capacity(points.len() * values.len());
            for p in &points {
                for &v in values {
                    let mut q = p.clone();
                    q.config.set(name, v)?;
                    q.values.push((name.clone(), v));
                    next.push(q);
                }
            }
            points = next;
        }
        Ok(points)
    }

    pub fn solve(&self) -> Result<ParamSet> {
        let k = u32::try_from(self.k).map_err(|_| Error::InvalidParameter {
            name: "k",
            reason: format!("parity index must be a non-negative integer, got {}", self.k),
        })?;
        solve_parameters(TWO_PI * self.g_hz, k, self.omega_ratio, self.n, self.g_prime_hz.map(|g| TWO_PI * g))?
            .with_cavity_freq(self.cavity_freq())
    }

    pub fn schedule(&self, params: &ParamSet) -> Result<Schedule> {
        match self.realization {
            Realization::MethodA => schedule_method_a(params, self.decoupling()),
            Realization::MethodB => schedule_method_b(params, self.decoupling()),
            Realization::Charge => schedule_charge(params, &self.circuit.to_params(params.g)),
            Realization::Atomic => schedule_atoms(params, self.tau_a_s.unwrap_or(1e-6), self.tau_m_s.unwrap_or(1e-6)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub values: Vec<(String, f64)>,
    pub config: ExperimentConfig,
}

/// Leakage populations, always labelled as estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub kind: String,
    pub case: LeakageCase,
    pub delta_ratio: f64,
    pub p2: f64,
    pub p3: Option<f64>,
}

impl LeakageReport {
    fn new(cfg: &LeakageConfig, e: LeakageEstimate) -> Self {
        LeakageReport { kind: "ESTIMATE".into(), case: cfg.case, delta_ratio: cfg.delta_ratio, p2: e.p2, p3: e.p3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub realization: Realization,
    pub params: ParamSet,
    pub conditions: Vec<ConditionCheck>,
    pub schedule: ScheduleDocument,
    /// Fidelity of the closed-form three-step product to the ideal gate.
    pub effective_fidelity: f64,
    pub effective_global_phase: f64,
    /// Full-dynamics channel fidelity per initial cavity state.
    pub full_fidelity: BTreeMap<String, f64>,
    pub full_dynamics: Option<RobustnessReport>,
    pub sensitivity: Option<SensitivityStats>,
    pub leakage: LeakageReport,
    pub timing: TimingBudget,
    pub degeneracy: Option<DegeneracyDeviations>,
    pub warnings: Vec<String>,
}

impl GateReport {
    pub fn spread(&self) -> Option<f64> {
        self.full_dynamics.as_ref().map(|r| r.spread)
    }
}

/// Solve, schedule, simulate and assemble a report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<GateReport> {
    config.validate()?;
    let params = config.solve()?;
    let schedule = config.schedule(&params)?;
    let mut warnings = schedule.warnings.clone();

    let qubits = SpaceDescriptor::qubits(params.n + 1)?;
    let combined = combined_evolution::<f64>(qubits, &params)?;
    let ideal = ideal_ntcp::<f64>(params.n)?;
    let effective_fidelity = gate_fidelity(&combined.matrix, &ideal.matrix)?.value;
    warnings.extend(combined.warnings.iter().filter(|w| !warnings.contains(w)).cloned().collect::<Vec<_>>());

    let full_dynamics = if config.full_dynamics {
        let r = cavity_robustness(&schedule, config.fock_cutoff, &config.cavity_states, &config.propagator_options())?;
        if r.truncation_leakage > crate::integrator::TRUNCATION_FLAG {
            warnings.push(format!(
                "top Fock level reaches population {:.2e} from vacuum; raise fock_cutoff",
                r.truncation_leakage
            ));
        }
        Some(r)
    } else {
        None
    };
    let sensitivity = match config.rabi_deviation {
        Some(f) => Some(rabi_deviation_sensitivity(
            &schedule,
            config.fock_cutoff,
            f,
            config.trials,
            config.seed,
            &config.propagator_options(),
        )?),
        None => None,
    };

    let leakage = leakage_probabilities(&LeakageSpec::symmetric(config.leakage.case, params.g, config.leakage.delta_ratio))?;
    let timing = timing_budget(&schedule, config.t1(), config.t2(), config.quality(), params.cavity_freq)?;
    warnings.extend(timing.warnings.iter().cloned());
    for f in &timing.reference_flags {
        warnings.push(format!("reference discrepancy in {}: {}", f.quantity, f.note));
    }
    let degeneracy = match config.realization {
        Realization::Charge => Some(degeneracy_deviations(
            params.omega,
            params.omega_prime,
            params.omega1,
            params.omega_r,
            params.g,
            params.g_prime,
            H_PLANCK * config.circuit.e_c_hz,
        )?),
        _ => None,
    };

    Ok(GateReport {
        realization: config.realization,
        conditions: params.consistency.clone(),
        schedule: ScheduleDocument::from(&schedule),
        effective_fidelity,
        effective_global_phase: combined.global_phase,
        full_fidelity: full_dynamics.as_ref().map(|r| r.fidelities.clone()).unwrap_or_default(),
        full_dynamics,
        sensitivity,
        leakage: LeakageReport::new(&config.leakage, leakage),
        timing,
        degeneracy,
        warnings,
        params,
    })
}
