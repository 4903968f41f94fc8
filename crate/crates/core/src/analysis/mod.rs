//! Leakage estimates, cavity-state robustness, Rabi-deviation sensitivity and reports.

mod cavity;
mod experiment;
mod leakage;
mod robustness;

pub use cavity::{CavityState, PreparedCavityState, TRUNCATION_LIMIT};
pub use leakage::{leakage_probabilities, leakage_probability, LeakageCase, LeakageEstimate, LeakageSpec};
pub use robustness::{
    cavity_robustness, fidelities_for_states, full_propagator, rabi_deviation_sensitivity, rabi_factors, spread,
    RobustnessReport, SensitivityStats,
};
pub use experiment::{
    run_experiment, CircuitConfig, ExperimentConfig, GateReport, LeakageConfig, LeakageReport, SweepAxis, SweepPoint,
    SWEEPABLE,
};
