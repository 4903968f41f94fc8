//! Simulation and verification toolkit for a controlled-phase gate in which one
//! qubit simultaneously controls `n` target qubits through a shared cavity mode.
//!
//! The crate is organized bottom-up:
//!
//! - [`hilbert`]: qubits-plus-truncated-cavity spaces, dense complex operators,
//!   partial trace and fidelities.
//! - [`hamiltonians`]: collective operators, interaction-picture and rotated-frame
//!   Hamiltonians, and the superconducting charge-qubit parameter mapping.
//! - [`effective`]: closed-form propagators of each protocol step and the ideal gates.
//! - [`integrator`]: time-ordered propagation used as ground truth.
//! - [`protocol`]: parameter solving, three-step schedules and timing budgets.
//! - [`analysis`]: leakage estimates, cavity-state robustness, Rabi-deviation
//!   sensitivity and consolidated reports.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the double-precision types used by the protocol and analysis layers.

pub mod analysis;
pub mod effective;
pub mod error;
pub mod hamiltonians;
pub mod hilbert;
pub mod integrator;
pub mod protocol;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Operator = hilbert::OperatorMatrix<f64>;
pub type Operator32 = hilbert::OperatorMatrix<f32>;
pub type State = hilbert::StateVector<f64>;
pub type State32 = hilbert::StateVector<f32>;
pub type Density = hilbert::DensityMatrix<f64>;
pub type Density32 = hilbert::DensityMatrix<f32>;
pub type Gate = effective::EffectiveGate<f64>;
pub type Hamiltonian = integrator::TimeDependentHamiltonian<f64>;
