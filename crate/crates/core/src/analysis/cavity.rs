use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, OperatorMatrix, SpaceDescriptor};
use crate::scalar::{cis, cr, Real, C};

/// Largest discarded population accepted when truncating a cavity state.
pub const TRUNCATION_LIMIT: f64 = 1e-3;

/// Initial state of the cavity mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CavityState {
    Vacuum,
    Fock { n: usize },
    Coherent {
        alpha: f64,
        #[serde(default)]
        phase: f64,
    },
    Thermal { nbar: f64 },
}

impl fmt::Display for CavityState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CavityState::Vacuum => write!(f, "vacuum"),
            CavityState::Fock { n } => write!(f, "fock{n}"),
            CavityState::Coherent { alpha, phase } if *phase == 0.0 => write!(f, "coherent{alpha}"),
            CavityState::Coherent { alpha, phase } => write!(f, "coherent{alpha}@{phase}"),
            CavityState::Thermal { nbar } => write!(f, "thermal{nbar}"),
        }
    }
}

/// A cavity state truncated to the Fock cutoff and renormalized.
#[derive(Clone, Debug)]
pub struct PreparedCavityState<T> {
    pub label: String,
    pub density: DensityMatrix<T>,
    /// Population beyond the cutoff before renormalization.
    pub truncation_weight: f64,
}

impl CavityState {
    /// Populations (or amplitudes) on `0..=cutoff`, not yet renormalized.
    fn amplitudes(&self, cutoff: usize) -> Result<(Vec<C<f64>>, bool)> {
        match *self {
            CavityState::Vacuum => Ok((unit(0, cutoff), true)),
            CavityState::Fock { n } => Ok((unit(n, cutoff), true)),
            CavityState::Coherent { alpha, phase } => {
                if !(alpha >= 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidParameter { name: "alpha", reason: format!("must be non-negative, got {alpha}") });
                }
                let mut amp = Vec::with_capacity(cutoff + 1);
                let mut c = (-alpha * alpha / 2.0).exp();
                for m in 0..=cutoff {
                    if m > 0 {
                        c *= alpha / (m as f64).sqrt();
                    }
                    amp.push(cis(phase * m as f64) * c);
                }
                Ok((amp, true))
            }
            CavityState::Thermal { nbar } => {
                if !(nbar >= 0.0 && nbar.is_finite()) {
                    return Err(Error::InvalidParameter { name: "nbar", reason: format!("must be non-negative, got {nbar}") });
                }
                let r = nbar / (1.0 + nbar);
                let pops = (0..=cutoff).map(|m| cr(r.powi(m as i32) / (1.0 + nbar))).collect();
                Ok((pops, false))
            }
        }
    }

    /// Density matrix on `space` (a cavity-only space).
    pub fn prepare<T: Real>(&self, space: SpaceDescriptor) -> Result<PreparedCavityState<T>> {
        let cutoff = space
            .fock_cutoff()
            .filter(|_| space.num_qubits() == 0)
            .ok_or_else(|| Error::InvalidArgument("cavity states need a cavity-only space".into()))?;
        let label = self.to_string();
        let (amp, pure) = self.amplitudes(cutoff)?;
        let kept: f64 = if pure { amp.iter().map(|a| a.norm_sqr()).sum() } else { amp.iter().map(|p| p.re).sum() };
        let truncation_weight = (1.0 - kept).max(0.0);
        if truncation_weight > TRUNCATION_LIMIT {
            return Err(Error::StateRejected { label, weight: truncation_weight, limit: TRUNCATION_LIMIT });
        }
        let matrix = if pure {
            let s = 1.0 / kept.sqrt();
            let v: Vec<C<T>> = amp.iter().map(|a| C::new(T::of(a.re * s), T::of(a.im * s))).collect();
            OperatorMatrix::from_fn(space, |i, j| v[i] * v[j].conj())
        } else {
            let diag: Vec<C<T>> = amp.iter().map(|p| cr(T::of(p.re / kept))).collect();
            OperatorMatrix::from_diagonal(space, &diag)?
        };
        Ok(PreparedCavityState { label, density: DensityMatrix::new(matrix)?, truncation_weight })
    }
}

fn unit(n: usize, cutoff: usize) -> Vec<C<f64>> {
    (0..=cutoff).map(|m| cr(if m == n { 1.0 } else { 0.0 })).collect()
}
