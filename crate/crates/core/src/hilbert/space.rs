use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of retained photons above the vacuum.
pub const DEFAULT_FOCK_CUTOFF: usize = 5;

/// Composite Hilbert space: `num_qubits` two-level factors followed by an
/// optional truncated cavity factor holding Fock levels `0..=fock_cutoff`.
///
/// Basis index layout is fixed: qubit 1 is the most significant bit, the last
/// qubit the least significant one, and the photon number runs fastest.
/// Qubit bit `0` is `|0>` (ground), bit `1` is `|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    num_qubits: usize,
    fock_cutoff: Option<usize>,
}

/// Builds a qubits-plus-cavity space.
pub fn make_space(num_qubits: usize, fock_cutoff: usize) -> Result<SpaceDescriptor> {
    SpaceDescriptor::new(num_qubits, fock_cutoff)
}

impl SpaceDescriptor {
    pub fn new(num_qubits: usize, fock_cutoff: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument("num_qubits must be >= 1".into()));
        }
        if fock_cutoff == 0 {
            return Err(Error::InvalidArgument(
                "fock_cutoff must be >= 1 so that photon exchange is representable".into(),
            ));
        }
        if num_qubits > 16 {
            return Err(Error::InvalidArgument(format!("{num_qubits} qubits is beyond dense storage")));
        }
        Ok(SpaceDescriptor { num_qubits, fock_cutoff: Some(fock_cutoff) })
    }

    /// Qubit register without a cavity factor.
    pub fn qubits(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > 16 {
            return Err(Error::InvalidArgument(format!("num_qubits = {num_qubits} out of 1..=16")));
        }
        Ok(SpaceDescriptor { num_qubits, fock_cutoff: None })
    }

    /// A lone cavity mode (used for cavity initial states).
    pub fn cavity(fock_cutoff: usize) -> Result<Self> {
        if fock_cutoff == 0 {
            return Err(Error::InvalidArgument("fock_cutoff must be >= 1".into()));
        }
        Ok(SpaceDescriptor { num_qubits: 0, fock_cutoff: Some(fock_cutoff) })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn fock_cutoff(&self) -> Option<usize> {
        self.fock_cutoff
    }

    pub fn has_cavity(&self) -> bool {
        self.fock_cutoff.is_some()
    }

    pub fn qubit_dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn cavity_dim(&self) -> usize {
        self.fock_cutoff.map_or(1, |c| c + 1)
    }

    pub fn dim(&self) -> usize {
        self.qubit_dim() * self.cavity_dim()
    }

    /// The qubit factor alone.
    pub fn qubit_space(&self) -> SpaceDescriptor {
        SpaceDescriptor { num_qubits: self.num_qubits, fock_cutoff: None }
    }

    /// The cavity factor alone, if present.
    pub fn cavity_space(&self) -> Option<SpaceDescriptor> {
        self.fock_cutoff.map(|c| SpaceDescriptor { num_qubits: 0, fock_cutoff: Some(c) })
    }

    /// Same qubits with a different cutoff.
    pub fn with_cutoff(&self, fock_cutoff: usize) -> Result<Self> {
        SpaceDescriptor::new(self.num_qubits, fock_cutoff)
    }

    pub fn check_qubit(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.num_qubits {
            return Err(Error::QubitIndexOutOfRange { index, max: self.num_qubits });
        }
        Ok(())
    }

    /// Bit position of 1-based qubit `index` inside the qubit part of a basis index.
    pub(crate) fn qubit_shift(&self, index: usize) -> usize {
        self.num_qubits - index
    }

    /// Splits a full basis index into (qubit bits, photon number).
    pub fn split_index(&self, i: usize) -> (usize, usize) {
        let d = self.cavity_dim();
        (i / d, i % d)
    }

    pub fn join_index(&self, qubits: usize, photons: usize) -> usize {
        qubits * self.cavity_dim() + photons
    }
}
