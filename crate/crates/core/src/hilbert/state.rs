use num_complex::Complex;
use num_traits::Zero;

use super::matrix::OperatorMatrix;
use super::space::SpaceDescriptor;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Pure state on a [`SpaceDescriptor`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    space: SpaceDescriptor,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps raw amplitudes without normalizing.
    pub fn from_amplitudes(space: SpaceDescriptor, amplitudes: Vec<C<T>>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: amplitudes.len() });
        }
        Ok(StateVector { space, amplitudes })
    }

    /// Normalized copy of `amplitudes`.
    pub fn normalized(space: SpaceDescriptor, amplitudes: Vec<C<T>>) -> Result<Self> {
        let s = Self::from_amplitudes(space, amplitudes)?;
        let n = s.norm();
        if n == T::zero() {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(s.scaled(cr(T::one() / n)))
    }

    pub fn basis(space: SpaceDescriptor, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: index });
        }
        let mut amplitudes = vec![C::zero(); space.dim()];
        amplitudes[index] = cr(T::one());
        Ok(StateVector { space, amplitudes })
    }

    /// `|qubit_state> ⊗ |m>` on a space with a cavity.
    pub fn with_fock(qubits: &StateVector<T>, space: SpaceDescriptor, photons: usize) -> Result<Self> {
        if qubits.space.dim() != space.qubit_dim() || photons >= space.cavity_dim() {
            return Err(Error::DimensionMismatch { expected: space.qubit_dim(), found: qubits.space.dim() });
        }
        let mut amplitudes = vec![C::zero(); space.dim()];
        for (q, &a) in qubits.amplitudes.iter().enumerate() {
            amplitudes[space.join_index(q, photons)] = a;
        }
        Ok(StateVector { space, amplitudes })
    }

    /// Product of single-qubit states, qubit 1 first.
    pub fn product(factors: &[[C<T>; 2]]) -> Result<Self> {
        let space = SpaceDescriptor::qubits(factors.len())?;
        let mut amplitudes = vec![cr(T::one())];
        for f in factors {
            amplitudes = amplitudes.iter().flat_map(|&a| [a * f[0], a * f[1]]).collect();
        }
        Ok(StateVector { space, amplitudes })
    }

    pub fn kron(&self, other: &StateVector<T>, space: SpaceDescriptor) -> Result<Self> {
        let d = self.amplitudes.len() * other.amplitudes.len();
        if space.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: space.dim() });
        }
        let amplitudes =
            self.amplitudes.iter().flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b)).collect();
        Ok(StateVector { space, amplitudes })
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.space
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        StateVector { space: self.space, amplitudes: self.amplitudes.iter().map(|&a| a * s).collect() }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector<T>) -> C<T> {
        self.amplitudes.iter().zip(&other.amplitudes).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn apply(&self, op: &OperatorMatrix<T>) -> Result<Self> {
        if op.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: op.dim() });
        }
        Ok(StateVector { space: self.space, amplitudes: op.apply(&self.amplitudes) })
    }

    /// Population of the highest retained Fock level.
    pub fn top_fock_population(&self) -> T {
        match self.space.fock_cutoff() {
            None => T::zero(),
            Some(cut) => (0..self.space.qubit_dim())
                .map(|q| self.amplitudes[self.space.join_index(q, cut)].norm_sqr())
                .sum(),
        }
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        let a = &self.amplitudes;
        DensityMatrix {
            matrix: OperatorMatrix::from_fn(self.space, |i, j| a[i] * a[j].conj()),
        }
    }
}

/// Mixed state; Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: OperatorMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity and unit trace (to `1e-10` relative to the precision of `T`).
    pub fn new(matrix: OperatorMatrix<T>) -> Result<Self> {
        let tol = T::of(1e-10).max(T::epsilon() * T::of(64.0));
        if matrix.hermiticity_defect() > tol {
            return Err(Error::InvalidArgument("density matrix is not Hermitian".into()));
        }
        if (matrix.trace() - cr(T::one())).norm() > tol {
            return Err(Error::InvalidArgument("density matrix trace differs from 1".into()));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Skips validation (used for intermediate linear-map results).
    pub fn from_matrix_unchecked(matrix: OperatorMatrix<T>) -> Self {
        DensityMatrix { matrix }
    }

    pub fn maximally_mixed(space: SpaceDescriptor) -> Self {
        let d = T::of(space.dim() as f64);
        DensityMatrix { matrix: OperatorMatrix::identity(space).scale_real(T::one() / d) }
    }

    /// Diagonal state with the given populations (not renormalized).
    pub fn diagonal(space: SpaceDescriptor, populations: &[T]) -> Result<Self> {
        let diag: Vec<C<T>> = populations.iter().map(|&p| cr(p)).collect();
        Ok(DensityMatrix { matrix: OperatorMatrix::from_diagonal(space, &diag)? })
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.matrix.space()
    }

    pub fn matrix(&self) -> &OperatorMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> OperatorMatrix<T> {
        self.matrix
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    /// `<psi|rho|psi>`.
    pub fn expectation(&self, psi: &StateVector<T>) -> T {
        let rho_psi = self.matrix.apply(psi.amplitudes());
        psi.amplitudes().iter().zip(&rho_psi).fold(C::zero(), |acc: C<T>, (a, b)| acc + a.conj() * b).re
    }

    pub fn kron(&self, other: &DensityMatrix<T>, space: SpaceDescriptor) -> Result<Self> {
        Ok(DensityMatrix { matrix: self.matrix.kron(&other.matrix, space)? })
    }

    /// Necessary positivity conditions: non-negative diagonal and
    /// `|rho_ij|^2 <= rho_ii rho_jj` for every pair.
    pub fn looks_positive(&self, tol: T) -> bool {
        let d = self.matrix.dim();
        for i in 0..d {
            if self.matrix[(i, i)].re < -tol {
                return false;
            }
            for j in i + 1..d {
                let (a, b) = (self.matrix[(i, i)].re, self.matrix[(j, j)].re);
                if self.matrix[(i, j)].norm_sqr() > a * b + tol {
                    return false;
                }
            }
        }
        true
    }
}

/// `|+> = (|0> + |1>)/sqrt 2` and `|-> = (|0> - |1>)/sqrt 2`.
pub fn x_eigenstate<T: Real>(minus: bool) -> [C<T>; 2] {
    let s = T::FRAC_1_SQRT_2();
    [cr(s), cr(if minus { -s } else { s })]
}

/// The six Pauli eigenstates `|0>, |1>, |+>, |->, |+i>, |-i>`.
pub fn pauli_eigenstates<T: Real>() -> [[C<T>; 2]; 6] {
    let s = T::FRAC_1_SQRT_2();
    let o = T::zero();
    [
        [cr(T::one()), cr(o)],
        [cr(o), cr(T::one())],
        [cr(s), cr(s)],
        [cr(s), cr(-s)],
        [cr(s), Complex::new(o, s)],
        [cr(s), Complex::new(o, -s)],
    ]
}
