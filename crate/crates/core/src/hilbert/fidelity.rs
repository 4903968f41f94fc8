use num_traits::Zero;

use super::matrix::OperatorMatrix;
use super::space::SpaceDescriptor;
use super::state::{pauli_eigenstates, DensityMatrix, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Unitarity tolerance below which inputs to [`gate_fidelity`] are accepted silently.
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateFidelity<T> {
    /// `|Tr(ideal^dagger actual)| / d`.
    pub value: T,
    /// Set when either input misses unitarity by more than [`UNITARY_TOL`].
    pub non_unitary: bool,
}

/// Global-phase-invariant overlap of two unitaries of equal dimension.
pub fn gate_fidelity<T: Real>(actual: &OperatorMatrix<T>, ideal: &OperatorMatrix<T>) -> Result<GateFidelity<T>> {
    let d = ideal.dim();
    if actual.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: actual.dim() });
    }
    let tol = T::of(UNITARY_TOL);
    let non_unitary = actual.unitarity_defect() > tol || ideal.unitarity_defect() > tol;
    // Tr(A^dagger B) = sum conj(A_ij) B_ij
    let overlap = ideal
        .entries()
        .iter()
        .zip(actual.entries())
        .fold(C::<T>::zero(), |acc, (a, b)| acc + a.conj() * b);
    let value = (overlap.norm() / T::of(d as f64)).min(T::one());
    Ok(GateFidelity { value, non_unitary })
}

/// Mean over `probes` of `<psi_ideal| channel(psi) |psi_ideal>` with `psi_ideal = ideal psi`.
pub fn channel_fidelity<T, F>(channel: F, ideal: &OperatorMatrix<T>, probes: &[StateVector<T>]) -> Result<T>
where
    T: Real,
    F: Fn(&StateVector<T>) -> Result<DensityMatrix<T>>,
{
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    let mut total = T::zero();
    for psi in probes {
        let target = psi.apply(ideal)?;
        let rho = channel(psi)?;
        if rho.space().dim() != target.space().dim() {
            return Err(Error::DimensionMismatch { expected: target.space().dim(), found: rho.space().dim() });
        }
        total += rho.expectation(&target);
    }
    Ok(total / T::of(probes.len() as f64))
}

/// Products of the six Pauli eigenstates on every qubit.
///
/// The set is phase sensitive: a gate that is diagonal in the `sigma_x` basis
/// but has wrong eigenphases scores below one.
pub fn default_probes<T: Real>(space: SpaceDescriptor) -> Vec<StateVector<T>> {
    let n = space.num_qubits();
    let singles = pauli_eigenstates::<T>();
    let count = 6usize.pow(n as u32);
    (0..count)
        .map(|mut code| {
            let factors: Vec<[C<T>; 2]> = (0..n)
                .map(|_| {
                    let f = singles[code % 6];
                    code /= 6;
                    f
                })
                .collect();
            StateVector::product(&factors).expect("n >= 1")
        })
        .collect()
}

/// Qubit channel `psi -> Tr_c[U (|psi><psi| ⊗ rho_c) U^dagger]` for a propagator `U`
/// on the full qubits-plus-cavity space.
pub fn unitary_channel<'a, T: Real>(
    propagator: &'a OperatorMatrix<T>,
    cavity_state: &'a DensityMatrix<T>,
) -> impl Fn(&StateVector<T>) -> Result<DensityMatrix<T>> + 'a {
    move |psi: &StateVector<T>| {
        let space = propagator.space();
        let (dq, dc) = (space.qubit_dim(), space.cavity_dim());
        if psi.space().dim() != dq {
            return Err(Error::DimensionMismatch { expected: dq, found: psi.space().dim() });
        }
        if cavity_state.space().dim() != dc {
            return Err(Error::DimensionMismatch { expected: dc, found: cavity_state.space().dim() });
        }
        let d = space.dim();
        let u = propagator.entries();
        let amp = psi.amplitudes();
        // y[(row, l)] = sum_q U[row, (q, l)] psi_q
        let mut y = vec![C::<T>::zero(); d * dc];
        for row in 0..d {
            for l in 0..dc {
                let mut acc = C::zero();
                for (q, &a) in amp.iter().enumerate() {
                    acc += u[row * d + q * dc + l] * a;
                }
                y[row * dc + l] = acc;
            }
        }
        // z = y rho_c
        let rc = cavity_state.matrix();
        let mut z = vec![C::<T>::zero(); d * dc];
        for row in 0..d {
            for lp in 0..dc {
                let mut acc = C::zero();
                for l in 0..dc {
                    acc += y[row * dc + l] * rc[(l, lp)];
                }
                z[row * dc + lp] = acc;
            }
        }
        let out = OperatorMatrix::from_fn(space.qubit_space(), |i, j| {
            let mut acc = C::zero();
            for k in 0..dc {
                let (ri, rj) = (i * dc + k, j * dc + k);
                for lp in 0..dc {
                    acc += z[ri * dc + lp] * y[rj * dc + lp].conj();
                }
            }
            acc
        });
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}
