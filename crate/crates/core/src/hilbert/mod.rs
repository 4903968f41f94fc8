//! Composite qubits-plus-cavity Hilbert space, dense operator algebra,
//! partial trace and gate/channel fidelity metrics.

mod expm;
mod fidelity;
mod matrix;
mod space;
mod state;

pub use fidelity::{channel_fidelity, default_probes, gate_fidelity, unitary_channel, GateFidelity};
pub use matrix::{pauli, Local2, OperatorMatrix};
pub use space::{make_space, SpaceDescriptor, DEFAULT_FOCK_CUTOFF};
pub use state::{pauli_eigenstates, x_eigenstate, DensityMatrix, StateVector};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Embeds a single-qubit operator on qubit `qubit_index` (1-based), identity elsewhere.
pub fn embed_qubit_op<T: Real>(
    space: SpaceDescriptor,
    qubit_index: usize,
    local: &Local2<T>,
) -> Result<OperatorMatrix<T>> {
    space.check_qubit(qubit_index)?;
    let shift = space.qubit_shift(qubit_index);
    let dc = space.cavity_dim();
    let mut out = OperatorMatrix::zeros(space);
    for col in 0..space.dim() {
        let (q, m) = space.split_index(col);
        let bit = (q >> shift) & 1;
        for (new_bit, row_of_local) in local.iter().enumerate() {
            let v = row_of_local[bit];
            if v.is_zero() {
                continue;
            }
            let q_out = (q & !(1 << shift)) | (new_bit << shift);
            out[(q_out * dc + m, col)] = v;
        }
    }
    Ok(out)
}

/// Truncated ladder operators `(a, a_dagger)` acting on the cavity factor.
/// `a_dagger` annihilates the top retained Fock level.
pub fn cavity_ops<T: Real>(space: SpaceDescriptor) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    let cutoff = space
        .fock_cutoff()
        .ok_or_else(|| Error::InvalidArgument("space has no cavity factor".into()))?;
    let mut a = OperatorMatrix::zeros(space);
    for q in 0..space.qubit_dim() {
        for m in 1..=cutoff {
            a[(space.join_index(q, m - 1), space.join_index(q, m))] = cr(T::of(m as f64).sqrt());
        }
    }
    let ad = a.adjoint();
    Ok((a, ad))
}

/// Reduced state of the qubit register.
pub fn partial_trace_cavity<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let space = rho.space();
    if !space.has_cavity() || space.num_qubits() == 0 {
        return Err(Error::InvalidArgument("partial trace needs a qubits-plus-cavity space".into()));
    }
    let m = partial_trace_matrix(rho.matrix());
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

pub(crate) fn partial_trace_matrix<T: Real>(m: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    let space = m.space();
    let dc = space.cavity_dim();
    OperatorMatrix::from_fn(space.qubit_space(), |i, j| {
        (0..dc).fold(C::zero(), |acc, k| acc + m[(i * dc + k, j * dc + k)])
    })
}

/// `H^{⊗n}`: maps the computational basis onto the `sigma_x` product basis,
/// with `|+>` as bit 0 and `|->` as bit 1.
pub fn x_basis_transform<T: Real>(space: SpaceDescriptor) -> OperatorMatrix<T> {
    let n = space.num_qubits();
    let s = T::one() / T::of((1usize << n) as f64).sqrt();
    OperatorMatrix::from_fn(space, |i, j| {
        let (qi, mi) = space.split_index(i);
        let (qj, mj) = space.split_index(j);
        if mi != mj {
            return C::zero();
        }
        let sign = if (qi & qj).count_ones() % 2 == 0 { T::one() } else { -T::one() };
        cr(sign * s)
    })
}

/// Re-expresses an operator in the `sigma_x` product basis.
pub fn to_x_basis<T: Real>(op: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    let h = x_basis_transform(op.space());
    h.matmul(op).matmul(&h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(nq: usize, cut: usize) -> SpaceDescriptor {
        make_space(nq, cut).unwrap()
    }

    #[test]
    fn identity_embeds_to_identity() {
        let s = sp(2, 2);
        let e = embed_qubit_op(s, 2, &pauli::identity::<f64>()).unwrap();
        assert_eq!(e, OperatorMatrix::identity(s));
    }

    #[test]
    fn sigma_x_on_qubit_one_flips_msb() {
        let s = sp(2, 1);
        let x1 = embed_qubit_op(s, 1, &pauli::x::<f64>()).unwrap();
        let psi = StateVector::basis(s, s.join_index(0b00, 0)).unwrap();
        let out = psi.apply(&x1).unwrap();
        assert_eq!(out, StateVector::basis(s, s.join_index(0b10, 0)).unwrap());
    }

    #[test]
    fn out_of_range_qubit() {
        let s = sp(2, 1);
        assert!(matches!(
            embed_qubit_op(s, 3, &pauli::x::<f64>()),
            Err(Error::QubitIndexOutOfRange { index: 3, max: 2 })
        ));
    }

    #[test]
    fn ladder_truncation() {
        let s = sp(1, 4);
        let (a, ad) = cavity_ops::<f64>(s).unwrap();
        let vac = StateVector::basis(s, 0).unwrap();
        assert!(vac.apply(&a).unwrap().norm() < 1e-15);
        let num = ad.matmul(&a);
        for m in 0..=4 {
            assert!((num[(m, m)].re - m as f64).abs() < 1e-14);
        }
        let comm = a.commutator(&ad);
        for i in 0..s.dim() {
            let (_, m) = s.split_index(i);
            let expect = if m < 4 { 1.0 } else { -4.0 };
            assert!((comm[(i, i)].re - expect).abs() < 1e-13);
        }
        let top = StateVector::basis(s, 4).unwrap();
        assert!(top.apply(&ad).unwrap().norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_and_mixed() {
        let s = sp(2, 2);
        let q = StateVector::product(&[x_eigenstate::<f64>(true), pauli_eigenstates()[4]]).unwrap();
        let cav = StateVector::normalized(s.cavity_space().unwrap(), vec![cr(1.0), cr(2.0), cr(-1.0)]).unwrap();
        let full = q.kron(&cav, s).unwrap();
        let red = partial_trace_cavity(&full.projector()).unwrap();
        assert!(red.matrix().max_abs_diff(q.projector().matrix()) < 1e-14);

        let mixed = DensityMatrix::<f64>::maximally_mixed(s);
        let red = partial_trace_cavity(&mixed).unwrap();
        assert!(red.matrix().max_abs_diff(DensityMatrix::maximally_mixed(s.qubit_space()).matrix()) < 1e-15);
        assert!((red.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_basis_transform_is_involutive() {
        let s = SpaceDescriptor::qubits(3).unwrap();
        let h = x_basis_transform::<f64>(s);
        assert!(h.matmul(&h).max_abs_diff(&OperatorMatrix::identity(s)) < 1e-14);
        let x1 = embed_qubit_op(s, 1, &pauli::x::<f64>()).unwrap();
        let z1 = embed_qubit_op(s, 1, &pauli::z::<f64>()).unwrap();
        assert!(to_x_basis(&x1).max_abs_diff(&z1) < 1e-14);
    }
}
