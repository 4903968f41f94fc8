//! Closed-form propagators of the three protocol steps and the ideal target gates.
//!
//! Gate matrices live on the qubit register in the computational basis; use
//! [`crate::hilbert::to_x_basis`] for the `(|+>, |->)` product-basis representation.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{collective_ops, target_qubits};
use crate::hilbert::{cavity_ops, embed_qubit_op, pauli, x_basis_transform, OperatorMatrix, SpaceDescriptor};
use crate::protocol::{Condition, ParamSet};
use crate::scalar::{cis, cr, Real, C};

/// Coefficients of the factorized rotated-frame propagator.
///
/// `A(t) = (g^2/4 delta)[t + (e^{-i delta t} - 1)/(i delta)]` and
/// `B(t) = (g/2) int_0^t e^{i delta s} ds`. The imaginary part of `A` equals
/// `|B|^2 / 2`; it is the normal-ordering term that keeps the product unitary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ABCoefficients {
    pub a: Complex<f64>,
    pub b: Complex<f64>,
}

pub fn ab_coefficients(g: f64, delta: f64, t: f64) -> Result<ABCoefficients> {
    if delta == 0.0 {
        return Err(Error::SingularDetuning);
    }
    let i = Complex::new(0.0, 1.0);
    let a = (g * g / (4.0 * delta)) * (t + (Complex::from_polar(1.0, -delta * t) - 1.0) / (i * delta));
    let b = (g / 2.0) * (Complex::from_polar(1.0, delta * t) - 1.0) / (i * delta);
    Ok(ABCoefficients { a, b })
}

/// `u(t) = e^{-i A S_x^2} e^{-i B S_x a} e^{-i B^* S_x a^dagger}` on the full space,
/// with `S_x` over every qubit.
pub fn factorized_propagator<T: Real>(space: SpaceDescriptor, g: f64, delta: f64, t: f64) -> Result<OperatorMatrix<T>> {
    let ab = ab_coefficients(g, delta, t)?;
    let sx = collective_ops::<T>(space, &crate::hamiltonians::all_qubits(space))?.sx;
    let (a, ad) = cavity_ops::<T>(space)?;
    let minus_i = Complex::new(T::zero(), -T::one());
    let to_t = |z: Complex<f64>| Complex::new(T::of(z.re), T::of(z.im));
    let f1 = sx.matmul(&sx).scale(minus_i * to_t(ab.a)).exp();
    let f2 = sx.matmul(&a).scale(minus_i * to_t(ab.b)).exp();
    let f3 = sx.matmul(&ad).scale(minus_i * to_t(ab.b.conj())).exp();
    Ok(f1.matmul(&f2).matmul(&f3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateLabel {
    Step1,
    Step2,
    Step3,
    Combined,
    Pairwise,
    IdealNtcp,
    IdealNtcnot,
}

/// Qubit-register unitary with bookkeeping.
#[derive(Clone, Debug)]
pub struct EffectiveGate<T> {
    pub matrix: OperatorMatrix<T>,
    pub label: GateLabel,
    /// Phase `theta` such that `matrix = e^{i theta} target` when all conditions hold.
    pub global_phase: f64,
    pub warnings: Vec<String>,
}

impl<T: Real> EffectiveGate<T> {
    fn new(matrix: OperatorMatrix<T>, label: GateLabel) -> Self {
        EffectiveGate { matrix, label, global_phase: 0.0, warnings: Vec::new() }
    }

    /// Matrix in the `sigma_x` product basis.
    pub fn in_x_basis(&self) -> OperatorMatrix<T> {
        crate::hilbert::to_x_basis(&self.matrix)
    }
}

/// Register of `space` without the cavity factor.
fn register(space: SpaceDescriptor) -> SpaceDescriptor {
    space.qubit_space()
}

/// Unitary diagonal in the `sigma_x` product basis, built from its
/// eigenphases in the `sigma_x` product basis. `phase(bits)` receives one sign
/// `+1` (for `|+>`) or `-1` (for `|->`) per qubit, qubit 1 first.
fn x_diagonal<T: Real>(space: SpaceDescriptor, phase: impl Fn(&[f64]) -> f64) -> OperatorMatrix<T> {
    let n = space.num_qubits();
    let diag: Vec<C<T>> = (0..space.dim())
        .map(|q| {
            let signs: Vec<f64> = (0..n).map(|j| if (q >> (n - 1 - j)) & 1 == 1 { -1.0 } else { 1.0 }).collect();
            cis(T::of(phase(&signs)))
        })
        .collect();
    let d = OperatorMatrix::from_diagonal(space, &diag).expect("dimension matches");
    let h = x_basis_transform(space);
    h.matmul(&d).matmul(&h)
}

/// Step (i): `U(tau) = e^{i Omega tau S_x / 2} e^{i lambda tau S_x^2}` with
/// `tau = 2 pi/|delta|`, `lambda = -g^2/(4 delta)`. Requires `delta < 0`.
pub fn effective_step1<T: Real>(space: SpaceDescriptor, g: f64, delta: f64, omega: f64) -> Result<EffectiveGate<T>> {
    if delta == 0.0 {
        return Err(Error::SingularDetuning);
    }
    if delta > 0.0 {
        return Err(Error::WrongDetuningSign(format!("step (i) needs delta < 0, got {delta}")));
    }
    let tau = 2.0 * PI / delta.abs();
    let lambda = -g * g / (4.0 * delta);
    let m = x_diagonal(register(space), |s| {
        let sx: f64 = s.iter().sum();
        omega * tau * sx / 2.0 + lambda * tau * sx * sx
    });
    Ok(EffectiveGate::new(m, GateLabel::Step1))
}

/// Step (ii): `U'(tau') = e^{-i Omega' tau' S'_x / 2} e^{-i lambda' tau' S'_x^2}` on the
/// targets, `tau' = 2 pi/delta'`, `lambda' = g'^2/(4 delta')`. Requires `delta' > 0`.
pub fn effective_step2<T: Real>(
    space: SpaceDescriptor,
    g_prime: f64,
    delta_prime: f64,
    omega_prime: f64,
) -> Result<EffectiveGate<T>> {
    if delta_prime == 0.0 {
        return Err(Error::SingularDetuning);
    }
    if delta_prime < 0.0 {
        return Err(Error::WrongDetuningSign(format!("step (ii) needs delta' > 0, got {delta_prime}")));
    }
    let tau = 2.0 * PI / delta_prime;
    let lambda = g_prime * g_prime / (4.0 * delta_prime);
    let m = x_diagonal(register(space), |s| {
        let sx: f64 = s[1..].iter().sum();
        -omega_prime * tau * sx / 2.0 - lambda * tau * sx * sx
    });
    Ok(EffectiveGate::new(m, GateLabel::Step2))
}

/// Step (iii): `e^{-i Omega_1 tau sigma_{x,1} / 2} e^{-i Omega_r tau S'_x / 2}`.
pub fn effective_step3<T: Real>(space: SpaceDescriptor, omega1: f64, omega_r: f64, tau: f64) -> Result<EffectiveGate<T>> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter { name: "tau", reason: format!("must be positive, got {tau}") });
    }
    let m = x_diagonal(register(space), |s| {
        let targets: f64 = s[1..].iter().sum();
        -(omega1 * s[0] + omega_r * targets) * tau / 2.0
    });
    Ok(EffectiveGate::new(m, GateLabel::Step3))
}

fn check_register(space: SpaceDescriptor, n: usize) -> Result<()> {
    if space.num_qubits() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: space.num_qubits() });
    }
    Ok(())
}

/// Literal product `U~(tau) U'(tau') U(tau)` of the three steps.
///
/// When every matching condition and the parity condition hold the product equals
/// `e^{i lambda tau (1 - 2n)}` times the ideal NTCP gate; the phase is recorded in
/// `global_phase`. Violated conditions produce warnings, not errors.
pub fn combined_evolution<T: Real>(space: SpaceDescriptor, params: &ParamSet) -> Result<EffectiveGate<T>> {
    check_register(space, params.n)?;
    let s1 = effective_step1::<T>(space, params.g, params.delta, params.omega)?;
    let s2 = effective_step2::<T>(space, params.g_prime, params.delta_prime, params.omega_prime)?;
    let s3 = effective_step3::<T>(space, params.omega1, params.omega_r, params.tau)?;
    let matrix = s3.matrix.matmul(&s2.matrix).matmul(&s1.matrix);
    let warnings = params
        .violated()
        .into_iter()
        .filter(|c| *c != Condition::Regime)
        .map(|c| format!("condition `{c}` violated: combined evolution is the literal step product"))
        .collect();
    Ok(EffectiveGate {
        matrix,
        label: GateLabel::Combined,
        global_phase: params.lambda * params.tau * (1.0 - 2.0 * params.n as f64),
        warnings,
    })
}

/// `prod_j exp[-i 2 lambda tau (sigma_{x,1} + sigma_{x,j} - sigma_{x,1} sigma_{x,j})]`.
pub fn pairwise_product<T: Real>(space: SpaceDescriptor, lambda_tau: f64) -> Result<EffectiveGate<T>> {
    let reg = register(space);
    if reg.num_qubits() < 2 {
        return Err(Error::InvalidArgument("pairwise product needs a control and a target".into()));
    }
    let m = x_diagonal(reg, |s| {
        s[1..].iter().map(|&sj| -2.0 * lambda_tau * (s[0] + sj - s[0] * sj)).sum()
    });
    let n = reg.num_qubits() - 1;
    Ok(EffectiveGate { global_phase: -2.0 * lambda_tau * n as f64, ..EffectiveGate::new(m, GateLabel::Pairwise) })
}

fn ntcp_register(n: usize) -> Result<SpaceDescriptor> {
    if n < 1 {
        return Err(Error::InvalidParameter { name: "n", reason: "at least one target qubit is required".into() });
    }
    SpaceDescriptor::qubits(n + 1)
}

/// `prod_j (I - 2 |-_1 -_j><-_1 -_j|)` on `n + 1` qubits.
pub fn ideal_ntcp<T: Real>(n: usize) -> Result<EffectiveGate<T>> {
    let reg = ntcp_register(n)?;
    let m: OperatorMatrix<T> = x_diagonal(reg, |s| {
        if s[0] < 0.0 {
            PI * s[1..].iter().filter(|&&x| x < 0.0).count() as f64
        } else {
            0.0
        }
    });
    Ok(EffectiveGate::new(m, GateLabel::IdealNtcp))
}

/// Control in `|1>` flips every target in the computational basis; control `|0>` does nothing.
pub fn ideal_ntcnot<T: Real>(n: usize) -> Result<EffectiveGate<T>> {
    let reg = ntcp_register(n)?;
    let control = 1usize << n;
    let targets = control - 1;
    let m = OperatorMatrix::from_fn(reg, |i, j| {
        let image = if j & control != 0 { j ^ targets } else { j };
        if i == image {
            cr(T::one())
        } else {
            cr(T::zero())
        }
    });
    Ok(EffectiveGate::new(m, GateLabel::IdealNtcnot))
}

/// `H_eff = 2 lambda sum_j (sigma_{x,1} + sigma_{x,j} - sigma_{x,1} sigma_{x,j})` on the register.
pub fn effective_hamiltonian<T: Real>(space: SpaceDescriptor, n: usize, lambda: f64) -> Result<OperatorMatrix<T>> {
    let reg = register(space);
    check_register(reg, n)?;
    let terms = pair_terms::<T>(reg, lambda)?;
    let mut h = OperatorMatrix::zeros(reg);
    for t in &terms {
        h = &h + t;
    }
    Ok(h)
}

/// The individual `H_{1j}` summands of [`effective_hamiltonian`].
pub fn pair_terms<T: Real>(space: SpaceDescriptor, lambda: f64) -> Result<Vec<OperatorMatrix<T>>> {
    let reg = register(space);
    let x1 = embed_qubit_op(reg, 1, &pauli::x::<T>())?;
    target_qubits(reg)
        .into_iter()
        .map(|j| {
            let xj = embed_qubit_op(reg, j, &pauli::x::<T>())?;
            let mut h = &x1 + &xj;
            h.add_scaled(cr(-T::one()), &x1.matmul(&xj));
            Ok(h.scale_real(T::of(2.0 * lambda)))
        })
        .collect()
}
