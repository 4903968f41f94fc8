//! Superconducting charge qubits in a transmission-line resonator: mapping from
//! circuit quantities (SI units) to the protocol's angular frequencies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{x_basis_transform, OperatorMatrix, SpaceDescriptor};
use crate::scalar::Real;

/// Planck constant [J s].
pub const H_PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant [J s], `h / 2 pi` so that `h nu = hbar omega` holds exactly.
pub const HBAR: f64 = H_PLANCK / (2.0 * std::f64::consts::PI);
/// Elementary charge [C].
pub const E_CHARGE: f64 = 1.602_176_634e-19;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// SQUID Josephson energy per junction [J].
    pub e_j0: f64,
    /// Charging energy [J].
    pub e_c: f64,
    /// Gate capacitance [F].
    pub c_g: f64,
    /// Classical ac gate-voltage amplitude [V].
    pub v0: f64,
    /// Quantum gate-voltage amplitude [V]; derived from `length` and `c0` when absent.
    pub v0_qu: Option<f64>,
    /// Reduced flux `Phi / Phi_0` in `[0, 1]`.
    pub flux_ratio: f64,
    /// Resonator length [m].
    pub length: Option<f64>,
    /// Resonator capacitance per unit length [F/m].
    pub c0: Option<f64>,
    /// Largest ac amplitude the gate line can deliver [V].
    pub max_voltage: Option<f64>,
}

impl CircuitParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [("e_j0", self.e_j0), ("e_c", self.e_c), ("c_g", self.c_g)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("must be positive, got {v}") });
            }
        }
        let optional = [("v0_qu", self.v0_qu), ("length", self.length), ("c0", self.c0), ("max_voltage", self.max_voltage)];
        for (name, v) in optional {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidParameter { name, reason: format!("must be positive, got {v}") });
                }
            }
        }
        if !(self.v0 >= 0.0 && self.v0.is_finite()) {
            return Err(Error::InvalidParameter { name: "v0", reason: format!("must be non-negative, got {}", self.v0) });
        }
        if !(0.0..=1.0).contains(&self.flux_ratio) {
            return Err(Error::InvalidParameter {
                name: "flux_ratio",
                reason: format!("must lie in [0, 1], got {}", self.flux_ratio),
            });
        }
        Ok(())
    }

    /// `V0_qu` either given or `sqrt(hbar omega_c / (L c0))`.
    pub fn quantum_voltage(&self, cavity_freq: f64) -> Result<f64> {
        match (self.v0_qu, self.length, self.c0) {
            (Some(v), _, _) => Ok(v),
            (None, Some(l), Some(c0)) => Ok((HBAR * cavity_freq / (l * c0)).sqrt()),
            _ => Err(Error::InvalidArgument("either v0_qu or both length and c0 are required".into())),
        }
    }

    /// Charge-to-frequency factor `2 E_c C_g / (hbar e)` [rad/s per V].
    fn rabi_per_volt(&self) -> f64 {
        2.0 * self.e_c * self.c_g / (HBAR * E_CHARGE)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeMapping {
    /// `omega_0 = 4 E_J0 cos(pi Phi/Phi_0) / hbar` [rad/s].
    pub omega0: f64,
    /// `Omega = 2 E_c C_g V0 / (hbar e)` [rad/s].
    pub rabi: f64,
    /// `g = 2 E_c C_g V0_qu / (hbar e)` [rad/s].
    pub g: f64,
    /// Quantum voltage used for `g` [V].
    pub v0_qu: f64,
}

/// Qubit frequency, Rabi frequency and coupling realized by a charge qubit at the
/// degeneracy point. `g` does not depend on the flux, so it is the same in every step.
pub fn charge_qubit_map(circuit: &CircuitParams, cavity_freq: f64) -> Result<ChargeMapping> {
    circuit.validate()?;
    let v0_qu = circuit.quantum_voltage(cavity_freq)?;
    let cos = (std::f64::consts::PI * circuit.flux_ratio).cos();
    // cos(pi/2) is 6e-17 in floating point; the half-flux point is an exact zero.
    let cos = if (circuit.flux_ratio - 0.5).abs() < 1e-15 { 0.0 } else { cos };
    Ok(ChargeMapping {
        omega0: 4.0 * circuit.e_j0 * cos / HBAR,
        rabi: circuit.rabi_per_volt() * circuit.v0,
        g: circuit.rabi_per_volt() * v0_qu,
        v0_qu,
    })
}

/// Reduced flux `Phi/Phi_0 = arccos(hbar omega_0 / (4 E_J0)) / pi` giving transition frequency `omega0`.
pub fn flux_for_frequency(omega0: f64, e_j0: f64) -> Result<f64> {
    let x = HBAR * omega0 / (4.0 * e_j0);
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InfeasibleHardware(format!(
            "omega_0 = {omega0} rad/s is outside the flux-tunable range [0, {}] rad/s",
            4.0 * e_j0 / HBAR
        )));
    }
    Ok(x.acos() / std::f64::consts::PI)
}

/// Gate-voltage amplitude `V0 = hbar e Omega / (2 E_c C_g)` realizing Rabi frequency `rabi`.
pub fn rabi_voltage(rabi: f64, circuit: &CircuitParams) -> Result<f64> {
    let v = rabi / circuit.rabi_per_volt();
    if let Some(max) = circuit.max_voltage {
        if v > max {
            return Err(Error::InfeasibleHardware(format!(
                "Rabi frequency {rabi} rad/s needs {v} V, above the {max} V limit"
            )));
        }
    }
    Ok(v)
}

/// Offsets from the charge degeneracy point during each step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyDeviations {
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

/// `eps0 = hbar(Omega + g)/(4E_c)`, `eps1 = hbar(Omega' + g')/(4E_c)`,
/// `eps2 = hbar Omega_1/(4E_c)`, `eps3 = hbar Omega_r/(4E_c)`. Frequencies in rad/s, `e_c` in J.
pub fn degeneracy_deviations(
    omega: f64,
    omega_prime: f64,
    omega1: f64,
    omega_r: f64,
    g: f64,
    g_prime: f64,
    e_c: f64,
) -> Result<DegeneracyDeviations> {
    if !(e_c > 0.0) {
        return Err(Error::InvalidParameter { name: "e_c", reason: format!("must be positive, got {e_c}") });
    }
    let k = HBAR / (4.0 * e_c);
    Ok(DegeneracyDeviations {
        eps0: k * (omega + g),
        eps1: k * (omega_prime + g_prime),
        eps2: k * omega1,
        eps3: k * omega_r,
    })
}

/// Change of basis from the computational basis `{|0>, |1>}` to the charge basis
/// `{|+>, |->}` with `|0> = (|+> + |->)/sqrt 2`, `|1> = (|+> - |->)/sqrt 2` on every qubit.
/// An operator `A` in the computational basis reads `T A T^dagger` in charge states.
pub fn charge_basis_transform<T: Real>(space: SpaceDescriptor) -> OperatorMatrix<T> {
    x_basis_transform(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{embed_qubit_op, pauli};
    use std::f64::consts::PI;

    fn ghz(x: f64) -> f64 {
        2.0 * PI * x * 1e9
    }

    fn circuit(flux: f64) -> CircuitParams {
        CircuitParams {
            e_j0: H_PLANCK * 5e9,
            e_c: H_PLANCK * 32e9,
            c_g: 1e-15,
            v0: 0.0,
            v0_qu: Some(1e-6),
            flux_ratio: flux,
            length: None,
            c0: None,
            max_voltage: None,
        }
    }

    #[test]
    fn flux_endpoints() {
        assert_eq!(charge_qubit_map(&circuit(0.5), ghz(10.0)).unwrap().omega0, 0.0);
        let w = charge_qubit_map(&circuit(0.0), ghz(10.0)).unwrap().omega0;
        assert!((w / (2.0 * PI) - 20e9).abs() < 1e-3);
    }

    #[test]
    fn flux_inverse_round_trips() {
        let w = ghz(9.956);
        let f = flux_for_frequency(w, H_PLANCK * 5e9).unwrap();
        assert!((f - (9.956f64 / 20.0).acos() / PI).abs() < 1e-12);
        let back = charge_qubit_map(&circuit(f), ghz(10.0)).unwrap().omega0;
        assert!((back - w).abs() / w < 1e-12);
        assert!(flux_for_frequency(ghz(25.0), H_PLANCK * 5e9).is_err());
    }

    #[test]
    fn coupling_from_resonator_geometry() {
        let mut c = circuit(0.2);
        c.v0_qu = None;
        c.length = Some(0.01);
        c.c0 = Some(1.6e-10);
        let wc = ghz(10.0);
        let m = charge_qubit_map(&c, wc).unwrap();
        let v = (HBAR * wc / (0.01 * 1.6e-10)).sqrt();
        assert!((m.v0_qu - v).abs() < 1e-18);
        assert!((m.g - 2.0 * c.e_c * c.c_g * v / (HBAR * E_CHARGE)).abs() < 1e-6);
        // g does not move with the flux bias
        c.flux_ratio = 0.4;
        assert_eq!(charge_qubit_map(&c, wc).unwrap().g, m.g);
    }

    #[test]
    fn rabi_voltage_inverts_mapping_and_respects_limit() {
        let mut c = circuit(0.3);
        c.v0 = 2.5e-5;
        let rabi = charge_qubit_map(&c, ghz(10.0)).unwrap().rabi;
        assert!((rabi_voltage(rabi, &c).unwrap() - 2.5e-5).abs() < 1e-18);
        c.max_voltage = Some(1e-5);
        assert!(matches!(rabi_voltage(rabi, &c), Err(Error::InfeasibleHardware(_))));
    }

    #[test]
    fn invalid_circuit() {
        let mut c = circuit(1.5);
        assert!(charge_qubit_map(&c, 1.0).is_err());
        c.flux_ratio = 0.1;
        c.e_c = 0.0;
        assert!(charge_qubit_map(&c, 1.0).is_err());
    }

    #[test]
    fn deviation_values() {
        let d = degeneracy_deviations(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-23).unwrap();
        assert_eq!(d.eps0, 0.0);
        let g = 2.0 * PI * 22e6;
        let d = degeneracy_deviations(15.0 * g, 15.0 * g, 16.0 * g, 0.5 * g, g, g, H_PLANCK * 32e9).unwrap();
        assert!((d.eps3 / d.eps2 - 0.5 / 16.0).abs() < 1e-15);
        assert!((d.eps0 - 2.75e-3).abs() < 0.01e-3, "{}", d.eps0);
        assert!((d.eps3 - 8.59e-5).abs() < 0.01e-5, "{}", d.eps3);
        assert!(degeneracy_deviations(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn charge_basis_maps_sigma_z_to_sigma_x() {
        // sigma_z in the computational basis is sigma_x-tilde between charge states.
        let s = SpaceDescriptor::qubits(1).unwrap();
        let t = charge_basis_transform::<f64>(s);
        let z = embed_qubit_op(s, 1, &pauli::z()).unwrap();
        let x = embed_qubit_op(s, 1, &pauli::x()).unwrap();
        assert!(t.matmul(&z).matmul(&t.adjoint()).max_abs_diff(&x) < 1e-15);
    }
}
