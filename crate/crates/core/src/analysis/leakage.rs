use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level configuration of the three-level qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeakageCase {
    /// Ladder-type levels: only the second excited level is reachable.
    L,
    /// Both the second and third levels couple to the cavity.
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageSpec {
    pub case: LeakageCase,
    /// Coupling of the leakage transitions [rad/s].
    pub g12: f64,
    pub g13: Option<f64>,
    /// Detuning of the leakage transitions from the cavity [rad/s].
    pub delta2: f64,
    pub delta3: Option<f64>,
}

impl LeakageSpec {
    /// Symmetric spec with every coupling `g` and every detuning `ratio * g`.
    pub fn symmetric(case: LeakageCase, g: f64, ratio: f64) -> Self {
        let s = matches!(case, LeakageCase::S);
        LeakageSpec {
            case,
            g12: g,
            g13: s.then_some(g),
            delta2: ratio * g,
            delta3: s.then_some(ratio * g),
        }
    }
}

/// Order-of-magnitude leakage populations. These are estimates and are never
/// folded into fidelities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageEstimate {
    pub p2: f64,
    pub p3: Option<f64>,
}

/// `4 g^2 / (4 g^2 + Delta^2)`.
pub fn leakage_probability(g: f64, detuning: f64) -> f64 {
    let x = 4.0 * g * g;
    x / (x + detuning * detuning)
}

pub fn leakage_probabilities(spec: &LeakageSpec) -> Result<LeakageEstimate> {
    let positive = |name: &'static str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidParameter { name, reason: format!("must be positive, got {v}") })
        }
    };
    let g12 = positive("g12", spec.g12)?;
    let d2 = positive("delta2", spec.delta2)?;
    let p2 = leakage_probability(g12, d2);
    let p3 = match spec.case {
        LeakageCase::L => None,
        LeakageCase::S => {
            let missing = |name| Error::InvalidParameter { name, reason: "required for case S".into() };
            let g13 = positive("g13", spec.g13.ok_or_else(|| missing("g13"))?)?;
            let d3 = positive("delta3", spec.delta3.ok_or_else(|| missing("delta3"))?)?;
            Some(leakage_probability(g13, d3))
        }
    };
    Ok(LeakageEstimate { p2, p3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_fold_detuning() {
        let e = leakage_probabilities(&LeakageSpec::symmetric(LeakageCase::S, 3.0, 10.0)).unwrap();
        assert_eq!(e.p2, 4.0 / 104.0);
        assert_eq!(e.p3, Some(4.0 / 104.0));
        assert!((e.p2 - 0.04).abs() < 0.002);
    }

    #[test]
    fn limits() {
        assert_eq!(leakage_probability(1.0, 2.0), 0.5);
        assert!(leakage_probability(1.0, 1e9) < 1e-17);
        let l = leakage_probabilities(&LeakageSpec::symmetric(LeakageCase::L, 1.0, 5.0)).unwrap();
        assert!(l.p3.is_none());
    }

    #[test]
    fn case_s_needs_third_level() {
        let mut spec = LeakageSpec::symmetric(LeakageCase::S, 1.0, 10.0);
        spec.delta3 = None;
        assert!(leakage_probabilities(&spec).is_err());
        spec.case = LeakageCase::L;
        assert!(leakage_probabilities(&spec).is_ok());
        spec.delta2 = -1.0;
        assert!(leakage_probabilities(&spec).is_err());
    }
}
