use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cavity frequency, `2 pi x 10 GHz`.
pub const DEFAULT_CAVITY_FREQ: f64 = 2.0 * PI * 10e9;

/// Smallest accepted `Omega / max(|delta|, g)` before the regime tag is violated.
pub const REGIME_THRESHOLD: f64 = 5.0;

const REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `Omega / max(|delta|, g) >= 5` and the same for the primed step.
    Regime,
    /// `Omega tau = Omega' tau'`.
    RabiMatch,
    /// `lambda tau = lambda' tau'`.
    LambdaMatch,
    /// `Omega_1 = 4 lambda n + Omega`.
    ControlRabi,
    /// `Omega_r = 4 lambda`.
    TargetRabi,
    /// `4 g^2 / delta^2 = 2k + 1`.
    Parity,
    /// `delta < 0 < delta'`.
    DetuningSign,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::Regime,
        Condition::RabiMatch,
        Condition::LambdaMatch,
        Condition::ControlRabi,
        Condition::TargetRabi,
        Condition::Parity,
        Condition::DetuningSign,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Condition::Regime => "regime",
            Condition::RabiMatch => "rabi-match",
            Condition::LambdaMatch => "lambda-match",
            Condition::ControlRabi => "control-rabi",
            Condition::TargetRabi => "target-rabi",
            Condition::Parity => "parity",
            Condition::DetuningSign => "detuning-sign",
        }
    }

    /// Conditions a schedule can run without. A weak drive only degrades the gate.
    pub fn is_advisory(self) -> bool {
        matches!(self, Condition::Regime)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub satisfied: bool,
    /// Residual of the condition (relative where that makes sense).
    pub residual: f64,
}

/// The independent protocol frequencies [rad/s].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamInputs {
    pub g: f64,
    pub g_prime: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub omega1: f64,
    pub omega_r: f64,
    pub k: u32,
    pub n: usize,
    pub cavity_freq: f64,
}

/// Every protocol frequency, the derived times and couplings, and the status of
/// each matching condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub g: f64,
    pub g_prime: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub omega1: f64,
    pub omega_r: f64,
    pub k: u32,
    pub n: usize,
    pub cavity_freq: f64,
    /// `2 pi / |delta|` [s].
    pub tau: f64,
    /// `2 pi / |delta'|` [s].
    pub tau_prime: f64,
    /// `-g^2 / (4 delta)`.
    pub lambda: f64,
    /// `g'^2 / (4 delta')`.
    pub lambda_prime: f64,
    pub consistency: Vec<ConditionCheck>,
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

impl ParamSet {
    /// Derives `tau, tau', lambda, lambda'` and evaluates every condition.
    pub fn from_inputs(p: ParamInputs) -> Result<Self> {
        if p.delta == 0.0 || p.delta_prime == 0.0 {
            return Err(Error::SingularDetuning);
        }
        if p.n == 0 {
            return Err(Error::InvalidParameter { name: "n", reason: "at least one target qubit is required".into() });
        }
        let named = [
            ("g", p.g),
            ("g_prime", p.g_prime),
            ("omega", p.omega),
            ("omega_prime", p.omega_prime),
            ("omega1", p.omega1),
            ("omega_r", p.omega_r),
            ("cavity_freq", p.cavity_freq),
        ];
        for (name, v) in named {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite and non-negative, got {v}") });
            }
        }
        let mut s = ParamSet {
            tau: 2.0 * PI / p.delta.abs(),
            tau_prime: 2.0 * PI / p.delta_prime.abs(),
            lambda: -p.g * p.g / (4.0 * p.delta),
            lambda_prime: p.g_prime * p.g_prime / (4.0 * p.delta_prime),
            g: p.g,
            g_prime: p.g_prime,
            delta: p.delta,
            delta_prime: p.delta_prime,
            omega: p.omega,
            omega_prime: p.omega_prime,
            omega1: p.omega1,
            omega_r: p.omega_r,
            k: p.k,
            n: p.n,
            cavity_freq: p.cavity_freq,
            consistency: Vec::new(),
        };
        s.consistency = Condition::ALL.iter().map(|&c| s.check(c)).collect();
        Ok(s)
    }

    pub fn inputs(&self) -> ParamInputs {
        ParamInputs {
            g: self.g,
            g_prime: self.g_prime,
            delta: self.delta,
            delta_prime: self.delta_prime,
            omega: self.omega,
            omega_prime: self.omega_prime,
            omega1: self.omega1,
            omega_r: self.omega_r,
            k: self.k,
            n: self.n,
            cavity_freq: self.cavity_freq,
        }
    }

    fn check(&self, c: Condition) -> ConditionCheck {
        let (satisfied, residual) = match c {
            Condition::Regime => {
                let a = self.omega / self.delta.abs().max(self.g);
                let b = self.omega_prime / self.delta_prime.abs().max(self.g_prime);
                let worst = a.min(b);
                (worst >= REGIME_THRESHOLD * (1.0 - REL_TOL), worst)
            }
            Condition::RabiMatch => {
                let r = rel(self.omega * self.tau, self.omega_prime * self.tau_prime);
                (r <= REL_TOL, r)
            }
            Condition::LambdaMatch => {
                let r = rel(self.lambda * self.tau, self.lambda_prime * self.tau_prime);
                (r <= REL_TOL, r)
            }
            Condition::ControlRabi => {
                let r = rel(self.omega1, 4.0 * self.lambda * self.n as f64 + self.omega);
                (r <= REL_TOL, r)
            }
            Condition::TargetRabi => {
                let r = rel(self.omega_r, 4.0 * self.lambda);
                (r <= REL_TOL, r)
            }
            Condition::Parity => {
                let lhs = 4.0 * self.g * self.g / (self.delta * self.delta);
                let r = (lhs - (2 * self.k + 1) as f64).abs();
                (r <= 1e-12 * (2 * self.k + 1) as f64 * 10.0, r)
            }
            Condition::DetuningSign => {
                let ok = self.delta < 0.0 && self.delta_prime > 0.0;
                (ok, if ok { 0.0 } else { 1.0 })
            }
        };
        ConditionCheck { condition: c, satisfied, residual }
    }

    pub fn violated(&self) -> Vec<Condition> {
        self.consistency.iter().filter(|c| !c.satisfied).map(|c| c.condition).collect()
    }

    pub fn is_satisfied(&self, c: Condition) -> bool {
        self.consistency.iter().any(|x| x.condition == c && x.satisfied)
    }

    pub fn is_consistent(&self) -> bool {
        self.violated().is_empty()
    }

    /// Errors when a condition other than the advisory regime tag fails.
    pub fn require_consistent(&self) -> Result<()> {
        let hard: Vec<String> =
            self.violated().into_iter().filter(|c| !c.is_advisory()).map(|c| c.tag().to_string()).collect();
        if hard.is_empty() {
            Ok(())
        } else {
            Err(Error::InconsistentParameters { violated: hard })
        }
    }

    /// Gate time `2 tau + tau'`.
    pub fn t_op(&self) -> f64 {
        2.0 * self.tau + self.tau_prime
    }

    pub fn with_cavity_freq(self, cavity_freq: f64) -> Result<Self> {
        Self::from_inputs(ParamInputs { cavity_freq, ..self.inputs() })
    }
}

/// Solves the matching conditions from `g`, the parity index `k`, `Omega / g`
/// and the number of targets. `g'` defaults to `g`.
pub fn solve_parameters(g: f64, k: u32, omega_ratio: f64, n: usize, g_prime: Option<f64>) -> Result<ParamSet> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidParameter { name: "g", reason: format!("must be positive, got {g}") });
    }
    if !(omega_ratio > 0.0 && omega_ratio.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "omega_ratio",
            reason: format!("must be positive, got {omega_ratio}"),
        });
    }
    let g_prime = g_prime.unwrap_or(g);
    if !(g_prime > 0.0 && g_prime.is_finite()) {
        return Err(Error::InvalidParameter { name: "g_prime", reason: format!("must be positive, got {g_prime}") });
    }
    let delta = -2.0 * g / ((2 * k + 1) as f64).sqrt();
    // -g/delta = g'/delta'
    let delta_prime = -g_prime * delta / g;
    let omega = omega_ratio * g;
    // Omega tau = Omega' tau'  =>  Omega' = Omega delta' / |delta|
    let omega_prime = omega * delta_prime / delta.abs();
    let lambda = -g * g / (4.0 * delta);
    ParamSet::from_inputs(ParamInputs {
        g,
        g_prime,
        delta,
        delta_prime,
        omega,
        omega_prime,
        omega1: 4.0 * lambda * n as f64 + omega,
        omega_r: 4.0 * lambda,
        k,
        n,
        cavity_freq: DEFAULT_CAVITY_FREQ,
    })
}
