//! Time-ordered propagation of time-dependent Hamiltonians.
//!
//! Each step is a product of exponentials of Hermitian generators, so every step is
//! unitary to round-off. Step counts start from an oscillation-aware bound and are
//! doubled until the step-halving error estimate meets the tolerance.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{OperatorMatrix, SpaceDescriptor, StateVector};
use crate::scalar::{cis, cr, Real};

type Builder<T> = Arc<dyn Fn(T) -> OperatorMatrix<T> + Send + Sync>;

#[derive(Clone)]
enum Form<T> {
    /// `C + sum_k (e^{i w_k t} X_k + e^{-i w_k t} X_k^dagger)`, adjoints cached.
    Harmonic {
        constant: OperatorMatrix<T>,
        terms: Vec<(T, OperatorMatrix<T>, OperatorMatrix<T>)>,
    },
    Closure { builder: Builder<T>, frequencies: Vec<T> },
}

/// Hermitian generator `H(t)` on a fixed space, with the angular frequencies of its
/// time dependence as a step-size hint.
#[derive(Clone)]
pub struct TimeDependentHamiltonian<T> {
    space: SpaceDescriptor,
    form: Form<T>,
}

impl<T: Real> fmt::Debug for TimeDependentHamiltonian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentHamiltonian")
            .field("space", &self.space)
            .field("frequencies", &self.frequencies())
            .finish()
    }
}

impl<T: Real> TimeDependentHamiltonian<T> {
    pub fn harmonic(space: SpaceDescriptor, constant: OperatorMatrix<T>, terms: Vec<(T, OperatorMatrix<T>)>) -> Self {
        let terms = terms.into_iter().map(|(w, x)| (w, x.adjoint(), x)).map(|(w, xd, x)| (w, x, xd)).collect();
        TimeDependentHamiltonian { space, form: Form::Harmonic { constant, terms } }
    }

    pub fn constant(h: OperatorMatrix<T>) -> Self {
        Self::harmonic(h.space(), h, Vec::new())
    }

    /// Arbitrary builder; `frequencies` bounds the step size.
    pub fn from_fn<F>(space: SpaceDescriptor, frequencies: Vec<T>, builder: F) -> Self
    where
        F: Fn(T) -> OperatorMatrix<T> + Send + Sync + 'static,
    {
        TimeDependentHamiltonian { space, form: Form::Closure { builder: Arc::new(builder), frequencies } }
    }

    pub fn space(&self) -> SpaceDescriptor {
        self.space
    }

    pub fn frequencies(&self) -> Vec<T> {
        match &self.form {
            Form::Harmonic { terms, .. } => terms.iter().map(|t| t.0).collect(),
            Form::Closure { frequencies, .. } => frequencies.clone(),
        }
    }

    pub fn is_time_independent(&self) -> bool {
        match &self.form {
            Form::Harmonic { terms, .. } => terms.is_empty(),
            Form::Closure { frequencies, .. } => frequencies.is_empty(),
        }
    }

    pub fn at(&self, t: T) -> OperatorMatrix<T> {
        match &self.form {
            Form::Harmonic { constant, terms } => {
                let mut h = constant.clone();
                for (w, x, xd) in terms {
                    let e = cis(*w * t);
                    h.add_scaled(e, x);
                    h.add_scaled(e.conj(), xd);
                }
                h
            }
            Form::Closure { builder, .. } => builder(t),
        }
    }

    /// Sum of two generators on the same space.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: other.space.dim() });
        }
        match (&self.form, &other.form) {
            (Form::Harmonic { constant: c1, terms: t1 }, Form::Harmonic { constant: c2, terms: t2 }) => {
                let mut terms = t1.clone();
                terms.extend(t2.iter().cloned());
                Ok(TimeDependentHamiltonian { space: self.space, form: Form::Harmonic { constant: c1 + c2, terms } })
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                let mut freqs = a.frequencies();
                freqs.extend(b.frequencies());
                Ok(Self::from_fn(self.space, freqs, move |t| &a.at(t) + &b.at(t)))
            }
        }
    }

    /// Rate used for the initial step: the largest oscillation frequency or the
    /// spectral scale of `H` at `t`, whichever is larger.
    fn rate(&self, t: T) -> f64 {
        let w = self.frequencies().iter().map(|w| w.abs().as_f64()).fold(0.0, f64::max);
        // ||H||_1 bounds the spectral radius; twice it bounds eigenvalue gaps.
        let scale = 2.0 * self.at(t).norm_one().as_f64();
        w.max(scale)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Exponential midpoint rule, second order.
    Midpoint,
    /// Two-exponential commutator-free Magnus scheme, fourth order.
    #[default]
    Magnus4,
}

impl Scheme {
    fn order(self) -> i32 {
        match self {
            Scheme::Midpoint => 2,
            Scheme::Magnus4 => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorOptions {
    /// Target max-norm error of the propagator.
    pub tol: f64,
    /// Initial steps per shortest oscillation period.
    pub oversample: f64,
    /// Largest step count tried before giving up.
    pub max_steps: usize,
    pub scheme: Scheme,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        PropagatorOptions { tol: 1e-8, oversample: 20.0, max_steps: 1 << 18, scheme: Scheme::Magnus4 }
    }
}

impl PropagatorOptions {
    pub fn with_tol(tol: f64) -> Self {
        PropagatorOptions { tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(Error::InvalidParameter { name: "tol", reason: format!("must lie in (0, 1e-2], got {}", self.tol) });
        }
        if !(self.oversample >= 1.0) || self.max_steps == 0 {
            return Err(Error::InvalidArgument("oversample must be >= 1 and max_steps >= 1".into()));
        }
        Ok(())
    }
}

/// Population threshold on the top Fock level above which results are flagged.
pub const TRUNCATION_FLAG: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct PropagationResult<T> {
    pub propagator: OperatorMatrix<T>,
    pub step_count: usize,
    /// `||U^dagger U - I||_max`, summed over composed pieces.
    pub max_unitarity_defect: T,
    /// Step-halving estimate of the max-norm error, summed over composed pieces.
    pub estimated_error: f64,
    /// Largest top-Fock-level population reached from a vacuum-cavity input.
    pub truncation_leakage: T,
}

impl<T: Real> PropagationResult<T> {
    pub fn truncation_flagged(&self) -> bool {
        self.truncation_leakage.as_f64() > TRUNCATION_FLAG
    }
}

const SQRT3_6: f64 = 0.288_675_134_594_812_9;
const ALPHA1: f64 = (3.0 - 2.0 * 1.732_050_807_568_877_2) / 12.0;
const ALPHA2: f64 = (3.0 + 2.0 * 1.732_050_807_568_877_2) / 12.0;

/// Unitary of one step `[t, t + h]`.
fn step_unitary<T: Real>(h_td: &TimeDependentHamiltonian<T>, scheme: Scheme, t: f64, h: f64) -> OperatorMatrix<T> {
    match scheme {
        Scheme::Midpoint => h_td.at(T::of(t + 0.5 * h)).exp_i_hermitian(T::of(h)),
        Scheme::Magnus4 => {
            let h1 = h_td.at(T::of(t + (0.5 - SQRT3_6) * h));
            let h2 = h_td.at(T::of(t + (0.5 + SQRT3_6) * h));
            let (a1, a2) = (T::of(ALPHA1), T::of(ALPHA2));
            // the generator weighted toward the later node acts last
            let mut late = h1.scale_real(a1);
            late.add_scaled(cr(a2), &h2);
            let mut early = h1.scale_real(a2);
            early.add_scaled(cr(a1), &h2);
            late.exp_i_hermitian(T::of(h)).matmul(&early.exp_i_hermitian(T::of(h)))
        }
    }
}

fn uniform<T: Real>(h_td: &TimeDependentHamiltonian<T>, scheme: Scheme, t0: f64, t1: f64, steps: usize) -> OperatorMatrix<T> {
    let h = (t1 - t0) / steps as f64;
    let mut u = OperatorMatrix::identity(h_td.space());
    for k in 0..steps {
        u = step_unitary(h_td, scheme, t0 + k as f64 * h, h).matmul(&u);
    }
    u
}

fn vacuum_leakage<T: Real>(u: &OperatorMatrix<T>) -> T {
    let space = u.space();
    let Some(cut) = space.fock_cutoff() else { return T::zero() };
    let dq = space.qubit_dim();
    let mut worst = T::zero();
    for q_in in 0..dq {
        let col = space.join_index(q_in, 0);
        let top: T = (0..dq).map(|q| u[(space.join_index(q, cut), col)].norm_sqr()).sum();
        worst = worst.max(top);
    }
    worst
}

fn initial_steps<T: Real>(h_td: &TimeDependentHamiltonian<T>, t0: f64, t1: f64, oversample: f64) -> usize {
    let span = t1 - t0;
    let rate = [t0, 0.5 * (t0 + t1), t1].iter().map(|&t| h_td.rate(T::of(t))).fold(0.0, f64::max);
    if rate == 0.0 {
        return 1;
    }
    let h0 = 2.0 * std::f64::consts::PI / rate / oversample;
    (span / h0).ceil().max(1.0) as usize
}

/// Propagator `U(t1, t0)` of `H` with max-norm error below `opts.tol`.
pub fn propagate<T: Real>(
    h_td: &TimeDependentHamiltonian<T>,
    t0: f64,
    t1: f64,
    opts: &PropagatorOptions,
) -> Result<PropagationResult<T>> {
    opts.validate()?;
    if !(t1 > t0) {
        return Err(Error::InvalidArgument(format!("propagation needs t1 > t0, got [{t0}, {t1}]")));
    }
    if h_td.is_time_independent() {
        let u = h_td.at(T::zero()).exp_i_hermitian(T::of(t1 - t0));
        return Ok(PropagationResult {
            max_unitarity_defect: u.unitarity_defect(),
            truncation_leakage: vacuum_leakage(&u),
            propagator: u,
            step_count: 1,
            estimated_error: 0.0,
        });
    }
    let factor = 2f64.powi(opts.scheme.order()) - 1.0;
    let mut n = initial_steps(h_td, t0, t1, opts.oversample).min(opts.max_steps);
    let mut coarse = uniform(h_td, opts.scheme, t0, t1, n);
    loop {
        if 2 * n > opts.max_steps {
            return Err(Error::BudgetExceeded { steps: n, estimated_error: f64::NAN, tol: opts.tol });
        }
        let fine = uniform(h_td, opts.scheme, t0, t1, 2 * n);
        let err = coarse.max_abs_diff(&fine).as_f64() / factor;
        n *= 2;
        if err <= opts.tol {
            return Ok(PropagationResult {
                max_unitarity_defect: fine.unitarity_defect(),
                truncation_leakage: vacuum_leakage(&fine),
                propagator: fine,
                step_count: n,
                estimated_error: err,
            });
        }
        if 2 * n > opts.max_steps {
            return Err(Error::BudgetExceeded { steps: n, estimated_error: err, tol: opts.tol });
        }
        coarse = fine;
    }
}

/// Final state of a propagation.
#[derive(Clone, Debug)]
pub struct StateEvolution<T> {
    pub state: StateVector<T>,
    pub step_count: usize,
    /// Largest top-Fock-level population seen on the step grid.
    pub truncation_leakage: T,
}

impl<T: Real> StateEvolution<T> {
    pub fn truncation_flagged(&self) -> bool {
        self.truncation_leakage.as_f64() > TRUNCATION_FLAG
    }
}

fn uniform_state<T: Real>(
    h_td: &TimeDependentHamiltonian<T>,
    scheme: Scheme,
    psi0: &StateVector<T>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<(StateVector<T>, T)> {
    let h = (t1 - t0) / steps as f64;
    let mut psi = psi0.clone();
    let mut leak = psi.top_fock_population();
    for k in 0..steps {
        psi = psi.apply(&step_unitary(h_td, scheme, t0 + k as f64 * h, h))?;
        leak = leak.max(psi.top_fock_population());
    }
    Ok((psi, leak))
}

/// `psi(t1)` from `psi(t0) = psi0` with 2-norm error below `opts.tol`.
pub fn evolve_state<T: Real>(
    h_td: &TimeDependentHamiltonian<T>,
    psi0: &StateVector<T>,
    t0: f64,
    t1: f64,
    opts: &PropagatorOptions,
) -> Result<StateEvolution<T>> {
    opts.validate()?;
    if psi0.space().dim() != h_td.space().dim() {
        return Err(Error::DimensionMismatch { expected: h_td.space().dim(), found: psi0.space().dim() });
    }
    if !(t1 > t0) {
        return Err(Error::InvalidArgument(format!("propagation needs t1 > t0, got [{t0}, {t1}]")));
    }
    if h_td.is_time_independent() {
        let state = psi0.apply(&h_td.at(T::zero()).exp_i_hermitian(T::of(t1 - t0)))?;
        let leak = psi0.top_fock_population().max(state.top_fock_population());
        return Ok(StateEvolution { state, step_count: 1, truncation_leakage: leak });
    }
    let factor = 2f64.powi(opts.scheme.order()) - 1.0;
    let mut n = initial_steps(h_td, t0, t1, opts.oversample).min(opts.max_steps);
    let (mut coarse, _) = uniform_state(h_td, opts.scheme, psi0, t0, t1, n)?;
    loop {
        if 2 * n > opts.max_steps {
            return Err(Error::BudgetExceeded { steps: n, estimated_error: f64::NAN, tol: opts.tol });
        }
        let (fine, leak) = uniform_state(h_td, opts.scheme, psi0, t0, t1, 2 * n)?;
        let diff: T = coarse
            .amplitudes()
            .iter()
            .zip(fine.amplitudes())
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt();
        let err = diff.as_f64() / factor;
        n *= 2;
        if err <= opts.tol {
            return Ok(StateEvolution { state: fine, step_count: n, truncation_leakage: leak });
        }
        coarse = fine;
    }
}

/// Chronological composition: `results[0]` acts first, the product is
/// `U_last ... U_1 U_0`.
pub fn compose<T: Real>(results: &[PropagationResult<T>]) -> Result<PropagationResult<T>> {
    let first = results.first().ok_or_else(|| Error::InvalidArgument("nothing to compose".into()))?;
    let space = first.propagator.space();
    let mut out = first.clone();
    for r in &results[1..] {
        if r.propagator.space() != space {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: r.propagator.dim() });
        }
        out.propagator = r.propagator.matmul(&out.propagator);
        out.step_count += r.step_count;
        out.max_unitarity_defect += r.max_unitarity_defect;
        out.estimated_error += r.estimated_error;
        out.truncation_leakage = out.truncation_leakage.max(r.truncation_leakage);
    }
    Ok(out)
}
