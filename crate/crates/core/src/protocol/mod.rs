//! Parameter solving, three-step schedules and timing budgets.

mod budget;
mod params;
mod schedule;

pub use budget::{
    cavity_lifetime, timing_budget, ReferenceFlag, TimingBudget, ATOMIC_QUOTED_T_OP, CHARGE_QUOTED_KAPPA_INV,
    MARGIN_WARNING,
};
pub use params::{
    solve_parameters, Condition, ConditionCheck, ParamInputs, ParamSet, DEFAULT_CAVITY_FREQ, REGIME_THRESHOLD,
};
pub use schedule::{
    propagate_schedule, schedule_atoms, schedule_charge, schedule_method_a, schedule_method_b, schedule_propagator,
    ChargeControls, Decoupling, DriveDocument, ExtraTimes, ExtraTimesDocument, QubitDrive, Realization, Schedule,
    ScheduleDocument, ScheduleStep, StepDocument, StepLabel, DEFAULT_DECOUPLE_FACTOR,
};
