//! Inverse problems and design-space exploration on top of the forward chain.

pub mod constraints;
pub mod optimize;
pub mod scenarios;
pub mod solver;
pub mod sweep;

pub use constraints::{
    check_constraints, check_constraints_with, ConstraintEntry, ConstraintLimits, ConstraintReport,
};
pub use optimize::{optimize, OptimizeOutcome};
pub use scenarios::{
    noise_scaling_rule, optimal_redundancy, redundancy_estimate, scenario_ancilla_pipelining,
    scenario_measurement_redundancy, PipelinedBudget, RedundantReadout, Resources,
};
pub use solver::{
    bisect, rho_heating_bound, solve_rho_heating_bound, split_heating_at, SplitModel,
};
pub use sweep::{evaluate, sweep, Evaluation, SweepPoint, SweepResult};
