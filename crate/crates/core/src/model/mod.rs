//! The budget-allocation game between a central authority and public servants.

pub mod config;
pub mod ensemble;
pub mod network;
pub mod rules;
pub mod sim;

pub use config::{
    Government, MechanismToggles, Servants, SimulationConfig, Spillovers, Supervision, DEFAULT_EPSILON,
    DEFAULT_MAX_STEPS, DEFAULT_TARGET_TOL,
};
pub use ensemble::{run_monte_carlo, run_seed, summarize_run, Ensemble, RunSummary};
pub use network::SpilloverNetwork;
pub use sim::{run_seeded, run_simulation, step, AgentState, SimulationTrace, StepRecord};
