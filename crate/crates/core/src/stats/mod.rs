//! Monte Carlo sessions and the BER / guess-success / prediction-success
//! estimators.

mod compare;
mod estimate;
mod session;
pub mod sig;
mod theory;

pub use compare::{all_pass, compare, judge, Metric, Verdict, MIN_TOLERANCE, SIGMAS};
pub use estimate::Estimate;
pub use session::{run_session, simulate_trial, SessionConfig, SessionReport, TrialRecord};
pub use theory::{theory_for, theory_reference, TheoryTriple};
