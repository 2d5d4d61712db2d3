//! Frobenius series about the regular singular point at the origin.

mod engine;
mod equation;
mod recenter;
mod stop;

pub use engine::{coefficients, evaluate, EvalRequest, SeriesDiagnostics, SeriesResult, DEFAULT_MAX_TERMS};
pub use equation::{validate, Branch, EquationSpec};
pub use recenter::{continue_solution, recenter, Continuation};
pub use stop::{StopDecision, StopRule, STOP_GUARD_DIGITS};
