//! The conditional-gradient algorithm family.

pub mod away;
pub mod blended;
pub mod boosting;
pub mod corrective;
pub mod lazified;
pub mod nep;
pub mod pairwise;
pub mod sliding;
pub mod smoothing;
pub mod vanilla;

pub use away::run_afw;
pub use blended::{run_bcg, simplex_descent, SimplexDescentOutcome};
pub use boosting::{boost_direction, run_boostfw, BoostConfig};
pub use corrective::run_fcfw;
pub use lazified::{run_lazy, LazyVariant};
pub use nep::run_nepfw;
pub use pairwise::{run_dipfw, run_pfw, DipfwStepMode};
pub use sliding::{cg_projection, run_cgs, run_cgs_restart, CgsSchedule};
pub use smoothing::{run_hcgs, LinearMap, NonsmoothPart, SmoothedProblem};
pub use vanilla::run_fw;

use crate::error::Result;
use crate::objective::Objective;
use crate::point::Point;
use crate::step::{adaptive_step_given, line_search, open_loop_step, short_step, StepContext, StepRule};

/// Choose the step size for a move `x <- x - gamma d` with
/// `dir_derivative = <grad f(x), d>`, honoring the configured rule.
/// Adaptive state updates in place.
#[allow(clippy::too_many_arguments)]
pub(crate) fn choose_step(
    rule: &mut StepRule,
    objective: &dyn Objective,
    x: &Point,
    d: &Point,
    dir_derivative: f64,
    gamma_max: f64,
    t: u64,
    grad: &Point,
    fx: f64,
) -> Result<f64> {
    match rule {
        StepRule::OpenLoop { shift } => Ok(open_loop_step(t, *shift).min(gamma_max)),
        StepRule::InvSqrt => Ok((1.0 / ((t + 1) as f64).sqrt()).min(gamma_max)),
        StepRule::Short => {
            let l = objective.smoothness().ok_or_else(|| {
                crate::error::Error::ContractViolation(
                    "short step requires a declared smoothness constant".into(),
                )
            })?;
            short_step(&StepContext {
                t,
                dir_derivative,
                dir_norm_sq: d.norm_sq(),
                gamma_max,
                l_estimate: l,
            })
        }
        StepRule::LineSearch => Ok(line_search(objective, x, d, gamma_max, Some(dir_derivative))),
        StepRule::Adaptive(state) => {
            let v = x.sub(d);
            let (next, gamma) = adaptive_step_given(objective, grad, fx, x, &v, state)?;
            *state = next;
            Ok(gamma.min(gamma_max))
        }
    }
}
