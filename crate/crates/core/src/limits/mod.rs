//! Deterministic limits: closed-form constants, Monte Carlo moments of the
//! stage law, the Euler solver for the limiting equations, and predictions.

mod constants;
mod moments;
mod ode;
mod predict;

pub use constants::{
    check_theta, closed_form_moment, constants, constants_table, mean_bisector_projection,
    mean_border_projection, mean_length, stage_law, theta_range, ConstantsRow, StageLaw,
    THETA_TOLERANCE,
};
pub use moments::{
    mc_constants, mc_moment, Estimate, McConstants, MomentCache, MomentEntry, MomentSource,
    MIN_MC_SAMPLES, ORACLE_SAMPLES, ORACLE_SEED,
};
pub use ode::{euler_solve, euler_solve_perturbed, hit_time, LimitCurve, OdeSpec, Stop, DEFAULT_RELATIVE_STEP};
pub use predict::{
    predict, predict_cost, predict_cost_with_moment, predict_cross, predict_random_north,
    predict_straight, Prediction,
};
