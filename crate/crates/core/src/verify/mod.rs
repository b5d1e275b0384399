//! Statement-level checks: the decomposition sandwich, the normalized-area
//! statistic, discrepancy against the occupation measure with its rate
//! bound, the admissible parameter chain with its derived schedule, the
//! almost-sure events, and the two-path intersection statistic.

mod conjecture;
mod events;
mod params;
mod sandwich;
mod schedule;
mod statistics;

pub use conjecture::{conjecture_statistic, conjecture_statistic_fields, joint_grid};
pub use events::{event_flags, event_inputs_from_fields, pair_area_sum, EventFlags, EventInputs};
pub use params::{floor_pow, gamma_floor, gamma_grid, validate_params, ParamSet, Violation};
pub use sandwich::{decomposition_from_fields, verify_decomposition, SandwichReport};
pub use schedule::{eta, make_schedule, EtaVariant, Schedule};
pub use statistics::{
    rate_bound, rate_bound_value, theorem_discrepancy, werner_statistic, RateBound,
};
