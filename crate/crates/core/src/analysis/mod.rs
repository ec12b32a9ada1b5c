//! Sweeps, searches, figure presets and the randomized verification run.

pub mod presets;
pub mod search;
pub mod sweep;
pub mod verify;

pub use presets::{emit_figure_preset, preset, PRESET_NAMES};
pub use search::{find_optimal_theta, find_transition, Criterion, OptimalTheta, Transition, TransitionQuery};
pub use sweep::{run_sweep, Axis, Hold, Quantity, SweepSpec, Table};
pub use verify::{run_verify, VerifyOptions, VerifyReport};
