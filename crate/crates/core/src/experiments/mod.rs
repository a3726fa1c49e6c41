//! Config-driven sweeps and the two campaign reports: the λ_c phase
//! diagram and the distance-growth regimes.

mod config;
mod phase;
mod regimes;
mod sweep;

pub use config::{ExperimentConfig, Observable, CONFIG_KEYS};
pub use phase::{phase_diagram, write_phase_csv, LambdaTrend, PhaseCell, PhaseConfig, Signature};
pub use regimes::{
    distance_regimes, fit_growth, interpolated_median, polylog_delta, GrowthFit, GrowthLaw,
    RadiusMedian, RegimeCell, RegimeFit, MIN_PAIRS,
};
pub use sweep::{
    evaluate, run_sweep, summarize, sweep_records, write_atomic, write_csv, Aggregate,
    ResultRecord, SweepOutput, SweepSummary,
};
