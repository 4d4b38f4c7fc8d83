//! Replicated simulation sweeps, their summaries and trend statistics.

pub mod config;
pub mod itc;
pub mod summary;
pub mod sweep;
pub mod trend;

pub use config::{Axis, CellComparator, ExperimentConfig, ItcConfig, SweepConfig};
pub use itc::{default_grids, itc_table, itc_table_with, run_itc, write_itc, ItcOutputs, ItcTable};
pub use summary::{nearest_rank, summarize, CellSummary};
pub use sweep::{cell_seed, run_sweep, run_sweep_with, write_sweep, RawRecord, SweepOutputs, SweepResult};
pub use trend::{trend_stats, Direction, TrendStats};
