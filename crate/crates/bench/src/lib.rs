//! Benchmark harness for the CEV engines: sweeps, timing, CSV and error surfaces.

pub mod config;
pub mod error;
pub mod report;
pub mod surface;
pub mod sweep;
pub mod timing;

pub use config::{ExponentArg, SweepConfig};
pub use error::BenchError;
pub use report::{write_sweep_csv, SWEEP_HEADER};
pub use surface::{emit_error_surface, read_surface, render_svg, write_surface_csv, SurfacePoint, SURFACE_HEADER};
pub use sweep::{run_sweep, BenchmarkRecord, EngineOutcome, Summary, SweepReport};
pub use timing::{measure, TimingStats};
