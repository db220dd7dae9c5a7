//! Benchmark problems, output writers, comparison metrics and the CLI front end.

mod metrics;
mod output;
mod problems;

pub use metrics::{checkerboard_metric, grayness_metric, DEFAULT_GRAY_DELTA};
pub use output::{format_density_pgm, write_density_csv, write_density_image, write_history_csv};
pub use problems::{problem_cantilever, problem_mbb};
