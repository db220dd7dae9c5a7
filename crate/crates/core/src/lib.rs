//! Compliance topology optimization on structured 2-D grids.
//!
//! [`cdt`] alternates finite-element solves with 0-1 knapsack problems that
//! are solved analytically through their canonical dual ([`knapsack`]);
//! [`simp`] is the penalized-density baseline with an optimality-criteria
//! update. [`bench`] holds the MBB and cantilever benchmarks plus writers and
//! metrics used by the `cdt-topo` binary.

pub mod bench;
pub mod cdt;
pub mod error;
pub mod fem;
pub mod knapsack;
pub mod simp;

pub use cdt::{run_cdt, run_cdt_with, CDTConfig, CostWeighting, HistoryEntry, RunResult};
pub use error::{Error, Result};
pub use simp::{run_simp, run_simp_with, SIMPConfig};
