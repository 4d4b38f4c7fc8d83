//! Data-parallel map over replication indices.
//!
//! Every work item derives its own seed from its index, so the parallel and
//! sequential paths produce identical results in identical order.

use serde::{Deserialize, Serialize};

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    /// Rayon's global pool. Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
    Sequential,
}

/// `(0..n).map(f).collect()`, in parallel when requested and available.
pub fn map_indices<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}
