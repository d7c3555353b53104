use std::io::{self, Write};

use crate::VertexId;

/// Exact per-superstep counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuperstepStats {
    pub superstep: u32,
    /// Vertices whose compute function ran.
    pub active: u64,
    /// Messages successfully enqueued for delivery.
    pub sent: u64,
    /// Messages placed into inboxes at the start of this superstep.
    pub delivered: u64,
    /// Sends addressed to the NULL sentinel, discarded.
    pub dropped_null: u64,
    /// Sends addressed to nonexistent vertices under the drop policy.
    pub dropped_unroutable: u64,
}

/// Final vertex states plus execution counters for one job.
#[derive(Clone, Debug)]
pub struct JobResult<V> {
    /// Final vertex states, sorted by vertex ID.
    pub vertices: Vec<(VertexId, V)>,
    /// Number of supersteps executed.
    pub supersteps: u32,
    /// One entry per executed superstep.
    pub stats: Vec<SuperstepStats>,
}

impl<V> JobResult<V> {
    pub fn total_sent(&self) -> u64 {
        self.stats.iter().map(|s| s.sent).sum()
    }

    pub fn max_sent_per_superstep(&self) -> u64 {
        self.stats.iter().map(|s| s.sent).max().unwrap_or(0)
    }
}

/// Emit one trace line per superstep: job name, superstep, active count,
/// messages sent and delivered.
pub fn write_trace(w: &mut dyn Write, job: &str, stats: &[SuperstepStats]) -> io::Result<()> {
    for s in stats {
        writeln!(
            w,
            "{}\tsuperstep={}\tactive={}\tsent={}\tdelivered={}",
            job, s.superstep, s.active, s.sent, s.delivered
        )?;
    }
    Ok(())
}
