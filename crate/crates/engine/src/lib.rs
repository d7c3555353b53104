//! An in-process, multi-worker bulk-synchronous vertex-centric compute engine.
//!
//! Vertices are distributed over logical workers by hashing their 64-bit ID.
//! A job proceeds in supersteps: every active vertex runs its `compute`
//! function, may send messages to arbitrary vertex IDs, provide values to a
//! global aggregator, and vote to halt. Messages sent in superstep `t` are
//! delivered, grouped per target and sorted, at superstep `t + 1`. The job
//! terminates when every vertex is inactive and no message is in flight.
//!
//! Two extensions round out the vertex-centric core:
//!
//! * [`Engine::convert_vertices`] chains two jobs in memory: the final states
//!   of one job are transformed into the input vertices of the next without
//!   touching disk.
//! * [`Engine::mini_map_reduce`] groups arbitrary records by key, so vertex
//!   sets can be built from inputs that are not one-record-per-vertex.
//!
//! All results are independent of the worker count: inboxes are sorted by
//! `(sender, payload)` before compute sees them, aggregators are required to
//! be associative and commutative, and every returned collection is sorted.

mod error;
mod id;
mod mapreduce;
mod program;
mod result;
mod run;

pub use error::RunError;
pub use id::VertexId;
pub use mapreduce::ConvertError;
pub use program::{Context, Envelope, VertexProgram};
pub use result::{write_trace, JobResult, SuperstepStats};
pub use run::{Engine, UnroutablePolicy};

/// Stable 64-bit mixer used for vertex partitioning and key shuffling.
///
/// splitmix64 finalizer; deterministic across platforms and runs.
pub(crate) fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
