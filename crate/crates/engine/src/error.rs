use thiserror::Error;

use crate::{JobResult, VertexId};

/// Failure modes of [`crate::Engine::run_job`].
#[derive(Debug, Error)]
pub enum RunError<V> {
    #[error("duplicate vertex id {0} in job input")]
    DuplicateVertex(VertexId),

    #[error("message to nonexistent vertex {target} in superstep {superstep}")]
    Unroutable { target: VertexId, superstep: u32 },

    #[error("job did not terminate within {max_supersteps} supersteps")]
    Nontermination {
        max_supersteps: u32,
        /// State at the moment the guard fired.
        partial: JobResult<V>,
    },
}
