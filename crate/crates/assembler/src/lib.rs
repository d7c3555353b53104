//! De novo genome assembler built on a vertex-centric BSP engine.
//!
//! Reads are cut into (k+1)-mers, which become the edges of a de Bruijn
//! graph over canonical k-mer vertices. Five composable operations run as
//! engine jobs: graph construction, contig labeling (bidirectional list
//! ranking with a connected-components fallback, or pure simplified S-V),
//! contig merging, bubble filtering and tip removal. The pipeline loops
//! labeling and merging after error correction to grow longer contigs.

pub mod bubble;
pub mod dbg;
pub mod error;
pub mod io;
pub mod kmer;
pub mod label;
pub mod merge;
pub mod metrics;
pub mod pipeline;
pub mod sim;
pub mod tip;
