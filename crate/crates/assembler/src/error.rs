use bsp_engine::VertexId;
use thiserror::Error;

use crate::kmer::CodecError;

/// Assembler-wide error type.
#[derive(Debug, Error)]
pub enum AsmError {
    #[error(transparent)]
    Codec(#[from] CodecError),

    #[error("invalid read character {byte:?} at position {position}")]
    InvalidRead { position: usize, byte: char },

    #[error("FASTQ parse error at line {line}: {reason}")]
    Fastq { line: usize, reason: String },

    #[error("FASTA parse error at line {line}: {reason}")]
    Fasta { line: usize, reason: String },

    #[error("label group {label} is not a simple path or cycle")]
    CorruptLabel { label: VertexId },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<AsmError>,
    },

    #[error("engine job failed: {0}")]
    Job(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AsmError {
    pub fn in_stage(self, stage: &'static str) -> AsmError {
        AsmError::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub fn job<E: std::fmt::Display>(err: E) -> AsmError {
        AsmError::Job(err.to_string())
    }
}
