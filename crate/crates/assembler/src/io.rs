//! FASTQ input and FASTA input/output.

use std::io::{BufRead, Write};

use crate::error::AsmError;
use crate::kmer::{contig_seq_no, contig_worker};
use crate::merge::Contig;

/// Parse 4-line FASTQ records, returning uppercased sequences. Qualities
/// are ignored; trailing blank lines are tolerated.
pub fn parse_fastq(reader: &mut dyn BufRead) -> Result<Vec<String>, AsmError> {
    let mut reads = Vec::new();
    let mut lines = reader.lines().enumerate();
    while let Some((n, header)) = lines.next() {
        let header = header?;
        if header.is_empty() {
            // Only blank lines may follow.
            for (m, rest) in lines.by_ref() {
                if !rest?.is_empty() {
                    return Err(AsmError::Fastq {
                        line: m + 1,
                        reason: "content after blank line".into(),
                    });
                }
            }
            break;
        }
        if !header.starts_with('@') {
            return Err(AsmError::Fastq {
                line: n + 1,
                reason: format!("expected '@' header, found {:?}", header.chars().next()),
            });
        }
        let Some((n2, seq)) = lines.next() else {
            return Err(AsmError::Fastq {
                line: n + 2,
                reason: "missing sequence line".into(),
            });
        };
        let seq = seq?;
        let Some((n3, plus)) = lines.next() else {
            return Err(AsmError::Fastq {
                line: n2 + 2,
                reason: "missing '+' separator".into(),
            });
        };
        if !plus?.starts_with('+') {
            return Err(AsmError::Fastq {
                line: n3 + 1,
                reason: "expected '+' separator".into(),
            });
        }
        let Some((_, qual)) = lines.next() else {
            return Err(AsmError::Fastq {
                line: n3 + 2,
                reason: "missing quality line".into(),
            });
        };
        let qual = qual?;
        if qual.len() != seq.len() {
            return Err(AsmError::Fastq {
                line: n3 + 2,
                reason: format!(
                    "quality length {} does not match sequence length {}",
                    qual.len(),
                    seq.len()
                ),
            });
        }
        reads.push(seq.to_ascii_uppercase());
    }
    Ok(reads)
}

/// Parse FASTA records as (name, sequence) pairs, uppercased.
pub fn parse_fasta(reader: &mut dyn BufRead) -> Result<Vec<(String, String)>, AsmError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('>') {
            out.push((name.trim().to_string(), String::new()));
        } else {
            match out.last_mut() {
                Some((_, seq)) => seq.push_str(&line.trim().to_ascii_uppercase()),
                None => {
                    return Err(AsmError::Fasta {
                        line: n + 1,
                        reason: "sequence before header".into(),
                    })
                }
            }
        }
    }
    Ok(out)
}

/// Write contigs as FASTA, longest first (ties by ID), wrapped at 80
/// columns. Headers carry the ID fields, length, coverage and circularity.
pub fn write_fasta(contigs: &[Contig], w: &mut dyn Write) -> std::io::Result<()> {
    let mut order: Vec<&Contig> = contigs.iter().collect();
    order.sort_by(|a, b| b.seq.len().cmp(&a.seq.len()).then(a.id.cmp(&b.id)));
    for c in order {
        writeln!(
            w,
            ">contig_{}_{} len={} cov={} circular={}",
            contig_worker(c.id),
            contig_seq_no(c.id),
            c.seq.len(),
            c.cov,
            c.circular
        )?;
        let seq = c.seq.to_string();
        for chunk in seq.as_bytes().chunks(80) {
            w.write_all(chunk)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}
