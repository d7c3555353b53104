//! Assembly quality metrics: N50, contig counts and lengths, and exact
//! genome fraction against a reference.

use std::io::Write;

use crate::label::JobRun;
use crate::merge::Contig;

/// Per-stage counters carried into the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageLine {
    pub name: String,
    pub supersteps: u32,
    pub messages: u64,
}

impl StageLine {
    pub fn from_run(run: &JobRun) -> StageLine {
        StageLine {
            name: run.name.clone(),
            supersteps: run.supersteps,
            messages: run.messages(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AssemblyReport {
    pub contigs: usize,
    pub contigs_ge_500: usize,
    pub total_len: u64,
    pub n50: u64,
    pub largest: u64,
    pub genome_fraction: Option<f64>,
    pub stages: Vec<StageLine>,
}

/// N50: the length of the contig containing the middle base of the
/// longest-first concatenation of all contigs. For an even total the
/// middle is position ceil(T/2), 1-based.
pub fn n50(lengths: &[u64]) -> u64 {
    let total: u64 = lengths.iter().sum();
    if total == 0 {
        return 0;
    }
    let middle = total.div_ceil(2);
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut cum = 0;
    for len in sorted {
        cum += len;
        if cum >= middle {
            return len;
        }
    }
    unreachable!()
}

/// Fraction of reference positions covered by an exact occurrence of any
/// contig or its reverse complement. Overlapping occurrences all count.
pub fn genome_fraction(contigs: &[Contig], references: &[String]) -> f64 {
    let total: usize = references.iter().map(|r| r.len()).sum();
    if total == 0 {
        return 0.0;
    }
    let mut covered_total = 0usize;
    for reference in references {
        let mut covered = vec![false; reference.len()];
        for c in contigs {
            let fwd = c.seq.to_string();
            let rev = c.seq.reverse_complement().to_string();
            for needle in [&fwd, &rev] {
                if needle.is_empty() || needle.len() > reference.len() {
                    continue;
                }
                let mut from = 0;
                while let Some(pos) = reference[from..].find(needle.as_str()) {
                    let start = from + pos;
                    covered[start..start + needle.len()].fill(true);
                    from = start + 1;
                }
            }
        }
        covered_total += covered.iter().filter(|&&b| b).count();
    }
    covered_total as f64 / total as f64
}

pub fn compute_metrics(contigs: &[Contig], references: Option<&[String]>) -> AssemblyReport {
    let lengths: Vec<u64> = contigs.iter().map(|c| c.seq.len() as u64).collect();
    AssemblyReport {
        contigs: contigs.len(),
        contigs_ge_500: lengths.iter().filter(|&&l| l >= 500).count(),
        total_len: lengths.iter().sum(),
        n50: n50(&lengths),
        largest: lengths.iter().max().copied().unwrap_or(0),
        genome_fraction: references.map(|r| genome_fraction(contigs, r)),
        stages: Vec::new(),
    }
}

/// Tab-separated key/value lines, stages last.
pub fn write_report(report: &AssemblyReport, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "contigs\t{}", report.contigs)?;
    writeln!(w, "contigs_ge_500\t{}", report.contigs_ge_500)?;
    writeln!(w, "total_length\t{}", report.total_len)?;
    writeln!(w, "n50\t{}", report.n50)?;
    writeln!(w, "largest_contig\t{}", report.largest)?;
    if let Some(gf) = report.genome_fraction {
        writeln!(w, "genome_fraction\t{:.4}", gf)?;
    }
    for s in &report.stages {
        writeln!(w, "stage.{}.supersteps\t{}", s.name, s.supersteps)?;
        writeln!(w, "stage.{}.messages\t{}", s.name, s.messages)?;
    }
    Ok(())
}
