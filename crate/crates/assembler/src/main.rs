//! Command-line driver: `assemble` runs the full pipeline on FASTQ reads;
//! `simulate` produces deterministic desk-scale read sets.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dbg_assembler::dbg;
use dbg_assembler::io::{parse_fasta, parse_fastq, write_fasta};
use dbg_assembler::label::Labeler;
use dbg_assembler::metrics::{compute_metrics, write_report};
use dbg_assembler::pipeline::{run_pipeline, PipelineConfig};
use dbg_assembler::sim::{simulate, write_fastq, SimConfig};

#[derive(Parser)]
#[command(name = "dbg-assembler", about = "De novo genome assembler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LabelerArg {
    Lr,
    Sv,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble FASTQ reads into FASTA contigs.
    Assemble {
        /// Input reads (FASTQ).
        #[arg(long)]
        reads: PathBuf,
        /// Output contigs (FASTA).
        #[arg(long)]
        out: PathBuf,
        /// k-mer size (1..=31).
        #[arg(long, default_value_t = 31)]
        k: usize,
        /// Discard (k+1)-mers with coverage <= this threshold.
        #[arg(long, default_value_t = 0)]
        min_coverage: u64,
        /// Dangling paths up to this length are removed as tips.
        #[arg(long, default_value_t = 80)]
        tip_length: u64,
        /// Bubble arms closer than this edit distance are pruned.
        #[arg(long, default_value_t = 5)]
        edit_distance: usize,
        /// Contig labeling strategy.
        #[arg(long, value_enum, default_value_t = LabelerArg::Lr)]
        labeler: LabelerArg,
        /// Logical worker count.
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Label+merge passes; correction runs between passes.
        #[arg(long, default_value_t = 2)]
        rounds: u32,
        /// Partitioning seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reference FASTA for the genome-fraction metric.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Write a tab-separated metrics report here (default: stdout).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write a per-superstep job trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Dump the constructed de Bruijn graph in binary form.
        #[arg(long)]
        dump_graph: Option<PathBuf>,
    },
    /// Generate reads from a random or supplied reference.
    Simulate {
        /// Output reads (FASTQ).
        #[arg(long)]
        out: PathBuf,
        /// Sample from this reference FASTA instead of a random one.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Length of the random reference.
        #[arg(long, default_value_t = 20_000)]
        length: usize,
        #[arg(long, default_value_t = 80)]
        read_len_min: usize,
        #[arg(long, default_value_t = 120)]
        read_len_max: usize,
        /// Mean per-base coverage.
        #[arg(long, default_value_t = 30.0)]
        depth: f64,
        /// Per-base substitution probability.
        #[arg(long, default_value_t = 0.0)]
        error_rate: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the reference as FASTA.
        #[arg(long)]
        reference_out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Assemble {
            reads,
            out,
            k,
            min_coverage,
            tip_length,
            edit_distance,
            labeler,
            workers,
            rounds,
            seed,
            reference,
            report,
            trace,
            dump_graph,
        } => {
            let mut reader = BufReader::new(
                File::open(&reads).with_context(|| format!("opening {}", reads.display()))?,
            );
            let read_seqs = parse_fastq(&mut reader)?;

            let config = PipelineConfig {
                k,
                coverage_threshold: min_coverage,
                tip_length,
                bubble_edit_distance: edit_distance,
                labeler: match labeler {
                    LabelerArg::Lr => Labeler::Lr,
                    LabelerArg::Sv => Labeler::Sv,
                },
                workers,
                rounds,
                seed,
            };

            if let Some(path) = dump_graph {
                let graph = dbg::build_dbg(
                    &bsp_engine::Engine::new(workers).with_hash_seed(seed),
                    &read_seqs,
                    k,
                    min_coverage,
                )?;
                let mut w = BufWriter::new(File::create(&path)?);
                dbg::dump_graph(&mut w, &graph)?;
            }

            let outcome = run_pipeline(&config, &read_seqs)?;

            let mut fasta = BufWriter::new(
                File::create(&out).with_context(|| format!("creating {}", out.display()))?,
            );
            write_fasta(&outcome.contigs, &mut fasta)?;
            fasta.flush()?;

            let references = match reference {
                Some(path) => {
                    let mut r = BufReader::new(File::open(&path)?);
                    Some(
                        parse_fasta(&mut r)?
                            .into_iter()
                            .map(|(_, seq)| seq)
                            .collect::<Vec<_>>(),
                    )
                }
                None => None,
            };
            let mut metrics = compute_metrics(&outcome.contigs, references.as_deref());
            metrics.stages = outcome.stages.clone();

            match report {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path)?);
                    write_report(&metrics, &mut w)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    write_report(&metrics, &mut stdout.lock())?;
                }
            }

            if let Some(path) = trace {
                let mut w = BufWriter::new(File::create(&path)?);
                for run in &outcome.runs {
                    bsp_engine::write_trace(&mut w, &run.name, &run.stats)?;
                }
            }
            Ok(())
        }
        Command::Simulate {
            out,
            reference,
            length,
            read_len_min,
            read_len_max,
            depth,
            error_rate,
            seed,
            reference_out,
        } => {
            let reference_seq = match reference {
                Some(path) => {
                    let mut r = BufReader::new(File::open(&path)?);
                    let records = parse_fasta(&mut r)?;
                    Some(
                        records
                            .into_iter()
                            .map(|(_, seq)| seq)
                            .collect::<Vec<_>>()
                            .join(""),
                    )
                }
                None => None,
            };
            let config = SimConfig {
                reference: reference_seq,
                reference_len: length,
                read_len_min,
                read_len_max,
                depth,
                error_rate,
                seed,
            };
            let sim = simulate(&config)?;
            let mut w = BufWriter::new(File::create(&out)?);
            write_fastq(&sim.reads, &mut w)?;
            w.flush()?;
            if let Some(path) = reference_out {
                let mut w = BufWriter::new(File::create(&path)?);
                writeln!(w, ">reference len={}", sim.reference.len())?;
                for chunk in sim.reference.as_bytes().chunks(80) {
                    w.write_all(chunk)?;
                    w.write_all(b"\n")?;
                }
            }
            eprintln!(
                "simulated {} reads ({} from the reverse strand) over a {} bp reference",
                sim.reads.len(),
                sim.rc_reads,
                sim.reference.len()
            );
            Ok(())
        }
    }
}
