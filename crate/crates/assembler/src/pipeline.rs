//! End-to-end driver: build the de Bruijn graph, then alternate labeling
//! and merging passes with bubble filtering and tip removal in between,
//! all chained in memory.

use bsp_engine::Engine;

use crate::bubble::{filter_bubbles, PruneEvent};
use crate::dbg::{build_vertices, count_and_filter, edge_slots, window_ids, VertexKind};
use crate::error::AsmError;
use crate::label::{label_contigs, label_value_from_kmer, JobRun, Labeler};
use crate::merge::{merge_contigs, Contig};
use crate::metrics::{n50, StageLine};
use crate::tip::{next_round_records, remove_tips};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// k-mer size, 1..=31.
    pub k: usize,
    /// Coverage threshold: (k+1)-mers with count <= theta are discarded.
    pub coverage_threshold: u64,
    pub tip_length: u64,
    pub bubble_edit_distance: usize,
    pub labeler: Labeler,
    pub workers: usize,
    /// Total label+merge passes; error correction runs between passes.
    pub rounds: u32,
    /// Seed for vertex partitioning.
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k: 31,
            coverage_threshold: 0,
            tip_length: 80,
            bubble_edit_distance: 5,
            labeler: Labeler::Lr,
            workers: 4,
            rounds: 2,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), AsmError> {
        if !(1..=31).contains(&self.k) {
            return Err(AsmError::Config(format!(
                "k = {} out of range 1..=31",
                self.k
            )));
        }
        if self.workers == 0 {
            return Err(AsmError::Config("workers must be >= 1".into()));
        }
        if self.rounds == 0 {
            return Err(AsmError::Config("rounds must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundSummary {
    pub round: u32,
    pub contigs: usize,
    pub n50: u64,
    pub dropped_tips: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub contigs: Vec<Contig>,
    /// Superstep-level traces of every vertex-centric job.
    pub runs: Vec<JobRun>,
    /// Per-stage counters, including the shuffle-only stages.
    pub stages: Vec<StageLine>,
    pub rounds: Vec<RoundSummary>,
    pub pruned_bubbles: Vec<PruneEvent>,
    pub deleted_tip_kmers: usize,
    pub deleted_tip_contigs: usize,
}

pub fn run_pipeline(
    config: &PipelineConfig,
    reads: &[String],
) -> Result<PipelineOutcome, AsmError> {
    config.validate()?;
    let engine = Engine::new(config.workers).with_hash_seed(config.seed);
    let k = config.k;

    // Graph construction: two shuffles, counted as messages.
    let mut ids = Vec::new();
    for read in reads {
        ids.extend(window_ids(read, k).map_err(|e| e.in_stage("dbg_build"))?);
    }
    let k1mers = count_and_filter(&engine, &ids, config.coverage_threshold);
    let placements: u64 = k1mers
        .iter()
        .map(|m| edge_slots(m.id, k).len() as u64)
        .sum();
    let dbg = build_vertices(&engine, &k1mers, k);

    let mut outcome = PipelineOutcome {
        contigs: Vec::new(),
        runs: Vec::new(),
        stages: vec![StageLine {
            name: "dbg_build".into(),
            supersteps: 0,
            messages: ids.len() as u64 + placements,
        }],
        rounds: Vec::new(),
        pruned_bubbles: Vec::new(),
        deleted_tip_kmers: 0,
        deleted_tip_contigs: 0,
    };
    drop(ids);

    let mut records = engine
        .convert_vertices(dbg, |id, v| vec![(id, label_value_from_kmer(id, &v, k))])
        .map_err(AsmError::job)?;

    for round in 1..=config.rounds {
        let (labeled, label_runs) = label_contigs(&engine, records, config.labeler)
            .map_err(|e| e.in_stage("contig_label"))?;
        for run in label_runs {
            let mut line = StageLine::from_run(&run);
            line.name = format!("r{round}.{}", run.name);
            outcome.stages.push(line);
            outcome.runs.push(JobRun {
                name: format!("r{round}.{}", run.name),
                ..run
            });
        }

        let merged = merge_contigs(&engine, &labeled, k, config.tip_length, round)
            .map_err(|e| e.in_stage("contig_merge"))?;
        outcome.stages.push(StageLine {
            name: format!("r{round}.merge"),
            supersteps: 0,
            messages: merged.shuffled_pairs,
        });
        let lengths: Vec<u64> = merged.contigs.iter().map(|c| c.seq.len() as u64).collect();
        outcome.rounds.push(RoundSummary {
            round,
            contigs: merged.contigs.len(),
            n50: n50(&lengths),
            dropped_tips: merged.dropped_tips,
        });

        if round == config.rounds {
            outcome.contigs = merged.contigs;
            break;
        }

        let bubble = filter_bubbles(&engine, merged.contigs, config.bubble_edit_distance);
        outcome.stages.push(StageLine {
            name: format!("r{round}.bubble"),
            supersteps: 0,
            messages: bubble.shuffled_pairs,
        });
        outcome.pruned_bubbles.extend(bubble.pruned);

        let ambiguous: Vec<_> = labeled
            .iter()
            .filter(|(_, v)| v.kind == VertexKind::Ambiguous)
            .map(|(id, v)| (*id, v.edges.clone()))
            .collect();
        let tips = remove_tips(&engine, ambiguous, bubble.contigs, k, config.tip_length)
            .map_err(|e| e.in_stage("tip_remove"))?;
        outcome.deleted_tip_kmers += tips.deleted_kmers;
        outcome.deleted_tip_contigs += tips.deleted_contigs;
        let mut line = StageLine::from_run(&tips.run);
        line.name = format!("r{round}.{}", tips.run.name);
        outcome.stages.push(line);
        outcome.runs.push(JobRun {
            name: format!("r{round}.tip_remove"),
            ..tips.run.clone()
        });

        records = engine
            .convert_vertices(next_round_records(&tips), |id, v| vec![(id, v)])
            .map_err(AsmError::job)?;
    }

    Ok(outcome)
}
