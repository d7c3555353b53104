//! Bubble filtering: contigs sharing both ambiguous endpoints are grouped;
//! within a group, a low-coverage contig that is nearly identical to a
//! higher-coverage one (small edit distance, strand-aware) is pruned.

use bsp_engine::{Engine, VertexId};
use rustc_hash::FxHashMap;

use crate::kmer::PackedSeq;
use crate::merge::Contig;

/// Unordered endpoint pair identifying a bubble site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BubbleKey {
    pub nb1: VertexId,
    pub nb2: VertexId,
}

impl BubbleKey {
    fn new(a: VertexId, b: VertexId) -> BubbleKey {
        BubbleKey {
            nb1: a.min(b),
            nb2: a.max(b),
        }
    }
}

/// The key of a contig, if it runs between two non-NULL endpoints.
pub fn key_of(contig: &Contig) -> Option<BubbleKey> {
    match (&contig.in_nbr, &contig.out_nbr) {
        (Some(a), Some(b)) => Some(BubbleKey::new(a.id, b.id)),
        _ => None,
    }
}

/// Unit-cost Levenshtein distance between two packed sequences.
pub fn edit_distance(a: &PackedSeq, b: &PackedSeq) -> usize {
    let (n, m) = (a.len(), b.len());
    if n == 0 {
        return m;
    }
    let mut prev: Vec<usize> = (0..=m).collect();
    let mut cur = vec![0usize; m + 1];
    for i in 1..=n {
        cur[0] = i;
        let ai = a.get(i - 1);
        for j in 1..=m {
            let sub = prev[j - 1] + usize::from(ai != b.get(j - 1));
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// One pruning decision, for traces and tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneEvent {
    pub pruned: VertexId,
    pub kept: VertexId,
    pub distance: usize,
}

#[derive(Clone, Debug)]
pub struct BubbleOutcome {
    pub contigs: Vec<Contig>,
    pub pruned: Vec<PruneEvent>,
    pub shuffled_pairs: u64,
}

/// Prune near-duplicate low-coverage arms. Contigs without two ambiguous
/// endpoints pass through untouched.
pub fn filter_bubbles(
    engine: &Engine,
    contigs: Vec<Contig>,
    distance_threshold: usize,
) -> BubbleOutcome {
    let by_id: FxHashMap<VertexId, &Contig> = contigs.iter().map(|c| (c.id, c)).collect();
    let records: Vec<&Contig> = contigs.iter().collect();
    let shuffled = records.iter().filter(|c| key_of(c).is_some()).count() as u64;

    let grouped = engine.mini_map_reduce(
        &records,
        |c| match key_of(c) {
            Some(key) => vec![(key, c.id)],
            None => vec![],
        },
        |key, ids| {
            let members: Vec<&Contig> = ids.iter().map(|id| by_id[id]).collect();
            filter_group(*key, &members, distance_threshold)
        },
    );

    let mut pruned_events: Vec<PruneEvent> = grouped.into_iter().flat_map(|(_, v)| v).collect();
    pruned_events.sort_by_key(|e| e.pruned);
    let pruned_set: std::collections::BTreeSet<VertexId> =
        pruned_events.iter().map(|e| e.pruned).collect();
    let survivors = contigs
        .into_iter()
        .filter(|c| !pruned_set.contains(&c.id))
        .collect();
    BubbleOutcome {
        contigs: survivors,
        pruned: pruned_events,
        shuffled_pairs: shuffled,
    }
}

/// Whether the contig reads nb1 -> nb2 (`true`) or nb2 -> nb1.
fn runs_forward(contig: &Contig, key: BubbleKey) -> bool {
    contig.in_nbr.map(|n| n.id) == Some(key.nb1)
}

fn filter_group(key: BubbleKey, members: &[&Contig], threshold: usize) -> Vec<PruneEvent> {
    // Deterministic pairwise order: coverage descending, then ID.
    let mut order: Vec<&Contig> = members.to_vec();
    order.sort_by(|a, b| b.cov.cmp(&a.cov).then(a.id.cmp(&b.id)));

    let mut pruned = vec![false; order.len()];
    let mut events = Vec::new();
    for i in 0..order.len() {
        if pruned[i] {
            continue;
        }
        for j in i + 1..order.len() {
            if pruned[j] {
                continue;
            }
            let (ci, cj) = (order[i], order[j]);
            let d = if key.nb1 == key.nb2 {
                // Both endpoints coincide: direction is meaningless, so
                // compare both strands.
                edit_distance(&ci.seq, &cj.seq)
                    .min(edit_distance(&ci.seq, &cj.seq.reverse_complement()))
            } else if runs_forward(ci, key) == runs_forward(cj, key) {
                edit_distance(&ci.seq, &cj.seq)
            } else {
                edit_distance(&ci.seq, &cj.seq.reverse_complement())
            };
            if d < threshold {
                // Strictly smaller coverage loses; ties keep both.
                if cj.cov < ci.cov {
                    pruned[j] = true;
                    events.push(PruneEvent {
                        pruned: cj.id,
                        kept: ci.id,
                        distance: d,
                    });
                } else if ci.cov < cj.cov {
                    pruned[i] = true;
                    events.push(PruneEvent {
                        pruned: ci.id,
                        kept: cj.id,
                        distance: d,
                    });
                    break;
                }
            }
        }
    }
    events
}
