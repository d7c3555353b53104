//! Contig merging: group labeled vertices, order each group into a chain
//! from a contig end, and stitch member sequences with (k-1)-base overlap
//! elision, reverse-complementing members observed on the other strand.
//!
//! Groups with a NULL-sided end whose stitched length is within the tip
//! threshold are dropped here; they are short dangling paths.

use bsp_engine::{Engine, VertexId};

use crate::dbg::{Dir, VertexKind};
use crate::error::AsmError;
use crate::kmer::{make_contig_id, Orientation, PackedSeq};
use crate::label::{ChainEdge, LabelValue, NodePayload};

/// One oriented neighbor of a contig; the contig-side label is always `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NbrRef {
    pub id: VertexId,
    /// Neighbor-side polarity label.
    pub label: Orientation,
    /// Coverage of the boundary edge.
    pub cov: u64,
}

/// A merged contig.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contig {
    pub id: VertexId,
    pub seq: PackedSeq,
    /// Minimum coverage over merged edges (and member contigs).
    pub cov: u64,
    pub in_nbr: Option<NbrRef>,
    pub out_nbr: Option<NbrRef>,
    pub circular: bool,
}

impl Contig {
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}

/// Group member shipped through the merge shuffle. `id` leads the ordering,
/// so values within a group arrive sorted by vertex ID.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MergeMember {
    pub id: VertexId,
    pub kind: VertexKind,
    pub edges: Vec<ChainEdge>,
    pub severed: [bool; 2],
    pub payload: NodePayload,
}

#[derive(Clone, Debug)]
pub struct MergeOutcome {
    pub contigs: Vec<Contig>,
    pub dropped_tips: usize,
    /// (key, value) pairs shuffled by the grouping step.
    pub shuffled_pairs: u64,
}

#[derive(Clone, Debug)]
enum Draft {
    Contig(Box<ContigDraft>),
    Tip,
    Corrupt,
}

#[derive(Clone, Debug)]
struct ContigDraft {
    seq: PackedSeq,
    cov: u64,
    in_nbr: Option<NbrRef>,
    out_nbr: Option<NbrRef>,
    circular: bool,
}

/// Group labeled vertices by contig label and stitch each group.
///
/// `round` becomes the worker field of the assigned contig IDs, so IDs from
/// different merge rounds never collide and do not depend on the engine's
/// worker count.
pub fn merge_contigs(
    engine: &Engine,
    labeled: &[(VertexId, LabelValue)],
    k: usize,
    tip_threshold: u64,
    round: u32,
) -> Result<MergeOutcome, AsmError> {
    let mut shuffled = 0u64;
    for (_, v) in labeled {
        if v.kind != VertexKind::Ambiguous && v.label.is_some() {
            shuffled += 1;
        }
    }
    let grouped = engine.mini_map_reduce(
        labeled,
        |(id, v)| match (v.kind, v.label) {
            (VertexKind::Ambiguous, _) | (_, None) => vec![],
            (_, Some(label)) => vec![(
                label,
                MergeMember {
                    id: *id,
                    kind: v.kind,
                    edges: v.edges.clone(),
                    severed: v.severed,
                    payload: v.payload.clone(),
                },
            )],
        },
        |_, members| vec![stitch_group(members, k, tip_threshold)],
    );

    let mut contigs = Vec::new();
    let mut dropped = 0;
    for (label, drafts) in grouped {
        for draft in drafts {
            match draft {
                Draft::Corrupt => return Err(AsmError::CorruptLabel { label }),
                Draft::Tip => dropped += 1,
                Draft::Contig(d) => {
                    let id = make_contig_id(round, contigs.len() as u32 + 1)?;
                    contigs.push(Contig {
                        id,
                        seq: d.seq,
                        cov: d.cov,
                        in_nbr: d.in_nbr,
                        out_nbr: d.out_nbr,
                        circular: d.circular,
                    });
                }
            }
        }
    }
    Ok(MergeOutcome {
        contigs,
        dropped_tips: dropped,
        shuffled_pairs: shuffled,
    })
}

/// Mirror image of an edge as stored by the vertex on its other end.
fn reverse_edge(e: &ChainEdge, me: VertexId) -> ChainEdge {
    ChainEdge {
        other: me,
        my_label: e.other_label,
        other_label: e.my_label,
        dir: e.dir.flip(),
        cov: e.cov,
    }
}

/// Orientation in which the walk reads a vertex when leaving through
/// `edge`, or when arriving at `edge.other`.
fn leave_orientation(edge: &ChainEdge) -> Orientation {
    match edge.dir {
        Dir::Out => edge.my_label,
        Dir::In => edge.my_label.complement(),
    }
}

fn arrive_orientation(edge: &ChainEdge) -> Orientation {
    match edge.dir {
        Dir::Out => edge.other_label,
        Dir::In => edge.other_label.complement(),
    }
}

/// The outside neighbor reference of an end member read in orientation
/// `or`: the severed edge rewritten so the member side matches the walk,
/// which leaves the contig side at `L`.
fn outside_ref(edge: &ChainEdge, or: Orientation) -> Option<NbrRef> {
    if edge.other.is_null() {
        return None;
    }
    let label = if edge.my_label == or {
        edge.other_label
    } else {
        edge.other_label.complement()
    };
    Some(NbrRef {
        id: edge.other,
        label,
        cov: edge.cov,
    })
}

fn oriented_seq(member: &MergeMember, or: Orientation, k: usize) -> PackedSeq {
    let seq = match &member.payload {
        NodePayload::Kmer => PackedSeq::from_window(member.id.0, k),
        NodePayload::Contig { seq, .. } => seq.clone(),
    };
    match or {
        Orientation::L => seq,
        Orientation::H => seq.reverse_complement(),
    }
}

fn member_own_cov(member: &MergeMember) -> Option<u64> {
    match &member.payload {
        NodePayload::Kmer => None,
        NodePayload::Contig { cov, .. } => Some(*cov),
    }
}

fn stitch_group(members: &[MergeMember], k: usize, tip_threshold: u64) -> Draft {
    if let [single] = members {
        return stitch_singleton(single, k, tip_threshold);
    }

    let index: std::collections::BTreeMap<VertexId, &MergeMember> =
        members.iter().map(|m| (m.id, m)).collect();
    if index.len() != members.len() {
        return Draft::Corrupt;
    }

    // An end has a severed side; a cycle has none anywhere.
    let ends: Vec<&MergeMember> = members
        .iter()
        .filter(|m| m.severed[0] || m.severed[1])
        .collect();
    let circular = ends.is_empty();
    let start: &MergeMember = if circular {
        members.iter().min_by_key(|m| m.id).unwrap()
    } else {
        ends.iter().min_by_key(|m| m.id).unwrap()
    };

    // First walk edge: the unsevered group edge (path end), or the edge
    // reading `Out` in the start vertex's own L-frame (cycle).
    let start_exit: &ChainEdge = if circular {
        match start.edges.iter().find(|e| e.dir_normalized() == Dir::Out) {
            Some(e) => e,
            None => return Draft::Corrupt,
        }
    } else {
        let unsevered: Vec<&ChainEdge> = start
            .edges
            .iter()
            .take(2)
            .enumerate()
            .filter(|(slot, _)| !start.severed[*slot])
            .map(|(_, e)| e)
            .collect();
        match unsevered.as_slice() {
            [e] => e,
            _ => return Draft::Corrupt,
        }
    };

    let start_or = leave_orientation(start_exit);
    let mut seq = oriented_seq(start, start_or, k);
    if seq.len() < k {
        return Draft::Corrupt;
    }
    let mut cov: Option<u64> = member_own_cov(start);
    let in_ref: Option<NbrRef> = if circular {
        None
    } else {
        let severed_slot = if start.severed[0] { 0 } else { 1 };
        start
            .edges
            .get(severed_slot)
            .and_then(|e| outside_ref(e, start_or))
    };

    let mut visited = 1usize;
    let mut current = start;
    let mut exit = start_exit;
    let out_ref: Option<NbrRef>;
    loop {
        cov = Some(cov.map_or(exit.cov, |c| c.min(exit.cov)));
        if circular && exit.other == start.id && visited == members.len() {
            // Cut the cycle at the start without repeating the wrap
            // overlap. Degenerate cycles whose period is shorter than k
            // keep the full walk spelling so the sequence stays >= k long.
            let period = seq.len() - (k - 1);
            if period >= k {
                seq.truncate(period);
            }
            out_ref = None;
            break;
        }
        let Some(&next) = index.get(&exit.other) else {
            return Draft::Corrupt;
        };
        visited += 1;
        if visited > members.len() {
            return Draft::Corrupt;
        }
        let next_or = arrive_orientation(exit);
        let wanted = reverse_edge(exit, current.id);
        let Some(entry_slot) = next.edges.iter().take(2).position(|e| *e == wanted) else {
            return Draft::Corrupt;
        };

        let tail = oriented_seq(next, next_or, k);
        if tail.len() < k {
            return Draft::Corrupt;
        }
        for i in (k - 1)..tail.len() {
            seq.push(tail.get(i));
        }
        if let Some(own) = member_own_cov(next) {
            cov = Some(cov.map_or(own, |c| c.min(own)));
        }

        let exit_slot = entry_slot ^ 1;
        let exit_is_severed = next.severed.get(exit_slot).copied().unwrap_or(true);
        match next.edges.get(exit_slot) {
            Some(e) if !exit_is_severed => {
                current = next;
                exit = e;
            }
            maybe_edge => {
                if circular || visited != members.len() {
                    return Draft::Corrupt;
                }
                out_ref = maybe_edge.and_then(|e| outside_ref(e, next_or));
                break;
            }
        }
    }

    finish_draft(seq, cov, in_ref, out_ref, circular, tip_threshold)
}

fn stitch_singleton(member: &MergeMember, k: usize, tip_threshold: u64) -> Draft {
    // A lone vertex keeps its stored (canonical / strand-1) orientation;
    // every edge it holds points outside the group.
    let seq = oriented_seq(member, Orientation::L, k);
    let mut in_ref = None;
    let mut out_ref = None;
    for e in member.edges.iter().take(2) {
        match e.dir_normalized() {
            Dir::In => in_ref = outside_ref(e, Orientation::L),
            Dir::Out => out_ref = outside_ref(e, Orientation::L),
        }
    }
    let cov = member_own_cov(member).or_else(|| member.edges.iter().take(2).map(|e| e.cov).min());
    let circular = matches!(member.payload, NodePayload::Contig { circular: true, .. });
    finish_draft(seq, cov, in_ref, out_ref, circular, tip_threshold)
}

fn finish_draft(
    seq: PackedSeq,
    cov: Option<u64>,
    in_ref: Option<NbrRef>,
    out_ref: Option<NbrRef>,
    circular: bool,
    tip_threshold: u64,
) -> Draft {
    let len = seq.len() as u64;
    let null_sided = !circular && (in_ref.is_none() || out_ref.is_none());
    if null_sided && len <= tip_threshold {
        return Draft::Tip;
    }
    // Free-floating contigs (no neighbor fixes the strand) are emitted in
    // canonical orientation for reproducible output.
    let seq = if in_ref.is_none() && out_ref.is_none() {
        seq.canonical()
    } else {
        seq
    };
    Draft::Contig(Box::new(ContigDraft {
        seq,
        cov: cov.unwrap_or(0),
        in_nbr: in_ref,
        out_nbr: out_ref,
        circular,
    }))
}
