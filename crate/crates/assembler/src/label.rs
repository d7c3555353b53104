//! Contig labeling: classify vertex types, recognize contig ends, and give
//! every unambiguous vertex the label of the maximal unambiguous path it
//! lies on.
//!
//! Two strategies, both engine jobs over the same records:
//!
//! * bidirectional list ranking: each vertex keeps a pair of predecessor
//!   IDs, one per sequencing direction, doubling the covered distance each
//!   round until both entries are flipped contig-end IDs. Cycles never
//!   finish; when a round makes no progress the still-active vertices are
//!   handed to the connected-components fallback.
//! * simplified S-V connected components: parent links hook and shortcut
//!   until every vertex holds the smallest ID in its component.
//!
//! Labels differ between the strategies (smaller contig-end ID vs smallest
//! member ID) but induce the same partition into contigs.

use bsp_engine::{Context, Engine, Envelope, JobResult, SuperstepStats, VertexId, VertexProgram};

use crate::dbg::{classify_views, edge_views, Dir, KmerVertex, VertexKind};
use crate::error::AsmError;
use crate::kmer::{Orientation, PackedSeq, FLIP_BIT};

/// Superstep/message record of one engine job, for traces and reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobRun {
    pub name: String,
    pub supersteps: u32,
    pub stats: Vec<SuperstepStats>,
}

impl JobRun {
    pub fn from_result<V>(name: &str, result: &JobResult<V>) -> JobRun {
        JobRun {
            name: name.to_string(),
            supersteps: result.supersteps,
            stats: result.stats.clone(),
        }
    }

    pub fn messages(&self) -> u64 {
        self.stats.iter().map(|s| s.sent).sum()
    }
}

/// Labeling-stage vertex records keyed by vertex ID.
pub type LabelRecords = Vec<(VertexId, LabelValue)>;

/// Which labeling algorithm drives the partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labeler {
    /// Bidirectional list ranking with S-V fallback for cycles.
    Lr,
    /// Simplified S-V only.
    Sv,
}

/// One edge of the labeling graph, as seen from the vertex storing it.
///
/// `other` is the adjacent vertex in this graph: a k-mer ID, a contig ID
/// (from the second round on), or NULL for a dead end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainEdge {
    pub other: VertexId,
    pub my_label: Orientation,
    pub other_label: Orientation,
    pub dir: Dir,
    pub cov: u64,
}

impl ChainEdge {
    /// Direction once this side's label is normalized to `L`.
    pub fn dir_normalized(&self) -> Dir {
        if self.my_label == Orientation::H {
            self.dir.flip()
        } else {
            self.dir
        }
    }
}

/// Sequence payload carried through labeling into merging.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodePayload {
    /// Sequence implied by the vertex ID.
    Kmer,
    /// Merged contig: stored sequence plus its own coverage.
    Contig {
        seq: PackedSeq,
        cov: u64,
        circular: bool,
    },
}

/// Vertex state for the labeling stage.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabelValue {
    pub kind: VertexKind,
    /// At most two edges for unambiguous vertices, ordered in-edge first
    /// (normalized); the full list for ambiguous ones.
    pub edges: Vec<ChainEdge>,
    /// Sides replaced by a self-loop at end recognition.
    pub severed: [bool; 2],
    /// Predecessor ID pair; bit 62 marks a reached contig end.
    pub pair: [u64; 2],
    pub label: Option<VertexId>,
    pub needs_sv: bool,
    pub payload: NodePayload,
}

impl LabelValue {
    pub fn new(kind: VertexKind, edges: Vec<ChainEdge>, payload: NodePayload) -> LabelValue {
        LabelValue {
            kind,
            edges,
            severed: [false; 2],
            pair: [0; 2],
            label: None,
            needs_sv: false,
            payload,
        }
    }

    fn finalized(&self) -> bool {
        is_marked(self.pair[0]) && is_marked(self.pair[1])
    }
}

fn mark(id: VertexId) -> u64 {
    id.0 | FLIP_BIT
}

fn is_marked(raw: u64) -> bool {
    raw & FLIP_BIT != 0
}

fn unmark(raw: u64) -> VertexId {
    VertexId(raw & !FLIP_BIT)
}

/// Build labeling records from a freshly constructed de Bruijn graph.
pub fn label_input_from_dbg(
    vertices: &[(VertexId, KmerVertex)],
    k: usize,
) -> Vec<(VertexId, LabelValue)> {
    vertices
        .iter()
        .map(|(id, v)| (*id, label_value_from_kmer(*id, v, k)))
        .collect()
}

/// Labeling record of one de Bruijn graph vertex.
pub fn label_value_from_kmer(id: VertexId, v: &KmerVertex, k: usize) -> LabelValue {
    let views = edge_views(id, k, &v.adj);
    let kind = classify_views(id, &views);
    let mut edges: Vec<ChainEdge> = views
        .iter()
        .map(|view| ChainEdge {
            other: view.neighbor,
            my_label: view.my_label,
            other_label: view.other_label,
            dir: view.dir,
            cov: view.cov,
        })
        .collect();
    if kind == VertexKind::OneOne {
        edges.sort_by_key(|e| (e.dir_normalized(), e.other, e.my_label));
    }
    LabelValue::new(kind, edges, NodePayload::Kmer)
}

// ---------------------------------------------------------------------------
// The labeling vertex program

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum LabelMsg {
    /// Broadcast by ambiguous vertices in superstep 1.
    Announce,
    /// Ask the predecessor held in `slot` for its other entry.
    Request { slot: u8 },
    /// Answer carrying the predecessor's other entry.
    Response { slot: u8, value: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LabelMode {
    /// Full bidirectional list ranking.
    Rank,
    /// Stop after end recognition (superstep 2); used before S-V.
    SeverOnly,
}

struct LabelProgram {
    mode: LabelMode,
    /// Fallback safety net: rounds after which remaining actives go to S-V.
    round_limit: u32,
}

impl VertexProgram for LabelProgram {
    type Value = LabelValue;
    type Msg = LabelMsg;
    /// (entry flips this superstep, vertices still unfinished)
    type Agg = (u64, u64);

    fn merge_agg(into: &mut (u64, u64), from: &(u64, u64)) {
        into.0 += from.0;
        into.1 += from.1;
    }

    fn compute(
        &self,
        id: VertexId,
        value: &mut LabelValue,
        inbox: &[Envelope<LabelMsg>],
        ctx: &mut Context<'_, LabelMsg, (u64, u64)>,
    ) {
        if value.kind == VertexKind::Ambiguous {
            if ctx.superstep() == 1 {
                for edge in &value.edges {
                    if !edge.other.is_null() {
                        ctx.send(edge.other, LabelMsg::Announce);
                    }
                }
            }
            ctx.vote_to_halt();
            return;
        }
        if value.needs_sv {
            ctx.vote_to_halt();
            return;
        }

        match ctx.superstep() {
            1 => {} // wait for ambiguous broadcasts
            2 => {
                let announced: Vec<VertexId> = inbox
                    .iter()
                    .filter(|e| e.msg == LabelMsg::Announce)
                    .map(|e| e.from)
                    .collect();
                let mut flips = 0;
                for slot in 0..2usize {
                    let sever = match value.edges.get(slot) {
                        Some(e) => e.other.is_null() || announced.contains(&e.other),
                        None => true, // missing side of a <1> vertex: dead end
                    };
                    if sever {
                        value.severed[slot] = true;
                        value.pair[slot] = mark(id);
                        flips += 1;
                    } else {
                        value.pair[slot] = value.edges[slot].other.0;
                    }
                }
                if self.mode == LabelMode::SeverOnly {
                    ctx.vote_to_halt();
                    return;
                }
                if value.finalized() {
                    value.label = Some(unmark(value.pair[0]).min(unmark(value.pair[1])));
                    ctx.provide((flips, 0));
                    ctx.vote_to_halt();
                } else {
                    ctx.provide((flips, 1));
                    send_requests(value, ctx);
                }
            }
            ss if ss % 2 == 1 => {
                // Response step. The aggregate reflects the previous update
                // step; zero flips with unfinished vertices means only
                // cycles remain.
                let (flips, active) = *ctx.agg();
                let rounds_done = (ss - 1) / 2;
                let stalled = active > 0 && (flips == 0 || rounds_done > self.round_limit);
                if stalled && value.label.is_none() {
                    value.needs_sv = true;
                    ctx.vote_to_halt();
                    return;
                }
                for env in inbox {
                    if let LabelMsg::Request { slot } = env.msg {
                        let matched = value.pair.iter().position(|&e| e == env.from.0);
                        let reply = match matched {
                            Some(i) => value.pair[i ^ 1],
                            None => value.pair[0],
                        };
                        ctx.send(env.from, LabelMsg::Response { slot, value: reply });
                    }
                }
                ctx.vote_to_halt();
            }
            _ => {
                // Update step: fold in responses, double or finish.
                let mut flips = 0;
                for env in inbox {
                    if let LabelMsg::Response { slot, value: v } = env.msg {
                        value.pair[slot as usize] = v;
                        if is_marked(v) {
                            flips += 1;
                        }
                    }
                }
                if value.finalized() {
                    value.label = Some(unmark(value.pair[0]).min(unmark(value.pair[1])));
                    ctx.provide((flips, 0));
                    ctx.vote_to_halt();
                } else {
                    ctx.provide((flips, 1));
                    send_requests(value, ctx);
                }
            }
        }
    }
}

fn send_requests(value: &LabelValue, ctx: &mut Context<'_, LabelMsg, (u64, u64)>) {
    for slot in 0..2u8 {
        let entry = value.pair[slot as usize];
        if !is_marked(entry) {
            ctx.send(VertexId(entry), LabelMsg::Request { slot });
        }
    }
}

// ---------------------------------------------------------------------------
// Simplified S-V connected components

/// Parent-link state for the S-V fallback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvValue {
    pub d: u64,
    gp: u64,
    changed: bool,
    pub nbrs: Vec<VertexId>,
    pub label: Option<VertexId>,
}

impl SvValue {
    pub fn new(id: VertexId, nbrs: Vec<VertexId>) -> SvValue {
        SvValue {
            d: id.0,
            gp: id.0,
            changed: false,
            nbrs,
            label: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum SvMsg {
    Ask,
    ReplyD(u64),
    Inform(u64),
    Hook(u64),
}

struct SvProgram;

impl VertexProgram for SvProgram {
    type Value = SvValue;
    type Msg = SvMsg;
    /// Count of vertices whose parent link changed this round.
    type Agg = u64;

    fn merge_agg(into: &mut u64, from: &u64) {
        *into += *from;
    }

    fn compute(
        &self,
        _id: VertexId,
        value: &mut SvValue,
        inbox: &[Envelope<SvMsg>],
        ctx: &mut Context<'_, SvMsg, u64>,
    ) {
        match (ctx.superstep() - 1) % 4 {
            0 => {
                // Apply hooks from the previous round, then either converge
                // or ask the parent for its parent. The aggregate counts
                // both changes and hook proposals, so a zero means no hook
                // can be in flight and every vertex halts at the same
                // superstep; partial halting would desynchronize the
                // four-phase protocol.
                for env in inbox {
                    if let SvMsg::Hook(m) = env.msg {
                        if m < value.d {
                            value.d = m;
                            value.changed = true;
                        }
                    }
                }
                if ctx.superstep() > 4 && *ctx.agg() == 0 {
                    value.label = Some(VertexId(value.d));
                    ctx.vote_to_halt();
                    return;
                }
                ctx.send(VertexId(value.d), SvMsg::Ask);
            }
            1 => {
                for env in inbox {
                    if env.msg == SvMsg::Ask {
                        ctx.send(env.from, SvMsg::ReplyD(value.d));
                    }
                }
            }
            2 => {
                for env in inbox {
                    if let SvMsg::ReplyD(d) = env.msg {
                        value.gp = d;
                    }
                }
                for nbr in &value.nbrs {
                    ctx.send(*nbr, SvMsg::Inform(value.d));
                }
            }
            _ => {
                // Tree hooking: if my parent is a root and a neighbor's tree
                // beats it, propose the smallest such parent. Then shortcut.
                let informs = inbox.iter().filter_map(|e| match e.msg {
                    SvMsg::Inform(d) => Some(d),
                    _ => None,
                });
                let best = informs.min();
                let parent_is_root = value.gp == value.d;
                let mut proposed = false;
                if let Some(m) = best {
                    if parent_is_root && m < value.d {
                        ctx.send(VertexId(value.d), SvMsg::Hook(m));
                        proposed = true;
                    }
                }
                if value.gp != value.d {
                    value.d = value.gp;
                    value.changed = true;
                }
                ctx.provide(value.changed as u64 + proposed as u64);
                value.changed = false;
            }
        }
    }
}

/// Run simplified S-V over an undirected graph given as severed neighbor
/// lists; every vertex ends labeled with the smallest ID in its component.
pub fn run_sv(
    engine: &Engine,
    input: Vec<(VertexId, SvValue)>,
) -> Result<JobResult<SvValue>, AsmError> {
    engine.run_job(&SvProgram, input).map_err(AsmError::job)
}

// ---------------------------------------------------------------------------
// Drivers

fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Recognize contig ends and sever their ambiguous/NULL sides: two
/// supersteps, after which each unambiguous vertex's `pair` holds its
/// initial predecessor IDs (flipped self on severed sides).
pub fn mark_contig_ends(
    engine: &Engine,
    records: LabelRecords,
) -> Result<(JobResult<LabelValue>, JobRun), AsmError> {
    let program = LabelProgram {
        mode: LabelMode::SeverOnly,
        round_limit: 0,
    };
    let result = engine.run_job(&program, records).map_err(AsmError::job)?;
    let run = JobRun::from_result("label_sever", &result);
    Ok((result, run))
}

fn sv_input_for(
    records: &[(VertexId, LabelValue)],
    only_needs_sv: bool,
) -> Vec<(VertexId, SvValue)> {
    records
        .iter()
        .filter(|(_, v)| v.kind != VertexKind::Ambiguous)
        .filter(|(_, v)| !only_needs_sv || v.needs_sv)
        .map(|(id, v)| {
            let nbrs = v
                .edges
                .iter()
                .take(2)
                .enumerate()
                .filter(|(slot, _)| !v.severed[*slot])
                .map(|(_, e)| e.other)
                .collect();
            (*id, SvValue::new(*id, nbrs))
        })
        .collect()
}

/// Assign contig labels to all unambiguous vertices; ambiguous vertices
/// pass through untouched. Returns the labeled records plus per-job runs.
pub fn label_contigs(
    engine: &Engine,
    records: LabelRecords,
    strategy: Labeler,
) -> Result<(LabelRecords, Vec<JobRun>), AsmError> {
    let n = records.len() as u64;
    let mut runs = Vec::new();
    match strategy {
        Labeler::Lr => {
            let program = LabelProgram {
                mode: LabelMode::Rank,
                round_limit: ceil_log2(n) + 2,
            };
            let result = engine.run_job(&program, records).map_err(AsmError::job)?;
            runs.push(JobRun::from_result("label_lr", &result));
            let mut out = result.vertices;
            if out.iter().any(|(_, v)| v.needs_sv) {
                let sv_in = sv_input_for(&out, true);
                let sv_result = run_sv(engine, sv_in)?;
                runs.push(JobRun::from_result("label_sv_fallback", &sv_result));
                apply_sv_labels(&mut out, &sv_result.vertices);
            }
            Ok((out, runs))
        }
        Labeler::Sv => {
            let (severed, run) = mark_contig_ends(engine, records)?;
            runs.push(run);
            let mut out = severed.vertices;
            let sv_in = sv_input_for(&out, false);
            let sv_result = run_sv(engine, sv_in)?;
            runs.push(JobRun::from_result("label_sv", &sv_result));
            apply_sv_labels(&mut out, &sv_result.vertices);
            Ok((out, runs))
        }
    }
}

fn apply_sv_labels(records: &mut [(VertexId, LabelValue)], sv: &[(VertexId, SvValue)]) {
    // Both sides are sorted by ID; walk them together.
    let mut i = 0;
    for (id, value) in records.iter_mut() {
        while i < sv.len() && sv[i].0 < *id {
            i += 1;
        }
        if i < sv.len() && sv[i].0 == *id {
            value.label = Some(VertexId(sv[i].1.d));
            value.needs_sv = false;
        }
    }
}
