//! Tip removal: attach merged-contig information to the remaining k-mer
//! vertices, then delete short dangling paths with REQUEST/DELETE waves
//! until no new dead end appears.
//!
//! A dead-end vertex starts a REQUEST carrying the cumulative sequence
//! length; interior vertices relay it, adding one base each plus the
//! non-overlapping length of any contig sitting on the forwarded edge. The
//! vertex where the wave ends approves deletion if the accumulated length
//! is within the tip threshold, sending a DELETE back along the path.
//! Deletions expose new dead ends, which start the next wave immediately.

use bsp_engine::{Context, Engine, Envelope, VertexId, VertexProgram};

use crate::dbg::{Dir, VertexKind};
use crate::error::AsmError;
use crate::kmer::Orientation;
use crate::label::{ChainEdge, JobRun, LabelValue, NodePayload};
use crate::merge::Contig;

/// Contig metadata materialized on a k-mer's adjacency item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ViaContig {
    pub id: VertexId,
    pub len: u64,
    pub cov: u64,
}

/// One adjacency entry of a k-mer during and after tip removal: either a
/// plain edge to another k-mer, or a contig edge whose `to` is the k-mer at
/// the contig's far end (NULL for a dangling contig).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Adj {
    pub to: VertexId,
    pub my_label: Orientation,
    pub other_label: Orientation,
    pub dir: Dir,
    pub cov: u64,
    pub via: Option<ViaContig>,
}

impl Adj {
    fn dir_normalized(&self) -> Dir {
        if self.my_label == Orientation::H {
            self.dir.flip()
        } else {
            self.dir
        }
    }
}

/// Classify from rebuilt adjacency; self-loops are ambiguous.
pub fn classify_adj(id: VertexId, adj: &[Adj]) -> VertexKind {
    if adj.iter().any(|a| a.to == id) {
        return VertexKind::Ambiguous;
    }
    match adj {
        [_] => VertexKind::One,
        [a, b] => {
            if a.dir_normalized() != b.dir_normalized() {
                VertexKind::OneOne
            } else {
                VertexKind::Ambiguous
            }
        }
        _ => VertexKind::Ambiguous,
    }
}

#[derive(Clone, Debug)]
pub enum TipValue {
    Kmer(TipKmer),
    Contig(TipContig),
}

#[derive(Clone, Debug)]
pub struct TipKmer {
    /// Original edges to other k-mers; filtered at attach time.
    pub k_edges: Vec<ChainEdge>,
    /// Rebuilt adjacency, valid from superstep 3 on.
    pub adj: Vec<Adj>,
    pub kind: VertexKind,
    pub alive: bool,
    requested: bool,
    /// (origin, back target, contig on the back edge) per relayed wave.
    pending: Vec<(VertexId, VertexId, Option<VertexId>)>,
}

#[derive(Clone, Debug)]
pub struct TipContig {
    pub contig: Contig,
    pub alive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum TipMsg {
    /// "I am still a k-mer vertex" — sent along original k-mer edges.
    Announce,
    /// Contig metadata for one of its two neighbors.
    ContigInfo {
        contig: VertexId,
        len: u64,
        ccov: u64,
        far: VertexId,
        my_label: Orientation,
        far_label: Orientation,
        dir: Dir,
        edge_cov: u64,
    },
    Request {
        origin: VertexId,
        len: u64,
    },
    Delete {
        origin: VertexId,
    },
    DeleteContig,
}

struct TipProgram {
    k: u64,
    threshold: u64,
}

impl TipProgram {
    fn contig_extra(&self, adj: &Adj) -> u64 {
        adj.via.map_or(0, |v| v.len - (self.k - 1))
    }

    fn maybe_originate(&self, id: VertexId, km: &mut TipKmer, ctx: &mut Ctx<'_>) {
        if km.alive && !km.requested && km.kind == VertexKind::One {
            let edge = km.adj[0];
            ctx.send(
                edge.to,
                TipMsg::Request {
                    origin: id,
                    len: self.k + self.contig_extra(&edge),
                },
            );
            km.requested = true;
        }
    }
}

type Ctx<'a> = Context<'a, TipMsg, ()>;

impl VertexProgram for TipProgram {
    type Value = TipValue;
    type Msg = TipMsg;
    type Agg = ();

    fn merge_agg(_: &mut (), _: &()) {}

    fn compute(
        &self,
        id: VertexId,
        value: &mut TipValue,
        inbox: &[Envelope<TipMsg>],
        ctx: &mut Ctx<'_>,
    ) {
        match value {
            TipValue::Contig(c) => {
                if ctx.superstep() == 1 {
                    send_contig_info(id, c, ctx);
                }
                if inbox.iter().any(|e| e.msg == TipMsg::DeleteContig) {
                    c.alive = false;
                }
                ctx.vote_to_halt();
            }
            TipValue::Kmer(km) => {
                match ctx.superstep() {
                    1 => {
                        for e in &km.k_edges {
                            if !e.other.is_null() {
                                ctx.send(e.other, TipMsg::Announce);
                            }
                        }
                        // stay active for the rebuild step
                    }
                    2 => {
                        rebuild_adjacency(id, km, inbox);
                        self.maybe_originate(id, km, ctx);
                        ctx.vote_to_halt();
                    }
                    _ => {
                        self.wave_step(id, km, inbox, ctx);
                        ctx.vote_to_halt();
                    }
                }
            }
        }
    }
}

fn send_contig_info(id: VertexId, c: &TipContig, ctx: &mut Ctx<'_>) {
    let contig = &c.contig;
    let far_of = |nbr: Option<crate::merge::NbrRef>| match nbr {
        Some(r) => (r.id, r.label),
        None => (VertexId::NULL, Orientation::L),
    };
    if let Some(in_nbr) = contig.in_nbr {
        let (far, far_label) = far_of(contig.out_nbr);
        ctx.send(
            in_nbr.id,
            TipMsg::ContigInfo {
                contig: id,
                len: contig.seq.len() as u64,
                ccov: contig.cov,
                far,
                my_label: in_nbr.label,
                far_label,
                dir: Dir::Out,
                edge_cov: in_nbr.cov,
            },
        );
    }
    if let Some(out_nbr) = contig.out_nbr {
        let (far, far_label) = far_of(contig.in_nbr);
        ctx.send(
            out_nbr.id,
            TipMsg::ContigInfo {
                contig: id,
                len: contig.seq.len() as u64,
                ccov: contig.cov,
                far,
                my_label: out_nbr.label,
                far_label,
                dir: Dir::In,
                edge_cov: out_nbr.cov,
            },
        );
    }
}

/// Keep k-mer edges whose neighbor announced itself, install triplets from
/// contig announcements, and reclassify.
fn rebuild_adjacency(id: VertexId, km: &mut TipKmer, inbox: &[Envelope<TipMsg>]) {
    let mut adj = Vec::new();
    for e in &km.k_edges {
        let still_there = inbox
            .iter()
            .any(|env| env.msg == TipMsg::Announce && env.from == e.other);
        if still_there {
            adj.push(Adj {
                to: e.other,
                my_label: e.my_label,
                other_label: e.other_label,
                dir: e.dir,
                cov: e.cov,
                via: None,
            });
        }
    }
    for env in inbox {
        if let TipMsg::ContigInfo {
            contig,
            len,
            ccov,
            far,
            my_label,
            far_label,
            dir,
            edge_cov,
        } = env.msg
        {
            adj.push(Adj {
                to: far,
                my_label,
                other_label: far_label,
                dir,
                cov: edge_cov,
                via: Some(ViaContig {
                    id: contig,
                    len,
                    cov: ccov,
                }),
            });
        }
    }
    adj.sort();
    km.adj = adj;
    km.kind = classify_adj(id, &km.adj);
}

impl TipProgram {
    fn wave_step(
        &self,
        id: VertexId,
        km: &mut TipKmer,
        inbox: &[Envelope<TipMsg>],
        ctx: &mut Ctx<'_>,
    ) {
        // Deletions first: they may retype this vertex before any request
        // is judged.
        for env in inbox {
            if let TipMsg::Delete { origin } = env.msg {
                if origin == id {
                    // Our own wave came home: this vertex is the tip's end.
                    km.alive = false;
                    if let Some(via) = km.adj.first().and_then(|a| a.via) {
                        ctx.send(via.id, TipMsg::DeleteContig);
                    }
                    continue;
                }
                if let Some(pos) = km.pending.iter().position(|(o, _, _)| *o == origin) {
                    let (_, back_to, back_contig) = km.pending[pos];
                    km.alive = false;
                    ctx.send(back_to, TipMsg::Delete { origin });
                    if let Some(cid) = back_contig {
                        ctx.send(cid, TipMsg::DeleteContig);
                    }
                }
            }
        }

        for env in inbox {
            let TipMsg::Request { origin, len } = env.msg else {
                continue;
            };
            if !km.alive {
                continue; // wave into a dying path; the next phase re-measures
            }
            let sender = env.from;
            match km.kind {
                VertexKind::OneOne => {
                    let arrival = km.adj.iter().position(|a| a.to == sender);
                    let Some(arrival) = arrival else { continue };
                    let back = km.adj[arrival];
                    let fwd = km.adj[arrival ^ 1];
                    ctx.send(
                        fwd.to,
                        TipMsg::Request {
                            origin,
                            len: len + 1 + self.contig_extra(&fwd),
                        },
                    );
                    km.pending.push((origin, back.to, back.via.map(|v| v.id)));
                }
                VertexKind::One | VertexKind::Ambiguous => {
                    // Wave terminal: approve short tips.
                    if len <= self.threshold {
                        ctx.send(sender, TipMsg::Delete { origin });
                        if km.kind == VertexKind::Ambiguous {
                            let dropped: Vec<Adj> =
                                km.adj.iter().copied().filter(|a| a.to == sender).collect();
                            km.adj.retain(|a| a.to != sender);
                            for a in dropped {
                                if let Some(via) = a.via {
                                    ctx.send(via.id, TipMsg::DeleteContig);
                                }
                            }
                            km.kind = classify_adj(id, &km.adj);
                            if km.kind == VertexKind::One {
                                km.requested = false;
                            }
                        }
                    }
                }
            }
        }

        self.maybe_originate(id, km, ctx);
    }
}

#[derive(Clone, Debug)]
pub struct TipOutcome {
    /// Surviving k-mers with their rebuilt, post-deletion adjacency.
    pub kmers: Vec<(VertexId, Vec<Adj>)>,
    pub contigs: Vec<Contig>,
    pub deleted_kmers: usize,
    pub deleted_contigs: usize,
    pub run: JobRun,
}

/// Run attach + wave phases over ambiguous k-mers and merged contigs.
///
/// `kmer_edges` carries each k-mer's original edge list; edges to vertices
/// that are no longer present (merged away) are discarded during attach.
pub fn remove_tips(
    engine: &Engine,
    kmer_edges: Vec<(VertexId, Vec<ChainEdge>)>,
    contigs: Vec<Contig>,
    k: usize,
    threshold: u64,
) -> Result<TipOutcome, AsmError> {
    let mut input: Vec<(VertexId, TipValue)> = Vec::new();
    for (id, k_edges) in kmer_edges {
        input.push((
            id,
            TipValue::Kmer(TipKmer {
                k_edges,
                adj: Vec::new(),
                kind: VertexKind::Ambiguous,
                alive: true,
                requested: false,
                pending: Vec::new(),
            }),
        ));
    }
    for c in contigs {
        input.push((
            c.id,
            TipValue::Contig(TipContig {
                contig: c,
                alive: true,
            }),
        ));
    }

    // Stale edges to merged-away vertices make some sends unroutable; they
    // are exactly the edges the attach step discards.
    let engine = engine
        .clone()
        .with_unroutable_policy(bsp_engine::UnroutablePolicy::Drop);
    let program = TipProgram {
        k: k as u64,
        threshold,
    };
    let result = engine.run_job(&program, input).map_err(AsmError::job)?;
    let run = JobRun::from_result("tip_remove", &result);

    let mut kmers = Vec::new();
    let mut contigs = Vec::new();
    let mut deleted_kmers = 0;
    let mut deleted_contigs = 0;
    for (id, value) in result.vertices {
        match value {
            TipValue::Kmer(km) => {
                if km.alive {
                    kmers.push((id, km.adj));
                } else {
                    deleted_kmers += 1;
                }
            }
            TipValue::Contig(tc) => {
                if tc.alive {
                    contigs.push(tc.contig);
                } else {
                    deleted_contigs += 1;
                }
            }
        }
    }
    // Deletion closure: drop adjacency entries pointing at deleted
    // vertices or contigs (the approving terminal already dropped its own;
    // this covers edges abandoned by waves that died midway).
    let alive_kmers: std::collections::BTreeSet<VertexId> =
        kmers.iter().map(|(id, _)| *id).collect();
    let alive_contigs: std::collections::BTreeSet<VertexId> =
        contigs.iter().map(|c| c.id).collect();
    for (_, adj) in &mut kmers {
        adj.retain(|a| {
            let target_ok = a.to.is_null()
                || alive_kmers.contains(&a.to)
                || a.via.is_some() && alive_contigs.contains(&a.via.unwrap().id);
            let via_ok = a.via.is_none_or(|v| alive_contigs.contains(&v.id));
            target_ok && via_ok
        });
    }

    Ok(TipOutcome {
        kmers,
        contigs,
        deleted_kmers,
        deleted_contigs,
        run,
    })
}

/// Build the next labeling round's records from surviving k-mers and
/// contigs: contigs become graph vertices; a k-mer's contig edges point at
/// the contig vertex.
pub fn next_round_records(outcome: &TipOutcome) -> Vec<(VertexId, LabelValue)> {
    let mut records = Vec::new();
    for (id, adj) in &outcome.kmers {
        let mut edges: Vec<ChainEdge> = adj
            .iter()
            .map(|a| match a.via {
                Some(via) => ChainEdge {
                    other: via.id,
                    my_label: a.my_label,
                    other_label: Orientation::L,
                    dir: a.dir,
                    cov: a.cov,
                },
                None => ChainEdge {
                    other: a.to,
                    my_label: a.my_label,
                    other_label: a.other_label,
                    dir: a.dir,
                    cov: a.cov,
                },
            })
            .collect();
        let kind = classify_adj(*id, adj);
        if kind == VertexKind::OneOne {
            edges.sort_by_key(|e| (e.dir_normalized(), e.other, e.my_label));
        }
        records.push((*id, LabelValue::new(kind, edges, NodePayload::Kmer)));
    }
    for c in &outcome.contigs {
        let mut edges = Vec::new();
        if let Some(r) = c.in_nbr {
            edges.push(ChainEdge {
                other: r.id,
                my_label: Orientation::L,
                other_label: r.label,
                dir: Dir::In,
                cov: r.cov,
            });
        }
        if let Some(r) = c.out_nbr {
            edges.push(ChainEdge {
                other: r.id,
                my_label: Orientation::L,
                other_label: r.label,
                dir: Dir::Out,
                cov: r.cov,
            });
        }
        let kind = if edges.len() == 2 {
            VertexKind::OneOne
        } else {
            VertexKind::One
        };
        records.push((
            c.id,
            LabelValue::new(
                kind,
                edges,
                NodePayload::Contig {
                    seq: c.seq.clone(),
                    cov: c.cov,
                    circular: c.circular,
                },
            ),
        ));
    }
    records.sort_by_key(|(id, _)| *id);
    records
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::dbg::build_dbg;
    use crate::kmer::encode_kmer;
    use crate::label::{label_contigs, label_input_from_dbg, Labeler};
    use crate::merge::{merge_contigs, NbrRef};

    fn engine() -> Engine {
        Engine::new(4)
    }

    fn id(seq: &str) -> VertexId {
        encode_kmer(seq).unwrap()
    }

    fn plain_edge(other: VertexId, dir: Dir) -> ChainEdge {
        ChainEdge {
            other,
            my_label: Orientation::L,
            other_label: Orientation::L,
            dir,
            cov: 1,
        }
    }

    /// A junction anchor: the self-loop keeps it ambiguous, so it never
    /// starts a wave of its own and can never be deleted.
    fn anchor(me: VertexId, junction: VertexId) -> (VertexId, Vec<ChainEdge>) {
        (
            me,
            vec![plain_edge(junction, Dir::Out), plain_edge(me, Dir::Out)],
        )
    }

    /// Mirrored contig with both neighbors, as merge would emit it.
    fn contig_between(cid: u32, a: Option<VertexId>, b: Option<VertexId>, len: usize) -> Contig {
        let seq: String = std::iter::repeat_n('A', len).collect();
        Contig {
            id: crate::kmer::make_contig_id(1, cid).unwrap(),
            seq: crate::kmer::PackedSeq::from_str(&seq).unwrap(),
            cov: 5,
            in_nbr: a.map(|id| NbrRef {
                id,
                label: Orientation::L,
                cov: 2,
            }),
            out_nbr: b.map(|id| NbrRef {
                id,
                label: Orientation::L,
                cov: 3,
            }),
            circular: false,
        }
    }

    #[test]
    fn attach_installs_triplets_from_e2e_merge() {
        // A junction–chain–junction fixture with spur contigs.
        let reads: Vec<String> = ["CTGCCGTACA", "ACTGC", "TCTGC", "TACAT", "TACAG"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let dbg = build_dbg(&engine(), &reads, 4, 0).unwrap();
        let records = label_input_from_dbg(&dbg, 4);
        let ambiguous: Vec<(VertexId, Vec<ChainEdge>)> = records
            .iter()
            .filter(|(_, v)| v.kind == VertexKind::Ambiguous)
            .map(|(id, v)| (*id, v.edges.clone()))
            .collect();
        let (labeled, _) = label_contigs(&engine(), records, Labeler::Lr).unwrap();
        let merged = merge_contigs(&engine(), &labeled, 4, 0, 1).unwrap();
        assert_eq!(merged.contigs.len(), 5);

        let out = remove_tips(&engine(), ambiguous, merged.contigs, 4, 0).unwrap();
        assert_eq!(out.deleted_kmers + out.deleted_contigs, 0);
        let adj: BTreeMap<_, _> = out.kmers.iter().cloned().collect();
        let ctgc = &adj[&id("CTGC")];
        // Three triplets: the 8-bp chain to TACA plus two dangling spurs.
        assert_eq!(ctgc.len(), 3);
        let main = ctgc
            .iter()
            .find(|a| a.via.is_some_and(|v| v.len == 8))
            .unwrap();
        assert_eq!(main.to, id("TACA"));
        assert_eq!(main.cov, 1);
        assert!(ctgc
            .iter()
            .filter(|a| a.to.is_null())
            .all(|a| a.via.unwrap().len == 4));
    }

    /// One dead-end junction, a contig bridge, and a live junction:
    ///   J1 --(contig, len L)-- J2(ambiguous with two spare edges)
    #[test]
    fn contig_bridge_tip_is_deleted_at_exact_threshold() {
        let j1 = id("AAAC");
        let j2 = id("AACG");
        let x = id("ACGT");
        let y = id("AGGT");
        for (threshold, expect_deleted) in [(11u64, true), (10, false)] {
            // L = 10, k = 4: the wave arrives at J2 carrying 4 + (10-3) = 11.
            let kmers = vec![
                (j1, vec![]),
                (j2, vec![plain_edge(x, Dir::In), plain_edge(y, Dir::In)]),
                anchor(x, j2),
                anchor(y, j2),
            ];
            let contigs = vec![contig_between(1, Some(j1), Some(j2), 10)];
            let out = remove_tips(&engine(), kmers, contigs, 4, threshold).unwrap();
            if expect_deleted {
                assert_eq!(out.deleted_kmers, 1, "threshold {threshold}");
                assert_eq!(out.deleted_contigs, 1);
                let adj: BTreeMap<_, _> = out.kmers.iter().cloned().collect();
                assert!(adj[&j2].iter().all(|a| a.via.is_none()));
                // J2 degraded to its two anchor edges: same-direction pair,
                // still ambiguous, no cascade.
                assert_eq!(adj[&j2].len(), 2);
            } else {
                assert_eq!(out.deleted_kmers, 0, "threshold {threshold}");
                assert_eq!(out.deleted_contigs, 0);
            }
        }
    }

    /// Length bookkeeping with a relay: origin k, relay +1, contig +L-(k-1).
    #[test]
    fn relay_and_contig_length_bookkeeping() {
        let o = id("AAAC");
        let r = id("AACG");
        let t = id("ACGT");
        let x = id("AGGT");
        let y = id("ATGT");
        // o --plain-- r --contig(L=9)-- t(ambiguous)
        // total at t: k + 1 + (9 - 3) = 11
        let make = |threshold| {
            let kmers = vec![
                (o, vec![plain_edge(r, Dir::Out)]),
                (r, vec![plain_edge(o, Dir::In)]),
                (t, vec![plain_edge(x, Dir::Out), plain_edge(y, Dir::Out)]),
                anchor(x, t),
                anchor(y, t),
            ];
            let contigs = vec![contig_between(1, Some(r), Some(t), 9)];
            remove_tips(&engine(), kmers, contigs, 4, threshold).unwrap()
        };
        let deleted = make(11);
        assert_eq!(deleted.deleted_kmers, 2); // o and r
        assert_eq!(deleted.deleted_contigs, 1);
        let survived = make(10);
        assert_eq!(survived.deleted_kmers, 0);
        assert_eq!(survived.deleted_contigs, 0);
    }

    #[test]
    fn isolated_short_path_deletes_from_both_ends() {
        let a = id("AAAC");
        let b = id("AACG");
        let c = id("ACGT");
        let kmers = vec![
            (a, vec![plain_edge(b, Dir::Out)]),
            (b, vec![plain_edge(a, Dir::In), plain_edge(c, Dir::Out)]),
            (c, vec![plain_edge(b, Dir::In)]),
        ];
        let out = remove_tips(&engine(), kmers, vec![], 4, 80).unwrap();
        assert_eq!(out.deleted_kmers, 3);
        assert!(out.kmers.is_empty());

        // Over-threshold twin survives untouched.
        let kmers = vec![
            (a, vec![plain_edge(b, Dir::Out)]),
            (b, vec![plain_edge(a, Dir::In), plain_edge(c, Dir::Out)]),
            (c, vec![plain_edge(b, Dir::In)]),
        ];
        let out = remove_tips(&engine(), kmers, vec![], 4, 4).unwrap();
        assert_eq!(out.deleted_kmers, 0);
    }

    /// Deleting one tip may expose a junction as the next dead end.
    #[test]
    fn cascading_phases_until_no_new_dead_end() {
        let tip = id("AAAC");
        let j = id("AACG"); // degree-2 junction: two out-edges (ambiguous)
        let t2 = id("ACGT"); // second junction, stays ambiguous
        let x = id("AGGT");
        let y = id("ATGT");
        let kmers = vec![
            (tip, vec![plain_edge(j, Dir::Out)]),
            (j, vec![plain_edge(tip, Dir::Out), plain_edge(t2, Dir::Out)]),
            (
                t2,
                vec![
                    plain_edge(j, Dir::In),
                    plain_edge(x, Dir::Out),
                    plain_edge(y, Dir::Out),
                ],
            ),
            anchor(x, t2),
            anchor(y, t2),
        ];
        let out = remove_tips(&engine(), kmers, vec![], 4, 80).unwrap();
        // Wave 1: tip -> j (two out-edges = ambiguous terminal) deletes tip;
        // j drops the edge, becomes <1>, and its wave deletes j at t2.
        let adj: BTreeMap<_, _> = out.kmers.iter().cloned().collect();
        assert_eq!(out.deleted_kmers, 2);
        assert!(!adj.contains_key(&tip) && !adj.contains_key(&j));
        assert!(adj[&t2].iter().all(|a| a.to != j));
        assert_eq!(adj[&t2].len(), 2);
    }

    #[test]
    fn deletion_is_closed_and_worker_count_free() {
        let build = |workers: usize| {
            let tip = id("AAAC");
            let j = id("AACG");
            let t2 = id("ACGT");
            let x = id("AGGT");
            let y = id("ATGT");
            let kmers = vec![
                (tip, vec![plain_edge(j, Dir::Out)]),
                (j, vec![plain_edge(tip, Dir::Out), plain_edge(t2, Dir::Out)]),
                (
                    t2,
                    vec![
                        plain_edge(j, Dir::In),
                        plain_edge(x, Dir::Out),
                        plain_edge(y, Dir::Out),
                    ],
                ),
                anchor(x, t2),
                anchor(y, t2),
            ];
            remove_tips(&Engine::new(workers), kmers, vec![], 4, 80).unwrap()
        };
        let baseline = build(1);
        let alive: Vec<VertexId> = baseline.kmers.iter().map(|(i, _)| *i).collect();
        for (_, adj) in &baseline.kmers {
            for a in adj {
                assert!(a.to.is_null() || alive.contains(&a.to));
            }
        }
        for w in [2usize, 8] {
            let got = build(w);
            assert_eq!(got.kmers, baseline.kmers);
            assert_eq!(got.contigs, baseline.contigs);
        }
    }
}
