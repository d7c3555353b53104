use std::thread;

use rustc_hash::FxHashMap;

use crate::program::{Context, Envelope, VertexProgram};
use crate::result::{JobResult, SuperstepStats};
use crate::{mix64, RunError, VertexId};

/// What to do with a message whose target vertex does not exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnroutablePolicy {
    /// Count and discard.
    Drop,
    /// Abort the job with [`RunError::Unroutable`].
    Abort,
}

/// Engine configuration: logical worker count, partitioning seed,
/// routing policy and the nontermination guard.
#[derive(Clone, Debug)]
pub struct Engine {
    workers: usize,
    hash_seed: u64,
    unroutable: UnroutablePolicy,
    max_supersteps: u32,
}

pub(crate) struct Slot<V> {
    id: VertexId,
    value: V,
    active: bool,
}

struct Partition<V> {
    slots: Vec<Slot<V>>,
    index: FxHashMap<VertexId, usize>,
}

struct WorkerOut<M, A> {
    outbox: Vec<(VertexId, Envelope<M>)>,
    agg: A,
    computed: u64,
    sent: u64,
    dropped_null: u64,
}

impl Engine {
    pub fn new(workers: usize) -> Self {
        assert!(workers >= 1, "engine needs at least one worker");
        Engine {
            workers,
            hash_seed: 0,
            unroutable: UnroutablePolicy::Abort,
            max_supersteps: 10_000,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub(crate) fn hash_seed(&self) -> u64 {
        self.hash_seed
    }

    pub fn with_hash_seed(mut self, seed: u64) -> Self {
        self.hash_seed = seed;
        self
    }

    pub fn with_unroutable_policy(mut self, policy: UnroutablePolicy) -> Self {
        self.unroutable = policy;
        self
    }

    pub fn with_max_supersteps(mut self, max: u32) -> Self {
        self.max_supersteps = max;
        self
    }

    pub(crate) fn owner(&self, id: VertexId) -> usize {
        (mix64(id.0 ^ self.hash_seed) % self.workers as u64) as usize
    }

    /// Run a vertex program to quiescence.
    ///
    /// All input vertices start active. Supersteps are numbered from 1.
    /// The job stops when every vertex has voted to halt and no message is
    /// pending, or errors out after `max_supersteps`.
    pub fn run_job<P: VertexProgram>(
        &self,
        program: &P,
        vertices: Vec<(VertexId, P::Value)>,
    ) -> Result<JobResult<P::Value>, RunError<P::Value>> {
        let mut parts: Vec<Partition<P::Value>> = (0..self.workers)
            .map(|_| Partition {
                slots: Vec::new(),
                index: FxHashMap::default(),
            })
            .collect();
        let mut seen = FxHashMap::default();
        for (id, value) in vertices {
            if seen.insert(id, ()).is_some() {
                return Err(RunError::DuplicateVertex(id));
            }
            parts[self.owner(id)].slots.push(Slot {
                id,
                value,
                active: true,
            });
        }
        drop(seen);
        for part in &mut parts {
            part.slots.sort_by_key(|s| s.id);
            part.index = part
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| (s.id, i))
                .collect();
        }

        let mut inboxes: Vec<Vec<Vec<Envelope<P::Msg>>>> = parts
            .iter()
            .map(|p| (0..p.slots.len()).map(|_| Vec::new()).collect())
            .collect();

        let mut prev_agg = P::Agg::default();
        let mut stats: Vec<SuperstepStats> = Vec::new();
        let mut superstep: u32 = 0;
        let mut delivered_into_next: u64 = if parts.iter().all(|p| p.slots.is_empty()) {
            0
        } else {
            u64::MAX // force the first superstep; all vertices start active
        };

        loop {
            let any_active = parts.iter().any(|p| p.slots.iter().any(|s| s.active));
            let pending = inboxes.iter().flat_map(|p| p.iter()).any(|v| !v.is_empty());
            if !any_active && !pending {
                break;
            }
            if superstep >= self.max_supersteps {
                return Err(RunError::Nontermination {
                    max_supersteps: self.max_supersteps,
                    partial: finish(parts, superstep, stats),
                });
            }
            superstep += 1;

            let delivered = if delivered_into_next == u64::MAX {
                0
            } else {
                delivered_into_next
            };

            let outs: Vec<WorkerOut<P::Msg, P::Agg>> = thread::scope(|scope| {
                let handles: Vec<_> = parts
                    .iter_mut()
                    .zip(inboxes.iter_mut())
                    .map(|(part, inbox)| {
                        let agg_snapshot = prev_agg.clone();
                        scope.spawn(move || {
                            run_worker::<P>(program, part, inbox, superstep, agg_snapshot)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker thread panicked"))
                    .collect()
            });

            // Merge aggregators and counters in worker order. The merge must
            // be associative and commutative, so the order is immaterial for
            // the value; doing it in a fixed order keeps everything else
            // reproducible too.
            let mut next_agg = P::Agg::default();
            let mut active = 0;
            let mut sent = 0;
            let mut dropped_null = 0;
            for out in &outs {
                P::merge_agg(&mut next_agg, &out.agg);
                active += out.computed;
                sent += out.sent;
                dropped_null += out.dropped_null;
            }
            prev_agg = next_agg;

            // Route: walk outboxes in worker order, then send order.
            let mut dropped_unroutable = 0;
            let mut routed: u64 = 0;
            for out in outs {
                for (to, env) in out.outbox {
                    let owner = self.owner(to);
                    match parts[owner].index.get(&to) {
                        Some(&slot) => {
                            inboxes[owner][slot].push(env);
                            routed += 1;
                        }
                        None => match self.unroutable {
                            UnroutablePolicy::Drop => dropped_unroutable += 1,
                            UnroutablePolicy::Abort => {
                                return Err(RunError::Unroutable {
                                    target: to,
                                    superstep,
                                });
                            }
                        },
                    }
                }
            }

            stats.push(SuperstepStats {
                superstep,
                active,
                sent,
                delivered,
                dropped_null,
                dropped_unroutable,
            });
            delivered_into_next = routed;
        }

        Ok(finish(parts, superstep, stats))
    }
}

fn run_worker<P: VertexProgram>(
    program: &P,
    part: &mut Partition<P::Value>,
    inbox: &mut [Vec<Envelope<P::Msg>>],
    superstep: u32,
    prev_agg: P::Agg,
) -> WorkerOut<P::Msg, P::Agg> {
    let mut out = WorkerOut {
        outbox: Vec::new(),
        agg: P::Agg::default(),
        computed: 0,
        sent: 0,
        dropped_null: 0,
    };
    for (i, slot) in part.slots.iter_mut().enumerate() {
        let mut msgs = std::mem::take(&mut inbox[i]);
        if !slot.active && msgs.is_empty() {
            continue;
        }
        // Canonical inbox order: by sender, then payload.
        msgs.sort();
        slot.active = true;
        out.computed += 1;
        let mut ctx = Context {
            superstep,
            vertex: slot.id,
            prev_agg: &prev_agg,
            local_agg: &mut out.agg,
            merge: P::merge_agg,
            outbox: &mut out.outbox,
            halted: false,
            sent: 0,
            dropped_null: 0,
        };
        program.compute(slot.id, &mut slot.value, &msgs, &mut ctx);
        if ctx.halted {
            slot.active = false;
        }
        out.sent += ctx.sent;
        out.dropped_null += ctx.dropped_null;
    }
    out
}

fn finish<V>(
    parts: Vec<Partition<V>>,
    supersteps: u32,
    stats: Vec<SuperstepStats>,
) -> JobResult<V> {
    let mut vertices: Vec<(VertexId, V)> = parts
        .into_iter()
        .flat_map(|p| p.slots.into_iter().map(|s| (s.id, s.value)))
        .collect();
    vertices.sort_by_key(|(id, _)| *id);
    JobResult {
        vertices,
        supersteps,
        stats,
    }
}
