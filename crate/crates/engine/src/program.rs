use crate::VertexId;

/// A delivered message together with the ID of the vertex that sent it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Envelope<M> {
    pub from: VertexId,
    pub msg: M,
}

/// A vertex program executed once per active vertex per superstep.
///
/// `compute` must be deterministic given the vertex value, the sorted inbox,
/// the superstep number and the aggregator snapshot; the engine guarantees
/// nothing else about scheduling. The aggregator merge must be associative
/// and commutative so that results do not depend on the worker count.
pub trait VertexProgram: Sync {
    type Value: Clone + Send;
    type Msg: Clone + Send + Ord;
    type Agg: Clone + Send + Default;

    fn merge_agg(into: &mut Self::Agg, from: &Self::Agg);

    fn compute(
        &self,
        id: VertexId,
        value: &mut Self::Value,
        inbox: &[Envelope<Self::Msg>],
        ctx: &mut Context<'_, Self::Msg, Self::Agg>,
    );
}

/// Per-vertex view of the engine during one `compute` call.
pub struct Context<'a, M, A> {
    pub(crate) superstep: u32,
    pub(crate) vertex: VertexId,
    pub(crate) prev_agg: &'a A,
    pub(crate) local_agg: &'a mut A,
    pub(crate) merge: fn(&mut A, &A),
    pub(crate) outbox: &'a mut Vec<(VertexId, Envelope<M>)>,
    pub(crate) halted: bool,
    pub(crate) sent: u64,
    pub(crate) dropped_null: u64,
}

impl<M, A> Context<'_, M, A> {
    /// Current superstep number, starting at 1.
    pub fn superstep(&self) -> u32 {
        self.superstep
    }

    /// Aggregated value from the previous superstep.
    ///
    /// In superstep 1 this is `A::default()`; a value provided in superstep
    /// `t` is visible here from superstep `t + 1` on.
    pub fn agg(&self) -> &A {
        self.prev_agg
    }

    /// Send a message, delivered to `to` at the next superstep.
    ///
    /// Sends to [`VertexId::NULL`] are silently discarded.
    pub fn send(&mut self, to: VertexId, msg: M) {
        if to.is_null() {
            self.dropped_null += 1;
            return;
        }
        self.sent += 1;
        self.outbox.push((
            to,
            Envelope {
                from: self.vertex,
                msg,
            },
        ));
    }

    /// Contribute a value to the global aggregator.
    pub fn provide(&mut self, value: A) {
        (self.merge)(self.local_agg, &value);
    }

    /// Deactivate this vertex. It is rescheduled only if a message arrives.
    pub fn vote_to_halt(&mut self) {
        self.halted = true;
    }
}
