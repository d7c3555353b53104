//! List ranking as a vertex program: the classic doubling algorithm where
//! each vertex keeps `sum` and a predecessor link, and both double per round.
//! Exercises message passing, reactivation, termination, and determinism.

use bsp_engine::{Context, Engine, Envelope, VertexId, VertexProgram};

#[derive(Clone, Debug, PartialEq, Eq)]
struct ListNode {
    sum: u64,
    pred: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Msg {
    /// Ask the predecessor for its (sum, pred).
    Request,
    /// Predecessor state at the time of the request.
    Reply { sum: u64, pred: VertexId },
}

/// Round layout: odd supersteps send requests (after folding in replies),
/// even supersteps answer them.
struct ListRanking;

impl VertexProgram for ListRanking {
    type Value = ListNode;
    type Msg = Msg;
    type Agg = ();

    fn merge_agg(_: &mut (), _: &()) {}

    fn compute(
        &self,
        _id: VertexId,
        node: &mut ListNode,
        inbox: &[Envelope<Msg>],
        ctx: &mut Context<'_, Msg, ()>,
    ) {
        let mut requesters = Vec::new();
        for env in inbox {
            match env.msg {
                Msg::Request => requesters.push(env.from),
                Msg::Reply { sum, pred } => {
                    node.sum += sum;
                    node.pred = pred;
                }
            }
        }
        for from in requesters {
            ctx.send(
                from,
                Msg::Reply {
                    sum: node.sum,
                    pred: node.pred,
                },
            );
        }
        if ctx.superstep() % 2 == 1 {
            if node.pred.is_null() {
                ctx.vote_to_halt();
            } else {
                ctx.send(node.pred, Msg::Request);
            }
        } else {
            ctx.vote_to_halt();
        }
    }
}

fn chain(n: u64) -> Vec<(VertexId, ListNode)> {
    (1..=n)
        .map(|i| {
            let pred = if i == 1 {
                VertexId::NULL
            } else {
                VertexId(i - 1)
            };
            (VertexId(i), ListNode { sum: 1, pred })
        })
        .collect()
}

#[test]
fn five_node_list_ranks_to_position_sums() {
    let engine = Engine::new(4);
    let result = engine.run_job(&ListRanking, chain(5)).unwrap();
    let sums: Vec<u64> = result.vertices.iter().map(|(_, n)| n.sum).collect();
    assert_eq!(sums, vec![1, 2, 3, 4, 5]);
    assert!(result
        .vertices
        .iter()
        .all(|(_, n)| n.pred == VertexId::NULL));
}

#[test]
fn ranking_runs_logarithmically_many_supersteps() {
    for n in [8u64, 64, 512] {
        let engine = Engine::new(4);
        let result = engine.run_job(&ListRanking, chain(n)).unwrap();
        let log2 = 64 - (n - 1).leading_zeros();
        // Two supersteps per doubling round plus slack for the final
        // quiescent step.
        assert!(
            result.supersteps <= 2 * log2 + 3,
            "n={n}: {} supersteps",
            result.supersteps
        );
        let last = result.vertices.last().unwrap();
        assert_eq!(last.1.sum, n);
    }
}

#[test]
fn every_sent_message_is_delivered_once() {
    let engine = Engine::new(3);
    let result = engine.run_job(&ListRanking, chain(33)).unwrap();
    for pair in result.stats.windows(2) {
        assert_eq!(
            pair[0].sent - pair[0].dropped_null - pair[0].dropped_unroutable,
            pair[1].delivered,
            "conservation violated between supersteps {} and {}",
            pair[0].superstep,
            pair[1].superstep
        );
    }
    let last = result.stats.last().unwrap();
    assert_eq!(last.sent, 0);
}

#[test]
fn identical_results_for_1_2_4_8_workers() {
    let reference = Engine::new(1).run_job(&ListRanking, chain(100)).unwrap();
    for workers in [2usize, 4, 8] {
        let run = Engine::new(workers)
            .run_job(&ListRanking, chain(100))
            .unwrap();
        assert_eq!(run.vertices, reference.vertices);
        assert_eq!(run.supersteps, reference.supersteps);
        assert_eq!(run.stats, reference.stats);
    }
}
