use std::hash::{Hash, Hasher};
use std::thread;

use rustc_hash::FxHasher;
use thiserror::Error;

use crate::{mix64, Engine, VertexId};

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("duplicate vertex id {0} produced by convert")]
    DuplicateVertex(VertexId),
}

impl Engine {
    /// Group records by key and reduce each group, in parallel.
    ///
    /// Pairs produced by `map` are shuffled by key hash, grouped by exact
    /// key, and each group's values are sorted before `reduce` sees them,
    /// so the output is identical for any worker count. Groups are returned
    /// sorted by key.
    pub fn mini_map_reduce<R, K, V, O, MF, RF>(
        &self,
        records: &[R],
        map: MF,
        reduce: RF,
    ) -> Vec<(K, Vec<O>)>
    where
        R: Sync,
        K: Ord + Hash + Clone + Send,
        V: Ord + Send,
        O: Send,
        MF: Fn(&R) -> Vec<(K, V)> + Sync,
        RF: Fn(&K, &[V]) -> Vec<O> + Sync,
    {
        let workers = self.workers();
        let seed = self.hash_seed();
        let chunk = records.len().div_ceil(workers).max(1);

        // Map phase: each worker maps a contiguous chunk and pre-buckets
        // pairs by the hash of their key.
        let buckets: Vec<Vec<Vec<(K, V)>>> = thread::scope(|scope| {
            let handles: Vec<_> = records
                .chunks(chunk)
                .map(|slice| {
                    let map = &map;
                    scope.spawn(move || {
                        let mut local: Vec<Vec<(K, V)>> =
                            (0..workers).map(|_| Vec::new()).collect();
                        for record in slice {
                            for (k, v) in map(record) {
                                local[key_owner(&k, seed, workers)].push((k, v));
                            }
                        }
                        local
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("map worker panicked"))
                .collect()
        });

        // Shuffle: concatenate each reducer's buckets in mapper order.
        let mut shuffled: Vec<Vec<(K, V)>> = (0..workers).map(|_| Vec::new()).collect();
        for mapper in buckets {
            for (w, mut pairs) in mapper.into_iter().enumerate() {
                shuffled[w].append(&mut pairs);
            }
        }

        // Reduce phase: sort, group by exact key, reduce in key order.
        let mut out: Vec<(K, Vec<O>)> = thread::scope(|scope| {
            let handles: Vec<_> = shuffled
                .into_iter()
                .map(|mut pairs| {
                    let reduce = &reduce;
                    scope.spawn(move || {
                        pairs.sort();
                        let mut groups: Vec<(K, Vec<O>)> = Vec::new();
                        let mut iter = pairs.into_iter().peekable();
                        while let Some((key, first)) = iter.next() {
                            let mut values = vec![first];
                            while iter.peek().is_some_and(|(k, _)| *k == key) {
                                values.push(iter.next().unwrap().1);
                            }
                            let produced = reduce(&key, &values);
                            groups.push((key, produced));
                        }
                        groups
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("reduce worker panicked"))
                .collect()
        });

        // Keys are hash-disjoint across reducers; a global sort restores one
        // canonical order.
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Transform the final vertices of one job into the input set of the
    /// next, reshuffling by vertex ID.
    ///
    /// `convert` may emit zero or more vertices per input vertex. Producing
    /// the same ID twice is an error.
    pub fn convert_vertices<V, W, F>(
        &self,
        vertices: impl IntoIterator<Item = (VertexId, V)>,
        convert: F,
    ) -> Result<Vec<(VertexId, W)>, ConvertError>
    where
        F: Fn(VertexId, V) -> Vec<(VertexId, W)>,
    {
        let mut next: Vec<(VertexId, W)> = vertices
            .into_iter()
            .flat_map(|(id, value)| convert(id, value))
            .collect();
        next.sort_by_key(|(id, _)| *id);
        for pair in next.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(ConvertError::DuplicateVertex(pair[0].0));
            }
        }
        Ok(next)
    }
}

fn key_owner<K: Hash>(key: &K, seed: u64, workers: usize) -> usize {
    let mut h = FxHasher::default();
    key.hash(&mut h);
    (mix64(h.finish() ^ seed) % workers as u64) as usize
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::{JobResult, SuperstepStats};

    fn engine(w: usize) -> Engine {
        Engine::new(w)
    }

    #[test]
    fn histogram_matches_single_threaded_grouping() {
        let records: Vec<u64> = (0..500).map(|i| i * i % 37).collect();
        let mut expected: BTreeMap<u64, usize> = BTreeMap::new();
        for r in &records {
            *expected.entry(*r).or_default() += 1;
        }
        for workers in [1, 2, 4, 7] {
            let got = engine(workers).mini_map_reduce(
                &records,
                |r| vec![(*r, 1u64)],
                |key, values| vec![(*key, values.len())],
            );
            let flat: BTreeMap<u64, usize> =
                got.into_iter().map(|(_, mut v)| v.pop().unwrap()).collect();
            assert_eq!(flat, expected);
        }
    }

    #[test]
    fn adjacency_from_edge_records() {
        // One edge per record; each endpoint collects its incident edges.
        let edges = [(1u64, 2u64), (2, 3), (1, 3), (3, 1)];
        let grouped = engine(3).mini_map_reduce(
            &edges,
            |&(a, b)| vec![(a, b), (b, a)],
            |_, nbrs| vec![nbrs.to_vec()],
        );
        let adj: BTreeMap<u64, Vec<u64>> = grouped
            .into_iter()
            .map(|(k, mut v)| (k, v.pop().unwrap()))
            .collect();
        assert_eq!(adj[&1], vec![2, 3, 3]);
        assert_eq!(adj[&2], vec![1, 3]);
        assert_eq!(adj[&3], vec![1, 1, 2]);
    }

    #[test]
    fn empty_input_gives_empty_output() {
        let got =
            engine(4).mini_map_reduce(&Vec::<u64>::new(), |r| vec![(*r, ())], |_, _| vec![()]);
        assert!(got.is_empty());
    }

    #[test]
    fn convert_identity_and_duplicate_detection() {
        let result = JobResult {
            vertices: vec![(VertexId(3), 30), (VertexId(5), 50)],
            supersteps: 0,
            stats: Vec::<SuperstepStats>::new(),
        };
        let same = engine(2)
            .convert_vertices(result.vertices.clone(), |id, v| vec![(id, v)])
            .unwrap();
        assert_eq!(same, vec![(VertexId(3), 30), (VertexId(5), 50)]);

        let err = engine(2)
            .convert_vertices(result.vertices, |_, v| vec![(VertexId(9), v)])
            .unwrap_err();
        assert!(matches!(err, ConvertError::DuplicateVertex(id) if id == VertexId(9)));
    }

    #[test]
    fn convert_dropping_everything_gives_empty_input() {
        let result = JobResult {
            vertices: vec![(VertexId(1), ())],
            supersteps: 1,
            stats: Vec::new(),
        };
        let next: Vec<(VertexId, u8)> = engine(2)
            .convert_vertices(result.vertices, |_, _| vec![])
            .unwrap();
        assert!(next.is_empty());
    }
}
