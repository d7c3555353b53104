//! Shared fixtures: a string-level single-threaded reference assembler
//! (independent of the library's bit-packed machinery) and deterministic
//! genome/read generators.

#![allow(dead_code)] // each integration test target uses a subset

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rc(s: &str) -> String {
    s.chars()
        .rev()
        .map(|c| match c {
            'A' => 'T',
            'C' => 'G',
            'G' => 'C',
            'T' => 'A',
            other => other,
        })
        .collect()
}

pub fn canon(s: &str) -> String {
    let r = rc(s);
    if s <= r.as_str() {
        s.to_string()
    } else {
        r
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ODir {
    In,
    Out,
}

type OAdj = BTreeMap<String, Vec<(usize, ODir, String)>>;

/// Maximal unambiguous paths of the canonical de Bruijn graph, assembled
/// at the string level and returned as sorted canonical sequences.
///
/// Counting and filtering follow the pipeline's contract: raw (k+1)-mer
/// counts are filtered at `count > theta`, survivors merge into canonical
/// edges. Intended for odd k (no palindromic k-mers).
pub fn oracle_contigs(reads: &[String], k: usize, theta: u64) -> Vec<String> {
    let mut raw: BTreeMap<String, u64> = BTreeMap::new();
    for read in reads {
        for segment in read.split('N') {
            if segment.len() < k + 1 {
                continue;
            }
            for i in 0..=segment.len() - (k + 1) {
                *raw.entry(segment[i..i + k + 1].to_string()).or_default() += 1;
            }
        }
    }
    let mut edges: Vec<String> = raw
        .iter()
        .filter(|(_, &c)| c > theta)
        .map(|(m, _)| canon(m))
        .collect();
    edges.sort();
    edges.dedup();

    let mut adj: OAdj = BTreeMap::new();
    let mut has_self_loop: BTreeMap<String, bool> = BTreeMap::new();
    for (ei, m) in edges.iter().enumerate() {
        let p = &m[..k];
        let s = &m[1..];
        let a = canon(p);
        let b = canon(s);
        let dir_a = if p == a { ODir::Out } else { ODir::In };
        let dir_b = if s == b { ODir::In } else { ODir::Out };
        if a == b {
            has_self_loop.insert(a.clone(), true);
            adj.entry(a).or_default().push((ei, dir_a, b));
        } else {
            adj.entry(a.clone())
                .or_default()
                .push((ei, dir_a, b.clone()));
            adj.entry(b).or_default().push((ei, dir_b, a));
        }
    }

    let unambiguous = |v: &str| -> bool {
        if has_self_loop.get(v).copied().unwrap_or(false) {
            return false;
        }
        match adj[v].as_slice() {
            [_] => true,
            [x, y] => x.1 != y.1,
            _ => false,
        }
    };

    // Walk from `start` through `via`, collecting (edge, vertex) steps over
    // unambiguous vertices. Returns the steps plus the closing edge if the
    // walk comes back around to `start`.
    let walk =
        |start: &str, via: &(usize, ODir, String)| -> (Vec<(usize, String)>, Option<usize>) {
            let mut steps = Vec::new();
            let (mut e, mut cur) = (via.0, via.2.clone());
            loop {
                if cur == start {
                    return (steps, Some(e));
                }
                if !unambiguous(&cur) {
                    return (steps, None);
                }
                steps.push((e, cur.clone()));
                match adj[&cur].iter().find(|(ei, _, _)| *ei != e) {
                    Some((ei, _, other)) => {
                        e = *ei;
                        cur = other.clone();
                    }
                    None => return (steps, None),
                }
            }
        };

    let mut visited: BTreeMap<String, bool> = BTreeMap::new();
    let mut out = Vec::new();
    let vertices: Vec<String> = adj.keys().cloned().collect();
    for v in &vertices {
        if !unambiguous(v) || visited.get(v).copied().unwrap_or(false) {
            continue;
        }
        let incident = adj[v].clone();
        // Ordered members and the edges connecting consecutive members.
        let (members, path_edges, cycle_closer): (Vec<String>, Vec<usize>, Option<usize>) =
            match incident.as_slice() {
                [] => (vec![v.clone()], vec![], None),
                [e0] => {
                    let (fwd, closer) = walk(v, e0);
                    assert!(closer.is_none(), "degree-1 vertex cannot close a cycle");
                    let mut members = vec![v.clone()];
                    let mut path_edges = Vec::new();
                    for (e, m) in fwd {
                        path_edges.push(e);
                        members.push(m);
                    }
                    (members, path_edges, None)
                }
                [e0, e1] => {
                    let (fwd, closer) = walk(v, e1);
                    if let Some(close) = closer {
                        // Steps carry the edge into each member, so the
                        // connecting edges are exactly the step edges; the
                        // closer joins the last member back to `v`.
                        let mut members = vec![v.clone()];
                        let mut path_edges = Vec::new();
                        for (e, m) in fwd {
                            path_edges.push(e);
                            members.push(m);
                        }
                        (members, path_edges, Some(close))
                    } else {
                        let (bwd, _) = walk(v, e0);
                        let mut members: Vec<String> =
                            bwd.iter().rev().map(|(_, m)| m.clone()).collect();
                        let mut path_edges: Vec<usize> =
                            bwd.iter().rev().map(|(e, _)| *e).collect();
                        members.push(v.clone());
                        for (e, m) in fwd {
                            path_edges.push(e);
                            members.push(m);
                        }
                        (members, path_edges, None)
                    }
                }
                _ => unreachable!("unambiguous vertices have at most two edges"),
            };

        for m in &members {
            visited.insert(m.clone(), true);
        }

        let seq = match cycle_closer {
            None => stitch_path(&members, &path_edges, &edges, k),
            Some(closer) => stitch_cycle(&members, &path_edges, closer, &edges, k),
        };
        out.push(canon(&seq));
    }
    out.sort();
    out
}

/// Extend `cur` (ending in a k-window) across edge `m`, appending one base.
fn extend(cur: &mut String, m: &str, k: usize) {
    let w = cur[cur.len() - k..].to_string();
    if m[..k] == w {
        cur.push(m.as_bytes()[k] as char);
    } else {
        assert_eq!(m[1..], rc(&w), "edge {m} does not extend window {w}");
        cur.push(match m.as_bytes()[0] as char {
            'A' => 'T',
            'C' => 'G',
            'G' => 'C',
            _ => 'A',
        });
    }
}

fn extends(window: &str, m: &str, k: usize) -> bool {
    m[..k] == *window || m[1..] == rc(window)
}

fn stitch_path(members: &[String], path_edges: &[usize], edges: &[String], k: usize) -> String {
    if members.len() == 1 {
        return members[0].clone();
    }
    let first_edge = &edges[path_edges[0]];
    let mut cur = if extends(&members[0], first_edge, k) {
        members[0].clone()
    } else {
        rc(&members[0])
    };
    for &e in path_edges {
        extend(&mut cur, &edges[e], k);
    }
    assert_eq!(cur.len(), k + members.len() - 1);
    cur
}

/// Cycles linearize from the smallest member, reading its canonical form
/// forward, and drop the wrapped (k-1)-overlap.
fn stitch_cycle(
    members: &[String],
    path_edges: &[usize],
    closer: usize,
    edges: &[String],
    k: usize,
) -> String {
    let n = members.len();
    // Rotate so the minimum member leads.
    let min_pos = (0..n).min_by_key(|&i| &members[i]).unwrap();
    let mut ring: Vec<String> = (0..n).map(|i| members[(min_pos + i) % n].clone()).collect();
    // Edge i connects ring vertex i to i+1; the closing edge joins the two
    // ends of the original ordering.
    let mut all_edges: Vec<usize> = path_edges.to_vec();
    all_edges.push(closer);
    let mut ring_edges: Vec<usize> = (0..n).map(|i| all_edges[(min_pos + i) % n]).collect();
    // Orient forward from the canonical form of the start.
    if !extends(&ring[0], &edges[ring_edges[0]], k) {
        // Reverse the ring: the start stays, order and edges flip, and the
        // former closing edge becomes the first step.
        let start = ring[0].clone();
        let mut rest: Vec<String> = ring[1..].to_vec();
        rest.reverse();
        ring = std::iter::once(start).chain(rest).collect();
        ring_edges.reverse();
    }
    let mut cur = ring[0].clone();
    assert!(extends(&cur, &edges[ring_edges[0]], k));
    for &e in ring_edges.iter().take(n - 1) {
        extend(&mut cur, &edges[e], k);
    }
    cur.truncate(n);
    cur
}

/// Random genome whose canonical k-mers are all distinct; retries seeds.
pub fn unique_kmer_genome(len: usize, k: usize, seed: u64) -> String {
    let mut attempt = seed;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let genome: String = (0..len)
            .map(|_| ['A', 'C', 'G', 'T'][rng.random_range(0..4)])
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let distinct = (0..=len - k).all(|i| seen.insert(canon(&genome[i..i + k])));
        if distinct {
            return genome;
        }
        attempt = attempt.wrapping_add(0x9e37_79b9);
    }
}

/// Deterministic tiling reads with alternating strands; covers every
/// consecutive window of the genome.
pub fn tiling_reads(genome: &str, read_len: usize, step: usize, flip: bool) -> Vec<String> {
    let mut reads = Vec::new();
    let mut pos = 0;
    let mut i = 0;
    while pos + read_len <= genome.len() {
        let r = &genome[pos..pos + read_len];
        if flip && i % 2 == 1 {
            reads.push(rc(r));
        } else {
            reads.push(r.to_string());
        }
        pos += step;
        i += 1;
    }
    reads.push(genome[genome.len() - read_len.min(genome.len())..].to_string());
    reads
}
