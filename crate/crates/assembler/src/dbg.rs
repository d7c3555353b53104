//! De Bruijn graph construction from reads: (k+1)-mer extraction and
//! counting with coverage filtering, then k-mer vertex construction with
//! compact adjacency bitmaps.
//!
//! Each edge of the graph is one observed (k+1)-mer. An edge incident to a
//! vertex is stored in one of 32 bitmap slots indexed by
//! `polarity * 8 + direction * 4 + nucleotide` (direction: in = 0, out = 1).
//! A (k+1)-mer and its reverse complement describe the same physical edge;
//! both are normalized into the slot form whose stored direction runs from
//! the lexicographically smaller endpoint, so their counts merge.

use bsp_engine::{Engine, VertexId};

use crate::error::AsmError;
use crate::kmer::{canonical_window, pack_window, rc_window, EdgePolarity, Orientation};

/// Edge direction relative to the vertex that stores it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    In = 0,
    Out = 1,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::In => Dir::Out,
            Dir::Out => Dir::In,
        }
    }
}

/// Index into the 32-bit neighbor bitmap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotId(pub u8);

impl SlotId {
    pub fn new(polarity: EdgePolarity, dir: Dir, nucleotide: u64) -> SlotId {
        debug_assert!(nucleotide < 4);
        SlotId((polarity.code() * 8 + (dir as u64) * 4 + nucleotide) as u8)
    }

    pub fn polarity(self) -> EdgePolarity {
        EdgePolarity::from_code(self.0 as u64 / 8)
    }

    pub fn dir(self) -> Dir {
        if (self.0 / 4).is_multiple_of(2) {
            Dir::In
        } else {
            Dir::Out
        }
    }

    pub fn nucleotide(self) -> u64 {
        (self.0 % 4) as u64
    }
}

/// Uncompressed adjacency item: one byte laid out `0 0 0 X X Y Z Z`
/// (XX = nucleotide, Y = 1 for an in-neighbor, ZZ = polarity), with
/// `1000_0000` reserved for the NULL neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdjItem(pub u8);

impl AdjItem {
    pub const NULL: AdjItem = AdjItem(0b1000_0000);

    pub fn from_slot(slot: SlotId) -> AdjItem {
        let y = match slot.dir() {
            Dir::In => 1,
            Dir::Out => 0,
        };
        AdjItem((slot.nucleotide() << 3 | y << 2 | slot.polarity().code()) as u8)
    }

    pub fn to_slot(self) -> Option<SlotId> {
        if self == Self::NULL {
            return None;
        }
        let nuc = (self.0 >> 3 & 3) as u64;
        let dir = if self.0 >> 2 & 1 == 1 {
            Dir::In
        } else {
            Dir::Out
        };
        let pol = EdgePolarity::from_code(self.0 as u64 & 3);
        Some(SlotId::new(pol, dir, nuc))
    }
}

/// Compact adjacency of a k-mer vertex: a 32-bit slot bitmap plus one
/// coverage count per set bit, in ascending slot order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeighborBitmap {
    pub bits: u32,
    pub covs: Vec<u64>,
}

impl NeighborBitmap {
    pub fn slots(&self) -> impl Iterator<Item = (SlotId, u64)> + '_ {
        (0u8..32)
            .filter(|s| self.bits & (1 << s) != 0)
            .zip(self.covs.iter().copied())
            .map(|(s, c)| (SlotId(s), c))
    }

    pub fn degree(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn add(&mut self, slot: SlotId, cov: u64) {
        let rank = (self.bits & ((1u32 << slot.0) - 1)).count_ones() as usize;
        if self.bits & (1 << slot.0) != 0 {
            self.covs[rank] += cov;
        } else {
            self.bits |= 1 << slot.0;
            self.covs.insert(rank, cov);
        }
    }

    pub fn cov(&self, slot: SlotId) -> Option<u64> {
        if self.bits & (1 << slot.0) == 0 {
            return None;
        }
        let rank = (self.bits & ((1u32 << slot.0) - 1)).count_ones() as usize;
        Some(self.covs[rank])
    }

    pub fn remove(&mut self, slot: SlotId) {
        if self.bits & (1 << slot.0) != 0 {
            let rank = (self.bits & ((1u32 << slot.0) - 1)).count_ones() as usize;
            self.covs.remove(rank);
            self.bits &= !(1 << slot.0);
        }
    }
}

/// A counted (k+1)-mer that survived coverage filtering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct K1Mer {
    pub id: u64,
    pub count: u64,
}

/// A de Bruijn graph vertex as produced by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmerVertex {
    pub adj: NeighborBitmap,
}

/// Vertex types: dead end, unambiguous interior, ambiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    One,
    OneOne,
    Ambiguous,
}

// ---------------------------------------------------------------------------
// (k+1)-mer extraction

/// Split a read at `N`s and slide a (k+1)-wide window over each segment.
pub fn extract_k1mers(read: &str, k: usize) -> Result<Vec<&str>, AsmError> {
    let w = k + 1;
    let mut out = Vec::new();
    for (pos, b) in read.bytes().enumerate() {
        if !matches!(b, b'A' | b'C' | b'G' | b'T' | b'N') {
            return Err(AsmError::InvalidRead {
                position: pos,
                byte: b as char,
            });
        }
    }
    for segment in read.split('N') {
        if segment.len() < w {
            continue;
        }
        for start in 0..=segment.len() - w {
            out.push(&segment[start..start + w]);
        }
    }
    Ok(out)
}

/// Packed (k+1)-mer IDs of a read, rolling-encoded.
pub fn window_ids(read: &str, k: usize) -> Result<Vec<u64>, AsmError> {
    let w = k + 1;
    let mask = if w == 32 {
        u64::MAX
    } else {
        (1u64 << (2 * w)) - 1
    };
    let mut out = Vec::new();
    for (pos, b) in read.bytes().enumerate() {
        if !matches!(b, b'A' | b'C' | b'G' | b'T' | b'N') {
            return Err(AsmError::InvalidRead {
                position: pos,
                byte: b as char,
            });
        }
    }
    for segment in read.split('N') {
        if segment.len() < w {
            continue;
        }
        let bytes = segment.as_bytes();
        let mut acc = pack_window(&bytes[..w])?;
        out.push(acc);
        for &b in &bytes[w..] {
            let code = match b {
                b'A' => 0,
                b'C' => 1,
                b'G' => 2,
                _ => 3,
            };
            acc = ((acc << 2) | code) & mask;
            out.push(acc);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Counting and vertex construction

/// Shuffle (k+1)-mer IDs by value, sum counts, and keep those with
/// `count > theta`.
pub fn count_and_filter(engine: &Engine, ids: &[u64], theta: u64) -> Vec<K1Mer> {
    engine
        .mini_map_reduce(
            ids,
            |&id| vec![(id, 1u64)],
            |&id, counts| {
                let count: u64 = counts.iter().sum();
                if count > theta {
                    vec![K1Mer { id, count }]
                } else {
                    vec![]
                }
            },
        )
        .into_iter()
        .flat_map(|(_, v)| v)
        .collect()
}

/// The one or two (vertex, slot) placements of a (k+1)-mer edge.
///
/// The edge is normalized so its stored direction runs from the smaller
/// endpoint; a self-loop keeps only the smaller of its two slot forms.
pub fn edge_slots(m: u64, k: usize) -> Vec<(VertexId, SlotId)> {
    let kmask = (1u64 << (2 * k)) - 1;
    let (u, _) = canonical_window(m >> 2, k);
    let (v, _) = canonical_window(m & kmask, k);
    let m = if u > v { rc_window(m, k + 1) } else { m };
    let (u, ou) = canonical_window(m >> 2, k);
    let (v, ov) = canonical_window(m & kmask, k);
    let polarity = EdgePolarity::new(ou, ov);
    let out_slot = SlotId::new(polarity, Dir::Out, m & 3);
    let in_slot = SlotId::new(polarity, Dir::In, m >> (2 * k));
    if u == v {
        vec![(VertexId(u), out_slot.min(in_slot))]
    } else {
        vec![(VertexId(u), out_slot), (VertexId(v), in_slot)]
    }
}

/// Build k-mer vertices with merged adjacency bitmaps from filtered
/// (k+1)-mers.
pub fn build_vertices(engine: &Engine, k1mers: &[K1Mer], k: usize) -> Vec<(VertexId, KmerVertex)> {
    engine
        .mini_map_reduce(
            k1mers,
            |k1| {
                edge_slots(k1.id, k)
                    .into_iter()
                    .map(|(vid, slot)| (vid, (slot, k1.count)))
                    .collect()
            },
            |&vid, placements| {
                let mut adj = NeighborBitmap::default();
                for &(slot, cov) in placements {
                    adj.add(slot, cov);
                }
                let _ = vid;
                vec![KmerVertex { adj }]
            },
        )
        .into_iter()
        .map(|(vid, mut v)| (vid, v.pop().unwrap()))
        .collect()
}

/// Full construction: extract, count, filter, build.
pub fn build_dbg(
    engine: &Engine,
    reads: &[String],
    k: usize,
    theta: u64,
) -> Result<Vec<(VertexId, KmerVertex)>, AsmError> {
    let mut ids = Vec::new();
    for read in reads {
        ids.extend(window_ids(read, k)?);
    }
    let k1mers = count_and_filter(engine, &ids, theta);
    Ok(build_vertices(engine, &k1mers, k))
}

// ---------------------------------------------------------------------------
// Slot decoding and vertex typing

/// Recover the neighbor ID a slot points at: orient self, prepend or append
/// the slot's nucleotide, orient the result.
pub fn decode_neighbor(id: VertexId, k: usize, slot: SlotId) -> VertexId {
    let kmask = (1u64 << (2 * k)) - 1;
    let pol = slot.polarity();
    let (my_label, nbr_label) = match slot.dir() {
        Dir::Out => (pol.src, pol.dst),
        Dir::In => (pol.dst, pol.src),
    };
    let oriented = if my_label == Orientation::H {
        rc_window(id.0, k)
    } else {
        id.0
    };
    let shifted = match slot.dir() {
        Dir::Out => ((oriented << 2) | slot.nucleotide()) & kmask,
        Dir::In => (slot.nucleotide() << (2 * (k - 1))) | (oriented >> 2),
    };
    let nbr = if nbr_label == Orientation::H {
        rc_window(shifted, k)
    } else {
        shifted
    };
    VertexId(nbr)
}

/// Decode an uncompressed adjacency item; NULL items give the NULL vertex.
pub fn decode_adj_item(id: VertexId, k: usize, item: AdjItem) -> VertexId {
    match item.to_slot() {
        None => VertexId::NULL,
        Some(slot) => decode_neighbor(id, k, slot),
    }
}

/// An edge as seen from one endpoint, with labels resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeView {
    pub slot: SlotId,
    pub neighbor: VertexId,
    pub cov: u64,
    pub my_label: Orientation,
    pub other_label: Orientation,
    pub dir: Dir,
}

impl EdgeView {
    /// Rewrite so this endpoint's label reads `L` (direction flips if it
    /// was `H`). Both views denote the same physical edge.
    pub fn normalized(self) -> EdgeView {
        if self.my_label == Orientation::L {
            self
        } else {
            EdgeView {
                my_label: Orientation::L,
                other_label: self.other_label.complement(),
                dir: self.dir.flip(),
                ..self
            }
        }
    }
}

pub fn edge_views(id: VertexId, k: usize, adj: &NeighborBitmap) -> Vec<EdgeView> {
    adj.slots()
        .map(|(slot, cov)| {
            let pol = slot.polarity();
            let (my_label, other_label) = match slot.dir() {
                Dir::Out => (pol.src, pol.dst),
                Dir::In => (pol.dst, pol.src),
            };
            EdgeView {
                slot,
                neighbor: decode_neighbor(id, k, slot),
                cov,
                my_label,
                other_label,
                dir: slot.dir(),
            }
        })
        .collect()
}

/// Classify by edge count and, for two edges, whether they form one
/// in-edge and one out-edge once both agree on this vertex's label.
/// Self-loops are ambiguous.
pub fn classify_vertex(id: VertexId, k: usize, adj: &NeighborBitmap) -> VertexKind {
    let views = edge_views(id, k, adj);
    classify_views(id, &views)
}

pub fn classify_views(id: VertexId, views: &[EdgeView]) -> VertexKind {
    if views.iter().any(|v| v.neighbor == id) {
        return VertexKind::Ambiguous;
    }
    match views.len() {
        1 => VertexKind::One,
        2 => {
            let a = views[0].normalized();
            let b = views[1].normalized();
            if a.dir != b.dir {
                VertexKind::OneOne
            } else {
                VertexKind::Ambiguous
            }
        }
        _ => VertexKind::Ambiguous,
    }
}

// ---------------------------------------------------------------------------
// Binary graph dump

/// Write vertices as: 8-byte LE ID, 4-byte LE bitmap, then one varint
/// coverage per set bit (7 data bits per byte, low group first,
/// continuation bit 0x80).
pub fn dump_graph(
    w: &mut dyn std::io::Write,
    vertices: &[(VertexId, KmerVertex)],
) -> std::io::Result<()> {
    for (id, v) in vertices {
        w.write_all(&id.0.to_le_bytes())?;
        w.write_all(&v.adj.bits.to_le_bytes())?;
        for cov in &v.adj.covs {
            let mut x = *cov;
            loop {
                let byte = (x & 0x7f) as u8;
                x >>= 7;
                if x == 0 {
                    w.write_all(&[byte])?;
                    break;
                }
                w.write_all(&[byte | 0x80])?;
            }
        }
    }
    Ok(())
}

/// Inverse of [`dump_graph`].
pub fn load_graph(r: &mut dyn std::io::Read) -> std::io::Result<Vec<(VertexId, KmerVertex)>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes.len() - i < 12 {
            return Err(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "truncated vertex record",
            ));
        }
        let id = u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let bits = u32::from_le_bytes(bytes[i + 8..i + 12].try_into().unwrap());
        i += 12;
        let mut covs = Vec::with_capacity(bits.count_ones() as usize);
        for _ in 0..bits.count_ones() {
            let mut x = 0u64;
            let mut shift = 0;
            loop {
                let Some(&b) = bytes.get(i) else {
                    return Err(std::io::Error::new(
                        std::io::ErrorKind::UnexpectedEof,
                        "truncated varint",
                    ));
                };
                i += 1;
                x |= ((b & 0x7f) as u64) << shift;
                if b & 0x80 == 0 {
                    break;
                }
                shift += 7;
            }
            covs.push(x);
        }
        out.push((
            VertexId(id),
            KmerVertex {
                adj: NeighborBitmap { bits, covs },
            },
        ));
    }
    Ok(out)
}
