//! Bit-exact encodings: nucleotides, k-mer vertex IDs, reverse complements,
//! canonical forms, contig IDs and the end-flip marker.
//!
//! Layout of a 64-bit vertex ID:
//!
//! * k-mer: bits 63 and 62 are 0; the 2-bit codes of the sequence occupy the
//!   low `2k` bits, first base most significant, everything above zeroed.
//! * NULL: bit 63 set, all others zero.
//! * contig: bit 63 set, worker index in bits 62..32, sequence number in the
//!   low 32 bits. `(0, 0)` is reserved so no contig collides with NULL.
//! * flipping bit 62 of a k-mer ID marks it as a contig end during labeling;
//!   the flipped form never collides with a plain k-mer, a contig or NULL.

use std::fmt;

use bsp_engine::VertexId;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("invalid base {0:?} (expected A/C/G/T)")]
    InvalidBase(char),
    #[error("k = {0} out of range 1..=31")]
    InvalidK(usize),
    #[error("{0} is not an unflipped k-mer id for k = {1}")]
    NotAKmer(VertexId, usize),
    #[error("id {0} does not have the k-mer class bits")]
    NotKmerClass(VertexId),
    #[error("contig id out of range: worker {worker}, seq_no {seq_no}")]
    ContigIdRange { worker: u32, seq_no: u32 },
}

pub const FLIP_BIT: u64 = 1 << 62;
pub const CONTIG_BIT: u64 = 1 << 63;

/// Largest worker index storable while keeping bit 62 clear, so the
/// end-flip marker stays unambiguous on every ID class.
pub const MAX_CONTIG_WORKER: u32 = (1 << 30) - 1;

// ---------------------------------------------------------------------------
// Nucleotides

/// 2-bit nucleotide code: A=00, C=01, G=10, T=11.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nucleotide {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Nucleotide {
    pub fn from_code(code: u64) -> Nucleotide {
        match code & 3 {
            0 => Nucleotide::A,
            1 => Nucleotide::C,
            2 => Nucleotide::G,
            _ => Nucleotide::T,
        }
    }

    pub fn from_char(c: char) -> Result<Nucleotide, CodecError> {
        match c {
            'A' => Ok(Nucleotide::A),
            'C' => Ok(Nucleotide::C),
            'G' => Ok(Nucleotide::G),
            'T' => Ok(Nucleotide::T),
            other => Err(CodecError::InvalidBase(other)),
        }
    }

    pub fn code(self) -> u64 {
        self as u64
    }

    /// Complement is the bitwise NOT of the code: A<->T, C<->G.
    pub fn complement(self) -> Nucleotide {
        Nucleotide::from_code(!(self as u64))
    }

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }
}

// ---------------------------------------------------------------------------
// Orientations and edge polarity

/// Whether a k-mer was observed in its canonical form (`L`) or as the
/// reverse complement of the canonical form (`H`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    L = 0,
    H = 1,
}

impl Orientation {
    pub fn complement(self) -> Orientation {
        match self {
            Orientation::L => Orientation::H,
            Orientation::H => Orientation::L,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::L => write!(f, "L"),
            Orientation::H => write!(f, "H"),
        }
    }
}

/// Per-edge pair of orientation labels `<src:dst>`.
///
/// An edge `(u, v)` with polarity `<X:Y>` denotes the same physical edge as
/// `(v, u)` with polarity `<!Y:!X>`; [`EdgePolarity::reversed`] performs that
/// rewrite and is an involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePolarity {
    pub src: Orientation,
    pub dst: Orientation,
}

impl EdgePolarity {
    pub const LL: EdgePolarity = EdgePolarity::new(Orientation::L, Orientation::L);
    pub const LH: EdgePolarity = EdgePolarity::new(Orientation::L, Orientation::H);
    pub const HL: EdgePolarity = EdgePolarity::new(Orientation::H, Orientation::L);
    pub const HH: EdgePolarity = EdgePolarity::new(Orientation::H, Orientation::H);

    pub const fn new(src: Orientation, dst: Orientation) -> EdgePolarity {
        EdgePolarity { src, dst }
    }

    pub fn reversed(self) -> EdgePolarity {
        EdgePolarity {
            src: self.dst.complement(),
            dst: self.src.complement(),
        }
    }

    /// 2-bit encoding used in bitmap slots: src in the high bit.
    pub fn code(self) -> u64 {
        (self.src as u64) << 1 | self.dst as u64
    }

    pub fn from_code(code: u64) -> EdgePolarity {
        EdgePolarity {
            src: if code & 2 != 0 {
                Orientation::H
            } else {
                Orientation::L
            },
            dst: if code & 1 != 0 {
                Orientation::H
            } else {
                Orientation::L
            },
        }
    }
}

impl fmt::Display for EdgePolarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}:{}>", self.src, self.dst)
    }
}

// ---------------------------------------------------------------------------
// Packed windows (widths up to 32 bases fit a u64)

/// Pack up to 32 bases into a u64, first base most significant.
pub fn pack_window(seq: &[u8]) -> Result<u64, CodecError> {
    debug_assert!(seq.len() <= 32);
    let mut x = 0u64;
    for &b in seq {
        let code = match b {
            b'A' => 0,
            b'C' => 1,
            b'G' => 2,
            b'T' => 3,
            other => return Err(CodecError::InvalidBase(other as char)),
        };
        x = (x << 2) | code;
    }
    Ok(x)
}

pub fn unpack_window(x: u64, len: usize) -> String {
    (0..len)
        .map(|i| Nucleotide::from_code(x >> (2 * (len - 1 - i))).to_char())
        .collect()
}

/// Reverse complement of a packed window.
pub fn rc_window(x: u64, len: usize) -> u64 {
    let mut out = 0u64;
    let mut v = x;
    for _ in 0..len {
        out = (out << 2) | (!v & 3);
        v >>= 2;
    }
    out
}

/// Lexicographically smaller of a packed window and its reverse complement.
///
/// Returns `L` when the input is already canonical; palindromes (possible
/// only for even lengths) are defined to be `L`.
pub fn canonical_window(x: u64, len: usize) -> (u64, Orientation) {
    let rc = rc_window(x, len);
    if x <= rc {
        (x, Orientation::L)
    } else {
        (rc, Orientation::H)
    }
}

// ---------------------------------------------------------------------------
// Vertex ID codecs

/// Encode a k-mer sequence (1..=31 bases) into its vertex ID.
pub fn encode_kmer(seq: &str) -> Result<VertexId, CodecError> {
    let k = seq.len();
    if !(1..=31).contains(&k) {
        return Err(CodecError::InvalidK(k));
    }
    Ok(VertexId(pack_window(seq.as_bytes())?))
}

/// Decode a k-mer vertex ID back into its sequence.
pub fn decode_kmer(id: VertexId, k: usize) -> Result<String, CodecError> {
    if !(1..=31).contains(&k) {
        return Err(CodecError::InvalidK(k));
    }
    if id.0 >> (2 * k) != 0 {
        return Err(CodecError::NotAKmer(id, k));
    }
    Ok(unpack_window(id.0, k))
}

/// Reverse complement of a sequence string; an involution.
pub fn reverse_complement(seq: &str) -> Result<String, CodecError> {
    let mut out = String::with_capacity(seq.len());
    for c in seq.chars().rev() {
        out.push(Nucleotide::from_char(c)?.complement().to_char());
    }
    Ok(out)
}

/// The lexicographically smaller of a sequence and its reverse complement,
/// with the orientation of the input relative to the result.
pub fn canonicalize(seq: &str) -> Result<(String, Orientation), CodecError> {
    let rc = reverse_complement(seq)?;
    if seq <= rc.as_str() {
        Ok((seq.to_string(), Orientation::L))
    } else {
        Ok((rc, Orientation::H))
    }
}

/// Build a contig vertex ID from a worker index and per-worker sequence
/// number. `(0, 0)` is reserved (it would collide with NULL).
pub fn make_contig_id(worker: u32, seq_no: u32) -> Result<VertexId, CodecError> {
    if worker > MAX_CONTIG_WORKER || (worker == 0 && seq_no == 0) {
        return Err(CodecError::ContigIdRange { worker, seq_no });
    }
    Ok(VertexId(CONTIG_BIT | (worker as u64) << 32 | seq_no as u64))
}

pub fn contig_worker(id: VertexId) -> u32 {
    ((id.0 >> 32) & 0x7fff_ffff) as u32
}

pub fn contig_seq_no(id: VertexId) -> u32 {
    id.0 as u32
}

/// Toggle the contig-end marker (bit 62) on a k-mer ID; an involution.
pub fn flip_end_marker(id: VertexId) -> Result<VertexId, CodecError> {
    if id.0 & CONTIG_BIT != 0 {
        return Err(CodecError::NotKmerClass(id));
    }
    Ok(VertexId(id.0 ^ FLIP_BIT))
}

/// The five-way class partition of the 64-bit ID space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdClass {
    Kmer,
    FlippedKmer,
    Contig,
    Null,
}

pub fn classify(id: VertexId) -> IdClass {
    if id.0 & CONTIG_BIT == 0 {
        if id.0 & FLIP_BIT == 0 {
            IdClass::Kmer
        } else {
            IdClass::FlippedKmer
        }
    } else if id.is_null() {
        IdClass::Null
    } else {
        IdClass::Contig
    }
}

// ---------------------------------------------------------------------------
// Arbitrary-length packed sequences (contigs)

/// A 2-bit packed nucleotide sequence of arbitrary length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PackedSeq {
    len: usize,
    words: Vec<u64>,
}

impl PackedSeq {
    pub fn new() -> PackedSeq {
        PackedSeq::default()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(seq: &str) -> Result<PackedSeq, CodecError> {
        let mut out = PackedSeq::new();
        for c in seq.chars() {
            out.push(Nucleotide::from_char(c)?);
        }
        Ok(out)
    }

    /// Unpack a right-aligned 2-bit window (such as a k-mer vertex ID).
    pub fn from_window(x: u64, len: usize) -> PackedSeq {
        let mut out = PackedSeq::new();
        for i in 0..len {
            out.push(Nucleotide::from_code(x >> (2 * (len - 1 - i))));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, n: Nucleotide) {
        let word = self.len / 32;
        let slot = self.len % 32;
        if slot == 0 {
            self.words.push(0);
        }
        // First base in the most significant bits of each word.
        self.words[word] |= n.code() << (2 * (31 - slot));
        self.len += 1;
    }

    pub fn get(&self, i: usize) -> Nucleotide {
        debug_assert!(i < self.len);
        Nucleotide::from_code(self.words[i / 32] >> (2 * (31 - i % 32)))
    }

    pub fn iter(&self) -> impl Iterator<Item = Nucleotide> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn reverse_complement(&self) -> PackedSeq {
        let mut out = PackedSeq::new();
        for i in (0..self.len).rev() {
            out.push(self.get(i).complement());
        }
        out
    }

    /// Shorten to `len` bases, zeroing vacated bits so equality and
    /// hashing stay well defined.
    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.words.truncate(len.div_ceil(32));
        if let Some(last) = self.words.last_mut() {
            let used = len % 32;
            if used != 0 {
                *last &= !0u64 << (2 * (32 - used));
            }
        }
    }

    /// The smaller of this sequence and its reverse complement.
    pub fn canonical(&self) -> PackedSeq {
        let rc = self.reverse_complement();
        if *self <= rc {
            self.clone()
        } else {
            rc
        }
    }
}

impl Ord for PackedSeq {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for PackedSeq {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PackedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in self.iter() {
            write!(f, "{}", n.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PackedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PackedSeq({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encode_examples() {
        assert_eq!(encode_kmer("GGCA").unwrap(), VertexId(0b10100100));
        assert_eq!(encode_kmer("GGCA").unwrap(), VertexId(164));
        assert_eq!(encode_kmer("AAAA").unwrap(), VertexId(0));
        assert_eq!(encode_kmer("ATTGC").unwrap(), VertexId(0b0011111001));
        assert_eq!(encode_kmer("ATTGC").unwrap(), VertexId(249));
        assert_eq!(encode_kmer("AXGT"), Err(CodecError::InvalidBase('X')));
        assert_eq!(encode_kmer(""), Err(CodecError::InvalidK(0)));
        assert_eq!(
            encode_kmer("AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA"),
            Err(CodecError::InvalidK(32))
        );
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_kmer(VertexId(164), 4).unwrap(), "GGCA");
        assert_eq!(decode_kmer(VertexId(0), 1).unwrap(), "A");
        assert_eq!(decode_kmer(VertexId(249), 5).unwrap(), "ATTGC");
        // Bits above 2k, a flipped marker or the contig bit all disqualify.
        assert!(decode_kmer(VertexId(164), 3).is_err());
        assert!(decode_kmer(VertexId(164 | FLIP_BIT), 4).is_err());
        assert!(decode_kmer(VertexId::NULL, 4).is_err());
    }

    #[test]
    fn reverse_complement_examples() {
        assert_eq!(reverse_complement("AAGT").unwrap(), "ACTT");
        assert_eq!(reverse_complement("AT").unwrap(), "AT");
        assert_eq!(reverse_complement("ATTGCAAGTC").unwrap(), "GACTTGCAAT");
        assert!(reverse_complement("AN").is_err());
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(
            canonicalize("GT").unwrap(),
            ("AC".to_string(), Orientation::H)
        );
        assert_eq!(
            canonicalize("AA").unwrap(),
            ("AA".to_string(), Orientation::L)
        );
        assert_eq!(
            canonicalize("AG").unwrap(),
            ("AG".to_string(), Orientation::L)
        );
        // Palindromes resolve to L.
        assert_eq!(
            canonicalize("GTAC").unwrap(),
            ("GTAC".to_string(), Orientation::L)
        );
    }

    #[test]
    fn contig_ids() {
        let id = make_contig_id(1, 1).unwrap();
        assert_eq!(id.0, (1 << 63) | (1 << 32) | 1);
        assert_eq!(contig_worker(id), 1);
        assert_eq!(contig_seq_no(id), 1);
        assert_ne!(make_contig_id(2, 7).unwrap(), make_contig_id(7, 2).unwrap());
        assert!(make_contig_id(0, 0).is_err());
        assert!(make_contig_id(1 << 30, 1).is_err());
        assert!(!make_contig_id(0, 1).unwrap().is_null());
    }

    #[test]
    fn flip_marker() {
        let id = VertexId(164);
        let flipped = flip_end_marker(id).unwrap();
        assert_eq!(flipped.0, 164 + (1u64 << 62));
        assert_ne!(flipped, id);
        assert_eq!(flip_end_marker(flipped).unwrap(), id);
        assert_eq!(flip_end_marker(VertexId(0)).unwrap(), VertexId(1 << 62));
        assert!(flip_end_marker(VertexId::NULL).is_err());
        assert!(flip_end_marker(make_contig_id(1, 1).unwrap()).is_err());
    }

    #[test]
    fn polarity_reversal() {
        assert_eq!(EdgePolarity::LH.reversed(), EdgePolarity::LH);
        assert_eq!(EdgePolarity::LL.reversed(), EdgePolarity::HH);
        assert_eq!(EdgePolarity::HL.reversed(), EdgePolarity::HL);
        for p in [
            EdgePolarity::LL,
            EdgePolarity::LH,
            EdgePolarity::HL,
            EdgePolarity::HH,
        ] {
            assert_eq!(p.reversed().reversed(), p);
            assert_eq!(EdgePolarity::from_code(p.code()), p);
        }
    }

    #[test]
    fn packed_seq_roundtrip_and_rc() {
        let s = "TGCCGTAC";
        let p = PackedSeq::from_str(s).unwrap();
        assert_eq!(p.to_string(), s);
        assert_eq!(p.len(), 8);
        assert_eq!(p.reverse_complement().to_string(), "GTACGGCA");
        // 2-bit packing of TGCCGTAC is 11 10 01 01 10 11 00 01.
        let long: String = std::iter::repeat_n("ACGT", 20).collect();
        let pl = PackedSeq::from_str(&long).unwrap();
        assert_eq!(pl.to_string(), long);
        assert_eq!(pl.len(), 80);
    }

    #[test]
    fn packed_seq_ordering_is_lexicographic() {
        let a = PackedSeq::from_str("ACGT").unwrap();
        let b = PackedSeq::from_str("ACT").unwrap();
        assert!(a < b); // G < T at position 2
        assert!(PackedSeq::from_str("AC").unwrap() < a); // prefix first
    }

    #[test]
    fn exhaustive_roundtrip_small_k() {
        for k in 1..=5usize {
            for x in 0..(1u64 << (2 * k)) {
                let seq = unpack_window(x, k);
                assert_eq!(encode_kmer(&seq).unwrap(), VertexId(x));
                assert_eq!(decode_kmer(VertexId(x), k).unwrap(), seq);
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip_random(seq in "[ACGT]{1,31}") {
            let id = encode_kmer(&seq).unwrap();
            prop_assert_eq!(decode_kmer(id, seq.len()).unwrap(), seq);
        }

        #[test]
        fn rc_involution(seq in "[ACGT]{1,40}") {
            let rc = reverse_complement(&seq).unwrap();
            prop_assert_eq!(reverse_complement(&rc).unwrap(), seq);
        }

        #[test]
        fn canonical_idempotent_and_paired(seq in "[ACGT]{1,31}") {
            let (c, o) = canonicalize(&seq).unwrap();
            let (c2, o2) = canonicalize(&c).unwrap();
            prop_assert_eq!(&c2, &c);
            prop_assert_eq!(o2, Orientation::L);
            let rc = reverse_complement(&seq).unwrap();
            let (c3, o3) = canonicalize(&rc).unwrap();
            prop_assert_eq!(&c3, &c);
            if seq != rc {
                prop_assert_eq!(o3, o.complement());
            }
        }

        #[test]
        fn window_and_string_paths_agree(seq in "[ACGT]{1,31}") {
            let x = pack_window(seq.as_bytes()).unwrap();
            let (cx, ox) = canonical_window(x, seq.len());
            let (cs, os) = canonicalize(&seq).unwrap();
            prop_assert_eq!(unpack_window(cx, seq.len()), cs);
            prop_assert_eq!(ox, os);
            prop_assert_eq!(unpack_window(rc_window(x, seq.len()), seq.len()),
                            reverse_complement(&seq).unwrap());
        }

        #[test]
        fn id_class_partition(bits in any::<u64>()) {
            let id = VertexId(bits);
            let class = classify(id);
            let classes = [
                (class == IdClass::Kmer) as u8,
                (class == IdClass::FlippedKmer) as u8,
                (class == IdClass::Contig) as u8,
                (class == IdClass::Null) as u8,
            ];
            prop_assert_eq!(classes.iter().sum::<u8>(), 1);
            match class {
                IdClass::Kmer => prop_assert_eq!(bits >> 62, 0),
                IdClass::FlippedKmer => prop_assert_eq!(bits >> 62, 1),
                IdClass::Null => prop_assert_eq!(bits, 1 << 63),
                IdClass::Contig => prop_assert!(bits >> 63 == 1 && bits != 1 << 63),
            }
        }

        #[test]
        fn contig_ids_injective(w1 in 0u32..1 << 30, s1 in any::<u32>(),
                                w2 in 0u32..1 << 30, s2 in any::<u32>()) {
            prop_assume!((w1, s1) != (0, 0) && (w2, s2) != (0, 0));
            let a = make_contig_id(w1, s1).unwrap();
            let b = make_contig_id(w2, s2).unwrap();
            prop_assert_eq!(a == b, (w1, s1) == (w2, s2));
            prop_assert_eq!(classify(a), IdClass::Contig);
        }

        #[test]
        fn packed_seq_rc_involution(seq in "[ACGT]{0,100}") {
            let p = PackedSeq::from_str(&seq).unwrap();
            prop_assert_eq!(p.reverse_complement().reverse_complement(), p);
        }
    }
}
