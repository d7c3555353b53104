use std::fmt;

/// A 64-bit vertex identifier.
///
/// The engine treats IDs as opaque except for one distinguished value: the
/// `NULL` sentinel (most significant bit set, all others zero). Messages
/// addressed to `NULL` are silently discarded, which lets vertex programs
/// send toward dead ends without special-casing.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u64);

impl VertexId {
    /// The dummy "no such neighbor" vertex.
    pub const NULL: VertexId = VertexId(1 << 63);

    pub fn is_null(self) -> bool {
        self == Self::NULL
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_null() {
            write!(f, "NULL")
        } else {
            write!(f, "{:#x}", self.0)
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_null() {
            write!(f, "NULL")
        } else {
            write!(f, "{}", self.0)
        }
    }
}
