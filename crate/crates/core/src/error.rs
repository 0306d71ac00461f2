use alloc::string::String;

/// Errors produced by the core codec and index.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Curve order outside `1..=31`.
    #[error("curve order {0} is outside the supported range 1..=31")]
    InvalidOrder(u32),

    /// The image needs a grid larger than order 31.
    #[error("image needs curve order {required}, but at most 31 is supported")]
    Capacity { required: u32 },

    /// Zero or otherwise unusable grid parameter.
    #[error("invalid grid parameter: {0}")]
    InvalidGrid(&'static str),

    /// Dimension passed to a bit-width computation was < 1.
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(u64),

    /// A cell coordinate lies outside the `side x side` grid.
    #[error("cell ({x}, {y}) is outside the {side}x{side} grid")]
    CellOutOfBounds { x: u64, y: u64, side: u64 },

    /// A pixel coordinate lies outside the grid's pixel extent.
    #[error("pixel coordinate ({x}, {y}) is outside the {extent}x{extent} pixel extent")]
    PixelOutOfBounds { x: u64, y: u64, extent: u64 },

    /// A Hilbert index is not below `4^order`.
    #[error("hilbert index {index} is out of range for a grid of {cell_count} cells")]
    IndexOutOfRange { index: u64, cell_count: u64 },

    /// A range with `start > end`.
    #[error("inverted interval [{start}, {end}]")]
    InvertedInterval { start: u64, end: u64 },

    /// A window with `min > max` on some axis.
    #[error("inverted window: min ({min_x}, {min_y}) exceeds max ({max_x}, {max_y})")]
    InvertedWindow {
        min_x: u32,
        min_y: u32,
        max_x: u32,
        max_y: u32,
    },

    /// A ring or polygon violates its shape invariants.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    /// Two records in one table share an id.
    #[error("duplicate annotation id {0}")]
    DuplicateId(u64),

    /// A record's grid differs from the table's grid.
    #[error("record {id} uses a different grid geometry than the table")]
    GeometryMismatch { id: u64 },

    /// An index table failed a structural check.
    #[error("index table integrity violation: {0}")]
    Integrity(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
