use thiserror::Error;

use crate::coloring::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n = {n} exceeds the size cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("coloring is not proper: {0}")]
    Improper(Violation),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("path is not {k}-rainbow")]
    NotKRainbow { k: u32 },

    #[error("position {position} out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("palette has {found} colors, expected {expected} colors labelled 1..={expected}")]
    PaletteSize { expected: usize, found: usize },

    #[error("Latin square is not in the image of the coloring map: {0}")]
    NotInImage(String),

    #[error("not a transversal: {0}")]
    NotTransversal(String),

    #[error("invalid Latin square: {0}")]
    NotLatin(String),

    /// A proven bound failed on a solver output. This always indicates a bug.
    #[error("{bound} bound violated: {detail}")]
    BoundViolated { bound: &'static str, detail: String },
}
