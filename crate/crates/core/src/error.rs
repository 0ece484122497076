use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("family has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{}", format_entry_errors(.0))]
    Entries(Vec<EntryError>),

    #[error("malformed document: {0}")]
    Document(String),

    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("coordinate {0} is infinite")]
    InfiniteCoordinate(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0:?} is not a basis")]
    NotABasis(Vec<usize>),

    #[error("element {element} is {} the basis", if *.inside { "inside" } else { "outside" })]
    ElementPlacement { element: usize, inside: bool },

    #[error("enumeration of {0} subsets exceeds the oracle size limit")]
    TooLarge(u128),

    #[error("projections still differ at k = {0}")]
    Unstabilized(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A parse failure attached to one matrix entry.
#[derive(Debug)]
pub struct EntryError {
    pub row: usize,
    pub col: usize,
    pub error: Box<Error>,
}

fn format_entry_errors(errors: &[EntryError]) -> String {
    errors
        .iter()
        .map(|e| format!("entry ({}, {}): {}", e.row, e.col, e.error))
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
