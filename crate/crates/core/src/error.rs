use alloc::string::String;
use alloc::vec::Vec;

use crate::triad::Violation;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is singular or not positive definite")]
    SingularGram,
    #[error("cot has a pole at {0}·π")]
    Pole(String),
    #[error("interval arithmetic: {0}")]
    Numeric(&'static str),
    #[error("unsupported Cartan label {0}")]
    UnsupportedLabel(String),
    #[error("Weyl group closure exceeded {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("root system component of rank {rank} matches no supported type")]
    UnrecognizedType { rank: usize },
    #[error("reflection matrix is not integral (input is not crystallographic)")]
    NotCrystallographic,
    #[error("unknown catalog key {0:?}")]
    UnknownKey(String),
    #[error("bad catalog parameters: {0}")]
    BadParameters(String),
    #[error("invalid datum: {}", display_violations(.0))]
    InvalidDatum(Vec<Violation>),
    #[error("fundamental alcove is empty or unbounded")]
    EmptyAlcove,
    #[error("alcove reduction did not terminate after {0} reflections")]
    NonTermination(usize),
    #[error("minimal-orbit solver did not converge: {0}")]
    NoConvergence(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("diagram needs rank <= 2, datum has rank {0}")]
    RankTooHigh(usize),
}

fn display_violations(v: &[Violation]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        let _ = write!(s, "{x}");
    }
    s
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
