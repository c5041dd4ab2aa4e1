use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid torsion point: {0}")]
    InvalidTorsion(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pole encountered: {0}")]
    Pole(String),
    #[error("series e*_{{{k},{r}}} is not absolutely convergent (need r > k + 2)")]
    NotConvergent { k: u32, r: u32 },
    #[error("precision budget exhausted: {0}")]
    PrecisionBudget(String),
    #[error("contour radius cannot be chosen: {0}")]
    ContourTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
