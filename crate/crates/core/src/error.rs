use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no embedding of GF(2^{from}) into GF(2^{target})")]
    IncompatibleTower { from: u8, target: u8 },

    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular model: {0}")]
    SingularModel(String),
    #[error("genus {0} is too small (need g >= 2)")]
    GenusTooSmall(usize),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("unknown place id {0}")]
    UnknownPlace(String),

    #[error("lattice generators do not span a full-rank lattice")]
    RankDeficient,
    #[error("rank overflow: Hom space of rank {0} exceeds 4")]
    RankOverflow(usize),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("zero map")]
    ZeroMap,
    #[error("theta characteristic check failed: B^2 is not the canonical class")]
    ThetaCheckFailed,

    #[error("co-length {0} is not supported (maximum 2)")]
    UnsupportedColength(usize),
    #[error("co-length {l} exceeds g - 2 = {max}")]
    ColengthTooLarge { l: usize, max: i64 },
    #[error("index {index} out of range ({len} points)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("quot point {0} is not in Q*")]
    NotInQstar(usize),
    #[error("bundle is not semi-stable")]
    NotSemistable,
    #[error("Frobenius pull-back is semi-stable")]
    NotDestabilized,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("bad degree: {0}")]
    BadDegree(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
