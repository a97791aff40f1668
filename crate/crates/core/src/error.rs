use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("handle not found: {0}")]
    HandleNotFound(String),
    #[error("cannot slide handle {0} over itself")]
    SelfSlide(String),
    #[error("word of {handle} is not a single letter of {generator}")]
    NotCancellable { generator: String, handle: String },
    #[error("handle {0} is not a split 0-framed unknot")]
    NotSplit(String),
    #[error("handle {0} cannot be blown down")]
    NotBlowDownable(String),
    #[error("bad linking data: {0}")]
    BadLinking(String),
    #[error("cork pair ({dotted}, {handle}) is not algebraically separated: {reason}")]
    NotSeparated { dotted: String, handle: String, reason: String },
    #[error("datum does not carry wheel family structure")]
    NotWheelFamily,
    #[error("index {index} out of range for n = {n}")]
    BadIndex { index: i64, n: usize },
    #[error("sequence length {got} does not match n = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("handle {0} already exists")]
    DuplicateHandle(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("datum has {0} 3-handles; chain complexes only model 0-, 1- and 2-handles")]
    UnsupportedThreeHandles(u32),
    #[error("isomorphism search budget exceeded: {handles} handles > {bound}")]
    SearchBudgetExceeded { handles: usize, bound: usize },
    #[error("hash mismatch at step {step}: expected {expected}, found {found}")]
    HashMismatch { step: usize, expected: String, found: String },
    #[error("data file missing: {0}")]
    DataFileMissing(String),
    #[error("front is malformed: {0}")]
    MalformedFront(String),
    #[error("odd cusp imbalance on component {0}")]
    OddCuspImbalance(String),
    #[error("correspondence incomplete: no front component for 2-handle {0}")]
    CorrespondenceIncomplete(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
