use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("label {label} is outside 1..={n}")]
    LabelOutOfRange { label: u32, n: u32 },

    #[error("a cactus word needs at least one lobe")]
    EmptyWord,

    #[error("word {word:?} is not an admissible {shape} cactus word on {n} lobes")]
    Inadmissible { word: Vec<u8>, shape: &'static str, n: u8 },

    #[error("lobe count {n} is outside the supported range 1..={max}")]
    LobeCount { n: usize, max: usize },

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error(
        "boundary does not square to zero: cell {cell} (degree {degree}) reaches {face} with coefficient {coefficient}"
    )]
    BoundarySquare {
        degree: usize,
        cell: String,
        face: String,
        coefficient: i64,
    },

    #[error("matrix shape mismatch in degree {degree}: {detail}")]
    Shape { degree: usize, detail: String },

    #[error("complex is not regular: {0}")]
    NotRegular(String),

    #[error("group action is not cellular: {0}")]
    NotCellular(String),

    #[error("action still fails the regularity condition after {rounds} subdivision rounds: {detail}")]
    RegularityFailed { rounds: usize, detail: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("the fixed-point set of Z/{p} on C_{n}(C) is empty")]
    EmptyFixedPoints { n: usize, p: u64 },

    #[error("invalid lens data: {0}")]
    Lens(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("audit failed: {0}")]
    Audit(String),
}
