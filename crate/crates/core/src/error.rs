use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("gate acts twice on qubit {0}")]
    DuplicateQubit(usize),

    #[error("operator is not Hermitian")]
    NonHermitian,

    #[error("generators {0} and {1} anticommute")]
    Anticommuting(usize, usize),

    #[error("generator {0} is dependent on the preceding ones")]
    Dependent(usize),

    #[error("the generated group contains -I")]
    MinusIdentity,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown code `{0}`")]
    UnknownCode(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("size {0} is too small")]
    SizeTooSmall(usize),

    #[error("probability {0} out of range")]
    ProbabilityOutOfRange(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unsupported noise model: {0}")]
    UnsupportedModel(String),

    #[error("invalid syndrome: {0}")]
    InvalidSyndrome(String),

    #[error("odd number of matching nodes ({0})")]
    OddNodeCount(usize),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("parity checks are not orthogonal: H_x row {0} and H_z row {1}")]
    NotOrthogonal(usize, usize),

    #[error("MacWilliams transform produced a non-integer coefficient")]
    NonIntegerEnumerator,

    #[error("distillation does not converge for p = {0}")]
    NonConvergent(f64),

    #[error("defect error: {0}")]
    Defect(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
