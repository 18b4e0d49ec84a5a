use thiserror::Error;

/// Crate-wide error type. Variants are grouped by where they arise:
/// input validation (documents, automaton axioms) versus computation
/// (caps, convergence, temperature guards).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("edge refers to undeclared vertex `{0}`")]
    DanglingVertexRef(String),
    #[error("vertex `{0}` is a source (no edges range there)")]
    SourceVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex id `{0}` reused as a proper automaton state")]
    IdClash(String),
    #[error("axiom (A1) violated for state `{state}`: {detail}")]
    AxiomA1 { state: String, detail: String },
    #[error("axiom (A2) violated for state `{state}` on edge `{edge}`: {detail}")]
    AxiomA2 {
        state: String,
        edge: String,
        detail: String,
    },
    #[error("codomain mismatch for state `{state}` on edge `{edge}`: {detail}")]
    CodomainMismatch {
        state: String,
        edge: String,
        detail: String,
    },
    #[error("missing transition for state `{state}` on edge `{edge}`")]
    MissingTransition { state: String, edge: String },
    #[error("transition declared for state `{state}` on edge `{edge}` outside its domain")]
    UnexpectedTransition { state: String, edge: String },
    #[error("invalid matrices: {0}")]
    InvalidMatrices(String),
    #[error("Exel-Pardo axiom `{axiom}` violated at {witness}")]
    EpAxiom { axiom: String, witness: String },
    #[error("invalid spanning element: {0}")]
    InvalidSpanning(String),
    #[error("invalid moment table: {0}")]
    InvalidMoments(String),
    #[error("unknown letter `{0}` in word")]
    UnknownLetter(String),
    #[error("word is not composable: {0}")]
    NonComposableWord(String),

    #[error("elements not composable: {0}")]
    NonComposable(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("closure cap of {0} states exceeded")]
    ClosureCapExceeded(usize),
    #[error("element is not isotropy: {0}")]
    NotIsotropy(String),
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("Perron-Frobenius vector not constant on an orbit: {0}")]
    ConstancyViolated(String),
    #[error("orbit block row sums disagree: {0}")]
    RowSumViolation(String),
    #[error("missing evaluation context: {0}")]
    MissingContext(String),
    #[error("generator is not isotropy at the component base: {0}")]
    NotIsotropyGenerator(String),
    #[error("discrete log not found within |k| <= {0}")]
    DiscreteLogNotFound(i64),
    #[error("beta {beta} is at or below the critical value ln rho = {critical}")]
    BetaAtOrBelowCritical { beta: f64, critical: f64 },
    #[error("refused: beta {beta} is below the critical value ln rho = {critical}")]
    BelowCriticalRefused { beta: f64, critical: f64 },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("action does not contract within caps: {0}")]
    NotContractingWithinCap(String),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("vector fails its normalisation check: {0}")]
    NotNormalized(String),
    #[error("no separation depth found within cap {0}")]
    NoSeparationDepthFound(usize),
    #[error("integer overflow in {0}")]
    NumericOverflow(String),
}

impl Error {
    /// CLI exit class: 1 for input/validation failures, 2 for computation errors.
    pub fn exit_class(&self) -> i32 {
        use Error::*;
        match self {
            Parse(_) | DuplicateId(_) | DanglingVertexRef(_) | SourceVertex(_)
            | UnknownVertex(_) | UnknownEdge(_) | IdClash(_) | AxiomA1 { .. }
            | AxiomA2 { .. } | CodomainMismatch { .. } | MissingTransition { .. }
            | UnexpectedTransition { .. } | InvalidMatrices(_) | EpAxiom { .. }
            | InvalidSpanning(_) | InvalidMoments(_) | UnknownLetter(_)
            | NonComposableWord(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
