use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("relation is malformed: {0}")]
    MalformedRelation(String),
    #[error("normal forms did not stabilise below path length {0}")]
    NotFiniteDimensional(usize),
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("element does not belong to the module")]
    ElementNotInModule,
    #[error("subspace is not a submodule")]
    NotASubmodule,
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("search over the hom space was inconclusive")]
    Undecided,
    #[error("operation unsupported over this field: {0}")]
    UnsupportedField(String),
    #[error("vertices {0} and {1} are not comparable")]
    NotComparable(u32, u32),
    #[error("path p({0},{1},{2}) vanishes")]
    ZeroPath(u32, u32, u32),
    #[error("path basis fails at P({0})_{1}")]
    BasisFailure(u32, u32),
    #[error("enumeration needs a finite field")]
    InfiniteFieldUnsupported,
    #[error("more than {0} submodules")]
    BudgetExceeded(usize),
    #[error("support is not a down-set")]
    NotADownSet,
    #[error("factor algebra A({0}) is not 1-quasi-hereditary")]
    FactorNotOneQH(u32),
    #[error("module for vertex {0} is not local")]
    NotLocal(u32),
    #[error("sequence is not a linear extension")]
    SequenceNotAdmissible,
    #[error("no arrow representative for {0}")]
    ArrowChoiceFailed(String),
    #[error("preset data missing: {0}")]
    PresetDataMissing(String),
    #[error("invalid preset parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
