use thiserror::Error;

/// Errors surfaced by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator vanishes at the evaluation point")]
    DenominatorZero,
    #[error("values from different quadratic extensions (sqrt {0} and sqrt {1}) were mixed")]
    MixedExtensions(String, String),
    #[error("polynomial has a zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("matrix is not Metzler")]
    NotMetzler,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("all coefficients of the quadratic are zero")]
    AllZero,
    #[error("sign of {0} cannot be decided exactly")]
    UndecidableSign(String),
    #[error("cannot read a reaction rate from term {0}")]
    UnparseableRate(String),
    #[error("reaction for rate {0} would need a negative product coefficient; the model is not a positive ODE")]
    NotPositive(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate declaration of `{0}`")]
    DuplicateVariable(String),
    #[error("unknown built-in model `{0}`")]
    UnknownModel(String),
    #[error("parameter `{0}` has no value")]
    MissingParameter(String),
    #[error("the restricted system on face {0} vanishes identically")]
    DegenerateFace(String),
    #[error("equilibrium `{0}` does not exist in this model variant")]
    NotApplicable(String),
    #[error("siphon {0} is not contained in the face of the equilibrium")]
    NotOnFace(String),
    #[error("splitting is not regular: {0}")]
    InvalidSplitting(String),
    #[error("matrix A is singular")]
    SingularA,
    #[error("({0}, {1}) is not a cover of the siphon lattice")]
    BadCover(String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
