use thiserror::Error;

use crate::sqclass::FieldDesc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDesc, FieldDesc),
    #[error("square class {0} is a unit class (no Laurent variable occurs)")]
    UnitClass(String),
    #[error("form is isotropic: {0}")]
    IsotropicInput(String),
    #[error("not a subform: {0}")]
    NotASubform(String),
    #[error("orthogonal sum of the split forms is isotropic")]
    IsotropicSum,
    #[error("variable index {index} out of range 1..={nvars}")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("residue form with respect to t{0} is hyperbolic")]
    HyperbolicResidue(usize),
    #[error("cannot adjoin the square root of a square")]
    SquareClassIsOne,
    #[error("form does not lie in I^{0}")]
    NotInIdeal(u32),
    #[error("no certificate with at most {cap} terms")]
    DepthCapExceeded { cap: usize },
    #[error("search budget of {budget} nodes exhausted at depth {depth}")]
    SearchBudgetExceeded { budget: u64, depth: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable t{index} (field has {nvars} variables)")]
    UnknownVariable { index: usize, nvars: usize },
    #[error("need at least {needed} variables, field has {have}")]
    InsufficientVariables { needed: usize, have: usize },
    #[error("dimension {0} is odd")]
    OddDimension(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
