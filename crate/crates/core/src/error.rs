use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty matrix")]
    Empty,
    #[error("row {row} has {len} entries, expected {mu}")]
    NotSquare { row: usize, len: usize, mu: usize },
    #[error("symmetry violated at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("diagonal entry {i} is {value}, expected -2")]
    Diagonal { i: usize, value: i64 },
    #[error("cycle index {index} out of range for mu={mu}")]
    IndexOutOfRange { index: usize, mu: usize },
    #[error("basis change needs two distinct cycles, got {index} twice")]
    SameCycle { index: usize },
    #[error("substitution on cycles {i},{j} is not an isometry (self-intersection becomes {diagonal})")]
    NotIsometric { i: usize, j: usize, diagonal: i64 },
    #[error("matrix has size {matrix} but real string has length {real_string}")]
    DimensionMismatch { matrix: usize, real_string: usize },
    #[error("not a permutation")]
    NotPermutation,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
}

/// Rejection of a flip, naming the rule that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("flip {flip} is not applicable: {rule}")]
    NotApplicable { flip: String, rule: &'static str },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("state is invalid: {0}")]
    Invalid(String),
    #[error("state is not canonical")]
    NotCanonical,
    #[error("operation needs a {expected} state, got {got}")]
    WrongClass { expected: &'static str, got: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("state budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("seed {index} is invalid: {reason}")]
    BadSeed { index: usize, reason: String },
    #[error("seeds of different classes: {0} and {1}")]
    MixedClasses(String, String),
    #[error("flip engine: {0}")]
    Flip(#[from] FlipError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("line {line}, field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },
    #[error("invariant `{invariant}` violated: {detail}")]
    Invalid { invariant: &'static str, detail: String },
    #[error("unknown builtin seed `{0}`")]
    Unknown(String),
    #[error("builtin seed `{0}` is a placeholder; supply a seed file")]
    Placeholder(String),
    #[error("{0}")]
    Io(String),
    #[error("JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("malformed predicate: {0}")]
    Parse(String),
    #[error("invalid predicate: {0}")]
    Invalid(String),
    #[error("no homology index is consistent with counts {0:?}")]
    Inconsistent(Vec<usize>),
}
