use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial in {0} variables; only 2 or 3 are supported")]
    Variables(usize),
    #[error("degree {degree} exceeds the bound {bound}")]
    Degree { degree: u32, bound: u32 },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("principal part does not match {0}")]
    PrincipalPart(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("undefined Ind: {0}")]
    UndefinedInd(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("fixture {name}: {msg}")]
    Fixture { name: String, msg: String },
}
