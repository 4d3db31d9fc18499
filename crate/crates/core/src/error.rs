use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable family `{name}` at {pos}")]
    UnknownFamily { pos: usize, name: String },
    #[error("groebner budget exceeded: {0}")]
    Budget(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("enumeration bound insufficient: {0}")]
    BoundInsufficient(String),
    #[error("stabilization cap {0} exceeded")]
    CapExceeded(u32),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}
