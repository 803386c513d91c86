use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(usize),
    #[error("GF({0}) failed the {1} axiom")]
    FieldAxiom(usize, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("edges `{0}` and `{1}` join the same pair of vertices")]
    ParallelEdges(String, String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("size bound exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("interpolation: {0}")]
    Interpolation(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
