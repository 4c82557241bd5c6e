use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter 0 is not a generator")]
    ZeroLetter,

    #[error("letter {letter} is outside the generators of rank {rank}")]
    LetterOutOfRange { letter: i32, rank: usize },

    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),

    #[error("invalid token '{0}' in word")]
    BadToken(String),

    #[error("generator subset must be non-empty")]
    EmptySubset,

    #[error("cannot draw letters from an empty alphabet")]
    EmptyAlphabet,

    #[error("letter {letter} of {side} lies outside its subgroup")]
    NotInSubgroup { letter: i32, side: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
