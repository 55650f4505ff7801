use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expansion points differ: {left} vs {right}")]
    PointMismatch { left: f64, right: f64 },

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },

    #[error("{function} is not analytic at {value}")]
    Domain { function: String, value: f64 },

    #[error("division by an expression whose value is zero")]
    DivisionByZero,

    #[error("syntax error at byte offset {offset}: expected {}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
    },

    #[error("unknown function `{name}` at byte offset {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("exponent at byte offset {offset} must be a numeric literal")]
    NonLiteralExponent { offset: usize },

    #[error("at order k = {k}: {source}")]
    AtOrder {
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("in continuation step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn at_order(self, k: usize) -> Self {
        Error::AtOrder {
            k,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }

    /// The innermost error, with order/step annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtOrder { source, .. } | Error::AtStep { source, .. } => source.root(),
            other => other,
        }
    }
}
