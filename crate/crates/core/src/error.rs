use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("program is recursive: predicates {} depend on each other", .cycle.join(" -> "))]
    Recursion { cycle: Vec<String> },

    #[error("predicate {0} is defined by rules and also has database facts")]
    PredicateConflict(String),

    #[error("predicate {predicate} used with arity {found}, expected {expected}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },

    #[error("duplicate fact {0}")]
    DuplicateFact(String),

    #[error("database fact {0} is not ground")]
    NonGroundFact(String),

    #[error("unknown position {0}")]
    UnknownPosition(String),

    #[error("move {src} -> {dst} has a value combination that cannot occur in a solved game")]
    InconsistentLabels { src: String, dst: String },

    #[error("query game has a drawn position {0}; the game graph is not acyclic")]
    DrawnPosition(String),

    #[error("negation is not supported here: {0}")]
    NegationUnsupported(String),

    #[error("{0} is not derived; run whynot")]
    NotDerived(String),

    #[error("{0} is derived; run why")]
    IsDerived(String),

    #[error("{0} is not defined by any rule")]
    NotIdb(String),
}

/// Coarse classification of [`Error`], used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Validation,
    Derivation,
    Negation,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Syntax { .. } | Error::DuplicateFact(_) | Error::NonGroundFact(_) => {
                ErrorKind::Parse
            }
            Error::Recursion { .. }
            | Error::PredicateConflict(_)
            | Error::ArityMismatch { .. }
            | Error::UnknownPosition(_)
            | Error::NotIdb(_) => ErrorKind::Validation,
            Error::NotDerived(_) | Error::IsDerived(_) => ErrorKind::Derivation,
            Error::NegationUnsupported(_) => ErrorKind::Negation,
            Error::InconsistentLabels { .. } | Error::DrawnPosition(_) => ErrorKind::Internal,
        }
    }
}
