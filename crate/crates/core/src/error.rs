use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("symbol '{0}' is not in the alphabet")]
    UnknownSymbol(char),

    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("alphabet contains duplicate symbol '{0}'")]
    DuplicateSymbol(char),

    #[error("operands are defined over different alphabets")]
    AlphabetMismatch,

    #[error("state budget of {limit} exceeded")]
    StateBudget { limit: usize },

    #[error("output budget of {limit} words exceeded")]
    OutputBudget { limit: usize },

    #[error("size cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("the word must be non-empty")]
    EmptyWord,

    #[error("'{small}' is not an infix of '{large}'")]
    NotAnInfix { small: String, large: String },

    #[error("ordinal product exceeds degree 3")]
    DegreeOverflow,

    #[error("undefined nonterminal '{0}'")]
    UndefinedNonterminal(String),

    #[error("marker symbol '{0}' already occurs in the alphabet")]
    MarkerPresent(char),

    #[error("malformed automaton: {0}")]
    Malformed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("could not decide: {0}")]
    Undetermined(String),

    #[error("budget of {limit} exhausted before {what}")]
    Exhausted { what: &'static str, limit: usize },
}
