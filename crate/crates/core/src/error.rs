use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("n < 2: a game needs at least two players (got {0})")]
    TooFewPlayers(usize),

    #[error("duplicate strategy name `{name}` for player {player}")]
    DuplicateStrategy { player: usize, name: String },

    #[error("missing payoff entry for profile ({0})")]
    MissingPayoff(String),

    #[error("duplicate payoff entry for profile ({0})")]
    DuplicatePayoff(String),

    #[error("unknown strategy `{name}` for player {player}")]
    UnknownStrategy { player: usize, name: String },

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("player index {0} out of range")]
    PlayerOutOfRange(usize),

    #[error("strategy index {strategy} out of range for player {player}")]
    StrategyOutOfRange { player: usize, strategy: usize },

    #[error("objects belong to different games")]
    GameMismatch,

    #[error("empty sequence of restrictions")]
    EmptySequence,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("LP dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty support for mixed dominance")]
    EmptySupport,

    #[error("unsupported belief class: {0}")]
    UnsupportedBeliefClass(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("enumeration budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("non-monotonic property `{name}` for player {player}")]
    NonMonotonic { name: String, player: usize },

    #[error("model has no possibility correspondences")]
    MissingCorrespondences,

    #[error("free variable `{0}` has no assignment")]
    Unassigned(String),

    #[error("not an optimality condition: {0}")]
    NotOptimalityCondition(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model is not a standard model")]
    NotStandard,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("profile length {got} does not match player count {expected}")]
    ProfileLength { expected: usize, got: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
