use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or analysing the toolkit's
/// objects. Partiality of transition functions is not an error; these are
/// violations of structural contracts or resource guards.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate transition: {state} --{event}--> {{{first}, {second}}}")]
    DuplicateTransition {
        state: String,
        event: String,
        first: String,
        second: String,
    },

    #[error("unreachable states: {}", .0.join(" "))]
    Unreachable(Vec<String>),

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("identifier `{0}` is used as both a state and an event")]
    NamespaceClash(String),

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("event {0} is not part of the net type")]
    EventNotInType(String),

    #[error("signature or support leaves the net type: {0}")]
    ArityMismatch(String),

    #[error("invalid bound {bound} for {family}")]
    InvalidBound { family: String, bound: u8 },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid separation atom: {0}")]
    InvalidAtom(String),

    #[error("state {0} belongs to more than one component")]
    StateClash(String),

    #[error("reserved connector identifier `{0}` already in use")]
    NameClash(String),

    #[error("component index {index} out of range (components: {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("reachable marking count exceeded the cap of {cap}")]
    ExplosionGuard { cap: usize },

    #[error("event sets differ: {0}")]
    EventSetMismatch(String),

    #[error("input too large for exhaustive search: {0}")]
    SizeGuard(String),

    #[error("variable X{variable} occurs in {count} clauses, expected exactly 3")]
    NotCubic { variable: usize, count: usize },

    #[error("clause {clause} must contain exactly 3 distinct variables")]
    ClauseArity { clause: usize },

    #[error("the given set is not a one-in-three model")]
    NotAModel,

    #[error("unknown fixture catalog `{0}`")]
    UnknownCatalog(String),
}
