//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Everything that can go wrong while building or running the machinery.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The generating relation closes into a cycle, violating antisymmetry.
    #[error("order relation is cyclic: {a} <= {b} and {b} <= {a}")]
    Cycle { a: String, b: String },

    /// A name was used that the poset does not declare.
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    /// Element list is unusable (empty name, duplicate, empty list).
    #[error("invalid element list: {0}")]
    InvalidElements(String),

    /// Subset enumeration would exceed the configured limit.
    #[error("codomain has {size} elements, above the subset-enumeration limit {limit}")]
    SubsetExplosion { size: usize, limit: usize },

    /// Operation tables of different arity were compared.
    #[error("cannot compare operation tables of different arity")]
    ArityMismatch,

    /// A decomposition was requested on a system that fails its precondition.
    #[error("axiom precondition failed for system {system}: {detail}")]
    AxiomPrecondition { system: String, detail: String },

    /// The layered strategy needs a greatest (dual: least) codomain element.
    #[error("codomain has no {0} element")]
    NoExtremeElement(&'static str),

    /// The layered strategy and rank-function checks need a constant null.
    #[error("null operation is not constant; rank functions are undefined")]
    NonConstantNull,

    /// The witness promised by the dissociation axioms is missing, which
    /// signals a defective operation table.
    #[error("no witness z with dissociate({have}, z) = {want} and null({have}) below z, at element `{at}`")]
    WitnessNotFound {
        at: String,
        have: String,
        want: String,
    },

    /// Padding target is shorter than the form.
    #[error("form already has {len} components, more than the requested {target}")]
    TooManyComponents { len: usize, target: usize },

    /// A bit-vector length does not match the declared arity.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Index out of range (rank index, state index, ...).
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// A real argument escaped its domain.
    #[error("argument {name}={value} outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The eight probabilities are not a distribution.
    #[error("invalid characteristic: {0}")]
    InvalidCharacteristic(String),

    /// No distribution exists with the requested marginals.
    #[error("no characteristic realizes marginals ({x1}, {x2}, {x3})")]
    InfeasibleMarginals { x1: f64, x2: f64, x3: f64 },

    /// The supplied bijection does not reverse the order.
    #[error("mapping is not a dual isomorphism: {0}")]
    NotDualIsomorphism(String),

    /// Two values that must live in the same poset do not.
    #[error("poset mismatch: {0}")]
    PosetMismatch(String),

    /// Operation table is not total or refers to out-of-range values.
    #[error("invalid operation table: {0}")]
    InvalidTable(String),

    /// Truth-table arity above the configured limit.
    #[error("arity {arity} above limit {limit}")]
    ArityLimit { arity: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
