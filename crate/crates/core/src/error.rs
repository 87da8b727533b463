use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside [0, 1]")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} must be nonempty")]
    Empty { what: &'static str },

    #[error("point index {index} out of range for space with {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("operands live on different spaces")]
    SpaceMismatch,

    #[error("tuple arity {got} does not match expected arity {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("map {map_index} sends tuple {tuple:?} to {coords:?}, outside the box (tolerance {tau_box})")]
    MapRange {
        map_index: usize,
        tuple: Vec<usize>,
        coords: Vec<f64>,
        tau_box: f64,
    },

    #[error("coordinate {coords:?} lies outside the box (tolerance {tau_box})")]
    OutOfBox { coords: Vec<f64>, tau_box: f64 },

    #[error("group closure exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("H is not a subgroup of G")]
    NotSubgroup,

    #[error("permutation {perm:?} is not a valid permutation of 1..={arity}")]
    BadPermutation { perm: Vec<usize>, arity: usize },

    #[error("metric table is invalid: {reason}")]
    BadMetric { reason: String },

    #[error("t-norm {norm} is not closed on the level lattice")]
    NotLatticeClosed { norm: &'static str },

    #[error("oracle size cap exceeded: {what}")]
    SizeCap { what: String },

    #[error("no convergence after {iterations} iterations (last distance {last_distance})")]
    NoConvergence { iterations: usize, last_distance: f64 },

    #[error("operation requires a 2D grid space")]
    NotTwoDimensional,

    #[error("operation requires a grid space")]
    NotAGrid,

    #[error("config error:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
