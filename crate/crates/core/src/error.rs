use thiserror::Error;

use crate::graph::{Color, Vertex};

/// Errors produced across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PottsError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} cannot be used as a root: it is pinned or out of range")]
    InvalidRoot { vertex: Vertex },

    #[error("color {color} is outside 1..={q}")]
    InvalidColor { color: Color, q: usize },

    #[error("graph has maximum degree {max_degree}, which exceeds the bound {delta}")]
    DegreeExceeded { max_degree: usize, delta: usize },

    #[error("enumeration needs {required} colorings but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("partition function vanishes at this weight; the Gibbs measure is undefined")]
    UndefinedMeasure,

    #[error("restricted partition function for color {color} vanishes; log-ratio undefined")]
    ZeroRatio { color: Color },

    #[error("ratio {re} + {im}i lies on the branch cut of the principal logarithm")]
    Branch { re: f64, im: f64 },

    #[error("P or Q vanishes at this point")]
    Pole,

    #[error("parameter outside the domain of the bound: {0}")]
    Domain(String),

    #[error("no simple {d}-regular graph on {n} vertices")]
    InfeasibleRegular { n: usize, d: usize },

    #[error("unknown bound id `{0}`")]
    UnknownBound(String),

    #[error("step length {step} is not below the root-free radius {radius}")]
    StepTooLarge { step: f64, radius: f64 },

    #[error("cannot interpolate: {0}")]
    CannotInterpolate(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, PottsError>;
