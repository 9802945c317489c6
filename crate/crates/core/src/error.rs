use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Grid sizes, tolerances and other configuration knobs.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("evaluation point |lambda| = {modulus} is closer than {rim} to the unit circle")]
    EvaluationRim { modulus: f64, rim: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// `h` fails one of the closed-form class invariants.
    #[error("invalid dual map parameters: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// The boundary symbol of a constrained component is not real.
    #[error("class violation: component {component} has imaginary boundary symbol {residual:e}")]
    ClassViolation { component: usize, residual: f64 },

    #[error("empty support set at node {node} (theta = {theta})")]
    EmptySupport { node: usize, theta: f64 },

    #[error("support set is not a singleton for direction {0}")]
    NonSingletonSupport(String),

    #[error("atom direction {0:?} is not in the cone S_D")]
    Cone(Vec<f64>),

    #[error("precondition failed: {0}")]
    Precondition(String),
}
