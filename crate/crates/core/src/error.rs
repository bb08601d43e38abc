use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constant term {re}{im:+}i lies on the branch cut (-inf, 0]")]
    BranchCut { re: f64, im: f64 },

    #[error("not zero-free on |z| = {radius}: winding number {winding}, min modulus {min_modulus:e}")]
    NotAMember {
        radius: f64,
        winding: i64,
        min_modulus: f64,
    },

    #[error("sup norm {sup_norm} on |z| = {radius} is not below 1")]
    OutOfBall { radius: f64, sup_norm: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid Moebius map: {0}")]
    InvalidMap(String),

    #[error("density vanishes at {re}{im:+}i")]
    SingularPoint { re: f64, im: f64 },

    #[error("shape precondition violated: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
