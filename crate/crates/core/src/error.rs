use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is singular or has non-positive determinant ({det:.3e})")]
    SingularInput { det: f64 },
    #[error("rotation angle {angle} too close to pi for a unique logarithm")]
    AngleNearPi { angle: f64 },
    #[error("cannot build a frame for r = -e1")]
    DegenerateAxis,
    #[error("relative rotation between nodes {index} and {} is {angle:.4} rad (> pi/2)", index + 1)]
    FrameJump { index: usize, angle: f64 },
    #[error("boundary condition violated by {violation:.3e}")]
    BcViolation { violation: f64 },
    #[error("no convergence after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    NoConvergence { iterations: usize, grad_norm: f64 },
    #[error("boundary condition {0} is not supported here")]
    UnsupportedBc(&'static str),
    #[error("degenerate case: {0}")]
    DegenerateCase(String),
    #[error("root of g2 not bracketed for a = {a}")]
    RootNotBracketed { a: f64 },
    #[error("smallest eigenvalue has the same sign at both ends of [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("helix polynomial has no real root (discriminant {discriminant:.3e})")]
    NoRealRoot { discriminant: f64 },
    #[error("force must be nonzero")]
    ZeroForce,
    #[error("delta = {0} outside [1e-8, 0.5]")]
    InvalidDelta(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
