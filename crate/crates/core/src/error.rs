use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("profile is not strictly increasing: b'({x}) = {slope}")]
    NonMonotone { x: f64, slope: f64 },
    #[error("power exponent {0} not in {{1}} or [2, inf)")]
    BadExponent(f64),
    #[error("x = {x} outside [0, {end}]")]
    OutOfDomain { x: f64, end: f64 },
    #[error("quadrature did not converge on [{a}, {b}] after {subdivisions} subdivisions (error estimate {error:e})")]
    NoConvergence {
        a: f64,
        b: f64,
        subdivisions: usize,
        error: f64,
    },
    #[error("profile not admissible for problem {problem}: margin {margin:e} at x = {x}")]
    NotAdmissible { problem: String, margin: f64, x: f64 },
    #[error("test function support {0} leaves the window")]
    SupportOutsideWindow(String),
    #[error("state is not hyperbolic: c^2 = {0:e}")]
    NonHyperbolic(f64),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("profile syntax: {0}")]
    ProfileSyntax(String),
}

pub type Result<T> = std::result::Result<T, Error>;
