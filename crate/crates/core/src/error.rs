use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Gauss-Legendre order {0} outside 1..=4096")]
    QuadratureOrder(usize),

    #[error("radius {r} outside [0, {radius}]")]
    OutOfDomain { r: f64, radius: f64 },

    #[error("root scan found {found} of {wanted} positive roots below lambda*R = {ceiling}")]
    RootScan {
        found: usize,
        wanted: usize,
        ceiling: f64,
    },

    #[error("xi = {xi} lies within the pole guard of xi_R = {xi_r}")]
    PoleProximity { xi: f64, xi_r: f64 },

    #[error("xi_tail = {xi_tail} must exceed xi_R = {xi_r}")]
    TailBelowPole { xi_tail: f64, xi_r: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("frequency {0} rad/s is not on the response grid")]
    OffGrid(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("time {t} s needs a frequency step <= {required} rad/s, grid step is {actual}")]
    Aliasing { t: f64, required: f64, actual: f64 },

    #[error("frequency sweep failed at {} frequencies (first: omega = {}: {})", .0.len(), .0[0].0, .0[0].1)]
    Sweep(Vec<(f64, String)>),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
