//! Error type shared by all solver modules.

/// Crate-wide error enumeration.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid does not match geometry: {0}")]
    GridMismatch(String),

    #[error("iteration failed to converge for eigenvalue index {index}")]
    NonConvergence { index: usize },

    #[error("shift-invert factorization singular at shift {shift}")]
    FactorizationSingular { shift: f64 },

    #[error("window [{lo}, {hi}] does not lie inside a bulk spectral gap")]
    WindowNotInGap { lo: f64, hi: f64 },

    #[error("no edge states found in window [{lo}, {hi}]")]
    NoEdgeStatesInWindow { lo: f64, hi: f64 },

    #[error("flux value {phi_quanta} (flux quanta) outside the tabulated range")]
    OutOfTable { phi_quanta: f64 },

    #[error("cutoff violates sup|jV| <= epsilon: sup = {sup}, epsilon = {epsilon}")]
    InvalidCutoff { sup: f64, epsilon: f64 },

    #[error("edge potential derivative vanishes on supp(1-j); wall degenerate at y = {y}")]
    DegenerateWall { y: f64 },

    #[error("no positive disorder threshold: alpha_tilde = {alpha_tilde}")]
    NoPositiveThreshold { alpha_tilde: f64 },

    #[error("window energy {energy} is at or above the wall height {height}")]
    WindowAboveWall { energy: f64, height: f64 },

    #[error("operation requires {expected} geometry")]
    WrongGeometry { expected: &'static str },

    #[error("resolvent kernel evaluated at coincident points")]
    CoincidentPoints,

    #[error("energy {energy} lies on a Landau level")]
    OnLandauLevel { energy: f64 },

    #[error("decay fit range insufficient: {0}")]
    InsufficientDecayRange(String),

    #[error("fitted decay scale xi = {xi} outside [{lo}, {hi}]")]
    DecayScaleOutOfRange { xi: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
