//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by model construction, evaluation and the solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A radial coordinate fell outside the well `[0, a]`.
    #[error("r = {r} lies outside the well domain [0, {radius}]")]
    OutsideDomain { r: f64, radius: f64 },

    /// Interpolation was requested outside the stored sample grid.
    #[error("r = {r} lies outside the sampled grid [{lo}, {hi}]")]
    OutsideGrid { r: f64, lo: f64, hi: f64 },

    /// The spherical Neumann function was evaluated at the origin.
    #[error("n_{l}(x) diverges as x^-({l}+1) for x -> 0; x must be positive")]
    NeumannAtOrigin { l: u32 },

    /// A mode whose squared modulus is not integrable over the well.
    #[error("mode is not square-integrable: |chi|^2 grows as r^-{} near the origin", 2 * l)]
    NonNormalizable { l: u32 },

    /// Operations pairing two modes require equal angular momenta.
    #[error("angular momentum mismatch: l = {l1} vs l = {l2}")]
    ChannelMismatch { l1: u32, l2: u32 },

    /// The cosine-type boundary family exists only in the s-wave channel.
    #[error(
        "the huang-thomann family requires l = 0: for l = {l} the Neumann radial part is not square-integrable"
    )]
    FamilyRequiresSWave { l: u32 },

    /// The potential grows faster than 1/r towards the origin.
    #[error("inadmissible potential: r*V(r) is unbounded near the origin ({detail})")]
    InadmissiblePotential { detail: String },

    /// Adaptive quadrature failed to settle within its depth budget.
    #[error("quadrature did not converge: last two estimates {previous} and {latest}")]
    QuadratureNonConvergence { previous: f64, latest: f64 },

    /// The eigenvalue scan ran out of bracket before finding every level.
    #[error(
        "eigenvalue bracket exhausted: found {found} of {requested} levels for k in [{k_lo}, {k_hi}]"
    )]
    BracketExhausted {
        k_lo: f64,
        k_hi: f64,
        found: usize,
        requested: usize,
    },

    /// The adaptive integrator could not take a stable step.
    #[error("integrator step underflow near r = {r}: minimum stable step is {h_min}")]
    StepUnderflow { r: f64, h_min: f64 },

    /// A root bracket did not straddle a sign change.
    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    /// Construction-time validation failure (grids, coefficients, configs).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
