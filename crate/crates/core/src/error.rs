use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonPositiveFrequency: omega must be > 0 (got {0})")]
    NonPositiveFrequency(f64),

    #[error("NonFinite: parameter `{0}` is NaN or infinite")]
    NonFinite(&'static str),

    /// `x` lies within the pole margin of `x = nω`.
    #[error("PoleAt({0}): spectral point within the pole margin of x = {0}ω")]
    PoleAt(usize),

    #[error("ZeroCoupling: the G-function requires g > 0")]
    ZeroCoupling,

    /// The series tail did not settle within `max_terms`. `best` carries the
    /// last partial sums `(G+, G−)` when they are available.
    #[error("TruncationNotConverged after {terms_used} terms (tail estimate {tail_estimate:e})")]
    TruncationNotConverged {
        terms_used: usize,
        tail_estimate: f64,
        best: Option<(f64, f64)>,
    },

    #[error("UnsupportedCoupling: g/ω = {ratio} is outside [{min}, {max}]; use the oracle path")]
    UnsupportedCoupling { ratio: f64, min: f64, max: f64 },

    /// Δ = 0: every level sits on a pole, the spectrum is the displaced oscillator.
    #[error("ZeroSplitting: Δ = 0 bypasses the G-function; the spectrum is mω − g²/ω (doubly degenerate)")]
    ZeroSplitting,

    #[error("LostBracket at x = {x}: {source}")]
    LostBracket { x: f64, source: Box<Error> },

    #[error("NoConvergence: eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("NotConverged: oracle truncation shift {delta:e} >= {tolerance:e} at m_max = {m_max}")]
    NotConverged { delta: f64, tolerance: f64, m_max: usize },

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}
