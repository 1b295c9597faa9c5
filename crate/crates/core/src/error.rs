use thiserror::Error;

/// Every failure the library can report.
///
/// Variant names are part of the command-line contract: the `zs` binary
/// prints [`Error::name`] on stderr, and scripts match on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of zeta at s = 1")]
    PoleAtOne,
    #[error("pole of the completed zeta function at s = 0")]
    PoleAtZero,
    #[error("tolerance {tol:e} not reachable within {max_terms} terms")]
    ToleranceUnreachable { tol: f64, max_terms: usize },
    #[error("Euler factor for p = {p} is singular")]
    FactorSingular { p: u64 },
    #[error("Hurwitz shift {0} outside (0, 1]")]
    BadAlpha(f64),
    #[error("non-finite value produced: {0}")]
    NonFinite(String),
    #[error("invalid Dirichlet character: {0}")]
    InvalidCharacter(String),
    #[error("truncation {x} lies below the first atom")]
    EmptyTruncation { x: f64 },
    #[error("atoms are only known up to {covered}, but {needed} is required")]
    TruncationTooShort { needed: f64, covered: f64 },
    #[error("pole of the closed-form zeta function at {re}{im:+}i")]
    PoleHit { re: f64, im: f64 },
    #[error("dimension estimate needs at least {need} atoms, got {have}")]
    InsufficientAtoms { have: usize, need: usize },
    #[error("unsupported string kind: {0}")]
    UnsupportedKind(String),
    #[error("hypothesis violated: {0}")]
    AssumptionViolated(String),
    #[error("contour residue {quadrature:e} disagrees with closed form {symbolic:e}")]
    ResidueCheckFailed { symbolic: f64, quadrature: f64 },
    #[error("tail bound requested with c = {c} <= 1, where the series diverges")]
    DivergentTail { c: f64 },
    #[error("operator function is unbounded on the spectral segment at c = {c}")]
    UnboundedOnSegment { c: f64 },
    #[error("grid window [{lo}, {hi}] does not contain [{need_lo}, {need_hi}]")]
    WindowTooSmall {
        lo: f64,
        hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("height profile jumps by {jump} between adjacent samples (limit {limit})")]
    ProfileDiscontinuous { jump: f64, limit: f64 },
    #[error("box reaches distance {reach} from the expansion point, beyond the radius {radius}")]
    RadiusTooSmall { reach: f64, radius: f64 },
    #[error("target vanishes on the evaluation grid (min |g| = {min_abs:e})")]
    TargetVanishes { min_abs: f64 },
    #[error("target cannot be evaluated off its sample grid")]
    TargetNotEvaluable,
    #[error("strip [{lo}, {hi}] is outside the half-plane of almost periodicity")]
    StripOutsideHalfPlane { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::PoleAtOne => "PoleAtOne",
            Error::PoleAtZero => "PoleAtZero",
            Error::ToleranceUnreachable { .. } => "ToleranceUnreachable",
            Error::FactorSingular { .. } => "FactorSingular",
            Error::BadAlpha(_) => "BadAlpha",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidCharacter(_) => "InvalidCharacter",
            Error::EmptyTruncation { .. } => "EmptyTruncation",
            Error::TruncationTooShort { .. } => "TruncationTooShort",
            Error::PoleHit { .. } => "PoleHit",
            Error::InsufficientAtoms { .. } => "InsufficientAtoms",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::AssumptionViolated(_) => "AssumptionViolated",
            Error::ResidueCheckFailed { .. } => "ResidueCheckFailed",
            Error::DivergentTail { .. } => "DivergentTail",
            Error::UnboundedOnSegment { .. } => "UnboundedOnSegment",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidBox(_) => "InvalidBox",
            Error::ProfileDiscontinuous { .. } => "ProfileDiscontinuous",
            Error::RadiusTooSmall { .. } => "RadiusTooSmall",
            Error::TargetVanishes { .. } => "TargetVanishes",
            Error::TargetNotEvaluable => "TargetNotEvaluable",
            Error::StripOutsideHalfPlane { .. } => "StripOutsideHalfPlane",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "Io",
        }
    }

    /// Errors caused by malformed input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Io(_)
                | Error::InvalidCharacter(_)
                | Error::InvalidGrid(_)
                | Error::InvalidBox(_)
                | Error::BadAlpha(_)
        )
    }

    pub fn is_guard_rejection(&self) -> bool {
        matches!(self, Error::TargetVanishes { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
