use thiserror::Error;

/// Errors raised by the solvers. The variant name is what the CLI prints on
/// stderr for numerical failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument |z| = {0} exceeds the supported Airy domain")]
    DomainTooLarge(f64),
    #[error("Airy function overflow at z = {0}")]
    Overflow(String),
    #[error("could not track the Airy phase branch to z = {0}")]
    BranchTrackingFailure(String),

    #[error("altitude must be positive, got {0} m")]
    NonPositiveAltitude(f64),
    #[error("tabulated potential has {0} rows, at least 100 are required")]
    TableTooSparse(usize),
    #[error("tabulated potential, row {row}: {msg}")]
    TableParse { row: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stencil for the Schwarzian leaves the map domain at {0}")]
    NearBoundary(f64),
    #[error("more than one turning point in the solver window")]
    MultipleTurningPoints,
    #[error("local expansion about the turning point failed: {0}")]
    SingularityExpansionFailure(String),
    #[error("badlands function undefined at a turning point (z = {0})")]
    AtTurningPoint(f64),
    #[error("coordinate {0} is outside the mapped domain")]
    OutsideMappedDomain(f64),

    #[error("no region with negligible badlands function found near the surface")]
    NoWkbWindow,
    #[error("ODE integration failed: {0}")]
    StiffIntegration(String),

    #[error("effective-range model gives |r| = {abs_r} > 1 at K = {k}")]
    ModelNonPhysical { k: f64, abs_r: f64 },
    #[error("r = 1 cannot be inverted")]
    DegenerateR,
    #[error("least-squares fit is ill-conditioned: {0}")]
    IllConditionedFit(String),
    #[error("fit window too narrow: {0}")]
    WindowTooNarrow(String),

    #[error("could not bracket resonance n = {0}")]
    BracketFailure(usize),
    #[error("phase of the round-trip factor jumped near n = {0}")]
    PhaseUnwrapError(usize),
    #[error("Newton iteration diverged for pole n = {0}")]
    NewtonDivergence(usize),
    #[error("pole n = {n} converged {distance} eps_g away from its seed")]
    WrongBasin { n: usize, distance: f64 },
    #[error("neighbouring resonance contaminates the Lorentzian fit")]
    PeakOverlap,
    #[error("Lorentzian fit diverged: {0}")]
    FitDiverged(String),
}

impl Error {
    /// Short variant name, used as the error tag on stderr and across the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DomainTooLarge(_) => "DomainTooLarge",
            Error::Overflow(_) => "Overflow",
            Error::BranchTrackingFailure(_) => "BranchTrackingFailure",
            Error::NonPositiveAltitude(_) => "NonPositiveAltitude",
            Error::TableTooSparse(_) => "TableTooSparse",
            Error::TableParse { .. } => "TableParse",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NearBoundary(_) => "NearBoundary",
            Error::MultipleTurningPoints => "MultipleTurningPoints",
            Error::SingularityExpansionFailure(_) => "SingularityExpansionFailure",
            Error::AtTurningPoint(_) => "AtTurningPoint",
            Error::OutsideMappedDomain(_) => "OutsideMappedDomain",
            Error::NoWkbWindow => "NoWkbWindow",
            Error::StiffIntegration(_) => "StiffIntegration",
            Error::ModelNonPhysical { .. } => "ModelNonPhysical",
            Error::DegenerateR => "DegenerateR",
            Error::IllConditionedFit(_) => "IllConditionedFit",
            Error::WindowTooNarrow(_) => "WindowTooNarrow",
            Error::BracketFailure(_) => "BracketFailure",
            Error::PhaseUnwrapError(_) => "PhaseUnwrapError",
            Error::NewtonDivergence(_) => "NewtonDivergence",
            Error::WrongBasin { .. } => "WrongBasin",
            Error::PeakOverlap => "PeakOverlap",
            Error::FitDiverged(_) => "FitDiverged",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
