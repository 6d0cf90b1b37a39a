use thiserror::Error;

/// Which clause of the single-well certificate failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificationFailure {
    #[error("energy {lambda}: expected {expected} crossings of v = lambda, found {found}")]
    CrossingCount { lambda: f64, expected: usize, found: usize },
    #[error("energy {lambda}: turning point {x} is critical (v' = {slope})")]
    CriticalTurningPoint { lambda: f64, x: f64, slope: f64 },
    #[error("energy {lambda}: potential at truncation bound {bound} is {value}, not above the window")]
    InsufficientGrowth { lambda: f64, bound: f64, value: f64 },
    #[error("singular point {x} is crossed by a turning point inside the window")]
    SingularPointOnEdge { x: f64 },
    #[error("energy {lambda}: well bottom v(0) = {value} is not below the energy")]
    WallAboveEnergy { lambda: f64, value: f64 },
    #[error("turning points are not monotone in energy near {lambda}")]
    NonMonotone { lambda: f64 },
    #[error("half-line geometry required, potential lives on the full line")]
    WrongDomain,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("x = {x} lies outside the domain of the potential")]
    OutOfDomain { x: f64 },
    #[error("x = {x} is a singular point; a side must be selected")]
    AtSingularPoint { x: f64 },
    #[error("no sign change of v - {lambda} found in [{lo}, {hi}]")]
    NoSignChange { lambda: f64, lo: f64, hi: f64 },
    #[error("well certification failed: {0}")]
    Certification(#[from] CertificationFailure),
    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },
    #[error("root finding failed in bracket [{lo}, {hi}]: {reason}")]
    RootFinding { lo: f64, hi: f64, reason: String },
    #[error("energy window ({lo}, {hi}) is empty or inverted")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("level scan could not separate adjacent roots after {halvings} grid halvings")]
    GridTooCoarse { halvings: usize },
    #[error("x = {x} is outside the chart's half-domain")]
    ChartDomain { x: f64 },
    #[error("x = {x} lies inside the turning-point collar of width {width:e}")]
    CollarViolation { x: f64, width: f64 },
    #[error("level does not belong to this potential: {0}")]
    LevelMismatch(String),
    #[error("oracle did not converge at {points} points: last estimates {last:e}, {previous:e}")]
    OracleNonConvergence { points: usize, last: f64, previous: f64 },
    #[error("eigenvalue {lambda} is too close to the truncation-induced spectrum edge")]
    TruncationEdge { lambda: f64 },
    #[error("inverse iteration stagnated with residual {residual:e}")]
    InverseIteration { residual: f64 },
    #[error("index {index} outside the {len} computed levels")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the well geometry rather than of a numerical method.
    pub fn is_certification(&self) -> bool {
        matches!(self, Error::Certification(_) | Error::NoSignChange { .. })
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::RootFinding { .. }
                | Error::GridTooCoarse { .. }
                | Error::OracleNonConvergence { .. }
                | Error::InverseIteration { .. }
                | Error::TruncationEdge { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
