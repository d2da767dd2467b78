use std::fmt;

use thiserror::Error;

/// Inclusive exponent range on which a series is known exactly.
/// `None` stands for an unbounded end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Window {
    pub const ALL: Window = Window { lo: None, hi: None };

    pub fn contains(&self, e: i64) -> bool {
        self.lo.is_none_or(|l| e >= l) && self.hi.is_none_or(|h| e <= h)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.map_or("-inf".to_string(), |v| v.to_string());
        let hi = self.hi.map_or("+inf".to_string(), |v| v.to_string());
        write!(f, "[{lo}, {hi}]")
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("coefficient of z^{needed} lies outside the trusted window {window}")]
    UntrustedRegion { needed: i64, window: Window },
    #[error("cannot combine an expansion at infinity with an expansion at zero")]
    IncompatibleSides,
    #[error("leading coefficient is not invertible")]
    ZeroLeadingTerm,
    #[error("exponent times leading exponent is not an integer")]
    NonIntegerLeadingExponent,
    #[error("supplied root does not match the leading coefficient")]
    RootMismatch,
    #[error("series is not of the form c·w + corrections: {0}")]
    NotNearIdentity(String),
    #[error("bad leading term: {0}")]
    BadLeadingTerm(String),
    #[error("bad support: {0}")]
    BadSupport(String),
    #[error("coefficient of z^(-2n) in l vanishes")]
    ZeroBottomCoefficient,
    #[error("coefficients violate the parity tag")]
    ParityViolation,
    #[error("inconsistent chart: {0}")]
    InconsistentChart(String),
    #[error("singular triangular system")]
    SingularKMatrix,
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("no exact root of the bottom coefficient in this scalar ring")]
    NoExactRoot,
    #[error("C tensor is not integrable: {0}")]
    IntegrationObstruction(String),
    #[error("circle quotient has no finite exact expansion: {0}")]
    CircleQuotient(String),
    #[error("critical values are not distinct")]
    RepeatedCriticalValue,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
