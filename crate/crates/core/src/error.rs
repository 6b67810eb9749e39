use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("value {value} is not on the grid with step {delta}")]
    OffGrid { value: f64, delta: f64 },
    #[error("density is zero at {x}; virtual value undefined")]
    UndefinedDensity { x: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient samples: {got} < {need}")]
    Precision { got: u64, need: u64 },
    #[error("no closed form for {0}; estimate it by simulation")]
    NotClosedForm(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
