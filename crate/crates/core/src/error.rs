use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("no closed form for operator `{op}` at dl={dl}")]
    Unsupported { op: String, dl: i32 },

    #[error("degree audit failed: {0}")]
    DegreeAudit(String),

    #[error("annihilated state has no shift (n=0, l={l})")]
    Annihilated { l: u32 },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
