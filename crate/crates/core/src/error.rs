use thiserror::Error;

/// Failure modes shared by every engine.
///
/// The three kinds map onto distinct CLI exit codes: structural and domain
/// errors are caller mistakes, resource errors mean a configured budget was hit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
