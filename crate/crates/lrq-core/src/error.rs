use thiserror::Error;

/// Every failure the library can report. The CLI maps each variant to a
/// stable error name in JSON output, so variants are part of the public
/// contract.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("conductor {found} does not divide {target}")]
    NotDivisible { found: u64, target: u64 },

    #[error("conductor {0} exceeds the supported cap {cap}", cap = crate::exactmath::CONDUCTOR_CAP)]
    ConductorCapExceeded(u64),

    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),

    #[error("generator is not invertible")]
    NotInvertible,

    #[error("group of order {order} has no unique abelian {p}-Sylow subgroup")]
    NotLinearlyReductive { p: u64, order: usize },

    #[error("connected part is not cyclic")]
    ConnectedPartNotCyclic,

    #[error("images do not extend to a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("representation is not very small (lambda = {0})")]
    NotVerySmall(usize),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("dimension {0} is out of range for this operation")]
    BadDimension(usize),

    #[error("bad sequence: {0}")]
    BadSequence(String),

    #[error("a primitive cube root of unity mod p must be supplied to decide this case")]
    MissingIdentification,

    #[error("{0} is not a primitive cube root of unity mod {1}")]
    BadCubeRoot(u64, u64),

    #[error("Hilbert-Kunz multiplicity is implemented only for cyclic (toric) quotients")]
    NotImplementedForNonAbelian,
}

impl Error {
    /// Stable machine-readable name, used by the CLI's JSON error output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotDivisible { .. } => "NotDivisible",
            Error::ConductorCapExceeded(_) => "ConductorCapExceeded",
            Error::CapExceeded(_) => "CapExceeded",
            Error::NotInvertible => "NotInvertible",
            Error::NotLinearlyReductive { .. } => "NotLinearlyReductive",
            Error::ConnectedPartNotCyclic => "ConnectedPartNotCyclic",
            Error::NotHomomorphism(_) => "NotHomomorphism",
            Error::NotVerySmall(_) => "NotVerySmall",
            Error::BadInput(_) => "BadInput",
            Error::BadDimension(_) => "BadDimension",
            Error::BadSequence(_) => "BadSequence",
            Error::MissingIdentification => "MissingIdentification",
            Error::BadCubeRoot(..) => "BadCubeRoot",
            Error::NotImplementedForNonAbelian => "NotImplementedForNonAbelian",
        }
    }

    /// All error names, for the exhaustiveness test in the CLI.
    pub fn all_names() -> &'static [&'static str] {
        &[
            "NotDivisible",
            "ConductorCapExceeded",
            "CapExceeded",
            "NotInvertible",
            "NotLinearlyReductive",
            "ConnectedPartNotCyclic",
            "NotHomomorphism",
            "NotVerySmall",
            "BadInput",
            "BadDimension",
            "BadSequence",
            "MissingIdentification",
            "BadCubeRoot",
            "NotImplementedForNonAbelian",
        ]
    }
}

pub type Result<T> = std::result::Result<T, Error>;
