//! Error type shared by all modules.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Requested a sector with conserved number below the bottom of the
    /// ladder; no product state satisfies it.
    EmptySector { conserved_n: i32 },
    /// Atom index must be 1 or 2.
    InvalidAtomIndex { index: usize },
    /// The truncated Fock space must hold at least two photons so one
    /// emission from the top sector state stays representable.
    PhotonCapTooSmall { cap: u32 },
    /// The interaction-picture sector blocks are only time-independent at
    /// exact resonance; evolve off-resonant states with the full Hamiltonian.
    OffResonant { omega: f64, beta: f64 },
    /// Input matrix deviates from its own conjugate transpose.
    NonHermitian { max_dev: f64 },
    /// State vector norm is outside the accepted tolerance of 1.
    NormViolation { norm: f64 },
    /// Operands are defined over different ordered bases.
    BasisMismatch,
    /// Vector or matrix length does not match the basis.
    DimensionMismatch { expected: usize, got: usize },
    /// The requested subsystem is not a tensor factor of the given basis.
    InvalidSubsystem {
        subsystem: &'static str,
        basis: &'static str,
    },
    /// Branch coefficients must satisfy |c1|^2 + |c2|^2 = 1.
    UnnormalizedCoefficients { norm_sq: f64 },
    /// A state has amplitude outside the sectors an operation is defined on.
    SupportOutsideSectors { conserved_n: i32 },
    /// Parameter validation failure (message names the offending field).
    InvalidArgument { what: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySector { conserved_n } => {
                write!(f, "no basis states with conserved number {conserved_n} (< -2)")
            }
            Error::InvalidAtomIndex { index } => {
                write!(f, "atom index must be 1 or 2, got {index}")
            }
            Error::PhotonCapTooSmall { cap } => {
                write!(f, "photon cap must be >= 2, got {cap}")
            }
            Error::OffResonant { omega, beta } => write!(
                f,
                "interaction blocks require resonance (omega = beta), got omega={omega}, \
                 beta={beta}; use the full Hamiltonian for off-resonant evolution"
            ),
            Error::NonHermitian { max_dev } => {
                write!(f, "matrix is not Hermitian (max deviation {max_dev:e})")
            }
            Error::NormViolation { norm } => {
                write!(f, "state norm {norm} deviates from 1 beyond tolerance")
            }
            Error::BasisMismatch => write!(f, "operands are defined over different bases"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidSubsystem { subsystem, basis } => {
                write!(f, "subsystem {subsystem} is not a factor of basis {basis}")
            }
            Error::UnnormalizedCoefficients { norm_sq } => {
                write!(f, "|c1|^2 + |c2|^2 must be 1, got {norm_sq}")
            }
            Error::SupportOutsideSectors { conserved_n } => {
                write!(f, "state has support in sector {conserved_n}, outside the allowed set")
            }
            Error::InvalidArgument { what } => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}
