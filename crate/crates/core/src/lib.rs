//! Coherence-class measures for bipartite finite-dimensional quantum states.
//!
//! The off-diagonal entries of a density matrix written in a local product
//! basis are split into classes: entries whose A-indices differ (Class I),
//! entries whose B-indices differ (Class II) and the anti-diagonal overlap of
//! the two (Class III). Minimizing the class contributions over local bases
//! recovers the one-sided geometric discords, their sum gives a symmetric
//! correlation measure, and for two qubits the Class III extremes are tied
//! to the Horodecki CHSH criterion.
//!
//! Everything here is pure computation over small dense matrices and builds
//! without `std`; file formats, the CLI and the campaign drivers live in the
//! `cohcorr` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bloch;
pub mod channel;
pub mod coherence;
pub mod discord;
pub mod eigen;
pub mod entanglement;
mod error;
pub mod matrix;
pub mod nonlocality;
pub mod optimize;
pub mod pauli;
mod real;
pub mod random;
pub mod state;
pub mod unitary;

pub use bloch::BlochRep;
pub use channel::KrausChannel;
pub use coherence::{contributions, ClassContributions, LocalBasisPair, Objective};
pub use discord::{DiscordReport, MeasurementDirection};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Side};
pub use nonlocality::CorrelationSpectrum;
pub use optimize::{OptimizerConfig, OptimizerDiagnostics};
pub use state::{Dims, DensityMatrix, PureState};

pub use num_complex::Complex64 as C64;

/// Which route produced a measure value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    Numeric,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}
