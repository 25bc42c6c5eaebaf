//! Auxiliary field method for central potentials.

pub mod afm;
pub mod error;
pub mod exact;
pub mod observables;
pub mod oracle;
pub mod overlaps;
pub mod quad;
pub mod specfun;

pub use afm::{afm_solve, AfmSolution, AuxiliaryKind, BasisScale, BoundKind, PotentialModel};
pub use error::{Error, NoBoundReason, Result};
pub use exact::{HydrogenScale, ObservableSet, OscillatorScale, Provenance, QuantumNumbers};
pub use oracle::{solve_radial, RadialFunction, SolverConfig};
