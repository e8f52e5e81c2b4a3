//! Open Dicke model: Liouvillian construction in the parity-resolved Fock
//! basis, converged complex spectra, complex level statistics and the
//! mean-field attractors of the classical limit.

pub mod basis;
pub mod classical;
pub mod ensembles;
pub mod error;
pub mod liouvillian;
pub mod neighbors;
pub mod sparse;
pub mod spectra;
pub mod stats;

pub use basis::{Basis, FockLabel, LiouvilleLabel, ModelParams, Parity, Spin};
pub use error::{Error, Result};
pub use liouvillian::{build_liouvillian, build_liouvillian_tetradic, project_sector, SectorMap};
pub use num_complex::Complex64;
pub use sparse::SparseComplexMatrix;
pub use spectra::{converged_eigenvalues, ComplexSpectrum, ConvergenceConfig};
