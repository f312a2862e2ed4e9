//! Spectral approximation on compact two-point homogeneous spaces.

pub mod error;
pub mod io;
pub mod jacobi;
pub mod mercer;
pub mod multiplier;
pub mod quadrature;
pub mod random;
pub mod scalar;
pub mod smoothness;
pub mod space;
pub mod verify;
pub mod zonal;

pub use error::{Error, Result};
pub use jacobi::{CosineTable, JacobiIndex};
pub use mercer::{DecayReport, EigenBlock, HolderEstimate, MercerKernel};
pub use multiplier::{DefectEngine, MultiplierSequence};
pub use quadrature::{gauss_jacobi, QuadratureRule};
pub use scalar::Real;
pub use smoothness::{EquivalenceReport, OracleResult};
pub use space::{catalog, Family, SpaceId, SpaceParams};
pub use zonal::{LpNormer, SpectralEnergy, ZonalFunction};

pub type SpaceParams64 = SpaceParams<f64>;
pub type ZonalFunction64 = ZonalFunction<f64>;
pub type MultiplierSequence64 = MultiplierSequence<f64>;
pub type MercerKernel64 = MercerKernel<f64>;
pub type SpaceParams32 = SpaceParams<f32>;
pub type ZonalFunction32 = ZonalFunction<f32>;
