//! Special functions, quadrature, azimuthal transforms and refinement control.

pub mod bessel;
pub mod convergence;
pub mod dft;
pub mod quadrature;
pub mod sinc;

pub use bessel::{bessel_j, bessel_j_ladder};
pub use convergence::{converge_by_doubling, ConvergenceLevel, ConvergenceReport, SpectralWeights};
pub use dft::{azimuthal_dft, inverse_azimuthal_dft, AzimuthalCoefficients, AzimuthalTransform};
pub use quadrature::{gauss_legendre, uniform_midpoint, QuadratureRule};
pub use sinc::{sinc, sinc_with_phase};
