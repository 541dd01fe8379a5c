//! Spatial mode functions of SPDC photon pairs and their orbital-angular-momentum content.
//!
//! Three regimes are covered: the full emission cone of a noncritical
//! crystal, a narrow non-collinear bundle around two detected directions,
//! and the full cone with pump Poynting-vector walk-off. Spectra come from
//! spiral-harmonic decomposition on polar wavevector grids, refined by
//! doubling until the weights settle.

// `!(x > 0.0)` style guards reject NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biphoton;
pub mod dispersion;
pub mod error;
pub mod exec;
pub mod io;
pub mod numerics;
pub mod oam;
pub mod pipeline;
pub mod pump;

pub use error::{Error, Result};
pub use exec::Execution;
pub use io::config::ExperimentConfig;
