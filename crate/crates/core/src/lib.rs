//! Numerical geometry of asymptotically hyperbolic graphs in `H^{n+1} = H^n ×_ρ R`.
//!
//! The crate is organised bottom-up:
//!
//! * [`model_space`]: the hyperbolic model `H^n` (Poincaré disk, hyperboloid and
//!   polar coordinates), static potentials, the Lorentz algebra acting on them and
//!   sphere quadrature.
//! * [`graph_library`]: built-in graph families with analytic jets.
//! * [`graph_geometry`]: pointwise extrinsic geometry of a vertical graph.
//! * [`intrinsic_oracle`]: finite-difference curvature and divergence of the
//!   induced metric, used to cross-check the extrinsic formulas.
//! * [`mass_engine`]: boundary and bulk mass integrals, horizon terms, Penrose
//!   reports and decay estimation.
//! * [`cli_reporting`]: configuration, deterministic JSON/CSV reports and the
//!   `ahmass` command driver.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_reporting;
pub mod error;
pub mod graph_geometry;
pub mod graph_library;
pub mod intrinsic_oracle;
pub mod mass_engine;
pub mod model_space;
pub mod summation;

pub use error::{Error, Result};
