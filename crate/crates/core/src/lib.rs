//! Spectral calculus for translation-invariant, SO(n)-equivariant even
//! Minkowski valuations.
//!
//! The crate works with band-limited one-variable profiles: zonal functions
//! on the sphere expanded in dimension-n Legendre polynomials, and
//! SO(n-1)-invariant functions on Grassmannians expanded in the Radon images
//! of those polynomials. Every intertwining transform (Radon, cosine, the
//! box operators and Berg kernels, Hard Lefschetz derivation/integration,
//! the Fourier-type degree swap) acts diagonally on these coefficients;
//! the diagonal entries come from one-dimensional quadrature.

pub mod bodies;
pub mod config;
pub mod error;
pub mod lefschetz;
pub mod mval;
pub mod profiles;
pub mod specfun;
pub mod transforms;
pub mod verify;

pub use config::Config;
pub use error::{Error, Result};
