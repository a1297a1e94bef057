//! Periodic grids, real scalar/vector fields and their Fourier representation.
//!
//! All fields live on a uniform nx × ny grid over [0,lx) × [0,ly) with
//! row-major storage, x fastest: `values[ix + nx*iy]`. Transforms are plain
//! complex FFTs per axis; derivative multipliers zero the Nyquist mode so
//! that odd-order derivatives of real fields stay real and ∂x stays exactly
//! antisymmetric on the grid.

mod field;
mod grid;
pub mod io;
pub mod ops;

pub use field::{ScalarField, VectorField};
pub use grid::PeriodicGrid;

pub(crate) use grid::Spectrum;
