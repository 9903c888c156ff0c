//! Grids, complex fields on them, spectral derivatives and norms.

pub mod fft;
mod grid;
mod snapshot;
mod wave;

pub use grid::{Axis, Grid, MAX_DIM};
pub use snapshot::{read_snapshot, read_snapshot_from, write_snapshot, write_snapshot_to};
pub use wave::{
    apply_vector_field, boundary_mass_fraction, gradient_norm, l2_norm_fourier, lq_norm, momentum_norm,
    position_norm, sobolev_norm, VectorField, WaveField, MAX_SOBOLEV_ORDER,
};
pub(crate) use wave::time_matches;
