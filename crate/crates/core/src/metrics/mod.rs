//! Information and fidelity metrics, plus the noise protocol.

mod apen;
mod dtw;
mod stats;

pub use apen::{approx_entropy, approx_entropy_default, DEFAULT_EMBEDDING, DEFAULT_TOLERANCE_FACTOR};
pub use dtw::dtw_distance;
pub use stats::{add_gaussian_noise, compression_fraction, mean, population_std, sample_std, standardize};
