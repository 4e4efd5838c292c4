//! Counterfactual lossy compressors used for comparison.

pub mod dft;
pub mod paa;
pub mod random;

pub use dft::{dft_compress, dft_reconstruct, DftCompressed, DftSelection};
pub use paa::{paa_compress, paa_reconstruct};
pub use random::random_compress;

use crate::error::Result;
use crate::signal::Signal;
use crate::simplify::reconstruct;
use crate::wire::{MethodTag, Payload};

/// Reconstructs any decoded payload with its method's rule.
pub fn reconstruct_payload(payload: &Payload) -> Result<Signal> {
    match payload {
        Payload::Spectrum(d) => Ok(dft_reconstruct(d)),
        Payload::Points(c) if c.method() == MethodTag::Paa => paa_reconstruct(c),
        Payload::Points(c) => reconstruct(c),
    }
}
