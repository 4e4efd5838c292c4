//! Topological signal compression: zero-dimensional persistence of sampled
//! signals, budgeted cancellation of low-persistence pairs, a compact wire
//! format, and the baselines and metrics used to evaluate it.

pub mod baselines;
pub mod bench;
pub mod corpus;
pub mod error;
pub mod io;
pub mod metrics;
pub mod persistence;
pub mod signal;
pub mod simplify;
pub mod wire;

pub use error::{Error, Result};
pub use persistence::{
    compute_diagram, critical_points, CriticalKind, CriticalPoint, PersistenceDiagram,
    PersistencePair,
};
pub use signal::Signal;
pub use simplify::{cancel_next, reconstruct, simplify, Budget, Simplifier};
pub use wire::{
    decode_any, decode_dft_wire, decode_wire, encode_dft_wire, encode_wire, CompressedSignal,
    MethodTag, Payload, Point,
};
