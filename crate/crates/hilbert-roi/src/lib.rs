//! File formats, persistence, corpus synthesis and benchmarking for Hilbert
//! range encoded regions of interest.
//!
//! The geometry and curve algorithms live in [`hilbert_roi_core`], which is
//! re-exported as [`core`].

pub use hilbert_roi_core as core;

pub mod bench;
pub mod error;
pub mod index_file;
pub mod io;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
