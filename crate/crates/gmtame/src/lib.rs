//! Exact computation of spectra and distinguished bases for tame polynomial
//! maps, built on arbitrary-precision rational arithmetic.

pub mod error;
pub mod exactmath;
pub mod brieskorn;
pub mod cli;
pub mod goodbasis;
pub mod hodge;
pub mod milnor;
pub mod modgroebner;
pub mod pipeline;
pub mod polyring;
pub mod spectrum;
pub mod vfilt;

pub use error::{Error, Result};
