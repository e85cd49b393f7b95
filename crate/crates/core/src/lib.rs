//! Sparse mmWave channel tracking for single-RF-chain analog arrays.
//!
//! The crate models a narrowband single-path channel between two uniform
//! linear arrays and implements three trackers on top of it:
//!
//! * compressed sensing with pseudo-random QPSK sounders ([`sounder::Scheme::Cs`]),
//! * projected compressed sensing, which projects a handful of those random
//!   sounders onto shifted steering-vector triplets around the previous
//!   estimate ([`sounder::Scheme::Pcs`]),
//! * a 5x5 beam sweep on a coarse 32-angle grid ([`sounder::Scheme::BeamSweep`]).
//!
//! Estimation is a maximum-likelihood grid search ([`estimate`]), tracking
//! periods adapt to the observed angular change ([`schedule`]), and
//! [`frame::run_frame`] ties everything together over one 10000-slot frame.
//!
//! Everything here is `no_std` (with `alloc`) and deterministic given the
//! caller's random number generators.

#![no_std]
// Negated float comparisons are used to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod array;
pub mod error;
pub mod estimate;
pub mod frame;
pub mod linalg;
pub mod mobility;
pub mod schedule;
pub mod sounder;

pub use error::{Error, Result};

/// Degrees to radians.
#[inline]
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * (core::f64::consts::PI / 180.0)
}

/// Radians to degrees.
#[inline]
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * (180.0 / core::f64::consts::PI)
}
