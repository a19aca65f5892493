//! Numerical core for G-strand systems.
//!
//! Everything here is pure computation over caller-owned data: the so(3) and
//! so(4) kernels, periodic finite-difference stencils, a classical RK4 step,
//! the method-of-lines right-hand sides of the SO(3) strand models, Lax-pair
//! residual monitors, the Diff(R)-strand peakon system and the closed-form
//! solutions used to verify it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command-line driver live in the `gstrand` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod algebra;
pub mod analytic;
pub mod grid;
pub mod integrability;
pub mod integrate;
pub mod peakon;
pub mod so3_dynamics;

pub use error::{Error, Result};
