#![cfg_attr(not(any(feature = "std", test)), no_std)]
//! Time correlation functions of a q-deformed Bose gas at complex inverse
//! temperature, the associated partition-function polynomials, and their zeros.
//!
//! The crate is `no_std` with `alloc`; the `std` feature only enables the
//! standard library for downstream convenience.

extern crate alloc;

pub mod analytic;
mod dd;
pub mod ensemble;
pub mod error;
pub mod fock_oracle;
pub mod qmath;
mod sum;
pub mod zerofinder;

pub use ensemble::{OccupationVector, SystemSpec, Target};
pub use error::{Error, Result};
pub use qmath::{ComplexTemperature, DeformationParam};
