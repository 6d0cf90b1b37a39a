//! Semiclassical spectra and eigenfunctions of `-hbar^2 d^2/dx^2 + v(x)` in a
//! single potential well.
//!
//! The pipeline is: describe a [`Potential`], certify the single-well geometry
//! on an energy window, compute classical actions, solve the quantization
//! conditions, and assemble uniform Airy-type eigenfunctions. The [`oracle`]
//! module provides an independent finite-difference eigensolver for checking
//! every prediction.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod airy;
pub mod error;
pub mod io;
pub mod langer;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod quantize;
pub mod scaling;
pub mod spec;
pub mod special;
pub mod weight;

pub use error::{CertificationFailure, Error, Result};
pub use potential::{make_power_law, Potential, Side, TurningPoints, WellCertificate};
