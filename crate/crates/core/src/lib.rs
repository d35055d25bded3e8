//! Design calculations for a spin-qubit register placed beside a uniformly
//! magnetized ferromagnetic nanostripe.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! * [`units`] holds physical constants, material presets and the stripe
//!   geometry with its coordinate convention.
//! * [`magnetostatics`] evaluates the two-dimensional (infinite stripe) dipolar
//!   field, its gradient, the homogeneity functional and its root, plus a
//!   three-dimensional surface-charge quadrature used as a validation oracle.
//! * [`spinwave`] builds the internal confining potential, solves the 1D
//!   eigenproblem with a transfer-matrix shooting method (and a finite-difference
//!   oracle) and turns the modes into field-sweep resonance lines.
//! * [`register`] validates a qubit array: resonance fields, Ising condition,
//!   spectral clearance and addressable-qubit counts.
//! * [`decoherence`] estimates magnon-induced T1/T2 with a calibrated
//!   golden-rule model.
//!
//! All quantities are SI internally (tesla, metre, joule, second, kelvin).
//! Stripe-centred coordinates are used everywhere: the stripe occupies
//! `|x| <= t_x/2`, `|z| <= w_z/2`, `|y| <= l_y/2` and is saturated along `+z`.

#![cfg_attr(not(test), no_std)]
// NaN-rejecting range checks are written as `!(x > lo)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod decoherence;
mod error;
pub mod magnetostatics;
pub mod quad;
pub mod register;
pub mod spinwave;
pub mod units;

pub use error::{Error, Result};
