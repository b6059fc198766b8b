//! Response theory of the classical forced oscillator and the Abraham-Lorentz
//! equation of motion.
//!
//! The crate is `no_std` (it needs `alloc` for trajectories, sampled spectra
//! and adaptive quadrature panels). Everything here is a pure function of its
//! inputs; file formats, the command line and audits live in the `oscilkit`
//! crate.
//!
//! Module map:
//!
//! * [`oscillator`] closed-form response, relaxation, susceptibility, steady
//!   state and absorbed power of `x'' + Γx' + Ω²x = f/m`.
//! * [`abraham_lorentz`] roots of the AL characteristic cubic, the effective
//!   oscillator parameters, the unique (run-away) solution and the faulty
//!   textbook susceptibility `X(ω)`.
//! * [`dispersion`] Fourier-Laplace transforms and principal-value
//!   Kramers-Kronig transforms.
//! * [`cross_sections`] physical constants, absorption and scattering cross
//!   sections, the f-sum rule and the dipole-trap rate/potential ratio.
//! * [`quantum`] dipole-dipole response of a transition table, natural
//!   linewidths, the quantum oscillator and the ac-Stark shift.
//! * [`ode_oracle`] an independent Dormand-Prince integrator used as a brute
//!   force check of every closed form above.
#![cfg_attr(not(test), no_std)]
// `!(x <= y)` is how NaN gets rejected throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod abraham_lorentz;
pub mod cross_sections;
pub mod dispersion;
mod error;
pub(crate) mod math;
pub mod ode_oracle;
pub mod oscillator;
pub mod quadrature;
pub mod quantum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
