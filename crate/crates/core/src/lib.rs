//! Heat and wave propagators for the harmonic oscillator and for d/dX,
//! tied together by a Fourier-side intertwining map, with Hermite and
//! Fourier oracles to check them against.

// `!(x > 0.0)` is how the argument checks reject NaN along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod grushin;
pub mod hermite;
pub mod intertwining;
pub mod oscillator;
pub mod par;
pub mod quadrature;
pub mod report;
pub mod residual;
pub mod special;
pub mod verify;
