//! Spectral Galerkin toolkit for mild solutions of the incompressible
//! Navier–Stokes equations on the periodic torus.
//!
//! The velocity is evolved through the Duhamel integral equation
//! `u(t) = e^{tνΔ}u₀ + ∫ e^{(t-s)νΔ}(F u(s) + P f(s)) ds` with
//! `F u = -P(u·∇)u`, where `P` is the Leray projector. Everything linear is
//! diagonal in the Fourier basis, which makes the functional-analytic
//! identities behind the equation checkable to machine precision; the
//! [`verify`] module does exactly that.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod generate;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod operators;
pub mod solver;
pub mod spectral;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use field::{PhysicalVectorField, SpectralVectorField};
pub use grid::TorusGrid;
