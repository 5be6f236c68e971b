//! Photon wavefunction toolkit built on the Riemann–Silberstein vector
//! `F = E/c ± iB`.
//!
//! The crate is organised along the chain of the formalism:
//!
//! - [`field`]: grids, real `(E, B)` fields, the complex RS field and the
//!   spectral transversality / energy diagnostics.
//! - [`spin`]: spin-1 generators, the per-mode Hamiltonian `c ŝ·k` and the
//!   helicity decomposition of a field.
//! - [`propagator`]: exact per-mode evolution and an independent
//!   finite-difference Maxwell stepper used as a cross-check.
//! - [`covariant`]: the `SL(2,C) → SO(1,3)` map, Faraday tensor, self-dual
//!   split, symmetric spinors and the covariant wave-equation residuals.
//! - [`action`]: periodic 4D lattice discretisation of the first-order and
//!   reduced actions together with their analytic gradients.
//! - [`vortex`]: the vortex scalar `F·F`, Laguerre–Gaussian synthesis and
//!   vortex-line tracing.
//! - [`io`], [`config`], [`scenario`]: the field file format, scenario
//!   configuration and the `rswave` runner.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled (the default) and plain iterators otherwise.

pub mod action;
pub mod config;
pub mod covariant;
pub mod error;
pub mod fft;
pub mod field;
pub mod io;
pub mod par;
pub mod propagator;
pub mod rng;
pub mod scenario;
pub mod spin;
pub mod vortex;

pub use error::{Error, Result};
pub use num_complex::Complex64;
