//! Lie-theoretic structure, orbital integrals and geodesic-side zeta
//! functions for locally symmetric spaces of fundamental rank one.
//!
//! The crate is organised bottom-up:
//!
//! - [`lie_core`]: exact matrix realizations of `sl(2)`, `sl(3)`, `so(p,q)`,
//!   the line and their products, with the Cartan involution and invariant form.
//! - [`roots_weyl`]: torus weights, root systems, Weyl groups and virtual
//!   characters with their λ-ring operations.
//! - [`parabolic`]: the splitting along the one-dimensional fundamental
//!   Cartan part, exterior-power lifts and Casimir shifts.
//! - [`orbital`]: the semisimple orbital integral by Gauss–Hermite quadrature
//!   and its closed forms.
//! - [`zeta`]: Selberg and Ruelle zeta functions from length spectra, tail
//!   bounds and Laurent constants.
//! - [`checks`]: the identity-check suites behind `lsym check`.
//! - [`cli`]: the `lsym` command-line front end.
//!
//! Runnable walkthroughs live in `examples/`, e.g. `cargo run --example structure_tables`.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod error;
pub mod exact;
pub mod lie_core;
pub mod numeric;
pub mod orbital;
pub mod parabolic;
pub mod roots_weyl;
pub mod zeta;

pub use error::{Error, Result};
