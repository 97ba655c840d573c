//! High-order solver for the compressible Euler equations in one and two
//! space dimensions.
//!
//! The spatial discretization blends two per-element schemes sharing one set
//! of Gauss solution points:
//!
//! * a Riemann-difference (RD) scheme that differentiates Lax–Friedrichs
//!   fluxes placed on a staggered set of flux points ([`rd`]), robust at
//!   shocks and provably conservative / invariant-domain preserving;
//! * a flux-reconstruction (FR) scheme with DG-equivalent correction
//!   functions ([`fr`]) for smooth regions.
//!
//! A modal smoothness sensor ([`sensor`]) picks the scheme element by element
//! once per time step. Time integration is SSP-RK3 or forward Euler with a
//! CFL controller and an optional positivity guard ([`timestepping`]).
//! Benchmark cases (Sod, Shu–Osher, isentropic vortex, forward-facing step,
//! Richtmyer–Meshkov) live in [`cases`], with an exact Riemann solver for
//! references in [`riemann`].
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `rdsolve` binary exposes `run`, `sweep`, and `verify` subcommands.

pub mod cases;
pub mod error;
pub mod euler;
pub mod fr;
pub mod mesh;
pub mod norms;
pub mod operators;
pub mod output;
pub mod rd;
pub mod riemann;
pub mod sensor;
pub mod solver;
pub mod timestepping;

pub use error::{Error, Result};
pub use euler::{Cons, Gas, Prim};

