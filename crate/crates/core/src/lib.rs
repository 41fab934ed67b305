//! Event-driven simulation of gossip/balloon coverage processes on the
//! two-dimensional torus, together with the deterministic limit objects
//! they converge to.
//!
//! The library has three layers:
//!
//! * exact stochastic simulators — the branching balloon process
//!   ([`branching`]), the coupled balloon coverage process ([`balloon`])
//!   and the discrete lattice gossip chain ([`lattice`]);
//! * exact geometry and coverage bookkeeping on the torus ([`torus`],
//!   [`grid`]);
//! * deterministic analytics — growth series, martingale moment formulas,
//!   scale functions and the limiting coverage-profile equation
//!   ([`limits`]).
//!
//! Everything random is driven by explicitly seeded, splittable RNG
//! streams ([`seeds`]) so that every run is bit-for-bit reproducible.

pub mod balloon;
pub mod branching;
pub mod error;
pub mod grid;
pub mod lattice;
pub mod limits;
pub mod seeds;
pub mod stats;
pub mod torus;

pub use error::SimError;
pub use torus::TorusPoint;

/// Growth constant linking disk radius to elapsed lifetime: a disk of age
/// `s` has radius `s / sqrt(2*pi)` and therefore area `s^2 / 2`.
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
