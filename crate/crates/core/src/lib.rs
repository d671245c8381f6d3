//! Exact evaluation of Poincaré invariants `(P⁺, P⁻)` of complex projective
//! surfaces from numerical descriptors.
//!
//! Invariants take values in the integral exterior algebra `Λ*H¹(V, ℤ)`
//! ([`exterior`]). Divisor-class arithmetic on elliptic fibrations runs
//! through Smith normal forms ([`lattice`]). [`surface`] holds the surface
//! descriptors, [`engine`] the closed-form evaluations and cross-checks, and
//! [`cli`] the batch front end behind the `pinv` binary.

pub mod cli;
pub mod engine;
pub mod exterior;
pub mod lattice;
pub mod surface;


pub use engine::{EngineError, PoincarePair, Provenance};
pub use exterior::{ExtElement, SkewForm};
pub use lattice::{FiberDecomposition, RelationPresentation, SmithDecomposition};
pub use surface::{DivisorClass, SurfaceInvariants, SurfaceModel};
