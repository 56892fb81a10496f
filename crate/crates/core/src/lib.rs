//! Canonical vector bundles over Grassmannians realized as a symmetric space
//! inside the Euclidean motion group `SE(n)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`matcore`]: dense kernels (frames, projectors, block canonical forms).
//! * [`liegroup`]: `SO(n)`, `SE(n)`, their algebras and closed-form exp/log.
//! * [`grassmann`]: planes, the involution `σ₀`, the Cartan model `S_p⁰ ⊂ SO(n)`.
//! * [`bundle`]: the involution `σ` on `SE(n)`, the Cartan model `S_p`, the
//!   identification `ρ` with the canonical bundle and the transitive action.
//! * [`projective`]: closed forms for lines (`p = 1`) and the Möbius band.
//! * [`sample`], [`verify`], [`json`]: seeded sampling, the property
//!   harness and the JSON wire format used by the command-line tool.

pub mod bundle;
pub mod error;
pub mod grassmann;
pub mod json;
pub mod liegroup;
pub mod matcore;
pub mod projective;
pub mod sample;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use tol::Tolerances;
