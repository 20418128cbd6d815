//! Dense coding over partially entangled pure states.
//!
//! Alice and Bob share a bipartite pure state of Schmidt rank `D̄` and a
//! noiseless quantum channel of dimension `D`. This crate constructs the
//! known deterministic and unambiguous protocols for that resource,
//! simulates any protocol exactly under the Born rule, evaluates every
//! applicable capacity and success-probability bound with saturation
//! margins, and numerically searches for deterministic protocols where no
//! construction is known.
//!
//! The modules follow the pipeline:
//!
//! - [`tensor`]: complex linear algebra with explicit tolerances —
//!   Schmidt decomposition, dual bases, partial traces, rank and
//!   positivity tests.
//! - [`states`]: entangled states as Schmidt coefficient lists, plus the
//!   concentration and truncation filters on Bob's particle.
//! - [`encodings`]: isometries, Kraus channels, orthogonal families,
//!   map-state duality, and family extension.
//! - [`protocols`]: the five protocol constructions and the dual-basis
//!   reconstruction of encoders from a measurement design.
//! - [`verify`]: exact simulation, outcome classification, and bound
//!   evaluation.
//! - [`search`]: seeded random-restart feasibility search for
//!   deterministic protocols, and bisection of feasibility thresholds
//!   along state paths.
//! - [`json`]: serialization of states, channels, protocols, reports, and
//!   search results.
//!
//! The `densecode` binary exposes the same functionality as subcommands;
//! the crate's `examples/` directory holds one runnable example per
//! capability.

pub mod encodings;
pub mod error;
pub mod json;
pub mod protocols;
pub mod render;
pub mod search;
pub mod states;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use states::{EntangledState, LocalFilter};
pub use tensor::{CMatrix, CVector, Tolerance, C64};
