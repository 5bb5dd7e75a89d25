//! Geometric inhomogeneous random graphs (GIRGs) on the d-torus whose
//! distance is a Boolean distance function (BDF): a binary tree of `min` and
//! `max` nodes over per-coordinate torus distances.
//!
//! The crate is organised bottom-up:
//!
//! * [`bdf`] holds the expression trees, exact ball volumes, depth, SCOM
//!   classification and the upper-bound constructions.
//! * [`parser`] is the text syntax (`max(x1,min(x2,x3))`).
//! * [`sampler`] draws one-round GIRG instances.
//! * [`two_round`] implements the phased two-round exposure of the edges.
//! * [`analysis`] has components, degree tails, clustering, separators and
//!   cut probes.
//! * [`io`] reads and writes the CSV/JSON file formats.

pub mod analysis;
pub mod bdf;
mod error;
pub mod io;
pub mod parser;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod two_round;

pub use bdf::{BdfExpr, Depth, TorusPoint};
pub use error::{Error, Result};
pub use parser::{format, parse, ParseError, ParseErrorKind};
pub use sampler::{GirgInstance, GirgParams, WeightSequence};
