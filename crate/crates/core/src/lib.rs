//! Finite diagnostics for Borel-Cantelli behaviour of sequences on the circle
//! and on the middle-thirds Cantor set.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantor;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod radii;
pub mod report;
pub mod rigidity;
pub mod sequences;

pub use error::{Error, Result};
pub use geometry::{Arc, ArcUnion, CirclePoint, Window};
