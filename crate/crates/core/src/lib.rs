//! Convex surfaces in (2+1)-dimensional Minkowski space.
//!
//! * [`mink`] — the bilinear form, cross product, isometries, the Klein chart
//!   and duals of geodesics.
//! * [`support`] — support functions on the Klein disc: envelopes of boundary
//!   data, Gauss map inverse, curvature, shape operator, cosmological levels.
//! * [`lamination`] — measured geodesic laminations, Mess domains of
//!   dependence, Thurston norm bounds and infinitesimal earthquakes.
//! * [`solver`] — the Monge-Ampère problem `det D²u = (1/ψ)(1−|z|²)⁻²`.
//! * [`barrier`] — closed-form surfaces invariant under a parabolic group.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod error;
pub mod lamination;
pub mod mink;
pub mod numeric;
pub mod solver;
pub mod support;

pub use error::{Error, IterationLog, Result};
pub use mink::{klein_down, klein_up, DiscPoint, Geodesic, Isometry, MinkVec3, NullFrame, Side};
