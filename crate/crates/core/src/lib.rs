//! Exact arithmetic for superelliptic curves `c z^m y^(d-m) = f(x, y)` and
//! their moduli: binary forms with the GL2 action, genus-2 invariants,
//! weighted projective points with weighted gcds and heights, minimal models
//! and minimal twists, and Laska reduction for integral Weierstrass
//! equations.
//!
//! Everything is computed over exact integers and rationals; no floating
//! point enters any decision. Decimal output only appears at the rendering
//! boundary (see [`weighted::WeightedHeight`]).

pub mod arith;
pub mod forms;
pub mod invariants;
pub mod laska;
pub mod reduction;
pub mod weighted;

mod error;

pub use error::{Error, Result};
