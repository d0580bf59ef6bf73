//! Exact arithmetic foundations: extended rationals, 2×2 integer matrices,
//! Smith normal form, Möbius actions on the circle at infinity, quadratic
//! surds, and circular interval bookkeeping.

mod interval;
mod mat2;
mod ratx;
mod surd;

pub use interval::{cover_subtract, BoundaryInterval, CirclePoint, IntervalCover};
pub use mat2::{moebius_boundary, smith_normal_form, IntMat2, IntVec2};
pub use ratx::{reduce_slope, ExtRational, Slope};
pub use surd::QuadExt;
