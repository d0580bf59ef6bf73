//! Exact-arithmetic invariants of nearly Euclidean Thurston (NET) maps.
//!
//! A NET map is determined up to combinatorial equivalence by a presentation
//! diagram: an integer lattice basis, a translation term, and four pushed
//! arcs. From that finite data this crate computes, with no floating point
//! anywhere:
//!
//! * the slope function and multipliers under pullback of simple closed
//!   curves ([`pullback`]),
//! * obstruction / rationality decisions via exclusion intervals on the
//!   circle at infinity ([`halfspace`]),
//! * slope orbit dynamics and finite-attractor scans ([`dynamics`]),
//! * Hurwitz-class invariants and catalogs ([`hurwitz`]),
//! * genus, cusp and degree invariants of the induced modular
//!   correspondence curve ([`modcurve`]).
//!
//! All arithmetic is arbitrary precision: integers are [`Int`], rationals
//! are [`Rat`], and the small amount of quadratic-irrational geometry needed
//! for exclusion intervals is handled exactly by [`arith::QuadExt`].

pub mod arith;
pub mod dynamics;
pub mod halfspace;
pub mod hurwitz;
pub mod modcurve;
pub mod parallel;
pub mod presentation;
pub mod pullback;

/// The integer scalar used throughout the crate.
pub type Int = num_bigint::BigInt;
/// The rational scalar used throughout the crate.
pub type Rat = num_rational::Ratio<Int>;

/// Signed 64-bit to [`Int`] without the `.into()` noise at call sites.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Rational `p/q` from machine integers; panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}

pub use arith::{
    cover_subtract, moebius_boundary, reduce_slope, smith_normal_form, BoundaryInterval,
    CirclePoint, ExtRational, IntMat2, IntVec2, IntervalCover, QuadExt, Slope,
};
pub use dynamics::{attractor_scan, orbit, AttractorReport, OrbitReport, OrbitTerminal};
pub use halfspace::{
    decide_rationality, excluded_interval, extended_excluded_neighborhood, stern_brocot_slopes,
    Decision, DecisionOptions, ExclusionCertificate, ExclusionKind, Verdict,
};
pub use hurwitz::{
    catalog, deck_group_order, elementary_divisors, hs_equivalent, multiplier_image, CatalogClass,
    HurwitzStructureSet, MultiplierImage, RealizationStatus,
};
pub use modcurve::{curve_invariants, liftable_cosets, CosetAction, CurveInvariants};
pub use presentation::{
    is_euclidean, parse_presentation, portraits, transform, validate, GreenArc, Portrait,
    Presentation, StartClass, ValidationReport,
};
pub use pullback::{
    boundary_dictionary, boundary_to_slope, preimage_components, slope_invariants, ComponentClass,
    ComponentReport, PullbackResult,
};

/// Serialize a [`Rat`] as the string `"p/q"` in JSON reports.
pub(crate) mod serde_rat {
    use crate::Rat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
    }
}

/// Errors surfaced by every module of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero vector has no slope")]
    ZeroVector,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not unimodular (|det| must be 1)")]
    NotUnimodular,
    #[error("matrix must have determinant 1")]
    NotOrientationPreserving,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("slope input must be a reduced extended rational, not ⊙")]
    AbsorbedInput,
    #[error("engine invariant violated: {0}")]
    Engine(String),
    #[error(
        "excluded interval requires distinct seed and image points; use the extended construction"
    )]
    CoincidentSeed,
    #[error(
        "extended construction requires a fixed slope with multiplier ≠ 1, or an absorbed slope"
    )]
    ExtendedHypothesis,
    #[error("extended construction gave up: {0}")]
    ExtensionExhausted(String),
    #[error("rationality decision is unsupported for Euclidean maps")]
    EuclideanUnsupported,
    #[error("elementary divisors must satisfy n | m and m·n ≥ 2")]
    BadDivisors,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
