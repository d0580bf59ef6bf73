//! Open arcs and exclusion bookkeeping on the circle ∂ℍ = ℝ ∪ {∞}.
//!
//! `∞` is an ordinary circle point here: an "unbounded interval of real
//! numbers" is just an arc through `∞`. Arc endpoints are exact quadratic
//! surds, so membership and overlap tests are decisions, never estimates.

use super::mat2::IntMat2;
use super::ratx::ExtRational;
use super::surd::QuadExt;
use crate::Rat;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;

/// A point of the circle at infinity.
#[derive(Clone, PartialEq, Eq)]
pub enum CirclePoint {
    Finite(QuadExt),
    Infinity,
}

impl CirclePoint {
    pub fn from_rat(r: &Rat) -> Self {
        CirclePoint::Finite(QuadExt::from_rat(r.clone()))
    }

    pub fn from_ext(x: &ExtRational) -> Self {
        match x.to_rat() {
            Some(r) => CirclePoint::Finite(QuadExt::from_rat(r)),
            None => CirclePoint::Infinity,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CirclePoint::Infinity)
    }

    /// The extended rational this point equals, if it is one.
    pub fn to_ext(&self) -> Option<ExtRational> {
        match self {
            CirclePoint::Infinity => Some(ExtRational::infinity()),
            CirclePoint::Finite(q) => q.to_rat().map(ExtRational::from_rat),
        }
    }

    /// Image under the boundary action `x ↦ (d·x + b)/(c·x + a)` of a
    /// unimodular `M = [a b; c d]`, the same convention as
    /// [`moebius_boundary`](super::mat2::moebius_boundary).
    pub fn moebius(&self, m: &IntMat2) -> CirclePoint {
        debug_assert!(m.is_unimodular());
        match self {
            CirclePoint::Infinity => {
                // limit of (d·x + b)/(c·x + a) as x → ∞
                if m.c.is_zero() {
                    CirclePoint::Infinity
                } else {
                    CirclePoint::Finite(QuadExt::from_rat(Rat::new(m.d.clone(), m.c.clone())))
                }
            }
            CirclePoint::Finite(x) => {
                let rat = |i: &crate::Int| QuadExt::from_rat(Rat::from_integer(i.clone()));
                let num = &(&rat(&m.d) * x) + &rat(&m.b);
                let den = &(&rat(&m.c) * x) + &rat(&m.a);
                if den.is_zero() {
                    CirclePoint::Infinity
                } else {
                    CirclePoint::Finite(&num / &den)
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CirclePoint::Infinity => f64::INFINITY,
            CirclePoint::Finite(q) => q.to_f64(),
        }
    }
}

/// Linear order used to linearize the circle: finite reals by value, `∞` last.
impl Ord for CirclePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CirclePoint::Infinity, CirclePoint::Infinity) => Ordering::Equal,
            (CirclePoint::Infinity, _) => Ordering::Greater,
            (_, CirclePoint::Infinity) => Ordering::Less,
            (CirclePoint::Finite(a), CirclePoint::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for CirclePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::Infinity => write!(f, "∞"),
            CirclePoint::Finite(q) => q.fmt(f),
        }
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The open arc traversed counterclockwise from `start` to `end`
/// (counterclockwise on ∂ℍ is the direction of increasing reals).
/// Endpoints are required distinct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryInterval {
    start: CirclePoint,
    end: CirclePoint,
}

impl BoundaryInterval {
    pub fn new(start: CirclePoint, end: CirclePoint) -> Self {
        assert!(start != end, "interval endpoints must be distinct");
        BoundaryInterval { start, end }
    }

    pub fn from_exts(a: &ExtRational, b: &ExtRational) -> Self {
        BoundaryInterval::new(CirclePoint::from_ext(a), CirclePoint::from_ext(b))
    }

    pub fn endpoints(&self) -> (&CirclePoint, &CirclePoint) {
        (&self.start, &self.end)
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        if self.start < self.end {
            &self.start < x && x < &self.end
        } else {
            x > &self.start || x < &self.end
        }
    }

    pub fn contains_ext(&self, x: &ExtRational) -> bool {
        self.contains(&CirclePoint::from_ext(x))
    }

    /// Arc image under a boundary action; Möbius maps of ∂ℍ preserve the
    /// counterclockwise orientation, so images of arcs are arcs.
    pub fn moebius(&self, m: &IntMat2) -> BoundaryInterval {
        BoundaryInterval::new(self.start.moebius(m), self.end.moebius(m))
    }
}

impl fmt::Display for BoundaryInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end)
    }
}

/// A closed arc `[lo, hi]` (counterclockwise); `lo == hi` is a single point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosedArc {
    pub lo: CirclePoint,
    pub hi: CirclePoint,
}

impl ClosedArc {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        if self.lo == self.hi {
            x == &self.lo
        } else if self.lo < self.hi {
            &self.lo <= x && x <= &self.hi
        } else {
            x >= &self.lo || x <= &self.hi
        }
    }
}

impl fmt::Display for ClosedArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A union of excluded open arcs, tracked through its complement: the
/// uncovered part of the circle as a disjoint list of closed arcs.
#[derive(Clone, Debug)]
pub struct IntervalCover {
    /// `None` means nothing is covered yet (complement is the full circle).
    gaps: Option<Vec<ClosedArc>>,
}

impl Default for IntervalCover {
    fn default() -> Self {
        Self::new()
    }
}

impl IntervalCover {
    /// Empty cover: complement is the whole circle.
    pub fn new() -> Self {
        IntervalCover { gaps: None }
    }

    pub fn is_full_circle_uncovered(&self) -> bool {
        self.gaps.is_none()
    }

    /// Uncovered complement as disjoint closed arcs (empty slice ⟺ the cover
    /// is the entire circle). `None` gap state means the full circle; callers
    /// get it as a single wrap-around is impossible to express, so query
    /// [`IntervalCover::is_full_circle_uncovered`] first.
    pub fn complement(&self) -> &[ClosedArc] {
        match &self.gaps {
            None => &[],
            Some(v) => v,
        }
    }

    /// True iff every uncovered remnant is a single point.
    pub fn complement_is_finite(&self) -> bool {
        match &self.gaps {
            None => false,
            Some(v) => v.iter().all(ClosedArc::is_point),
        }
    }

    pub fn subtract(&mut self, j: &BoundaryInterval) {
        let (a, b) = j.endpoints();
        let current: Vec<ClosedArc> = match self.gaps.take() {
            // Full circle minus (a, b) is the closed arc [b, a].
            None => {
                self.gaps = Some(vec![ClosedArc {
                    lo: b.clone(),
                    hi: a.clone(),
                }]);
                return;
            }
            Some(v) => v,
        };
        let mut next = Vec::with_capacity(current.len() + 1);
        for arc in current {
            subtract_from_arc(&arc, j, &mut next);
        }
        next.sort_by(|x, y| x.lo.cmp(&y.lo));
        self.gaps = Some(next);
    }
}

/// `arc ∖ (a, b)` appended to `out` as zero, one or two closed arcs.
fn subtract_from_arc(arc: &ClosedArc, j: &BoundaryInterval, out: &mut Vec<ClosedArc>) {
    let (a, b) = j.endpoints();
    let lo_in = j.contains(&arc.lo);
    let hi_in = j.contains(&arc.hi);
    match (lo_in, hi_in) {
        (true, true) => {
            // Either the whole arc sits inside j, or the arc passes through
            // the entire closed complement [b, a] of j.
            if arc.contains(a) {
                out.push(ClosedArc {
                    lo: b.clone(),
                    hi: a.clone(),
                });
            }
        }
        (true, false) => out.push(ClosedArc {
            lo: b.clone(),
            hi: arc.hi.clone(),
        }),
        (false, true) => out.push(ClosedArc {
            lo: arc.lo.clone(),
            hi: a.clone(),
        }),
        (false, false) => {
            // j cuts an interior piece out of the arc exactly when both its
            // endpoints lie in the arc and j is not the complementary arc
            // joining hi back to lo on the outside.
            let cuts = arc.contains(a)
                && arc.contains(b)
                && !arc.is_point()
                && a != &arc.hi
                && b != &arc.lo;
            if cuts {
                out.push(ClosedArc {
                    lo: arc.lo.clone(),
                    hi: a.clone(),
                });
                out.push(ClosedArc {
                    lo: b.clone(),
                    hi: arc.hi.clone(),
                });
            } else {
                out.push(arc.clone());
            }
        }
    }
}

/// Functional form of [`IntervalCover::subtract`]: the result's complement is
/// the input's complement with the open arc `j` removed.
pub fn cover_subtract(cover: &IntervalCover, j: &BoundaryInterval) -> IntervalCover {
    let mut next = cover.clone();
    next.subtract(j);
    next
}
