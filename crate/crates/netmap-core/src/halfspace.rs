//! Exclusion machinery on ∂ℍ: half-space intervals, the extended
//! construction at fixed and absorbed slopes, and the rationality decision
//! procedure.
//!
//! A data point `(p/q, p′/q′, δ)` of the slope function excludes an open
//! arc around `-q/p`: the ideal boundary of the half-space bounded by the
//! locus equidistant from horoballs of radii proportional to `1/den²` and
//! `δ/den′²` at the two boundary points. With `ρ = (den′/den)·√δ` and
//! `u = t₁ - t₁′` in a chart where both points are finite, the arc has
//! endpoints `t₁′ + u/(1+ρ)` and `t₁′ + u/(1-ρ)`, degenerating to a
//! half-line through the midpoint at `ρ = 1` and wrapping through `∞` for
//! `ρ > 1`. Both calibration anchors are checked in the test suite: the
//! midpoint rule at `ρ = 1` and the translate-overlap criterion
//! `t₁ - t₁′ > d(√(r′/r) - 1) + c(1 - √(r/r′))`.

use crate::arith::{
    moebius_boundary, BoundaryInterval, CirclePoint, ExtRational, IntMat2, IntervalCover, QuadExt,
    Slope,
};
use crate::presentation::{is_euclidean, Presentation};
use crate::pullback::{boundary_dictionary, boundary_to_slope, slope_invariants};
use crate::{int, rat, Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ExclusionKind {
    HalfSpace,
    Extended,
}

/// One excluded open arc, with the slope data that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct ExclusionCertificate {
    pub seed: ExtRational,
    pub image: Slope,
    #[serde(with = "crate::serde_rat")]
    pub delta: Rat,
    #[serde(serialize_with = "serialize_interval")]
    pub interval: BoundaryInterval,
    pub kind: ExclusionKind,
}

fn serialize_interval<S: serde::Serializer>(
    iv: &BoundaryInterval,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(iv)
}

/// Charts used to move points away from (or onto) `∞`. Actions are written
/// in the crate's boundary convention `x ↦ (dx + b)/(cx + a)`.
fn chart_candidates() -> [IntMat2; 4] {
    [
        IntMat2::identity(),
        // x ↦ -1/x
        IntMat2::new(0, -1, 1, 0),
        // x ↦ -1/(x - 1)
        IntMat2::new(-1, -1, 1, 0),
        // x ↦ -1/(x + 1)
        IntMat2::new(1, -1, 1, 0),
    ]
}

/// A chart `M ∈ SL(2,ℤ)` with both images finite.
fn chart_to_finite(t1: &ExtRational, t1p: &ExtRational) -> Result<IntMat2> {
    for m in chart_candidates() {
        let a = moebius_boundary(&m, t1)?;
        let b = moebius_boundary(&m, t1p)?;
        if !a.is_infinity() && !b.is_infinity() {
            return Ok(m);
        }
    }
    unreachable!("two distinct boundary points avoid ∞ in one of four charts")
}

/// A chart sending `t` to `∞`.
fn chart_to_infinity(t: &ExtRational) -> IntMat2 {
    if t.is_infinity() {
        return IntMat2::identity();
    }
    // t = α/β reduced; pick γ, δ with α·δ - β·γ = 1. The matrix
    // [α, -γ; -β, δ] acts by x ↦ (δx - γ)/(-βx + α), sending α/β ↦ ∞.
    let alpha = t.numer().clone();
    let beta = t.denom().clone();
    let e = alpha.extended_gcd(&beta);
    debug_assert!(e.gcd.is_one());
    // α·x + β·y = 1 ⇒ δ = x, γ = -y.
    let delta = e.x;
    let gamma = -e.y;
    let m = IntMat2 {
        a: alpha,
        b: -gamma,
        c: -beta,
        d: delta,
    };
    debug_assert_eq!(m.det(), Int::one());
    debug_assert!(moebius_boundary(&m, t).unwrap().is_infinity());
    m
}

/// The horoball scale ratio `ρ = (den′/den)·√δ` as an exact surd.
fn rho_of(t1: &ExtRational, t1p: &ExtRational, delta: &Rat) -> QuadExt {
    let den = Rat::from_integer(t1.denom().clone());
    let denp = Rat::from_integer(t1p.denom().clone());
    let ratio = &denp / &den;
    QuadExt::sqrt_of_rat(&(delta * (&ratio * &ratio)))
}

/// Open arc with the given surd endpoints, oriented to contain `inside`.
fn arc_containing(e1: QuadExt, e2: QuadExt, inside: &CirclePoint) -> BoundaryInterval {
    let a = CirclePoint::Finite(e1);
    let b = CirclePoint::Finite(e2);
    let fwd = BoundaryInterval::new(a.clone(), b.clone());
    if fwd.contains(inside) {
        fwd
    } else {
        let rev = BoundaryInterval::new(b, a);
        debug_assert!(rev.contains(inside));
        rev
    }
}

/// The excluded open interval of the half-space theorem for the data point
/// `(t₁, t₁′, δ)` given in boundary coordinates (`t₁ = -q/p` for seed slope
/// `p/q`, `t₁′` its image). Contains `t₁`; contains no negative reciprocal
/// of an obstruction slope.
pub fn excluded_interval(
    t1: &ExtRational,
    t1p: &ExtRational,
    delta: &Rat,
) -> Result<BoundaryInterval> {
    if t1 == t1p {
        return Err(Error::CoincidentSeed);
    }
    if delta.is_negative() {
        return Err(Error::Engine("multiplier must be non-negative".into()));
    }
    if delta.is_zero() {
        // ρ = 0 collapses the interval to the single point t₁; the extended
        // construction is the usable route for absorbed slopes.
        return Err(Error::CoincidentSeed);
    }
    let chart = chart_to_finite(t1, t1p)?;
    let back = chart.inverse_unimodular()?;
    let x1 = moebius_boundary(&chart, t1)?;
    let x1p = moebius_boundary(&chart, t1p)?;
    let rho = rho_of(&x1, &x1p, delta);
    let interval_in_chart = interval_from_chart_data(&x1, &x1p, &rho)?;
    let interval = interval_in_chart.moebius(&back);
    debug_assert!(interval.contains_ext(t1));
    Ok(interval)
}

/// Core endpoint formula in a chart where `x₁` and `x₁′` are finite.
fn interval_from_chart_data(
    x1: &ExtRational,
    x1p: &ExtRational,
    rho: &QuadExt,
) -> Result<BoundaryInterval> {
    let x1_rat = x1.to_rat().expect("finite in chart");
    let x1p_rat = x1p.to_rat().expect("finite in chart");
    let inside = CirclePoint::from_rat(&x1_rat);
    let u = QuadExt::from_rat(&x1_rat - &x1p_rat);
    let base = QuadExt::from_rat(x1p_rat.clone());
    let one = QuadExt::from_int(1);
    match rho.cmp(&one) {
        Ordering::Equal => {
            // Half-plane bounded by the vertical line over the midpoint.
            let mid = QuadExt::from_rat((&x1_rat + &x1p_rat) / rat(2, 1));
            let m = CirclePoint::Finite(mid);
            let inf = CirclePoint::Infinity;
            let fwd = BoundaryInterval::new(m.clone(), inf.clone());
            if fwd.contains(&inside) {
                Ok(fwd)
            } else {
                Ok(BoundaryInterval::new(inf, m))
            }
        }
        _ => {
            let e_minus = &base + &(&u / &(&one + rho));
            let e_plus = &base + &(&u / &(&one - rho));
            Ok(arc_containing(e_minus, e_plus, &inside))
        }
    }
}

// ---------------------------------------------------------------------------
// Extended construction
// ---------------------------------------------------------------------------

/// Data defining the translate family on one side of the normalized cusp.
struct FamilySeed {
    /// Chart coordinates of the seed pair (both finite).
    t1: Rat,
    t1p: Rat,
    /// Seed multiplier (shared by every translate of the family).
    delta_seed: Rat,
    rho: QuadExt,
}

/// The two one-sided unions plus their audit certificates.
pub fn extended_excluded_neighborhood(
    pres: &Presentation,
    t: &ExtRational,
    depth: u32,
) -> Result<(
    BoundaryInterval,
    BoundaryInterval,
    Vec<ExclusionCertificate>,
)> {
    let center_slope = boundary_to_slope(t);
    let center = slope_invariants(pres, &center_slope)?;
    match &center.image {
        Slope::Absorbed => {}
        Slope::Rational(im) if *im == center_slope => {
            if center.delta == Rat::one() {
                return Err(Error::ExtendedHypothesis);
            }
        }
        _ => return Err(Error::ExtendedHypothesis),
    }
    let c = int(center.c as i64);
    let d = int(center.d as i64);

    let chart = chart_to_infinity(t);
    let back = chart.inverse_unimodular()?;

    let mut certs = Vec::new();
    let right = one_sided(pres, &chart, &back, &c, &d, 1, depth, &mut certs)?;
    let left = one_sided(pres, &chart, &back, &c, &d, -1, depth, &mut certs)?;
    Ok((left, right, certs))
}

/// Find a usable seed on the side `dir` of `∞` in the chart: an integer
/// point whose slope has a rational image different from itself, with the
/// image finite in the chart.
fn find_seed(pres: &Presentation, chart: &IntMat2, back: &IntMat2, dir: i64) -> Result<FamilySeed> {
    for k in 1..=8i64 {
        let t1_chart = ExtRational::from_int(dir * k);
        let seed_boundary = moebius_boundary(back, &t1_chart)?;
        let seed_slope = boundary_to_slope(&seed_boundary);
        let r = slope_invariants(pres, &seed_slope)?;
        let image = match &r.image {
            Slope::Absorbed => continue,
            Slope::Rational(im) => im.clone(),
        };
        if image == seed_slope {
            continue;
        }
        let image_boundary = boundary_dictionary(&image);
        let t1p_chart = moebius_boundary(chart, &image_boundary)?;
        if t1p_chart.is_infinity() || t1p_chart == t1_chart {
            continue;
        }
        let rho = rho_of(&t1_chart, &t1p_chart, &r.delta);
        return Ok(FamilySeed {
            t1: t1_chart.to_rat().unwrap(),
            t1p: t1p_chart.to_rat().unwrap(),
            delta_seed: r.delta,
            rho,
        });
    }
    Err(Error::ExtensionExhausted(
        "no usable seed within the first eight integers".into(),
    ))
}

/// Build the one-sided union of translated half-space intervals: returns an
/// arc with endpoints (finite bound, ∞) certified by the monotone overlap
/// induction, in original coordinates.
#[allow(clippy::too_many_arguments)]
fn one_sided(
    pres: &Presentation,
    chart: &IntMat2,
    back: &IntMat2,
    c: &Int,
    d: &Int,
    dir: i64,
    depth: u32,
    certs: &mut Vec<ExclusionCertificate>,
) -> Result<BoundaryInterval> {
    let seed = find_seed(pres, chart, back, dir)?;
    let one = QuadExt::from_int(1);
    let two_d = Rat::from_integer(int(2) * d);
    let two_c = Rat::from_integer(int(2) * c);
    let du = Rat::from_integer(int(2) * (d - c)) * Rat::from_integer(int(dir));

    // Walk j in the given direction until the persistent-overlap condition
    // holds (ρ ≠ 1) or the half-line points the stable way (ρ = 1).
    let mut step = 0u32;
    loop {
        if step > depth {
            return Err(Error::ExtensionExhausted(format!(
                "depth {depth} exhausted before the overlap criterion stabilized"
            )));
        }
        let j = Rat::from_integer(int(dir * step as i64));
        let t_j = &seed.t1 + &two_d * &j;
        let tp_j = &seed.t1p + &two_c * &j;
        let u_j = &t_j - &tp_j;
        let stable = match seed.rho.cmp(&one) {
            Ordering::Less => overlap_persists(&u_j, dir, c, d, &seed.rho),
            Ordering::Equal => {
                // Half-line intervals: need the sign of u to have stabilized
                // in the direction it is marching.
                (du.is_positive() && u_j.is_positive()) || (du.is_negative() && u_j.is_negative())
            }
            Ordering::Greater => !u_j.is_zero(),
        };
        if stable {
            // Emit the stabilizing interval and its successor as audit
            // certificates, cross-checked against the engine.
            let bound =
                emit_family_intervals(pres, back, &seed, &t_j, &tp_j, &two_d, &two_c, dir, certs)?;
            return Ok(bound);
        }
        step += 1;
    }
}

/// Persistent-overlap condition for consecutive translated half-spaces with
/// `ρ < 1`, exact specializations of the horoball overlap criterion.
///
/// When `d > c` the union marches with `dir·u → +∞` and consecutive arcs
/// overlap from the first `j` with `dir·u > c(1-ρ) + d(1/ρ - 1)` on. When
/// `d < c` the march has `dir·u → -∞` and the stable condition is
/// `-dir·u > d(1/ρ + 1) - c(1 + ρ)`.
fn overlap_persists(u: &Rat, dir: i64, c: &Int, d: &Int, rho: &QuadExt) -> bool {
    let one = QuadExt::from_int(1);
    let cq = QuadExt::from_rat(Rat::from_integer(c.clone()));
    let dq = QuadExt::from_rat(Rat::from_integer(d.clone()));
    let signed_u = QuadExt::from_rat(Rat::from_integer(int(dir)) * u);
    let rho_inv = rho.recip();
    match d.cmp(c) {
        Ordering::Greater => {
            let thr = &(&cq * &(&one - rho)) + &(&dq * &(&rho_inv - &one));
            signed_u > thr
        }
        Ordering::Less => {
            let thr = &(&dq * &(&rho_inv + &one)) - &(&cq * &(&one + rho));
            -&signed_u > thr
        }
        // c = d would mean δ = 1, excluded by the hypothesis.
        Ordering::Equal => false,
    }
}

/// Emit the two leading intervals of the family and return the one-sided
/// union `(finite endpoint, ∞)` (or `(∞, finite endpoint)` for the left).
#[allow(clippy::too_many_arguments)]
fn emit_family_intervals(
    pres: &Presentation,
    back: &IntMat2,
    seed: &FamilySeed,
    t_j: &Rat,
    tp_j: &Rat,
    two_d: &Rat,
    two_c: &Rat,
    dir: i64,
    certs: &mut Vec<ExclusionCertificate>,
) -> Result<BoundaryInterval> {
    let step = Rat::from_integer(int(dir));
    let pairs = [
        (t_j.clone(), tp_j.clone()),
        (t_j + two_d * &step, tp_j + two_c * &step),
    ];
    let mut intervals_chart = Vec::new();
    for (tk, tpk) in &pairs {
        // Transport to original coordinates and cross-check the engine: the
        // translated pair must be an honest slope-function data point with
        // the seed's multiplier.
        let tk_ext = ExtRational::from_rat(tk);
        let tpk_ext = ExtRational::from_rat(tpk);
        let seed_boundary = moebius_boundary(back, &tk_ext)?;
        let slope_k = boundary_to_slope(&seed_boundary);
        let rk = slope_invariants(pres, &slope_k)?;
        let expected_image_boundary = moebius_boundary(back, &tpk_ext)?;
        let expected_image = boundary_to_slope(&expected_image_boundary);
        match &rk.image {
            Slope::Rational(im) if *im == expected_image && rk.delta == seed.delta_seed => {}
            other => {
                return Err(Error::Engine(format!(
                    "functional-equation translate disagrees with the engine: expected image {expected_image}, multiplier {}/{}, got {other:?} with {}/{}",
                    seed.delta_seed.numer(), seed.delta_seed.denom(), rk.delta.numer(), rk.delta.denom(),
                )));
            }
        }
        let interval_chart = interval_from_chart_data(&tk_ext, &tpk_ext, &seed.rho)?;
        let interval = interval_chart.moebius(back);
        debug_assert!(interval.contains_ext(&seed_boundary));
        certs.push(ExclusionCertificate {
            seed: slope_k,
            image: Slope::Rational(expected_image),
            delta: seed.delta_seed.clone(),
            interval,
            kind: ExclusionKind::Extended,
        });
        intervals_chart.push(interval_chart);
    }

    // Geometric cross-check: the two consecutive intervals overlap.
    {
        let (a, b) = (&intervals_chart[0], &intervals_chart[1]);
        let (b_start, b_end) = b.endpoints();
        if !(a.contains(b_start) || a.contains(b_end) || b.contains(a.endpoints().0)) {
            return Err(Error::Engine(
                "overlap criterion and interval geometry disagree".into(),
            ));
        }
    }

    // The one-sided union: from the finite extremity of the stabilizing
    // interval out to ∞ (exclusive), on the side `dir`.
    let j0 = &intervals_chart[0];
    let wraps = j0.contains(&CirclePoint::Infinity);
    let (s0, e0) = j0.endpoints();
    let finite_bound = match (s0, e0) {
        (CirclePoint::Finite(a), CirclePoint::Finite(b)) => {
            if wraps {
                // Arc through ∞: each side of ∞ is covered by this single
                // interval; the bound is its endpoint on that side.
                if dir > 0 {
                    if a > b {
                        a.clone()
                    } else {
                        b.clone()
                    }
                } else if a < b {
                    a.clone()
                } else {
                    b.clone()
                }
            } else if dir > 0 {
                // Right side: the union covers everything above the lower endpoint.
                if a < b {
                    a.clone()
                } else {
                    b.clone()
                }
            } else {
                // Left side: everything below the upper endpoint.
                if a < b {
                    b.clone()
                } else {
                    a.clone()
                }
            }
        }
        // ρ = 1 half-line: the finite endpoint is the bound.
        (CirclePoint::Finite(a), CirclePoint::Infinity) => a.clone(),
        (CirclePoint::Infinity, CirclePoint::Finite(b)) => b.clone(),
        _ => unreachable!("chart intervals have at least one finite endpoint"),
    };
    let bound_pt = CirclePoint::Finite(finite_bound);
    let side_chart = if dir > 0 {
        BoundaryInterval::new(bound_pt, CirclePoint::Infinity)
    } else {
        BoundaryInterval::new(CirclePoint::Infinity, bound_pt)
    };
    Ok(side_chart.moebius(back))
}

// ---------------------------------------------------------------------------
// Decision procedure
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DecisionOptions {
    /// Stern–Brocot enumeration depth.
    pub farey_depth: u32,
    /// Walk budget inside the extended construction; 0 disables extended
    /// intervals entirely.
    pub extension_depth: u32,
}

impl Default for DecisionOptions {
    fn default() -> Self {
        DecisionOptions {
            farey_depth: 12,
            extension_depth: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Rational,
    Obstructed,
    EuclideanUnsupported,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    /// Obstruction witness: the fixed slope and its multiplier.
    pub witness: Option<ObstructionWitness>,
    pub certificates: Vec<ExclusionCertificate>,
    /// Boundary points left uncovered but individually shown harmless,
    /// with the reason.
    pub cleared_points: Vec<(ExtRational, String)>,
    pub depth_reached: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionWitness {
    pub slope: ExtRational,
    #[serde(with = "crate::serde_rat")]
    pub delta: Rat,
}

/// Slopes in Stern–Brocot order: level 0 is `{0, ∞}`, each further level
/// inserts the mediants of the previous intervals on both the positive and
/// negative side, sorted within a level.
pub fn stern_brocot_slopes(depth: u32) -> Vec<ExtRational> {
    type Pair = (Int, Int);
    let pair = |p: i64, q: i64| -> Pair { (int(p), int(q)) };
    let mut out: Vec<ExtRational> = vec![ExtRational::zero(), ExtRational::infinity()];
    let mut frontier: Vec<(Pair, Pair)> = vec![(pair(0, 1), pair(1, 0)), (pair(-1, 0), pair(0, 1))];
    for _ in 0..depth {
        let mut level: Vec<ExtRational> = Vec::new();
        let mut next = Vec::new();
        for (lo, hi) in frontier {
            let med = (&lo.0 + &hi.0, &lo.1 + &hi.1);
            level.push(
                crate::arith::reduce_slope(med.0.clone(), med.1.clone())
                    .expect("mediants are nonzero"),
            );
            next.push((lo, med.clone()));
            next.push((med, hi));
        }
        level.sort();
        out.extend(level);
        frontier = next;
    }
    out
}

/// The extended half-space decision procedure. Enumerates slopes in
/// Stern–Brocot order; every slope either witnesses an obstruction, emits
/// exclusion intervals, or is individually cleared; the verdict is Rational
/// once the uncovered set is finitely many harmless points.
pub fn decide_rationality(pres: &Presentation, options: &DecisionOptions) -> Result<Decision> {
    if is_euclidean(pres)? {
        return Ok(Decision {
            verdict: Verdict::EuclideanUnsupported,
            witness: None,
            certificates: Vec::new(),
            cleared_points: Vec::new(),
            depth_reached: 0,
        });
    }

    let mut cover = IntervalCover::new();
    let mut certificates: Vec<ExclusionCertificate> = Vec::new();
    let mut cleared: BTreeMap<ExtRational, String> = BTreeMap::new();

    let slopes = stern_brocot_slopes(options.farey_depth);
    for s in &slopes {
        let t = boundary_dictionary(s);
        if !point_uncovered(&cover, &t) {
            continue;
        }
        let r = slope_invariants(pres, s)?;
        match &r.image {
            Slope::Rational(im) if *im == *s => {
                if r.delta >= Rat::one() {
                    return Ok(Decision {
                        verdict: Verdict::Obstructed,
                        witness: Some(ObstructionWitness {
                            slope: s.clone(),
                            delta: r.delta,
                        }),
                        certificates,
                        cleared_points: cleared.into_iter().collect(),
                        depth_reached: options.farey_depth,
                    });
                }
                cleared.insert(
                    t.clone(),
                    format!(
                        "fixed slope with multiplier {}/{} < 1",
                        r.delta.numer(),
                        r.delta.denom()
                    ),
                );
                if options.extension_depth > 0 {
                    subtract_extended(
                        pres,
                        &t,
                        options.extension_depth,
                        &mut cover,
                        &mut certificates,
                    )?;
                }
            }
            Slope::Absorbed => {
                cleared.insert(t.clone(), "inessential or peripheral pullback (⊙)".into());
                if options.extension_depth > 0 {
                    subtract_extended(
                        pres,
                        &t,
                        options.extension_depth,
                        &mut cover,
                        &mut certificates,
                    )?;
                }
            }
            Slope::Rational(im) => {
                let t_image = boundary_dictionary(im);
                let interval = excluded_interval(&t, &t_image, &r.delta)?;
                cover.subtract(&interval);
                certificates.push(ExclusionCertificate {
                    seed: s.clone(),
                    image: r.image.clone(),
                    delta: r.delta,
                    interval,
                    kind: ExclusionKind::HalfSpace,
                });
            }
        }

        if cover.complement_is_finite() {
            if let Some(decision) =
                finish_if_clear(pres, &cover, &mut cleared, &certificates, options)?
            {
                return Ok(decision);
            }
        }
    }

    Ok(Decision {
        verdict: Verdict::Undecided,
        witness: None,
        certificates,
        cleared_points: cleared.into_iter().collect(),
        depth_reached: options.farey_depth,
    })
}

/// Apply the extended construction at `t`, tolerating its two legitimate
/// soft failures (depth exhaustion, no usable seed) by leaving the cover
/// unchanged.
fn subtract_extended(
    pres: &Presentation,
    t: &ExtRational,
    depth: u32,
    cover: &mut IntervalCover,
    certificates: &mut Vec<ExclusionCertificate>,
) -> Result<()> {
    match extended_excluded_neighborhood(pres, t, depth) {
        Ok((left, right, mut audit)) => {
            cover.subtract(&left);
            cover.subtract(&right);
            certificates.append(&mut audit);
            // Record the one-sided limit arcs themselves, keyed by the
            // center slope, so the certificate list alone covers everything
            // the decision subtracted.
            let center = boundary_to_slope(t);
            let rc = slope_invariants(pres, &center)?;
            for side in [left, right] {
                certificates.push(ExclusionCertificate {
                    seed: center.clone(),
                    image: rc.image.clone(),
                    delta: rc.delta.clone(),
                    interval: side,
                    kind: ExclusionKind::Extended,
                });
            }
            Ok(())
        }
        Err(Error::ExtensionExhausted(_)) | Err(Error::ExtendedHypothesis) => Ok(()),
        Err(e) => Err(e),
    }
}

fn point_uncovered(cover: &IntervalCover, t: &ExtRational) -> bool {
    if cover.is_full_circle_uncovered() {
        return true;
    }
    let p = CirclePoint::from_ext(t);
    cover.complement().iter().any(|arc| arc.contains(&p))
}

/// All uncovered remnants are points; the verdict is Rational exactly when
/// each rational remnant is individually not an obstruction (irrational
/// remnants are not slopes at all).
fn finish_if_clear(
    pres: &Presentation,
    cover: &IntervalCover,
    cleared: &mut BTreeMap<ExtRational, String>,
    certificates: &[ExclusionCertificate],
    options: &DecisionOptions,
) -> Result<Option<Decision>> {
    for arc in cover.complement() {
        debug_assert!(arc.is_point());
        let Some(x) = arc.lo.to_ext() else {
            continue; // irrational remnant: no slope has this boundary point
        };
        if cleared.contains_key(&x) {
            continue;
        }
        let s = boundary_to_slope(&x);
        let r = slope_invariants(pres, &s)?;
        match &r.image {
            Slope::Rational(im) if *im == s => {
                if r.delta >= Rat::one() {
                    return Ok(Some(Decision {
                        verdict: Verdict::Obstructed,
                        witness: Some(ObstructionWitness {
                            slope: s,
                            delta: r.delta,
                        }),
                        certificates: certificates.to_vec(),
                        cleared_points: cleared.clone().into_iter().collect(),
                        depth_reached: options.farey_depth,
                    }));
                }
                cleared.insert(
                    x,
                    format!(
                        "fixed slope with multiplier {}/{} < 1",
                        r.delta.numer(),
                        r.delta.denom()
                    ),
                );
            }
            Slope::Absorbed => {
                cleared.insert(x, "inessential or peripheral pullback (⊙)".into());
            }
            Slope::Rational(im) => {
                cleared.insert(x, format!("slope is not fixed (image {im})"));
            }
        }
    }
    Ok(Some(Decision {
        verdict: Verdict::Rational,
        witness: None,
        certificates: certificates.to_vec(),
        cleared_points: cleared.clone().into_iter().collect(),
        depth_reached: options.farey_depth,
    }))
}
