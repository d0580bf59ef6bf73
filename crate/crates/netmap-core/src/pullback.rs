//! The pullback engine: exact computation of `c(p/q)`, `d(p/q)` and the
//! slope function `μ(p/q)` by lifting straight curves through a presentation.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * The curve of slope `p/q` is the pushed image of a straight curve whose
//!   direction is `q·λ₁ + p·λ₂ = A·(q,p)`, drawn at a generic rational offset
//!   that avoids `ℤ²`. Its full preimage is then the straight plane family of
//!   direction `v = (q,p)` through the `Φ⁻¹`-images of the symmetry orbit of
//!   the curve (the push on the input side cancels).
//! * Preimage lines are indexed by the values of the primitive integer
//!   functional `ν` vanishing on `v`; the symmetry group acts on ν-values by
//!   translation by `2ν(Λ₁)` and negation, and components are the orbits.
//! * Every component maps onto the target curve with the same degree `d`,
//!   defined by `A·u₂ = d·u₂′` where `u₂` (resp. `u₂′`) is the primitive
//!   vector of `2Λ₁` in direction `v` (resp. `w = Av`).
//! * Walking one period of a component and composing a 180° rotation about
//!   the start corner of every green-arc translate crossed (segments in
//!   between compose translations) yields a deck element `(ε, τ)`:
//!   `ε = -1` is peripheral, `ε = +1, τ = 0` inessential, and otherwise the
//!   component is essential with slope `a₂/a₁` where `τ/2 = a₁λ₁ + a₂λ₂`.

use crate::arith::{ExtRational, IntMat2, IntVec2, Slope};
use crate::presentation::{doubled_segment, Presentation, StartClass};
use crate::{int, rat, Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Aggregated invariants of one slope under one map.
#[derive(Clone, Debug, Serialize)]
pub struct PullbackResult {
    /// Number of essential, nonperipheral preimage components.
    pub c: u64,
    /// Common degree by which every preimage component covers the curve.
    pub d: u64,
    /// Common slope of the essential components, or `⊙` if there are none.
    pub image: Slope,
    /// Multiplier `δ = c/d`.
    #[serde(with = "crate::serde_rat")]
    pub delta: Rat,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ComponentClass {
    Inessential,
    Peripheral,
    Essential,
}

/// Per-component detail of a preimage computation.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub class: ComponentClass,
    pub degree: u64,
    /// Essential components only.
    pub slope: Option<ExtRational>,
    /// Deck holonomy sign: `-1` exactly for peripheral components.
    pub deck_sign: i8,
    /// Deck holonomy translation part (a vector of `2Λ₁` when the sign is `+1`).
    pub deck_translation: (String, String),
}

/// An integer linear functional on `ℤ²`.
#[derive(Clone, Debug)]
struct Functional {
    cx: Int,
    cy: Int,
}

impl Functional {
    /// The primitive functional vanishing on `u` (`u ≠ 0`).
    fn perp(u: &IntVec2) -> Functional {
        let p = u.primitive();
        Functional { cx: -p.y, cy: p.x }
    }

    fn eval(&self, v: &IntVec2) -> Int {
        &self.cx * &v.x + &self.cy * &v.y
    }
}

/// Deck element `x ↦ τ + ε·x` of the symmetry group.
#[derive(Clone, Debug)]
struct Deck {
    sign: i8,
    tau: IntVec2,
}

impl Deck {
    fn identity() -> Deck {
        Deck {
            sign: 1,
            tau: IntVec2::zero(),
        }
    }

    /// `self ∘ other` (apply `other` first).
    fn compose(&self, other: &Deck) -> Deck {
        let scaled = other.tau.scale(&int(self.sign.into()));
        Deck {
            sign: self.sign * other.sign,
            tau: &self.tau + &scaled,
        }
    }

    fn rotation_about(center: &IntVec2) -> Deck {
        Deck {
            sign: -1,
            tau: center.scale(&int(2)),
        }
    }

    fn translation(v: &IntVec2) -> Deck {
        Deck {
            sign: 1,
            tau: v.clone(),
        }
    }
}

/// Shared per-map, per-direction data for the trace.
struct Frame {
    a_mat: IntMat2,
    det: Int,
    /// Primitive period of the preimage lines in `2Λ₁`.
    u2: IntVec2,
    /// Common covering degree.
    d: Int,
    /// Integer vector on which the direction functional evaluates to 1.
    base: IntVec2,
    /// ν-values of one representative line per component, as exact rationals.
    line_values: Vec<Rat>,
}

fn minmax(a: &Int, b: &Int) -> (Int, Int) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Minimal positive multiple of the primitive vector `u` lying in `2Λ₁`,
/// where `Λ₁` has matrix `a` (columns `λ₁, λ₂`).
fn primitive_period(a_mat: &IntMat2, det: &Int, u: &IntVec2) -> IntVec2 {
    let adj = a_mat.adjugate();
    let r = adj.apply(u);
    let two_det = int(2) * det;
    let factor_for = |ri: &Int| -> Int {
        if ri.is_zero() {
            Int::one()
        } else {
            &two_det / ri.gcd(&two_det)
        }
    };
    let c = factor_for(&r.x).lcm(&factor_for(&r.y));
    u.scale(&c)
}

fn build_frame(pres: &Presentation, s: &ExtRational, offset: &Rat) -> Result<Frame> {
    let a_mat = pres.matrix();
    let det = a_mat.det();
    if offset.is_integer() {
        return Err(Error::Engine(
            "offset must avoid the integer lattice".into(),
        ));
    }

    // v = (q, p) for slope p/q; w = A·v.
    let v = IntVec2 {
        x: s.denom().clone(),
        y: s.numer().clone(),
    };
    let w = a_mat.apply(&v);

    let nu_v = Functional::perp(&v);
    let nu_w = Functional::perp(&w);

    let g1 = nu_v.eval(&pres.lambda1).gcd(&nu_v.eval(&pres.lambda2));
    let big_m = nu_w.eval(&pres.lambda1).gcd(&nu_w.eval(&pres.lambda2));

    // ν_w ∘ A = k·ν_v: evaluate on a vector with ν_v = 1.
    let egcd = nu_v.cx.extended_gcd(&nu_v.cy);
    debug_assert!(egcd.gcd.is_one());
    let base = IntVec2 {
        x: egcd.x,
        y: egcd.y,
    };
    debug_assert!(nu_v.eval(&base).is_one());
    let k = nu_w.eval(&a_mat.apply(&base));
    if k.is_zero() {
        return Err(Error::Engine("degenerate direction functional".into()));
    }

    // Component count N = |k|·g₁ / M.
    let count = (k.abs() * &g1) / &big_m;
    if ((&count * &big_m) != k.abs() * &g1) || count.is_zero() {
        return Err(Error::Engine("component count is not integral".into()));
    }

    // Degree d from A·u₂ = d·u₂′.
    let u2 = primitive_period(&a_mat, &det, &v);
    let w0 = w.primitive();
    let u2p = primitive_period(&a_mat, &det, &w0);
    let au2 = a_mat.apply(&u2);
    let d = if !u2p.x.is_zero() {
        &au2.x / &u2p.x
    } else {
        &au2.y / &u2p.y
    };
    let d = d.abs();
    {
        let lhs = au2;
        let rhs_pos = u2p.scale(&d);
        let rhs_neg = rhs_pos.clone();
        let rhs_neg = IntVec2 {
            x: -rhs_neg.x,
            y: -rhs_neg.y,
        };
        if lhs != rhs_pos && lhs != rhs_neg {
            return Err(Error::Engine("degree relation A·u₂ = d·u₂′ failed".into()));
        }
    }
    if &count * &d != det {
        return Err(Error::Engine(format!(
            "component degrees do not sum to the map degree: {count}·{d} ≠ {det}"
        )));
    }

    // Representative ν-values: t_j = (c₀ + 2M·j - ν_w(b)) / k, j = 0..N-1.
    let b = pres.translation_vector();
    let b_val = nu_w.eval(&b);
    let mut line_values = Vec::new();
    let mut j = Int::zero();
    while j < count {
        let numerator = offset + Rat::from_integer(int(2) * &big_m * &j - &b_val);
        let t = numerator / Rat::from_integer(k.clone());
        if t.is_integer() {
            return Err(Error::Engine(
                "preimage line hits the integer lattice".into(),
            ));
        }
        line_values.push(t);
        j += 1;
    }

    Ok(Frame {
        a_mat,
        det,
        u2,
        d,
        base,
        line_values,
    })
}

/// One crossing of the walk with a green-arc translate.
struct Crossing {
    s: Rat,
    center: IntVec2,
}

/// Trace one period of the line with ν-value `t` and compose the deck
/// element. All geometry is scaled by `den(t)` so the inner loop runs in
/// integer arithmetic.
fn trace_line(pres: &Presentation, frame: &Frame, t: &Rat) -> Result<Deck> {
    let t_num = t.numer();
    let t_den = t.denom();
    // Scaled base point den·P₀ = t_num · base; scaled period den·u₂.
    let p0s = frame.base.scale(t_num);
    let p1s = &p0s + &frame.u2.scale(t_den);
    let (w_min_x, w_max_x) = minmax(&p0s.x, &p1s.x);
    let (w_min_y, w_max_y) = minmax(&p0s.y, &p1s.y);

    let adj = frame.a_mat.adjugate();
    // Translate coefficients solve 2·den·A(α,β) ∈ box, so divide the
    // adjugate image by 2·den·det.
    let two_det_den = int(2) * &frame.det * t_den;

    let mut crossings: Vec<Crossing> = Vec::new();
    for class in StartClass::ALL {
        let (m0, e) = doubled_segment(pres, class);
        if m0 == e {
            continue; // trivial arc: no push, no crossings
        }
        let center = pres.start_point(class);
        let dir = &e - &m0;
        let cross_u2_dir = &frame.u2.x * &dir.y - &frame.u2.y * &dir.x;
        if cross_u2_dir.is_zero() {
            // Parallel: collinear overlap would put lattice points on the
            // line, which the offset rules out.
            continue;
        }
        // q = den·cross(u2, dir) is the common denominator of both
        // parameters; record its sign for the range tests.
        let q = t_den * &cross_u2_dir;
        let q_pos = q.is_positive();

        // Candidate translate box in scaled coordinates.
        let (s_min_x, s_max_x) = minmax(&(&m0.x * t_den), &(&e.x * t_den));
        let (s_min_y, s_max_y) = minmax(&(&m0.y * t_den), &(&e.y * t_den));
        let lo = (&w_min_x - &s_max_x, &w_min_y - &s_max_y);
        let hi = (&w_max_x - &s_min_x, &w_max_y - &s_min_y);
        let corners = [
            (&lo.0, &lo.1),
            (&lo.0, &hi.1),
            (&hi.0, &lo.1),
            (&hi.0, &hi.1),
        ];
        let mut a_lo: Option<Int> = None;
        let mut a_hi: Option<Int> = None;
        let mut b_lo: Option<Int> = None;
        let mut b_hi: Option<Int> = None;
        for (x, y) in corners {
            let wx = &adj.a * x + &adj.b * y;
            let wy = &adj.c * x + &adj.d * y;
            let (af, ac) = (wx.div_floor(&two_det_den), wx.div_ceil(&two_det_den));
            let (bf, bc) = (wy.div_floor(&two_det_den), wy.div_ceil(&two_det_den));
            a_lo = Some(a_lo.map_or(af.clone(), |v: Int| v.min(af)));
            a_hi = Some(a_hi.map_or(ac.clone(), |v: Int| v.max(ac)));
            b_lo = Some(b_lo.map_or(bf.clone(), |v: Int| v.min(bf)));
            b_hi = Some(b_hi.map_or(bc.clone(), |v: Int| v.max(bc)));
        }
        let (a_lo, a_hi) = (a_lo.unwrap(), a_hi.unwrap());
        let (b_lo, b_hi) = (b_lo.unwrap(), b_hi.unwrap());

        let mut alpha = a_lo;
        while alpha <= a_hi {
            let mut beta = b_lo.clone();
            while beta <= b_hi {
                let lam = &pres.lambda1.scale(&alpha) + &pres.lambda2.scale(&beta);
                let shift = lam.scale(&int(2));
                // Solve P₀ + s·u₂ = (m0 + shift) + r·dir in scaled integers:
                // s = NS/q, r = NR/q with c0s = den·(m0 + shift) - den·P₀.
                let c0x = (&m0.x + &shift.x) * t_den - &p0s.x;
                let c0y = (&m0.y + &shift.y) * t_den - &p0s.y;
                let ns = &c0x * &dir.y - &c0y * &dir.x;
                let nr = &c0x * &frame.u2.y - &c0y * &frame.u2.x;
                // Orient so the common denominator is positive.
                let (ns, nr, qq) = if q_pos {
                    (ns, nr, q.clone())
                } else {
                    (-ns, -nr, -&q)
                };
                let r_in_open = nr.is_positive() && nr < qq;
                let s_in_window = !ns.is_negative() && ns < qq;
                if r_in_open && s_in_window {
                    if int(2) * &nr == qq {
                        return Err(Error::Engine(
                            "walk crosses a green arc at its lattice center".into(),
                        ));
                    }
                    crossings.push(Crossing {
                        s: Rat::new(ns, qq),
                        center: &center + &shift,
                    });
                } else if (nr.is_zero() || nr == qq) && s_in_window {
                    return Err(Error::Engine(
                        "walk crosses a green arc at a lattice endpoint".into(),
                    ));
                }
                beta += 1;
            }
            alpha += 1;
        }
    }

    // Choose a window start σ avoiding all crossing parameters, then order
    // the crossings cyclically from σ; wrapped crossings shift by the period.
    let sigma = if crossings.iter().all(|c| !c.s.is_zero()) {
        Rat::zero()
    } else {
        let mut smallest_pos: Option<Rat> = None;
        for c in &crossings {
            if c.s.is_positive() {
                smallest_pos = Some(smallest_pos.map_or(c.s.clone(), |m: Rat| m.min(c.s.clone())));
            }
        }
        smallest_pos.map_or(rat(1, 2), |m| m / rat(2, 1))
    };
    let mut ordered: Vec<(Rat, IntVec2)> = crossings
        .into_iter()
        .map(|c| {
            if c.s > sigma {
                (c.s, c.center)
            } else {
                (&c.s + Rat::one(), &c.center + &frame.u2)
            }
        })
        .collect();
    ordered.sort_by(|a, b| a.0.cmp(&b.0));
    for pair in ordered.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::Engine(
                "two green-arc translates cross the walk at one point".into(),
            ));
        }
    }

    let mut deck = Deck::identity();
    for (_, center) in &ordered {
        deck = deck.compose(&Deck::rotation_about(center));
    }
    Ok(deck.compose(&Deck::translation(&frame.u2)))
}

fn classify(frame: &Frame, deck: &Deck) -> Result<ComponentReport> {
    let degree =
        u64::try_from(frame.d.clone()).map_err(|_| Error::Engine("degree overflow".into()))?;
    let report = |class, slope| ComponentReport {
        class,
        degree,
        slope,
        deck_sign: deck.sign,
        deck_translation: (deck.tau.x.to_string(), deck.tau.y.to_string()),
    };
    if deck.sign == -1 {
        return Ok(report(ComponentClass::Peripheral, None));
    }
    if deck.tau.is_zero() {
        return Ok(report(ComponentClass::Inessential, None));
    }
    // τ/2 = a₁λ₁ + a₂λ₂ gives the essential slope a₂/a₁.
    let half = IntVec2 {
        x: deck.tau.x.clone() / int(2),
        y: deck.tau.y.clone() / int(2),
    };
    if half.scale(&int(2)) != deck.tau {
        return Err(Error::Engine("deck translation is not even".into()));
    }
    let adj = frame.a_mat.adjugate();
    let r = adj.apply(&half);
    if !(&r.x % &frame.det).is_zero() || !(&r.y % &frame.det).is_zero() {
        return Err(Error::Engine("deck translation is not in 2Λ₁".into()));
    }
    let a1 = &r.x / &frame.det;
    let a2 = &r.y / &frame.det;
    let slope = crate::arith::reduce_slope(a2, a1)?;
    Ok(report(ComponentClass::Essential, Some(slope)))
}

/// Full per-component detail for the preimage of the curve of slope `s`,
/// computed at the canonical generic offset.
pub fn preimage_components(pres: &Presentation, s: &ExtRational) -> Result<Vec<ComponentReport>> {
    preimage_components_with_offset(pres, s, &rat(1, 2))
}

/// As [`preimage_components`], with an explicit generic offset (any
/// non-integral rational); results do not depend on the choice.
pub fn preimage_components_with_offset(
    pres: &Presentation,
    s: &ExtRational,
    offset: &Rat,
) -> Result<Vec<ComponentReport>> {
    let frame = build_frame(pres, s, offset)?;
    let mut out = Vec::new();
    for t in &frame.line_values {
        let deck = trace_line(pres, &frame, t)?;
        out.push(classify(&frame, &deck)?);
    }
    // Engine invariants: shared essential slope, degrees sum to deg(f).
    let mut slopes = out.iter().filter_map(|r| r.slope.clone());
    if let Some(first) = slopes.next() {
        if slopes.any(|s| s != first) {
            return Err(Error::Engine(
                "essential components disagree on slope".into(),
            ));
        }
    }
    let total = int(out.len() as i64) * &frame.d;
    if total != frame.det {
        return Err(Error::Engine(
            "component degrees do not sum to deg(f)".into(),
        ));
    }
    Ok(out)
}

/// `slope_invariants(P, s)`: the triple `(c, d, μ(s))` and multiplier `δ`.
pub fn slope_invariants(pres: &Presentation, s: &ExtRational) -> Result<PullbackResult> {
    slope_invariants_with_offset(pres, s, &rat(1, 2))
}

pub fn slope_invariants_with_offset(
    pres: &Presentation,
    s: &ExtRational,
    offset: &Rat,
) -> Result<PullbackResult> {
    let comps = preimage_components_with_offset(pres, s, offset)?;
    let d = comps.first().map_or(1, |r| r.degree);
    let essential: Vec<&ComponentReport> = comps
        .iter()
        .filter(|r| r.class == ComponentClass::Essential)
        .collect();
    let c = essential.len() as u64;
    let image = match essential.first() {
        Some(r) => Slope::Rational(r.slope.clone().expect("essential components carry a slope")),
        None => Slope::Absorbed,
    };
    let delta = Rat::new(int(c as i64), int(d as i64));
    Ok(PullbackResult { c, d, image, delta })
}

/// The slope ↔ boundary dictionary: slope `p/q` corresponds to the ideal
/// boundary point `-q/p`. The map is an involution of ∂ℍ ∩ ℚ̄.
pub fn boundary_dictionary(x: &ExtRational) -> ExtRational {
    crate::arith::reduce_slope(-x.denom().clone(), x.numer().clone())
        .expect("extended rationals are never 0/0")
}

/// Inverse direction of [`boundary_dictionary`] (the same involution,
/// named for call-site clarity).
pub fn boundary_to_slope(x: &ExtRational) -> ExtRational {
    boundary_dictionary(x)
}

/// Boundary image of a slope-function value: `⊙` has no boundary image (the
/// pullback map sends the corresponding cusp into the interior).
pub fn boundary_image(s: &Slope) -> Option<ExtRational> {
    s.as_rational().map(boundary_dictionary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictionary_involution_and_values() {
        let half: ExtRational = "1/2".parse().unwrap();
        assert_eq!(boundary_dictionary(&half).to_string(), "-2/1");
        assert_eq!(
            boundary_dictionary(&ExtRational::infinity()),
            ExtRational::zero()
        );
        assert_eq!(
            boundary_dictionary(&ExtRational::zero()),
            ExtRational::infinity()
        );
        for s in ["3/5", "-7/2", "0/1", "∞", "1/1"] {
            let x: ExtRational = s.parse().unwrap();
            assert_eq!(boundary_dictionary(&boundary_dictionary(&x)), x);
        }
    }
}
