//! NET map presentation diagrams: the input data model.
//!
//! A presentation is a lattice basis `λ₁, λ₂` (the columns of the affine
//! matrix `A`), a translation term `b ∈ {0, λ₁, λ₂, λ₁+λ₂}`, and four green
//! arcs, one starting at each corner class of `Λ₁/2Λ₁`. The file format
//! encodes each arc by its start class and end point; the doubled segments
//! obtained by 180° rotation about the start are derived internally and
//! never entered by hand.

use crate::arith::{IntMat2, IntVec2};
use crate::hurwitz::HurwitzStructureSet;
use crate::{int, Error, Int, Result};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One of the four corner classes `{0, λ₁, λ₂, λ₁+λ₂}` of `Λ₁/2Λ₁`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum StartClass {
    Zero,
    L1,
    L2,
    L1L2,
}

impl StartClass {
    pub const ALL: [StartClass; 4] = [
        StartClass::Zero,
        StartClass::L1,
        StartClass::L2,
        StartClass::L1L2,
    ];

    pub fn parse(tok: &str) -> Option<StartClass> {
        match tok {
            "0" => Some(StartClass::Zero),
            "l1" => Some(StartClass::L1),
            "l2" => Some(StartClass::L2),
            "l1+l2" | "l2+l1" => Some(StartClass::L1L2),
            _ => None,
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            StartClass::Zero => "0",
            StartClass::L1 => "l1",
            StartClass::L2 => "l2",
            StartClass::L1L2 => "l1+l2",
        }
    }
}

impl fmt::Display for StartClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A green arc: a straight segment from the corner point of its start class
/// to an end point of `ℤ²`. Trivial arcs (`end == start`) contribute no push.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GreenArc {
    pub start: StartClass,
    pub end: IntVec2,
}

/// A NET map presentation diagram. `virtual_diagram` marks diagrams read
/// with `translation virtual`, whose translation term defaults to 0 and is
/// considered unspecified.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub lambda1: IntVec2,
    pub lambda2: IntVec2,
    pub translation: StartClass,
    pub virtual_diagram: bool,
    /// Indexed in the order of [`StartClass::ALL`].
    pub arcs: [GreenArc; 4],
}

impl Presentation {
    /// The presentation matrix with columns `λ₁, λ₂`.
    pub fn matrix(&self) -> IntMat2 {
        IntMat2::from_columns(&self.lambda1, &self.lambda2)
    }

    pub fn degree(&self) -> Int {
        self.matrix().det()
    }

    pub fn start_point(&self, class: StartClass) -> IntVec2 {
        match class {
            StartClass::Zero => IntVec2::zero(),
            StartClass::L1 => self.lambda1.clone(),
            StartClass::L2 => self.lambda2.clone(),
            StartClass::L1L2 => &self.lambda1 + &self.lambda2,
        }
    }

    pub fn translation_vector(&self) -> IntVec2 {
        self.start_point(self.translation)
    }

    pub fn arc(&self, class: StartClass) -> &GreenArc {
        &self.arcs[StartClass::ALL.iter().position(|c| *c == class).unwrap()]
    }

    /// Copy with a different translation term (used by the invariance tests
    /// and by catalog realization).
    pub fn with_translation(&self, translation: StartClass) -> Presentation {
        Presentation {
            translation,
            virtual_diagram: false,
            ..self.clone()
        }
    }

    /// Residue bookkeeping for `ℤ²/2Λ₁`, shared by several modules.
    pub fn class_map(&self) -> Result<ClassMap> {
        ClassMap::new(&self.matrix())
    }

    /// Serialize back to the presentation file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("lambda1 {} {}\n", self.lambda1.x, self.lambda1.y));
        s.push_str(&format!("lambda2 {} {}\n", self.lambda2.x, self.lambda2.y));
        if self.virtual_diagram {
            s.push_str("translation virtual\n");
        } else {
            s.push_str(&format!("translation {}\n", self.translation.token()));
        }
        for arc in &self.arcs {
            s.push_str(&format!(
                "arc {} -> {} {}\n",
                arc.start.token(),
                arc.end.x,
                arc.end.y
            ));
        }
        s
    }
}

/// Canonical coordinates on `ℤ²/2Λ₁`: a unimodular `P` with
/// `P·A·Q = diag(m, n)` identifies `ℤ²/2Λ₁` with `ℤ_{2m} ⊕ ℤ_{2n}`.
#[derive(Clone, Debug)]
pub struct ClassMap {
    pub m: Int,
    pub n: Int,
    p: IntMat2,
}

/// A residue in `ℤ_{2m} ⊕ ℤ_{2n}`, normalized into `[0, 2m) × [0, 2n)`.
pub type ClassCode = (Int, Int);

impl ClassMap {
    pub fn new(a: &IntMat2) -> Result<ClassMap> {
        let (m, n, p, _q) = crate::arith::smith_normal_form(a)?;
        // When the basis is already the diagonal normal form, use the
        // identity identification so reported residues match the natural
        // coordinates.
        let p = if *a == IntMat2::new(m.clone(), 0, 0, n.clone()) {
            IntMat2::identity()
        } else {
            p
        };
        Ok(ClassMap { m, n, p })
    }

    pub fn two_m(&self) -> Int {
        int(2) * &self.m
    }

    pub fn two_n(&self) -> Int {
        int(2) * &self.n
    }

    pub fn code(&self, v: &IntVec2) -> ClassCode {
        let w = self.p.apply(v);
        (w.x.mod_floor(&self.two_m()), w.y.mod_floor(&self.two_n()))
    }

    pub fn neg(&self, c: &ClassCode) -> ClassCode {
        (
            (-&c.0).mod_floor(&self.two_m()),
            (-&c.1).mod_floor(&self.two_n()),
        )
    }

    pub fn add(&self, a: &ClassCode, b: &ClassCode) -> ClassCode {
        (
            (&a.0 + &b.0).mod_floor(&self.two_m()),
            (&a.1 + &b.1).mod_floor(&self.two_n()),
        )
    }

    /// Canonical representative of the pair `{c, -c}`.
    pub fn pm_code(&self, v: &IntVec2) -> ClassCode {
        let c = self.code(v);
        let nc = self.neg(&c);
        c.min(nc)
    }

    pub fn pm_of_code(&self, c: &ClassCode) -> ClassCode {
        c.clone().min(self.neg(c))
    }

    /// `2·class == 0`, i.e. the class lies in `Λ₁/2Λ₁` (non-critical).
    pub fn is_two_torsion(&self, c: &ClassCode) -> bool {
        (&c.0 % &self.m).is_zero() && (&c.1 % &self.n).is_zero()
    }

    /// An integer representative of a residue code.
    pub fn rep(&self, code: &ClassCode) -> IntVec2 {
        let p_inv = self.p.inverse_unimodular().expect("P is unimodular");
        p_inv.apply(&IntVec2 {
            x: code.0.clone(),
            y: code.1.clone(),
        })
    }

    /// Every residue class, in a fixed order.
    pub fn all_codes(&self) -> Vec<ClassCode> {
        let (tm, tn) = (self.two_m(), self.two_n());
        let mut out = Vec::new();
        let mut x = Int::zero();
        while x < tm {
            let mut y = Int::zero();
            while y < tn {
                out.push((x.clone(), y.clone()));
                y += 1;
            }
            x += 1;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse the presentation file format (UTF-8 text, `#` comments):
///
/// ```text
/// lambda1 <int> <int>
/// lambda2 <int> <int>
/// translation <0|l1|l2|l1+l2|virtual>
/// arc <0|l1|l2|l1+l2> -> <int> <int>   (four lines, one per start class)
/// ```
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lambda1 = None;
    let mut lambda2 = None;
    let mut translation: Option<(StartClass, bool)> = None;
    let mut arcs: BTreeMap<StartClass, (usize, IntVec2)> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let parse_int = |tok: &str| -> Result<Int> {
            tok.parse::<Int>()
                .map_err(|_| err(line_no, format!("expected an integer, found {tok:?}")))
        };
        match toks[0] {
            "lambda1" | "lambda2" => {
                if toks.len() != 3 {
                    return Err(err(line_no, format!("{} takes two integers", toks[0])));
                }
                let v = IntVec2 {
                    x: parse_int(toks[1])?,
                    y: parse_int(toks[2])?,
                };
                if toks[0] == "lambda1" {
                    lambda1 = Some(v);
                } else {
                    lambda2 = Some(v);
                }
            }
            "translation" => {
                if toks.len() != 2 {
                    return Err(err(line_no, "translation takes one token".into()));
                }
                translation = Some(if toks[1] == "virtual" {
                    (StartClass::Zero, true)
                } else {
                    match StartClass::parse(toks[1]) {
                        Some(c) => (c, false),
                        None => {
                            return Err(err(
                                line_no,
                                format!(
                                    "translation term {:?} is not one of 0, l1, l2, l1+l2, virtual",
                                    toks[1]
                                ),
                            ))
                        }
                    }
                });
            }
            "arc" => {
                if toks.len() != 5 || toks[2] != "->" {
                    return Err(err(
                        line_no,
                        "arc lines look like: arc <class> -> <int> <int>".into(),
                    ));
                }
                let class = StartClass::parse(toks[1]).ok_or_else(|| {
                    err(
                        line_no,
                        format!("arc start {:?} is not one of 0, l1, l2, l1+l2", toks[1]),
                    )
                })?;
                if arcs.contains_key(&class) {
                    return Err(err(
                        line_no,
                        format!("duplicate arc for start class {class}"),
                    ));
                }
                let end = IntVec2 {
                    x: parse_int(toks[3])?,
                    y: parse_int(toks[4])?,
                };
                arcs.insert(class, (line_no, end));
            }
            other => return Err(err(line_no, format!("unknown directive {other:?}"))),
        }
    }

    let lambda1 = lambda1.ok_or_else(|| err(0, "missing lambda1 line".into()))?;
    let lambda2 = lambda2.ok_or_else(|| err(0, "missing lambda2 line".into()))?;
    let (translation, virtual_diagram) =
        translation.ok_or_else(|| err(0, "missing translation line".into()))?;
    for class in StartClass::ALL {
        if !arcs.contains_key(&class) {
            return Err(err(0, format!("missing arc for start class {class}")));
        }
    }
    let det = IntMat2::from_columns(&lambda1, &lambda2).det();
    if det.is_negative() || det.is_zero() {
        return Err(err(
            0,
            format!("basis is not positively oriented (det = {det})"),
        ));
    }
    let arcs = StartClass::ALL.map(|class| GreenArc {
        start: class,
        end: arcs[&class].1.clone(),
    });
    Ok(Presentation {
        lambda1,
        lambda2,
        translation,
        virtual_diagram,
        arcs,
    })
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub degree: u64,
    pub valid: bool,
    /// Human-readable diagnostics for each failed check.
    pub failures: Vec<String>,
    /// For each translation choice `0, λ₁, λ₂, λ₁+λ₂`: does the completed map
    /// have four postcritical points?
    pub net_for_translations: [bool; 4],
    pub euclidean: bool,
}

/// Exact orientation of the triple `(a, b, c)`.
fn orient(a: &IntVec2, b: &IntVec2, c: &IntVec2) -> Int {
    let abx = &b.x - &a.x;
    let aby = &b.y - &a.y;
    let acx = &c.x - &a.x;
    let acy = &c.y - &a.y;
    abx * acy - aby * acx
}

fn on_segment(p: &IntVec2, a: &IntVec2, b: &IntVec2) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let min_x = a.x.clone().min(b.x.clone());
    let max_x = a.x.clone().max(b.x.clone());
    let min_y = a.y.clone().min(b.y.clone());
    let max_y = a.y.clone().max(b.y.clone());
    min_x <= p.x && p.x <= max_x && min_y <= p.y && p.y <= max_y
}

/// Closed segments (possibly degenerate to points) share at least one point.
pub(crate) fn segments_intersect(a1: &IntVec2, a2: &IntVec2, b1: &IntVec2, b2: &IntVec2) -> bool {
    if a1 == a2 {
        return on_segment(a1, b1, b2);
    }
    if b1 == b2 {
        return on_segment(b1, a1, a2);
    }
    let o1 = orient(a1, a2, b1).signum();
    let o2 = orient(a1, a2, b2).signum();
    let o3 = orient(b1, b2, a1).signum();
    let o4 = orient(b1, b2, a2).signum();
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1.is_zero() && on_segment(b1, a1, a2))
        || (o2.is_zero() && on_segment(b2, a1, a2))
        || (o3.is_zero() && on_segment(a1, b1, b2))
        || (o4.is_zero() && on_segment(a2, b1, b2))
}

/// The doubled segment of an arc: the full preimage of the pushed arc through
/// its start, `[2a - e, e]`.
pub(crate) fn doubled_segment(pres: &Presentation, class: StartClass) -> (IntVec2, IntVec2) {
    let a = pres.start_point(class);
    let e = pres.arc(class).end.clone();
    let mirrored = &a.scale(&int(2)) - &e;
    (mirrored, e)
}

fn bbox(points: &[&IntVec2]) -> (Int, Int, Int, Int) {
    let mut min_x = points[0].x.clone();
    let mut max_x = points[0].x.clone();
    let mut min_y = points[0].y.clone();
    let mut max_y = points[0].y.clone();
    for p in &points[1..] {
        min_x = min_x.min(p.x.clone());
        max_x = max_x.max(p.x.clone());
        min_y = min_y.min(p.y.clone());
        max_y = max_y.max(p.y.clone());
    }
    (min_x, max_x, min_y, max_y)
}

/// All lattice translates `2λ, λ ∈ Λ₁` for which `seg_b + 2λ` could meet
/// `seg_a`, by exact bounding-box arithmetic in basis coordinates.
pub(crate) fn candidate_translates(
    pres: &Presentation,
    seg_a: (&IntVec2, &IntVec2),
    seg_b: (&IntVec2, &IntVec2),
) -> Vec<IntVec2> {
    let (a_min_x, a_max_x, a_min_y, a_max_y) = bbox(&[seg_a.0, seg_a.1]);
    let (b_min_x, b_max_x, b_min_y, b_max_y) = bbox(&[seg_b.0, seg_b.1]);
    // 2λ must lie in the Minkowski difference box.
    let lo = IntVec2 {
        x: &a_min_x - &b_max_x,
        y: &a_min_y - &b_max_y,
    };
    let hi = IntVec2 {
        x: &a_max_x - &b_min_x,
        y: &a_max_y - &b_min_y,
    };
    // λ = A(α, β)ᵀ ⇒ (α, β) = adj(A)·λ / det. Bound α, β over the box corners.
    let a_mat = pres.matrix();
    let adj = a_mat.adjugate();
    let det = a_mat.det();
    let two_det = int(2) * &det;
    let corners = [
        IntVec2 {
            x: lo.x.clone(),
            y: lo.y.clone(),
        },
        IntVec2 {
            x: lo.x.clone(),
            y: hi.y.clone(),
        },
        IntVec2 {
            x: hi.x.clone(),
            y: lo.y.clone(),
        },
        IntVec2 {
            x: hi.x.clone(),
            y: hi.y.clone(),
        },
    ];
    let mut alpha_lo: Option<Int> = None;
    let mut alpha_hi: Option<Int> = None;
    let mut beta_lo: Option<Int> = None;
    let mut beta_hi: Option<Int> = None;
    for corner in &corners {
        let w = adj.apply(corner);
        let af = w.x.div_floor(&two_det);
        let ac = w.x.div_ceil(&two_det);
        let bf = w.y.div_floor(&two_det);
        let bc = w.y.div_ceil(&two_det);
        alpha_lo = Some(alpha_lo.map_or(af.clone(), |v: Int| v.min(af)));
        alpha_hi = Some(alpha_hi.map_or(ac.clone(), |v: Int| v.max(ac)));
        beta_lo = Some(beta_lo.map_or(bf.clone(), |v: Int| v.min(bf)));
        beta_hi = Some(beta_hi.map_or(bc.clone(), |v: Int| v.max(bc)));
    }
    let (alpha_lo, alpha_hi) = (alpha_lo.unwrap(), alpha_hi.unwrap());
    let (beta_lo, beta_hi) = (beta_lo.unwrap(), beta_hi.unwrap());
    let mut out = Vec::new();
    let mut alpha = alpha_lo;
    while alpha <= alpha_hi {
        let mut beta = beta_lo.clone();
        while beta <= beta_hi {
            let lam = &pres.lambda1.scale(&alpha) + &pres.lambda2.scale(&beta);
            out.push(lam.scale(&int(2)));
            beta += 1;
        }
        alpha += 1;
    }
    out
}

/// Forward map on `±`-classes induced by `f = h ∘ g` for translation `b`:
/// a class `z` goes to `Φ(z) = Az + b ∈ Λ₁`, whose corner class names the
/// green arc whose end is the image.
fn class_dynamics(
    pres: &Presentation,
    cm: &ClassMap,
    b: &IntVec2,
) -> BTreeMap<ClassCode, ClassCode> {
    let corner_code: BTreeMap<ClassCode, StartClass> = StartClass::ALL
        .iter()
        .map(|&c| (cm.pm_code(&pres.start_point(c)), c))
        .collect();
    let a_mat = pres.matrix();
    let mut map = BTreeMap::new();
    for code in cm.all_codes() {
        let pm = cm.pm_of_code(&code);
        if map.contains_key(&pm) {
            continue;
        }
        let rep = cm.rep(&code);
        let image = &a_mat.apply(&rep) + b;
        let corner = corner_code[&cm.pm_code(&image)];
        let end_code = cm.pm_code(&pres.arc(corner).end);
        map.insert(pm, end_code);
    }
    map
}

/// The four marked `±`-classes (arc end classes).
fn marked_codes(pres: &Presentation, cm: &ClassMap) -> Vec<ClassCode> {
    pres.arcs.iter().map(|arc| cm.pm_code(&arc.end)).collect()
}

/// Postcritical set of the completed map with translation `b`: forward orbit
/// of the critical values under the class dynamics.
fn postcritical_codes(pres: &Presentation, cm: &ClassMap, b: &IntVec2) -> BTreeSet<ClassCode> {
    let dyn_map = class_dynamics(pres, cm, b);
    let mut post = BTreeSet::new();
    for code in cm.all_codes() {
        let pm = cm.pm_of_code(&code);
        if cm.is_two_torsion(&pm) {
            continue; // not a critical point
        }
        let mut current = dyn_map[&pm].clone();
        while post.insert(current.clone()) {
            current = dyn_map[&current].clone();
        }
    }
    post
}

/// Validate a parsed presentation: orientation/degree, arc geometry,
/// distinctness of the marked classes, and the postcritical count.
pub fn validate(pres: &Presentation) -> Result<ValidationReport> {
    let mut failures = Vec::new();
    let det = pres.degree();
    if det < int(2) {
        failures.push(format!("degree (det of basis) is {det}, must be ≥ 2"));
    }
    let cm = pres.class_map()?;

    // Marked ±-classes pairwise disjoint. (Arc interiors may pass through
    // unmarked lattice classes; crossings with marked classes or other arcs
    // are caught by the disjointness check below.)
    let marked = marked_codes(pres, &cm);
    for i in 0..4 {
        for j in (i + 1)..4 {
            if marked[i] == marked[j] {
                failures.push(format!(
                    "arcs {} and {} end in the same ±-class of ℤ²/2Λ₁",
                    StartClass::ALL[i],
                    StartClass::ALL[j]
                ));
            }
        }
    }

    // Pairwise disjointness of the doubled segments over all translates.
    'outer: for i in 0..4 {
        for j in i..4 {
            let (a1, a2) = doubled_segment(pres, StartClass::ALL[i]);
            let (b1, b2) = doubled_segment(pres, StartClass::ALL[j]);
            for t in candidate_translates(pres, (&a1, &a2), (&b1, &b2)) {
                if i == j && t.is_zero() {
                    continue;
                }
                let tb1 = &b1 + &t;
                let tb2 = &b2 + &t;
                if segments_intersect(&a1, &a2, &tb1, &tb2) {
                    failures.push(format!(
                        "arcs {} and {} are not disjoint (translate by {t})",
                        StartClass::ALL[i],
                        StartClass::ALL[j]
                    ));
                    continue 'outer;
                }
            }
        }
    }

    // Postcritical count per translation term.
    let mut net_for_translations = [false; 4];
    let marked_set: BTreeSet<ClassCode> = marked.iter().cloned().collect();
    if failures.is_empty() && marked_set.len() == 4 {
        for (k, class) in StartClass::ALL.iter().enumerate() {
            let b = pres.start_point(*class);
            let post = postcritical_codes(pres, &cm, &b);
            net_for_translations[k] = post == marked_set;
        }
        let own_idx = StartClass::ALL
            .iter()
            .position(|c| *c == pres.translation)
            .unwrap();
        let net_ok = if pres.virtual_diagram {
            net_for_translations.iter().any(|&ok| ok)
        } else {
            net_for_translations[own_idx]
        };
        if !net_ok {
            failures
                .push("fewer than four postcritical points: the completed map is not NET".into());
        }
    }

    let euclidean = marked.iter().all(|c| cm.is_two_torsion(c));
    let degree = u64::try_from(det.max(int(0))).unwrap_or(0);
    Ok(ValidationReport {
        degree,
        valid: failures.is_empty(),
        failures,
        net_for_translations,
        euclidean,
    })
}

/// `transform(P, M)`: apply `M ∈ SL(2,ℤ)` to the whole diagram. Corresponds
/// to postcomposing the presented map by the modular element of `M`.
pub fn transform(pres: &Presentation, m: &IntMat2) -> Result<Presentation> {
    if m.det() != int(1) {
        return Err(Error::NotOrientationPreserving);
    }
    let arcs = StartClass::ALL.map(|class| GreenArc {
        start: class,
        end: m.apply(&pres.arc(class).end),
    });
    Ok(Presentation {
        lambda1: m.apply(&pres.lambda1),
        lambda2: m.apply(&pres.lambda2),
        translation: pres.translation,
        virtual_diagram: pres.virtual_diagram,
        arcs,
    })
}

/// The Hurwitz structure set: the four marked ±-classes of `ℤ²/2Λ₁`,
/// reported in the canonical `ℤ_{2m} ⊕ ℤ_{2n}` coordinates.
pub fn hurwitz_structure_set(pres: &Presentation) -> Result<HurwitzStructureSet> {
    let cm = pres.class_map()?;
    let classes = marked_codes(pres, &cm);
    HurwitzStructureSet::new(cm.m.clone(), cm.n.clone(), classes)
}

/// Euclidean ⟺ no marked point is critical ⟺ every marked class `h` has
/// `2h = 0` in `ℤ²/2Λ₁`.
pub fn is_euclidean(pres: &Presentation) -> Result<bool> {
    let cm = pres.class_map()?;
    Ok(marked_codes(pres, &cm).iter().all(|c| cm.is_two_torsion(c)))
}

// ---------------------------------------------------------------------------
// Portraits
// ---------------------------------------------------------------------------

/// Dynamic and static portraits plus augmented branch data.
#[derive(Clone, Debug, Serialize)]
pub struct Portrait {
    /// Vertices of the dynamic portrait: postcritical and/or critical
    /// ±-classes, with flags.
    pub vertices: Vec<PortraitVertex>,
    /// `(from, to, local degree)` into `vertices`.
    pub dynamic_edges: Vec<(usize, usize, u32)>,
    /// Static portrait edges `(domain vertex, marked target index, degree)`;
    /// domain vertices index into `vertices`.
    pub static_edges: Vec<(usize, usize, u32)>,
    /// For each marked point, the partition of `deg(f)` by local degrees of
    /// its full preimage, sorted descending.
    pub branch_data: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PortraitVertex {
    /// Canonical residue label (for reproducibility; not itself an invariant).
    pub label: String,
    pub marked: bool,
    pub critical: bool,
}

impl Portrait {
    /// Sorted multiset of cycle signatures of the dynamic portrait, where a
    /// cycle signature is the cyclically-minimal sequence of local degrees
    /// along the cycle.
    pub fn cycle_degree_signatures(&self) -> Vec<Vec<u32>> {
        let n = self.vertices.len();
        let mut succ = vec![usize::MAX; n];
        let mut deg = vec![0u32; n];
        for &(from, to, w) in &self.dynamic_edges {
            succ[from] = to;
            deg[from] = w;
        }
        let mut sigs = Vec::new();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] || succ[start] == usize::MAX {
                continue;
            }
            let mut cursor = start;
            let mut visited = Vec::new();
            let mut mark = BTreeSet::new();
            while mark.insert(cursor) {
                visited.push(cursor);
                cursor = succ[cursor];
            }
            let cycle: Vec<usize> = match visited.iter().position(|&v| v == cursor) {
                Some(pos) => visited[pos..].to_vec(),
                None => continue, // ran into an already-processed component
            };
            if cycle.iter().any(|&v| seen[v]) {
                for &v in &visited {
                    seen[v] = true;
                }
                continue;
            }
            for &v in &visited {
                seen[v] = true;
            }
            let degs: Vec<u32> = cycle.iter().map(|&v| deg[v]).collect();
            let mut best = degs.clone();
            for r in 1..degs.len() {
                let mut rot = degs.clone();
                rot.rotate_left(r);
                if rot < best {
                    best = rot;
                }
            }
            sigs.push(best);
        }
        sigs.sort();
        sigs
    }
}

/// Compute the dynamic portrait, static portrait and augmented branch data
/// of the completed map (using the presentation's own translation term).
pub fn portraits(pres: &Presentation) -> Result<Portrait> {
    let cm = pres.class_map()?;
    let b = pres.translation_vector();
    let dyn_map = class_dynamics(pres, &cm, &b);
    let marked: Vec<ClassCode> = marked_codes(pres, &cm);
    let post = postcritical_codes(pres, &cm, &b);

    // Vertex set: C(f) ∪ P(f), where P(f) is the computed postcritical set
    // (equal to the marked set for valid NET input).
    let mut vertex_codes: Vec<ClassCode> = Vec::new();
    for code in dyn_map.keys() {
        let critical = !cm.is_two_torsion(code);
        if critical || post.contains(code) {
            vertex_codes.push(code.clone());
        }
    }
    vertex_codes.sort();
    let index: BTreeMap<ClassCode, usize> = vertex_codes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();

    let vertices: Vec<PortraitVertex> = vertex_codes
        .iter()
        .map(|c| PortraitVertex {
            label: format!("({},{})", c.0, c.1),
            marked: post.contains(c),
            critical: !cm.is_two_torsion(c),
        })
        .collect();

    let mut dynamic_edges = Vec::new();
    for (i, code) in vertex_codes.iter().enumerate() {
        let to = &dyn_map[code];
        let weight = if vertices[i].critical { 2 } else { 1 };
        dynamic_edges.push((i, index[to], weight));
    }

    // Static portrait: same domain vertices, targets are the marked points.
    let marked_index: BTreeMap<ClassCode, usize> = marked
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let mut static_edges = Vec::new();
    for (i, code) in vertex_codes.iter().enumerate() {
        let to = &dyn_map[code];
        if let Some(&ti) = marked_index.get(to) {
            let weight = if vertices[i].critical { 2 } else { 1 };
            static_edges.push((i, ti, weight));
        }
    }

    // Branch data over the full fibers.
    let mut branch_data = Vec::new();
    for target in &marked {
        let mut partition = Vec::new();
        for (code, to) in &dyn_map {
            if to == target {
                partition.push(if cm.is_two_torsion(code) { 1u32 } else { 2u32 });
            }
        }
        partition.sort_unstable_by(|a, b| b.cmp(a));
        let total: u32 = partition.iter().sum();
        let degree = u64::try_from(pres.degree()).unwrap_or(0);
        if u64::from(total) != degree {
            return Err(Error::Engine(format!(
                "branch data for {target:?} sums to {total}, expected {degree}"
            )));
        }
        branch_data.push(partition);
    }

    Ok(Portrait {
        vertices,
        dynamic_edges,
        static_edges,
        branch_data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE_EUCLIDEAN: &str = "\
lambda1 2 0
lambda2 0 1
translation 0
arc 0 -> 0 0
arc l1 -> 2 0
arc l2 -> 0 1
arc l1+l2 -> 2 1
";

    #[test]
    fn parse_and_reserialize() {
        let p = parse_presentation(SQUARE_EUCLIDEAN).unwrap();
        assert_eq!(p.degree(), int(2));
        assert!(!p.virtual_diagram);
        let again = parse_presentation(&p.to_file_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "lambda1 2 0\nlambda2 0 1\ntranslation (1,1)\n";
        match parse_presentation(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let neg = "lambda1 0 1\nlambda2 1 0\ntranslation 0\narc 0 -> 0 0\narc l1 -> 0 1\narc l2 -> 1 0\narc l1+l2 -> 1 1\n";
        assert!(
            parse_presentation(neg).is_err(),
            "negative orientation must be rejected"
        );
    }

    #[test]
    fn euclidean_all_two_torsion() {
        let p = parse_presentation(SQUARE_EUCLIDEAN).unwrap();
        assert!(is_euclidean(&p).unwrap());
        let report = validate(&p).unwrap();
        assert!(report.euclidean);
    }

    #[test]
    fn colliding_end_classes_are_invalid() {
        let bad = "\
lambda1 2 0
lambda2 0 1
translation 0
arc 0 -> 0 0
arc l1 -> 1 0
arc l2 -> 0 1
arc l1+l2 -> 3 0
";
        // (1,0) and (3,0) are negatives of each other mod 2Λ₁ = <(4,0),(0,2)>.
        let p = parse_presentation(bad).unwrap();
        let report = validate(&p).unwrap();
        assert!(!report.valid);
        assert!(report.failures.iter().any(|f| f.contains("same ±-class")));
    }

    #[test]
    fn transform_by_identity_is_identity() {
        let p = parse_presentation(SQUARE_EUCLIDEAN).unwrap();
        let q = transform(&p, &IntMat2::identity()).unwrap();
        assert_eq!(p, q);
        assert!(transform(&p, &IntMat2::new(1, 0, 0, -1)).is_err());
    }

    #[test]
    fn transform_composition() {
        let p = parse_presentation(SQUARE_EUCLIDEAN).unwrap();
        let m1 = IntMat2::new(1, 0, 1, 1);
        let m2 = IntMat2::new(1, 2, 0, 1);
        let lhs = transform(&transform(&p, &m1).unwrap(), &m2).unwrap();
        let rhs = transform(&p, &(&m2 * &m1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn euclidean_portrait_weights_are_one_on_marked() {
        let p = parse_presentation(SQUARE_EUCLIDEAN).unwrap();
        let portrait = portraits(&p).unwrap();
        for &(from, _, w) in &portrait.dynamic_edges {
            if portrait.vertices[from].marked {
                assert_eq!(w, 1);
            }
        }
        let report = validate(&p).unwrap();
        assert!(report.valid, "failures: {:?}", report.failures);
        for part in &portrait.branch_data {
            let total: u32 = part.iter().sum();
            assert_eq!(u64::from(total), report.degree);
        }
    }
}
