//! Corpus derivation tool: reconstructs presentation diagrams for the named
//! example maps by bounded search against their published invariants, and
//! prints every diagram that matches. The first hit (in deterministic search
//! order) is what ships in `corpus/`.
//!
//! Usage: corpus_search <rabbit|f0|lattes-push|z2i|deg3|deg5>

use netmap_core::arith::{ExtRational, IntVec2, Slope};
use netmap_core::dynamics::attractor_scan;
use netmap_core::halfspace::{decide_rationality, DecisionOptions, Verdict};
use netmap_core::hurwitz::deck_group_order;
use netmap_core::presentation::{
    hurwitz_structure_set, portraits, validate, GreenArc, Presentation, StartClass,
};
use netmap_core::pullback::{preimage_components, slope_invariants, ComponentClass};
use netmap_core::{int, rat, Int};

fn slope(s: &str) -> ExtRational {
    s.parse().unwrap()
}

fn mu(pres: &Presentation, s: &str) -> Option<Slope> {
    slope_invariants(pres, &slope(s)).ok().map(|r| r.image)
}

fn is(image: &Option<Slope>, s: &str) -> bool {
    matches!(image, Some(Slope::Rational(r)) if *r == slope(s))
}

/// All end-point choices within the box around each start, primitive or
/// trivial steps only.
fn end_candidates(pres_start: &IntVec2, radius: i64) -> Vec<IntVec2> {
    let mut out = Vec::new();
    let sx = i64::try_from(pres_start.x.clone()).unwrap();
    let sy = i64::try_from(pres_start.y.clone()).unwrap();
    for dx in -radius..=radius {
        for dy in -radius..=radius {
            let step_gcd = num_integer::gcd(dx, dy);
            if (dx, dy) == (0, 0) || step_gcd == 1 {
                out.push(IntVec2::new(sx + dx, sy + dy));
            }
        }
    }
    out
}

struct SearchSpec {
    lambda1: (i64, i64),
    lambda2: (i64, i64),
    translations: Vec<StartClass>,
    radius: i64,
}

fn enumerate(spec: &SearchSpec, mut check: impl FnMut(&Presentation) -> bool, max_hits: usize) {
    let lambda1 = IntVec2::new(spec.lambda1.0, spec.lambda1.1);
    let lambda2 = IntVec2::new(spec.lambda2.0, spec.lambda2.1);
    let template = Presentation {
        lambda1: lambda1.clone(),
        lambda2: lambda2.clone(),
        translation: StartClass::Zero,
        virtual_diagram: false,
        arcs: StartClass::ALL.map(|c| GreenArc {
            start: c,
            end: IntVec2::zero(),
        }),
    };
    let starts: Vec<IntVec2> = StartClass::ALL
        .iter()
        .map(|&c| template.start_point(c))
        .collect();
    let cands: Vec<Vec<IntVec2>> = starts
        .iter()
        .map(|s| end_candidates(s, spec.radius))
        .collect();
    let mut hits = 0usize;
    let mut tested = 0u64;
    for e0 in &cands[0] {
        for e1 in &cands[1] {
            for e2 in &cands[2] {
                for e3 in &cands[3] {
                    for &b in &spec.translations {
                        let pres = Presentation {
                            lambda1: lambda1.clone(),
                            lambda2: lambda2.clone(),
                            translation: b,
                            virtual_diagram: false,
                            arcs: [
                                GreenArc {
                                    start: StartClass::Zero,
                                    end: e0.clone(),
                                },
                                GreenArc {
                                    start: StartClass::L1,
                                    end: e1.clone(),
                                },
                                GreenArc {
                                    start: StartClass::L2,
                                    end: e2.clone(),
                                },
                                GreenArc {
                                    start: StartClass::L1L2,
                                    end: e3.clone(),
                                },
                            ],
                        };
                        tested += 1;
                        if tested % 200_000 == 0 {
                            eprintln!("tested {tested}...");
                        }
                        let Ok(report) = validate(&pres) else {
                            continue;
                        };
                        if !report.valid {
                            continue;
                        }
                        if check(&pres) {
                            println!("== hit ==\n{}", pres.to_file_string());
                            hits += 1;
                            if hits >= max_hits {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
    eprintln!("tested {tested} candidates, {hits} hits");
}

fn search_rabbit() {
    let spec = SearchSpec {
        lambda1: (0, -1),
        lambda2: (2, 1),
        translations: vec![StartClass::L2], // circled point (2,1) = λ₂
        radius: 2,
    };
    enumerate(
        &spec,
        |pres| {
            if !is(&mu(pres, "0"), "1/1") || !is(&mu(pres, "1"), "∞") || !is(&mu(pres, "∞"), "0/1")
            {
                return false;
            }
            // Product of covering degrees along the 3-cycle is 4.
            let d_prod: u64 = ["0", "1/1", "∞"]
                .iter()
                .map(|s| slope_invariants(pres, &slope(s)).unwrap().d)
                .product();
            if d_prod != 4 {
                return false;
            }
            // Dynamic portrait: a 3-cycle with degrees (2,1,1) and a
            // critical fixed point.
            let portrait = portraits(pres).unwrap();
            if portrait.cycle_degree_signatures() != vec![vec![1, 1, 2], vec![2]] {
                return false;
            }
            let mut branch = portrait.branch_data.clone();
            branch.sort();
            if branch != vec![vec![1, 1], vec![1, 1], vec![2], vec![2]] {
                return false;
            }
            // Unobstructed, unique 3-cycle attractor at a small height.
            let decision = decide_rationality(
                pres,
                &DecisionOptions {
                    farey_depth: 10,
                    extension_depth: 48,
                },
            )
            .unwrap();
            if decision.verdict != Verdict::Rational {
                return false;
            }
            let scan = attractor_scan(pres, 6, 60).unwrap();
            scan.unresolved.is_empty() && scan.cycles.len() == 1 && scan.cycles[0].len() == 3
        },
        6,
    );
}

fn search_f0() {
    let spec = SearchSpec {
        lambda1: (2, 0),
        lambda2: (0, 1),
        translations: StartClass::ALL.to_vec(),
        radius: 2,
    };
    let target_hs: Vec<(Int, Int)> = vec![
        (int(0), int(0)),
        (int(0), int(1)),
        (int(1), int(0)),
        (int(2), int(0)),
    ];
    enumerate(
        &spec,
        |pres| {
            let hs = hurwitz_structure_set(pres).unwrap();
            if hs.classes != target_hs {
                return false;
            }
            if !is(&mu(pres, "-1"), "0/1")
                || !is(&mu(pres, "-1/2"), "1/1")
                || !is(&mu(pres, "1"), "2/1")
                || !is(&mu(pres, "∞"), "∞")
            {
                return false;
            }
            let at_inf = slope_invariants(pres, &slope("∞")).unwrap();
            if at_inf.delta != rat(1, 1) {
                return false;
            }
            // Pullback of slope -1/2: one peripheral and one essential of slope 1.
            let comps = preimage_components(pres, &slope("-1/2")).unwrap();
            let kinds: Vec<ComponentClass> = comps.iter().map(|c| c.class).collect();
            let peripheral = kinds
                .iter()
                .filter(|k| **k == ComponentClass::Peripheral)
                .count();
            let essential = kinds
                .iter()
                .filter(|k| **k == ComponentClass::Essential)
                .count();
            if comps.len() != 2 || peripheral != 1 || essential != 1 {
                return false;
            }
            if deck_group_order(pres).unwrap() != 1 {
                return false;
            }
            let decision = decide_rationality(
                pres,
                &DecisionOptions {
                    farey_depth: 8,
                    extension_depth: 48,
                },
            )
            .unwrap();
            decision.verdict == Verdict::Obstructed
                && decision
                    .witness
                    .as_ref()
                    .map(|w| w.slope == slope("∞"))
                    .unwrap_or(false)
        },
        6,
    );
}

fn search_lattes_push() {
    let spec = SearchSpec {
        lambda1: (2, 0),
        lambda2: (0, 2),
        translations: StartClass::ALL.to_vec(),
        radius: 1,
    };
    enumerate(
        &spec,
        |pres| {
            let report = validate(pres).unwrap();
            if report.euclidean {
                return false;
            }
            // Quick multiplier probes before the expensive full image.
            for probe in ["0", "1/1", "-1/1", "∞", "1/2", "2/1"] {
                let r = slope_invariants(pres, &slope(probe)).unwrap();
                if r.delta >= rat(1, 1) {
                    return false;
                }
            }
            let image = netmap_core::hurwitz::multiplier_image(pres).unwrap();
            if !image.completely_unobstructed {
                return false;
            }
            // Every pure half-space interval bounded: no interval may
            // contain a neighborhood of ∞, scanned over small slopes.
            for p in -8i64..=8 {
                for q in 0i64..=8 {
                    if num_integer::gcd(p, q) != 1 {
                        continue;
                    }
                    let s = netmap_core::arith::reduce_slope(p, q).unwrap();
                    let r = slope_invariants(pres, &s).unwrap();
                    if let Slope::Rational(im) = &r.image {
                        if *im == s {
                            continue;
                        }
                        let t = netmap_core::pullback::boundary_dictionary(&s);
                        let ti = netmap_core::pullback::boundary_dictionary(im);
                        let j =
                            netmap_core::halfspace::excluded_interval(&t, &ti, &r.delta).unwrap();
                        if j.contains_ext(&ExtRational::infinity()) {
                            return false;
                        }
                        let (a, b) = j.endpoints();
                        if a.is_infinity() || b.is_infinity() {
                            return false;
                        }
                    }
                }
            }
            // Pure half-spaces alone must NOT decide; extended must.
            let pure = decide_rationality(
                pres,
                &DecisionOptions {
                    farey_depth: 8,
                    extension_depth: 0,
                },
            )
            .unwrap();
            if pure.verdict != Verdict::Undecided {
                return false;
            }
            let ext = decide_rationality(
                pres,
                &DecisionOptions {
                    farey_depth: 8,
                    extension_depth: 48,
                },
            )
            .unwrap();
            ext.verdict == Verdict::Rational
        },
        4,
    );
}

fn search_z2i() {
    // Degree-2, one critical postcritical point, rational: the polynomial
    // class of z² ± i. Members of the class are reached by twisting
    // (postcomposing) the obstructed representative by modular elements.
    let base = netmap_core::parse_presentation(
        "lambda1 2 0\nlambda2 0 1\ntranslation l1\narc 0 -> 0 0\narc l1 -> 2 0\narc l2 -> 0 1\narc l1+l2 -> 1 0\n",
    )
    .unwrap();
    let t = netmap_core::IntMat2::new(1, 1, 0, 1);
    let t_inv = t.inverse_unimodular().unwrap();
    let s_mat = netmap_core::IntMat2::new(0, -1, 1, 0);
    let gens = [t, t_inv, s_mat];

    let mut words = vec![netmap_core::IntMat2::identity()];
    let mut frontier = vec![netmap_core::IntMat2::identity()];
    for _ in 0..5 {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let m = g * w;
                if m.det() == int(1) && !words.contains(&m) {
                    words.push(m.clone());
                    next.push(m);
                }
            }
        }
        frontier = next;
    }

    let mut hits = 0;
    for m in &words {
        let Ok(twisted) = netmap_core::transform(&base, m) else {
            continue;
        };
        for b in StartClass::ALL {
            let pres = twisted.with_translation(b);
            let Ok(report) = validate(&pres) else {
                continue;
            };
            if !report.valid {
                continue;
            }
            let hs = hurwitz_structure_set(&pres).unwrap();
            if hs.critical_count() != 1 {
                continue;
            }
            let mut obstructed_probe = false;
            for probe in ["0", "1/1", "-1/1", "∞", "1/2", "-1/2", "2/1", "-2/1"] {
                let s = slope(probe);
                let r = slope_invariants(&pres, &s).unwrap();
                if matches!(&r.image, Slope::Rational(im) if *im == s) && r.delta >= rat(1, 1) {
                    obstructed_probe = true;
                    break;
                }
            }
            if obstructed_probe {
                continue;
            }
            let scan = attractor_scan(&pres, 5, 60).unwrap();
            let total: usize = scan.cycles.iter().map(|c| c.len()).sum();
            if !scan.unresolved.is_empty() || total > 4 {
                continue;
            }
            let decision = decide_rationality(
                &pres,
                &DecisionOptions {
                    farey_depth: 10,
                    extension_depth: 48,
                },
            )
            .unwrap();
            if decision.verdict == Verdict::Rational {
                println!("== hit (twist {m:?}) ==\n{}", pres.to_file_string());
                hits += 1;
                if hits >= 4 {
                    return;
                }
            }
        }
    }
    eprintln!("{hits} hits over {} twists", words.len());
}

fn search_odd_degree(m: i64, portrait_split: bool) {
    // Valid degree-(2m+1) members of the two odd families, separated by
    // whether some marked point is a fixed critical value.
    let spec = SearchSpec {
        lambda1: (2 * m + 1, 0),
        lambda2: (0, 1),
        translations: StartClass::ALL.to_vec(),
        radius: 2,
    };
    enumerate(
        &spec,
        |pres| {
            let portrait = portraits(pres).unwrap();
            let has_critical_fixed = portrait
                .dynamic_edges
                .iter()
                .any(|&(from, to, w)| from == to && w == 2);
            has_critical_fixed == portrait_split
        },
        2,
    );
}

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_default();
    match mode.as_str() {
        "rabbit" => search_rabbit(),
        "f0" => search_f0(),
        "lattes-push" => search_lattes_push(),
        "z2i" => search_z2i(),
        "deg3" => {
            search_odd_degree(1, false);
            search_odd_degree(1, true);
        }
        "deg5" => {
            search_odd_degree(2, false);
            search_odd_degree(2, true);
        }
        other => {
            eprintln!("unknown mode {other:?}; use rabbit|f0|lattes-push|z2i|deg3|deg5");
            std::process::exit(64);
        }
    }
}
