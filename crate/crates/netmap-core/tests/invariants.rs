//! Cross-module invariants: decision monotonicity, attractor monotonicity,
//! multiplier-image invariance, extended-construction contracts, catalog
//! goldens, and congruence-sandwich checks.

mod common;

use common::{f0, rabbit, SplitMix};
use netmap_core::arith::Slope;
use netmap_core::arith::{ExtRational, IntMat2};
use netmap_core::dynamics::{attractor_scan, orbit, OrbitTerminal};
use netmap_core::halfspace::{
    decide_rationality, extended_excluded_neighborhood, DecisionOptions, Verdict,
};
use netmap_core::hurwitz::{enumerate_classes, hs_equivalent, multiplier_image};
use netmap_core::modcurve::{curve_invariants, sandwich_holds};
use netmap_core::presentation::StartClass;
use netmap_core::pullback::{boundary_dictionary, slope_invariants};
use netmap_core::{int, rat, reduce_slope, transform, Error};

fn slope(s: &str) -> ExtRational {
    s.parse().unwrap()
}

#[test]
fn decision_is_monotone_in_depth() {
    let rabbit = rabbit();
    for depth in [8, 10, 14] {
        let d = decide_rationality(
            &rabbit,
            &DecisionOptions {
                farey_depth: depth,
                extension_depth: 64,
            },
        )
        .unwrap();
        assert_eq!(d.verdict, Verdict::Rational, "depth {depth}");
    }
    let f0 = f0();
    for depth in [6, 10, 14] {
        let d = decide_rationality(
            &f0,
            &DecisionOptions {
                farey_depth: depth,
                extension_depth: 64,
            },
        )
        .unwrap();
        assert_eq!(d.verdict, Verdict::Obstructed, "depth {depth}");
    }
}

#[test]
fn attractor_cycles_are_monotone_in_height() {
    let pres = rabbit();
    let small = attractor_scan(&pres, 6, 80).unwrap();
    let large = attractor_scan(&pres, 12, 140).unwrap();
    for cycle in &small.cycles {
        assert!(large.cycles.contains(cycle));
    }
}

#[test]
fn orbit_of_cycle_member_is_the_cycle() {
    let pres = rabbit();
    for seed in ["0", "1", "∞"] {
        let report = orbit(&pres, &slope(seed), 50).unwrap();
        assert_eq!(
            report.terminal,
            OrbitTerminal::Cycle {
                period: 3,
                phase: 0
            },
            "seed {seed}"
        );
        assert_eq!(report.orbit.len(), 3);
    }
}

#[test]
fn multiplier_image_is_a_class_invariant() {
    let base = f0();
    let reference = multiplier_image(&base).unwrap();
    // Across translation terms.
    let report = netmap_core::validate(&base).unwrap();
    for (idx, class) in StartClass::ALL.iter().enumerate() {
        if report.net_for_translations[idx] {
            let image = multiplier_image(&base.with_translation(*class)).unwrap();
            assert_eq!(image.deltas, reference.deltas);
        }
    }
    // Across modular transformations of the diagram.
    for m in [
        IntMat2::new(1, 0, 1, 1),
        IntMat2::new(1, 1, 0, 1),
        IntMat2::new(2, 1, 1, 1),
    ] {
        let image = multiplier_image(&transform(&base, &m).unwrap()).unwrap();
        assert_eq!(image.deltas, reference.deltas, "matrix {m:?}");
        assert_eq!(
            image.infinitely_many_classes,
            reference.infinitely_many_classes
        );
    }
}

#[test]
fn extended_construction_contracts() {
    let f0 = f0();
    // δ = 1 at the fixed slope ∞ violates the hypothesis.
    let t_fixed = boundary_dictionary(&slope("∞"));
    assert!(matches!(
        extended_excluded_neighborhood(&f0, &t_fixed, 48),
        Err(Error::ExtendedHypothesis)
    ));
    // A non-fixed slope is rejected as well.
    let t_moving = boundary_dictionary(&slope("1"));
    assert!(matches!(
        extended_excluded_neighborhood(&f0, &t_moving, 48),
        Err(Error::ExtendedHypothesis)
    ));

    // Absorbed slope of the rabbit (found by scan): the two one-sided
    // intervals form a deleted neighborhood and exclude no obstruction
    // boundary point in a |p|, |q| ≤ 20 sweep.
    let pres = rabbit();
    let mut absorbed = None;
    'outer: for q in 0i64..=20 {
        for p in -20i64..=20 {
            if (p, q) == (0, 0) || num_integer::gcd(p, q) != 1 {
                continue;
            }
            let s = reduce_slope(p, q).unwrap();
            if slope_invariants(&pres, &s).unwrap().image.is_absorbed() {
                absorbed = Some(s);
                break 'outer;
            }
        }
    }
    let s = absorbed.expect("the rabbit has absorbed slopes in a small window");
    let t = boundary_dictionary(&s);
    let (left, right, certs) = extended_excluded_neighborhood(&pres, &t, 64).unwrap();
    assert!(!certs.is_empty());
    // t is an endpoint of both sides, not interior to either.
    assert!(!left.contains_ext(&t));
    assert!(!right.contains_ext(&t));
    // Oracle: no fixed slope with multiplier ≥ 1 in either interval.
    for q in 0i64..=20 {
        for p in -20i64..=20 {
            if (p, q) == (0, 0) || num_integer::gcd(p, q) != 1 {
                continue;
            }
            let probe = reduce_slope(p, q).unwrap();
            let r = slope_invariants(&pres, &probe).unwrap();
            let fixed = matches!(&r.image, Slope::Rational(im) if *im == probe);
            if fixed && r.delta >= rat(1, 1) {
                let bp = boundary_dictionary(&probe);
                assert!(!left.contains_ext(&bp) && !right.contains_ext(&bp));
            }
        }
    }
}

#[test]
fn catalog_class_counts() {
    // Degree 2: four classes (three NET-realizable plus the degenerate one).
    assert_eq!(enumerate_classes(&int(2), &int(1)).unwrap().len(), 4);
    // Divisors (2,2): golden count recorded from the first verified
    // enumeration (8 realizable, 2 degenerate).
    assert_eq!(enumerate_classes(&int(2), &int(2)).unwrap().len(), 10);
    // Degree 1 is rejected.
    assert!(enumerate_classes(&int(1), &int(1)).is_err());
    assert!(enumerate_classes(&int(3), &int(2)).is_err());
}

#[test]
fn equivalence_preserves_euclidean_type() {
    // Structure-set equivalence preserves the critical count, so a class is
    // either entirely Euclidean or entirely not.
    let classes = enumerate_classes(&int(2), &int(2)).unwrap();
    for a in &classes {
        for b in &classes {
            if hs_equivalent(a, b) {
                assert_eq!(a.critical_count(), b.critical_count());
                assert_eq!(a.is_euclidean(), b.is_euclidean());
            }
        }
    }
}

#[test]
fn sandwich_and_curve_invariance() {
    for pres in [f0(), rabbit()] {
        assert!(sandwich_holds(&pres).unwrap());
        let reference = curve_invariants(&pres).unwrap();
        // The curve is an impure-class invariant: transformed diagrams give
        // the same genus and cusp count.
        for m in [IntMat2::new(1, 0, 1, 1), IntMat2::new(1, 1, 0, 1)] {
            let inv = curve_invariants(&transform(&pres, &m).unwrap()).unwrap();
            assert_eq!((inv.genus, inv.cusps), (reference.genus, reference.cusps));
        }
    }
}

#[test]
fn rational_one_critical_map_attractor_is_small() {
    // A rational degree-2 map with one critical postcritical point has a
    // global attractor of at most four slopes.
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../netmap-cli/corpus/z2i.net"
    ))
    .unwrap();
    let pres = netmap_core::parse_presentation(&text).unwrap();
    let scan = attractor_scan(&pres, 12, 150).unwrap();
    assert!(scan.unresolved.is_empty());
    let total: usize = scan.cycles.iter().map(|c| c.len()).sum();
    assert!(total <= 4, "attractor has {total} slopes: {:?}", scan.cycles);
}

#[test]
fn obstructed_map_attractor_is_the_obstruction() {
    // The obstructed degree-2 map's pullback dynamics on slopes has the
    // single fixed obstruction slope ∞ as its global attractor.
    let pres = f0();
    let report = orbit(&pres, &slope("∞"), 20).unwrap();
    assert_eq!(
        report.terminal,
        OrbitTerminal::Cycle {
            period: 1,
            phase: 0
        }
    );
    let scan = attractor_scan(&pres, 20, 200).unwrap();
    assert!(scan.unresolved.is_empty());
    assert_eq!(scan.cycles, vec![vec![slope("∞")]]);
}

#[test]
fn structure_set_literals_and_deck_orders() {
    use netmap_core::presentation::hurwitz_structure_set;
    let f0 = f0();
    let hs = hurwitz_structure_set(&f0).unwrap();
    assert_eq!((hs.m.clone(), hs.n.clone()), (int(2), int(1)));
    let classes: Vec<(i64, i64)> = hs
        .classes
        .iter()
        .map(|c| {
            (
                i64::try_from(c.0.clone()).unwrap(),
                i64::try_from(c.1.clone()).unwrap(),
            )
        })
        .collect();
    assert_eq!(classes, vec![(0, 0), (0, 1), (1, 0), (2, 0)]);
    assert_eq!(hs.critical_count(), 1);
    assert_eq!(netmap_core::deck_group_order(&f0).unwrap(), 1);

    let rabbit = rabbit();
    let hs = hurwitz_structure_set(&rabbit).unwrap();
    assert_eq!(hs.critical_count(), 2);
    assert_eq!(netmap_core::deck_group_order(&rabbit).unwrap(), 1);
    assert_eq!(
        netmap_core::elementary_divisors(&rabbit).unwrap(),
        (int(2), int(1))
    );

    // Euclidean map with the full 2-torsion structure set: the deck group is
    // computed by enumeration and contains at least the identity.
    let lattes = netmap_core::parse_presentation(
        "lambda1 2 0\nlambda2 0 2\ntranslation 0\narc 0 -> 0 0\narc l1 -> 2 0\narc l2 -> 0 2\narc l1+l2 -> 2 2\n",
    )
    .unwrap();
    assert!(netmap_core::deck_group_order(&lattes).unwrap() >= 1);
}

#[test]
fn degenerate_translation_is_rejected() {
    // The reference degree-2 diagram is NET for three of the four
    // translation terms; the remaining one leaves fewer than four
    // postcritical points and must be diagnosed, not repaired.
    let base = f0();
    let report = netmap_core::validate(&base).unwrap();
    assert_eq!(report.net_for_translations, [false, true, true, true]);
    let degenerate = base.with_translation(StartClass::Zero);
    let report = netmap_core::validate(&degenerate).unwrap();
    assert!(!report.valid);
    assert!(report.failures.iter().any(|f| f.contains("postcritical")));
}

#[test]
fn liftable_index_of_reference_map() {
    let action = netmap_core::liftable_cosets(&f0()).unwrap();
    assert_eq!(action.index, 12);
}

#[test]
fn rational_decisions_replay_from_certificates() {
    // A Rational verdict must be auditable from its own output: replaying
    // the certificate intervals leaves only finitely many points, each
    // irrational or individually cleared.
    use netmap_core::arith::IntervalCover;
    for pres in [rabbit(), {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../netmap-cli/corpus/lattes_push.net"
        ))
        .unwrap();
        netmap_core::parse_presentation(&text).unwrap()
    }] {
        let decision =
            decide_rationality(&pres, &DecisionOptions::default()).unwrap();
        assert_eq!(decision.verdict, Verdict::Rational);
        let mut cover = IntervalCover::new();
        for cert in &decision.certificates {
            cover.subtract(&cert.interval);
        }
        assert!(cover.complement_is_finite());
        let cleared: std::collections::BTreeSet<ExtRational> =
            decision.cleared_points.iter().map(|(p, _)| p.clone()).collect();
        for arc in cover.complement() {
            if let Some(x) = arc.lo.to_ext() {
                assert!(cleared.contains(&x), "uncovered rational point {x} is not cleared");
            }
        }
    }
}

#[test]
fn equivalence_relation_sampling() {
    use netmap_core::presentation::hurwitz_structure_set;
    // Reflexivity on catalog output; symmetry and transitivity across
    // presentations known to share a class.
    let classes = enumerate_classes(&int(2), &int(1)).unwrap();
    for hs in &classes {
        assert!(hs_equivalent(hs, hs));
    }
    // Catalog members are pairwise inequivalent by construction.
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            assert!(!hs_equivalent(a, b));
        }
    }
    // a ~ b and b ~ c from transformed/translated diagrams; check symmetry
    // and transitivity on the triple.
    let p0 = f0();
    let a = hurwitz_structure_set(&p0).unwrap();
    let b = hurwitz_structure_set(&transform(&p0, &IntMat2::new(1, 0, 1, 1)).unwrap()).unwrap();
    let c = hurwitz_structure_set(&transform(&p0, &IntMat2::new(2, 1, 1, 1)).unwrap()).unwrap();
    assert!(hs_equivalent(&a, &b) && hs_equivalent(&b, &a));
    assert!(hs_equivalent(&b, &c) && hs_equivalent(&a, &c));
}

#[test]
fn exceptional_structure_sets_have_constant_pullback() {
    // The five exceptional classes ship as corpus files; every one is
    // realizable by a straight-arc diagram whose multiplier image is {0}.
    use netmap_core::hurwitz::{realize, HurwitzStructureSet, RealizationStatus};
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../netmap-cli/corpus");
    for name in [
        "constant_sigma_deg8",
        "constant_sigma_deg9_a",
        "constant_sigma_deg9_b",
        "constant_sigma_deg9_c",
        "constant_sigma_deg18",
    ] {
        let text = std::fs::read_to_string(format!("{dir}/{name}.hs")).unwrap();
        let hs = HurwitzStructureSet::parse(&text).unwrap();
        let RealizationStatus::Realized { presentation } = realize(&hs) else {
            panic!("{name}: not realized");
        };
        assert!(netmap_core::validate(&presentation).unwrap().valid, "{name}");
        let image = multiplier_image(&presentation).unwrap();
        assert!(image.constant_sigma, "{name}: δ-image {:?}", image.deltas);
        assert!(hs_equivalent(&hs, &netmap_core::presentation::hurwitz_structure_set(&presentation).unwrap()));
    }
}

#[test]
fn randomized_interval_cover_complement() {
    // The complement after subtracting arcs equals a brute-force membership
    // scan on a probe grid.
    use netmap_core::arith::{BoundaryInterval, CirclePoint, IntervalCover};
    let mut rng = SplitMix(0x1234_5678);
    for _ in 0..40 {
        let mut cover = IntervalCover::new();
        let mut arcs = Vec::new();
        for _ in 0..rng.range(1, 5) {
            let a = rng.range(-8, 8);
            let b = rng.range(-8, 8);
            if a == b {
                continue;
            }
            let iv = BoundaryInterval::new(
                CirclePoint::from_rat(&rat(a, 1)),
                CirclePoint::from_rat(&rat(b, 1)),
            );
            cover.subtract(&iv);
            arcs.push(iv);
        }
        if arcs.is_empty() {
            continue;
        }
        // Probe at half-integers and ∞.
        let mut probes: Vec<CirclePoint> = (-17..=17)
            .map(|k| CirclePoint::from_rat(&rat(2 * k + 1, 2)))
            .collect();
        probes.push(CirclePoint::Infinity);
        for p in probes {
            let covered_direct = arcs.iter().any(|a| a.contains(&p));
            let uncovered_tracked = cover.is_full_circle_uncovered()
                || cover.complement().iter().any(|arc| arc.contains(&p));
            assert_eq!(covered_direct, !uncovered_tracked, "probe {p}");
        }
    }
}
