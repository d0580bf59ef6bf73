//! Iteration of the slope function: orbits, cycle detection, and
//! finite-global-attractor scans.

use crate::arith::{ExtRational, Slope};
use crate::presentation::Presentation;
use crate::pullback::slope_invariants;
use crate::Result;
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitTerminal {
    /// The last listed slope maps to `⊙`.
    Absorbed,
    /// First repetition closed a cycle: `orbit[phase..]` repeats with the
    /// given period.
    Cycle { period: usize, phase: usize },
    /// The iteration cap was reached without resolution.
    CapReached,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub seed: ExtRational,
    /// Successive slopes, starting with the seed; entries are reduced.
    pub orbit: Vec<ExtRational>,
    pub terminal: OrbitTerminal,
}

/// Iterate the slope function from `seed` until absorption into `⊙`, a
/// repetition, or `cap` steps.
pub fn orbit(pres: &Presentation, seed: &ExtRational, cap: usize) -> Result<OrbitReport> {
    let mut orbit = vec![seed.clone()];
    let mut positions: BTreeMap<ExtRational, usize> = BTreeMap::from([(seed.clone(), 0)]);
    let mut current = seed.clone();
    for _ in 0..cap {
        let result = slope_invariants(pres, &current)?;
        match result.image {
            Slope::Absorbed => {
                return Ok(OrbitReport {
                    seed: seed.clone(),
                    orbit,
                    terminal: OrbitTerminal::Absorbed,
                })
            }
            Slope::Rational(next) => {
                if let Some(&phase) = positions.get(&next) {
                    let period = orbit.len() - phase;
                    return Ok(OrbitReport {
                        seed: seed.clone(),
                        orbit,
                        terminal: OrbitTerminal::Cycle { period, phase },
                    });
                }
                positions.insert(next.clone(), orbit.len());
                orbit.push(next.clone());
                current = next;
            }
        }
    }
    Ok(OrbitReport {
        seed: seed.clone(),
        orbit,
        terminal: OrbitTerminal::CapReached,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AttractorReport {
    /// Distinct cycles found, each rotated so its least slope comes first.
    pub cycles: Vec<Vec<ExtRational>>,
    pub seeds_scanned: u64,
    /// Seeds that hit the iteration cap before resolving. Candidates only:
    /// a scan cannot distinguish slow convergence from wandering.
    pub unresolved: Vec<ExtRational>,
}

/// Every reduced slope with `|p|, |q| ≤ height`, in a fixed order.
pub fn slopes_up_to(height: u64) -> Vec<ExtRational> {
    let mut out = vec![ExtRational::infinity()];
    let h = height as i64;
    for q in 1..=h {
        for p in -h..=h {
            if p.gcd(&q) == 1 {
                out.push(crate::arith::reduce_slope(p, q).expect("q > 0"));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Run [`orbit`] over every reduced slope with `|p|, |q| ≤ height` and
/// aggregate the cycles. Seed-parallel with a deterministic merge.
pub fn attractor_scan(pres: &Presentation, height: u64, cap: usize) -> Result<AttractorReport> {
    let seeds = slopes_up_to(height);
    let reports = crate::parallel::map(&seeds, |s| orbit(pres, s, cap))?;

    let mut cycles: BTreeSet<Vec<ExtRational>> = BTreeSet::new();
    let mut unresolved = Vec::new();
    for report in &reports {
        match report.terminal {
            OrbitTerminal::Absorbed => {}
            OrbitTerminal::CapReached => unresolved.push(report.seed.clone()),
            OrbitTerminal::Cycle { phase, .. } => {
                let mut cycle: Vec<ExtRational> = report.orbit[phase..].to_vec();
                let min_pos = cycle
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.cmp(b.1))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                cycle.rotate_left(min_pos);
                cycles.insert(cycle);
            }
        }
    }
    Ok(AttractorReport {
        cycles: cycles.into_iter().collect(),
        seeds_scanned: seeds.len() as u64,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn slope_enumeration_is_reduced_and_complete() {
        let slopes = slopes_up_to(3);
        assert!(slopes.contains(&ExtRational::infinity()));
        assert!(slopes.contains(&"-2/3".parse().unwrap()));
        // 1 (for ∞) + #{(p, q): |p|, |q| ≤ 3, q ≥ 1, gcd = 1}
        let by_hand: usize = {
            let mut n = 1;
            for q in 1..=3i64 {
                for p in -3..=3i64 {
                    if num_integer::gcd(p, q) == 1 {
                        n += 1;
                    }
                }
            }
            n
        };
        assert_eq!(slopes.len(), by_hand);
    }

    #[test]
    fn euclidean_square_has_fixed_slopes() {
        let p = parse_presentation(
            "lambda1 2 0\nlambda2 0 1\ntranslation 0\narc 0 -> 0 0\narc l1 -> 2 0\narc l2 -> 0 1\narc l1+l2 -> 2 1\n",
        )
        .unwrap();
        // Direction λ₁ is preserved by the affine map: slope 0 is fixed.
        let report = orbit(&p, &ExtRational::zero(), 10).unwrap();
        assert_eq!(
            report.terminal,
            OrbitTerminal::Cycle {
                period: 1,
                phase: 0
            }
        );
    }
}
