//! Periodic points, invariant sets, and invariant periodic points.
//!
//! Numerical periodicity is certified only up to a tolerance and a checked
//! horizon; reports carry both. For finitely generated sequences with an
//! eventually periodic schedule the horizon is raised internally so the
//! finite check is structurally sufficient.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::sequence::MapSequence;

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicPointReport {
    pub point: Point,
    /// Least verified period.
    pub period: u64,
    /// Every k <= this horizon satisfied d(f_1^k(x), f_1^(period+k)(x)) <= tolerance.
    #[serde(rename = "horizon")]
    pub checked_horizon: u64,
    pub tolerance: f64,
    /// Orbit set, deduplicated at the same tolerance.
    #[serde(rename = "orbit")]
    pub orbit_points: Vec<Point>,
    /// Whether the orbit set is invariant under every sequence map.
    pub invariant: bool,
    pub invariant_violation: Option<InvariantViolation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantViolation {
    /// Index into the checked map set (generator index for finitely
    /// generated sequences).
    pub map_index: usize,
    /// The set element whose image leaves the set.
    pub point: Point,
    pub image: Point,
    /// Distance from the image to the nearest set element.
    pub distance_to_set: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub invariant: bool,
    pub violation: Option<InvariantViolation>,
    pub maps_checked: usize,
}

/// Search for the least period N <= n_max such that the orbit from `x`
/// repeats with lag N for every checked k. Returns `None` when no period
/// verifies at this tolerance.
pub fn detect_periodic_point(
    seq: &MapSequence,
    x: &Point,
    n_max: u64,
    k_max: u64,
    tol: f64,
) -> Result<Option<PeriodicPointReport>> {
    if n_max < 1 {
        return Err(Error::invalid_param("n_max", "must be >= 1"));
    }
    if k_max < n_max {
        return Err(Error::invalid_param("k_max", "must be >= n_max"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid_param("tol", "must be positive"));
    }
    let shape = seq.shape();
    let horizon_for = |n: u64| -> u64 {
        match shape {
            // lcm coverage: two schedule periods per candidate lag, past any prefix
            Some((prefix, p)) => k_max.max(2 * p * n + prefix),
            None => k_max,
        }
    };
    let needed = horizon_for(n_max) + n_max;
    let orbit = seq.trajectory(x, needed)?;
    for n in 1..=n_max {
        let k_hi = horizon_for(n);
        let ok = (0..=k_hi).all(|k| {
            let a = &orbit.points[k as usize];
            let b = &orbit.points[(n + k) as usize];
            seq.space.distance(a, b).map(|d| d <= tol).unwrap_or(false)
        });
        if ok {
            let orbit_points = dedup_points(seq, &orbit.points[..n as usize], tol)?;
            let inv = is_invariant_set_inner(seq, &orbit_points, tol, Some(k_hi))?;
            return Ok(Some(PeriodicPointReport {
                point: x.clone(),
                period: n,
                checked_horizon: k_hi,
                tolerance: tol,
                orbit_points,
                invariant: inv.invariant,
                invariant_violation: inv.violation,
            }));
        }
    }
    Ok(None)
}

fn dedup_points(seq: &MapSequence, points: &[Point], tol: f64) -> Result<Vec<Point>> {
    let mut kept: Vec<Point> = Vec::new();
    for p in points {
        let mut fresh = true;
        for q in &kept {
            if seq.space.distance(p, q)? <= tol {
                fresh = false;
                break;
            }
        }
        if fresh {
            kept.push(p.clone());
        }
    }
    Ok(kept)
}

/// Does every sequence map send `set` into itself (within `tol`)? For
/// finitely generated sequences the generator set is checked; otherwise the
/// maps at indices 1..=map_horizon are, and omitting the horizon is an error.
pub fn is_invariant_set(
    seq: &MapSequence,
    set: &[Point],
    tol: f64,
    map_horizon: Option<u64>,
) -> Result<InvariantCheck> {
    if set.is_empty() {
        return Err(Error::invalid_param("set", "must be non-empty"));
    }
    is_invariant_set_inner(seq, set, tol, map_horizon)
}

fn is_invariant_set_inner(
    seq: &MapSequence,
    set: &[Point],
    tol: f64,
    map_horizon: Option<u64>,
) -> Result<InvariantCheck> {
    let maps = match seq.generator_set() {
        Some(gens) => gens,
        None => match map_horizon {
            Some(h) => (1..=h)
                .map(|i| seq.resolve_map(i))
                .collect::<Result<Vec<_>>>()?,
            None => {
                return Err(Error::UnderSpecified(
                    "invariant-set check on a non-finitely-generated sequence needs a map horizon"
                        .into(),
                ))
            }
        },
    };
    for (mi, g) in maps.iter().enumerate() {
        for a in set {
            let image = g.eval(&seq.space, a)?;
            let mut best = f64::INFINITY;
            for b in set {
                best = best.min(seq.space.distance(&image, b)?);
            }
            if best > tol {
                return Ok(InvariantCheck {
                    invariant: false,
                    violation: Some(InvariantViolation {
                        map_index: mi,
                        point: a.clone(),
                        image,
                        distance_to_set: best,
                    }),
                    maps_checked: maps.len(),
                });
            }
        }
    }
    Ok(InvariantCheck {
        invariant: true,
        violation: None,
        maps_checked: maps.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantPeriodicCheck {
    /// True iff the point verified as periodic AND its orbit set is invariant.
    pub invariant_periodic: bool,
    pub report: Option<PeriodicPointReport>,
}

pub fn is_invariant_periodic_point(
    seq: &MapSequence,
    x: &Point,
    n_max: u64,
    k_max: u64,
    tol: f64,
) -> Result<InvariantPeriodicCheck> {
    let report = detect_periodic_point(seq, x, n_max, k_max, tol)?;
    Ok(InvariantPeriodicCheck {
        invariant_periodic: report.as_ref().map(|r| r.invariant).unwrap_or(false),
        report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub resolution: f64,
    pub n_max: u64,
    pub q_max: u64,
    pub tolerance: f64,
    pub cells: usize,
    pub covered: usize,
    /// Fraction of grid cells containing a verified periodic point.
    pub coverage: f64,
    pub uncovered_cells: Vec<usize>,
    /// One (cell, point, period) row per covered cell.
    pub detections: Vec<CellDetection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellDetection {
    pub cell: usize,
    pub point: Point,
    pub period: u64,
}

/// Grid-coverage surrogate for dense periodic points: the fraction of
/// resolution-cells containing a verified periodic point, seeded from
/// cell-local candidates (cell midpoint and edges, plus rationals p/q with
/// q <= q_max, which catch the periodic points of standard interval maps).
pub fn dense_periodic_estimate(
    seq: &MapSequence,
    resolution: f64,
    n_max: u64,
    q_max: u64,
    tol: f64,
) -> Result<DensityReport> {
    if !(resolution > 0.0) {
        return Err(Error::invalid_param("resolution", "must be positive"));
    }
    let (lo, hi) = match &seq.space {
        crate::space::StateSpace::UnitInterval | crate::space::StateSpace::Circle => (0.0, 1.0),
        crate::space::StateSpace::RealLine { window: [lo, hi] } => (*lo, *hi),
        _ => {
            return Err(Error::invalid_param(
                "space",
                "density estimation needs a bounded one-dimensional space",
            ))
        }
    };
    let span = hi - lo;
    let cells = (span / resolution - 1e-9).ceil().max(1.0) as usize;
    let width = span / cells as f64;
    // Expanding maps amplify the seeding rounding error by their Lipschitz
    // factor per step, so keep the lag check at the structurally sufficient
    // horizon (detect raises it to 2*p*N internally) instead of padding it.
    let k_max = n_max;

    let results: Vec<Option<CellDetection>> = (0..cells)
        .into_par_iter()
        .map(|ci| {
            let a = lo + ci as f64 * width;
            let b = a + width;
            for cand in cell_candidates(a, b, q_max) {
                let p = Point::scalar(cand);
                match detect_periodic_point(seq, &p, n_max, k_max, tol) {
                    Ok(Some(rep)) => {
                        return Some(CellDetection {
                            cell: ci,
                            point: p,
                            period: rep.period,
                        })
                    }
                    Ok(None) => {}
                    // escapes and unresolvable indices just fail the candidate
                    Err(_) => {}
                }
            }
            None
        })
        .collect();

    let mut detections = Vec::new();
    let mut uncovered = Vec::new();
    for (ci, r) in results.into_iter().enumerate() {
        match r {
            Some(d) => detections.push(d),
            None => uncovered.push(ci),
        }
    }
    let covered = detections.len();
    Ok(DensityReport {
        resolution: width,
        n_max,
        q_max,
        tolerance: tol,
        cells,
        covered,
        coverage: covered as f64 / cells as f64,
        uncovered_cells: uncovered,
        detections,
    })
}

/// Deterministic candidate list for one cell [a, b]: midpoint, slightly
/// inset edges, then rationals by increasing denominator.
fn cell_candidates(a: f64, b: f64, q_max: u64) -> Vec<f64> {
    let w = b - a;
    let mut out = vec![a + 0.5 * w, a + 0.05 * w, b - 0.05 * w];
    for q in 1..=q_max {
        let qf = q as f64;
        let mut p = (a * qf).ceil();
        while p <= b * qf {
            let v = p / qf;
            if v >= a && v <= b && out.iter().all(|u| (u - v).abs() > 1e-12) {
                out.push(v);
            }
            p += 1.0;
        }
    }
    out
}
