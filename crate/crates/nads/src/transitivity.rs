//! Grid-based transitivity evidence: cover a bounded one-dimensional space
//! with balls and record, for every ordered ball pair (U, V), the least time
//! a sampled orbit from U enters V.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::sensitivity::derive_seed;
use crate::sequence::MapSequence;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Serialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// One recorded pair hit: the stored sample u from ball `u_index` satisfies
/// d(f_1^n(u), center of ball `v_index`) < radius.
#[derive(Debug, Clone, Serialize)]
pub struct PairHit {
    pub u_index: usize,
    pub v_index: usize,
    pub n: u64,
    pub witness_u: Point,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport {
    pub resolution: f64,
    pub horizon: u64,
    pub samples_per_ball: usize,
    pub balls: Vec<Ball>,
    /// Hits sorted by (u_index, v_index); pairs without an entry never hit.
    pub hits: Vec<PairHit>,
    /// Fraction of ordered pairs with a recorded hit. Full transitivity
    /// evidence requires 1.0.
    pub hit_fraction: f64,
    /// Sampled orbits that left the analysis window.
    pub escapes: u64,
}

impl TransitivityReport {
    /// Re-validate every stored hit from its witness sample.
    pub fn replay(&self, seq: &MapSequence) -> Result<bool> {
        for hit in &self.hits {
            let v = &self.balls[hit.v_index];
            let image = match seq.apply_window(1, hit.n, &hit.witness_u) {
                Ok(p) => p,
                Err(Error::DomainEscape { .. }) => return Ok(false),
                Err(e) => return Err(e),
            };
            if !(seq.space.distance(&image, &v.center)? < v.radius) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Scan every ordered pair of grid balls for orbit passage within `horizon`
/// steps, sampling `samples_per_ball` start points per ball (the center
/// first, then seeded random points).
pub fn check_transitivity(
    seq: &MapSequence,
    resolution: f64,
    horizon: u64,
    samples_per_ball: usize,
    rng_seed: u64,
) -> Result<TransitivityReport> {
    if !(resolution > 0.0) {
        return Err(Error::invalid_param("resolution", "must be positive"));
    }
    if horizon < 1 {
        return Err(Error::invalid_param("horizon", "must be >= 1"));
    }
    if samples_per_ball < 1 {
        return Err(Error::invalid_param("samples_per_ball", "must be >= 1"));
    }
    let (lo, hi) = match &seq.space {
        crate::space::StateSpace::UnitInterval | crate::space::StateSpace::Circle => (0.0, 1.0),
        crate::space::StateSpace::RealLine { window: [lo, hi] } => (*lo, *hi),
        _ => {
            return Err(Error::invalid_param(
                "space",
                "transitivity scans need a bounded one-dimensional space",
            ))
        }
    };
    let span = hi - lo;
    let count = (span / resolution - 1e-9).ceil().max(1.0) as usize;
    if count > 10_000 {
        return Err(Error::invalid_param(
            "resolution",
            format!("resolution yields {count} balls; limit is 10000"),
        ));
    }
    let width = span / count as f64;
    let radius = width / 2.0;
    let balls: Vec<Ball> = (0..count)
        .map(|i| Ball {
            center: Point::scalar(lo + (i as f64 + 0.5) * width),
            radius,
        })
        .collect();

    // sample starters and their orbits, per ball
    let scans: Vec<Vec<(Point, crate::sequence::TrajectoryScan)>> = balls
        .par_iter()
        .enumerate()
        .map(|(bi, ball)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(rng_seed, bi as u64));
            let mut starters = vec![ball.center.clone()];
            while starters.len() < samples_per_ball {
                let off = radius * rng.gen_range(-1.0..1.0);
                if let Some(p) = seq.space.translate(&ball.center, &Point::scalar(off))? {
                    starters.push(p);
                }
            }
            starters
                .into_iter()
                .map(|u| {
                    let scan = seq.trajectory_scan(&u, horizon)?;
                    Ok((u, scan))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let escapes = scans
        .iter()
        .flatten()
        .filter(|(_, s)| s.escaped.is_some())
        .count() as u64;

    let mut hits = Vec::new();
    for (ui, u_scans) in scans.iter().enumerate() {
        for (vi, v) in balls.iter().enumerate() {
            let mut best: Option<(u64, &Point)> = None;
            for (u, scan) in u_scans {
                let steps = scan.points.len() as u64 - 1;
                for n in 1..=steps {
                    if best.map(|(bn, _)| n >= bn).unwrap_or(false) {
                        break;
                    }
                    let inside = if scan.escaped.map(|e| e.step == n).unwrap_or(false) {
                        // escaped points lie outside the window, hence
                        // outside every ball
                        false
                    } else {
                        seq.space.distance(&scan.points[n as usize], &v.center)? < v.radius
                    };
                    if inside {
                        best = Some((n, u));
                        break;
                    }
                }
            }
            if let Some((n, u)) = best {
                hits.push(PairHit {
                    u_index: ui,
                    v_index: vi,
                    n,
                    witness_u: u.clone(),
                });
            }
        }
    }

    let hit_fraction = hits.len() as f64 / (count * count) as f64;
    Ok(TransitivityReport {
        resolution: width,
        horizon,
        samples_per_ball,
        balls,
        hits,
        hit_fraction,
        escapes,
    })
}
