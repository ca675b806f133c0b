//! Witness-search estimators for sensitivity, collective sensitivity, and
//! synchronous sensitivity.
//!
//! Candidate perturbations are enumerated deterministically: a radial grid
//! inside the eps-ball first (reproducibility), then seeded random samples
//! (coverage). Absence of a witness is always "not found under this budget",
//! never a claim of non-sensitivity.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::sequence::{MapSequence, TrajectoryScan};
use crate::space::StateSpace;
use crate::witness::{
    CollectiveWitness, SensitivityReport, SensitivityVerdict, SensitivityWitness, WitnessMode,
};

/// Points closer than this are treated as identical in distinctness checks.
pub const POINT_IDENTITY_TOL: f64 = 1e-9;

/// Cap on witnesses stored in a report.
const WITNESS_SAMPLE_CAP: usize = 8;

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent stream for a worker lane; thread-count agnostic.
pub(crate) fn derive_seed(seed: u64, lane: u64) -> u64 {
    splitmix64(seed ^ splitmix64(lane))
}

/// Displacements of norm strictly inside `eps`: deterministic radial grid
/// first, then seeded random fill, `budget` entries in total.
fn displacement_list(space: &StateSpace, eps: f64, budget: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Point> = Vec::with_capacity(budget);
    match space {
        StateSpace::VectorSpace { dimension, .. } => {
            let d = *dimension;
            let g = (budget / (4 * d)).max(1);
            'grid: for j in 1..=g {
                let r = eps * j as f64 / (g + 1) as f64;
                for axis in 0..d {
                    for sign in [1.0, -1.0] {
                        if out.len() >= budget / 2 {
                            break 'grid;
                        }
                        out.push(Point::basis(d, axis, sign * r));
                    }
                }
            }
            while out.len() < budget {
                let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let p = Point::Vector(v);
                let n = space.norm_of(&p).unwrap_or(0.0);
                if n < 1e-12 {
                    continue;
                }
                let r = eps * (0.001 + 0.998 * rng.gen::<f64>());
                out.push(p.scale(r / n));
            }
        }
        _ => {
            let g = (budget / 4).max(1);
            for j in 1..=g {
                if out.len() + 2 > budget {
                    break;
                }
                let r = eps * j as f64 / (g + 1) as f64;
                out.push(Point::scalar(r));
                out.push(Point::scalar(-r));
            }
            while out.len() < budget {
                let r = eps * (0.001 + 0.998 * rng.gen::<f64>());
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                out.push(Point::scalar(sign * r));
            }
        }
    }
    out
}

/// Walk two scans in lockstep. Returns the largest separation seen and, when
/// `stop_above` is set, the first step exceeding it. Separations at an escape
/// step are computed from the raw values, so an escaping candidate still
/// counts as a separation event when it actually separates.
fn scan_pair(
    space: &StateSpace,
    xs: &TrajectoryScan,
    ys: &TrajectoryScan,
    stop_above: Option<f64>,
) -> Result<(f64, Option<(u64, f64)>)> {
    let steps = xs.points.len().min(ys.points.len()) as u64 - 1;
    let mut max_sep: f64 = 0.0;
    for n in 1..=steps {
        let sep = space.distance(&xs.points[n as usize], &ys.points[n as usize])?;
        max_sep = max_sep.max(sep);
        if let Some(delta) = stop_above {
            if sep > delta {
                return Ok((max_sep, Some((n, sep))));
            }
        }
    }
    Ok((max_sep, None))
}

/// Search the eps-ball around `x` for a point whose orbit separates from the
/// orbit of `x` by more than `delta` within `horizon` steps.
pub fn find_witness(
    seq: &MapSequence,
    x: &Point,
    eps: f64,
    delta: f64,
    horizon: u64,
    budget: usize,
    rng_seed: u64,
) -> Result<Option<SensitivityWitness>> {
    check_search_params(eps, delta, horizon, budget)?;
    let space = &seq.space;
    let x_scan = seq.trajectory_scan(x, horizon)?;
    for h in displacement_list(space, eps, budget, rng_seed) {
        let Some(y) = space.translate(x, &h)? else {
            continue;
        };
        let dxy = space.distance(x, &y)?;
        if dxy <= 0.0 || dxy >= eps {
            continue;
        }
        let y_scan = seq.trajectory_scan(&y, horizon)?;
        if let (_, Some((n, sep))) = scan_pair(space, &x_scan, &y_scan, Some(delta))? {
            return Ok(Some(SensitivityWitness {
                x: x.clone(),
                y,
                n,
                separation: sep,
                eps_used: eps,
            }));
        }
    }
    Ok(None)
}

fn check_search_params(eps: f64, delta: f64, horizon: u64, budget: usize) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::invalid_param("eps", "must be positive"));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid_param("delta", "must be positive"));
    }
    if horizon < 1 {
        return Err(Error::invalid_param("horizon", "must be >= 1"));
    }
    if budget < 2 {
        return Err(Error::invalid_param("budget", "must be >= 2"));
    }
    Ok(())
}

/// Largest separation achievable from `x` under the same candidate
/// enumeration `find_witness` uses, so `max_sep > delta` iff `find_witness`
/// would succeed at `delta` with this seed and budget.
fn pair_max_separation(
    seq: &MapSequence,
    x: &Point,
    eps: f64,
    horizon: u64,
    budget: usize,
    seed: u64,
) -> Result<(f64, u64)> {
    let space = &seq.space;
    let x_scan = seq.trajectory_scan(x, horizon)?;
    let mut escapes = u64::from(x_scan.escaped.is_some());
    let mut best: f64 = 0.0;
    for h in displacement_list(space, eps, budget, seed) {
        let Some(y) = space.translate(x, &h)? else {
            continue;
        };
        let dxy = space.distance(x, &y)?;
        if dxy <= 0.0 || dxy >= eps {
            continue;
        }
        let y_scan = seq.trajectory_scan(&y, horizon)?;
        escapes += u64::from(y_scan.escaped.is_some());
        let (max_sep, _) = scan_pair(space, &x_scan, &y_scan, None)?;
        best = best.max(max_sep);
    }
    Ok((best, escapes))
}

/// Geometric delta candidates, ratio 1/2, from diam/2 down to 2^-20 * diam.
pub fn default_delta_ladder(diameter: f64) -> Vec<f64> {
    (1..=20).map(|j| diameter * 0.5f64.powi(j)).collect()
}

/// Estimate a sensitivity constant: the largest delta from the candidate
/// ladder for which every (base point, eps) pair has a witness.
///
/// Delta candidates at or below the coarsest ladder eps are discarded: a
/// separation smaller than the perturbation that produced it is not
/// amplification evidence (an isometry would "achieve" it).
pub fn estimate_sensitivity_constant(
    seq: &MapSequence,
    base_points: &[Point],
    eps_ladder: &[f64],
    horizon: u64,
    budget: usize,
    rng_seed: u64,
) -> Result<SensitivityReport> {
    let mut deltas = default_delta_ladder(seq.space.diameter());
    let eps_max = eps_ladder.first().copied().unwrap_or(0.0);
    deltas.retain(|d| *d > eps_max);
    estimate_with_deltas(
        seq,
        base_points,
        eps_ladder,
        horizon,
        budget,
        rng_seed,
        &deltas,
    )
}

/// Same estimator with an explicit descending delta candidate list; used by
/// pipelines that pin the claimed constant (a Banks certificate pins eta).
pub fn estimate_with_deltas(
    seq: &MapSequence,
    base_points: &[Point],
    eps_ladder: &[f64],
    horizon: u64,
    budget: usize,
    rng_seed: u64,
    deltas: &[f64],
) -> Result<SensitivityReport> {
    if base_points.is_empty() {
        return Err(Error::invalid_param("base_points", "must be non-empty"));
    }
    check_ladder(eps_ladder)?;
    if horizon < 1 {
        return Err(Error::invalid_param("horizon", "must be >= 1"));
    }

    let pairs: Vec<(usize, usize)> = (0..base_points.len())
        .flat_map(|xi| (0..eps_ladder.len()).map(move |ei| (xi, ei)))
        .collect();
    let scans: Vec<(f64, u64)> = pairs
        .par_iter()
        .map(|&(xi, ei)| {
            pair_max_separation(
                seq,
                &base_points[xi],
                eps_ladder[ei],
                horizon,
                budget,
                pair_seed(rng_seed, xi, ei),
            )
        })
        .collect::<Result<_>>()?;
    let escapes: u64 = scans.iter().map(|(_, e)| e).sum();
    let min_max = scans.iter().map(|(s, _)| *s).fold(f64::INFINITY, f64::min);

    let found = deltas.iter().copied().find(|d| *d < min_max);
    let (delta_estimate, verdict) = match found {
        Some(d) => (d, SensitivityVerdict::EvidenceSensitive),
        None => (0.0, SensitivityVerdict::NoWitnessFound),
    };
    let coverage_delta = if delta_estimate > 0.0 {
        delta_estimate
    } else {
        deltas.last().copied().unwrap_or(f64::INFINITY)
    };
    let witness_coverage =
        scans.iter().filter(|(s, _)| *s > coverage_delta).count() as f64 / scans.len() as f64;

    // store a sample of concrete witnesses at the reported delta
    let mut witnesses = Vec::new();
    if delta_estimate > 0.0 {
        for &(xi, ei) in &pairs {
            if witnesses.len() >= WITNESS_SAMPLE_CAP {
                break;
            }
            if let Some(w) = find_witness(
                seq,
                &base_points[xi],
                eps_ladder[ei],
                delta_estimate,
                horizon,
                budget,
                pair_seed(rng_seed, xi, ei),
            )? {
                witnesses.push(w);
            }
        }
    }

    Ok(SensitivityReport {
        delta_estimate,
        horizon,
        base_points_tested: base_points.len(),
        eps_ladder: eps_ladder.to_vec(),
        witness_coverage,
        witnesses,
        verdict,
        escapes,
    })
}

fn pair_seed(seed: u64, xi: usize, ei: usize) -> u64 {
    derive_seed(seed, ((xi as u64) << 20) ^ ei as u64)
}

fn check_ladder(eps_ladder: &[f64]) -> Result<()> {
    if eps_ladder.is_empty() {
        return Err(Error::invalid_param("eps_ladder", "must be non-empty"));
    }
    for w in eps_ladder.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::invalid_param(
                "eps_ladder",
                "must be strictly decreasing",
            ));
        }
    }
    if !(eps_ladder[eps_ladder.len() - 1] > 0.0) {
        return Err(Error::invalid_param(
            "eps_ladder",
            "entries must be positive",
        ));
    }
    Ok(())
}

fn check_distinct(seq: &MapSequence, xs: &[Point]) -> Result<()> {
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if seq.space.distance(&xs[i], &xs[j])? <= POINT_IDENTITY_TOL {
                return Err(Error::DuplicateBasePoints { i, j });
            }
        }
    }
    Ok(())
}

/// Search for an n-point collective witness: candidate families are shared
/// displacements of all base points first (the constructions behind linear
/// systems and expanding interval maps both favor them), then independent
/// per-point perturbations. Both anchor modes are tried at every time step;
/// the first witness in deterministic scan order is returned.
pub fn check_collective(
    seq: &MapSequence,
    xs: &[Point],
    eps: f64,
    delta: f64,
    horizon: u64,
    budget: usize,
    rng_seed: u64,
) -> Result<Option<CollectiveWitness>> {
    n_point_search(seq, xs, eps, delta, horizon, budget, rng_seed, false)
}

/// Search for a synchronous witness: every pair (x_i, y_i) must separate by
/// at least delta at one common time step.
pub fn check_synchronous(
    seq: &MapSequence,
    xs: &[Point],
    eps: f64,
    delta: f64,
    horizon: u64,
    budget: usize,
    rng_seed: u64,
) -> Result<Option<CollectiveWitness>> {
    n_point_search(seq, xs, eps, delta, horizon, budget, rng_seed, true)
}

#[allow(clippy::too_many_arguments)]
fn n_point_search(
    seq: &MapSequence,
    xs: &[Point],
    eps: f64,
    delta: f64,
    horizon: u64,
    budget: usize,
    rng_seed: u64,
    synchronous: bool,
) -> Result<Option<CollectiveWitness>> {
    check_search_params(eps, delta, horizon, budget)?;
    if xs.is_empty() {
        return Err(Error::invalid_param("xs", "must be non-empty"));
    }
    check_distinct(seq, xs)?;

    // a singleton collapses to the plain definition; delegate so the result
    // is identical to find_witness under the same budget and seed
    if xs.len() == 1 {
        return Ok(
            find_witness(seq, &xs[0], eps, delta, horizon, budget, rng_seed)?.map(|w| {
                CollectiveWitness {
                    xs: vec![w.x.clone()],
                    ys: vec![w.y.clone()],
                    k: w.n,
                    i0: (!synchronous).then_some(0),
                    mode: if synchronous {
                        WitnessMode::Synchronous
                    } else {
                        WitnessMode::XAgainstAnchorY
                    },
                    separations: vec![w.separation],
                }
            }),
        );
    }

    let space = &seq.space;
    let x_scans: Vec<TrajectoryScan> = xs
        .iter()
        .map(|x| seq.trajectory_scan(x, horizon))
        .collect::<Result<_>>()?;

    // phase 1: shared displacements
    for h in displacement_list(space, eps, budget / 2, derive_seed(rng_seed, 0xA)) {
        let mut ys = Vec::with_capacity(xs.len());
        for x in xs {
            match space.translate(x, &h)? {
                Some(y) => ys.push(y),
                None => break,
            }
        }
        if ys.len() != xs.len() {
            continue;
        }
        if let Some(w) = try_family(seq, xs, &x_scans, &ys, eps, delta, synchronous)? {
            return Ok(Some(w));
        }
    }

    // phase 2: independent per-point displacements
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(rng_seed, 0xB));
    for _ in 0..budget.div_ceil(2) {
        let mut ys = Vec::with_capacity(xs.len());
        for x in xs {
            let hs = displacement_list(space, eps, 2, rng.gen());
            match space.translate(x, &hs[hs.len() - 1])? {
                Some(y) => ys.push(y),
                None => break,
            }
        }
        if ys.len() != xs.len() {
            continue;
        }
        if let Some(w) = try_family(seq, xs, &x_scans, &ys, eps, delta, synchronous)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Check one candidate family against the mode conditions at every common
/// time step.
fn try_family(
    seq: &MapSequence,
    xs: &[Point],
    x_scans: &[TrajectoryScan],
    ys: &[Point],
    eps: f64,
    delta: f64,
    synchronous: bool,
) -> Result<Option<CollectiveWitness>> {
    let space = &seq.space;
    let n = xs.len();
    // condition (1): proximity, and the y's must be pairwise distinct points
    for (x, y) in xs.iter().zip(ys) {
        let d = space.distance(x, y)?;
        if !(d > 0.0 && d < eps) {
            return Ok(None);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if space.distance(&ys[i], &ys[j])? <= POINT_IDENTITY_TOL {
                return Ok(None);
            }
        }
    }
    let horizon = x_scans.iter().map(|s| s.points.len()).min().unwrap_or(1) as u64 - 1;
    let y_scans: Vec<TrajectoryScan> = ys
        .iter()
        .map(|y| seq.trajectory_scan(y, horizon))
        .collect::<Result<_>>()?;
    let steps = y_scans
        .iter()
        .map(|s| s.points.len() as u64 - 1)
        .min()
        .unwrap_or(0)
        .min(horizon);

    for k in 1..=steps {
        let fx: Vec<&Point> = x_scans.iter().map(|s| &s.points[k as usize]).collect();
        let fy: Vec<&Point> = y_scans.iter().map(|s| &s.points[k as usize]).collect();
        if synchronous {
            let mut seps = Vec::with_capacity(n);
            let mut ok = true;
            for i in 0..n {
                let d = space.distance(fx[i], fy[i])?;
                if d < delta {
                    ok = false;
                    break;
                }
                seps.push(d);
            }
            if ok {
                return Ok(Some(CollectiveWitness {
                    xs: xs.to_vec(),
                    ys: ys.to_vec(),
                    k,
                    i0: None,
                    mode: WitnessMode::Synchronous,
                    separations: seps,
                }));
            }
        } else {
            for i0 in 0..n {
                // x_i against the anchored y_{i0}
                let mut seps = Vec::with_capacity(n);
                let mut ok = true;
                for fx_i in &fx {
                    let d = space.distance(fx_i, fy[i0])?;
                    if d < delta {
                        ok = false;
                        break;
                    }
                    seps.push(d);
                }
                if ok {
                    return Ok(Some(CollectiveWitness {
                        xs: xs.to_vec(),
                        ys: ys.to_vec(),
                        k,
                        i0: Some(i0),
                        mode: WitnessMode::XAgainstAnchorY,
                        separations: seps,
                    }));
                }
                // y_i against the anchored x_{i0}
                let mut seps = Vec::with_capacity(n);
                let mut ok = true;
                for fy_i in &fy {
                    let d = space.distance(fy_i, fx[i0])?;
                    if d < delta {
                        ok = false;
                        break;
                    }
                    seps.push(d);
                }
                if ok {
                    return Ok(Some(CollectiveWitness {
                        xs: xs.to_vec(),
                        ys: ys.to_vec(),
                        k,
                        i0: Some(i0),
                        mode: WitnessMode::YAgainstAnchorX,
                        separations: seps,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Largest delta for which some candidate family satisfies the n-point
/// condition, over the same enumeration the searches use. Used to estimate
/// collective/synchronous constants on iterate systems.
pub(crate) fn n_point_best_separation(
    seq: &MapSequence,
    xs: &[Point],
    eps: f64,
    horizon: u64,
    budget: usize,
    rng_seed: u64,
    synchronous: bool,
) -> Result<f64> {
    check_distinct(seq, xs)?;
    let space = &seq.space;
    if xs.len() == 1 {
        let (best, _) = pair_max_separation(seq, &xs[0], eps, horizon, budget, rng_seed)?;
        return Ok(best);
    }
    let x_scans: Vec<TrajectoryScan> = xs
        .iter()
        .map(|x| seq.trajectory_scan(x, horizon))
        .collect::<Result<_>>()?;
    let mut best: f64 = 0.0;
    for h in displacement_list(space, eps, budget / 2, derive_seed(rng_seed, 0xA)) {
        let mut ys = Vec::with_capacity(xs.len());
        for x in xs {
            match space.translate(x, &h)? {
                Some(y) => ys.push(y),
                None => break,
            }
        }
        if ys.len() != xs.len() {
            continue;
        }
        best = best.max(family_best(seq, &x_scans, &ys, synchronous)?);
    }
    Ok(best)
}

/// Best over k of (min over i of the mode separation) for one family.
fn family_best(
    seq: &MapSequence,
    x_scans: &[TrajectoryScan],
    ys: &[Point],
    synchronous: bool,
) -> Result<f64> {
    let space = &seq.space;
    let n = x_scans.len();
    let horizon = x_scans.iter().map(|s| s.points.len()).min().unwrap() as u64 - 1;
    let y_scans: Vec<TrajectoryScan> = ys
        .iter()
        .map(|y| seq.trajectory_scan(y, horizon))
        .collect::<Result<_>>()?;
    let steps = y_scans
        .iter()
        .map(|s| s.points.len() as u64 - 1)
        .min()
        .unwrap_or(0)
        .min(horizon);
    let mut best: f64 = 0.0;
    for k in 1..=steps {
        let fx: Vec<&Point> = x_scans.iter().map(|s| &s.points[k as usize]).collect();
        let fy: Vec<&Point> = y_scans.iter().map(|s| &s.points[k as usize]).collect();
        if synchronous {
            let mut worst = f64::INFINITY;
            for i in 0..n {
                worst = worst.min(space.distance(fx[i], fy[i])?);
            }
            best = best.max(worst);
        } else {
            for i0 in 0..n {
                let mut worst = f64::INFINITY;
                for fx_i in &fx {
                    worst = worst.min(space.distance(fx_i, fy[i0])?);
                }
                best = best.max(worst);
                let mut worst = f64::INFINITY;
                for fy_i in &fy {
                    worst = worst.min(space.distance(fy_i, fx[i0])?);
                }
                best = best.max(worst);
            }
        }
    }
    Ok(best)
}
