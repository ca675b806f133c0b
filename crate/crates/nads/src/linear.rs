//! Linear sequences on finite-dimensional truncations: sampled validation of
//! linearity and translation invariance, zero-neighborhood separation
//! witnesses, and the constructive collective/synchronous witnesses for
//! commutative linear systems.
//!
//! The constructions displace every base point by the same pair of
//! near-zero vectors z1, z2: translation invariance gives d(x_i, x_i + z) =
//! d(0, z), linearity gives d(f^k(x_i + z1), f^k(x_i + z2)) =
//! d(f^k(z1), f^k(z2)), and the triangle inequality guarantees one branch
//! of {x_i + z1, x_i + z2} separates from the anchor by more than eta/2.
//! Every identity and inequality used is checked numerically and recorded
//! in a trace.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::sensitivity::{derive_seed, POINT_IDENTITY_TOL};
use crate::sequence::{check_commutative, MapSequence};
use crate::space::StateSpace;
use crate::witness::{CollectiveWitness, WitnessMode, ZeroWitness};

/// A map sequence declared linear: vector-space state space with a
/// norm-induced (hence translation-invariant) metric. Construction checks
/// structure only; `validate_linear_system` does the sampled checks.
#[derive(Debug, Clone, Serialize)]
pub struct LinearSystemSpec {
    seq: MapSequence,
}

impl LinearSystemSpec {
    pub fn new(seq: MapSequence) -> Result<Self> {
        if !matches!(seq.space, StateSpace::VectorSpace { .. }) {
            return Err(Error::InvalidSystem(
                "linear systems live on vector spaces".into(),
            ));
        }
        if seq.generator_set().is_none() {
            return Err(Error::InvalidSystem(
                "linear systems need a finite generator set".into(),
            ));
        }
        Ok(LinearSystemSpec { seq })
    }

    pub fn sequence(&self) -> &MapSequence {
        &self.seq
    }

    pub fn dimension(&self) -> usize {
        self.seq.space.dimension()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearityViolation {
    pub generator_index: usize,
    pub a: f64,
    pub b: f64,
    pub x: Point,
    pub y: Point,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslationViolation {
    pub x: Point,
    pub y: Point,
    pub z: Point,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearValidation {
    pub passed: bool,
    pub samples: usize,
    pub linearity_violations: Vec<LinearityViolation>,
    pub translation_violations: Vec<TranslationViolation>,
}

/// Sampled validation: d(f(ax + by), a f(x) + b f(y)) <= tol for every
/// generator, and translation invariance of the metric, on seeded random
/// samples.
pub fn validate_linear_system(
    spec: &LinearSystemSpec,
    samples: usize,
    tol: f64,
    rng_seed: u64,
) -> Result<LinearValidation> {
    if samples < 1 {
        return Err(Error::invalid_param("samples", "must be >= 1"));
    }
    let seq = &spec.seq;
    let space = &seq.space;
    let d = spec.dimension();
    let gens = seq.generator_set().expect("checked at construction");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let rand_point =
        |rng: &mut ChaCha8Rng| Point::Vector((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());

    let mut linearity_violations = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for _ in 0..samples {
            let a = rng.gen_range(-2.0..2.0);
            let b = rng.gen_range(-2.0..2.0);
            let x = rand_point(&mut rng);
            let y = rand_point(&mut rng);
            let combo = x.scale(a).add(&y.scale(b))?;
            let lhs = g.eval(space, &combo)?;
            let rhs = g.eval(space, &x)?.scale(a).add(&g.eval(space, &y)?.scale(b))?;
            let disc = space.distance(&lhs, &rhs)?;
            if disc > tol && linearity_violations.len() < 8 {
                linearity_violations.push(LinearityViolation {
                    generator_index: gi,
                    a,
                    b,
                    x,
                    y,
                    discrepancy: disc,
                });
            }
        }
    }

    let mut translation_violations = Vec::new();
    for _ in 0..samples {
        let x = rand_point(&mut rng);
        let y = rand_point(&mut rng);
        let z = rand_point(&mut rng);
        let base = space.distance(&x, &y)?;
        let moved = space.distance(&x.add(&z)?, &y.add(&z)?)?;
        let disc = (base - moved).abs();
        if disc > tol && translation_violations.len() < 8 {
            translation_violations.push(TranslationViolation {
                x,
                y,
                z,
                discrepancy: disc,
            });
        }
    }

    Ok(LinearValidation {
        passed: linearity_violations.is_empty() && translation_violations.is_empty(),
        samples,
        linearity_violations,
        translation_violations,
    })
}

/// Search for z1, z2 in the eps-ball around the origin whose orbits separate
/// beyond eta within `horizon` steps.
///
/// Scaled basis directions are scanned first: by linearity the separation of
/// (c e_i, -c e_i) scales linearly in c, so direction growth profiles locate
/// the witness and a direct evaluation then confirms it. Random pairs are
/// the fallback.
pub fn lemma_zero_witness(
    spec: &LinearSystemSpec,
    eps: f64,
    eta: f64,
    horizon: u64,
    budget: usize,
    rng_seed: u64,
) -> Result<Option<ZeroWitness>> {
    if !(eps > 0.0) || !(eta > 0.0) {
        return Err(Error::invalid_param("eps/eta", "must be positive"));
    }
    let seq = &spec.seq;
    let space = &seq.space;
    let d = spec.dimension();
    let c = 0.45 * eps;

    // direction growth profiles
    let mut growth: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let scan = seq.trajectory_scan(&Point::basis(d, i, 1.0), horizon)?;
        growth.push(
            scan.points
                .iter()
                .map(|p| space.norm_of(p))
                .collect::<Result<_>>()?,
        );
    }
    for k in 1..=horizon {
        for (i, g) in growth.iter().enumerate() {
            if g.len() as u64 <= k {
                continue;
            }
            if 2.0 * c * g[k as usize] > eta {
                let z1 = Point::basis(d, i, c);
                let z2 = Point::basis(d, i, -c);
                let a = seq.apply_window(1, k, &z1)?;
                let b = seq.apply_window(1, k, &z2)?;
                let sep = space.distance(&a, &b)?;
                if sep > eta {
                    return Ok(Some(ZeroWitness {
                        z1,
                        z2,
                        k,
                        separation: sep,
                    }));
                }
            }
        }
    }

    // random fallback
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(rng_seed, 0xF));
    for _ in 0..budget {
        let draw = |rng: &mut ChaCha8Rng| -> Result<Point> {
            let v = Point::Vector((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let n = space.norm_of(&v)?;
            let r = eps * (0.1 + 0.89 * rng.gen::<f64>());
            Ok(if n > 1e-12 { v.scale(r / n) } else { v })
        };
        let z1 = draw(&mut rng)?;
        let z2 = draw(&mut rng)?;
        let s1 = seq.trajectory_scan(&z1, horizon)?;
        let s2 = seq.trajectory_scan(&z2, horizon)?;
        let steps = (s1.points.len().min(s2.points.len()) - 1) as u64;
        for k in 1..=steps {
            let sep = space.distance(&s1.points[k as usize], &s2.points[k as usize])?;
            if sep > eta {
                return Ok(Some(ZeroWitness {
                    z1,
                    z2,
                    k,
                    separation: sep,
                }));
            }
        }
    }
    Ok(None)
}

/// One recorded numerical check in a construction trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCheck {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Tolerance for identities; threshold for inequalities.
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionTrace {
    pub checks: Vec<TraceCheck>,
    pub all_passed: bool,
}

impl ConstructionTrace {
    fn identity(&mut self, label: String, lhs: f64, rhs: f64, tol: f64) {
        self.checks.push(TraceCheck {
            label,
            lhs,
            rhs,
            bound: tol,
            passed: (lhs - rhs).abs() <= tol,
        });
    }

    fn exceeds(&mut self, label: String, value: f64, threshold: f64) {
        self.checks.push(TraceCheck {
            label,
            lhs: value,
            rhs: threshold,
            bound: threshold,
            passed: value > threshold,
        });
    }

    fn finish(mut self) -> Self {
        self.all_passed = self.checks.iter().all(|c| c.passed);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearConfig {
    /// Separation target for the zero-neighborhood witness.
    pub eta: f64,
    pub horizon: u64,
    pub budget: usize,
    pub rng_seed: u64,
    pub validation_samples: usize,
    /// Tolerance for the sampled linearity checks.
    pub tol_linear: f64,
    /// Tolerance for translation-invariance identities.
    pub tol_metric: f64,
    /// Bounds for the commutativity precondition check.
    pub commutativity_depth: u64,
    pub commutativity_samples: usize,
}

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig {
            eta: 0.5,
            horizon: 32,
            budget: 64,
            rng_seed: 0,
            validation_samples: 32,
            tol_linear: 1e-9,
            tol_metric: 1e-12,
            commutativity_depth: 3,
            commutativity_samples: 8,
        }
    }
}

/// A constructed n-point witness with its zero-witness source and the full
/// inequality trace.
#[derive(Debug, Clone, Serialize)]
pub struct LinearConstruction {
    pub witness: CollectiveWitness,
    pub zero_witness: ZeroWitness,
    /// eta / 2, the constant the construction achieves.
    pub claimed_delta: f64,
    pub eps: f64,
    pub trace: ConstructionTrace,
}

fn preconditions(spec: &LinearSystemSpec, cfg: &LinearConfig) -> Result<()> {
    let validation = validate_linear_system(
        spec,
        cfg.validation_samples,
        cfg.tol_linear,
        derive_seed(cfg.rng_seed, 1),
    )?;
    if !validation.passed {
        return Err(Error::HypothesisUnmet {
            hypothesis: "sampled linearity / translation invariance failed".into(),
        });
    }
    let seq = &spec.seq;
    let d = spec.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.rng_seed, 2));
    let pts: Vec<Point> = (0..cfg.commutativity_samples)
        .map(|_| Point::Vector((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()))
        .collect();
    let commut = check_commutative(
        seq,
        &pts,
        cfg.commutativity_depth,
        cfg.commutativity_depth,
        1e-9,
    )?;
    if !commut.commutative {
        return Err(Error::HypothesisUnmet {
            hypothesis: "sampled commutativity failed".into(),
        });
    }
    Ok(())
}

/// Construct a collective witness at eta/2 from a zero-neighborhood witness:
/// y_i = x_i + z1, y_i* = x_i + z2, anchored at x_{i0} with i0 = 0.
pub fn collective_from_transitivity(
    spec: &LinearSystemSpec,
    xs: &[Point],
    eps: f64,
    cfg: &LinearConfig,
) -> Result<LinearConstruction> {
    construct(spec, xs, eps, cfg, false)
}

/// Construct a synchronous witness at eta/2: each index separates from its
/// own base point at the common time.
pub fn synchronous_from_transitivity(
    spec: &LinearSystemSpec,
    xs: &[Point],
    eps: f64,
    cfg: &LinearConfig,
) -> Result<LinearConstruction> {
    construct(spec, xs, eps, cfg, true)
}

fn construct(
    spec: &LinearSystemSpec,
    xs: &[Point],
    eps: f64,
    cfg: &LinearConfig,
    synchronous: bool,
) -> Result<LinearConstruction> {
    if xs.is_empty() {
        return Err(Error::invalid_param("xs", "must be non-empty"));
    }
    preconditions(spec, cfg)?;
    let seq = &spec.seq;
    let space = &seq.space;

    let Some(zw) = lemma_zero_witness(
        spec,
        eps,
        cfg.eta,
        cfg.horizon,
        cfg.budget,
        derive_seed(cfg.rng_seed, 3),
    )?
    else {
        return Err(Error::HypothesisUnmet {
            hypothesis: format!(
                "no zero-neighborhood witness at eta {} within horizon {}",
                cfg.eta, cfg.horizon
            ),
        });
    };
    let eta = cfg.eta;
    let k = zw.k;
    let half = eta / 2.0;
    let mut trace = ConstructionTrace {
        checks: Vec::new(),
        all_passed: false,
    };
    let zero = space.zero();
    let d0z1 = space.distance(&zero, &zw.z1)?;
    let d0z2 = space.distance(&zero, &zw.z2)?;
    let fz1 = seq.apply_window(1, k, &zw.z1)?;
    let fz2 = seq.apply_window(1, k, &zw.z2)?;
    let sep_z = space.distance(&fz1, &fz2)?;
    trace.exceeds("zero-witness separation > eta".into(), sep_z, eta);

    let n = xs.len();
    let mut selected: Vec<Point> = Vec::with_capacity(n);
    let mut separations: Vec<f64> = Vec::with_capacity(n);
    let anchor_images: Vec<Point> = xs
        .iter()
        .map(|x| seq.apply_window(1, k, x))
        .collect::<Result<_>>()?;

    for (i, x) in xs.iter().enumerate() {
        let y = x.add(&zw.z1)?;
        let y_star = x.add(&zw.z2)?;

        // translation identities: d(x_i, x_i + z) = d(0, z)
        trace.identity(
            format!("translation identity d(x_{i}, y_{i}) = d(0, z1)"),
            space.distance(x, &y)?,
            d0z1,
            cfg.tol_metric,
        );
        trace.identity(
            format!("translation identity d(x_{i}, y*_{i}) = d(0, z2)"),
            space.distance(x, &y_star)?,
            d0z2,
            cfg.tol_metric,
        );

        // linear separation identity: the pair (y_i, y_i*) separates exactly
        // like (z1, z2)
        let fy = seq.apply_window(1, k, &y)?;
        let fy_star = seq.apply_window(1, k, &y_star)?;
        let pair_sep = space.distance(&fy, &fy_star)?;
        trace.identity(
            format!("linear separation identity at index {i}"),
            pair_sep,
            sep_z,
            cfg.tol_linear * (1.0 + sep_z) * k as f64,
        );
        trace.exceeds(format!("pair separation > eta at index {i}"), pair_sep, eta);

        // branch guarantee through the anchor
        let anchor = if synchronous {
            &anchor_images[i]
        } else {
            &anchor_images[0]
        };
        let d_a = space.distance(&fy, anchor)?;
        let d_b = space.distance(&fy_star, anchor)?;
        trace.exceeds(
            format!("branch guarantee max(d_a, d_b) > eta/2 at index {i}"),
            d_a.max(d_b),
            half,
        );
        if d_a > half {
            selected.push(y);
            separations.push(d_a);
        } else if d_b > half {
            selected.push(y_star);
            separations.push(d_b);
        } else {
            return Err(Error::NumericalTolerance(format!(
                "branch selection failed at index {i}: d_a={d_a}, d_b={d_b}, eta/2={half}"
            )));
        }
    }

    // selected y's must be pairwise distinct points
    for i in 0..n {
        for j in (i + 1)..n {
            if space.distance(&selected[i], &selected[j])? <= POINT_IDENTITY_TOL {
                return Err(Error::NumericalTolerance(format!(
                    "selected witnesses at indices {i} and {j} coincide"
                )));
            }
        }
    }

    let witness = CollectiveWitness {
        xs: xs.to_vec(),
        ys: selected,
        k,
        i0: (!synchronous).then_some(0),
        mode: if synchronous {
            WitnessMode::Synchronous
        } else {
            WitnessMode::YAgainstAnchorX
        },
        separations,
    };
    Ok(LinearConstruction {
        witness,
        zero_witness: zw,
        claimed_delta: half,
        eps,
        trace: trace.finish(),
    })
}
