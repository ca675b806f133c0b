//! Three-flag chaos evidence: dense periodic points, transitivity,
//! sensitivity. Flags are evidence-level, never proofs.
//!
//! Run with: cargo run --example devaney_flags

use nads::banks::{devaney_report, BanksConfig};
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn show(name: &str, rep: &nads::banks::DevaneyReport) {
    println!(
        "{name:<26} dense-periodic: {:<5} transitive: {:<5} sensitive: {:<5} all: {}",
        rep.density_positive, rep.transitivity_positive, rep.sensitivity_positive, rep.all_positive
    );
}

fn main() -> nads::Result<()> {
    let base_cfg = BanksConfig {
        transitivity_resolution: 1.0 / 16.0,
        transitivity_horizon: 64,
        samples_per_ball: 8,
        density_resolution: 1.0 / 64.0,
        density_n_max: 10,
        density_q_max: 128,
        density_threshold: 0.95,
        candidates: None,
        periodic_n_max: 8,
        periodic_k_max: 16,
        tol: 1e-9,
        base_points: StateSpace::Circle.grid(32)?,
        eps_ladder: vec![0.1, 0.01, 0.001],
        horizon: 64,
        budget: 64,
        rng_seed: 31,
    };

    let doubling = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;
    show("doubling", &devaney_report(&doubling, &base_cfg)?);

    let identity = MapSequence::constant(StateSpace::UnitInterval, MapExpr::identity())?;
    let mut cfg = base_cfg.clone();
    cfg.base_points = StateSpace::UnitInterval.grid(8)?;
    cfg.transitivity_resolution = 0.25;
    show("identity", &devaney_report(&identity, &cfg)?);

    // every point of the alternating-translation system is periodic, though
    // orbits near the window edge escape; the threshold scopes the claim
    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;
    let mut cfg = base_cfg.clone();
    cfg.base_points = vec![Point::scalar(0.0), Point::scalar(1.0), Point::scalar(-2.0)];
    cfg.transitivity_resolution = 1.0;
    cfg.density_resolution = 0.5;
    cfg.density_threshold = 0.8;
    show("alternating translations", &devaney_report(&f, &cfg)?);
    Ok(())
}
