//! The full certificate pipeline with constructed constants.
//!
//! Three pieces of hypothesis evidence — transitivity, dense periodic
//! points, and a disjoint pair of invariant periodic orbits — combine into
//! explicit constants: delta is one third of the smallest inter-orbit
//! distance, eta is delta / 8, and eta is then confirmed as a sensitivity
//! constant by direct witness search around every base point.
//!
//! For the doubling map with candidates {0, 1/3}: orbits {0} and
//! {1/3, 2/3} sit 1/3 apart, so delta = 1/9 and eta = 1/72.
//!
//! Run with: cargo run --example banks_certificate

use nads::banks::{banks_certify, BanksConfig};
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn main() -> nads::Result<()> {
    let doubling = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;
    let cfg = BanksConfig {
        transitivity_resolution: 1.0 / 16.0,
        transitivity_horizon: 64,
        samples_per_ball: 8,
        density_resolution: 1.0 / 64.0,
        density_n_max: 10,
        density_q_max: 128,
        density_threshold: 0.95,
        candidates: Some(vec![Point::scalar(0.0), Point::scalar(1.0 / 3.0)]),
        periodic_n_max: 8,
        periodic_k_max: 16,
        tol: 1e-9,
        base_points: StateSpace::Circle.grid(32)?,
        eps_ladder: vec![0.1, 0.01, 0.001],
        horizon: 64,
        budget: 64,
        rng_seed: 2024,
    };

    let cert = banks_certify(&doubling, &cfg)?;
    println!("verdict: {:?}", cert.verdict);
    println!(
        "transitivity hit fraction: {:.3}",
        cert.transitivity.hit_fraction
    );
    println!("periodic density coverage: {:.3}", cert.density.coverage);
    let pair = cert.orbit_pair.as_ref().unwrap();
    println!(
        "invariant periodic orbits: {:?} (period {}) and {:?} (period {})",
        pair.p1.orbit_points, pair.p1.period, pair.p2.orbit_points, pair.p2.period
    );
    println!(
        "constants: min distance {:.6}, delta = {:.6}, eta = {:.6}",
        pair.min_inter_orbit_distance, pair.delta, pair.eta
    );
    let conf = cert.sensitivity_confirmation.as_ref().unwrap();
    println!(
        "eta-witness coverage over {} base points: {:.2}",
        conf.base_points_tested, conf.witness_coverage
    );

    // a system of isometries fails: every point is periodic but no orbit is
    // invariant, and transitivity evidence stays partial
    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;
    let mut fcfg = cfg.clone();
    fcfg.candidates = Some(vec![Point::scalar(1.0)]);
    fcfg.base_points = vec![Point::scalar(0.0), Point::scalar(1.0)];
    fcfg.transitivity_resolution = 1.0;
    fcfg.density_resolution = 0.5;
    fcfg.density_threshold = 0.8;
    let cert = banks_certify(&f, &fcfg)?;
    println!(
        "alternating translations: {:?}, unmet hypotheses {:?}",
        cert.verdict, cert.unmet
    );
    Ok(())
}
