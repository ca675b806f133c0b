//! Witness search for sensitive dependence on initial conditions.
//!
//! A witness is concrete evidence: a point y within eps of x whose orbit
//! separates from the orbit of x by more than delta at some step. The
//! estimator scans a ladder of eps scales and base points and reports the
//! largest delta achieved everywhere. Absence of a witness is always "not
//! found under this budget", never a claim of non-sensitivity.
//!
//! Run with: cargo run --example sensitivity_search

use nads::sensitivity::{estimate_sensitivity_constant, find_witness};
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn main() -> nads::Result<()> {
    let doubling = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;

    let w = find_witness(&doubling, &Point::scalar(0.2), 1e-3, 0.25, 32, 64, 7)?
        .expect("the doubling map separates everything");
    println!(
        "doubling witness: |x - y| < 1e-3 separates to {:.4} at step {}",
        w.separation, w.n
    );

    let base = doubling.space.grid(32)?;
    let rep = estimate_sensitivity_constant(&doubling, &base, &[0.1, 0.01, 0.001], 64, 64, 42)?;
    println!(
        "doubling delta estimate: {} (coverage {:.2}, verdict {:?})",
        rep.delta_estimate, rep.witness_coverage, rep.verdict
    );

    // isometries never separate beyond the initial offset
    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;
    let w = find_witness(&f, &Point::scalar(1.0), 0.01, 0.1, 1000, 64, 3)?;
    println!("alternating translations witness at delta > eps: {w:?}");

    let identity = MapSequence::constant(StateSpace::UnitInterval, MapExpr::identity())?;
    let rep = estimate_sensitivity_constant(
        &identity,
        &identity.space.grid(8)?,
        &[0.1, 0.01, 0.001],
        64,
        32,
        42,
    )?;
    println!(
        "identity delta estimate: {} (verdict {:?})",
        rep.delta_estimate, rep.verdict
    );
    Ok(())
}
