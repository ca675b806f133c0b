//! k-th iterate systems and preservation of sensitivity.
//!
//! The k-th iterate system advances k original steps per slot. For a
//! finitely generated sequence of uniformly continuous maps, a sensitivity
//! constant delta for the base system converts into a predicted constant
//! for every iterate system via the window modulus at window k+2:
//! eps_delta = delta / L^(k+2) when every generator is L-Lipschitz. The
//! check below measures each iterate system's own estimate and compares.
//!
//! Run with: cargo run --example iterate_systems

use nads::modulus::equicontinuity_window_modulus;
use nads::preservation::{verify_iterate_preservation, PreservationConfig, PreservationMode};
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn main() -> nads::Result<()> {
    let doubling = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;

    // one slot of the 3rd iterate is three doubling steps
    let it3 = doubling.iterate(3)?;
    let x = Point::scalar(0.1);
    println!(
        "third iterate of doubling at 0.1: {:?} (three steps of the base)",
        it3.apply_window(1, 1, &x)?
    );

    let modulus = equicontinuity_window_modulus(&doubling, 0.25, 5, 128)?;
    println!(
        "window modulus for delta = 0.25, window 5: eps_delta = {}",
        modulus.eps_delta
    );

    let cfg = PreservationConfig {
        base_points: StateSpace::Circle.grid(32)?,
        xs: vec![Point::scalar(0.1), Point::scalar(0.3)],
        eps_ladder: vec![0.1, 0.01, 0.001],
        horizon: 48,
        budget: 48,
        rng_seed: 11,
        grid_points: 128,
    };
    let rep = verify_iterate_preservation(
        &doubling,
        &[2, 3, 4, 5, 6, 7, 8],
        PreservationMode::Plain,
        &cfg,
    )?;
    println!(
        "base delta estimate {} -> verdict {:?}",
        rep.base_delta, rep.verdict
    );
    for row in &rep.rows {
        println!(
            "  k={}: predicted {:>12.9}  measured {:>7.4}  satisfied {}",
            row.k,
            row.predicted_eps_delta.unwrap_or(f64::NAN),
            row.measured_delta,
            row.satisfied
        );
    }

    // a sequence of isometries has nothing to preserve
    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;
    let mut c = cfg.clone();
    c.base_points = vec![Point::scalar(0.0), Point::scalar(1.0)];
    let rep = verify_iterate_preservation(&f, &[2], PreservationMode::Plain, &c)?;
    println!(
        "alternating translations: hypothesis met = {} ({:?})",
        rep.hypothesis_met, rep.verdict
    );
    Ok(())
}
