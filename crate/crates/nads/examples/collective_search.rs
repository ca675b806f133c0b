//! n-point sensitivity witnesses: collective and synchronous.
//!
//! Collective: all base points separate from one anchored partner image at
//! a common time (either orientation). Synchronous: every pair (x_i, y_i)
//! separates at the same time. Shared displacements are tried first; a
//! synchronous witness replays as one plain witness per index.
//!
//! Run with: cargo run --example collective_search

use nads::sensitivity::{check_collective, check_synchronous};
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn main() -> nads::Result<()> {
    let doubling = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;

    let xs = vec![Point::scalar(0.1), Point::scalar(0.3)];
    let w = check_collective(&doubling, &xs, 1e-3, 0.2, 40, 64, 9)?
        .expect("collective witness expected");
    println!(
        "collective witness at k={} (mode {:?}, anchor {:?}): separations {:?}",
        w.k, w.mode, w.i0, w.separations
    );

    let xs = vec![Point::scalar(0.1), Point::scalar(0.3), Point::scalar(0.6)];
    let w = check_synchronous(&doubling, &xs, 1e-3, 0.2, 40, 64, 13)?
        .expect("synchronous witness expected");
    println!(
        "synchronous witness at k={}: separations {:?}",
        w.k, w.separations
    );
    println!("  per-index replay as plain witnesses:");
    for pw in w.per_index_witnesses(1e-3) {
        println!(
            "    x={:?} separates to {:.4} at step {}",
            pw.x, pw.separation, pw.n
        );
    }

    // identity: no n-point witness at any delta beyond the perturbation
    let identity = MapSequence::constant(StateSpace::UnitInterval, MapExpr::identity())?;
    let xs = vec![Point::scalar(0.2), Point::scalar(0.6)];
    let none = check_collective(&identity, &xs, 1e-2, 0.1, 64, 32, 4)?;
    println!("identity collective witness: {none:?}");
    Ok(())
}
