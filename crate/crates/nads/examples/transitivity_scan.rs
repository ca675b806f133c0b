//! Grid-ball transitivity evidence.
//!
//! Cover the space with balls and record, for each ordered pair (U, V), the
//! least time a sampled orbit from U lands in V. Full evidence means every
//! pair records a hit. The doubling map mixes; translations only ever reach
//! their right neighbor.
//!
//! Run with: cargo run --example transitivity_scan

use nads::transitivity::check_transitivity;
use nads::{MapExpr, MapSequence, StateSpace};

fn main() -> nads::Result<()> {
    let doubling = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;
    let rep = check_transitivity(&doubling, 1.0 / 16.0, 64, 8, 1234)?;
    println!(
        "doubling at resolution 1/16: hit fraction {:.3} over {} balls",
        rep.hit_fraction,
        rep.balls.len()
    );
    let worst = rep.hits.iter().map(|h| h.n).max().unwrap();
    println!("  slowest pair reached in {worst} steps");
    println!("  replay of stored hits: {}", rep.replay(&doubling)?);

    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;
    let rep = check_transitivity(&f, 1.0, 32, 4, 99)?;
    println!(
        "alternating translations at resolution 1: hit fraction {:.4}",
        rep.hit_fraction
    );
    for hit in rep.hits.iter().take(4) {
        println!(
            "  ball {} -> ball {} at n={}",
            hit.u_index, hit.v_index, hit.n
        );
    }
    println!("  (orbits visit only x and x+1, so distant pairs never hit)");
    Ok(())
}
