//! Trajectories and windowed composition on a non-autonomous sequence.
//!
//! Builds the alternating-translation system (+1, -1, +1, ...) on the real
//! line and the square/negate system, prints orbits, evaluates windows
//! starting at arbitrary indices, and exhibits a commutativity
//! counterexample.
//!
//! Run with: cargo run --example orbits

use nads::sequence::check_commutative;
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn main() -> nads::Result<()> {
    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;

    let orbit = f.trajectory(&Point::scalar(1.0), 8)?;
    let values: Vec<f64> = orbit
        .points
        .iter()
        .map(|p| p.as_scalar().unwrap())
        .collect();
    println!("alternating translations, orbit of 1: {values:?}");

    // windows of the sequence starting mid-stream: two steps from index 2
    // apply -1 then +1
    let w = f.apply_window(2, 2, &Point::scalar(1.0))?;
    println!("window (i=2, n=2) at 1: {}", w.as_scalar()?);

    let g = MapSequence::alternating(
        StateSpace::RealLine {
            window: [-1e6, 1e6],
        },
        MapExpr::Square,
        MapExpr::Negation,
    )?;
    let orbit = g.trajectory(&Point::scalar(-1.0), 6)?;
    let values: Vec<f64> = orbit
        .points
        .iter()
        .map(|p| p.as_scalar().unwrap())
        .collect();
    println!("square/negate, orbit of -1: {values:?}");

    // compositions from index 1 in the two orders disagree at x = 2
    let chk = check_commutative(&g, &[Point::scalar(2.0)], 2, 2, 1e-9)?;
    match chk.counterexample {
        Some(ce) => println!(
            "square/negate is not commutative: at x={:?}, (m={}, n={}) gives {:?} vs {:?}",
            ce.x, ce.m, ce.n, ce.lhs, ce.rhs
        ),
        None => println!("no commutativity counterexample found"),
    }

    let d = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;
    let chk = check_commutative(
        &d,
        &[Point::scalar(0.1), Point::scalar(0.37)],
        4,
        4,
        1e-9,
    )?;
    println!("constant doubling sequence commutative: {}", chk.commutative);
    Ok(())
}
