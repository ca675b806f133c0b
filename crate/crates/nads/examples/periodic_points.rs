//! Periodic points whose orbits may or may not be invariant sets.
//!
//! In a non-autonomous sequence a periodic orbit need not be invariant:
//! the alternating-translation system makes every point periodic with
//! period 2, yet no orbit {x, x+1} survives either generator. The
//! square/negate system at -1 shows the invariant kind.
//!
//! Run with: cargo run --example periodic_points

use nads::periodic::{
    dense_periodic_estimate, detect_periodic_point, is_invariant_periodic_point, is_invariant_set,
};
use nads::{MapExpr, MapSequence, Point, StateSpace};

fn main() -> nads::Result<()> {
    let f = MapSequence::alternating(
        StateSpace::RealLine { window: [-4.0, 4.0] },
        MapExpr::Translation { c: 1.0 },
        MapExpr::Translation { c: -1.0 },
    )?;
    let rep = detect_periodic_point(&f, &Point::scalar(1.0), 8, 16, 1e-9)?.unwrap();
    println!(
        "alternating translations at 1: period {}, orbit {:?}, invariant: {}",
        rep.period, rep.orbit_points, rep.invariant
    );
    let chk = is_invariant_set(&f, &rep.orbit_points, 1e-9, None)?;
    if let Some(v) = chk.violation {
        println!(
            "  violation: generator {} sends {:?} to {:?} (distance {:.3} from the set)",
            v.map_index, v.point, v.image, v.distance_to_set
        );
    }

    let g = MapSequence::alternating(
        StateSpace::RealLine {
            window: [-1e6, 1e6],
        },
        MapExpr::Square,
        MapExpr::Negation,
    )?;
    let res = is_invariant_periodic_point(&g, &Point::scalar(-1.0), 8, 16, 1e-9)?;
    let rep = res.report.unwrap();
    println!(
        "square/negate at -1: period {}, orbit {:?}, invariant periodic: {}",
        rep.period, rep.orbit_points, res.invariant_periodic
    );

    // periodic points of the doubling map are dense: rationals with odd
    // denominator; a grid scan covers every 1/64 cell
    let d = MapSequence::constant(StateSpace::Circle, MapExpr::Doubling)?;
    let density = dense_periodic_estimate(&d, 1.0 / 64.0, 10, 128, 1e-9)?;
    println!(
        "doubling: {}/{} cells contain a verified periodic point (coverage {:.3})",
        density.covered, density.cells, density.coverage
    );

    // an irrational rotation has none
    let rot = MapSequence::constant(
        StateSpace::Circle,
        MapExpr::Translation {
            c: std::f64::consts::SQRT_2,
        },
    )?;
    let density = dense_periodic_estimate(&rot, 1.0 / 16.0, 10, 32, 1e-9)?;
    println!("irrational rotation coverage: {:.3}", density.coverage);
    Ok(())
}
