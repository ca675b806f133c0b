//! Uniform convergence of windowed powers for a uniform-limit sequence.
//!
//! The sequence f_n = (1 - 1/(n+2)) * tent converges uniformly to the tent
//! map. The probe finds, for each window length k, the first index N from
//! which the windowed power stays uniformly within eps of tent^k, plus a
//! pair modulus delta(eps) controlling nearby points at those indices.
//!
//! Run with: cargo run --example uniform_limit

use nads::modulus::verify_power_convergence;
use nads::{LimitRule, MapExpr, MapSequence, StateSpace};

fn main() -> nads::Result<()> {
    let seq = MapSequence::uniform_limit(
        StateSpace::UnitInterval,
        LimitRule::ScaledApproach { offset: 2 },
        MapExpr::Tent,
    )?;

    println!("f_n = (1 - 1/(n+2)) tent, limit = tent");
    for eps in [0.1, 0.05] {
        for k in [1u64, 2, 3] {
            let rep = verify_power_convergence(&seq, k, eps, 10001, 512, 4)?;
            println!(
                "  eps = {eps:<5} k = {k}: N(k) = {:>3}, sup at N = {:.5}, pair modulus {:.6}",
                rep.n_of_k, rep.sup_at_n, rep.delta_eps
            );
        }
    }

    // a constant rule is its own limit: N = 1 at any eps
    let constant = MapSequence::uniform_limit(
        StateSpace::UnitInterval,
        LimitRule::Constant,
        MapExpr::Tent,
    )?;
    let rep = verify_power_convergence(&constant, 2, 0.05, 1001, 64, 4)?;
    println!("constant rule, k = 2: N(k) = {}", rep.n_of_k);
    Ok(())
}
