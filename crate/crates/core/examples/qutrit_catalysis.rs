//! A qubit catalyst unlocking a transition between incomparable qutrit states.

use thermocone::catalysis::qubit_spectrum;
use thermocone::{
    catalysable_future_member, catalytic_condition, compare, dim_bound, qubit_window, search_qubit_catalyst,
    verify_catalyst, Dist, EnergySpectrum,
};

fn main() -> thermocone::Result<()> {
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2)?;
    let p = Dist::new(vec![0.42, 0.51, 0.07])?;
    let q = Dist::new(vec![0.52, 0.13, 0.35])?;
    println!("relation            {:?}", compare(&p, &q, &spec)?);
    println!("slope condition     {}", catalytic_condition(&p, &q, &spec)?);
    println!("catalysable future  {}", catalysable_future_member(&q, &p, &spec)?);

    let bound = dim_bound(&p, &q, &spec)?;
    println!("a = {:.6}, b = {:.6}, k* = {}", bound.a, bound.b, bound.k_star);

    let w = qubit_window(&p, &q, &spec, 0.5)?;
    println!("window [{:.6}, {:.6}] and [{:.6}, {:.6}]", w.below.lo, w.below.hi, w.above.lo, w.above.hi);

    let r = Dist::new(vec![0.55, 0.45])?;
    let trivial = qubit_spectrum(0.5, spec.beta())?;
    println!("r = (0.55, 0.45) works: {}", verify_catalyst(&p, &q, &spec, &r, &trivial)?);

    let hits = search_qubit_catalyst(&p, &q, &spec, 0.5, 200)?;
    println!("{} grid catalysts, t in [{}, {}]", hits.len(), hits[0], hits[hits.len() - 1]);
    Ok(())
}
