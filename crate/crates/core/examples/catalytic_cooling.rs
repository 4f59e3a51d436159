//! Heat extracted by cooling a qutrit, with and without a catalyst, and the critical hot temperatures.

use thermocone::cooling::{critical_hot_beta, optimal_cooling, Boundary};
use thermocone::{Dist, EnergySpectrum};

fn main() -> thermocone::Result<()> {
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2)?;
    let p = Dist::new(vec![0.1, 0.2, 0.7])?;
    let r = optimal_cooling(&p, &spec)?;
    println!("Q_c  {:.6}  target {:.4?}", r.q_c, r.target.as_slice());
    println!("Q*_c {:.6}  target {:.4?}", r.q_c_catalytic, r.target_catalytic.as_slice());

    for d in [3, 4, 5] {
        for beta in [0.5, 1.0, 2.0] {
            let show = |b| match critical_hot_beta(b, d, beta, 1) {
                Ok(x) => format!("{x:.5}"),
                Err(_) => "none".to_string(),
            };
            println!("d {d} beta {beta}: down {} up {}", show(Boundary::Down), show(Boundary::Up));
        }
    }
    Ok(())
}
