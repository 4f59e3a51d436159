//! Cross-checks the curve comparison against majorisation of the rational embedding.

use thermocone::embedding::{embed, majorizes, oracle_check, rationalize};
use thermocone::state::EPS_CMP;
use thermocone::{thermo_majorizes, Dist, EnergySpectrum};

fn main() -> thermocone::Result<()> {
    // Gibbs weights 1/2, 1/3, 1/6 embed exactly with D = 6
    let spec = EnergySpectrum::from_gibbs(&[0.5, 1.0 / 3.0, 1.0 / 6.0], 1.0)?;
    let p = Dist::new(vec![0.2, 0.3, 0.5])?;
    let q = Dist::new(vec![0.4, 0.35, 0.25])?;
    let rat = rationalize(&Dist::new(spec.gibbs().to_vec())?, 60)?;
    println!("blocks {:?} / {}", rat.gibbs.numerators, rat.gibbs.denominator);
    let (ep, eq) = (embed(&p, &rat.gibbs)?, embed(&q, &rat.gibbs)?);
    println!("embedded p {:.4?}", ep.as_slice());
    println!("curves: {}  embedding: {}", thermo_majorizes(&p, &q, &spec)?, majorizes(&ep, &eq, EPS_CMP)?);

    // irrational Gibbs weights go through the best approximation with bounded denominator
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2)?;
    let report = oracle_check(&p, &q, &spec, 1000)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));
    Ok(())
}
