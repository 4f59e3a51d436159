//! Beta-ordering, curves and the preorder for a qutrit at beta = 0.2.

use thermocone::{beta_order, compare, tm_curve, Dist, EnergySpectrum};

fn main() -> thermocone::Result<()> {
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2)?;
    let p = Dist::new(vec![0.42, 0.51, 0.07])?;
    let slopes = beta_order(&p, &spec)?;
    println!("gibbs  {:?}", spec.gibbs());
    println!("order  {}  slopes {:?}", slopes.order, slopes.slopes);

    let curve = tm_curve(&p, &spec)?;
    for (x, y) in curve.elbows() {
        println!("elbow  ({x:.4}, {y:.4})");
    }

    for q in [vec![0.4, 0.4, 0.2], vec![0.52, 0.13, 0.35], vec![0.6, 0.3, 0.1]] {
        let q = Dist::new(q)?;
        println!("{:?} -> {:?}: {:?}", p.as_slice(), q.as_slice(), compare(&p, &q, &spec)?);
    }
    Ok(())
}
