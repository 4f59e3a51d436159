//! Monte-Carlo volumes of the thermal and catalysable regions of a qutrit state.

use thermocone::volume::c_plus_area_d3;
use thermocone::{mc_volume, Dist, EnergySpectrum, Region};

fn main() -> thermocone::Result<()> {
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2)?;
    let p = Dist::new(vec![0.34, 0.59, 0.07])?;
    for region in Region::ALL {
        let v = mc_volume(&p, &spec, region, 50_000, 7)?;
        println!("{region:>3}  {:.4} +- {:.4}", v.value, v.stderr);
    }
    println!("exact C+ area  {:.4}", c_plus_area_d3(&p, &spec)?);

    let sharp = Dist::sharp(3, 2);
    let v = mc_volume(&sharp, &spec, Region::CPlus, 50_000, 7)?;
    println!("sharp state C+ {:.4} (zero: {})", v.value, v.is_zero());
    Ok(())
}
