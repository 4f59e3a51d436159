//! Extreme points of the future thermal cone and of the catalysable future.

use thermocone::{c_plus_vertices, future_cone_vertices, Dist, EnergySpectrum};

fn main() -> thermocone::Result<()> {
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2)?;
    let p = Dist::new(vec![0.1, 0.2, 0.7])?;

    println!("future cone");
    for (order, v) in &future_cone_vertices(&p, &spec)?.vertices {
        println!("  {order}  {:.6?}", v.as_slice());
    }
    println!("catalysable future");
    for (order, v) in &c_plus_vertices(&p, &spec)?.vertices {
        println!("  {order}  {:.6?}", v.as_slice());
    }
    println!("at most {} catalysable vertices for d = 3", thermocone::catalysis::vertex_count_bound(3));
    Ok(())
}
