//! Catalysable-future volume across the qutrit simplex, printed as a coarse text map.

use thermocone::volume::isovolume_grid;
use thermocone::EnergySpectrum;

fn main() -> thermocone::Result<()> {
    let beta: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], beta)?;
    let grid = isovolume_grid(&spec, 12, 2000, 3)?;
    let max = grid.iter().map(|g| g.volume.value).fold(0.0, f64::max);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let mut rows: Vec<Vec<&thermocone::volume::IsoPoint>> = Vec::new();
    for g in &grid {
        match rows.last_mut() {
            Some(row) if (row[0].x - g.x).abs() < 1e-12 => row.push(g),
            _ => rows.push(vec![g]),
        }
    }
    println!("beta = {beta}, max volume {max:.4}; rows p1 = 0..1, columns p2 = 0..1 - p1");
    for row in rows {
        let line: String = row
            .iter()
            .map(|g| if max > 0.0 { shades[((g.volume.value / max) * 9.0).round() as usize] } else { ' ' })
            .collect();
        println!("{:.2} |{line}", row[0].x);
    }
    Ok(())
}
