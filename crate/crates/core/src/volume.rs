//! Monte-Carlo relative volumes of cone regions, exact polygon areas for qutrits and
//! isovolume grids of the catalysable future.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalysis::{c_plus_vertices, CatalysableRegions};
use crate::cones::future_cone_vertices;
use crate::curve::{compare_curves, tm_curve, Relation};
use crate::error::{Error, Result};
use crate::state::{Dist, EnergySpectrum};

pub const MIN_SAMPLES: usize = 1000;
pub const DEFAULT_SAMPLES: usize = 100_000;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "C+")]
    CPlus,
    #[serde(rename = "C-")]
    CMinus,
    #[serde(rename = "T+")]
    TPlus,
    #[serde(rename = "T-")]
    TMinus,
    #[serde(rename = "T0")]
    TIncomparable,
}

impl Region {
    pub const ALL: [Region; 5] = [Region::CPlus, Region::CMinus, Region::TPlus, Region::TMinus, Region::TIncomparable];

    fn needs_tangents(self) -> bool {
        matches!(self, Region::CPlus | Region::CMinus)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::CPlus => "C+",
            Region::CMinus => "C-",
            Region::TPlus => "T+",
            Region::TMinus => "T-",
            Region::TIncomparable => "T0",
        })
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "C+" | "c+" | "Cplus" => Ok(Region::CPlus),
            "C-" | "C−" | "c-" | "Cminus" => Ok(Region::CMinus),
            "T+" | "t+" | "Tplus" => Ok(Region::TPlus),
            "T-" | "T−" | "t-" | "Tminus" => Ok(Region::TMinus),
            "T0" | "T∅" | "t0" | "Tnone" => Ok(Region::TIncomparable),
            other => Err(Error::InvalidArgument(format!("unknown region `{other}` (expected C+, C-, T+, T-, T0)"))),
        }
    }
}

/// Hit-ratio estimate of a relative volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl VolumeEstimate {
    pub fn from_hits(hits: usize, samples: usize, seed: u64) -> Self {
        let v = hits as f64 / samples as f64;
        Self { value: v, stderr: (v * (1.0 - v) / samples as f64).sqrt(), samples, seed }
    }

    /// Indistinguishable from zero: within three standard errors. No hits at all counts as zero.
    pub fn is_zero(&self) -> bool {
        self.value <= 3.0 * self.stderr
    }
}

/// Uniform sampler on the probability simplex (normalised exponential draws).
#[derive(Debug, Clone)]
pub struct SimplexSampler {
    d: usize,
    rng: ChaCha8Rng,
}

impl SimplexSampler {
    pub fn new(d: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { d, rng }
    }

    pub fn sample(&mut self) -> Dist {
        let mut v: Vec<f64> = (0..self.d).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = v.iter().sum();
        v.iter_mut().for_each(|x| *x /= s);
        Dist::from_raw(v)
    }

    /// Random point of the convex hull of `vertices`, with Dirichlet(1,…,1) weights on the vertices.
    pub fn sample_in_hull(&mut self, vertices: &[Dist]) -> Option<Dist> {
        if vertices.is_empty() {
            return None;
        }
        let w: Vec<f64> = (0..vertices.len()).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        let mut v = vec![0.0; self.d];
        for (wi, vert) in w.iter().zip(vertices) {
            for (acc, x) in v.iter_mut().zip(vert.as_slice()) {
                *acc += wi / total * x;
            }
        }
        Some(Dist::from_raw(v))
    }
}

/// Counts, per label, the uniform simplex samples for which `classify` reports `true`.
///
/// Samples are drawn in fixed-size chunks, chunk `c` using stream `c` of the seeded generator,
/// so the result does not depend on the thread count.
pub fn mc_counts<const K: usize, F>(d: usize, samples: usize, seed: u64, classify: F) -> Result<[usize; K]>
where
    F: Fn(&Dist) -> Result<[bool; K]> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<[usize; K]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK.min(samples - c * CHUNK);
            let mut sampler = SimplexSampler::new(d, seed, c as u64);
            let mut counts = [0usize; K];
            for _ in 0..n {
                let q = sampler.sample();
                for (cnt, hit) in counts.iter_mut().zip(classify(&q)?) {
                    *cnt += hit as usize;
                }
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    Ok(partial.into_iter().fold([0; K], |mut acc, c| {
        acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        acc
    }))
}

/// Relative volume of `region` around `p`.
pub fn mc_volume(p: &Dist, spec: &EnergySpectrum, region: Region, samples: usize, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("at least {MIN_SAMPLES} samples are required")));
    }
    spec.check_dim(p.len())?;
    let hits = if region.needs_tangents() {
        let regions = CatalysableRegions::new(p, spec)?;
        mc_counts(p.len(), samples, seed, |q| {
            Ok([match region {
                Region::CPlus => regions.future_member(q)?,
                _ => regions.past_member(q)?,
            }])
        })?
    } else {
        let cp = tm_curve(p, spec)?;
        mc_counts(p.len(), samples, seed, |q| {
            let rel = compare_curves(&cp, &tm_curve(q, spec)?);
            Ok([match region {
                Region::TPlus => matches!(rel, Relation::Majorizes | Relation::Equivalent),
                Region::TMinus => rel == Relation::MajorizedBy,
                _ => rel == Relation::Incomparable,
            }])
        })?
    };
    Ok(VolumeEstimate::from_hits(hits[0], samples, seed))
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Area of the convex hull of qutrit states relative to the whole simplex.
pub fn exact_area_d3(vertices: &[Dist]) -> Result<f64> {
    if let Some(v) = vertices.iter().find(|v| v.len() != 3) {
        return Err(Error::DimensionMismatch { expected: 3, found: v.len() });
    }
    let hull = convex_hull(vertices.iter().map(|v| (v[0], v[1])).collect());
    if hull.len() < 3 {
        return Ok(0.0);
    }
    let twice: f64 = (0..hull.len())
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    // the projected simplex has area 1/2
    Ok(twice.abs())
}

/// Exact relative area of the catalysable future of a qutrit state.
pub fn c_plus_area_d3(p: &Dist, spec: &EnergySpectrum) -> Result<f64> {
    if p.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.len() });
    }
    let outer: Vec<Dist> = c_plus_vertices(p, spec)?.states().cloned().collect();
    let inner: Vec<Dist> = future_cone_vertices(p, spec)?.states().cloned().collect();
    Ok((exact_area_d3(&outer)? - exact_area_d3(&inner)?).max(0.0))
}

/// One grid point of an isovolume map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoPoint {
    /// Ground-state population.
    pub x: f64,
    /// First excited population.
    pub y: f64,
    pub volume: VolumeEstimate,
    /// `volume` divided by the grid maximum (zero when every point is zero).
    pub relative_volume: f64,
}

/// Catalysable-future volume over the barycentric grid `(i, j, k) / resolution` of qutrit states.
/// Every grid point reuses `seed`, so neighbouring estimates share their sample set.
pub fn isovolume_grid(spec: &EnergySpectrum, resolution: usize, samples: usize, seed: u64) -> Result<Vec<IsoPoint>> {
    if spec.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: spec.dim() });
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let r = resolution as f64;
    let grid: Vec<Dist> = (0..=resolution)
        .flat_map(|i| (0..=resolution - i).map(move |j| (i, j)))
        .map(|(i, j)| Dist::from_raw(vec![i as f64 / r, j as f64 / r, (resolution - i - j) as f64 / r]))
        .collect();
    let vols: Vec<VolumeEstimate> = grid
        .iter()
        .map(|p| mc_volume(p, spec, Region::CPlus, samples, seed))
        .collect::<Result<_>>()?;
    let max = vols.iter().map(|v| v.value).fold(0.0, f64::max);
    Ok(grid
        .into_iter()
        .zip(vols)
        .map(|(p, volume)| IsoPoint {
            x: p[0],
            y: p[1],
            volume,
            relative_volume: if max > 0.0 { volume.value / max } else { 0.0 },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec3() -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2).unwrap()
    }

    #[test]
    fn region_names_round_trip() {
        for r in Region::ALL {
            assert_eq!(r.to_string().parse::<Region>().unwrap(), r);
        }
        assert_eq!("T∅".parse::<Region>().unwrap(), Region::TIncomparable);
        assert!("X".parse::<Region>().is_err());
    }

    #[test]
    fn sampler_is_uniform_on_simplex() {
        let mut s = SimplexSampler::new(3, 7, 0);
        let n = 20_000;
        let mut mean = [0.0; 3];
        let mut below = 0;
        for _ in 0..n {
            let q = s.sample();
            assert!((q.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for k in 0..3 {
                mean[k] += q[k] / n as f64;
            }
            // P(q_0 < 1/2) = 1 - (1/2)^2 for Dirichlet(1,1,1)
            below += (q[0] < 0.5) as usize;
        }
        assert!(mean.iter().all(|m| (m - 1.0 / 3.0).abs() < 0.01));
        assert!((below as f64 / n as f64 - 0.75).abs() < 0.015);
    }

    #[test]
    fn estimates_are_reproducible() {
        let s = spec3();
        let p = Dist::new(vec![0.34, 0.59, 0.07]).unwrap();
        let a = mc_volume(&p, &s, Region::TPlus, 5000, 11).unwrap();
        let b = mc_volume(&p, &s, Region::TPlus, 5000, 11).unwrap();
        assert_eq!(a, b);
        let c = mc_volume(&p, &s, Region::TPlus, 5000, 12).unwrap();
        assert_ne!(a.value, c.value);
        assert!(mc_volume(&p, &s, Region::TPlus, 999, 11).is_err());
    }

    #[test]
    fn top_sharp_state_reaches_everything() {
        let top = mc_volume(&Dist::sharp(3, 2), &spec3(), Region::TPlus, 5000, 1).unwrap();
        assert_eq!(top.value, 1.0);
        let flat = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.0).unwrap();
        let ground = mc_volume(&Dist::sharp(3, 0), &flat, Region::TPlus, 5000, 1).unwrap();
        assert_eq!(ground.value, 1.0);
        let cold = mc_volume(&Dist::sharp(3, 0), &spec3(), Region::TPlus, 5000, 1).unwrap();
        assert!(cold.value < 1.0);
    }

    #[test]
    fn trichotomy_sums_to_one() {
        let s = spec3();
        let p = Dist::new(vec![0.34, 0.59, 0.07]).unwrap();
        let parts: Vec<VolumeEstimate> = [Region::TPlus, Region::TMinus, Region::TIncomparable]
            .iter()
            .map(|&r| mc_volume(&p, &s, r, 4000, 3).unwrap())
            .collect();
        let total: f64 = parts.iter().map(|e| e.value).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polygon_areas() {
        let corners: Vec<Dist> = (0..3).map(|k| Dist::sharp(3, k)).collect();
        assert!((exact_area_d3(&corners).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(exact_area_d3(&corners[..1]).unwrap(), 0.0);
        assert_eq!(exact_area_d3(&[]).unwrap(), 0.0);
        let g = Dist::uniform(3);
        let half: Vec<Dist> = corners.iter().map(|c| c.mix(&g, 0.5)).collect();
        assert!((exact_area_d3(&half).unwrap() - 0.25).abs() < 1e-12);
        // interior points do not change the hull
        let mut with_inner = corners.clone();
        with_inner.push(g);
        assert!((exact_area_d3(&with_inner).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_future_area_matches_monte_carlo() {
        let s = spec3();
        let p = Dist::new(vec![0.34, 0.59, 0.07]).unwrap();
        let verts: Vec<Dist> = future_cone_vertices(&p, &s).unwrap().states().cloned().collect();
        let exact = exact_area_d3(&verts).unwrap();
        let mc = mc_volume(&p, &s, Region::TPlus, 40_000, 5).unwrap();
        assert!((exact - mc.value).abs() < 3.0 * mc.stderr + 1e-3, "{exact} {mc:?}");
    }

    #[test]
    fn catalysable_area_reference_state() {
        let s = spec3();
        let p = Dist::new(vec![0.34, 0.59, 0.07]).unwrap();
        let exact = c_plus_area_d3(&p, &s).unwrap();
        assert!((exact - 0.07207).abs() < 1e-4, "{exact}");
        let mc = mc_volume(&p, &s, Region::CPlus, 40_000, 5).unwrap();
        assert!((exact - mc.value).abs() < 3.0 * mc.stderr, "{exact} {mc:?}");
    }

    #[test]
    fn zero_volume_rule() {
        assert!(VolumeEstimate::from_hits(0, 1000, 0).is_zero());
        assert!(!VolumeEstimate::from_hits(100, 1000, 0).is_zero());
    }

    #[test]
    fn isovolume_is_normalised_and_deterministic() {
        let s = spec3();
        let a = isovolume_grid(&s, 4, 2000, 9).unwrap();
        assert_eq!(a.len(), 15);
        let max = a.iter().map(|p| p.relative_volume).fold(0.0, f64::max);
        assert!(max == 1.0);
        assert_eq!(a, isovolume_grid(&s, 4, 2000, 9).unwrap());
        assert!(isovolume_grid(&EnergySpectrum::equidistant(4, 0.2).unwrap(), 4, 2000, 9).is_err());
    }
}
