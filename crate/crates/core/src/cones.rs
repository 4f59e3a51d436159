//! Future thermal cone: extreme points and past/future/incomparable classification.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{compare, tm_curve, Relation, TMCurve};
use crate::error::Result;
use crate::state::{check_permutation_cap, Dist, EnergySpectrum, Permutation, PERMUTATION_CAP};

/// Vertices of a polytope in the simplex, each tagged with the first ordering that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeVertices {
    pub vertices: Vec<(Permutation, Dist)>,
}

impl ConeVertices {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &Dist> {
        self.vertices.iter().map(|(_, v)| v)
    }

    pub fn contains(&self, q: &Dist, tol: f64) -> bool {
        self.states().any(|v| v.linf_distance(q) <= tol)
    }

    /// Drops later vertices within `tol` (L-infinity) of an earlier one.
    pub(crate) fn dedup(all: Vec<(Permutation, Dist)>, tol: f64) -> Self {
        let mut vertices: Vec<(Permutation, Dist)> = Vec::new();
        for (pi, v) in all {
            if !vertices.iter().any(|(_, w)| w.linf_distance(&v) <= tol) {
                vertices.push((pi, v));
            }
        }
        Self { vertices }
    }
}

pub const DEDUP_TOL: f64 = 1e-10;

/// State whose curve along `order` has elbow heights `heights` at the cumulative Gibbs sums.
pub(crate) fn vertex_from_heights(heights: &[f64], order: &Permutation) -> Dist {
    let mut v = vec![0.0; heights.len()];
    let mut prev = 0.0;
    for (&level, &h) in order.levels().iter().zip(heights) {
        v[level] = h - prev;
        prev = h;
    }
    Dist::from_raw(v)
}

pub(crate) fn cumulative_gibbs(gamma: &[f64], order: &Permutation) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = order
        .levels()
        .iter()
        .map(|&l| {
            acc += gamma[l];
            acc
        })
        .collect();
    *out.last_mut().expect("non-empty") = 1.0;
    out
}

/// The extreme point of `T_+(p)` with beta-order `order`.
pub(crate) fn cone_vertex_from_curve(curve: &TMCurve, gamma: &[f64], order: &Permutation) -> Dist {
    let heights: Vec<f64> =
        cumulative_gibbs(gamma, order).iter().map(|&x| curve.eval_clamped(x)).collect();
    vertex_from_heights(&heights, order)
}

pub fn future_cone_vertex(p: &Dist, spec: &EnergySpectrum, order: &Permutation) -> Result<Dist> {
    spec.check_dim(order.len())?;
    let c = tm_curve(p, spec)?;
    Ok(cone_vertex_from_curve(&c, spec.gibbs(), order))
}

/// All distinct extreme points of the future thermal cone, in lexicographic order of `order`.
pub fn future_cone_vertices(p: &Dist, spec: &EnergySpectrum) -> Result<ConeVertices> {
    check_permutation_cap(p.len(), PERMUTATION_CAP)?;
    let c = tm_curve(p, spec)?;
    let gamma = spec.gibbs();
    let perms: Vec<Permutation> = Permutation::all(p.len()).collect();
    let all: Vec<(Permutation, Dist)> = perms
        .into_par_iter()
        .map(|pi| {
            let v = cone_vertex_from_curve(&c, gamma, &pi);
            (pi, v)
        })
        .collect();
    Ok(ConeVertices::dedup(all, DEDUP_TOL))
}

/// Where `q` sits relative to the cones of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConeRegion {
    Future,
    Past,
    Incomparable,
    /// Both directions hold (same curve).
    Equivalent,
}

impl From<Relation> for ConeRegion {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Majorizes => ConeRegion::Future,
            Relation::MajorizedBy => ConeRegion::Past,
            Relation::Equivalent => ConeRegion::Equivalent,
            Relation::Incomparable => ConeRegion::Incomparable,
        }
    }
}

pub fn classify(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<ConeRegion> {
    compare(p, q, spec).map(ConeRegion::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::thermo_majorizes;
    use crate::error::Error;

    fn spec3() -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2).unwrap()
    }

    #[test]
    fn gibbs_future_is_itself() {
        let s = spec3();
        let g = Dist::new(s.gibbs().to_vec()).unwrap();
        let cv = future_cone_vertices(&g, &s).unwrap();
        assert_eq!(cv.len(), 1);
        assert!(cv.contains(&g, 1e-12));
    }

    #[test]
    fn identity_vertex_reproduces_sorted_state() {
        let s = EnergySpectrum::equidistant(4, 0.0).unwrap();
        let p = Dist::new(vec![0.43, 0.37, 0.18, 0.02]).unwrap();
        let v = future_cone_vertex(&p, &s, &Permutation::identity(4)).unwrap();
        assert!(v.linf_distance(&p) < 1e-12);
        let cv = future_cone_vertices(&p, &s).unwrap();
        assert_eq!(cv.len(), 24);
    }

    #[test]
    fn cooling_vertex() {
        let s = spec3();
        let p = Dist::new(vec![0.1, 0.2, 0.7]).unwrap();
        let v = future_cone_vertex(&p, &s, &Permutation::identity(3)).unwrap();
        let expected = Dist::new(vec![0.78, 0.15, 0.07]).unwrap();
        assert!(v.linf_distance(&expected) < 0.005, "{v:?}");
    }

    #[test]
    fn vertices_lie_in_future() {
        let s = spec3();
        let p = Dist::new(vec![0.42, 0.51, 0.07]).unwrap();
        let cv = future_cone_vertices(&p, &s).unwrap();
        assert!(cv.len() <= 6);
        for v in cv.states() {
            assert!(thermo_majorizes(&p, v, &s).unwrap());
        }
    }

    #[test]
    fn classification() {
        let s = spec3();
        let p = Dist::new(vec![0.42, 0.51, 0.07]).unwrap();
        let g = Dist::new(s.gibbs().to_vec()).unwrap();
        assert_eq!(classify(&p, &g, &s).unwrap(), ConeRegion::Future);
        // mixing toward a sharp state climbs into the past
        let sharp = Dist::sharp(3, 1);
        let q = sharp.mix(&p, 0.3);
        assert!(thermo_majorizes(&q, &p, &s).unwrap());
        assert_eq!(classify(&p, &q, &s).unwrap(), ConeRegion::Past);
        let r = Dist::new(vec![0.52, 0.43, 0.05]).unwrap();
        assert_eq!(classify(&p, &r, &s).unwrap(), ConeRegion::Incomparable);
    }

    #[test]
    fn dimension_cap() {
        let s = EnergySpectrum::equidistant(9, 0.1).unwrap();
        assert!(matches!(
            future_cone_vertices(&Dist::uniform(9), &s),
            Err(Error::DimensionCap { d: 9, cap: 8 })
        ));
    }
}
