//! Beta-ordering, thermomajorisation curves and the thermomajorisation preorder.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{Dist, EnergySpectrum, Permutation, QuasiDist, EPS_CMP, EPS_SLOPE};

/// Slopes `p_i / gamma_i` sorted non-increasingly, with the level sequence that sorts them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeVector {
    pub slopes: Vec<f64>,
    pub order: Permutation,
}

impl SlopeVector {
    pub fn first(&self) -> f64 {
        self.slopes[0]
    }

    pub fn last(&self) -> f64 {
        *self.slopes.last().expect("non-empty")
    }

    /// One-based access, `s_n`.
    pub fn nth(&self, n: usize) -> f64 {
        self.slopes[n - 1]
    }
}

/// Sorts levels by decreasing `p_i / gamma_i`; equal slopes keep ascending level index.
pub fn beta_order(p: &Dist, spec: &EnergySpectrum) -> Result<SlopeVector> {
    spec.check_dim(p.len())?;
    let gamma = spec.positive_gibbs()?;
    Ok(slope_vector(p.as_slice(), gamma))
}

pub(crate) fn slope_vector(p: &[f64], gamma: &[f64]) -> SlopeVector {
    let ratios: Vec<f64> = p.iter().zip(gamma).map(|(p, g)| p / g).collect();
    let mut levels: Vec<usize> = (0..p.len()).collect();
    // stable sort: ties stay in ascending index order
    levels.sort_by(|&a, &b| ratios[b].partial_cmp(&ratios[a]).expect("finite slopes"));
    let slopes = levels.iter().map(|&l| ratios[l]).collect();
    SlopeVector { slopes, order: Permutation::new(levels).expect("sorted indices") }
}

/// Piecewise-linear curve through `(0,0)` and the cumulative `(gamma, p)` sums along an ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct TMCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TMCurve {
    /// Curve of `entries` taken in the given level order. No concavity is implied.
    pub fn along(entries: &[f64], gamma: &[f64], order: &Permutation) -> Self {
        let d = entries.len();
        let mut xs = Vec::with_capacity(d + 1);
        let mut ys = Vec::with_capacity(d + 1);
        let (mut x, mut y) = (0.0, 0.0);
        xs.push(0.0);
        ys.push(0.0);
        for &l in order.levels() {
            x += gamma[l];
            y += entries[l];
            xs.push(x);
            ys.push(y);
        }
        // pin the endpoint against accumulated rounding
        xs[d] = 1.0;
        Self { xs, ys }
    }

    /// Builds a curve directly from elbow points; abscissae must start at 0, end at 1 and increase.
    pub fn from_elbows(elbows: &[(f64, f64)]) -> Result<Self> {
        if elbows.len() < 2 {
            return Err(Error::Domain("a curve needs at least two elbows".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = elbows.iter().copied().unzip();
        if xs[0] != 0.0 || (xs[xs.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("abscissae must run from 0 to 1".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("abscissae must be strictly increasing".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn elbows(&self) -> Vec<(f64, f64)> {
        self.xs.iter().copied().zip(self.ys.iter().copied()).collect()
    }

    pub fn segment_slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    pub fn is_concave(&self) -> bool {
        self.segment_slopes().windows(2).all(|s| s[1] <= s[0] + EPS_SLOPE)
    }

    /// Linear interpolation; errors outside `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(-1e-12..=1.0 + 1e-12).contains(&x) {
            return Err(Error::Domain(format!("curve evaluated at {x}")));
        }
        Ok(self.eval_clamped(x))
    }

    pub(crate) fn eval_clamped(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= 0.0 {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        // first index with xs[k] > x
        let k = self.xs.partition_point(|&v| v <= x);
        let (x0, x1, y0, y1) = (self.xs[k - 1], self.xs[k], self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// True iff this curve is nowhere below `other` (slack `eps`), checked at both sets of elbows.
    pub fn dominates(&self, other: &TMCurve, eps: f64) -> bool {
        self.xs.iter().zip(&self.ys).all(|(&x, &y)| y >= other.eval_clamped(x) - eps)
            && other.xs.iter().zip(&other.ys).all(|(&x, &y)| self.eval_clamped(x) >= y - eps)
    }

    /// Smallest value of `self - other` over the union of elbows, ignoring the shared endpoints.
    pub fn min_gap(&self, other: &TMCurve) -> f64 {
        let interior = |xs: &[f64]| xs[1..xs.len() - 1].to_vec();
        interior(&self.xs)
            .into_iter()
            .chain(interior(&other.xs))
            .map(|x| self.eval_clamped(x) - other.eval_clamped(x))
            .fold(f64::INFINITY, f64::min)
    }
}

impl Serialize for TMCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.xs.iter().zip(&self.ys).map(|(&x, &y)| [x, y]).collect();
        pairs.serialize(s)
    }
}

/// Thermomajorisation curve of a distribution, in its own beta-order.
pub fn tm_curve(p: &Dist, spec: &EnergySpectrum) -> Result<TMCurve> {
    let sv = beta_order(p, spec)?;
    let c = TMCurve::along(p.as_slice(), spec.gibbs(), &sv.order);
    debug_assert!(c.is_concave(), "beta-ordered curve must be concave");
    Ok(c)
}

/// Curve of a quasi-distribution along an explicitly supplied ordering.
pub fn tm_curve_along(t: &QuasiDist, spec: &EnergySpectrum, order: &Permutation) -> Result<TMCurve> {
    spec.check_dim(t.len())?;
    spec.check_dim(order.len())?;
    Ok(TMCurve::along(t.as_slice(), spec.gibbs(), order))
}

pub fn curve_eval(c: &TMCurve, x: f64) -> Result<f64> {
    c.eval(x)
}

/// `p` thermomajorises `q` at the spectrum's temperature.
pub fn thermo_majorizes(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<bool> {
    Ok(tm_curve(p, spec)?.dominates(&tm_curve(q, spec)?, EPS_CMP))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// The first state thermomajorises the second.
    Majorizes,
    MajorizedBy,
    Equivalent,
    Incomparable,
}

impl Relation {
    pub fn from_pair(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::Majorizes,
            (false, true) => Relation::MajorizedBy,
            (false, false) => Relation::Incomparable,
        }
    }
}

pub fn compare(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<Relation> {
    let cp = tm_curve(p, spec)?;
    let cq = tm_curve(q, spec)?;
    Ok(compare_curves(&cp, &cq))
}

pub(crate) fn compare_curves(cp: &TMCurve, cq: &TMCurve) -> Relation {
    Relation::from_pair(cp.dominates(cq, EPS_CMP), cq.dominates(cp, EPS_CMP))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec3(beta: f64) -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0, 2.0], beta).unwrap()
    }

    fn d(v: &[f64]) -> Dist {
        Dist::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gibbs_has_flat_slopes() {
        let s = spec3(0.2);
        let sv = beta_order(&d(s.gibbs()), &s).unwrap();
        assert!(sv.slopes.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert_eq!(sv.order, Permutation::identity(3));
    }

    #[test]
    fn beta_order_of_reference_state() {
        let s = spec3(0.2);
        let sv = beta_order(&d(&[0.42, 0.51, 0.07]), &s).unwrap();
        assert_eq!(sv.order.one_based(), vec![2, 1, 3]);
        let g = s.gibbs();
        let expected = [0.51 / g[1], 0.42 / g[0], 0.07 / g[2]];
        for (a, b) in sv.slopes.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((sv.slopes[0] - 1.550).abs() < 5e-4);
        assert!((sv.slopes[1] - 1.045).abs() < 5e-4);
        assert!((sv.slopes[2] - 0.260).abs() < 5e-4);
    }

    #[test]
    fn beta_order_sorted_state_at_zero_beta() {
        let s = EnergySpectrum::equidistant(4, 0.0).unwrap();
        let sv = beta_order(&d(&[0.43, 0.37, 0.18, 0.02]), &s).unwrap();
        assert_eq!(sv.order, Permutation::identity(4));
    }

    #[test]
    fn ties_break_by_level_index() {
        let s = EnergySpectrum::new(vec![0.0, 1.0, 1.0, 2.0], 0.5).unwrap();
        let g = s.gibbs().to_vec();
        let p = Dist::normalized(vec![g[0] * 0.5, g[1], g[2], g[3] * 0.2]).unwrap();
        let sv = beta_order(&p, &s).unwrap();
        assert_eq!(sv.order.one_based(), vec![2, 3, 1, 4]);
    }

    #[test]
    fn curve_of_gibbs_is_diagonal() {
        let s = spec3(0.2);
        let c = tm_curve(&d(s.gibbs()), &s).unwrap();
        for (x, y) in c.elbows() {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((curve_eval(&c, 0.37).unwrap() - 0.37).abs() < 1e-12);
    }

    #[test]
    fn curve_of_sharp_ground_state() {
        let s = spec3(0.2);
        let g = s.gibbs().to_vec();
        let c = tm_curve(&d(&[1.0, 0.0, 0.0]), &s).unwrap();
        let expected = [(0.0, 0.0), (g[0], 1.0), (g[0] + g[1], 1.0), (1.0, 1.0)];
        for ((x, y), (ex, ey)) in c.elbows().into_iter().zip(expected) {
            assert!((x - ex).abs() < 1e-12 && (y - ey).abs() < 1e-12);
        }
        assert!((curve_eval(&c, g[0] / 2.0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn first_elbow_of_reference_state() {
        let s = spec3(0.2);
        let c = tm_curve(&d(&[0.42, 0.51, 0.07]), &s).unwrap();
        let (x, y) = c.elbows()[1];
        assert!((x - 0.3290).abs() < 1e-4);
        assert!((y - 0.51).abs() < 1e-12);
    }

    #[test]
    fn curve_eval_first_segment_at_zero_beta() {
        let s = EnergySpectrum::equidistant(4, 0.0).unwrap();
        let c = tm_curve(&d(&[0.43, 0.37, 0.18, 0.02]), &s).unwrap();
        assert!((curve_eval(&c, 0.25).unwrap() - 0.43).abs() < 1e-12);
        // halfway along the second segment
        assert!((curve_eval(&c, 0.375).unwrap() - (0.43 + 0.185)).abs() < 1e-12);
        assert!(curve_eval(&c, 1.5).is_err());
        assert!(curve_eval(&c, -0.1).is_err());
    }

    #[test]
    fn everything_majorizes_gibbs() {
        let s = spec3(0.2);
        let gamma = d(s.gibbs());
        let p = d(&[0.42, 0.51, 0.07]);
        assert!(thermo_majorizes(&p, &gamma, &s).unwrap());
        assert!(thermo_majorizes(&p, &p, &s).unwrap());
        assert_eq!(compare(&gamma, &p, &s).unwrap(), Relation::MajorizedBy);
        assert_eq!(compare(&p, &p, &s).unwrap(), Relation::Equivalent);
    }

    #[test]
    fn reference_pair_is_incomparable() {
        let s = spec3(0.2);
        let p = d(&[0.42, 0.51, 0.07]);
        let q = d(&[0.52, 0.43, 0.05]);
        assert!(!thermo_majorizes(&p, &q, &s).unwrap());
        assert!(!thermo_majorizes(&q, &p, &s).unwrap());
        assert_eq!(compare(&p, &q, &s).unwrap(), Relation::Incomparable);
        let q2 = d(&[0.52, 0.13, 0.35]);
        assert_eq!(compare(&p, &q2, &s).unwrap(), Relation::Incomparable);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let s = spec3(0.2);
        assert!(matches!(
            tm_curve(&Dist::uniform(4), &s),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn from_elbows_validates() {
        assert!(TMCurve::from_elbows(&[(0.0, 0.0), (0.5, 0.7), (1.0, 1.0)]).is_ok());
        assert!(TMCurve::from_elbows(&[(0.0, 0.0), (0.5, 0.7), (0.5, 0.8), (1.0, 1.0)]).is_err());
        assert!(TMCurve::from_elbows(&[(0.1, 0.0), (1.0, 1.0)]).is_err());
    }
}
