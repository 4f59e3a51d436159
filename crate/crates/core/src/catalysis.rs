//! Tangent vectors, catalysable regions and bounds on strict catalysts.
//!
//! For a state `p` with slopes `s_1 >= ... >= s_d`, the tangent vector `t^(n, pi)` is the
//! quasi-distribution whose curve along `pi` follows the line extending the `n`-th segment of
//! `f_p` between the first and last elbows. The sets
//!
//! * `T_1(p)`: states below some `t^(1, pi)`,
//! * `T_d(p)`: states below some `t^(d, pi)`,
//!
//! bound what strict catalysis can reach: the catalysable future is `T_1 ∩ T_d` minus the future
//! cone, the catalysable past is the incomparable region outside `T_1 ∪ T_d`.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cones::{vertex_from_heights, ConeVertices, DEDUP_TOL};
use crate::curve::{beta_order, compare_curves, slope_vector, tm_curve, Relation, SlopeVector, TMCurve};
use crate::error::{Error, Result};
use crate::state::{
    check_permutation_cap, tensor, Dist, EnergySpectrum, Permutation, QuasiDist, EPS_CMP, EPS_SLOPE,
    PERMUTATION_CAP,
};

/// Largest dimension for membership tests that enumerate every tangent vector.
pub const REGION_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentVector {
    pub entries: QuasiDist,
    /// One-based segment index.
    pub n: usize,
    pub order: Permutation,
    pub projected: bool,
}

impl TangentVector {
    pub fn curve(&self, spec: &EnergySpectrum) -> TMCurve {
        TMCurve::along(self.entries.as_slice(), spec.gibbs(), &self.order)
    }
}

fn tangent_entries(sv: &SlopeVector, p: &[f64], gamma: &[f64], n: usize, order: &Permutation) -> Vec<f64> {
    let d = p.len();
    let s_n = sv.nth(n);
    // point (x_n, y_n) closing the n-th segment of f_p
    let (x_n, y_n) = sv.order.levels()[..n]
        .iter()
        .fold((0.0, 0.0), |(x, y), &l| (x + gamma[l], y + p[l]));
    let lv = order.levels();
    let mut t = vec![0.0; d];
    let first = y_n - s_n * (x_n - gamma[lv[0]]);
    t[lv[0]] = first;
    let mut middle = 0.0;
    for &l in &lv[1..d - 1] {
        t[l] = s_n * gamma[l];
        middle += t[l];
    }
    t[lv[d - 1]] = 1.0 - first - middle;
    t
}

/// Tangent vector touching the `n`-th segment of `f_p`, laid out along `order`.
pub fn tangent_vector(p: &Dist, spec: &EnergySpectrum, n: usize, order: &Permutation) -> Result<TangentVector> {
    let d = p.len();
    check_permutation_cap(d, PERMUTATION_CAP)?;
    spec.check_dim(order.len())?;
    if !(1..=d).contains(&n) {
        return Err(Error::InvalidArgument(format!("segment index {n} outside 1..={d}")));
    }
    let sv = beta_order(p, spec)?;
    let entries = tangent_entries(&sv, p.as_slice(), spec.gibbs(), n, order);
    Ok(TangentVector { entries: QuasiDist::new(entries)?, n, order: order.clone(), projected: false })
}

/// Clamps elbow heights along the tangent's ordering into `[0, 1]`, keeps them non-decreasing,
/// and rebuilds the entries from the clamped differences.
pub fn project_simplex(t: &TangentVector, spec: &EnergySpectrum) -> Result<Dist> {
    spec.check_dim(t.entries.len())?;
    let c = t.curve(spec);
    Ok(project_heights(&c.ys()[1..], &t.order))
}

fn project_heights(raw: &[f64], order: &Permutation) -> Dist {
    let mut prev = 0.0;
    let mut heights: Vec<f64> = raw
        .iter()
        .map(|&h| {
            prev = h.clamp(0.0, 1.0).max(prev);
            prev
        })
        .collect();
    *heights.last_mut().expect("non-empty") = 1.0;
    vertex_from_heights(&heights, order)
}

/// Necessary condition for catalysing `p -> q`: `s_1(p) > s_1(q)` and `s_d(p) < s_d(q)`,
/// each with `EPS_CMP` margin in favour of rejecting.
pub fn catalytic_condition(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<bool> {
    let sp = beta_order(p, spec)?;
    let sq = beta_order(q, spec)?;
    Ok(slopes_allow_catalysis(&sp, &sq))
}

fn slopes_allow_catalysis(sp: &SlopeVector, sq: &SlopeVector) -> bool {
    sp.first() > sq.first() + EPS_CMP && sp.last() < sq.last() - EPS_CMP
}

/// Which tangent family a region is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentSide {
    /// `T_1`, from the first segment.
    First,
    /// `T_d`, from the last segment.
    Last,
}

/// Precomputed tangent curves of a state, for repeated membership queries.
#[derive(Debug, Clone)]
pub struct CatalysableRegions {
    spec: EnergySpectrum,
    curve: TMCurve,
    slopes: SlopeVector,
    first: Vec<TMCurve>,
    last: Vec<TMCurve>,
}

impl CatalysableRegions {
    pub fn new(p: &Dist, spec: &EnergySpectrum) -> Result<Self> {
        let d = p.len();
        check_permutation_cap(d, REGION_CAP)?;
        let curve = tm_curve(p, spec)?;
        let slopes = beta_order(p, spec)?;
        let gamma = spec.gibbs();
        let build = |n: usize| -> Vec<TMCurve> {
            Permutation::all(d)
                .map(|pi| TMCurve::along(&tangent_entries(&slopes, p.as_slice(), gamma, n, &pi), gamma, &pi))
                .collect()
        };
        let first = build(1);
        let last = build(d);
        Ok(Self { spec: spec.clone(), curve, slopes, first, last })
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spec
    }

    pub fn slopes(&self) -> &SlopeVector {
        &self.slopes
    }

    fn family(&self, side: TangentSide) -> &[TMCurve] {
        match side {
            TangentSide::First => &self.first,
            TangentSide::Last => &self.last,
        }
    }

    fn target_curve(&self, q: &Dist) -> Result<TMCurve> {
        tm_curve(q, &self.spec)
    }

    /// `q` lies under the raw curve of some tangent vector of the family.
    pub fn in_tangent_region(&self, q: &Dist, side: TangentSide) -> Result<bool> {
        let cq = self.target_curve(q)?;
        Ok(self.curve_in_region(&cq, side))
    }

    fn curve_in_region(&self, cq: &TMCurve, side: TangentSide) -> bool {
        self.family(side).iter().any(|t| t.dominates(cq, EPS_CMP))
    }

    pub fn relation(&self, q: &Dist) -> Result<Relation> {
        Ok(compare_curves(&self.curve, &self.target_curve(q)?))
    }

    /// `q` is incomparable with `p` and lies in `T_1 ∩ T_d`.
    pub fn future_member(&self, q: &Dist) -> Result<bool> {
        let cq = self.target_curve(q)?;
        Ok(compare_curves(&self.curve, &cq) == Relation::Incomparable
            && self.curve_in_region(&cq, TangentSide::First)
            && self.curve_in_region(&cq, TangentSide::Last))
    }

    /// `q` is incomparable with `p` and lies outside `T_1 ∪ T_d`.
    pub fn past_member(&self, q: &Dist) -> Result<bool> {
        let cq = self.target_curve(q)?;
        Ok(compare_curves(&self.curve, &cq) == Relation::Incomparable
            && !self.curve_in_region(&cq, TangentSide::First)
            && !self.curve_in_region(&cq, TangentSide::Last))
    }
}

pub fn in_region_ti(q: &Dist, p: &Dist, spec: &EnergySpectrum, side: TangentSide) -> Result<bool> {
    CatalysableRegions::new(p, spec)?.in_tangent_region(q, side)
}

pub fn catalysable_future_member(q: &Dist, p: &Dist, spec: &EnergySpectrum) -> Result<bool> {
    CatalysableRegions::new(p, spec)?.future_member(q)
}

pub fn catalysable_past_member(q: &Dist, p: &Dist, spec: &EnergySpectrum) -> Result<bool> {
    CatalysableRegions::new(p, spec)?.past_member(q)
}

/// Extreme point of the catalysable future with beta-order `order`: elbow heights are the
/// pointwise minimum of the first and last tangent curves, then projected into the simplex.
pub fn c_plus_vertex(p: &Dist, spec: &EnergySpectrum, order: &Permutation) -> Result<Dist> {
    check_permutation_cap(p.len(), PERMUTATION_CAP)?;
    spec.check_dim(order.len())?;
    let sv = beta_order(p, spec)?;
    Ok(c_plus_vertex_with(&sv, p.as_slice(), spec.gibbs(), order))
}

fn c_plus_vertex_with(sv: &SlopeVector, p: &[f64], gamma: &[f64], order: &Permutation) -> Dist {
    let d = p.len();
    let t1 = TMCurve::along(&tangent_entries(sv, p, gamma, 1, order), gamma, order);
    let td = TMCurve::along(&tangent_entries(sv, p, gamma, d, order), gamma, order);
    let heights: Vec<f64> = t1.ys()[1..].iter().zip(&td.ys()[1..]).map(|(a, b)| a.min(*b)).collect();
    project_heights(&heights, order)
}

/// Distinct extreme points of `T_+(p) ∪ C_+(p)`, one candidate per ordering.
pub fn c_plus_vertices(p: &Dist, spec: &EnergySpectrum) -> Result<ConeVertices> {
    check_permutation_cap(p.len(), PERMUTATION_CAP)?;
    let sv = beta_order(p, spec)?;
    let gamma = spec.gibbs();
    let perms: Vec<Permutation> = Permutation::all(p.len()).collect();
    let all: Vec<(Permutation, Dist)> = perms
        .into_par_iter()
        .map(|pi| {
            let v = c_plus_vertex_with(&sv, p.as_slice(), gamma, &pi);
            (pi, v)
        })
        .collect();
    Ok(ConeVertices::dedup(all, DEDUP_TOL))
}

/// `ceil(d/2) * binom(d, ceil(d/2))`, the bound on the number of extreme points of `T_+ ∪ C_+`.
pub fn vertex_count_bound(d: usize) -> u64 {
    let k = d.div_ceil(2) as u64;
    let binom = (0..k).fold(1u64, |acc, i| acc * (d as u64 - i) / (i + 1));
    k * binom
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    }
}

/// Coefficients of the catalyst-dimension bound for an incomparable pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimBound {
    #[serde(serialize_with = "serialize_extended")]
    pub a: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub b: f64,
    /// A catalyst needs more than `k_star` levels; infinite when `a <= 1` (up to `EPS_SLOPE`).
    #[serde(serialize_with = "serialize_extended")]
    pub k_star: f64,
    /// `(m, n)`: first and last crossing of the region where `f_p < f_q`.
    pub interval: (f64, f64),
    /// One-based elbow indices of `f_p` where `f_p < f_q`.
    pub elbows: Vec<usize>,
}

impl DimBound {
    pub fn is_impossible(&self) -> bool {
        self.k_star.is_infinite()
    }

    /// Smallest catalyst dimension not excluded by the bound.
    pub fn min_catalyst_dim(&self) -> Option<usize> {
        if self.k_star.is_finite() {
            Some(self.k_star.floor() as usize + 1)
        } else {
            None
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Catalyst dimension bound `k* = log b / log a + 1`.
///
/// The region `f_p < f_q` is replaced by its hull `[m, n]`. Slopes at `m` and `n` are read from
/// the segment of `f_p` on the side lying inside the region, `b` is the largest slope ratio
/// over elbows of `f_p` inside the region (one where there are none).
pub fn dim_bound(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<DimBound> {
    let cp = tm_curve(p, spec)?;
    let cq = tm_curve(q, spec)?;
    match compare_curves(&cp, &cq) {
        Relation::Incomparable => {}
        Relation::MajorizedBy => return Err(Error::NotIncomparable),
        _ => return Err(Error::EmptyL),
    }
    let sv = beta_order(p, spec)?;

    let mut xs: Vec<f64> = cp.xs().iter().chain(cq.xs()).copied().collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let diff: Vec<f64> = xs.iter().map(|&x| cp.eval_clamped(x) - cq.eval_clamped(x)).collect();
    let below: Vec<usize> = (0..xs.len()).filter(|&k| diff[k] < -EPS_CMP).collect();
    let (&k0, &k1) = match (below.first(), below.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::EmptyL),
    };
    // endpoints always agree, so 0 < k0 <= k1 < len-1
    let crossing = |lo: usize, hi: usize| {
        let (d0, d1) = (diff[lo], diff[hi]);
        xs[lo] + (xs[hi] - xs[lo]) * d0 / (d0 - d1)
    };
    let m = crossing(k0 - 1, k0);
    let n = crossing(k1, k1 + 1);

    let seg = cp.segment_slopes();
    let segment_over = |lo: f64, hi: f64| {
        let mid = 0.5 * (lo + hi);
        let idx = cp.xs().partition_point(|&x| x <= mid).saturating_sub(1);
        seg[idx.min(seg.len() - 1)]
    };
    let slope_at_m = segment_over(xs[k0 - 1], xs[k0]);
    let slope_at_n = segment_over(xs[k1], xs[k1 + 1]);
    let a = ratio(sv.first(), slope_at_m).min(ratio(slope_at_n, sv.last()));

    let d = p.len();
    let elbows: Vec<usize> = (1..d)
        .filter(|&l| cp.ys()[l] - cq.eval_clamped(cp.xs()[l]) < -EPS_CMP)
        .collect();
    let b = elbows.iter().map(|&l| ratio(sv.nth(l), sv.nth(l + 1))).fold(1.0, f64::max);

    let k_star = if a > 1.0 + EPS_SLOPE { b.ln() / a.ln() + 1.0 } else { f64::INFINITY };
    Ok(DimBound { a, b, k_star, interval: (m, n), elbows })
}

/// Closed interval of admissible excited-state populations `t` for a qubit catalyst `(1-t, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitWindow {
    pub lo: f64,
    pub hi: f64,
    /// Excited-state Gibbs weight of the catalyst.
    pub gibbs_r: f64,
}

impl QubitWindow {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo - 1e-12 <= t && t <= self.hi + 1e-12
    }
}

/// Both branches of the qubit-catalyst window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitWindows {
    /// Branch `t <= gibbs_r`.
    pub below: QubitWindow,
    /// Branch `t >= gibbs_r`, obtained from `below` by `t -> 1-t`, `gibbs_r -> 1-gibbs_r`.
    pub above: QubitWindow,
}

impl QubitWindows {
    pub fn contains(&self, t: f64) -> bool {
        self.below.contains(t) || self.above.contains(t)
    }
}

fn lower_branch(a: f64, b: f64, g: f64) -> (f64, f64) {
    let bound = |c: f64| if c.is_infinite() { 0.0 } else { g / (c * (1.0 - g) + g) };
    (bound(a), bound(b))
}

/// Windows for a qubit catalyst with excited-state Gibbs weight `gibbs_r` (1/2: trivial Hamiltonian).
pub fn qubit_window_from_bound(bound: &DimBound, gibbs_r: f64) -> Result<QubitWindows> {
    if !(gibbs_r > 0.0 && gibbs_r < 1.0) {
        return Err(Error::InvalidArgument(format!("catalyst Gibbs weight {gibbs_r} outside (0, 1)")));
    }
    let (lo, hi) = lower_branch(bound.a, bound.b, gibbs_r);
    let (lo_c, hi_c) = lower_branch(bound.a, bound.b, 1.0 - gibbs_r);
    Ok(QubitWindows {
        below: QubitWindow { lo, hi, gibbs_r },
        above: QubitWindow { lo: 1.0 - hi_c, hi: 1.0 - lo_c, gibbs_r },
    })
}

pub fn qubit_window(p: &Dist, q: &Dist, spec: &EnergySpectrum, gibbs_r: f64) -> Result<QubitWindows> {
    qubit_window_from_bound(&dim_bound(p, q, spec)?, gibbs_r)
}

/// `p ⊗ r` thermomajorises `q ⊗ r`.
pub fn verify_catalyst(p: &Dist, q: &Dist, spec: &EnergySpectrum, r: &Dist, spec_r: &EnergySpectrum) -> Result<bool> {
    let (pr, joint) = tensor(p, spec, r, spec_r)?;
    let (qr, _) = tensor(q, spec, r, spec_r)?;
    Ok(tm_curve(&pr, &joint)?.dominates(&tm_curve(&qr, &joint)?, EPS_CMP))
}

/// Two-level spectrum at the given temperature whose excited Gibbs weight is `gibbs_r`.
pub fn qubit_spectrum(gibbs_r: f64, beta: f64) -> Result<EnergySpectrum> {
    if !(gibbs_r > 0.0 && gibbs_r < 1.0) {
        return Err(Error::InvalidArgument(format!("catalyst Gibbs weight {gibbs_r} outside (0, 1)")));
    }
    EnergySpectrum::from_gibbs(&[1.0 - gibbs_r, gibbs_r], beta)
}

/// Grid points `t = k / grid_n`, `0 < k < grid_n`, for which `(1-t, t)` catalyses `p -> q`.
pub fn search_qubit_catalyst(
    p: &Dist,
    q: &Dist,
    spec: &EnergySpectrum,
    gibbs_r: f64,
    grid_n: usize,
) -> Result<Vec<f64>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument("grid_n must be at least 2".into()));
    }
    let spec_r = qubit_spectrum(gibbs_r, spec.beta())?;
    let hits: Vec<Option<f64>> = (1..grid_n)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / grid_n as f64;
            let r = Dist::from_raw(vec![1.0 - t, t]);
            verify_catalyst(p, q, spec, &r, &spec_r).map(|ok| ok.then_some(t))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Classical Rényi divergence `D_alpha(p || gamma)`, including the limits 0, 1 and infinity.
pub fn renyi_divergence(p: &[f64], gamma: &[f64], alpha: f64) -> f64 {
    let support = p.iter().zip(gamma).filter(|(&pi, _)| pi > 0.0);
    if alpha == 0.0 {
        -support.map(|(_, g)| g).sum::<f64>().ln()
    } else if alpha == 1.0 {
        support.map(|(pi, g)| pi * (pi / g).ln()).sum()
    } else if alpha.is_infinite() {
        support.map(|(pi, g)| pi / g).fold(0.0, f64::max).ln()
    } else {
        let s: f64 = p
            .iter()
            .zip(gamma)
            .map(|(&pi, &g)| if pi > 0.0 { pi.powf(alpha) * g.powf(1.0 - alpha) } else { 0.0 })
            .sum();
        s.ln() / (alpha - 1.0)
    }
}

/// Free-energy screen: `F_alpha(p) >= F_alpha(q)` for every supplied `alpha`.
///
/// `F_alpha = (D_alpha - log Z) / beta` is an increasing affine function of the divergence,
/// so the divergences are compared directly (this also covers `beta = 0`).
pub fn alpha_free_energy_check(p: &Dist, q: &Dist, spec: &EnergySpectrum, alphas: &[f64]) -> Result<bool> {
    spec.check_dim(p.len())?;
    spec.check_dim(q.len())?;
    if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0)) {
        return Err(Error::InvalidArgument(format!("alpha {a} must be non-negative")));
    }
    let g = spec.gibbs();
    Ok(alphas.iter().all(|&a| {
        renyi_divergence(p.as_slice(), g, a) >= renyi_divergence(q.as_slice(), g, a) - EPS_CMP
    }))
}

/// Quick slope-only test of `T_1 ∩ T_d` membership, used to cross-check the tangent enumeration.
pub fn within_slope_box(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<bool> {
    spec.check_dim(p.len())?;
    spec.check_dim(q.len())?;
    let g = spec.positive_gibbs()?;
    let sp = slope_vector(p.as_slice(), g);
    let sq = slope_vector(q.as_slice(), g);
    Ok(sq.first() <= sp.first() + EPS_CMP && sq.last() >= sp.last() - EPS_CMP)
}
