//! Embedding into a larger uniform-Gibbs space, where thermomajorisation becomes plain majorisation.
//!
//! Each level `i` is split into `D_i` copies carrying `p_i / D_i`, with `gamma_i ~ D_i / D`.
//! This path is kept independent of the curve machinery in [`crate::curve`] so the two can
//! be checked against each other.

use serde::Serialize;

use crate::curve::tm_curve;
use crate::error::{Error, Result};
use crate::state::{Dist, EnergySpectrum, EPS_CMP};

/// Integer block sizes `D_i` with common denominator `D = sum D_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalGibbs {
    pub numerators: Vec<u64>,
    pub denominator: u64,
}

/// A rational approximation together with its worst-entry error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rationalized {
    pub gibbs: RationalGibbs,
    pub delta: f64,
}

/// Scans every common denominator up to `max_denominator` and keeps the smallest one that attains
/// the best max-entry error. Every block keeps at least one copy.
pub fn rationalize(gamma: &Dist, max_denominator: u64) -> Result<Rationalized> {
    let d = gamma.len() as u64;
    if max_denominator < d {
        return Err(Error::InvalidArgument(format!(
            "max_denominator {max_denominator} is below the dimension {d}"
        )));
    }
    let g = gamma.as_slice();
    let mut best: Option<Rationalized> = None;
    for den in d..=max_denominator {
        let nums = round_to_denominator(g, den);
        let delta = g
            .iter()
            .zip(&nums)
            .map(|(&gi, &n)| (gi - n as f64 / den as f64).abs())
            .fold(0.0, f64::max);
        // strict improvement beyond rounding noise keeps the smallest denominator
        if best.as_ref().map_or(true, |b| delta < b.delta - 1e-15) {
            best = Some(Rationalized {
                gibbs: RationalGibbs { numerators: nums, denominator: den },
                delta,
            });
        }
        if delta < 1e-15 {
            break;
        }
    }
    Ok(best.expect("at least one denominator scanned"))
}

/// Largest-remainder rounding of `g * den` to positive integers summing to `den`.
fn round_to_denominator(g: &[f64], den: u64) -> Vec<u64> {
    let scaled: Vec<f64> = g.iter().map(|&x| x * den as f64).collect();
    let mut nums: Vec<u64> = scaled.iter().map(|&x| (x.round() as u64).max(1)).collect();
    let mut total: i64 = nums.iter().sum::<u64>() as i64;
    let target = den as i64;
    while total != target {
        let i = if total > target {
            // remove from the entry rounded up the most, keeping it positive
            (0..nums.len())
                .filter(|&i| nums[i] > 1)
                .max_by(|&a, &b| {
                    (nums[a] as f64 - scaled[a]).partial_cmp(&(nums[b] as f64 - scaled[b])).unwrap()
                })
                .expect("den >= d leaves room to decrement")
        } else {
            (0..nums.len())
                .max_by(|&a, &b| {
                    (scaled[a] - nums[a] as f64).partial_cmp(&(scaled[b] - nums[b] as f64)).unwrap()
                })
                .unwrap()
        };
        if total > target {
            nums[i] -= 1;
            total -= 1;
        } else {
            nums[i] += 1;
            total += 1;
        }
    }
    nums
}

/// Block embedding of `p` into `D` entries.
pub fn embed(p: &Dist, rg: &RationalGibbs) -> Result<Dist> {
    if p.len() != rg.numerators.len() {
        return Err(Error::DimensionMismatch { expected: rg.numerators.len(), found: p.len() });
    }
    let mut out = Vec::with_capacity(rg.denominator as usize);
    for (&pi, &di) in p.as_slice().iter().zip(&rg.numerators) {
        let share = pi / di as f64;
        out.extend(std::iter::repeat(share).take(di as usize));
    }
    Ok(Dist::from_raw(out))
}

/// Classical majorisation by sorted prefix sums.
pub fn majorizes(p: &Dist, q: &Dist, eps: f64) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    let desc = |v: &Dist| {
        let mut s = v.as_slice().to_vec();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    };
    let (ps, qs) = (desc(p), desc(q));
    let (mut cp, mut cq) = (0.0, 0.0);
    for (a, b) in ps.iter().zip(&qs) {
        cp += a;
        cq += b;
        if cp < cq - eps {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both verdicts plus the margin that decides whether their agreement is guaranteed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    /// Classical majorisation of the embedded vectors.
    pub embedded: bool,
    /// Curve comparison in the original space.
    pub direct: bool,
    pub denominator: u64,
    pub delta: f64,
    /// Smallest |f_p - f_q| over interior elbows.
    pub margin: f64,
    /// Set when `margin` does not exceed `d * delta`, so the embedded verdict may flip.
    pub inconclusive_near_tie: bool,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.embedded == self.direct
    }
}

pub fn oracle_check(p: &Dist, q: &Dist, spec: &EnergySpectrum, max_denominator: u64) -> Result<OracleReport> {
    spec.check_dim(p.len())?;
    spec.check_dim(q.len())?;
    let gamma = Dist::from_raw(spec.gibbs().to_vec());
    let rat = rationalize(&gamma, max_denominator)?;
    let embedded = majorizes(&embed(p, &rat.gibbs)?, &embed(q, &rat.gibbs)?, EPS_CMP)?;

    let cp = tm_curve(p, spec)?;
    let cq = tm_curve(q, spec)?;
    let direct = cp.dominates(&cq, EPS_CMP);
    let margin = cp.min_gap(&cq).abs().min(cq.min_gap(&cp).abs());
    let d = p.len() as f64;
    Ok(OracleReport {
        embedded,
        direct,
        denominator: rat.gibbs.denominator,
        delta: rat.delta,
        margin,
        inconclusive_near_tie: margin <= d * rat.delta,
    })
}
