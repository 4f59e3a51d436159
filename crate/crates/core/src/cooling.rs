//! Optimal cooling by (catalytic) thermal operations and the critical hot temperatures for
//! thermal initial states of an equidistant ladder.

use serde::Serialize;

use crate::catalysis::c_plus_vertices;
use crate::cones::future_cone_vertices;
use crate::error::{Error, Result};
use crate::state::{Dist, EnergySpectrum, Permutation, EPS_CMP};

/// `sum_i E_i (q_i - p_i)`; negative when the system gives heat away.
pub fn heat_exchange(p: &Dist, q: &Dist, spec: &EnergySpectrum) -> Result<f64> {
    spec.check_dim(p.len())?;
    spec.check_dim(q.len())?;
    Ok(spec.energies().iter().zip(q.as_slice().iter().zip(p.as_slice())).map(|(e, (qi, pi))| e * (qi - pi)).sum())
}

/// Best reachable targets for cooling `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingReport {
    /// Heat exchanged by the optimal thermal operation.
    pub q_c: f64,
    /// Heat at the best extreme point of `T_+ ∪ C_+`. This bounds what catalysis can reach;
    /// a catalyst realising it is not guaranteed.
    pub q_c_catalytic: f64,
    pub target: Dist,
    pub target_catalytic: Dist,
    pub order: Permutation,
    pub order_catalytic: Permutation,
    /// Always `"bound"`.
    pub catalytic_kind: &'static str,
}

fn best_vertex(candidates: Vec<(Permutation, Dist)>, p: &Dist, spec: &EnergySpectrum) -> Result<(Permutation, Dist, f64)> {
    let mut best: Option<(Permutation, Dist, f64)> = None;
    for (pi, v) in candidates {
        let q = heat_exchange(p, &v, spec)?;
        let better = match &best {
            None => true,
            Some((bpi, _, bq)) => q < bq - EPS_CMP || (q <= bq + EPS_CMP && pi.levels() < bpi.levels()),
        };
        if better {
            best = Some((pi, v, q));
        }
    }
    best.ok_or_else(|| Error::Domain("no candidate vertices".into()))
}

/// Minimum-heat target over the cone vertices, or over the catalytic vertex set when `catalytic`.
/// Near-ties go to the lexicographically smaller ordering.
pub fn optimal_target(p: &Dist, spec: &EnergySpectrum, catalytic: bool) -> Result<(Permutation, Dist, f64)> {
    let mut candidates = future_cone_vertices(p, spec)?.vertices;
    if catalytic {
        candidates.extend(c_plus_vertices(p, spec)?.vertices);
    }
    best_vertex(candidates, p, spec)
}

pub fn optimal_cooling(p: &Dist, spec: &EnergySpectrum) -> Result<CoolingReport> {
    let (order, target, q_c) = optimal_target(p, spec, false)?;
    let (order_catalytic, target_catalytic, q_c_catalytic) = optimal_target(p, spec, true)?;
    Ok(CoolingReport { q_c, q_c_catalytic, target, target_catalytic, order, order_catalytic, catalytic_kind: "bound" })
}

/// Largest `m <= d-1` with `gamma_d + ... + gamma_{d-m+1} <= gamma_1 + ... + gamma_j` (one-based `j`).
pub fn m_index(j: usize, spec_cold: &EnergySpectrum) -> Result<usize> {
    let d = spec_cold.dim();
    if !(1..=d).contains(&j) {
        return Err(Error::InvalidArgument(format!("j = {j} outside 1..={d}")));
    }
    let g = spec_cold.gibbs();
    let head: f64 = g[..j].iter().sum();
    let mut tail = 0.0;
    let mut m = 0;
    for &gi in g.iter().rev().take(d - 1) {
        tail += gi;
        if tail > head + 1e-15 {
            break;
        }
        m += 1;
    }
    Ok(m)
}

/// Which inequality boundary of the hot inverse temperature is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// Below this the catalytic bound exceeds the non-catalytic ground population.
    Down,
    /// Above this catalysis brings no cooling advantage.
    Up,
}

/// `(1 - e^{-k x}) / (1 - e^{-x})`, equal to `k` at `x = 0`.
fn geometric(k: f64, x: f64) -> f64 {
    if x.abs() < 1e-300 {
        k
    } else {
        (-k * x).exp_m1() / (-x).exp_m1()
    }
}

/// Left-hand side minus right-hand side of the boundary inequality at hot inverse temperature `bh`.
pub fn critical_residual(boundary: Boundary, d: usize, beta: f64, m: usize, bh: f64) -> f64 {
    let z = geometric(d as f64, beta);
    let k = match boundary {
        Boundary::Down => m as f64 + 1.0,
        Boundary::Up => m as f64,
    };
    z * geometric(k, bh) - ((beta - bh) * (d as f64 - 1.0)).exp()
}

/// Closed-form small-`beta` approximations of the two boundaries.
pub fn linearised_critical_beta(boundary: Boundary, d: usize, beta: f64, m: usize) -> f64 {
    let (d, m) = (d as f64, m as f64);
    let c = d * (3.0 * beta * (d - 1.0) - 2.0);
    match boundary {
        Boundary::Down => (c * (m + 1.0) + 2.0) / (2.0 * d - m - 2.0),
        Boundary::Up => (c * m + 2.0) / (2.0 * d - m - 1.0),
    }
}

const SCAN_POINTS: usize = 2000;
pub const BISECTION_TOL: f64 = 1e-8;

/// First sign change of the boundary residual on `(0, beta)`, refined by bisection.
pub fn critical_hot_beta(boundary: Boundary, d: usize, beta: f64, j: usize) -> Result<f64> {
    check_ladder(d, beta)?;
    let m = m_index(j, &EnergySpectrum::equidistant(d, beta)?)?;
    let f = |bh: f64| critical_residual(boundary, d, beta, m, bh);
    let lo_end = beta * 1e-9;
    let hi_end = beta * (1.0 - 1e-9);
    let step = (hi_end - lo_end) / SCAN_POINTS as f64;
    let mut a = lo_end;
    let mut fa = f(a);
    for k in 1..=SCAN_POINTS {
        let b = if k == SCAN_POINTS { hi_end } else { lo_end + k as f64 * step };
        let fb = f(b);
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoRoot(match boundary {
        Boundary::Down => "lower critical hot temperature",
        Boundary::Up => "upper critical hot temperature",
    }))
}

fn check_ladder(d: usize, beta: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument("the ladder needs at least two levels".into()));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// `(beta_down, beta_up)` for the `d`-level ladder `E_n = n` at bath inverse temperature `beta`.
pub fn critical_hot_betas(d: usize, beta: f64, linearised: bool, j: usize) -> Result<(f64, f64)> {
    check_ladder(d, beta)?;
    if linearised {
        let m = m_index(j, &EnergySpectrum::equidistant(d, beta)?)?;
        return Ok((
            linearised_critical_beta(Boundary::Down, d, beta, m),
            linearised_critical_beta(Boundary::Up, d, beta, m),
        ));
    }
    Ok((critical_hot_beta(Boundary::Down, d, beta, j)?, critical_hot_beta(Boundary::Up, d, beta, j)?))
}
