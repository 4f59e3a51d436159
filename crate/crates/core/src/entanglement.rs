//! Which incoherent two-qubit states can be made entangled by a global unitary after a
//! (catalytic) thermal operation, for the non-interacting Hamiltonian with levels `(0, 1, 1, 2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalysis::c_plus_vertices;
use crate::cones::{future_cone_vertex, future_cone_vertices};
use crate::curve::{thermo_majorizes, tm_curve};
use crate::error::{Error, Result};
use crate::state::{Dist, EnergySpectrum, Permutation, EPS_CMP};
use crate::volume::{mc_counts, SimplexSampler, VolumeEstimate};

/// Default number of interior points drawn by [`in_cn`].
pub const DEFAULT_CN_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoQubitConfig {
    pub beta: f64,
}

impl TwoQubitConfig {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || beta.is_infinite() {
            return Err(Error::NegativeBeta(beta));
        }
        Ok(Self { beta })
    }

    pub fn spectrum(&self) -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0, 1.0, 2.0], self.beta).expect("valid two-qubit spectrum")
    }
}

fn check_two_qubit(p: &Dist) -> Result<()> {
    if p.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: p.len() });
    }
    Ok(())
}

/// `4 p_1 p_4 - (p_2 - p_3)^2`; negative exactly when some unitary entangles the state.
pub fn entanglement_witness(p: &[f64]) -> f64 {
    4.0 * p[0] * p[3] - (p[1] - p[2]).powi(2)
}

fn entanglable(p: &[f64]) -> bool {
    entanglement_witness(p) < -EPS_CMP
}

pub fn unitary_entanglable(p: &Dist) -> Result<bool> {
    check_two_qubit(p)?;
    Ok(entanglable(p.as_slice()))
}

/// Swaps the two degenerate levels so that `p_2 >= p_3`.
pub fn canonicalise(p: &Dist) -> Dist {
    let mut v = p.as_slice().to_vec();
    if v[1] < v[2] {
        v.swap(1, 2);
    }
    Dist::from_raw(v)
}

fn subspace_order() -> Permutation {
    Permutation::new(vec![1, 0, 2, 3]).expect("valid permutation")
}

/// No thermal operation followed by a unitary entangles `p`.
///
/// After canonicalisation the cone vertex with ordering `(2,1,3,4)` is the most entanglable
/// point of the future cone.
pub fn in_tn(p: &Dist, cfg: &TwoQubitConfig) -> Result<bool> {
    check_two_qubit(p)?;
    let v = future_cone_vertex(&canonicalise(p), &cfg.spectrum(), &subspace_order())?;
    Ok(!entanglable(v.as_slice()))
}

/// Reference version of [`in_tn`] that checks every cone vertex.
pub fn in_tn_exhaustive(p: &Dist, cfg: &TwoQubitConfig) -> Result<bool> {
    check_two_qubit(p)?;
    Ok(!future_cone_vertices(p, &cfg.spectrum())?.states().any(|v| entanglable(v.as_slice())))
}

/// Vertex test for catalytic non-entanglability: no extreme point of `T_+ ∪ C_+` is entanglable.
///
/// `|p_2 - p_3| - 2 sqrt(p_1 p_4)` is convex and positive exactly on entanglable states, so a
/// polytope avoids them iff its vertices do.
pub fn in_cn_vertices(p: &Dist, cfg: &TwoQubitConfig) -> Result<bool> {
    check_two_qubit(p)?;
    Ok(!c_plus_vertices(p, &cfg.spectrum())?.states().any(|v| entanglable(v.as_slice())))
}

/// Catalytic non-entanglability: the vertex test, then `samples` random points of the region
/// checked both directly and through their own thermal future.
pub fn in_cn(p: &Dist, cfg: &TwoQubitConfig, samples: usize, seed: u64) -> Result<bool> {
    check_two_qubit(p)?;
    let verts: Vec<Dist> = c_plus_vertices(p, &cfg.spectrum())?.states().cloned().collect();
    if verts.iter().any(|v| entanglable(v.as_slice())) {
        return Ok(false);
    }
    let mut sampler = SimplexSampler::new(4, seed, 0);
    for _ in 0..samples {
        let q = sampler.sample_in_hull(&verts).expect("non-empty vertex set");
        if entanglable(q.as_slice()) || !in_tn(&q, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn scaled(beta: f64, v: [f64; 4]) -> Dist {
    let z = 4.0 + 2.0 * beta.cosh();
    Dist::from_raw(v.iter().map(|x| x / z).collect())
}

/// Subspace-thermalised state whose whole thermal future stays catalytically non-entanglable.
pub fn p_star(beta: f64) -> Result<Dist> {
    TwoQubitConfig::new(beta)?;
    Ok(scaled(beta, [beta.exp(), 1.0, 1.0, 2.0 + (-beta).exp()]))
}

pub fn p_star_star(beta: f64) -> Result<Dist> {
    TwoQubitConfig::new(beta)?;
    Ok(scaled(beta, [beta.exp(), 3.0, 1.0, (-beta).exp()]))
}

/// Relative volumes of the thermally and catalytically non-entanglable sets and their ratio.
pub fn volume_ratio_cn_tn(beta: f64, samples: usize, seed: u64) -> Result<(VolumeEstimate, VolumeEstimate, f64)> {
    if samples < 10_000 {
        return Err(Error::InvalidArgument("at least 10000 samples are required".into()));
    }
    let cfg = TwoQubitConfig::new(beta)?;
    let [tn, cn] = mc_counts(4, samples, seed, |q| Ok([in_tn(q, &cfg)?, in_cn_vertices(q, &cfg)?]))?;
    let v_tn = VolumeEstimate::from_hits(tn, samples, seed);
    let v_cn = VolumeEstimate::from_hits(cn, samples, seed);
    let ratio = if tn > 0 { cn as f64 / tn as f64 } else { 0.0 };
    Ok((v_tn, v_cn, ratio))
}

/// Per-state summary used by the `entangle` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub unitary_entanglable: bool,
    pub witness: f64,
    pub thermally_non_entanglable: bool,
    pub catalytically_non_entanglable: bool,
    pub in_future_of_p_star: bool,
}

pub fn entanglement_report(p: &Dist, cfg: &TwoQubitConfig, samples: usize, seed: u64) -> Result<EntanglementReport> {
    check_two_qubit(p)?;
    Ok(EntanglementReport {
        unitary_entanglable: entanglable(p.as_slice()),
        witness: entanglement_witness(p.as_slice()),
        thermally_non_entanglable: in_tn(p, cfg)?,
        catalytically_non_entanglable: in_cn(p, cfg, samples, seed)?,
        in_future_of_p_star: thermo_majorizes(&p_star(cfg.beta)?, p, &cfg.spectrum())?,
    })
}

/// Numerical look at the proposed decomposition of the catalytically non-entanglable set into
/// the future of `p*` and a remainder `CN_0` (which drops `T_+(p*) \ T_+(p**)`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub beta: f64,
    pub samples: usize,
    pub cn_hits: usize,
    /// Sampled states of `T_+(p*)` that are also in `CN`.
    pub p_star_future_in_cn: f64,
    /// Midpoints of random `CN_0` pairs that land back in `CN_0`.
    pub cn0_midpoint_agreement: f64,
    pub midpoint_pairs: usize,
}

pub fn conjecture_report(beta: f64, samples: usize, seed: u64) -> Result<ConjectureReport> {
    let cfg = TwoQubitConfig::new(beta)?;
    let spec = cfg.spectrum();
    let ps = tm_curve(&p_star(beta)?, &spec)?;
    let pss = tm_curve(&p_star_star(beta)?, &spec)?;
    let in_cn0 = |q: &Dist, cn: bool| -> Result<bool> {
        let cq = tm_curve(q, &spec)?;
        Ok(cn && !(ps.dominates(&cq, EPS_CMP) && !pss.dominates(&cq, EPS_CMP)))
    };

    let mut sampler = SimplexSampler::new(4, seed, 0);
    let draws: Vec<Dist> = (0..samples).map(|_| sampler.sample()).collect();
    let cn: Vec<bool> = draws.par_iter().map(|q| in_cn_vertices(q, &cfg)).collect::<Result<_>>()?;
    let cn_hits = cn.iter().filter(|&&c| c).count();

    let future: Vec<Dist> = future_cone_vertices(&p_star(beta)?, &spec)?.states().cloned().collect();
    let inside: Vec<Dist> = (0..samples.min(2000)).filter_map(|_| sampler.sample_in_hull(&future)).collect();
    let inside_ok = inside
        .par_iter()
        .map(|q| in_cn_vertices(q, &cfg))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();

    let cn0: Vec<&Dist> = draws
        .iter()
        .zip(&cn)
        .filter_map(|(q, &c)| in_cn0(q, c).ok().filter(|&b| b).map(|_| q))
        .collect();
    let pairs = if cn0.len() >= 2 { samples.min(2000) } else { 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let picks: Vec<(usize, usize)> =
        (0..pairs).map(|_| (rng.gen_range(0..cn0.len()), rng.gen_range(0..cn0.len()))).collect();
    let mid_ok = picks
        .par_iter()
        .map(|&(a, b)| {
            let m = cn0[a].mix(cn0[b], 0.5);
            let c = in_cn_vertices(&m, &cfg)?;
            in_cn0(&m, c)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();

    let frac = |k: usize, n: usize| if n > 0 { k as f64 / n as f64 } else { 1.0 };
    Ok(ConjectureReport {
        beta,
        samples,
        cn_hits,
        p_star_future_in_cn: frac(inside_ok, inside.len()),
        cn0_midpoint_agreement: frac(mid_ok, pairs),
        midpoint_pairs: pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::compare;

    fn d(v: &[f64]) -> Dist {
        Dist::new(v.to_vec()).unwrap()
    }

    fn cfg(beta: f64) -> TwoQubitConfig {
        TwoQubitConfig::new(beta).unwrap()
    }

    #[test]
    fn witness_examples() {
        let c = cfg(0.3);
        let g = d(c.spectrum().gibbs());
        assert!(!unitary_entanglable(&g).unwrap());
        assert!(unitary_entanglable(&Dist::sharp(4, 1)).unwrap());
        assert!(unitary_entanglable(&d(&[0.25, 0.5, 0.05, 0.2])).unwrap());
        assert!((entanglement_witness(&[0.25, 0.5, 0.05, 0.2]) + 0.0025).abs() < 1e-15);
        assert!(unitary_entanglable(&Dist::sharp(3, 0)).is_err());
    }

    #[test]
    fn tn_examples() {
        for beta in [0.0, 0.5, 2.0] {
            let c = cfg(beta);
            assert!(in_tn(&d(c.spectrum().gibbs()), &c).unwrap());
            assert!(!in_tn(&Dist::sharp(4, 1), &c).unwrap());
            assert!(in_tn(&p_star(beta).unwrap(), &c).unwrap());
        }
    }

    #[test]
    fn tn_single_vertex_matches_all_vertices() {
        for beta in [0.0, 0.25, 1.0] {
            let c = cfg(beta);
            let mut s = SimplexSampler::new(4, 3, 0);
            for _ in 0..2000 {
                let q = s.sample();
                assert_eq!(in_tn(&q, &c).unwrap(), in_tn_exhaustive(&q, &c).unwrap(), "{q:?}");
            }
        }
    }

    #[test]
    fn cn_examples() {
        let c = cfg(0.5);
        assert!(!in_cn(&Dist::sharp(4, 1), &c, 100, 1).unwrap());
        assert!(in_cn(&d(c.spectrum().gibbs()), &c, 100, 1).unwrap());
        assert!(in_cn(&p_star(0.5).unwrap(), &c, 500, 1).unwrap());
    }

    #[test]
    fn swap_invariance() {
        let c = cfg(0.7);
        let mut s = SimplexSampler::new(4, 5, 0);
        for _ in 0..300 {
            let q = s.sample();
            let mut v = q.as_slice().to_vec();
            v.swap(1, 2);
            let w = Dist::from_raw(v);
            assert_eq!(in_tn(&q, &c).unwrap(), in_tn(&w, &c).unwrap());
            assert_eq!(in_cn_vertices(&q, &c).unwrap(), in_cn_vertices(&w, &c).unwrap());
        }
    }

    #[test]
    fn special_states_at_zero_beta() {
        let ps = p_star(0.0).unwrap();
        let pss = p_star_star(0.0).unwrap();
        for (a, b) in ps.as_slice().iter().zip([1.0, 1.0, 1.0, 3.0]) {
            assert!((a - b / 6.0).abs() < 1e-15);
        }
        for (a, b) in pss.as_slice().iter().zip([1.0, 3.0, 1.0, 1.0]) {
            assert!((a - b / 6.0).abs() < 1e-15);
        }
        assert!(p_star(-1.0).is_err());
    }

    #[test]
    fn p_star_future_is_never_entanglable() {
        for beta in [0.0, 0.3, 1.0, 3.0] {
            let c = cfg(beta);
            let spec = c.spectrum();
            let ps = p_star(beta).unwrap();
            let pss = p_star_star(beta).unwrap();
            assert!(future_cone_vertices(&ps, &spec).unwrap().states().all(|v| !entanglable(v.as_slice())));
            assert!(thermo_majorizes(&ps, &pss, &spec).unwrap());
            let v = future_cone_vertex(&ps, &spec, &subspace_order()).unwrap();
            assert!(v.linf_distance(&pss) < 1e-12);
            assert!(entanglement_witness(v.as_slice()).abs() < 1e-9);
        }
    }

    #[test]
    fn leaving_p_star_future_loses_protection() {
        for beta in [0.5, 1.0] {
            let c = cfg(beta);
            let spec = c.spectrum();
            let ps = p_star(beta).unwrap();
            let mut s = SimplexSampler::new(4, 17, 0);
            let mut outside = 0;
            for _ in 0..400 {
                let dir = s.sample();
                let q = dir.mix(&ps, 2e-3);
                if compare(&ps, &q, &spec).unwrap() != crate::curve::Relation::Majorizes {
                    outside += 1;
                    assert!(!in_cn_vertices(&q, &c).unwrap(), "{q:?}");
                }
            }
            assert!(outside > 0);
        }
    }

    #[test]
    fn volume_ratio_small_run() {
        let (tn, cn, ratio) = volume_ratio_cn_tn(0.0, 10_000, 4).unwrap();
        assert!(cn.value <= tn.value);
        assert!((0.8..0.95).contains(&ratio), "{ratio}");
        assert!((tn.value - 0.327).abs() < 0.02, "{tn:?}");
        assert!(volume_ratio_cn_tn(0.0, 100, 4).is_err());
    }

    #[test]
    fn conjecture_report_runs() {
        let r = conjecture_report(0.5, 2000, 2).unwrap();
        assert_eq!(r.samples, 2000);
        assert!((0.0..=1.0).contains(&r.cn0_midpoint_agreement));
        assert!(r.p_star_future_in_cn > 0.99);
    }
}
