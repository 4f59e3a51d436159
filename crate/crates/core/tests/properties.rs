use proptest::prelude::*;

use thermocone::catalysis::{
    c_plus_vertices, catalytic_condition, dim_bound, qubit_window, search_qubit_catalyst, vertex_count_bound,
};
use thermocone::cones::future_cone_vertices;
use thermocone::curve::{beta_order, compare, thermo_majorizes, tm_curve, Relation, TMCurve};
use thermocone::embedding::{embed, majorizes, rationalize};
use thermocone::entanglement::{entanglement_witness, p_star, TwoQubitConfig};
use thermocone::state::{tensor, Dist, EnergySpectrum, Permutation, EPS_CMP};
use thermocone::volume::SimplexSampler;

fn dist_strategy(d: usize) -> impl Strategy<Value = Dist> {
    prop::collection::vec(0.01f64..1.0, d).prop_map(|w| Dist::normalized(w).unwrap())
}

fn spectrum_strategy(d: usize) -> impl Strategy<Value = EnergySpectrum> {
    (prop::collection::vec(0.0f64..3.0, d), 0.0f64..2.0).prop_map(|(mut e, beta)| {
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        EnergySpectrum::new(e, beta).unwrap()
    })
}

fn setup(max_d: usize) -> impl Strategy<Value = (EnergySpectrum, Dist, Dist)> {
    setup_between(2, max_d)
}

fn setup_between(min_d: usize, max_d: usize) -> impl Strategy<Value = (EnergySpectrum, Dist, Dist)> {
    (min_d..=max_d).prop_flat_map(|d| (spectrum_strategy(d), dist_strategy(d), dist_strategy(d)))
}

fn hull_point(p: &Dist, spec: &EnergySpectrum, seed: u64) -> Dist {
    let verts: Vec<Dist> = future_cone_vertices(p, spec).unwrap().states().cloned().collect();
    SimplexSampler::new(p.len(), seed, 0).sample_in_hull(&verts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reflexive_and_gibbs_is_minimal((spec, p, _q) in setup(5)) {
        prop_assert!(thermo_majorizes(&p, &p, &spec).unwrap());
        let g = Dist::normalized(spec.gibbs().to_vec()).unwrap();
        prop_assert!(thermo_majorizes(&p, &g, &spec).unwrap());
    }

    #[test]
    fn transitive_along_cone_chains((spec, p, _q) in setup(5), seed in 0u64..1000) {
        let q = hull_point(&p, &spec, seed);
        let r = hull_point(&q, &spec, seed + 1);
        prop_assert!(thermo_majorizes(&p, &q, &spec).unwrap());
        prop_assert!(thermo_majorizes(&q, &r, &spec).unwrap());
        prop_assert!(thermo_majorizes(&p, &r, &spec).unwrap());
    }

    #[test]
    fn mutual_majorisation_means_equal_curves((spec, p, q) in setup(4)) {
        if compare(&p, &q, &spec).unwrap() == Relation::Equivalent {
            let (cp, cq) = (tm_curve(&p, &spec).unwrap(), tm_curve(&q, &spec).unwrap());
            prop_assert!(cp.dominates(&cq, 1e-9) && cq.dominates(&cp, 1e-9));
        }
    }

    #[test]
    fn tensoring_preserves_order((spec, p, _q) in setup(4), r in dist_strategy(2), e in 0.0f64..2.0, seed in 0u64..1000) {
        let q = hull_point(&p, &spec, seed);
        let spec_r = EnergySpectrum::new(vec![0.0, e], spec.beta()).unwrap();
        let (pr, joint) = tensor(&p, &spec, &r, &spec_r).unwrap();
        let (qr, _) = tensor(&q, &spec, &r, &spec_r).unwrap();
        prop_assert!(thermo_majorizes(&pr, &qr, &joint).unwrap());
    }

    #[test]
    fn tie_breaking_does_not_change_the_curve((spec, p, _q) in setup(4)) {
        // duplicate a slope exactly and compare against a relabelled copy
        let d = p.len();
        let g = spec.gibbs();
        let mut w = p.as_slice().to_vec();
        w[d - 1] = w[0] / g[0] * g[d - 1];
        let p = Dist::normalized(w).unwrap();
        let slopes = beta_order(&p, &spec).unwrap();
        let mut levels = slopes.order.levels().to_vec();
        let a = levels.iter().position(|&l| l == 0).unwrap();
        let b = levels.iter().position(|&l| l == d - 1).unwrap();
        levels.swap(a, b);
        let swapped = TMCurve::along(p.as_slice(), g, &Permutation::new(levels).unwrap());
        let canonical = tm_curve(&p, &spec).unwrap();
        prop_assert!(canonical.dominates(&swapped, 1e-9) && swapped.dominates(&canonical, 1e-9));
    }

    #[test]
    fn flat_spectrum_reduces_to_majorisation(d in 2usize..6, p in prop::collection::vec(0.01f64..1.0, 5), q in prop::collection::vec(0.01f64..1.0, 5)) {
        let p = Dist::normalized(p[..d].to_vec()).unwrap();
        let q = Dist::normalized(q[..d].to_vec()).unwrap();
        let spec = EnergySpectrum::new(vec![0.5; d], 0.0).unwrap();
        prop_assert_eq!(thermo_majorizes(&p, &q, &spec).unwrap(), majorizes(&p, &q, EPS_CMP).unwrap());
    }

    #[test]
    fn embedding_agrees_on_rational_gibbs(nums in prop::collection::vec(1u64..15, 2..5), p in prop::collection::vec(0.01f64..1.0, 4), seed in 0u64..1000) {
        let d = nums.len();
        let den: u64 = nums.iter().sum();
        let gibbs: Vec<f64> = nums.iter().map(|&n| n as f64 / den as f64).collect();
        let spec = EnergySpectrum::from_gibbs(&gibbs, 1.0).unwrap();
        let p = Dist::normalized(p[..d].to_vec()).unwrap();
        let q = if seed % 2 == 0 { hull_point(&p, &spec, seed) } else { SimplexSampler::new(d, seed, 1).sample() };
        let rat = rationalize(&Dist::new(gibbs).unwrap(), 60).unwrap();
        let (ep, eq) = (embed(&p, &rat.gibbs).unwrap(), embed(&q, &rat.gibbs).unwrap());
        prop_assert_eq!(thermo_majorizes(&p, &q, &spec).unwrap(), majorizes(&ep, &eq, EPS_CMP).unwrap());
        prop_assert_eq!(thermo_majorizes(&q, &p, &spec).unwrap(), majorizes(&eq, &ep, EPS_CMP).unwrap());
    }

    #[test]
    fn vertex_count_is_bounded((spec, p, _q) in setup(5)) {
        let n = c_plus_vertices(&p, &spec).unwrap().len() as u64;
        prop_assert!(n <= vertex_count_bound(p.len()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qubit_catalysts_obey_the_necessary_conditions((spec, p, _q) in setup_between(3, 4), seed in 0u64..1000, gibbs_r in 0.1f64..0.9) {
        let verts: Vec<Dist> = c_plus_vertices(&p, &spec).unwrap().states().cloned().collect();
        let q = SimplexSampler::new(p.len(), seed, 2).sample_in_hull(&verts).unwrap();
        let hits = search_qubit_catalyst(&p, &q, &spec, gibbs_r, 30).unwrap();
        if !hits.is_empty() && compare(&p, &q, &spec).unwrap() == Relation::Incomparable {
            prop_assert!(catalytic_condition(&p, &q, &spec).unwrap());
            prop_assert!(dim_bound(&p, &q, &spec).unwrap().k_star < 2.0);
            let w = qubit_window(&p, &q, &spec, gibbs_r).unwrap();
            for t in hits {
                prop_assert!(w.contains(t), "t = {} outside {:?}", t, w);
            }
        }
    }

    #[test]
    fn two_level_systems_are_never_catalysed(x in 0.01f64..0.99, y in 0.01f64..0.99, beta in 0.0f64..2.0, gibbs_r in 0.1f64..0.9) {
        let spec = EnergySpectrum::new(vec![0.0, 1.0], beta).unwrap();
        let (p, q) = (Dist::new(vec![x, 1.0 - x]).unwrap(), Dist::new(vec![y, 1.0 - y]).unwrap());
        if compare(&p, &q, &spec).unwrap() == Relation::Incomparable {
            prop_assert!(search_qubit_catalyst(&p, &q, &spec, gibbs_r, 30).unwrap().is_empty());
        }
    }

    #[test]
    fn future_of_p_star_stays_non_entanglable(beta in 0.0f64..5.0, seed in 0u64..1000) {
        let cfg = TwoQubitConfig::new(beta).unwrap();
        let spec = cfg.spectrum();
        let q = hull_point(&p_star(beta).unwrap(), &spec, seed);
        prop_assert!(entanglement_witness(q.as_slice()) >= -1e-9);
    }
}
