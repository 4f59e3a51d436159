//! Energy spectra, probability vectors and level orderings.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries this far below zero are treated as rounding noise and clamped.
pub const EPS_NEG: f64 = 1e-12;
/// Allowed deviation of a normalised vector's sum from one.
pub const EPS_SUM: f64 = 1e-9;
/// Absolute slack when comparing curve heights.
pub const EPS_CMP: f64 = 1e-10;
/// Allowed violation of curve concavity.
pub const EPS_SLOPE: f64 = 1e-10;
/// Largest dimension for which operations enumerate all of `S_d`.
pub const PERMUTATION_CAP: usize = 8;

pub(crate) fn check_permutation_cap(d: usize, cap: usize) -> Result<()> {
    if d > cap {
        Err(Error::DimensionCap { d, cap })
    } else {
        Ok(())
    }
}

/// Energy levels of a system together with the bath inverse temperature.
///
/// The Gibbs weights are computed once on construction. Energies are shifted by
/// their minimum before exponentiation so large `beta` does not overflow. An
/// infinite `beta` is accepted and yields the ground-state limit (ties between
/// degenerate ground levels share the weight equally).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    energies: Vec<f64>,
    beta: f64,
    gibbs: Vec<f64>,
}

impl EnergySpectrum {
    pub fn new(energies: Vec<f64>, beta: f64) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidSpectrum("no energy levels".into()));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("non-finite energy {e}")));
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::NegativeBeta(beta));
        }
        let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = if beta.is_infinite() {
            energies.iter().map(|&e| if e == e_min { 1.0 } else { 0.0 }).collect()
        } else {
            energies.iter().map(|&e| (-beta * (e - e_min)).exp()).collect()
        };
        let z: f64 = weights.iter().sum();
        let gibbs = weights.into_iter().map(|w| w / z).collect();
        Ok(Self { energies, beta, gibbs })
    }

    /// Equidistant spectrum `0, 1, ..., d-1`.
    pub fn equidistant(d: usize, beta: f64) -> Result<Self> {
        Self::new((0..d).map(|n| n as f64).collect(), beta)
    }

    /// Builds a spectrum whose Gibbs vector at inverse temperature `beta` is `gibbs`.
    ///
    /// At `beta = 0` only the uniform vector is representable; all energies are then zero.
    pub fn from_gibbs(gibbs: &[f64], beta: f64) -> Result<Self> {
        if gibbs.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::InvalidSpectrum("Gibbs weights must be positive".into()));
        }
        let total: f64 = gibbs.iter().sum();
        if beta == 0.0 {
            let d = gibbs.len() as f64;
            if gibbs.iter().any(|&g| (g / total - 1.0 / d).abs() > EPS_SUM) {
                return Err(Error::InvalidSpectrum(
                    "a non-uniform Gibbs vector needs beta > 0".into(),
                ));
            }
            return Self::new(vec![0.0; gibbs.len()], 0.0);
        }
        let energies = gibbs.iter().map(|&g| -(g / total).ln() / beta).collect();
        Self::new(energies, beta)
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn gibbs(&self) -> &[f64] {
        &self.gibbs
    }

    /// Returns a copy with the same energies at a different inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.energies.clone(), beta)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            Err(Error::DimensionMismatch { expected: self.dim(), found })
        } else {
            Ok(())
        }
    }

    /// Gibbs weights that are all strictly positive, as required for slopes.
    pub(crate) fn positive_gibbs(&self) -> Result<&[f64]> {
        if self.gibbs.iter().any(|&g| g <= 0.0) {
            return Err(Error::InvalidSpectrum(
                "Gibbs vector has vanishing weights (beta too large for slopes)".into(),
            ));
        }
        Ok(&self.gibbs)
    }
}

/// Gibbs vector `e^{-beta E_i} / Z` of a spectrum.
pub fn gibbs_vector(spec: &EnergySpectrum) -> Dist {
    Dist(spec.gibbs.clone())
}

/// A probability vector over energy levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Dist(Vec<f64>);

impl Dist {
    /// Validates and stores a probability vector. Entries in `[-EPS_NEG, 0)` are clamped to zero.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution(format!("non-finite entry {p}")));
            }
            if *p < -EPS_NEG {
                return Err(Error::InvalidDistribution(format!("negative entry {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > EPS_SUM {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self(probs))
    }

    /// Scales a non-negative vector to unit sum.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution("weights must have a positive finite sum".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self(probs)
    }

    /// The sharp state concentrated on level `k` (zero-based).
    pub fn sharp(d: usize, k: usize) -> Self {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        Self(v)
    }

    pub fn uniform(d: usize) -> Self {
        Self(vec![1.0 / d as f64; d])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_full_rank(&self) -> bool {
        self.0.iter().all(|&p| p > 0.0)
    }

    pub fn linf_distance(&self, other: &Dist) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Dist, lambda: f64) -> Dist {
        Dist(self.0.iter().zip(&other.0).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect())
    }
}

impl std::ops::Index<usize> for Dist {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A signed vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct QuasiDist(Vec<f64>);

impl QuasiDist {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite entry".into()));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > EPS_SUM {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Returns the vector as a `Dist` if every entry is (numerically) non-negative.
    pub fn to_dist(&self) -> Option<Dist> {
        Dist::new(self.0.clone()).ok()
    }
}

impl From<Dist> for QuasiDist {
    fn from(d: Dist) -> Self {
        QuasiDist(d.0)
    }
}

/// A sequence of levels listed by position: `levels()[0]` is the level placed first.
///
/// Stored zero-based; displayed and serialised one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(levels: Vec<usize>) -> Result<Self> {
        let d = levels.len();
        let mut seen = vec![false; d];
        for &l in &levels {
            if l >= d || seen[l] {
                return Err(Error::InvalidArgument(format!("{levels:?} is not a permutation")));
            }
            seen[l] = true;
        }
        Ok(Self(levels))
    }

    pub fn from_one_based(levels: &[usize]) -> Result<Self> {
        if levels.contains(&0) {
            return Err(Error::InvalidArgument("one-based permutation contains 0".into()));
        }
        Self::new(levels.iter().map(|l| l - 1).collect())
    }

    pub fn identity(d: usize) -> Self {
        Self((0..d).collect())
    }

    /// All permutations of `d` levels in lexicographic order.
    pub fn all(d: usize) -> impl Iterator<Item = Permutation> {
        (0..d).permutations(d).map(Permutation)
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }

    /// Position of each level in the ordering.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.0.len()];
        for (pos, &level) in self.0.iter().enumerate() {
            r[level] = pos;
        }
        r
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|l| l + 1).join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let levels = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&levels).map_err(serde::de::Error::custom)
    }
}

/// Product distribution and composite spectrum of two independent systems.
///
/// Level `(i, j)` sits at index `i * d_b + j` with energy `E_i + F_j`.
pub fn tensor(
    p_a: &Dist,
    spec_a: &EnergySpectrum,
    p_b: &Dist,
    spec_b: &EnergySpectrum,
) -> Result<(Dist, EnergySpectrum)> {
    spec_a.check_dim(p_a.len())?;
    spec_b.check_dim(p_b.len())?;
    if spec_a.beta() != spec_b.beta() {
        return Err(Error::BetaMismatch(spec_a.beta(), spec_b.beta()));
    }
    let probs = p_a
        .as_slice()
        .iter()
        .flat_map(|a| p_b.as_slice().iter().map(move |b| a * b))
        .collect();
    let energies = spec_a
        .energies()
        .iter()
        .flat_map(|ea| spec_b.energies().iter().map(move |eb| ea + eb))
        .collect();
    Ok((Dist(probs), EnergySpectrum::new(energies, spec_a.beta())?))
}
