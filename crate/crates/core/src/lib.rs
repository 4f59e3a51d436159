//! Thermomajorisation, thermal cones and strict catalysis for energy-incoherent states.
//!
//! States are probability vectors over the levels of an [`EnergySpectrum`]. A state `p`
//! reaches `q` by a thermal operation iff its thermomajorisation curve lies above that of `q`
//! ([`thermo_majorizes`]). On top of that order the crate builds
//!
//! * the future thermal cone and its extreme points ([`cones`]),
//! * tangent vectors, catalysable regions and bounds on strict catalysts ([`catalysis`]),
//! * relative volumes of all these regions ([`volume`]),
//! * two applications: entanglement generation for two qubits ([`entanglement`]) and optimal
//!   cooling ([`cooling`]).
//!
//! ```
//! use thermocone::{compare, Dist, EnergySpectrum, Relation};
//!
//! let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0], 0.2).unwrap();
//! let p = Dist::new(vec![0.42, 0.51, 0.07]).unwrap();
//! let q = Dist::new(vec![0.52, 0.13, 0.35]).unwrap();
//! assert_eq!(compare(&p, &q, &spec).unwrap(), Relation::Incomparable);
//! ```
//!
//! Runnable programs for each area live in `examples/`.

pub mod catalysis;
pub mod cli;
pub mod cones;
pub mod cooling;
pub mod curve;
pub mod embedding;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod state;
pub mod volume;

pub use catalysis::{
    c_plus_vertex, c_plus_vertices, catalysable_future_member, catalysable_past_member, catalytic_condition,
    dim_bound, qubit_window, search_qubit_catalyst, tangent_vector, verify_catalyst, DimBound, QubitWindow,
    TangentVector,
};
pub use cones::{classify, future_cone_vertices, ConeRegion, ConeVertices};
pub use curve::{beta_order, compare, thermo_majorizes, tm_curve, Relation, SlopeVector, TMCurve};
pub use error::{Error, Result};
pub use state::{gibbs_vector, tensor, Dist, EnergySpectrum, Permutation, QuasiDist};
pub use volume::{mc_volume, Region, VolumeEstimate};
