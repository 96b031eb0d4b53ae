//! Planar domains and the metric constructions built on them.

pub mod chain;
pub mod domain;
pub mod fatness;
pub mod quasihyperbolic;
pub mod region;
pub mod uniform;

pub use chain::{harnack_chain, harnack_chain_with_step, ChainBall, HarnackChain};
pub use domain::{make_domain, smoothed_l_shape, Domain, DomainKind, DomainRegularity, UniformConstant};
pub use fatness::fatness_ratio;
pub use quasihyperbolic::{quasihyperbolic_distance, quasihyperbolic_geodesic, Geodesic};
pub use region::{Piece, Region, RoundedPolygon};
pub use uniform::estimate_uniform_constant;
