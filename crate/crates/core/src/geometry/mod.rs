//! Symmetric planar domains and the constructions built on them.

mod curve;
mod domain;
mod invading;
pub mod mesh;
mod mesher;
mod profile;
mod reflection;
mod slicing;

pub use curve::{Curve, Piece};
pub use domain::{
    build_domain, diameter, half_domain, regular_hexagon, AxisSpan, Bottom, BottomKeyword, Domain, DomainSpec,
    HalfDomain, Region, Shape,
};
pub use invading::{default_radius, first_index, invading_sequence, truncation_of, FilletKind};
pub use mesh::{EdgeTag, Mesh};
pub use mesher::{triangulate, triangulate_half};
pub use profile::{ProfileFn, ProfileSpec};
pub use reflection::{
    boundary_distance, graph_jacobian, reflection_jacobian, sample_collar, weight_ratio_bound, ReflectionSample, Wall,
};
pub use slicing::{slice_above, slice_equal_gaussian, SliceSet, SliceStrip, StripWeight};
