//! Möbius maps and hyperbolic geometry in the upper half-space model.
//!
//! Points of H³ are `(z, t)` with `t > 0`; the boundary is the Riemann
//! sphere. Möbius maps act on both. Tangent-vector computations (angles,
//! geodesic segments) go through the hyperboloid model internally, and
//! point-to-line distances use the closed form `sinh d = |z|/t` after moving
//! the line to `0 → ∞`.

mod mobius;
mod polyline;
mod space;

pub use mobius::{
    axis, complex_length, complex_length_of_trace, compose, normalize_trace, MoebiusMap,
    PARABOLIC_TOL,
};
pub use polyline::{
    dist_point_line_through, interior_angle, point_at_angle, point_on_segment, polyline_stats,
    polyline_stats_sampled, AngleSample, Polyline, PolylineStats, DEFAULT_SAMPLES_PER_SEGMENT,
};
pub use space::{
    complex_distance, dist_point_geodesic, ComplexDistance, GeodesicLine, H3Point, Ideal, IDEAL_EPS,
};
