//! Bending, quakebends and Kerckhoff minima for once-punctured-torus
//! quasifuchsian groups.
//!
//! The crate follows one family of groups: marked punctured-torus groups
//! `⟨A, B⟩` whose convex-hull boundary is bent along the axis of `A` on one
//! side and the axis of `B` on the other. Closed-form relations between the
//! two bending angles, the core geodesic lengths and the distance between
//! the axes let us build these groups exactly, deform them by quakebends, and
//! watch them flatten onto the minimum of a length function as the bending
//! goes to zero.
//!
//! - [`h3geom`]: Möbius maps, complex lengths, axes and distances in H³.
//! - [`ptorus`]: Markov trace triples and explicit generator matrices.
//! - [`bendsolve`]: the bending-angle/length equations and the bent group.
//! - [`quakebend`]: earthquakes, pure bends and length derivatives.
//! - [`minima`]: minimization of `a·l_α + b·l_β` and the line of minima.
//! - [`lab`]: θ-sweeps, slope fits, CSV output, limit-set rendering, CLI.

pub mod bendsolve;
pub mod error;
pub mod h3geom;
pub mod lab;
pub mod minima;
pub mod ptorus;
pub mod quakebend;

pub use error::{Error, Result};
