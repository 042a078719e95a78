use std::f64::consts::PI;

use num_complex::Complex64;

use super::MoebiusMap;
use crate::error::{Error, Result};

/// Chordal distance below which two ideal points are considered equal.
pub const IDEAL_EPS: f64 = 1e-12;

/// A point of the Riemann sphere, the boundary of upper half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ideal {
    Finite(Complex64),
    Infinity,
}

impl Ideal {
    pub fn real(x: f64) -> Self {
        Ideal::Finite(Complex64::new(x, 0.0))
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            Ideal::Finite(w) => Some(w),
            Ideal::Infinity => None,
        }
    }

    /// Chordal distance on the unit sphere (diameter 2).
    pub fn chordal_distance(&self, other: &Ideal) -> f64 {
        match (self, other) {
            (Ideal::Infinity, Ideal::Infinity) => 0.0,
            (Ideal::Finite(w), Ideal::Infinity) | (Ideal::Infinity, Ideal::Finite(w)) => {
                2.0 / (1.0 + w.norm_sqr()).sqrt()
            }
            (Ideal::Finite(u), Ideal::Finite(v)) => {
                2.0 * (u - v).norm() / ((1.0 + u.norm_sqr()) * (1.0 + v.norm_sqr())).sqrt()
            }
        }
    }

    pub fn approx_eq(&self, other: &Ideal, eps: f64) -> bool {
        self.chordal_distance(other) <= eps
    }
}

/// A point `(z, t)` of upper half-space, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point {
    pub z: Complex64,
    pub t: f64,
}

impl H3Point {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() || !z.is_finite() {
            return Err(Error::Degenerate("point not in upper half-space"));
        }
        Ok(Self { z, t })
    }

    pub fn from_parts(x: f64, y: f64, t: f64) -> Result<Self> {
        Self::new(Complex64::new(x, y), t)
    }

    /// Hyperbolic distance, in the cancellation-free `2 asinh` form.
    pub fn distance(&self, other: &H3Point) -> f64 {
        let chord = ((self.z - other.z).norm_sqr() + (self.t - other.t).powi(2)).sqrt();
        2.0 * (chord / (2.0 * (self.t * other.t).sqrt())).asinh()
    }

    pub(crate) fn to_hyperboloid(self) -> Lorentz {
        let r2 = self.z.norm_sqr() + self.t * self.t;
        Lorentz([
            (r2 + 1.0) / (2.0 * self.t),
            self.z.re / self.t,
            self.z.im / self.t,
            (r2 - 1.0) / (2.0 * self.t),
        ])
    }

    pub(crate) fn from_hyperboloid(v: &Lorentz) -> Self {
        let t = 1.0 / (v.0[0] - v.0[3]);
        Self {
            z: Complex64::new(v.0[1] * t, v.0[2] * t),
            t,
        }
    }
}

/// An oriented complete geodesic, running from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicLine {
    pub start: Ideal,
    pub end: Ideal,
}

impl GeodesicLine {
    pub fn new(start: Ideal, end: Ideal) -> Result<Self> {
        if start.approx_eq(&end, IDEAL_EPS) {
            return Err(Error::Degenerate("geodesic endpoints coincide"));
        }
        Ok(Self { start, end })
    }

    pub(crate) fn new_unchecked(start: Ideal, end: Ideal) -> Self {
        Self { start, end }
    }

    /// The vertical line over `w`, oriented upwards.
    pub fn vertical(w: Complex64) -> Self {
        Self::new_unchecked(Ideal::Finite(w), Ideal::Infinity)
    }

    pub fn reversed(&self) -> Self {
        Self::new_unchecked(self.end, self.start)
    }

    /// The geodesic through two distinct points, oriented from `p` to `q`.
    pub fn through(p: &H3Point, q: &H3Point) -> Result<Self> {
        let hp = p.to_hyperboloid();
        let u = hp.unit_tangent_toward(&q.to_hyperboloid())?;
        Ok(Self::new_unchecked(
            hp.sub(&u).ideal_point(),
            hp.add(&u).ideal_point(),
        ))
    }

    /// A Möbius map sending `start ↦ 0` and `end ↦ ∞`.
    pub fn normalizer(&self) -> MoebiusMap {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let m = match (self.start, self.end) {
            (Ideal::Finite(s), Ideal::Finite(e)) => MoebiusMap::new(one, -s, one, -e),
            (Ideal::Finite(s), Ideal::Infinity) => MoebiusMap::new(one, -s, zero, one),
            (Ideal::Infinity, Ideal::Finite(e)) => MoebiusMap::new(zero, one, one, -e),
            (Ideal::Infinity, Ideal::Infinity) => Err(Error::Degenerate("line at infinity")),
        };
        m.expect("geodesic endpoints are distinct")
    }
}

/// Complex distance `ρ + iφ` between two oriented geodesics: `ρ` is the length
/// of the common perpendicular and `φ` the angle between the lines after
/// sliding one along it onto the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDistance {
    pub rho: f64,
    pub phi: f64,
}

impl ComplexDistance {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.rho, self.phi)
    }
}

/// Complex distance between two geodesics with four distinct endpoints.
///
/// After normalizing `g1` to `0 → ∞`, the endpoints `p → q` of `g2` satisfy
/// `cosh δ = (q + p)/(q - p)`.
pub fn complex_distance(g1: &GeodesicLine, g2: &GeodesicLine) -> Result<ComplexDistance> {
    let same_start = g1.start.approx_eq(&g2.start, IDEAL_EPS);
    let same_end = g1.end.approx_eq(&g2.end, IDEAL_EPS);
    let cross_start = g1.start.approx_eq(&g2.end, IDEAL_EPS);
    let cross_end = g1.end.approx_eq(&g2.start, IDEAL_EPS);
    if (same_start && same_end) || (cross_start && cross_end) {
        return Err(Error::Degenerate("coincident geodesics"));
    }
    if same_start || same_end || cross_start || cross_end {
        return Err(Error::SharedEndpoint);
    }
    let n = g1.normalizer();
    let (p, q) = match (n.apply(g2.start), n.apply(g2.end)) {
        (Ideal::Finite(p), Ideal::Finite(q)) => (p, q),
        _ => return Err(Error::SharedEndpoint),
    };
    let cosh_delta = (q + p) / (q - p);
    let mut delta = acosh(cosh_delta);
    if delta.re < 0.0 || (delta.re == 0.0 && delta.im < 0.0) {
        delta = -delta;
    }
    if delta.im <= -PI {
        delta.im += 2.0 * PI;
    } else if delta.im > PI {
        delta.im -= 2.0 * PI;
    }
    Ok(ComplexDistance {
        rho: delta.re.max(0.0),
        phi: delta.im,
    })
}

/// Principal `acosh`, written to stay accurate near `w = ±1`.
fn acosh(w: Complex64) -> Complex64 {
    (((w + 1.0) / 2.0).sqrt() + ((w - 1.0) / 2.0).sqrt()).ln() * 2.0
}

/// Hyperbolic distance from a point to a geodesic, via `sinh d = |z|/t` after
/// moving the geodesic to `0 → ∞`.
pub fn dist_point_geodesic(p: &H3Point, g: &GeodesicLine) -> f64 {
    let q = g.normalizer().apply_point(p);
    (q.z.norm() / q.t).asinh()
}

/// Vector in R^{3,1} with the form `-x0 y0 + x1 y1 + x2 y2 + x3 y3`; the
/// hyperboloid model is used for tangent-vector computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Lorentz(pub [f64; 4]);

impl Lorentz {
    pub fn dot(&self, o: &Lorentz) -> f64 {
        -self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2] + self.0[3] * o.0[3]
    }

    pub fn add(&self, o: &Lorentz) -> Lorentz {
        Lorentz(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn sub(&self, o: &Lorentz) -> Lorentz {
        Lorentz(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    pub fn scale(&self, s: f64) -> Lorentz {
        Lorentz(self.0.map(|x| x * s))
    }

    /// Norm of a spacelike vector.
    pub fn space_norm(&self) -> f64 {
        self.dot(self).max(0.0).sqrt()
    }

    /// Unit tangent at `self` (a hyperboloid point) pointing toward `q`.
    pub fn unit_tangent_toward(&self, q: &Lorentz) -> Result<Lorentz> {
        let cosh_d = -self.dot(q);
        let v = q.sub(&self.scale(cosh_d));
        let n = v.space_norm();
        if !(n > 1e-15) {
            return Err(Error::Degenerate("coincident points"));
        }
        Ok(v.scale(1.0 / n))
    }

    /// Point at distance `s` along the unit tangent `u`.
    pub fn exp(&self, u: &Lorentz, s: f64) -> Lorentz {
        self.scale(s.cosh()).add(&u.scale(s.sinh()))
    }

    /// Boundary point of a future null vector.
    pub fn ideal_point(&self) -> Ideal {
        let den = self.0[0] - self.0[3];
        if den.abs() <= 1e-14 * self.0[0].abs() {
            Ideal::Infinity
        } else {
            Ideal::Finite(Complex64::new(self.0[1] / den, self.0[2] / den))
        }
    }
}

/// Angle between two unit tangent vectors at the same point.
pub(crate) fn tangent_angle(u: &Lorentz, v: &Lorentz) -> f64 {
    2.0 * u.sub(v).space_norm().atan2(u.add(v).space_norm())
}
