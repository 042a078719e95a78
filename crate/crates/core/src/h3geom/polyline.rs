use super::space::{tangent_angle, Lorentz};
use super::{dist_point_geodesic, GeodesicLine, H3Point};
use crate::error::{Error, Result};

/// Interior sample points per segment used by [`polyline_stats`]; segment
/// endpoints are always sampled in addition.
pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 8;

/// A piecewise geodesic arc `X_0, …, X_k` in upper half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<H3Point>,
}

impl Polyline {
    pub fn new(points: Vec<H3Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Degenerate("polyline needs at least two points"));
        }
        for (index, w) in points.windows(2).enumerate() {
            if w[0].distance(&w[1]) <= 1e-12 {
                return Err(Error::DegenerateSegment { index });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[H3Point] {
        &self.points
    }

    pub fn first(&self) -> &H3Point {
        &self.points[0]
    }

    pub fn last(&self) -> &H3Point {
        self.points.last().expect("nonempty")
    }

    /// The geodesic chord from the first to the last point.
    pub fn chord(&self) -> Result<GeodesicLine> {
        GeodesicLine::through(self.first(), self.last())
    }
}

/// Angles `v(P)` and `w(P)` at a point of the arc.
///
/// `v` is measured between the forward direction of the arc and the
/// continuation of the geodesic from the initial point `X` through `P`; `w`
/// likewise between the backward direction and the continuation from the
/// final point `X'`. Either is `None` where `P` coincides with `X` or `X'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSample {
    pub point: H3Point,
    pub segment: usize,
    pub fraction: f64,
    pub v: Option<f64>,
    pub w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolylineStats {
    /// Exterior angle at each interior vertex.
    pub bend_angles: Vec<f64>,
    pub samples: Vec<AngleSample>,
    /// Arc length `l_σ`.
    pub length: f64,
    /// Distance between the endpoints, `l_σ̂`.
    pub chord_length: f64,
}

impl PolylineStats {
    /// Largest sampled `v` or `w`.
    ///
    /// `v` decreases along each segment and `w` increases, so sampling the
    /// segment endpoints (as one-sided limits) already attains the supremum.
    pub fn max_vw(&self) -> f64 {
        self.samples
            .iter()
            .flat_map(|s| [s.v, s.w])
            .flatten()
            .fold(0.0, f64::max)
    }
}

pub fn polyline_stats(p: &Polyline) -> Result<PolylineStats> {
    polyline_stats_sampled(p, DEFAULT_SAMPLES_PER_SEGMENT)
}

pub fn polyline_stats_sampled(p: &Polyline, interior_samples: usize) -> Result<PolylineStats> {
    let pts: Vec<Lorentz> = p.points.iter().map(|q| q.to_hyperboloid()).collect();
    let start = pts[0];
    let finish = *pts.last().expect("nonempty");
    let nseg = pts.len() - 1;

    let mut bend_angles = Vec::with_capacity(nseg.saturating_sub(1));
    for i in 1..nseg {
        let incoming = pts[i]
            .unit_tangent_toward(&pts[i - 1])
            .map_err(|_| Error::DegenerateSegment { index: i - 1 })?
            .scale(-1.0);
        let outgoing = pts[i]
            .unit_tangent_toward(&pts[i + 1])
            .map_err(|_| Error::DegenerateSegment { index: i })?;
        bend_angles.push(tangent_angle(&incoming, &outgoing));
    }

    let mut samples = Vec::with_capacity(nseg * (interior_samples + 2));
    let mut length = 0.0;
    for s in 0..nseg {
        let (a, b) = (pts[s], pts[s + 1]);
        let seg_len = p.points[s].distance(&p.points[s + 1]);
        length += seg_len;
        let u = a
            .unit_tangent_toward(&b)
            .map_err(|_| Error::DegenerateSegment { index: s })?;
        let steps = interior_samples + 1;
        for j in 0..=steps {
            let fraction = j as f64 / steps as f64;
            let (q, forward) = if j == steps {
                // One-sided limit at the segment end.
                let back = b
                    .unit_tangent_toward(&a)
                    .map_err(|_| Error::DegenerateSegment { index: s })?;
                (b, back.scale(-1.0))
            } else {
                let q = a.exp(&u, fraction * seg_len);
                let forward = if j == 0 {
                    u
                } else {
                    q.unit_tangent_toward(&b)
                        .map_err(|_| Error::DegenerateSegment { index: s })?
                };
                (q, forward)
            };
            let at_start = s == 0 && j == 0;
            let at_finish = s == nseg - 1 && j == steps;
            let v = if at_start {
                None
            } else {
                let away = q.unit_tangent_toward(&start).ok().map(|t| t.scale(-1.0));
                // On the first segment the continuation of XP is the segment itself.
                Some(away.map_or(0.0, |away| tangent_angle(&forward, &away)))
            };
            let w = if at_finish {
                None
            } else {
                let backward = forward.scale(-1.0);
                let away = q.unit_tangent_toward(&finish).ok().map(|t| t.scale(-1.0));
                Some(away.map_or(0.0, |away| tangent_angle(&backward, &away)))
            };
            samples.push(AngleSample {
                point: H3Point::from_hyperboloid(&q),
                segment: s,
                fraction,
                v,
                w,
            });
        }
    }

    Ok(PolylineStats {
        bend_angles,
        samples,
        length,
        chord_length: p.first().distance(p.last()),
    })
}

/// Interior angle of the triangle `ABC` at the vertex `C`.
pub fn interior_angle(a: &H3Point, c: &H3Point, b: &H3Point) -> Result<f64> {
    let hc = c.to_hyperboloid();
    let ua = hc.unit_tangent_toward(&a.to_hyperboloid())?;
    let ub = hc.unit_tangent_toward(&b.to_hyperboloid())?;
    Ok(tangent_angle(&ua, &ub))
}

/// Point at fraction `f ∈ [0, 1]` of the geodesic segment from `p` to `q`.
pub fn point_on_segment(p: &H3Point, q: &H3Point, f: f64) -> Result<H3Point> {
    let hp = p.to_hyperboloid();
    let u = hp.unit_tangent_toward(&q.to_hyperboloid())?;
    Ok(H3Point::from_hyperboloid(&hp.exp(&u, f * p.distance(q))))
}

/// Point at distance `s` from `p` in the direction making angle `angle` with
/// the geodesic toward `toward`, rotated within the plane through `p`,
/// `toward` and `third` (the plane's orientation is fixed by `third`).
pub fn point_at_angle(
    p: &H3Point,
    toward: &H3Point,
    third: &H3Point,
    angle: f64,
    s: f64,
) -> Result<H3Point> {
    let hp = p.to_hyperboloid();
    let e1 = hp.unit_tangent_toward(&toward.to_hyperboloid())?;
    let v = hp.unit_tangent_toward(&third.to_hyperboloid())?;
    let e2 = v.sub(&e1.scale(v.dot(&e1)));
    let n = e2.space_norm();
    if !(n > 1e-12) {
        return Err(Error::Degenerate("collinear reference points"));
    }
    let e2 = e2.scale(1.0 / n);
    let dir = e1.scale(angle.cos()).add(&e2.scale(angle.sin()));
    Ok(H3Point::from_hyperboloid(&hp.exp(&dir, s)))
}

/// Distance from `p` to the complete geodesic through `a` and `b`.
pub fn dist_point_line_through(p: &H3Point, a: &H3Point, b: &H3Point) -> Result<f64> {
    Ok(dist_point_geodesic(p, &GeodesicLine::through(a, b)?))
}
