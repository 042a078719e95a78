//! Seeded random checks of three comparison inequalities in H³: the height
//! of a triangle against its exterior angle, the distance from a skew
//! quadrilateral's side to the opposite line, and the chord of a polyline
//! against its bend angles.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::h3geom::{
    dist_point_line_through, interior_angle, point_at_angle, point_on_segment, polyline_stats,
    H3Point, Polyline,
};

/// Slack allowed on the right-hand side of every inequality.
pub const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    /// Smallest `rhs − lhs` seen; negative only beyond the slack.
    pub worst_margin: f64,
}

impl InequalityReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        self.cases += 1;
        let margin = rhs - lhs;
        self.worst_margin = self.worst_margin.min(margin);
        if margin < -SLACK {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.violations == 0
    }
}

fn random_point(rng: &mut impl Rng) -> H3Point {
    let r = 2.0 * rng.random::<f64>().sqrt();
    let arg = rng.random_range(0.0..2.0 * PI);
    let t = rng.random_range(-1.5f64..1.5).exp();
    H3Point::new(Complex64::from_polar(r, arg), t).expect("positive height")
}

/// Point at distance `s` from `p` toward `q`.
fn step_toward(p: &H3Point, q: &H3Point, s: f64) -> Result<H3Point> {
    point_on_segment(p, q, s / p.distance(q))
}

/// Triangles `ABC` whose exterior angle `φ` at `C` is at most `π/2`:
/// `tanh d(C, AB) ≤ sin φ`.
pub fn check_triangles(seed: u64, n: usize) -> Result<InequalityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = InequalityReport::new("triangle height");
    while rep.cases < n {
        let c = random_point(&mut rng);
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let a = step_toward(&c, &p, rng.random_range(0.01..5.0))?;
        let interior = rng.random_range(FRAC_PI_2..PI);
        let b = point_at_angle(&c, &a, &q, interior, rng.random_range(0.01..5.0))?;
        let phi = PI - interior_angle(&a, &c, &b)?;
        let h = dist_point_line_through(&c, &a, &b)?;
        rep.record(h.tanh(), phi.sin());
    }
    Ok(rep)
}

/// Skew quadrilaterals `X₁X₂Y₂Y₁` with `d(Xᵢ, Yᵢ) ≤ v` and `Z` on `X₁X₂` at
/// distance at least `η` from both ends: `sinh d(Z, Y₁Y₂) ≤ sinh v / cosh η`.
pub fn check_quadrilaterals(seed: u64, n: usize) -> Result<InequalityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = InequalityReport::new("quadrilateral");
    while rep.cases < n {
        let x1 = random_point(&mut rng);
        let x2 = random_point(&mut rng);
        let len = x1.distance(&x2);
        if len < 1e-3 {
            continue;
        }
        let v = rng.random_range(0.001..1.0);
        let y1 = step_toward(
            &x1,
            &random_point(&mut rng),
            v * rng.random_range(0.0..=1.0),
        )?;
        let y2 = step_toward(
            &x2,
            &random_point(&mut rng),
            v * rng.random_range(0.0..=1.0),
        )?;
        let v = x1.distance(&y1).max(x2.distance(&y2));
        if y1.distance(&y2) < 1e-6 {
            continue;
        }
        let eta = rng.random_range(0.0..=0.5) * len;
        let f = rng.random_range(eta / len..=1.0 - eta / len);
        let z = point_on_segment(&x1, &x2, f)?;
        let eta = x1.distance(&z).min(x2.distance(&z));
        let u = dist_point_line_through(&z, &y1, &y2)?;
        rep.record(u.sinh(), v.sinh() / eta.cosh());
    }
    Ok(rep)
}

/// Polylines with small bends whose angles `v`, `w` stay below `φ ≤ π/4`:
/// `l_σ̂ ≥ cos φ · l_σ`, and `tanh d(P, σ̂) ≤ sin 2φ` at every sampled `P`.
/// Candidates exceeding `π/4` are redrawn.
pub fn check_polylines(seed: u64, n: usize) -> Result<(InequalityReport, InequalityReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chord = InequalityReport::new("polyline chord");
    let mut height = InequalityReport::new("polyline height");
    while chord.cases < n {
        let segments = rng.random_range(2..=8);
        let max_bend = rng.random_range(0.01..0.3);
        let mut pts = vec![random_point(&mut rng)];
        let first = step_toward(
            &pts[0],
            &random_point(&mut rng),
            rng.random_range(0.05..2.0),
        )?;
        pts.push(first);
        for _ in 1..segments {
            let k = pts.len();
            let (prev, cur) = (pts[k - 2], pts[k - 1]);
            let ahead = point_on_segment(&prev, &cur, 2.0)?;
            let bend = rng.random_range(0.0..max_bend);
            let next = point_at_angle(
                &cur,
                &ahead,
                &random_point(&mut rng),
                bend,
                rng.random_range(0.05..2.0),
            )?;
            pts.push(next);
        }
        let poly = Polyline::new(pts)?;
        let stats = polyline_stats(&poly)?;
        let phi = stats.max_vw();
        if phi > FRAC_PI_4 {
            continue;
        }
        chord.record(phi.cos() * stats.length, stats.chord_length);
        let (a, b) = (poly.first(), poly.last());
        for s in &stats.samples {
            let d = dist_point_line_through(&s.point, a, b)?;
            height.record(d.tanh(), (2.0 * phi).sin());
        }
    }
    Ok((chord, height))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let t = check_triangles(1, 500).unwrap();
        assert!(t.passed() && t.cases == 500, "{t:?}");
        let q = check_quadrilaterals(2, 500).unwrap();
        assert!(q.passed(), "{q:?}");
        let (c, h) = check_polylines(3, 100).unwrap();
        assert!(c.passed() && h.passed(), "{c:?} {h:?}");
        assert!(h.cases > c.cases);
    }

    #[test]
    fn margins_are_not_vacuous() {
        let t = check_triangles(4, 2000).unwrap();
        assert!(t.worst_margin < 0.05, "{t:?}");
        let (c, _) = check_polylines(5, 200).unwrap();
        assert!(c.worst_margin.is_finite());
    }

    #[test]
    fn report_counts_violations() {
        let mut r = InequalityReport::new("x");
        r.record(1.0, 1.0 + 1e-13);
        r.record(1.0 + 1e-13, 1.0);
        assert!(r.passed());
        r.record(2.0, 1.0);
        assert_eq!((r.cases, r.violations, r.worst_margin), (3, 1, -1.0));
        assert!(!r.passed());
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(
            check_triangles(9, 50).unwrap(),
            check_triangles(9, 50).unwrap()
        );
    }
}
