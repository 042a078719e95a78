//! Limit-set pictures and circline fits.
//!
//! Reduced words in `A, B, A⁻¹, B⁻¹` are enumerated depth first. A word
//! `W` ending in the letter `g` is refined further while the images under
//! `W` of the attracting fixed points of the three letters allowed after
//! `g` are spread more than `epsilon` apart (chordally), up to `max_depth`.
//! The attracting fixed point of every enumerated word is plotted.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::h3geom::{Ideal, MoebiusMap};
use crate::ptorus::MarkedGroup;

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn square(center: Complex64, half_width: f64) -> Self {
        Self {
            re_min: center.re - half_width,
            re_max: center.re + half_width,
            im_min: center.im - half_width,
            im_max: center.im + half_width,
        }
    }

    pub fn contains(&self, w: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&w.re) && (self.im_min..=self.im_max).contains(&w.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSpec {
    pub width: u32,
    pub height: u32,
    pub window: Window,
    pub max_depth: u32,
    pub epsilon: f64,
}

impl Default for ImageSpec {
    fn default() -> Self {
        Self {
            width: 512,
            height: 512,
            window: Window::square(Complex64::new(0.0, 0.0), 2.0),
            max_depth: 12,
            epsilon: 1e-3,
        }
    }
}

impl ImageSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidImageSpec("width and height must be positive"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidImageSpec("epsilon must be positive"));
        }
        let w = &self.window;
        if !(w.re_max > w.re_min && w.im_max > w.im_min) {
            return Err(Error::InvalidImageSpec("window must have positive area"));
        }
        Ok(())
    }

    /// Pixel `(column, row)` of `w`, row 0 at the top.
    pub fn pixel(&self, w: Complex64) -> Option<(u32, u32)> {
        if !self.window.contains(w) {
            return None;
        }
        let win = &self.window;
        let fx = (w.re - win.re_min) / (win.re_max - win.re_min);
        let fy = (win.im_max - w.im) / (win.im_max - win.im_min);
        let col = ((fx * self.width as f64) as u32).min(self.width - 1);
        let row = ((fy * self.height as f64) as u32).min(self.height - 1);
        Some((col, row))
    }
}

/// Attracting fixed points of all enumerated words, in enumeration order.
pub fn limit_points(g: &MarkedGroup, spec: &ImageSpec) -> Result<Vec<Ideal>> {
    spec.validate()?;
    // Letters in the order A, B, A⁻¹, B⁻¹; the inverse of letter i is (i + 2) % 4.
    let letters = g.generators();
    let seeds: Vec<Ideal> = letters
        .iter()
        .map(|m| m.attracting_fixed_point().ok_or(Error::NonLoxodromic))
        .collect::<Result<_>>()?;
    let spread = |w: &MoebiusMap, last: usize| -> f64 {
        let images: Vec<Ideal> = (0..4)
            .filter(|&j| j != (last + 2) % 4)
            .map(|j| w.apply(seeds[j]))
            .collect();
        let mut s: f64 = 0.0;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                s = s.max(images[i].chordal_distance(&images[j]));
            }
        }
        s
    };

    let mut out = Vec::new();
    let mut stack: Vec<(MoebiusMap, usize, u32)> =
        (0..4).rev().map(|i| (letters[i], i, 1)).collect();
    while let Some((w, last, depth)) = stack.pop() {
        if let Some(p) = w.attracting_fixed_point() {
            out.push(p);
        }
        if depth >= spec.max_depth || spread(&w, last) < spec.epsilon {
            continue;
        }
        for j in (0..4).rev().filter(|&j| j != (last + 2) % 4) {
            stack.push((w.compose(&letters[j]), j, depth + 1));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rendering {
    pub spec: ImageSpec,
    /// Number of enumerated fixed points, inside the window or not.
    pub enumerated: usize,
    /// Enumerated points inside the window.
    pub points: Vec<Complex64>,
    /// Row-major RGB, black points on white.
    pub pixels: Vec<u8>,
}

impl Rendering {
    /// Binary PPM (P6) bytes.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.spec.width, self.spec.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

pub fn render(g: &MarkedGroup, spec: &ImageSpec) -> Result<Rendering> {
    let all = limit_points(g, spec)?;
    let points: Vec<Complex64> = all
        .iter()
        .filter_map(|p| p.finite())
        .filter(|&w| spec.window.contains(w))
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut pixels = vec![255u8; 3 * spec.width as usize * spec.height as usize];
    for &w in &points {
        if let Some((c, r)) = spec.pixel(w) {
            let i = 3 * (r as usize * spec.width as usize + c as usize);
            pixels[i..i + 3].fill(0);
        }
    }
    Ok(Rendering {
        spec: *spec,
        enumerated: all.len(),
        points,
        pixels,
    })
}

/// Renders `g` and writes the image to `path`.
pub fn render_limit_set(g: &MarkedGroup, spec: &ImageSpec, path: &Path) -> Result<Rendering> {
    let r = render(g, spec)?;
    fs::write(path, r.to_ppm())?;
    Ok(r)
}

/// A circle or line `a|w|² + b·x + c·y + d = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circline {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Circline {
    fn from_vector(v: [f64; 4]) -> Self {
        Self {
            a: v[0],
            b: v[1],
            c: v[2],
            d: v[3],
        }
    }

    fn row(w: Complex64) -> [f64; 4] {
        [w.norm_sqr(), w.re, w.im, 1.0]
    }

    /// The circline through three points.
    pub fn through(p: Complex64, q: Complex64, r: Complex64) -> Result<Self> {
        let rows = [Self::row(p), Self::row(q), Self::row(r)];
        let minor = |skip: usize| {
            let cols: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
            Matrix3::from_fn(|i, j| rows[i][cols[j]]).determinant()
        };
        let v = [minor(0), -minor(1), minor(2), -minor(3)];
        let c = Self::from_vector(v);
        if c.b.hypot(c.c) + c.a.abs() == 0.0 {
            return Err(Error::Degenerate("coincident points"));
        }
        Ok(c)
    }

    /// Algebraic least-squares fit: the right singular vector of the
    /// smallest singular value of the rows `(|w|², x, y, 1)`.
    pub fn fit(points: &[Complex64]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InsufficientPoints(points.len()));
        }
        let n = points.len().max(4);
        let m = DMatrix::from_fn(n, 4, |i, j| points.get(i).map_or(0.0, |&w| Self::row(w)[j]));
        let svd = m.svd(false, true);
        let vt = svd
            .v_t
            .ok_or(Error::Degenerate("singular value decomposition"))?;
        let k = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| i)
            .expect("four singular values");
        Ok(Self::from_vector([
            vt[(k, 0)],
            vt[(k, 1)],
            vt[(k, 2)],
            vt[(k, 3)],
        ]))
    }

    /// Euclidean distance from `w`, exact for circles and lines.
    pub fn distance(&self, w: Complex64) -> f64 {
        let f = self.a * w.norm_sqr() + self.b * w.re + self.c * w.im + self.d;
        let grad = (2.0 * self.a * w.re + self.b).hypot(2.0 * self.a * w.im + self.c);
        let disc = (self.b * self.b + self.c * self.c - 4.0 * self.a * self.d).max(0.0);
        2.0 * f.abs() / (grad + disc.sqrt())
    }

    pub fn max_distance(&self, points: &[Complex64]) -> f64 {
        points.iter().map(|&w| self.distance(w)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclineFit {
    pub circline: Circline,
    /// Largest distance from a point to `circline`.
    pub residual: f64,
}

/// Best of the least-squares fit and a three-point fit through well spread
/// points, by largest point distance. Points are centred and scaled before
/// fitting; the reported residual is in the original units.
pub fn fit_circline(points: &[Complex64]) -> Result<CirclineFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    let n = points.len() as f64;
    let center = points.iter().sum::<Complex64>() / n;
    let scale = (points.iter().map(|w| (w - center).norm_sqr()).sum::<f64>() / n).sqrt();
    if !(scale > 0.0) {
        return Err(Error::Degenerate("all points coincide"));
    }
    let local: Vec<Complex64> = points.iter().map(|w| (w - center) / scale).collect();

    let p0 = local[0];
    let far = |from: &dyn Fn(Complex64) -> f64| {
        *local
            .iter()
            .max_by(|x, y| from(**x).total_cmp(&from(**y)))
            .expect("nonempty")
    };
    let p1 = far(&|w| (w - p0).norm());
    let dir = (p1 - p0) / (p1 - p0).norm();
    let p2 = far(&|w| ((w - p0) * dir.conj()).im.abs());

    let mut candidates = vec![Circline::fit(&local)?];
    if let Ok(c) = Circline::through(p0, p1, p2) {
        candidates.push(c);
    }
    let (best, residual) = candidates
        .into_iter()
        .map(|c| (c, c.max_distance(&local)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("one candidate");
    // Back to original coordinates: w = center + scale·u.
    let (a, b, c, d) = (best.a, best.b, best.c, best.d);
    let s2 = scale * scale;
    let circline = Circline {
        a: a / s2,
        b: b / scale - 2.0 * a * center.re / s2,
        c: c / scale - 2.0 * a * center.im / s2,
        d: d + a * center.norm_sqr() / s2 - (b * center.re + c * center.im) / scale,
    };
    Ok(CirclineFit {
        circline,
        residual: residual * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bendsolve::{group_from_bending, BendingAngles};
    use crate::ptorus::{group_from_triple, TraceTriple};
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fuchsian() -> MarkedGroup {
        group_from_triple(&TraceTriple::real(3.0, 3.0, 3.0).unwrap()).unwrap()
    }

    fn small_spec() -> ImageSpec {
        ImageSpec {
            width: 64,
            height: 48,
            max_depth: 8,
            ..ImageSpec::default()
        }
    }

    #[test]
    fn circline_distances() {
        let unit = Circline::through(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)).unwrap();
        assert!((unit.distance(c(3.0, 0.0)) - 2.0).abs() < 1e-15);
        assert!((unit.distance(c(0.0, 0.0)) - 1.0).abs() < 1e-15);
        let line = Circline::through(c(0.0, 0.0), c(1.0, 1.0), c(2.0, 2.0)).unwrap();
        assert!(line.a.abs() < 1e-15);
        assert!((line.distance(c(1.0, 0.0)) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fit_recovers_circle_and_line() {
        let circle: Vec<Complex64> = (0..50)
            .map(|k| c(0.3, -1.0) + Complex64::from_polar(2.5, 0.1 * k as f64))
            .collect();
        let f = fit_circline(&circle).unwrap();
        assert!(f.residual < 1e-12, "{f:?}");
        assert!(f.circline.max_distance(&circle) < 1e-12);
        let line: Vec<Complex64> = (0..30).map(|k| c(k as f64, 1.0 - 0.5 * k as f64)).collect();
        assert!(fit_circline(&line).unwrap().residual < 1e-12);
        let mut bumped = circle.clone();
        bumped[7] *= 1.01;
        assert!(fit_circline(&bumped).unwrap().residual > 1e-3);
    }

    #[test]
    fn spec_validation() {
        let bad = ImageSpec {
            width: 0,
            ..ImageSpec::default()
        };
        assert!(matches!(
            render(&fuchsian(), &bad),
            Err(Error::InvalidImageSpec(_))
        ));
        let bad = ImageSpec {
            epsilon: 0.0,
            ..ImageSpec::default()
        };
        assert!(bad.validate().is_err());
        let far = ImageSpec {
            window: Window::square(c(1e6, 1e6), 1.0),
            ..small_spec()
        };
        assert_eq!(render(&fuchsian(), &far), Err(Error::EmptyWindow));
    }

    #[test]
    fn fuchsian_limit_set_is_a_circline() {
        let r = render(&fuchsian(), &small_spec()).unwrap();
        assert!(r.points.len() > 100);
        assert!(fit_circline(&r.points).unwrap().residual <= 1e-6);
    }

    #[test]
    fn bent_limit_set_is_not() {
        let g = group_from_bending(BendingAngles::equal(FRAC_PI_4).unwrap()).unwrap();
        let r = render(&g, &small_spec()).unwrap();
        assert!(fit_circline(&r.points).unwrap().residual > 1e-3);
    }

    #[test]
    fn deterministic_and_monotone() {
        let g = fuchsian();
        let a = render(&g, &small_spec()).unwrap().to_ppm();
        let b = render(&g, &small_spec()).unwrap().to_ppm();
        assert_eq!(a, b);
        assert!(a.starts_with(b"P6\n64 48\n255\n"));
        assert_eq!(a.len(), 13 + 64 * 48 * 3);
        let mut last = 0;
        for depth in 1..=8 {
            let spec = ImageSpec {
                max_depth: depth,
                ..small_spec()
            };
            let n = limit_points(&g, &spec).unwrap().len();
            assert!(n >= last);
            last = n;
        }
    }
}
