use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use super::{GeodesicLine, H3Point, Ideal};
use crate::error::{Error, Result};

/// Traces within this distance of ±2 are treated as parabolic (or the identity).
pub const PARABOLIC_TOL: f64 = 1e-13;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A determinant-one 2×2 complex matrix, i.e. an element of SL(2, C).
///
/// Acts on the Riemann sphere by `w ↦ (aw + b)/(cw + d)` and on upper
/// half-space by the Poincaré extension. `M` and `-M` describe the same
/// isometry; everything derived from a map (traces, lengths, axes) is
/// reported invariantly under that sign.
#[derive(Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl MoebiusMap {
    /// Builds a map from arbitrary entries, rescaling to determinant one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = (a.norm() * d.norm())
            .max(b.norm() * c.norm())
            .max(f64::MIN_POSITIVE);
        if !(det.norm() > 1e-14 * scale) || !det.is_finite() {
            return Err(Error::Degenerate("singular matrix"));
        }
        Ok(Self::from_raw(a, b, c, d).normalized())
    }

    /// Rounding level of `det()`: deviations from 1 below this carry no
    /// information, and dividing them out only adds error.
    fn det_noise(&self) -> f64 {
        8.0 * f64::EPSILON * (self.a.norm() * self.d.norm() + self.b.norm() * self.c.norm())
    }

    /// Entries taken as given; the caller guarantees `ad - bc = 1`.
    pub(crate) const fn from_raw(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Self::from_raw(ONE, ZERO, ZERO, ONE)
    }

    /// `diag(k, 1/k)`, acting as `w ↦ k² w`.
    pub fn diagonal(k: Complex64) -> Self {
        Self::from_raw(k, ZERO, ZERO, k.inv())
    }

    /// The parabolic map `w ↦ w + s`.
    pub fn translation(s: Complex64) -> Self {
        Self::from_raw(ONE, s, ZERO, ONE)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    fn normalized(self) -> Self {
        let det = self.det();
        if (det - ONE).norm() <= self.det_noise() {
            return self;
        }
        let k = det.sqrt().inv();
        Self::from_raw(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn inverse(&self) -> Self {
        Self::from_raw(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(-self.a, -self.b, -self.c, -self.d)
    }

    /// Matrix product `self · other`, renormalized to determinant one when
    /// rounding has drifted beyond the noise level of the determinant.
    pub fn compose(&self, other: &Self) -> Self {
        let p = Self::from_raw(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        );
        p.normalized()
    }

    /// Conjugate `C · self · C⁻¹`.
    pub fn conjugate_by(&self, c: &Self) -> Self {
        c.compose(self).compose(&c.inverse())
    }

    /// Raw trace `a + d`; changes sign under `M ↦ -M`.
    pub fn raw_trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Trace with the sign fixed so that the real part is nonnegative
    /// (imaginary part nonnegative when the real part vanishes).
    pub fn trace(&self) -> Complex64 {
        normalize_trace(self.raw_trace())
    }

    /// Max entry-wise distance to `other`, up to the overall sign.
    pub fn distance_projective(&self, other: &Self) -> f64 {
        let diff = |s: f64| {
            [
                self.a - other.a * s,
                self.b - other.b * s,
                self.c - other.c * s,
                self.d - other.d * s,
            ]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0))
    }

    pub fn apply(&self, w: Ideal) -> Ideal {
        match w {
            Ideal::Infinity => {
                if self.c == ZERO {
                    Ideal::Infinity
                } else {
                    Ideal::Finite(self.a / self.c)
                }
            }
            Ideal::Finite(w) => {
                let den = self.c * w + self.d;
                if den == ZERO {
                    Ideal::Infinity
                } else {
                    Ideal::Finite((self.a * w + self.b) / den)
                }
            }
        }
    }

    /// Poincaré extension to upper half-space.
    pub fn apply_point(&self, p: &H3Point) -> H3Point {
        let cz_d = self.c * p.z + self.d;
        let t2 = p.t * p.t;
        let den = cz_d.norm_sqr() + self.c.norm_sqr() * t2;
        let z = ((self.a * p.z + self.b) * cz_d.conj() + self.a * self.c.conj() * t2) / den;
        H3Point { z, t: p.t / den }
    }

    /// Complex length `λ` with `Tr M = 2 cosh(λ/2)`, `Re λ ≥ 0`, `Im λ ∈ (-π, π]`.
    pub fn complex_length(&self) -> Result<Complex64> {
        complex_length_of_trace(self.raw_trace())
    }

    /// Oriented axis: from the repelling to the attracting fixed point.
    pub fn axis(&self) -> Result<GeodesicLine> {
        let lambda = self.complex_length()?;
        if lambda.re <= 1e-14 {
            return Err(Error::Elliptic);
        }
        let (first, second) = self.fixed_points();
        let (repelling, attracting) = match second {
            Ideal::Finite(w) if (self.c * w + self.d).norm() > 1.0 => (first, second),
            _ => (second, first),
        };
        Ok(GeodesicLine::new_unchecked(repelling, attracting))
    }

    /// Attracting fixed point for loxodromic maps; the unique fixed point for
    /// parabolic ones. `None` for the identity and elliptic maps.
    pub fn attracting_fixed_point(&self) -> Option<Ideal> {
        match self.complex_length() {
            Ok(l) if l.re > 1e-14 => self.axis().ok().map(|g| g.end),
            Ok(_) => None,
            Err(_) => {
                if self.b.norm() + self.c.norm() < 1e-300 {
                    None
                } else {
                    Some(self.fixed_points().0)
                }
            }
        }
    }

    /// `Tr² − 4`, evaluated as `(a − d)² + 4bc` when that form cancels less
    /// (near the identity).
    pub(crate) fn trace_discriminant(&self) -> Complex64 {
        let amd = self.a - self.d;
        let tr = self.raw_trace();
        let bc = self.b * self.c;
        if amd.norm_sqr() + 4.0 * bc.norm() < tr.norm_sqr() + 4.0 {
            amd * amd + bc * 4.0
        } else {
            tr * tr - 4.0
        }
    }

    /// Both fixed points; the second is finite unless the map is parabolic at ∞.
    fn fixed_points(&self) -> (Ideal, Ideal) {
        let amd = self.a - self.d;
        let s = self.trace_discriminant().sqrt();
        // Pick the sign that avoids cancellation in the numerator.
        let num = if (amd + s).norm() >= (amd - s).norm() {
            amd + s
        } else {
            amd - s
        };
        let first = if self.c == ZERO {
            Ideal::Infinity
        } else {
            let w = num / (self.c * 2.0);
            if w.is_finite() {
                Ideal::Finite(w)
            } else {
                Ideal::Infinity
            }
        };
        let second = if num == ZERO {
            // a = d and Tr² = 4: parabolic, single fixed point.
            first
        } else {
            Ideal::Finite(-self.b * 2.0 / num)
        };
        (first, second)
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: Self) -> Self::Output {
        self.compose(&rhs)
    }
}

/// Free-function form of [`MoebiusMap::compose`].
pub fn compose(m: &MoebiusMap, n: &MoebiusMap) -> MoebiusMap {
    m.compose(n)
}

/// Free-function form of [`MoebiusMap::complex_length`].
pub fn complex_length(m: &MoebiusMap) -> Result<Complex64> {
    m.complex_length()
}

/// Free-function form of [`MoebiusMap::axis`].
pub fn axis(m: &MoebiusMap) -> Result<GeodesicLine> {
    m.axis()
}

pub fn normalize_trace(t: Complex64) -> Complex64 {
    if t.re < 0.0 || (t.re == 0.0 && t.im < 0.0) {
        -t
    } else {
        t
    }
}

/// Inverts `tr = 2 cosh(λ/2)` on the principal branch.
pub fn complex_length_of_trace(trace: Complex64) -> Result<Complex64> {
    let t = normalize_trace(trace);
    if (t - 2.0).norm() <= PARABOLIC_TOL {
        return Err(Error::ParabolicOrIdentity {
            trace_re: trace.re,
            trace_im: trace.im,
        });
    }
    let half = t / 2.0;
    // acosh(w) = 2 ln(√((w+1)/2) + √((w-1)/2)) stays accurate near w = 1.
    let lambda = ((half + 1.0) / 2.0).sqrt() + ((half - 1.0) / 2.0).sqrt();
    let mut lambda = lambda.ln() * 4.0;
    if lambda.re < 0.0 {
        lambda = -lambda;
    }
    if lambda.re == 0.0 && lambda.im < 0.0 {
        lambda = -lambda;
    }
    if lambda.im <= -PI {
        lambda.im += 2.0 * PI;
    } else if lambda.im > PI {
        lambda.im -= 2.0 * PI;
    }
    Ok(lambda)
}
