//! Earthquakes, quakebends and length derivatives.
//!
//! A quakebend along the curve represented by a loxodromic `A` with complex
//! parameter `τ` shears the complementary pieces a distance `ℜτ` along the
//! axis of `A` and bends them through the angle `ℑτ`. On a marked group it
//! replaces `B` by `C_τ B`, where `C_τ` is the element with the same axis as
//! `A` and complex translation length `τ`. Real `τ` gives the Fenchel–Nielsen
//! earthquake; purely imaginary `τ` gives a pure bend.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bendsolve::{boundary_metrics, group_from_bending, lengths_from_angles, BendingAngles};
use crate::error::{Error, Result};
use crate::h3geom::{normalize_trace, MoebiusMap};
use crate::ptorus::{trace_to_length, FuchsianPoint, MarkedGroup, TraceTriple, REAL_TOL};

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Imaginary trace parts below this, relative to `max(1, |xyz|)`, count as
/// real when deciding the sign of an unbending.
pub const UNBEND_TOL: f64 = 1e-9;

/// Complex quakebend parameter `τ`: shear `ℜτ`, bend angle `ℑτ`, `|ℑτ| < π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuakebendParam(Complex64);

impl QuakebendParam {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.is_finite() && tau.im.abs() < PI) {
            return Err(Error::InconsistentInputs(format!(
                "quakebend parameter {tau} needs |Im| < π"
            )));
        }
        Ok(Self(tau))
    }

    /// Pure shear by `t`.
    pub fn shear(t: f64) -> Result<Self> {
        Self::new(Complex64::new(t, 0.0))
    }

    /// Pure bend through `theta`.
    pub fn bend(theta: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, theta))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// The simple closed curves whose earthquakes we use: `α` and `β` carried by
/// the generators, and `γ` carried by `AB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    Alpha,
    Beta,
    Gamma,
}

impl Curve {
    pub const ALL: [Curve; 3] = [Curve::Alpha, Curve::Beta, Curve::Gamma];

    /// Length of the curve on a real triple.
    pub fn length_in(self, t: &TraceTriple) -> f64 {
        let n = t.normalized();
        let trace = match self {
            Curve::Alpha => n.x.re,
            Curve::Beta => n.y.re,
            Curve::Gamma => n.z.re,
        };
        trace_to_length(trace)
    }
}

/// `C_τ`: same axis and orientation as `A`, complex translation length `τ`.
///
/// With `λ` the complex length of `A` and `N = (A − cosh(λ/2) I)/sinh(λ/2)`
/// (so `N² = I`), `C_τ = cosh(τ/2) I + sinh(τ/2) N`. The diagonal of
/// `A − cosh(λ/2) I` is `±(a − d)/2` and `sinh(λ/2)` comes from
/// `(a − d)² + 4bc`, so nothing cancels when `A` is close to the identity.
pub fn twist_element(a: &MoebiusMap, tau: QuakebendParam) -> Result<MoebiusMap> {
    let lambda = a.complex_length().map_err(|_| Error::NonLoxodromic)?;
    if lambda.re <= 1e-14 {
        return Err(Error::NonLoxodromic);
    }
    let raw = a.raw_trace();
    let sign = if normalize_trace(raw) == raw {
        1.0
    } else {
        -1.0
    };
    let ch = raw * sign / 2.0;
    let mut sh = a.trace_discriminant().sqrt() / 2.0;
    // |cosh + sinh| = |e^{λ/2}| ≥ 1 fixes the sign.
    if (ch + sh).norm() < (ch - sh).norm() {
        sh = -sh;
    }
    let t = tau.value() / 2.0;
    let (c, s) = (t.cosh(), t.sinh());
    let k = s / sh * sign;
    let half = (a.a - a.d) / 2.0;
    MoebiusMap::new(c + k * half, k * a.b, k * a.c, c - k * half)
}

/// Quakebend along `α`: `A' = A`, `B' = C_τ(A) B`.
pub fn quakebend_alpha(g: &MarkedGroup, tau: QuakebendParam) -> Result<MarkedGroup> {
    let c = twist_element(&g.a, tau)?;
    Ok(MarkedGroup {
        a: g.a,
        b: c.compose(&g.b),
    })
}

/// Quakebend along `β`: `A' = A C_{−τ}(B)`, `B' = B`.
///
/// This is [`quakebend_alpha`] transported by the relabelling
/// `(α, β) ↦ (β, α⁻¹)`.
pub fn quakebend_beta(g: &MarkedGroup, tau: QuakebendParam) -> Result<MarkedGroup> {
    let c = twist_element(&g.b, QuakebendParam(-tau.value()))?;
    Ok(MarkedGroup {
        a: g.a.compose(&c),
        b: g.b,
    })
}

/// Quakebend along `γ = αβ`: `A' = A C_{−τ}(AB)`, `B' = C_τ(AB) B`, which
/// keeps `A'B' = AB`.
pub fn quakebend_gamma(g: &MarkedGroup, tau: QuakebendParam) -> Result<MarkedGroup> {
    let ab = g.a.compose(&g.b);
    let fwd = twist_element(&ab, tau)?;
    let back = twist_element(&ab, QuakebendParam(-tau.value()))?;
    Ok(MarkedGroup {
        a: g.a.compose(&back),
        b: fwd.compose(&g.b),
    })
}

pub fn quakebend(g: &MarkedGroup, curve: Curve, tau: QuakebendParam) -> Result<MarkedGroup> {
    match curve {
        Curve::Alpha => quakebend_alpha(g, tau),
        Curve::Beta => quakebend_beta(g, tau),
        Curve::Gamma => quakebend_gamma(g, tau),
    }
}

/// Result of undoing the bending on one side of a bent group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unbent {
    /// Bend parameter that made the traces real, `∓iθ`.
    pub bend: f64,
    /// The resulting triple, sign-normalized.
    pub triple: TraceTriple,
    pub l_alpha: f64,
    pub l_beta: f64,
    /// Largest imaginary trace part left after unbending.
    pub imag_residual: f64,
}

/// Undo the bending along `α`: a pure bend by `−iθ_α` (or `+iθ_α` if that is
/// the sign that produces real traces). The result is the flat structure on
/// the `+` side, so its `β`-length is `l_β⁺`.
pub fn unbend_check(a: BendingAngles) -> Result<Unbent> {
    unbend(a, Curve::Alpha)
}

/// The mirror of [`unbend_check`]: undo the bending along `β`, giving the
/// `−` side structure with `α`-length `l_α⁻`.
pub fn unbend_check_beta(a: BendingAngles) -> Result<Unbent> {
    unbend(a, Curve::Beta)
}

fn unbend(a: BendingAngles, curve: Curve) -> Result<Unbent> {
    let g = group_from_bending(a)?;
    let theta = match curve {
        Curve::Beta => a.theta_beta,
        _ => a.theta_alpha,
    };
    let attempt = |bend: f64| -> Result<(f64, TraceTriple)> {
        let t = quakebend(&g, curve, QuakebendParam::bend(bend)?)?
            .triple()
            .normalized();
        Ok((t.max_imag() / t.scale(), t))
    };
    let (minus, t_minus) = attempt(-theta)?;
    let (plus, t_plus) = attempt(theta)?;
    let (bend, residual, triple) = if minus <= UNBEND_TOL {
        (-theta, minus, t_minus)
    } else if plus <= UNBEND_TOL {
        (theta, plus, t_plus)
    } else {
        return Err(Error::SignConventionFailure { minus, plus });
    };
    Ok(Unbent {
        bend,
        triple,
        l_alpha: Curve::Alpha.length_in(&triple),
        l_beta: Curve::Beta.length_in(&triple),
        imag_residual: residual * triple.scale(),
    })
}

/// `|l_β(unbent) − l_β⁺|` for the `α` unbending, the quantity the unbending
/// test bounds.
pub fn unbend_residual(a: BendingAngles) -> Result<f64> {
    let u = unbend_check(a)?;
    let m = boundary_metrics(&lengths_from_angles(a)?, a)?;
    Ok((u.l_beta - m.l_beta_plus).abs())
}

/// Real trace triple after the time-`t` earthquake along `curve`.
pub fn earthquake_triple(p: &FuchsianPoint, curve: Curve, t: f64) -> Result<TraceTriple> {
    let g = quakebend(&p.group()?, curve, QuakebendParam::shear(t)?)?;
    let tr = g.triple().normalized();
    if tr.max_imag() > REAL_TOL * tr.scale() {
        return Err(Error::InvariantViolated(format!(
            "earthquake produced complex traces (imaginary part {:.3e})",
            tr.max_imag()
        )));
    }
    Ok(tr)
}

/// The time-`t` earthquake along `curve`, read back as a point.
pub fn earthquake(p: &FuchsianPoint, curve: Curve, t: f64) -> Result<FuchsianPoint> {
    FuchsianPoint::from_triple(&earthquake_triple(p, curve, t)?)
}

/// Finite-difference scheme for [`length_derivative_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Central,
    /// Central differences at `h` and `h/2`, combined to cancel the `h²` term.
    Richardson,
}

/// `∂l_of/∂t_along` at `p` by central differences with step `h`.
pub fn length_derivative(p: &FuchsianPoint, along: Curve, of: Curve, h: f64) -> Result<f64> {
    length_derivative_with(p, along, of, h, Scheme::Central)
}

pub fn length_derivative_with(
    p: &FuchsianPoint,
    along: Curve,
    of: Curve,
    h: f64,
    scheme: Scheme,
) -> Result<f64> {
    if !(h.is_finite() && 2.0 * h >= 1e-12) {
        return Err(Error::StepTooSmall { h });
    }
    if along == of {
        return Ok(0.0);
    }
    let central = |h: f64| -> Result<f64> {
        let fwd = of.length_in(&earthquake_triple(p, along, h)?);
        let back = of.length_in(&earthquake_triple(p, along, -h)?);
        Ok((fwd - back) / (2.0 * h))
    };
    match scheme {
        Scheme::Central => central(h),
        Scheme::Richardson => Ok((4.0 * central(h / 2.0)? - central(h)?) / 3.0),
    }
}

/// `l(t + h) − 2 l(t) + l(t − h)` for the length of `of` along the
/// earthquake of `along`, at `t = 0`.
pub fn second_difference(p: &FuchsianPoint, along: Curve, of: Curve, h: f64) -> Result<f64> {
    let at = |t: f64| -> Result<f64> { Ok(of.length_in(&earthquake_triple(p, along, t)?)) };
    Ok(at(h)? - 2.0 * at(0.0)? + at(-h)?)
}
