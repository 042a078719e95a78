//! Bending angles, core lengths and the bent group.
//!
//! A group in the family is bent along the axis of `A` on one side of its
//! convex hull and along the axis of `B` on the other, with exterior angles
//! `θ_α` and `θ_β`. Writing `s_α = sinh(l_α*/2)`, `s_β = sinh(l_β*/2)`:
//!
//! ```text
//! s_α = sin(θ_β/2) cot(θ_α/2)        s_β = sin(θ_α/2) cot(θ_β/2)
//! cosh d · s_α · s_β = 1             cos(θ_α/2) = cosh(l_β*/2) tanh(l_α*/2)
//! sinh(l_β⁺/2) = cosh d · s_β        sinh(l_α⁻/2) = cosh d · s_α
//! ```
//!
//! where `d` is the distance between the two axes, which meet at right
//! angles along their common perpendicular.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::h3geom::MoebiusMap;
use crate::ptorus::{MarkedGroup, TraceTriple};

/// Threshold on the `cos`/`tanh` product below which it counts as 1.
const PRODUCT_ONE_TOL: f64 = 2.0 * f64::EPSILON;

/// Exterior bending angles along `α` and `β`, each in `(0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendingAngles {
    pub theta_alpha: f64,
    pub theta_beta: f64,
}

impl BendingAngles {
    pub fn new(theta_alpha: f64, theta_beta: f64) -> Result<Self> {
        let a = Self {
            theta_alpha,
            theta_beta,
        };
        a.validate()?;
        Ok(a)
    }

    /// Both angles equal to `theta`.
    pub fn equal(theta: f64) -> Result<Self> {
        Self::new(theta, theta)
    }

    /// `(a·θ, b·θ)`.
    pub fn scaled(a: f64, b: f64, theta: f64) -> Result<Self> {
        Self::new(a * theta, b * theta)
    }

    pub fn swapped(&self) -> Self {
        Self {
            theta_alpha: self.theta_beta,
            theta_beta: self.theta_alpha,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |t: f64| t > 0.0 && t < PI;
        if ok(self.theta_alpha) && ok(self.theta_beta) {
            Ok(())
        } else {
            Err(Error::InfeasibleAngles {
                theta_alpha: self.theta_alpha,
                theta_beta: self.theta_beta,
            })
        }
    }
}

/// Core geodesic lengths `l_α*`, `l_β*` and the axis distance `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreGeometry {
    pub l_alpha_star: f64,
    pub l_beta_star: f64,
    pub d: f64,
}

impl CoreGeometry {
    /// `(sinh(l_α*/2), sinh(l_β*/2))`.
    pub fn half_sinhs(&self) -> (f64, f64) {
        (
            (self.l_alpha_star / 2.0).sinh(),
            (self.l_beta_star / 2.0).sinh(),
        )
    }

    /// `cosh d − 1`, without cancellation for small `d`.
    pub fn cosh_d_minus_one(&self) -> f64 {
        2.0 * (self.d / 2.0).sinh().powi(2)
    }

    /// `|cosh d · sinh(l_α*/2) · sinh(l_β*/2) − 1|`.
    pub fn product_residual(&self) -> f64 {
        let (sa, sb) = self.half_sinhs();
        ((1.0 + self.cosh_d_minus_one()) * sa * sb - 1.0).abs()
    }

    pub fn swapped(&self) -> Self {
        Self {
            l_alpha_star: self.l_beta_star,
            l_beta_star: self.l_alpha_star,
            d: self.d,
        }
    }
}

/// Lengths of `α` and `β` in the intrinsic metrics of the two convex-hull
/// boundary components. On the `+` side `α` is the bending line, so
/// `l_alpha_plus = l_alpha_star`; on the `−` side `l_beta_minus = l_beta_star`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMetrics {
    pub l_alpha_plus: f64,
    pub l_beta_plus: f64,
    pub l_alpha_minus: f64,
    pub l_beta_minus: f64,
    /// `|l_α⁺ − l_α⁻|`, computed without subtracting the two lengths.
    pub gap_alpha: f64,
    /// `|l_β⁺ − l_β⁻|`, likewise.
    pub gap_beta: f64,
}

/// Core geometry of the group bent by `a`.
pub fn lengths_from_angles(a: BendingAngles) -> Result<CoreGeometry> {
    a.validate()?;
    let (ha, hb) = (a.theta_alpha / 2.0, a.theta_beta / 2.0);
    let sa = hb.sin() / ha.tan();
    let sb = ha.sin() / hb.tan();
    if !(sa > 0.0 && sb > 0.0) {
        return Err(Error::InfeasibleAngles {
            theta_alpha: a.theta_alpha,
            theta_beta: a.theta_beta,
        });
    }
    // cosh d = 1/(cos(θ_α/2) cos(θ_β/2)); subtract 1 before dividing.
    let (ca, cb) = (ha.cos(), hb.cos());
    let one_minus = 2.0 * (ha / 2.0).sin().powi(2) + ca * 2.0 * (hb / 2.0).sin().powi(2);
    let eps = one_minus / (ca * cb);
    Ok(CoreGeometry {
        l_alpha_star: 2.0 * sa.asinh(),
        l_beta_star: 2.0 * sb.asinh(),
        d: acosh_one_plus(eps),
    })
}

/// Bending angles realizing the given core lengths.
pub fn angles_from_lengths(l_alpha_star: f64, l_beta_star: f64) -> Result<BendingAngles> {
    let theta = |own: f64, other: f64| -> Result<f64> {
        let product = (other / 2.0).cosh() * (own / 2.0).tanh();
        if !(product > 0.0 && product < 1.0 - PRODUCT_ONE_TOL) {
            return Err(Error::InfeasibleLengths { product });
        }
        let sine = ((1.0 - product) * (1.0 + product)).sqrt();
        Ok(2.0 * sine.atan2(product))
    };
    if !(l_alpha_star > 0.0 && l_beta_star > 0.0) {
        return Err(Error::InfeasibleLengths { product: f64::NAN });
    }
    Ok(BendingAngles {
        theta_alpha: theta(l_alpha_star, l_beta_star)?,
        theta_beta: theta(l_beta_star, l_alpha_star)?,
    })
}

/// Boundary lengths of the two convex-hull components.
pub fn boundary_metrics(g: &CoreGeometry, a: BendingAngles) -> Result<BoundaryMetrics> {
    let expected = lengths_from_angles(a).map_err(|e| Error::InconsistentInputs(e.to_string()))?;
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE);
    let mismatch = rel(g.l_alpha_star, expected.l_alpha_star)
        .max(rel(g.l_beta_star, expected.l_beta_star))
        .max(rel(g.d, expected.d));
    if !(mismatch <= 1e-9) || !(g.product_residual() <= 1e-9) {
        return Err(Error::InconsistentInputs(format!(
            "geometry does not match angles (relative mismatch {mismatch:.3e}, product residual {:.3e})",
            g.product_residual()
        )));
    }
    let (sa, sb) = g.half_sinhs();
    let eps = g.cosh_d_minus_one();
    let (beta_plus, gap_beta) = lift(sb, eps);
    let (alpha_minus, gap_alpha) = lift(sa, eps);
    Ok(BoundaryMetrics {
        l_alpha_plus: g.l_alpha_star,
        l_beta_plus: beta_plus,
        l_alpha_minus: alpha_minus,
        l_beta_minus: g.l_beta_star,
        gap_alpha,
        gap_beta,
    })
}

/// Residuals of the two boundary relations on each side:
/// `sinh d = coth(l_β*/2) tan(θ_α/2)` and `cosh d sinh(l_β*/2) = sinh(l_β⁺/2)`,
/// plus the mirror pair with `α ↔ β`. Each is relative to `max(1, |rhs|)`.
pub fn boundary_residual(g: &CoreGeometry, a: BendingAngles, m: &BoundaryMetrics) -> f64 {
    let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / rhs.abs().max(1.0);
    let sinh_d = g.d.sinh();
    let cosh_d = 1.0 + g.cosh_d_minus_one();
    let coth = |l: f64| 1.0 / (l / 2.0).tanh();
    [
        rel(sinh_d, coth(g.l_beta_star) * (a.theta_alpha / 2.0).tan()),
        rel(sinh_d, coth(g.l_alpha_star) * (a.theta_beta / 2.0).tan()),
        rel(
            cosh_d * (g.l_beta_star / 2.0).sinh(),
            (m.l_beta_plus / 2.0).sinh(),
        ),
        rel(
            cosh_d * (g.l_alpha_star / 2.0).sinh(),
            (m.l_alpha_minus / 2.0).sinh(),
        ),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// `(2 asinh(cosh d · s), 2 asinh(cosh d · s) − 2 asinh(s))`, the second
/// through `asinh u − asinh v = asinh((u² − v²)/(u√(1+v²) + v√(1+u²)))`.
fn lift(s: f64, eps: f64) -> (f64, f64) {
    let u = (1.0 + eps) * s;
    let diff2 = s * s * eps * (2.0 + eps);
    let den = u * (1.0 + s * s).sqrt() + s * (1.0 + u * u).sqrt();
    (2.0 * u.asinh(), 2.0 * (diff2 / den).asinh())
}

/// `acosh(1 + ε)` for `ε ≥ 0`.
fn acosh_one_plus(eps: f64) -> f64 {
    let eps = eps.max(0.0);
    (eps + (eps * (2.0 + eps)).sqrt()).ln_1p()
}

/// Trace triple of the bent group: `x = 2 cosh(l_α*/2)`, `y = 2 cosh(l_β*/2)`
/// and `z = xy/2 + 2i tanh d`, the Markov root with `ℑz ≥ 0`.
pub fn bent_triple(a: BendingAngles) -> Result<TraceTriple> {
    let g = lengths_from_angles(a)?;
    let (sa, sb) = g.half_sinhs();
    let x = 2.0 * (1.0 + sa * sa).sqrt();
    let y = 2.0 * (1.0 + sb * sb).sqrt();
    Ok(TraceTriple {
        x: x.into(),
        y: y.into(),
        z: Complex64::new(x * y / 2.0, 2.0 * g.d.tanh()),
    })
}

/// The marked group bent along `α` and `β` by `a`, in the normal form of
/// [`crate::ptorus::group_from_triple`].
///
/// The entries are written out directly: with `m = e^{l_α*/2}`, `B` has
/// diagonal `y/2 ± i tanh d / s_α` and off-diagonal `∓r` with
/// `r² = −(s_β² + tanh² d / s_α²)`, which avoids cancelling `z` against
/// `y/m` and `1` against `ps`.
pub fn group_from_bending(a: BendingAngles) -> Result<MarkedGroup> {
    let g = lengths_from_angles(a)?;
    let (sa, sb) = g.half_sinhs();
    let m = (g.l_alpha_star / 2.0).exp();
    let y = 2.0 * (1.0 + sb * sb).sqrt();
    let t = g.d.tanh() / sa;
    let p = Complex64::new(y / 2.0, t);
    let s = Complex64::new(y / 2.0, -t);
    // 1 − ps = −(s_β² + t²), so r is purely imaginary.
    let r = Complex64::new(0.0, (sb * sb + t * t).sqrt());
    let zero = Complex64::new(0.0, 0.0);
    Ok(MarkedGroup {
        a: MoebiusMap::from_raw(m.into(), zero, zero, (1.0 / m).into()),
        b: MoebiusMap::from_raw(p, -r, r, s),
    })
}

/// Core geometry along the degenerating family `θ_β = θ_α^k`.
pub fn divergence_profile(theta_alpha: f64, k: f64) -> Result<CoreGeometry> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InconsistentInputs(format!("exponent k = {k}")));
    }
    lengths_from_angles(BendingAngles::new(theta_alpha, theta_alpha.powf(k))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::h3geom::complex_distance;
    use crate::ptorus::{group_from_triple, markov_z, Branch, COMMUTATOR_TOL};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    /// Plain textbook evaluation, used as an oracle.
    fn naive(a: BendingAngles) -> (f64, f64, f64) {
        let sa = (a.theta_beta / 2.0).sin() / (a.theta_alpha / 2.0).tan();
        let sb = (a.theta_alpha / 2.0).sin() / (a.theta_beta / 2.0).tan();
        (
            2.0 * sa.asinh(),
            2.0 * sb.asinh(),
            (1.0 / (sa * sb)).acosh(),
        )
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn right_angle_example() {
        let g = lengths_from_angles(BendingAngles::equal(FRAC_PI_2).unwrap()).unwrap();
        let expected = 2.0 * (SQRT_2 / 2.0).asinh();
        assert!((g.l_alpha_star - expected).abs() < 1e-14);
        assert!((g.l_alpha_star - 1.31696).abs() < 1e-5);
        assert!((g.d - 2f64.acosh()).abs() < 1e-14);
        assert_eq!(g.l_alpha_star, g.l_beta_star);
    }

    #[test]
    fn small_equal_angles_approach_fold() {
        let g = lengths_from_angles(BendingAngles::equal(1e-6).unwrap()).unwrap();
        assert!((g.l_alpha_star - 2.0 * 1f64.asinh()).abs() < 1e-11);
        assert!(g.d < 1e-5);
        assert_eq!(g.l_alpha_star, g.l_beta_star);
    }

    #[test]
    fn matches_naive_evaluation() {
        for &ta in &log_grid(0.05, 3.0, 12) {
            for &tb in &log_grid(0.05, 3.0, 12) {
                let a = BendingAngles::new(ta, tb).unwrap();
                let g = lengths_from_angles(a).unwrap();
                let (la, lb, d) = naive(a);
                assert!((g.l_alpha_star - la).abs() < 1e-12 * la.max(1.0));
                assert!((g.l_beta_star - lb).abs() < 1e-12 * lb.max(1.0));
                assert!((g.d - d).abs() < 1e-9, "{ta} {tb}: {} vs {d}", g.d);
            }
        }
    }

    #[test]
    fn angle_domain() {
        for (ta, tb) in [(0.0, 1.0), (1.0, PI), (-0.1, 1.0), (f64::NAN, 1.0)] {
            assert!(matches!(
                lengths_from_angles(BendingAngles {
                    theta_alpha: ta,
                    theta_beta: tb
                }),
                Err(Error::InfeasibleAngles { .. })
            ));
        }
    }

    #[test]
    fn inverse_examples() {
        let fold = 2.0 * 1f64.asinh();
        assert!(matches!(
            angles_from_lengths(fold, fold),
            Err(Error::InfeasibleLengths { .. })
        ));
        assert!(matches!(
            angles_from_lengths(3.0, 3.0),
            Err(Error::InfeasibleLengths { product }) if product > 1.0
        ));
        let l = 2.0 * (SQRT_2 / 2.0).asinh();
        let a = angles_from_lengths(l, l).unwrap();
        assert!((a.theta_alpha - FRAC_PI_2).abs() < 1e-14);
        assert!((a.theta_beta - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn round_trip_on_grid() {
        let grid = log_grid(0.01, 3.0, 30);
        for &ta in &grid {
            for &tb in &grid {
                let a = BendingAngles::new(ta, tb).unwrap();
                let g = lengths_from_angles(a).unwrap();
                let b = angles_from_lengths(g.l_alpha_star, g.l_beta_star).unwrap();
                assert!((b.theta_alpha - ta).abs() <= 1e-10, "{ta} {tb}");
                assert!((b.theta_beta - tb).abs() <= 1e-10, "{ta} {tb}");
                assert!(g.product_residual() <= 1e-10);
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let a = BendingAngles::equal(FRAC_PI_2).unwrap();
        let g = lengths_from_angles(a).unwrap();
        let m = boundary_metrics(&g, a).unwrap();
        assert!((m.l_beta_plus - 2.0 * SQRT_2.asinh()).abs() < 1e-14);
        assert!((m.l_beta_plus - 2.29243).abs() < 1e-5);
        assert_eq!(m.l_alpha_plus, g.l_alpha_star);
        assert_eq!(m.l_beta_minus, g.l_beta_star);
        // sinh d = √3 and coth(l_β*/2)·tan(π/4) = √3 · 1.
        let coth = 1.0 / (g.l_beta_star / 2.0).tanh();
        assert!((g.d.sinh() - 3f64.sqrt()).abs() < 1e-14);
        assert!((coth * FRAC_PI_4.tan() - 3f64.sqrt()).abs() < 1e-14);
        assert!(boundary_residual(&g, a, &m) < 1e-14);
        assert!((m.gap_beta - (m.l_beta_plus - m.l_beta_minus)).abs() < 1e-14);
    }

    #[test]
    fn flat_geometry_has_no_gap() {
        let g = CoreGeometry {
            l_alpha_star: 1.5,
            l_beta_star: 2.0,
            d: 0.0,
        };
        let (sa, sb) = g.half_sinhs();
        let (lb, gap) = lift(sb, 0.0);
        assert_eq!(gap, 0.0);
        assert!((lb - 2.0).abs() < 1e-15);
        let (la, _) = lift(sa, 0.0);
        assert!((la - 1.5).abs() < 1e-15);
    }

    #[test]
    fn inconsistent_metrics_rejected() {
        let a = BendingAngles::equal(1.0).unwrap();
        let mut g = lengths_from_angles(a).unwrap();
        g.d += 1e-3;
        assert!(matches!(
            boundary_metrics(&g, a),
            Err(Error::InconsistentInputs(_))
        ));
        let g = lengths_from_angles(a).unwrap();
        let other = BendingAngles::new(1.0, 1.1).unwrap();
        assert!(matches!(
            boundary_metrics(&g, other),
            Err(Error::InconsistentInputs(_))
        ));
    }

    #[test]
    fn bent_group_right_angle() {
        let a = BendingAngles::equal(FRAC_PI_2).unwrap();
        let grp = group_from_bending(a).unwrap();
        let t = grp.triple();
        assert!((t.x.re - 6f64.sqrt()).abs() < 1e-14 && t.x.im == 0.0);
        assert_eq!(t.x, t.y);
        let cd = complex_distance(&grp.a.axis().unwrap(), &grp.b.axis().unwrap()).unwrap();
        assert!((cd.rho - 2f64.acosh()).abs() < 1e-12, "{cd:?}");
        assert!((cd.phi - FRAC_PI_2).abs() < 1e-12, "{cd:?}");
        assert!((grp.commutator_trace() + 2.0).norm() < 1e-12);
    }

    #[test]
    fn bent_triple_is_upper_markov_root() {
        for (ta, tb) in [(0.3, 0.7), (1.2, 2.5), (2.9, 0.05)] {
            let a = BendingAngles::new(ta, tb).unwrap();
            let t = bent_triple(a).unwrap();
            let z = markov_z(t.x, t.y, Branch::Plus);
            assert!((z - t.z).norm() < 1e-12 * t.scale());
            assert!(t.z.im > 0.0);
            let g = group_from_bending(a).unwrap();
            let back = g.triple();
            assert!((back.z - t.z).norm() < 1e-12 * t.scale());
            assert!((back.x - t.x).norm() < 1e-13 * t.x.norm());
            assert!((back.y - t.y).norm() < 1e-13 * t.y.norm());
        }
    }

    #[test]
    fn mirror_branch_flips_crossing_angle() {
        let a = BendingAngles::new(0.8, 1.3).unwrap();
        let g = lengths_from_angles(a).unwrap();
        let mut t = bent_triple(a).unwrap();
        t.z = t.z.conj();
        let grp = group_from_triple(&t).unwrap();
        let cd = complex_distance(&grp.a.axis().unwrap(), &grp.b.axis().unwrap()).unwrap();
        assert!((cd.rho - g.d).abs() < 1e-10);
        assert!((cd.phi + FRAC_PI_2).abs() < 1e-10, "{cd:?}");
    }

    #[test]
    fn tiny_bending_is_near_fold_point() {
        let t = bent_triple(BendingAngles::equal(1e-4).unwrap()).unwrap();
        let f = 2.0 * SQRT_2;
        assert!((t.x - f).norm() < 1e-7);
        assert!((t.y - f).norm() < 1e-7);
        assert!((t.z.re - 4.0).abs() < 1e-7);
        // The imaginary part is 2 tanh d, first order in the angle.
        let d = lengths_from_angles(BendingAngles::equal(1e-4).unwrap())
            .unwrap()
            .d;
        assert!((t.z.im - 2.0 * d.tanh()).abs() < 1e-18);
        assert!((t.z.im - SQRT_2 * 1e-4).abs() < 1e-11);
        assert_eq!(t.x, t.y);
    }

    #[test]
    fn divergence_examples() {
        let g = divergence_profile(1e-2, 1.5).unwrap();
        let sb = (g.l_beta_star / 2.0).sinh();
        let oracle = 0.005f64.sin() / 0.0005f64.tan();
        assert!((sb - oracle).abs() < 1e-10 * oracle);
        assert!((sb - 10.0).abs() < 0.1);
        let g = divergence_profile(1e-3, 1.5).unwrap();
        assert!(g.cosh_d_minus_one() <= 1e-4);
        let g1 = divergence_profile(0.3, 1.0).unwrap();
        assert_eq!(
            g1,
            lengths_from_angles(BendingAngles::equal(0.3).unwrap()).unwrap()
        );
    }

    #[test]
    fn degeneration_is_monotone() {
        for k in [1.2, 1.5, 2.0, 3.0] {
            let mut prev = 0.0;
            for &t in log_grid(1e-3, 0.5, 40).iter().rev() {
                let g = divergence_profile(t, k).unwrap();
                assert!(g.l_beta_star > prev, "k = {k}, θ = {t}");
                prev = g.l_beta_star;
            }
        }
    }

    proptest! {
        #[test]
        fn core_identities(ta in 1e-3f64..3.1, tb in 1e-3f64..3.1) {
            let a = BendingAngles::new(ta, tb).unwrap();
            let g = lengths_from_angles(a).unwrap();
            prop_assert!(g.product_residual() <= 1e-10);
            let m = boundary_metrics(&g, a).unwrap();
            prop_assert!(boundary_residual(&g, a, &m) <= 1e-9);
            prop_assert!(m.gap_alpha >= 0.0 && m.gap_beta >= 0.0);
            let sw = lengths_from_angles(a.swapped()).unwrap();
            prop_assert!((sw.l_alpha_star - g.l_beta_star).abs() <= 1e-14 * g.l_beta_star.max(1.0));
        }

        #[test]
        fn bent_axes_are_perpendicular_at_distance_d(ta in 0.01f64..3.0, tb in 0.01f64..3.0) {
            let a = BendingAngles::new(ta, tb).unwrap();
            let g = lengths_from_angles(a).unwrap();
            let grp = group_from_bending(a).unwrap();
            let cd = complex_distance(&grp.a.axis().unwrap(), &grp.b.axis().unwrap()).unwrap();
            prop_assert!((cd.rho - g.d).abs() <= 1e-9, "{:?} vs {}", cd, g.d);
            prop_assert!((cd.phi - FRAC_PI_2).abs() <= 1e-9, "{:?}", cd);
            let scale = grp.triple().scale();
            prop_assert!((grp.commutator_trace() + 2.0).norm() <= COMMUTATOR_TOL * scale);
        }
    }
}
