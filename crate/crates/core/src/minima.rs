//! Minimizing `a·l_α + b·l_β` over the Teichmüller space of the punctured
//! torus.
//!
//! In trace coordinates the objective depends only on `(x, y)` and increases
//! in each, while the Fuchsian region is `x²y² ≥ 4(x² + y²)`. The minimum
//! therefore sits on the fold `x²y² = 4(x² + y²)`, where `y = 2x/√(x² − 4)`,
//! equivalently `sinh(l_α/2)·sinh(l_β/2) = 1`. Along the fold the problem is
//! one-dimensional and strictly unimodal, with minimum at
//! `sinh(l_α/2) = b/a`.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::brent::BrentOpt;

use crate::bendsolve::{lengths_from_angles, BendingAngles};
use crate::error::{Error, Result};
use crate::ptorus::{trace_to_length, Branch, FuchsianPoint};
use crate::quakebend::{length_derivative, Curve, DEFAULT_STEP};

/// Iteration cap for each Brent stage.
pub const MAX_ITERATIONS: u64 = 200;
const MAX_EXPANSIONS: usize = 200;
const GOLDEN: f64 = 1.618_033_988_749_895;

/// Positive weights on `α` and `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    a: f64,
    b: f64,
}

impl Weights {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidWeights { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    /// `(a, t·b)`.
    pub fn scale_b(&self, t: f64) -> Result<Self> {
        Self::new(self.a, t * self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimumReport {
    pub point: FuchsianPoint,
    pub l_alpha: f64,
    pub l_beta: f64,
    pub value: f64,
    /// Largest `|a ∂l_α/∂t_ξ + b ∂l_β/∂t_ξ|` over the earthquakes along
    /// `α`, `β` and `γ = αβ`.
    pub criticality: f64,
    pub iterations: u64,
}

/// `a·l_α + b·l_β`.
pub fn length_value(p: &FuchsianPoint, w: Weights) -> f64 {
    w.a * p.l_alpha() + w.b * p.l_beta()
}

/// `(2 asinh(b/a), 2 asinh(a/b))`.
pub fn closed_form_minimum(w: Weights) -> (f64, f64) {
    (2.0 * (w.b / w.a).asinh(), 2.0 * (w.a / w.b).asinh())
}

/// Point on the fold with `tr A = x`.
pub fn fold_point(x: f64) -> Result<FuchsianPoint> {
    let s = half_sinh(x);
    if !(s > 0.0) {
        return Err(Error::InfeasiblePoint { x, y: f64::NAN });
    }
    let y = 2.0 * (1.0 + 1.0 / (s * s)).sqrt();
    FuchsianPoint::new(x, y, Branch::Plus)
}

/// `sinh(l/2)` for a trace `x`.
fn half_sinh(x: f64) -> f64 {
    ((x - 2.0) * (x + 2.0)).sqrt() / 2.0
}

/// Trace with `sinh(l/2) = s`.
fn trace_of_half_sinh(s: f64) -> f64 {
    2.0 * (1.0 + s * s).sqrt()
}

/// `asinh u − asinh v` without cancellation, given `u² − v²`.
fn asinh_diff(u: f64, v: f64, u2_minus_v2: f64) -> f64 {
    (u2_minus_v2 / (u * (1.0 + v * v).sqrt() + v * (1.0 + u * u).sqrt())).asinh()
}

/// The objective along the fold as a function of `x`.
struct FoldObjective {
    w: Weights,
}

impl CostFunction for FoldObjective {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, argmin::core::Error> {
        let s = half_sinh(*x);
        Ok(2.0 * self.w.a * s.asinh() + 2.0 * self.w.b * s.recip().asinh())
    }
}

/// The objective minus its value at `x0`, evaluated term by term so that
/// differences far below the objective's own rounding level stay resolved.
struct ShiftedObjective {
    w: Weights,
    x0: f64,
}

impl CostFunction for ShiftedObjective {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(*x))
    }
}

impl ShiftedObjective {
    fn eval(&self, x: f64) -> f64 {
        let (u, u0) = (half_sinh(x), half_sinh(self.x0));
        let du2 = (x - self.x0) * (x + self.x0) / 4.0;
        let (v, v0) = (u.recip(), u0.recip());
        let dv2 = -du2 / (u * u * u0 * u0);
        2.0 * self.w.a * asinh_diff(u, u0, du2) + 2.0 * self.w.b * asinh_diff(v, v0, dv2)
    }
}

/// Minimum of `a·l_α + b·l_β`, bracketing from the symmetric fold point.
pub fn kerckhoff_minimum(w: Weights) -> Result<MinimumReport> {
    kerckhoff_minimum_from(w, 2.0 * std::f64::consts::SQRT_2)
}

/// As [`kerckhoff_minimum`], with the bracket search started at trace `x0`.
pub fn kerckhoff_minimum_from(w: Weights, x0: f64) -> Result<MinimumReport> {
    if !(x0 > 2.0 && x0.is_finite()) {
        return Err(Error::InfeasiblePoint { x: x0, y: f64::NAN });
    }
    let (lo, hi) = bracket(w, half_sinh(x0).ln())?;
    let (x1, it1) = brent(
        FoldObjective { w },
        trace_of_half_sinh(lo.exp()),
        trace_of_half_sinh(hi.exp()),
    )?;

    let shifted = ShiftedObjective { w, x0: x1 };
    let mut delta = 1e-6 * (x1 - 2.0);
    let mut expansions = 0;
    while !(shifted.eval(x1 - delta) > 0.0 && shifted.eval(x1 + delta) > 0.0) {
        delta *= 4.0;
        expansions += 1;
        if expansions > 20 || x1 - delta <= 2.0 {
            return Err(Error::NoBracket {
                iterations: expansions,
            });
        }
    }
    let (x, it2) = brent(shifted, x1 - delta, x1 + delta)?;

    let point = fold_point(x)?;
    let l_alpha = trace_to_length(point.x);
    let l_beta = trace_to_length(point.y);
    Ok(MinimumReport {
        point,
        l_alpha,
        l_beta,
        value: w.a * l_alpha + w.b * l_beta,
        criticality: criticality(&point, w)?,
        iterations: it1 + it2,
    })
}

/// `max_ξ |a ∂l_α/∂t_ξ + b ∂l_β/∂t_ξ|` over `ξ ∈ {α, β, γ}`.
pub fn criticality(p: &FuchsianPoint, w: Weights) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for xi in Curve::ALL {
        let da = length_derivative(p, xi, Curve::Alpha, DEFAULT_STEP)?;
        let db = length_derivative(p, xi, Curve::Beta, DEFAULT_STEP)?;
        worst = worst.max((w.a * da + w.b * db).abs());
    }
    Ok(worst)
}

/// Golden-ratio bracket expansion in `s = ln sinh(l_α/2)` along the fold.
fn bracket(w: Weights, s0: f64) -> Result<(f64, f64)> {
    let f = |s: f64| 2.0 * w.a * s.exp().asinh() + 2.0 * w.b * (-s).exp().asinh();
    let (mut a, mut b) = (s0, s0 + 0.5);
    let (mut fa, mut fb) = (f(a), f(b));
    if fb > fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + GOLDEN * (b - a);
    let mut fc = f(c);
    for _ in 0..MAX_EXPANSIONS {
        if fc >= fb {
            return Ok(if a < c { (a, c) } else { (c, a) });
        }
        a = b;
        b = c;
        fb = fc;
        c = b + GOLDEN * (b - a);
        fc = f(c);
    }
    Err(Error::NoBracket {
        iterations: MAX_EXPANSIONS,
    })
}

fn brent<F>(f: F, lo: f64, hi: f64) -> Result<(f64, u64)>
where
    F: CostFunction<Param = f64, Output = f64>,
{
    let solver = BrentOpt::new(lo, hi).set_tolerance(1e-15, 1e-15);
    let res = Executor::new(f, solver)
        .configure(|s| s.max_iters(MAX_ITERATIONS))
        .run()
        .map_err(|e| Error::InvariantViolated(format!("minimizer failed: {e}")))?;
    let state = res.state();
    let x = state
        .get_best_param()
        .copied()
        .ok_or(Error::NoBracket { iterations: 0 })?;
    Ok((x, state.get_iter()))
}

/// Minima of `a·l_α + t·b·l_β` along a grid of `t`.
pub fn line_of_minima(w: Weights, t_grid: &[f64]) -> Result<Vec<MinimumReport>> {
    t_grid
        .iter()
        .map(|&t| kerckhoff_minimum(w.scale_b(t)?))
        .collect()
}

/// How far the bent group at small `θ` is from the minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitResidual {
    /// `|l_α*(θ) − l_α(M)| + |l_β*(θ) − l_β(M)|`.
    pub residual: f64,
    /// Axis distance `d(θ)`.
    pub d: f64,
    pub l_alpha_star: f64,
    pub l_beta_star: f64,
}

/// Compares the core lengths at angles `(aθ, bθ)` with the minimum for
/// `(a, b)`.
pub fn limit_matches_minimum(w: Weights, theta: f64) -> Result<LimitResidual> {
    let g = lengths_from_angles(BendingAngles::scaled(w.a, w.b, theta)?)?;
    let m = kerckhoff_minimum(w)?;
    Ok(LimitResidual {
        residual: (g.l_alpha_star - m.l_alpha).abs() + (g.l_beta_star - m.l_beta).abs(),
        d: g.d,
        l_alpha_star: g.l_alpha_star,
        l_beta_star: g.l_beta_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    fn w(a: f64, b: f64) -> Weights {
        Weights::new(a, b).unwrap()
    }

    /// Dense search over feasible `(x, y)`, parametrized by
    /// `(sinh(l_α/2), sinh(l_β/2))` on log grids; returns the best lengths.
    fn grid_search(w: Weights, n: usize) -> (f64, f64) {
        let s = |i: usize| 1e-2 * 1e4f64.powf(i as f64 / (n - 1) as f64);
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let (sa, sb) = (s(i), s(j));
                let (x, y) = (trace_of_half_sinh(sa), trace_of_half_sinh(sb));
                if x * x * y * y < 4.0 * (x * x + y * y) {
                    continue;
                }
                let (la, lb) = (2.0 * sa.asinh(), 2.0 * sb.asinh());
                let v = w.a * la + w.b * lb;
                if v < best.0 {
                    best = (v, la, lb);
                }
            }
        }
        (best.1, best.2)
    }

    #[test]
    fn length_value_examples() {
        let p = FuchsianPoint::new(3.0, 3.0, Branch::Plus).unwrap();
        assert!((length_value(&p, w(1.0, 1.0)) - 4.0 * 1.5f64.acosh()).abs() < 1e-14);
        assert!((length_value(&p, w(1.0, 1.0)) - 3.84970).abs() < 1e-5);
        let f = FuchsianPoint::new(2.0 * SQRT_2, 2.0 * SQRT_2, Branch::Plus).unwrap();
        assert!((length_value(&f, w(1.0, 1.0)) - 4.0 * 1f64.asinh()).abs() < 1e-14);
        assert!((length_value(&f, w(1.0, 1.0)) - 3.52549).abs() < 1e-5);
        assert_eq!(
            length_value(&p, w(2.0, 2.0)),
            2.0 * length_value(&p, w(1.0, 1.0))
        );
    }

    #[test]
    fn grid_search_confirms_closed_form() {
        for (a, b) in [(1.0, 1.0), (1.0, 2.0), (3.0, 1.0), (0.4, 2.5)] {
            let (la, lb) = grid_search(w(a, b), 801);
            let (ca, cb) = closed_form_minimum(w(a, b));
            // Grid spacing in ln sinh(l/2) is ~1.2e-2.
            assert!(
                (la - ca).abs() < 3e-2 && (lb - cb).abs() < 3e-2,
                "{a} {b}: {la} {lb}"
            );
        }
    }

    #[test]
    fn closed_form_lies_on_fold() {
        let (la, lb) = closed_form_minimum(w(1.0, 2.0));
        let x = 2.0 * (la / 2.0).cosh();
        let y = 2.0 * (lb / 2.0).cosh();
        assert!((y - 2.0 * x / (x * x - 4.0).sqrt()).abs() < 1e-14);
        assert!((y - 2.0 * (1.0 + 0.25f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn minimum_examples() {
        let m = kerckhoff_minimum(w(1.0, 1.0)).unwrap();
        assert!((m.l_alpha - 2.0 * 1f64.asinh()).abs() < 1e-12);
        assert!((m.l_beta - 1.76275).abs() < 1e-5);
        assert!((m.point.x - 2.0 * SQRT_2).abs() < 1e-10);
        assert!((m.point.z() - 4.0).abs() < 1e-7);
        assert!(m.iterations <= 2 * MAX_ITERATIONS);

        let m = kerckhoff_minimum(w(1.0, 2.0)).unwrap();
        assert!((m.l_alpha - 2.88727).abs() < 1e-5 && (m.l_beta - 0.96242).abs() < 1e-5);
        let (ca, cb) = closed_form_minimum(w(1.0, 2.0));
        assert!((m.l_alpha - ca).abs() < 1e-10 && (m.l_beta - cb).abs() < 1e-10);

        let m7 = kerckhoff_minimum(w(7.0, 7.0)).unwrap();
        assert!((m7.point.x - 2.0 * SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn minimizer_matches_closed_form_on_random_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let ww = w(rng.random_range(0.2..5.0), rng.random_range(0.2..5.0));
            let m = kerckhoff_minimum(ww).unwrap();
            let (ca, cb) = closed_form_minimum(ww);
            assert!((m.l_alpha - ca).abs() <= 1e-8 && (m.l_beta - cb).abs() <= 1e-8);
            let x_exact = trace_of_half_sinh(ww.b / ww.a);
            assert!(
                (m.point.x - x_exact).abs() <= 1e-10,
                "{ww:?}: {}",
                m.point.x - x_exact
            );
            assert!(
                m.criticality <= 1e-5 * (1.0 + m.value),
                "{ww:?}: {}",
                m.criticality
            );
        }
    }

    #[test]
    fn criticality_detects_non_minima() {
        let ww = w(1.0, 2.0);
        let off = fold_point(2.0 * SQRT_2).unwrap();
        assert!(criticality(&off, ww).unwrap() > 1e-2);
    }

    #[test]
    fn restarts_agree() {
        let ww = w(1.3, 0.7);
        let base = kerckhoff_minimum(ww).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let m = kerckhoff_minimum_from(ww, rng.random_range(2.01..40.0)).unwrap();
            assert!((m.point.x - base.point.x).abs() <= 1e-8);
            assert!((m.point.y - base.point.y).abs() <= 1e-8);
        }
    }

    #[test]
    fn swapping_weights_swaps_lengths() {
        let ww = w(1.0, 3.5);
        let (ca, cb) = closed_form_minimum(ww);
        assert_eq!(closed_form_minimum(ww.swapped()), (cb, ca));
        let m = kerckhoff_minimum(ww).unwrap();
        let s = kerckhoff_minimum(ww.swapped()).unwrap();
        assert!((m.l_alpha - s.l_beta).abs() <= 1e-8 && (m.l_beta - s.l_alpha).abs() <= 1e-8);
    }

    #[test]
    fn invalid_weights() {
        for (a, b) in [
            (0.0, 1.0),
            (1.0, -1.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(matches!(
                Weights::new(a, b),
                Err(Error::InvalidWeights { .. })
            ));
        }
    }

    #[test]
    fn line_of_minima_examples() {
        let ww = w(1.0, 1.0);
        let grid: Vec<f64> = (0..40).map(|i| 0.25 * 1.1f64.powi(i)).collect();
        let line = line_of_minima(ww, &grid).unwrap();
        let at_one = line_of_minima(ww, &[1.0]).unwrap();
        assert_eq!(at_one[0], kerckhoff_minimum(ww).unwrap());
        let four = line_of_minima(ww, &[4.0]).unwrap()[0];
        assert!(((four.l_alpha / 2.0).sinh() - 4.0).abs() < 1e-9);
        for (pair, t) in line.windows(2).zip(grid.windows(2)) {
            assert!(pair[1].l_alpha > pair[0].l_alpha);
            assert!(pair[1].l_beta < pair[0].l_beta);
            // Both lengths are 2-Lipschitz in ln t.
            let dt = (t[1] / t[0]).ln();
            assert!((pair[1].l_alpha - pair[0].l_alpha).abs() <= 2.0 * dt);
            assert!((pair[1].l_beta - pair[0].l_beta).abs() <= 2.0 * dt);
        }
    }

    #[test]
    fn limit_examples() {
        for (a, b) in [(1.0, 1.0), (1.0, 2.0)] {
            let r = limit_matches_minimum(w(a, b), 1e-5).unwrap();
            assert!(r.residual <= 1e-4, "{a} {b}: {}", r.residual);
        }
        for theta in [1e-2, 1e-3, 1e-4] {
            let r = limit_matches_minimum(w(1.0, 1.0), theta).unwrap();
            assert!(r.d <= 10.0 * theta);
        }
    }
}
