use crate::bendsolve::{
    bent_triple, boundary_metrics, boundary_residual, divergence_profile, lengths_from_angles,
    BendingAngles,
};
use crate::error::{Error, Result};
use crate::minima::{kerckhoff_minimum, Weights};

/// Default θ range and resolution.
pub const DEFAULT_THETA_MIN: f64 = 1e-3;
pub const DEFAULT_THETA_MAX: f64 = 1e-1;
pub const DEFAULT_THETA_POINTS: usize = 20;

/// One row of a θ-sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub theta: f64,
    pub theta_alpha: f64,
    pub theta_beta: f64,
    pub l_alpha_star: f64,
    pub l_beta_star: f64,
    pub d: f64,
    pub l_beta_plus: f64,
    pub l_alpha_minus: f64,
    pub gap_alpha: f64,
    pub gap_beta: f64,
    pub dist_to_minimum: f64,
    pub x: f64,
    pub y: f64,
    pub re_z: f64,
    pub im_z: f64,
}

impl SweepRecord {
    pub const HEADER: [&'static str; 15] = [
        "theta",
        "theta_alpha",
        "theta_beta",
        "l_alpha_star",
        "l_beta_star",
        "d",
        "l_beta_plus",
        "l_alpha_minus",
        "gap_alpha",
        "gap_beta",
        "dist_to_minimum",
        "x",
        "y",
        "re_z",
        "im_z",
    ];

    /// Fields in [`Self::HEADER`] order.
    pub fn values(&self) -> [f64; 15] {
        [
            self.theta,
            self.theta_alpha,
            self.theta_beta,
            self.l_alpha_star,
            self.l_beta_star,
            self.d,
            self.l_beta_plus,
            self.l_alpha_minus,
            self.gap_alpha,
            self.gap_beta,
            self.dist_to_minimum,
            self.x,
            self.y,
            self.re_z,
            self.im_z,
        ]
    }

    /// The record for angles `(a·θ, b·θ)`, measured against the minimum
    /// lengths `target = (l_α(M), l_β(M))`.
    pub fn compute(w: Weights, theta: f64, target: (f64, f64)) -> Result<Self> {
        let a = BendingAngles::scaled(w.a(), w.b(), theta)?;
        let g = lengths_from_angles(a)?;
        let m = boundary_metrics(&g, a)?;
        let t = bent_triple(a)?;
        Ok(Self {
            theta,
            theta_alpha: a.theta_alpha,
            theta_beta: a.theta_beta,
            l_alpha_star: g.l_alpha_star,
            l_beta_star: g.l_beta_star,
            d: g.d,
            l_beta_plus: m.l_beta_plus,
            l_alpha_minus: m.l_alpha_minus,
            gap_alpha: m.gap_alpha,
            gap_beta: m.gap_beta,
            dist_to_minimum: (g.l_alpha_star - target.0).abs() + (g.l_beta_star - target.1).abs(),
            x: t.x.re,
            y: t.y.re,
            re_z: t.z.re,
            im_z: t.z.im,
        })
    }

    /// Re-derives the product relation and the boundary relations from the
    /// stored fields. Returns `(product residual, boundary residual)`.
    pub fn residuals(&self) -> Result<(f64, f64)> {
        let a = BendingAngles::new(self.theta_alpha, self.theta_beta)?;
        let g = crate::bendsolve::CoreGeometry {
            l_alpha_star: self.l_alpha_star,
            l_beta_star: self.l_beta_star,
            d: self.d,
        };
        let m = crate::bendsolve::BoundaryMetrics {
            l_alpha_plus: self.l_alpha_star,
            l_beta_plus: self.l_beta_plus,
            l_alpha_minus: self.l_alpha_minus,
            l_beta_minus: self.l_beta_star,
            gap_alpha: self.gap_alpha,
            gap_beta: self.gap_beta,
        };
        Ok((g.product_residual(), boundary_residual(&g, a, &m)))
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

pub fn default_theta_grid() -> Vec<f64> {
    log_grid(DEFAULT_THETA_MIN, DEFAULT_THETA_MAX, DEFAULT_THETA_POINTS)
}

fn at_theta<T>(theta: f64, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Sweep {
        theta,
        source: Box::new(e),
    })
}

/// One record per `θ`, bending by `(a·θ, b·θ)`.
pub fn sweep_theta(w: Weights, theta_grid: &[f64]) -> Result<Vec<SweepRecord>> {
    let m = kerckhoff_minimum(w)?;
    theta_grid
        .iter()
        .map(|&t| at_theta(t, SweepRecord::compute(w, t, (m.l_alpha, m.l_beta))))
        .collect()
}

/// Weight schedule for [`diagonal_sweep_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Drift {
    /// `a_n = a(1 + 1/n)`, `b_n = b(1 − 1/(2n))`.
    #[default]
    Standard,
    /// `a_n = a`, `b_n = b`.
    Constant,
}

/// Bending by `(a_n θ_n, b_n θ_n)` with `θ_n = 1/n²` and drifting weights,
/// measured against the minimum for the limiting weights `(a, b)`.
pub fn diagonal_sweep(w: Weights, n_grid: &[u64]) -> Result<Vec<SweepRecord>> {
    diagonal_sweep_with(w, n_grid, Drift::Standard)
}

pub fn diagonal_sweep_with(w: Weights, n_grid: &[u64], drift: Drift) -> Result<Vec<SweepRecord>> {
    let m = kerckhoff_minimum(w)?;
    n_grid
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let theta = 1.0 / (nf * nf);
            let wn = match drift {
                Drift::Standard => Weights::new(w.a() * (1.0 + 1.0 / nf), w.b() * (1.0 - 0.5 / nf)),
                Drift::Constant => Ok(w),
            };
            at_theta(
                theta,
                wn.and_then(|wn| SweepRecord::compute(wn, theta, (m.l_alpha, m.l_beta))),
            )
        })
        .collect()
}

/// `n` log-spaced distinct integers from `lo` to `hi`.
pub fn integer_log_grid(lo: u64, hi: u64, n: usize) -> Vec<u64> {
    let mut v: Vec<u64> = log_grid(lo as f64, hi as f64, n)
        .into_iter()
        .map(|x| x.round() as u64)
        .collect();
    v.dedup();
    v
}

/// One point of the degenerating family `θ_β = θ_α^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceRecord {
    pub theta_alpha: f64,
    pub theta_beta: f64,
    pub l_alpha_star: f64,
    pub l_beta_star: f64,
    pub d: f64,
    pub sinh_half_l_beta: f64,
    pub cosh_d_minus_one: f64,
}

impl DivergenceRecord {
    pub const HEADER: [&'static str; 7] = [
        "theta_alpha",
        "theta_beta",
        "l_alpha_star",
        "l_beta_star",
        "d",
        "sinh_half_l_beta",
        "cosh_d_minus_one",
    ];

    pub fn values(&self) -> [f64; 7] {
        [
            self.theta_alpha,
            self.theta_beta,
            self.l_alpha_star,
            self.l_beta_star,
            self.d,
            self.sinh_half_l_beta,
            self.cosh_d_minus_one,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceSweep {
    pub k: f64,
    pub records: Vec<DivergenceRecord>,
    /// `ln sinh(l_β*/2)` against `ln θ_α`; the expected slope is `1 − k`.
    pub fit: SlopeFit,
    /// `cosh d − 1` at the smallest `θ_α`.
    pub cosh_d_minus_one_at_min: f64,
}

pub fn divergence_sweep(theta_grid: &[f64], k: f64) -> Result<DivergenceSweep> {
    let records = theta_grid
        .iter()
        .map(|&t| {
            at_theta(
                t,
                divergence_profile(t, k).map(|g| DivergenceRecord {
                    theta_alpha: t,
                    theta_beta: t.powf(k),
                    l_alpha_star: g.l_alpha_star,
                    l_beta_star: g.l_beta_star,
                    d: g.d,
                    sinh_half_l_beta: g.half_sinhs().1,
                    cosh_d_minus_one: g.cosh_d_minus_one(),
                }),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = records.iter().map(|r| r.theta_alpha).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.sinh_half_l_beta).collect();
    let fit = fit_slope(&xs, &ys)?;
    let cosh_d_minus_one_at_min = records
        .iter()
        .min_by(|a, b| a.theta_alpha.total_cmp(&b.theta_alpha))
        .map(|r| r.cosh_d_minus_one)
        .unwrap_or(f64::NAN);
    Ok(DivergenceSweep {
        k,
        records,
        fit,
        cosh_d_minus_one_at_min,
    })
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    let n = xs.len().min(ys.len());
    if n < 5 || xs.len() != ys.len() {
        return Err(Error::InsufficientPoints(n));
    }
    if let Some(i) = xs.iter().zip(ys).position(|(&x, &y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::NonPositiveData(i));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientPoints(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
        n_points: n,
    })
}
