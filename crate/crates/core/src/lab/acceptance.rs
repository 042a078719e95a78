//! The acceptance suite: eleven numbered checks, each reduced to one
//! pass/fail line. Shared by the `verify` subcommand and the `acceptance`
//! test target.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bendsolve::{
    angles_from_lengths, boundary_metrics, group_from_bending, lengths_from_angles, BendingAngles,
};
use crate::error::{Error, Result};
use crate::h3geom::complex_distance;
use crate::lab::comparison::{check_polylines, check_quadrilaterals, check_triangles};
use crate::lab::render::{fit_circline, render, render_limit_set, ImageSpec};
use crate::lab::sweep::{
    default_theta_grid, diagonal_sweep, divergence_sweep, fit_slope, integer_log_grid, log_grid,
    sweep_theta,
};
use crate::minima::{closed_form_minimum, kerckhoff_minimum, Weights};
use crate::ptorus::{group_from_triple, Branch, FuchsianPoint, TraceTriple};
use crate::quakebend::{
    length_derivative, second_difference, twist_element, unbend_check, Curve, QuakebendParam,
    DEFAULT_STEP,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Weight pairs used by the rate and limit checks.
pub const WEIGHTS: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 2.0), (3.0, 1.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] {:>2} {}: {}",
            self.id, self.name, self.detail
        )
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, Check); 11] = [
    (1, "angle/length round trip", round_trip),
    (2, "axis complex distance", axis_distance),
    (3, "axis distance rate", distance_rate),
    (4, "boundary gap rate", gap_rate),
    (5, "small-angle limit is the minimum", limit_identification),
    (6, "unbending", unbending),
    (7, "divergence for unbalanced angles", divergence),
    (8, "diagonal convergence", diagonal),
    (9, "earthquake calculus", earthquake_calculus),
    (10, "comparison inequalities", comparison),
    (11, "limit-set renderer", renderer),
];

pub fn criterion_names() -> impl Iterator<Item = (u8, &'static str)> {
    CRITERIA.iter().map(|(id, name, _)| (*id, *name))
}

/// Runs one criterion; an error counts as a failure.
pub fn run_one(id: u8, seed: u64) -> Option<CriterionResult> {
    let (id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let (passed, detail) = match check(seed) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult {
        id: *id,
        name,
        passed,
        detail,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter_map(|(id, _, _)| run_one(*id, seed))
        .collect()
}

/// The 50×50 log-spaced angle grid on `[0.01, 3]²`.
pub fn angle_grid() -> Vec<BendingAngles> {
    let g = log_grid(0.01, 3.0, 50);
    g.iter()
        .flat_map(|&a| g.iter().map(move |&b| BendingAngles::new(a, b)))
        .collect::<Result<_>>()
        .expect("grid inside (0, π)")
}

fn round_trip(_: u64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for a in angle_grid() {
        let g = lengths_from_angles(a)?;
        let b = angles_from_lengths(g.l_alpha_star, g.l_beta_star)?;
        worst = worst
            .max((a.theta_alpha - b.theta_alpha).abs())
            .max((a.theta_beta - b.theta_beta).abs());
    }
    Ok((
        worst <= 1e-10,
        format!("max angle error {worst:.2e} (bound 1e-10)"),
    ))
}

fn axis_distance(_: u64) -> Result<(bool, String)> {
    let (mut re, mut im): (f64, f64) = (0.0, 0.0);
    for a in angle_grid() {
        let d = lengths_from_angles(a)?.d;
        let g = group_from_bending(a)?;
        let delta = complex_distance(&g.a.axis()?, &g.b.axis()?)?;
        re = re.max((delta.rho - d).abs());
        im = im.max((delta.phi - FRAC_PI_2).abs());
    }
    Ok((
        re <= 1e-9 && im <= 1e-9,
        format!("max |Re - d| {re:.2e}, max |Im - pi/2| {im:.2e} (bound 1e-9)"),
    ))
}

fn rate_line(label: &str, slope: f64, r2: f64) -> String {
    format!("{label} slope {slope:.4} r2 {r2:.6}")
}

fn distance_rate(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in WEIGHTS {
        let recs = sweep_theta(Weights::new(a, b)?, &default_theta_grid())?;
        let th: Vec<f64> = recs.iter().map(|r| r.theta).collect();
        let d: Vec<f64> = recs.iter().map(|r| r.d).collect();
        let f = fit_slope(&th, &d)?;
        ok &= (0.98..=1.02).contains(&f.slope) && f.r_squared >= 0.999;
        parts.push(rate_line(&format!("({a},{b})"), f.slope, f.r_squared));
    }
    Ok((ok, parts.join("; ")))
}

fn gap_rate(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in WEIGHTS {
        let recs = sweep_theta(Weights::new(a, b)?, &default_theta_grid())?;
        let th: Vec<f64> = recs.iter().map(|r| r.theta).collect();
        for (label, ys) in [
            (
                "alpha",
                recs.iter().map(|r| r.gap_alpha).collect::<Vec<_>>(),
            ),
            ("beta", recs.iter().map(|r| r.gap_beta).collect()),
        ] {
            let f = fit_slope(&th, &ys)?;
            ok &= (1.9..=2.1).contains(&f.slope) && f.r_squared >= 0.999;
            parts.push(rate_line(
                &format!("({a},{b}) {label}"),
                f.slope,
                f.r_squared,
            ));
        }
    }
    Ok((ok, parts.join("; ")))
}

/// Smallest `a l_α + b l_β` over a log grid of feasible
/// `(sinh(l_α/2), sinh(l_β/2))`, i.e. those with product at least 1.
fn brute_force_minimum(w: Weights, n: usize) -> (f64, f64, f64) {
    let s = |i: usize| 1e-2 * 1e4f64.powf(i as f64 / (n - 1) as f64);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let (sa, sb) = (s(i), s(j));
            if sa * sb < 1.0 {
                continue;
            }
            let (la, lb) = (2.0 * sa.asinh(), 2.0 * sb.asinh());
            let v = w.a() * la + w.b() * lb;
            if v < best.0 {
                best = (v, la, lb);
            }
        }
    }
    best
}

fn limit_identification(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let (mut limit, mut numeric, mut brute): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (a, b) in WEIGHTS {
        let w = Weights::new(a, b)?;
        let (ca, cb) = closed_form_minimum(w);
        let g = lengths_from_angles(BendingAngles::scaled(a, b, 1e-5)?)?;
        limit = limit.max((g.l_alpha_star - ca).abs() + (g.l_beta_star - cb).abs());
        let m = kerckhoff_minimum(w)?;
        numeric = numeric.max((m.l_alpha - ca).abs().max((m.l_beta - cb).abs()));
        let (bv, bla, blb) = brute_force_minimum(w, 801);
        let closed_value = a * ca + b * cb;
        // The closed form must not be beaten by any grid point, and the grid
        // optimum must sit next to it.
        ok &= closed_value <= bv + 1e-12;
        brute = brute.max((bla - ca).abs().max((blb - cb).abs()));
    }
    ok &= limit <= 1e-4 && numeric <= 1e-8 && brute <= 2e-2;
    Ok((
        ok,
        format!(
            "limit residual {limit:.2e} (bound 1e-4), minimizer vs closed form {numeric:.2e} \
             (bound 1e-8), grid argmin offset {brute:.2e}"
        ),
    ))
}

fn unbending(_: u64) -> Result<(bool, String)> {
    let (mut imag, mut len): (f64, f64) = (0.0, 0.0);
    let mut sign_ok = true;
    for a in angle_grid() {
        let u = unbend_check(a)?;
        let m = boundary_metrics(&lengths_from_angles(a)?, a)?;
        sign_ok &= u.bend == -a.theta_alpha;
        imag = imag.max(u.imag_residual);
        len = len.max((u.l_beta - m.l_beta_plus).abs());
    }
    Ok((
        sign_ok && imag <= 1e-9 && len <= 1e-9,
        format!(
            "bend -i*theta_alpha: {sign_ok}, max imaginary trace {imag:.2e}, \
             max |l_beta - l_beta_plus| {len:.2e} (bound 1e-9)"
        ),
    ))
}

fn divergence(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [1.5, 2.0] {
        let s = divergence_sweep(&default_theta_grid(), k)?;
        let err = (s.fit.slope - (1.0 - k)).abs();
        ok &= err <= 0.03 && s.cosh_d_minus_one_at_min <= 1e-4;
        parts.push(format!(
            "k={k}: slope {:.4} (expected {}), cosh d - 1 at 1e-3 {:.2e}",
            s.fit.slope,
            1.0 - k,
            s.cosh_d_minus_one_at_min
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn diagonal(_: u64) -> Result<(bool, String)> {
    let grid = integer_log_grid(100, 10_000, 30);
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in WEIGHTS {
        let recs = diagonal_sweep(Weights::new(a, b)?, &grid)?;
        let last = recs.last().map_or(f64::NAN, |r| r.dist_to_minimum);
        let monotone = recs
            .windows(2)
            .all(|p| p[1].dist_to_minimum < p[0].dist_to_minimum);
        ok &= last <= 1e-3 && monotone;
        parts.push(format!(
            "({a},{b}): {last:.2e} at n=1e4, monotone {monotone}"
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn random_fuchsian(rng: &mut ChaCha8Rng) -> FuchsianPoint {
    loop {
        let x = rng.random_range(2.2..6.0);
        let y = rng.random_range(2.2..6.0);
        let b = if rng.random_bool(0.5) {
            Branch::Plus
        } else {
            Branch::Minus
        };
        if let Ok(p) = FuchsianPoint::new(x, y, b) {
            if p.discriminant() > 1.0 {
                return p;
            }
        }
    }
}

fn earthquake_calculus(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut anti: f64 = 0.0;
    let mut anti_ok = true;
    let mut dehn: f64 = 0.0;
    for _ in 0..10 {
        let p = random_fuchsian(&mut rng);
        let ba = length_derivative(&p, Curve::Alpha, Curve::Beta, DEFAULT_STEP)?;
        let ab = length_derivative(&p, Curve::Beta, Curve::Alpha, DEFAULT_STEP)?;
        let e = (ba + ab).abs();
        anti_ok &= e <= 1e-5 * (1.0 + ba.abs());
        anti = anti.max(e / (1.0 + ba.abs()));
        let g = p.group()?;
        let c = twist_element(&g.a, QuakebendParam::new(g.a.complex_length()?)?)?;
        let lhs = c.compose(&g.b).raw_trace().norm();
        dehn = dehn.max((lhs - g.a.compose(&g.b).raw_trace().norm()).abs());
    }
    let classical = group_from_triple(&TraceTriple::real(3.0, 3.0, 3.0)?)?;
    let c = twist_element(
        &classical.a,
        QuakebendParam::new(classical.a.complex_length()?)?,
    )?;
    dehn = dehn.max(
        (c.compose(&classical.b).raw_trace().norm()
            - classical.a.compose(&classical.b).raw_trace().norm())
        .abs(),
    );
    let mut min_second = f64::INFINITY;
    for _ in 0..20 {
        let p = random_fuchsian(&mut rng);
        min_second = min_second.min(second_difference(&p, Curve::Alpha, Curve::Beta, 1e-2)?);
    }
    Ok((
        anti_ok && min_second > 0.0 && dehn <= 1e-10,
        format!(
            "antisymmetry {anti:.2e} (bound 1e-5 relative), min second difference \
             {min_second:.2e}, Dehn twist trace error {dehn:.2e} (bound 1e-10)"
        ),
    ))
}

fn comparison(seed: u64) -> Result<(bool, String)> {
    let t = check_triangles(seed, 10_000)?;
    let q = check_quadrilaterals(seed.wrapping_add(1), 10_000)?;
    let (c, h) = check_polylines(seed.wrapping_add(2), 1_000)?;
    let ok = [t, q, c, h].iter().all(|r| r.passed());
    let parts: Vec<String> = [t, q, c, h]
        .iter()
        .map(|r| {
            format!(
                "{} {}/{} ok (worst margin {:.2e})",
                r.name,
                r.cases - r.violations,
                r.cases,
                r.worst_margin
            )
        })
        .collect();
    Ok((ok, parts.join("; ")))
}

fn renderer(_: u64) -> Result<(bool, String)> {
    let spec = ImageSpec::default();
    let fuchsian = group_from_triple(&TraceTriple::real(3.0, 3.0, 3.0)?)?;
    let flat = fit_circline(&render(&fuchsian, &spec)?.points)?.residual;
    let bent = group_from_bending(BendingAngles::equal(FRAC_PI_4)?)?;
    let curved = fit_circline(&render(&bent, &spec)?.points)?.residual;

    let dir = std::env::temp_dir();
    let stem = format!("bendlab-verify-{}", std::process::id());
    let paths = [
        dir.join(format!("{stem}-1.ppm")),
        dir.join(format!("{stem}-2.ppm")),
    ];
    let mut bytes = Vec::new();
    for p in &paths {
        render_limit_set(&bent, &spec, p)?;
        bytes.push(std::fs::read(p)?);
        std::fs::remove_file(p)?;
    }
    let identical = bytes[0] == bytes[1];
    Ok((
        flat <= 1e-6 && curved > 1e-3 && identical,
        format!(
            "Fuchsian residual {flat:.2e} (bound 1e-6), bent residual {curved:.2e} \
             (needs > 1e-3), repeated renders identical: {identical}"
        ),
    ))
}

/// Fails with the first failing criterion, for callers that want a `Result`.
pub fn require_all(results: &[CriterionResult]) -> Result<()> {
    match results.iter().find(|r| !r.passed) {
        Some(r) => Err(Error::InvariantViolated(format!(
            "criterion {} ({}) failed: {}",
            r.id, r.name, r.detail
        ))),
        None => Ok(()),
    }
}
