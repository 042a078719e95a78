//! Marked once-punctured-torus groups.
//!
//! A marked group is a generator pair `(A, B)` whose commutator `[A, B]` is
//! parabolic with trace −2. Such pairs are classified up to conjugacy by the
//! trace triple `(x, y, z) = (Tr A, Tr B, Tr AB)`, which satisfies the Markov
//! relation `x² + y² + z² = xyz`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::h3geom::{complex_length_of_trace, MoebiusMap};

/// Tolerance on the Markov residual, relative to `max(1, |xyz|)`.
pub const MARKOV_TOL: f64 = 1e-10;
/// Tolerance on `Tr[A, B] + 2`, relative to `max(1, |xyz|)`.
pub const COMMUTATOR_TOL: f64 = 1e-9;
/// Imaginary parts below this count as real.
pub const REAL_TOL: f64 = 1e-10;

/// Which root of `z² − xyz + x² + y² = 0` to take.
///
/// `Plus` is the root with the larger real part, ties broken by the larger
/// imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn other(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// Root of the Markov quadratic in `z` for given `x`, `y`.
pub fn markov_z(x: Complex64, y: Complex64, branch: Branch) -> Complex64 {
    let (r1, r2) = markov_roots(x, y);
    let r1_first = r1.re > r2.re || (r1.re == r2.re && r1.im >= r2.im);
    match (branch, r1_first) {
        (Branch::Plus, true) | (Branch::Minus, false) => r1,
        _ => r2,
    }
}

/// Both roots, computed so that neither suffers cancellation.
fn markov_roots(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let sum = x * y;
    let prod = x * x + y * y;
    let disc = (sum * sum - prod * 4.0).sqrt();
    let big = if (sum + disc).norm() >= (sum - disc).norm() {
        (sum + disc) / 2.0
    } else {
        (sum - disc) / 2.0
    };
    if big.norm() == 0.0 {
        return (big, big);
    }
    (big, prod / big)
}

/// `(Tr A, Tr B, Tr AB)` of a marked punctured-torus group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceTriple {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl TraceTriple {
    /// Validates the Markov relation.
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Result<Self> {
        let t = Self { x, y, z };
        let residual = t.markov_residual();
        if !(residual <= MARKOV_TOL * t.scale()) {
            return Err(Error::InconsistentTriple { residual });
        }
        Ok(t)
    }

    pub fn real(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(x.into(), y.into(), z.into())
    }

    /// Completes `(x, y)` with the chosen Markov root.
    pub fn from_xy(x: Complex64, y: Complex64, branch: Branch) -> Self {
        Self {
            x,
            y,
            z: markov_z(x, y, branch),
        }
    }

    /// `|x² + y² + z² − xyz|`.
    pub fn markov_residual(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z - self.x * self.y * self.z).norm()
    }

    pub(crate) fn scale(&self) -> f64 {
        (self.x * self.y * self.z).norm().max(1.0)
    }

    /// Traces with the signs of the generators fixed so that real parts are
    /// nonnegative. An even number of sign flips keeps the Markov relation.
    pub fn normalized(&self) -> Self {
        let flip = |w: Complex64| if w.re < 0.0 { -w } else { w };
        Self {
            x: flip(self.x),
            y: flip(self.y),
            z: flip(self.z),
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.x.im.abs().max(self.y.im.abs()).max(self.z.im.abs())
    }
}

/// Real Fuchsian triple: all traces real (to [`REAL_TOL`]) and greater than 2.
pub fn is_fuchsian_triple(t: &TraceTriple) -> bool {
    let n = t.normalized();
    n.max_imag() <= REAL_TOL && n.x.re > 2.0 && n.y.re > 2.0 && n.z.re > 2.0
}

/// Complex lengths of `A` and `B`.
pub fn lengths_of(t: &TraceTriple) -> Result<(Complex64, Complex64)> {
    let length = |w: Complex64| {
        complex_length_of_trace(w).map_err(|_| Error::ParabolicGenerator {
            trace: format!("{w}"),
        })
    };
    Ok((length(t.x)?, length(t.y)?))
}

/// A marked generator pair with parabolic commutator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkedGroup {
    pub a: MoebiusMap,
    pub b: MoebiusMap,
}

impl MarkedGroup {
    /// Raw traces `(Tr A, Tr B, Tr AB)` of the matrices as stored.
    pub fn triple(&self) -> TraceTriple {
        TraceTriple {
            x: self.a.raw_trace(),
            y: self.b.raw_trace(),
            z: self.a.compose(&self.b).raw_trace(),
        }
    }

    pub fn commutator(&self) -> MoebiusMap {
        self.a
            .compose(&self.b)
            .compose(&self.a.inverse())
            .compose(&self.b.inverse())
    }

    /// Raw trace of `ABA⁻¹B⁻¹`; −2 for a punctured torus.
    pub fn commutator_trace(&self) -> Complex64 {
        self.commutator().raw_trace()
    }

    /// The generators and their inverses, in the order `A, B, A⁻¹, B⁻¹`.
    pub fn generators(&self) -> [MoebiusMap; 4] {
        [self.a, self.b, self.a.inverse(), self.b.inverse()]
    }
}

/// Builds the marked group with traces `(x, y, z)` in a fixed normal form.
///
/// `A = diag(m, 1/m)` with `|m| > 1`, so the axis of `A` is `0 → ∞` with ∞
/// attracting. `B` has fixed points multiplying to 1, which puts the common
/// perpendicular of the two axes on the unit semicircle through `(0, 1)`.
pub fn group_from_triple(t: &TraceTriple) -> Result<MarkedGroup> {
    let residual = t.markov_residual();
    if !(residual <= MARKOV_TOL * t.scale()) {
        return Err(Error::InconsistentTriple { residual });
    }
    let lambda = complex_length_of_trace(t.x).map_err(|_| Error::NonLoxodromicA {
        trace: format!("{}", t.x),
    })?;
    if lambda.re <= 1e-14 {
        return Err(Error::NonLoxodromicA {
            trace: format!("{}", t.x),
        });
    }
    // m + 1/m = x with |m| > 1; m − 1/m = ±√((x−2)(x+2)).
    let root = ((t.x - 2.0) * (t.x + 2.0)).sqrt();
    let (m, m_minus_inv) = if (t.x + root).norm() >= (t.x - root).norm() {
        ((t.x + root) / 2.0, root)
    } else {
        ((t.x - root) / 2.0, -root)
    };
    Ok(assemble(m, m_minus_inv, t.y, t.z))
}

/// `A = diag(m, 1/m)` and the normalized `B` with `Tr B = y`, `Tr AB = z`.
pub(crate) fn assemble(
    m: Complex64,
    m_minus_inv: Complex64,
    y: Complex64,
    z: Complex64,
) -> MarkedGroup {
    let p = (z - y / m) / m_minus_inv;
    let s = y - p;
    let r = (Complex64::new(1.0, 0.0) - p * s).sqrt();
    let a = MoebiusMap::from_raw(m, 0.0.into(), 0.0.into(), m.inv());
    let b = MoebiusMap::from_raw(p, -r, r, s);
    MarkedGroup { a, b }
}

/// A point of the Teichmüller space of the marked punctured torus: real
/// traces `x, y > 2` plus the choice of Markov root for `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuchsianPoint {
    pub x: f64,
    pub y: f64,
    pub branch: Branch,
}

impl FuchsianPoint {
    pub fn new(x: f64, y: f64, branch: Branch) -> Result<Self> {
        let p = Self { x, y, branch };
        if !(x > 2.0 && y > 2.0) || !(p.discriminant() >= -1e-12 * (x * y).powi(2)) {
            return Err(Error::InfeasiblePoint { x, y });
        }
        Ok(p)
    }

    /// Point with the given real geodesic lengths of `α` and `β`.
    pub fn from_lengths(l_alpha: f64, l_beta: f64, branch: Branch) -> Result<Self> {
        Self::new(
            2.0 * (l_alpha / 2.0).cosh(),
            2.0 * (l_beta / 2.0).cosh(),
            branch,
        )
    }

    /// Reads a real triple back as a point; the branch is whichever root `z`
    /// is closer to.
    pub fn from_triple(t: &TraceTriple) -> Result<Self> {
        let n = t.normalized();
        if n.max_imag() > REAL_TOL * n.scale() {
            return Err(Error::InfeasiblePoint {
                x: n.x.re,
                y: n.y.re,
            });
        }
        let x = n.x.re;
        let y = n.y.re;
        let plus = Self {
            x,
            y,
            branch: Branch::Plus,
        };
        let branch =
            if (n.z.re - plus.z()).abs() <= (n.z.re - plus.with_branch(Branch::Minus).z()).abs() {
                Branch::Plus
            } else {
                Branch::Minus
            };
        Self::new(x, y, branch)
    }

    pub fn with_branch(&self, branch: Branch) -> Self {
        Self { branch, ..*self }
    }

    /// `x²y² − 4(x² + y²)`, written as `(x²−4)(y²−4) − 16` to limit
    /// cancellation near the fold.
    pub fn discriminant(&self) -> f64 {
        (self.x - 2.0) * (self.x + 2.0) * (self.y - 2.0) * (self.y + 2.0) - 16.0
    }

    pub fn z(&self) -> f64 {
        let sum = self.x * self.y;
        let plus = 0.5 * (sum + self.discriminant().max(0.0).sqrt());
        match self.branch {
            Branch::Plus => plus,
            Branch::Minus => (self.x * self.x + self.y * self.y) / plus,
        }
    }

    pub fn triple(&self) -> TraceTriple {
        TraceTriple {
            x: self.x.into(),
            y: self.y.into(),
            z: self.z().into(),
        }
    }

    pub fn l_alpha(&self) -> f64 {
        trace_to_length(self.x)
    }

    pub fn l_beta(&self) -> f64 {
        trace_to_length(self.y)
    }

    pub fn group(&self) -> Result<MarkedGroup> {
        group_from_triple(&self.triple())
    }
}

/// `2 acosh(x/2)` for a real trace `x > 2`, accurate near 2.
pub fn trace_to_length(x: f64) -> f64 {
    let s = ((x - 2.0) * (x + 2.0)).sqrt() / 2.0;
    2.0 * s.asinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::h3geom::{complex_distance, dist_point_geodesic, H3Point, Ideal};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn markov_z_examples() {
        let three = c(3.0, 0.0);
        assert!((markov_z(three, three, Branch::Plus) - 6.0).norm() < 1e-14);
        assert!((markov_z(three, three, Branch::Minus) - 3.0).norm() < 1e-14);
        let f = c(2.0 * SQRT_2, 0.0);
        for b in [Branch::Plus, Branch::Minus] {
            assert!((markov_z(f, f, b) - 4.0).norm() < 1e-7);
        }
    }

    #[test]
    fn markov_z_breaks_real_ties_by_imaginary_part() {
        let x = c(2.5, 0.0);
        let z = markov_z(x, x, Branch::Plus);
        assert!(z.im > 0.0);
        assert!((markov_z(x, x, Branch::Minus) - z.conj()).norm() < 1e-14);
    }

    #[test]
    fn classical_triple_has_parabolic_commutator() {
        let t = TraceTriple::real(3.0, 3.0, 3.0).unwrap();
        let g = group_from_triple(&t).unwrap();
        assert!((g.commutator_trace() + 2.0).norm() < 1e-12);
        let back = g.triple();
        assert!((back.x - 3.0).norm() < 1e-12);
        assert!((back.y - 3.0).norm() < 1e-12);
        assert!((back.z - 3.0).norm() < 1e-12);
    }

    #[test]
    fn group_normal_form() {
        let t = TraceTriple::from_xy(c(2.7, 0.3), c(3.1, -0.2), Branch::Plus);
        let g = group_from_triple(&t).unwrap();
        let ax = g.a.axis().unwrap();
        assert_eq!(ax.start, Ideal::real(0.0));
        assert_eq!(ax.end, Ideal::Infinity);
        let bx = g.b.axis().unwrap();
        let (Ideal::Finite(u), Ideal::Finite(v)) = (bx.start, bx.end) else {
            panic!("finite axis expected")
        };
        assert!((u * v - 1.0).norm() < 1e-12);
        // (0, 1) is the point of Ax A nearest to Ax B.
        let foot = H3Point::new(c(0.0, 0.0), 1.0).unwrap();
        let rho = complex_distance(&ax, &bx).unwrap().rho;
        assert!((dist_point_geodesic(&foot, &bx) - rho).abs() < 1e-12);
        let off = H3Point::new(c(0.0, 0.0), 1.01).unwrap();
        assert!(dist_point_geodesic(&off, &bx) > rho);
    }

    #[test]
    fn fold_point_axes_meet_perpendicularly() {
        let f = 2.0 * SQRT_2;
        let t = TraceTriple::real(f, f, 4.0).unwrap();
        assert!(is_fuchsian_triple(&t));
        let g = group_from_triple(&t).unwrap();
        let cd = complex_distance(&g.a.axis().unwrap(), &g.b.axis().unwrap()).unwrap();
        assert!(cd.rho.abs() < 1e-7, "{cd:?}");
        assert!((cd.phi.abs() - FRAC_PI_2).abs() < 1e-7, "{cd:?}");
    }

    #[test]
    fn fuchsian_predicate() {
        assert!(is_fuchsian_triple(
            &TraceTriple::real(3.0, 3.0, 3.0).unwrap()
        ));
        let t = TraceTriple {
            x: c(3.0, 0.0),
            y: c(3.0, 0.0),
            z: c(4.0, 0.3),
        };
        assert!(!is_fuchsian_triple(&t));
        assert!(is_fuchsian_triple(
            &TraceTriple::real(-3.0, -3.0, 3.0).unwrap()
        ));
    }

    #[test]
    fn lengths_examples() {
        let t = TraceTriple::from_xy(c(3.0, 0.0), c(2.0 * 0.5f64.cosh(), 0.0), Branch::Plus);
        let (la, lb) = lengths_of(&t).unwrap();
        assert!((la.re - 2.0 * 1.5f64.acosh()).abs() < 1e-14 && la.im == 0.0);
        assert!((la.re - 1.924847300238413).abs() < 1e-12);
        assert!((lb.re - 1.0).abs() < 1e-14);
        let f = 2.0 * SQRT_2;
        let t = TraceTriple::from_xy(c(f, 0.0), c(f, 0.0), Branch::Plus);
        let (la, _) = lengths_of(&t).unwrap();
        assert!((la.re - 2.0 * 1f64.asinh()).abs() < 1e-14);
        assert!((la.re - 1.762747174039086).abs() < 1e-12);
        let p = TraceTriple {
            x: c(2.0, 0.0),
            y: c(3.0, 0.0),
            z: c(3.0, 0.0),
        };
        assert!(matches!(
            lengths_of(&p),
            Err(Error::ParabolicGenerator { .. })
        ));
    }

    #[test]
    fn group_errors() {
        let t = TraceTriple {
            x: c(3.0, 0.0),
            y: c(3.0, 0.0),
            z: c(3.5, 0.0),
        };
        assert!(matches!(
            group_from_triple(&t),
            Err(Error::InconsistentTriple { .. })
        ));
        assert!(TraceTriple::real(3.0, 3.0, 3.5).is_err());
        let t = TraceTriple::from_xy(c(2.0, 0.0), c(3.0, 0.0), Branch::Plus);
        assert!(matches!(
            group_from_triple(&t),
            Err(Error::NonLoxodromicA { .. })
        ));
        let t = TraceTriple::from_xy(c(1.0, 0.0), c(3.0, 0.0), Branch::Plus);
        assert!(matches!(
            group_from_triple(&t),
            Err(Error::NonLoxodromicA { .. })
        ));
    }

    #[test]
    fn fuchsian_point_roots_are_real_and_coincide_on_fold() {
        let p = FuchsianPoint::new(3.0, 3.0, Branch::Plus).unwrap();
        assert_eq!(p.z(), 6.0);
        assert_eq!(p.with_branch(Branch::Minus).z(), 3.0);
        let f = FuchsianPoint::from_lengths(2.0 * 1f64.asinh(), 2.0 * 1f64.asinh(), Branch::Plus)
            .unwrap();
        assert!((f.z() - f.x * f.y / 2.0).abs() < 1e-7);
        assert!(FuchsianPoint::new(2.5, 2.5, Branch::Plus).is_err());
        assert!(FuchsianPoint::new(1.0, 9.0, Branch::Plus).is_err());
    }

    #[test]
    fn fuchsian_point_triple_round_trip() {
        let p = FuchsianPoint::new(3.2, 4.1, Branch::Minus).unwrap();
        let back = FuchsianPoint::from_triple(&p.group().unwrap().triple()).unwrap();
        assert!((back.x - p.x).abs() < 1e-12 && (back.y - p.y).abs() < 1e-12);
        assert_eq!(back.branch, Branch::Minus);
    }

    fn complex_trace() -> impl Strategy<Value = Complex64> {
        (2.2f64..6.0, -1.5f64..1.5, 0.0f64..1.0).prop_map(|(r, i, flip)| {
            let w = c(r, i);
            if flip < 0.3 {
                -w
            } else {
                w
            }
        })
    }

    proptest! {
        #[test]
        fn vieta_relations(x in complex_trace(), y in complex_trace()) {
            let zp = markov_z(x, y, Branch::Plus);
            let zm = markov_z(x, y, Branch::Minus);
            let scale = (x * y).norm().max(1.0);
            prop_assert!((zp + zm - x * y).norm() <= 1e-10 * scale);
            prop_assert!((zp * zm - (x * x + y * y)).norm() <= 1e-10 * scale * scale);
            prop_assert!(zp.re >= zm.re);
        }

        #[test]
        fn constructed_groups_are_punctured_tori(
            x in complex_trace(), y in complex_trace(), plus in any::<bool>()
        ) {
            let branch = if plus { Branch::Plus } else { Branch::Minus };
            let t = TraceTriple::from_xy(x, y, branch);
            let g = group_from_triple(&t).unwrap();
            let back = g.triple();
            let scale = t.scale();
            prop_assert!((back.x - t.x).norm() <= 1e-10 * scale.sqrt());
            prop_assert!((back.y - t.y).norm() <= 1e-10 * scale.sqrt());
            prop_assert!((back.z - t.z).norm() <= 1e-10 * scale.sqrt());
            prop_assert!(back.markov_residual() <= MARKOV_TOL * scale);
            prop_assert!((g.commutator_trace() + 2.0).norm() <= COMMUTATOR_TOL * scale);
            // Tr[A,B] = x² + y² + z² − xyz − 2 on the matrices themselves.
            let identity = back.x * back.x + back.y * back.y + back.z * back.z
                - back.x * back.y * back.z - 2.0;
            prop_assert!((identity - g.commutator_trace()).norm() <= 1e-9 * scale);
            prop_assert!((g.a.det() - 1.0).norm() <= 1e-12);
            prop_assert!((g.b.det() - 1.0).norm() <= 1e-12);
            let again = group_from_triple(&t).unwrap();
            prop_assert_eq!(g, again);
        }

        #[test]
        fn real_feasible_roots_are_real(x in 2.01f64..8.0, y in 2.01f64..8.0) {
            prop_assume!(x * x * y * y >= 4.0 * (x * x + y * y));
            for b in [Branch::Plus, Branch::Minus] {
                let z = markov_z(c(x, 0.0), c(y, 0.0), b);
                prop_assert!(z.im.abs() <= 1e-6 * (x * y));
                let p = FuchsianPoint::new(x, y, b).unwrap();
                prop_assert!((p.z() - z.re).abs() <= 1e-8 * x * y);
            }
        }
    }
}
