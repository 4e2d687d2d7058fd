//! Characteristic and singular directions of a germ: the projective fixed
//! directions of its lowest-degree homogeneous part, their multipliers,
//! degeneracy and exceptionality flags, dicriticality, and direction
//! multiplicities via exact plane-curve intersection numbers.
//!
//! A direction v ∈ ℙ² is characteristic when H(v) ∧ v = 0, where H is the
//! divisor-free part of the leading homogeneous term of f − id. The solver
//! works chart by chart: the affine chart Z = 1, the line Z = 0 with
//! Y = 1, and the single remaining point [1:0:0], so every point of ℙ² is
//! examined exactly once.

use std::fmt;

use crate::algebra::uni::{scalar_roots, Biv, Uni};
use crate::algebra::{mono_total, Axis, Cert, Scalar, Series};
use crate::blowup::is_exceptional;
use crate::germ::Germ;
use crate::{Error, Result};

/// One isolated characteristic direction.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedDirection {
    /// Homogeneous coordinates, normalized so the last nonzero one is 1.
    pub v: [Scalar; 3],
    /// The proportionality factor H(v) = λ·v. Only its vanishing is
    /// invariant under coordinate changes; the value itself depends on the
    /// chosen representative.
    pub multiplier: Scalar,
    /// λ = 0: the leading part vanishes at v.
    pub degenerate: bool,
    /// Tangent to a marked divisor component.
    pub exceptional: bool,
}

/// A positive-dimensional family of characteristic directions: the zero
/// set of `factor` inside one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionFamily {
    pub chart: Axis,
    /// Defining polynomial in the two affine chart coordinates (the
    /// non-chart axes in index order), or the special marker for the whole
    /// line at infinity of the chart.
    pub factor: String,
}

/// A chart factor whose roots exist but do not lie in the scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct UnresolvedFactor {
    pub chart: Axis,
    pub polynomial: String,
}

/// Dimension of the characteristic-direction variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dicriticality {
    /// Finitely many characteristic directions.
    Isolated,
    /// A curve of characteristic directions.
    Curve,
    /// Every direction is characteristic (H proportional to the identity).
    Dicritical,
}

impl fmt::Display for Dicriticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dicriticality::Isolated => write!(f, "0"),
            Dicriticality::Curve => write!(f, "1"),
            Dicriticality::Dicritical => write!(f, "dicritical"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DirectionReport {
    pub resolved: Vec<ResolvedDirection>,
    pub families: Vec<DirectionFamily>,
    pub unresolved: Vec<UnresolvedFactor>,
    pub dicriticality: Dicriticality,
}

// --------------------------------------------------------------- evaluation

/// Evaluate a polynomial series at a scalar point.
pub fn eval_series(s: &Series, v: &[Scalar; 3]) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in s.terms() {
        let mut t = c.clone();
        for k in 0..3 {
            for _ in 0..m[k] {
                t = &t * &v[k];
            }
        }
        acc = &acc + &t;
    }
    acc
}

/// The three cross-product minors of (H, id): M₁ = H_y·Z − H_z·Y,
/// M₂ = H_z·X − H_x·Z, M₃ = H_x·Y − H_y·X.
fn cross_minors(h: &[Series; 3]) -> [Series; 3] {
    let x = Series::variable(Axis::X, Cert::Exact);
    let y = Series::variable(Axis::Y, Cert::Exact);
    let z = Series::variable(Axis::Z, Cert::Exact);
    [
        h[1].mul(&z).sub(&h[2].mul(&y)),
        h[2].mul(&x).sub(&h[0].mul(&z)),
        h[0].mul(&y).sub(&h[1].mul(&x)),
    ]
}

/// Restrict a polynomial series to the affine chart x_chart = 1, producing
/// a bivariate polynomial in the two remaining axes (in index order:
/// first = u, second = w).
fn chart_restrict(s: &Series, chart: Axis) -> Biv {
    let free: Vec<usize> = (0..3).filter(|&k| k != chart.index()).collect();
    let (u_ax, w_ax) = (free[0], free[1]);
    let mut w_coeffs: Vec<Vec<Scalar>> = Vec::new();
    for (m, c) in s.terms() {
        let (du, dw) = (m[u_ax] as usize, m[w_ax] as usize);
        if w_coeffs.len() <= dw {
            w_coeffs.resize(dw + 1, Vec::new());
        }
        if w_coeffs[dw].len() <= du {
            w_coeffs[dw].resize(du + 1, Scalar::zero());
        }
        w_coeffs[dw][du] = &w_coeffs[dw][du] + c;
    }
    Biv::new(w_coeffs.into_iter().map(Uni::new).collect())
}

/// Restrict to the line x_chart = 0, x_line = 1: a univariate polynomial
/// in the remaining axis.
fn line_restrict(s: &Series, zero: Axis, one: Axis) -> Uni {
    let free = (0..3)
        .find(|&k| k != zero.index() && k != one.index())
        .expect("three axes");
    let mut coeffs: Vec<Scalar> = Vec::new();
    for (m, c) in s.terms() {
        if m[zero.index()] != 0 {
            continue;
        }
        let d = m[free] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Scalar::zero());
        }
        coeffs[d] = &coeffs[d] + c;
    }
    Uni::new(coeffs)
}

/// Normalize projective coordinates so the last nonzero entry is 1.
pub fn normalize_direction(v: &[Scalar; 3]) -> [Scalar; 3] {
    let last = (0..3).rev().find(|&k| !v[k].is_zero()).expect("nonzero direction");
    let inv = v[last].inv().expect("nonzero");
    std::array::from_fn(|k| &v[k] * &inv)
}

// ------------------------------------------------------------- the solver

/// All characteristic directions of the leading divisor-free homogeneous
/// part, solved exactly over the scalar field.
pub fn singular_directions(f: &Germ) -> Result<DirectionReport> {
    let hd = f.homogeneous_data()?;
    let minors = cross_minors(&hd.h_l);
    let mut resolved: Vec<ResolvedDirection> = Vec::new();
    let mut families = Vec::new();
    let mut unresolved = Vec::new();

    if minors.iter().all(Series::is_zero) {
        return Ok(DirectionReport {
            resolved,
            families,
            unresolved,
            dicriticality: Dicriticality::Dicritical,
        });
    }

    let mut push_resolved = |v: [Scalar; 3]| {
        let v = normalize_direction(&v);
        if resolved.iter().any(|r| r.v == v) {
            return;
        }
        // verify against all three minors (elimination can produce
        // spurious candidates; this exact check filters them)
        if minors.iter().any(|m| !eval_series(m, &v).is_zero()) {
            return;
        }
        let hv: [Scalar; 3] = std::array::from_fn(|k| eval_series(&hd.h_l[k], &v));
        let last = (0..3).rev().find(|&k| !v[k].is_zero()).expect("nonzero");
        let multiplier = hv[last].clone();
        debug_assert!(
            (0..3).all(|k| hv[k] == &multiplier * &v[k]),
            "leading part not proportional at a characteristic direction"
        );
        let degenerate = multiplier.is_zero();
        let exceptional = is_exceptional(&f.divisor(), &v);
        resolved.push(ResolvedDirection { v, multiplier, degenerate, exceptional });
    };

    // --- affine chart Z = 1: the bivariate system (M₁, M₂) in (X, Y);
    // M₃ = −(X·M₁ + Y·M₂) is dependent there.
    let m1 = chart_restrict(&minors[0], Axis::Z);
    let m2 = chart_restrict(&minors[1], Axis::Z);
    let (b1, b2) = match (m1.is_zero(), m2.is_zero()) {
        (true, true) => {
            // both chart minors vanish identically; M₃ must cut the chart
            let m3 = chart_restrict(&minors[2], Axis::Z);
            (m3.clone(), m3)
        }
        (true, false) => (m2.clone(), m2),
        (false, true) => (m1.clone(), m1),
        (false, false) => (m1, m2),
    };
    let mut sys = [b1, b2];
    // shared positive-dimensional part
    let gcd = sys[0].gcd_w(&sys[1]);
    let content = sys[0].content_u().gcd(&sys[1].content_u());
    let has_family = gcd.deg_w().is_some_and(|d| d >= 1)
        || content.deg().is_some_and(|d| d >= 1);
    if gcd.deg_w().is_some_and(|d| d >= 1) {
        sys = [sys[0].div_exact(&gcd), sys[1].div_exact(&gcd)];
        families.push(DirectionFamily {
            chart: Axis::Z,
            factor: describe_biv(&gcd, Axis::Z),
        });
    }
    if content.deg().is_some_and(|d| d >= 1) {
        families.push(DirectionFamily {
            chart: Axis::Z,
            factor: format!("{content}    [t = first chart coordinate]"),
        });
    }
    // isolated points: eliminate w, specialize, take roots
    let mut u_candidates: Vec<Scalar> = Vec::new();
    for cand in sys[0].elimination_candidates(&sys[1]) {
        let (roots, rest) = scalar_roots(&cand);
        u_candidates.extend(roots);
        if rest.deg().is_some_and(|d| d >= 1) {
            unresolved.push(UnresolvedFactor {
                chart: Axis::Z,
                polynomial: format!("{rest}"),
            });
        }
    }
    u_candidates.sort();
    u_candidates.dedup();
    for u0 in u_candidates {
        let s1 = sys[0].eval_u(&u0);
        let s2 = sys[1].eval_u(&u0);
        let g = if s1.is_zero() {
            s2
        } else if s2.is_zero() {
            s1
        } else {
            s1.gcd(&s2)
        };
        if g.deg() == Some(0) {
            continue;
        }
        let (roots, rest) = scalar_roots(&g);
        if rest.deg().is_some_and(|d| d >= 1) {
            unresolved.push(UnresolvedFactor {
                chart: Axis::Z,
                polynomial: format!("{rest}    [at first coordinate = {u0}]"),
            });
        }
        for w0 in roots {
            push_resolved([u0.clone(), w0, Scalar::one()]);
        }
    }

    // --- line Z = 0, Y = 1: univariate in X; M₂ = −X·M₁ there, so the
    // independent pair is (M₁, M₃).
    let l1 = line_restrict(&minors[0], Axis::Z, Axis::Y);
    let l3 = line_restrict(&minors[2], Axis::Z, Axis::Y);
    let mut line_family = false;
    let g = match (l1.is_zero(), l3.is_zero()) {
        (true, true) => {
            line_family = true;
            Uni::zero()
        }
        (true, false) => l3,
        (false, true) => l1,
        (false, false) => l1.gcd(&l3),
    };
    if line_family {
        families.push(DirectionFamily {
            chart: Axis::Y,
            factor: "the whole line {Z = 0}".into(),
        });
    } else if g.deg().is_some_and(|d| d >= 1) || !g.is_zero() {
        let (roots, rest) = scalar_roots(&g);
        if rest.deg().is_some_and(|d| d >= 1) {
            unresolved.push(UnresolvedFactor {
                chart: Axis::Y,
                polynomial: format!("{rest}    [on the line Z = 0]"),
            });
        }
        for x0 in roots {
            push_resolved([x0, Scalar::one(), Scalar::zero()]);
        }
    }

    // --- the remaining point [1:0:0]
    let e1 = [Scalar::one(), Scalar::zero(), Scalar::zero()];
    if minors.iter().all(|m| eval_series(m, &e1).is_zero()) {
        push_resolved(e1);
    }

    let dicriticality = if has_family || line_family {
        Dicriticality::Curve
    } else {
        Dicriticality::Isolated
    };
    resolved.sort_by(|a, b| a.v.cmp(&b.v));
    Ok(DirectionReport { resolved, families, unresolved, dicriticality })
}

fn describe_biv(b: &Biv, chart: Axis) -> String {
    let free: Vec<&str> = ["x", "y", "z"]
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != chart.index())
        .map(|(_, n)| *n)
        .collect();
    let mut parts = Vec::new();
    for k in 0..=b.deg_w().unwrap_or(0) {
        let c = b.coeff_w(k);
        if c.is_zero() {
            continue;
        }
        let base = format!("({})", c).replace("*t", &format!("*{}", free[0]));
        match k {
            0 => parts.push(base),
            1 => parts.push(format!("{base}*{}", free[1])),
            _ => parts.push(format!("{base}*{}^{k}", free[1])),
        }
    }
    parts.join(" + ")
}

/// Generator-side verification of a characteristic direction: lift the
/// germ at v, take the infinitesimal generator, saturate by the lifted
/// divisor, and test whether the origin is singular. Characteristic
/// directions are exactly the singular ones.
pub fn verify_direction_by_generator(f: &Germ, v: &[Scalar; 3]) -> Result<bool> {
    use crate::infgen::{linear_part, log_germ, LinearBehavior};
    let chart = Axis::from_index((0..3).rev().find(|&k| !v[k].is_zero()).expect("nonzero"));
    let lifted = crate::blowup::lift_point_blowup(f, v, chart)?;
    let chi = log_germ(&lifted)?;
    let sat = chi.saturate(&lifted.divisor())?;
    Ok(matches!(linear_part(&sat), LinearBehavior::Singular(_)))
}

// ----------------------------------------------- intersection multiplicity

/// A local intersection-number query for two plane curves. The
/// polynomials use the X and Y axes of the shared series type (Z-exponents
/// must be zero); the base point is (x₀, y₀).
#[derive(Clone, Debug)]
pub struct IntersectionQuery {
    pub f: Series,
    pub g: Series,
    pub base: [Scalar; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionNumber {
    Finite(u64),
    Infinite,
}

impl IntersectionNumber {
    fn add(self, k: u64) -> IntersectionNumber {
        match self {
            IntersectionNumber::Finite(n) => IntersectionNumber::Finite(n + k),
            IntersectionNumber::Infinite => IntersectionNumber::Infinite,
        }
    }
}

impl fmt::Display for IntersectionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionNumber::Finite(n) => write!(f, "{n}"),
            IntersectionNumber::Infinite => write!(f, "infinity"),
        }
    }
}

/// Local intersection multiplicity of two plane curves at a point,
/// computed by the standard valuation axioms: translation to the origin,
/// degree reduction F, G ↦ F, G − c·xᵈ·F on the y = 0 restrictions, and
/// splitting off y-factors whose contribution is the x-valuation of the
/// partner curve.
pub fn intersection_multiplicity(q: &IntersectionQuery) -> IntersectionNumber {
    for s in [&q.f, &q.g] {
        debug_assert!(
            s.terms().all(|(m, _)| m[2] == 0),
            "plane-curve query uses the X and Y axes only"
        );
    }
    let mut f = q.f.clone();
    let mut g = q.g.clone();
    for (axis, v) in [(Axis::X, &q.base[0]), (Axis::Y, &q.base[1])] {
        if !v.is_zero() {
            f = f.translate(axis, v).expect("exact polynomial translation");
            g = g.translate(axis, v).expect("exact polynomial translation");
        }
    }
    let bound = (poly_deg(&f) + 2) * (poly_deg(&g) + 2) * 8 + 64;
    let mut fuel = bound;
    intersection_at_origin(f, g, &mut fuel)
}

fn poly_deg(s: &Series) -> u64 {
    s.terms().map(|(m, _)| u64::from(mono_total(m))).max().unwrap_or(0)
}

fn restrict_y0(s: &Series) -> Uni {
    let mut coeffs: Vec<Scalar> = Vec::new();
    for (m, c) in s.terms() {
        if m[1] != 0 {
            continue;
        }
        let d = m[0] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Scalar::zero());
        }
        coeffs[d] = &coeffs[d] + c;
    }
    Uni::new(coeffs)
}

fn intersection_at_origin(
    mut f: Series,
    mut g: Series,
    fuel: &mut u64,
) -> IntersectionNumber {
    loop {
        assert!(*fuel > 0, "intersection recursion exceeded its certified fuel bound");
        *fuel -= 1;
        if !f.coeff(&[0, 0, 0]).is_zero() || !g.coeff(&[0, 0, 0]).is_zero() {
            return IntersectionNumber::Finite(0);
        }
        if f.is_zero() || g.is_zero() {
            return IntersectionNumber::Infinite;
        }
        let fx = restrict_y0(&f);
        let gx = restrict_y0(&g);
        match (fx.valuation(), gx.valuation()) {
            (None, None) => {
                // y divides both: a common component through the origin
                return IntersectionNumber::Infinite;
            }
            (None, Some(vg)) => {
                // f = y·f₁; I(y, g) = ord of g on the x-axis
                let f1 = f.div_monomial(&[0, 1, 0]).expect("y divides f");
                return intersection_at_origin(f1, g, fuel).add(vg as u64);
            }
            (Some(vf), None) => {
                let g1 = g.div_monomial(&[0, 1, 0]).expect("y divides g");
                return intersection_at_origin(f, g1, fuel).add(vf as u64);
            }
            (Some(_), Some(_)) => {
                let (df, dg) = (fx.deg().expect("nonzero"), gx.deg().expect("nonzero"));
                if df > dg {
                    std::mem::swap(&mut f, &mut g);
                    continue;
                }
                // kill the top x-degree of g's restriction
                let c = &gx.lc() * &fx.lc().inv().expect("nonzero leading");
                let shift = Series::from_terms(
                    [([(dg - df) as u32, 0, 0], c)],
                    Cert::Exact,
                );
                g = g.sub(&shift.mul(&f));
            }
        }
    }
}

// ------------------------------------------------------ direction-wise μ

/// The multiplicity of a characteristic direction: the local intersection
/// number, at v, of the two cross-minor curves of the full leading
/// homogeneous part (divisor content included), taken in the affine chart
/// of v's last nonzero coordinate.
pub fn direction_multiplicity(f: &Germ, v: &[Scalar; 3]) -> Result<u64> {
    let hd = f.homogeneous_data()?;
    let v = normalize_direction(v);
    // characteristic test uses the divisor-free part
    let minors_free = cross_minors(&hd.h_l);
    if minors_free.iter().any(|m| !eval_series(m, &v).is_zero()) {
        return Err(Error::NotCharacteristic);
    }
    let minors = cross_minors(&hd.h);
    let chart = (0..3).rev().find(|&k| !v[k].is_zero()).expect("nonzero");
    // the two independent minors in this chart: skip index `chart`
    // (X·M₁ + Y·M₂ + Z·M₃ ≡ 0 makes that one dependent where v_chart ≠ 0)
    let picked: Vec<&Series> = (0..3).filter(|&i| i != chart).map(|i| &minors[i]).collect();
    let free: Vec<usize> = (0..3).filter(|&k| k != chart).collect();
    let to_plane = |s: &Series| -> Series {
        // substitute x_chart = 1 and rename the free axes to (X, Y)
        let mut out = Series::zero(Cert::Exact);
        for (m, c) in s.terms() {
            let nm = [m[free[0]], m[free[1]], 0];
            out = out.add(&Series::from_terms([(nm, c.clone())], Cert::Exact));
        }
        out
    };
    let q = IntersectionQuery {
        f: to_plane(picked[0]),
        g: to_plane(picked[1]),
        base: [v[free[0]].clone(), v[free[1]].clone()],
    };
    match intersection_multiplicity(&q) {
        IntersectionNumber::Finite(n) => Ok(n),
        IntersectionNumber::Infinite => Err(Error::NotReducible {
            reason: "cross-minor curves share a component through the direction".into(),
        }),
    }
}

// ------------------------------------------------------------------- tests
