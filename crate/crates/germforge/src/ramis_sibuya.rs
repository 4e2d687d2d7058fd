//! Ramis–Sibuya normal form along an invariant curve and the parabolic
//! manifold count it certifies.
//!
//! Given a germ together with a non-degenerate formal invariant curve
//! transverse to the marked plane, [`straighten_pair`] moves the curve onto
//! the distinguished axis and normalizes the one-dimensional restriction,
//! [`rs_reduce`] runs the tower of point blow-ups that compresses the first
//! two components into multiplier form, and [`parabolic_report`] turns the
//! resulting logarithm data into certified attraction signs: one parabolic
//! direction per restriction level, each carrying a stable manifold of
//! dimension one, two, or three.
//!
//! All scalar data stays in the exact field. Signs of the real parts that
//! decide node/saddle behaviour are certified either by exact ray
//! bookkeeping (when a power test shows the value lies on a half-axis of a
//! root-of-unity lattice) or by adaptive-precision interval evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::algebra::uni::Uni;
use crate::algebra::{
    atan_itv, mono_display, nth_root, pi, precision_cap, Axis, CItv, Cert, Itv, Mono, Rat, Scalar,
    Series,
};
use crate::blowup::lift_point_blowup;
use crate::classify::{classify_germ, SingularityClass};
use crate::curves::{curve_trust, FormalCurve};
use crate::germ::{invert_matrix, map_compose, matrix_to_map, Germ};
use crate::{Error, Result};

/// Which reducible family the straightened pair came from.
#[derive(Debug, Clone, PartialEq)]
pub enum ReducedKind {
    /// Degenerate spike with distinct scalar eigenvalues on the
    /// transverse block.
    Spike { lambda: Scalar, mu: Scalar },
    /// Non-simple half corner; `a_x` is the transverse multiplier slope.
    HalfCorner { a_x: Scalar },
}

impl ReducedKind {
    fn label(&self) -> &'static str {
        match self {
            ReducedKind::Spike { .. } => "degenerate-spike",
            ReducedKind::HalfCorner { .. } => "half-corner",
        }
    }
}

/// A germ whose invariant curve has been moved onto the distinguished axis
/// and whose axis restriction `z ↦ z + T(z)` is in normal position:
/// `T = lead·z^{r+1} + B·z^{2r+1} + O(z^{2r+2})` with the intermediate
/// slots cleared.
#[derive(Debug, Clone)]
pub struct Straightened {
    /// The conjugated germ, marked divisor on the third axis.
    pub germ: Germ,
    /// Source family with its transverse linear data.
    pub kind: ReducedKind,
    /// Multiplicity of the marked plane.
    pub c: u32,
    /// Axis contact excess beyond the minimal restriction order.
    pub e: u32,
    /// Restriction level: the axis restriction has order `r + 1`.
    pub r: u32,
    /// Leading coefficient of the restriction.
    pub lead: Scalar,
    /// Formal invariant of the restriction: the residual slot at
    /// `2r + 1` divided by `lead²`.
    pub beta: Scalar,
    /// Largest jet degree in which the curve shift is certified clean;
    /// bounds how many blow-ups the reduction may spend.
    pub junk_horizon: u32,
}

/// Multiplier data of the reduced form: writing the first two components as
/// `exp(d_j)·(diagonal + cross·z^r) + O(z^{r+1})`, the entries below are the
/// logarithm jets and the level-`r` constants. The stored `d_j` coefficients
/// are unscaled; the direction weights `w` with `w^r = −1/lead` multiply the
/// degree-`k` entry by `w^k` when evaluated along a parabolic direction.
#[derive(Debug, Clone, PartialEq)]
pub struct RSData {
    pub kind: ReducedKind,
    /// Restriction level; the tower spends `blowups` point blow-ups.
    pub r: u32,
    pub c: u32,
    pub e: u32,
    pub blowups: u32,
    pub lead: Scalar,
    pub beta: Scalar,
    /// Logarithm jet of the first multiplier, index = degree, length `r`.
    pub d1: Vec<Scalar>,
    /// Logarithm jet of the second multiplier, same layout.
    pub d2: Vec<Scalar>,
    pub c11: Scalar,
    pub c12: Scalar,
    pub c21: Scalar,
    pub c22: Scalar,
}

/// Sign table of one parabolic direction and the stable dimension it earns.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicDirection {
    /// Index `t` of the direction among the `r` roots.
    pub index: u32,
    /// Signs of the real parts of the first logarithm evaluated along the
    /// direction, degrees `1..r`.
    pub first: Vec<i8>,
    /// Same for the second logarithm.
    pub second: Vec<i8>,
    /// Whether the first transverse coordinate is attracted (node).
    pub node_first: bool,
    pub node_second: bool,
    /// Dimension of the parabolic manifold: 1 + number of nodes.
    pub dimension: u32,
}

/// Parabolic manifolds of the reduced germ: one per direction, `r` total.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicReport {
    pub r: u32,
    pub count: u32,
    pub directions: Vec<ParabolicDirection>,
}

// ---------------------------------------------------------------------------
// small exact-arithmetic helpers
// ---------------------------------------------------------------------------

fn pow_scalar(s: &Scalar, k: u32) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..k {
        acc = &acc * s;
    }
    acc
}

fn rat_pow(a: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc = &acc * a;
    }
    acc
}

fn round_rat(x: &Rat) -> BigInt {
    (x + &Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Terms of `s` that are pure powers of `ax`, as a univariate polynomial.
fn pure_axis_poly(s: &Series, ax: Axis) -> Uni {
    let mut out = Uni::zero();
    for (m, coeff) in s.terms() {
        if Axis::ALL.iter().all(|a| *a == ax || m[a.index()] == 0) {
            out = out.add(&Uni::monomial(m[ax.index()] as usize, coeff.clone()));
        }
    }
    out
}

/// Terms of `s` of the shape `var·along^k`, collected as a polynomial in
/// `along` (the `var` factor is stripped).
fn linear_slice(s: &Series, var: Axis, along: Axis) -> Uni {
    debug_assert_ne!(var, along, "slice variable must differ from the jet axis");
    let mut out = Uni::zero();
    for (m, coeff) in s.terms() {
        let var_ok = m[var.index()] == 1;
        let rest_zero = Axis::ALL
            .iter()
            .all(|a| *a == var || *a == along || m[a.index()] == 0);
        if var_ok && rest_zero {
            out = out.add(&Uni::monomial(m[along.index()] as usize, coeff.clone()));
        }
    }
    out
}

/// Embed a univariate polynomial as a series along one axis.
fn uni_along(u: &Uni, ax: Axis) -> Series {
    let terms: Vec<(Mono, Scalar)> = u
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(k, s)| {
            let mut m: Mono = [0, 0, 0];
            m[ax.index()] = k as u32;
            (m, s.clone())
        })
        .collect();
    Series::from_terms(terms, Cert::Exact)
}

/// Logarithm jet of a unit polynomial with constant term 1, through `deg`.
fn log_unit(m: &Uni, deg: usize) -> Uni {
    debug_assert!(
        m.coeff(0) == Scalar::one(),
        "logarithm jet needs constant term 1"
    );
    let u = m.sub(&Uni::one()).truncate(deg);
    let mut acc = Uni::zero();
    let mut p = Uni::one();
    for i in 1..=deg {
        p = p.mul_trunc(&u, deg);
        if p.is_zero() {
            break;
        }
        let sign = if i % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&p.scale(&Scalar::from_rat(sign, i as i64)));
    }
    acc
}

/// Compositional inverse jet of `s = s₁t + …` (`s₁ ≠ 0`) through `deg`.
fn reverse_jet(s: &Uni, deg: usize) -> Uni {
    let inv1 = s
        .coeff(1)
        .inv()
        .expect("jet reversion needs a unit linear coefficient");
    let mut t = Uni::monomial(1, inv1.clone());
    for m in 2..=deg {
        let err = s.compose_trunc(&t, m).coeff(m);
        if !err.is_zero() {
            t = t.add(&Uni::monomial(m, -&(&err * &inv1)));
        }
    }
    t
}

/// Conjugate `f` by the polynomial map `phi` with explicit polynomial
/// inverse `psi` (`psi ∘ phi = id`), rebuilding the germ over `divisor`.
/// Unlike power-series inversion this keeps exact certificates exact.
fn conjugate_with(f: &Germ, phi: &[Series; 3], psi: &[Series; 3], divisor: Mono) -> Result<Germ> {
    let inner = map_compose(f.coords(), phi)?;
    let outer = map_compose(psi, &inner)?;
    let delta = [
        outer[0].sub(&Series::variable(Axis::X, Cert::Exact)),
        outer[1].sub(&Series::variable(Axis::Y, Cert::Exact)),
        outer[2].sub(&Series::variable(Axis::Z, Cert::Exact)),
    ];
    Germ::from_displacement(delta, f.order_n(), divisor)
}

fn conjugate_linear(f: &Germ, m: &[[Scalar; 3]; 3], divisor: Mono) -> Result<Germ> {
    let minv = invert_matrix(m).ok_or(Error::NonInvertibleChange)?;
    conjugate_with(f, &matrix_to_map(&minv), &matrix_to_map(m), divisor)
}

/// Identity map with `σ·z^j·(source)` added to the `target` component.
fn shear_map(target: Axis, source: Axis, j: u32, sigma: &Scalar) -> [Series; 3] {
    debug_assert!(target != Axis::Z && source != Axis::Z && target != source);
    let mut comps = [
        Series::variable(Axis::X, Cert::Exact),
        Series::variable(Axis::Y, Cert::Exact),
        Series::variable(Axis::Z, Cert::Exact),
    ];
    let mut m: Mono = [0, 0, 0];
    m[source.index()] = 1;
    m[Axis::Z.index()] = j;
    comps[target.index()] =
        comps[target.index()].add(&Series::from_terms([(m, sigma.clone())], Cert::Exact));
    comps
}

/// Identity map with `c·z^{m+1}` added to the third component.
fn zshift_map(m_deg: u32, c: &Scalar) -> [Series; 3] {
    let z = Series::variable(Axis::Z, Cert::Exact);
    let bump = Series::from_terms([([0, 0, m_deg + 1], c.clone())], Cert::Exact);
    [
        Series::variable(Axis::X, Cert::Exact),
        Series::variable(Axis::Y, Cert::Exact),
        z.add(&bump),
    ]
}

/// Clear one coefficient slot by solving for the conjugation parameter.
///
/// The slot must depend affinely on the parameter; the probe at 1 measures
/// the slope, the closed-form solution is applied, and the result is
/// re-read as a guard. A zero slope is a resonance: the slot cannot move.
fn tune_slot<R, A>(g: &Germ, read: R, apply: A, what: &str) -> Result<Germ>
where
    R: Fn(&Germ) -> Scalar,
    A: Fn(&Germ, &Scalar) -> Result<Germ>,
{
    let v0 = read(g);
    if v0.is_zero() {
        return Ok(g.clone());
    }
    let probe = apply(g, &Scalar::one())?;
    let slope = &read(&probe) - &v0;
    if slope.is_zero() {
        return Err(Error::NotReducible {
            reason: format!("resonant {what} cannot be cleared"),
        });
    }
    let param = -&(&v0 * &slope.inv()?);
    let out = apply(g, &param)?;
    if !read(&out).is_zero() {
        return Err(Error::NotReducible {
            reason: format!("{what} does not respond affinely to tuning"),
        });
    }
    Ok(out)
}

fn matmul(a: &[[Scalar; 3]; 3], b: &[[Scalar; 3]; 3]) -> [[Scalar; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Scalar::zero();
            for (k, row) in b.iter().enumerate() {
                acc = &acc + &(&a[i][k] * &row[j]);
            }
            acc
        })
    })
}

/// Coefficient of `var·z^c_extra` in the displacement component `comp`.
fn linear_coeff(g: &Germ, comp: Axis, var: Axis, z_pow: u32) -> Scalar {
    let mut m: Mono = [0, 0, 0];
    m[var.index()] = 1;
    m[Axis::Z.index()] += z_pow;
    g.delta_comp(comp).coeff(&m)
}

enum KindSeed {
    Spike { la: Scalar, mu: Scalar },
    Half,
}

// ---------------------------------------------------------------------------
// straightening
// ---------------------------------------------------------------------------

/// Move the invariant curve of a reducible pair onto the third axis and
/// normalize the axis restriction.
///
/// Accepts degenerate spikes whose transverse eigenvalues lie in the scalar
/// field and non-simple half corners; everything else is rejected as
/// irreducible. The curve must be transverse to the marked plane and carry
/// the same marked divisor as the germ.
pub fn straighten_pair(f: &Germ, curve: &FormalCurve) -> Result<Straightened> {
    let class = classify_germ(f)?;
    let (change, c, seed) = match &class {
        SingularityClass::DegenerateSpike(d) => {
            let (la, mu) = d.eigenvalues.clone().ok_or_else(|| Error::NotReducible {
                reason: "spike eigenvalues leave the scalar field".into(),
            })?;
            (d.change.clone(), d.c, KindSeed::Spike { la, mu })
        }
        SingularityClass::HalfCorner(h) => {
            if h.simple {
                return Err(Error::NotReducible {
                    reason: "simple half corner has no curve transverse to the marked plane"
                        .into(),
                });
            }
            (h.change.clone(), h.c, KindSeed::Half)
        }
        other => {
            return Err(Error::NotReducible {
                reason: format!(
                    "{} germs are outside the reducible families",
                    other.family_name()
                ),
            })
        }
    };
    if curve.divisor() != f.divisor() {
        return Err(Error::NotReducible {
            reason: "curve and germ carry different marked divisors".into(),
        });
    }

    // Normal coordinates: the marked plane becomes z^c on the third axis.
    let dz: Mono = [0, 0, c];
    let g1 = conjugate_linear(f, &change, dz)?;

    // For spikes, diagonalize the transverse 2×2 block.
    let (g2, total_change, kind) = match seed {
        KindSeed::Half => {
            let a_x = linear_coeff(&g1, Axis::X, Axis::X, c);
            (g1, change, ReducedKind::HalfCorner { a_x })
        }
        KindSeed::Spike { la, mu } => {
            let lp = linear_coeff(&g1, Axis::X, Axis::X, c);
            let a1 = linear_coeff(&g1, Axis::X, Axis::Y, c);
            let a2 = linear_coeff(&g1, Axis::Y, Axis::X, c);
            let mp = linear_coeff(&g1, Axis::Y, Axis::Y, c);
            if a1.is_zero() && a2.is_zero() {
                let kind = ReducedKind::Spike {
                    lambda: lp,
                    mu: mp,
                };
                (g1, change, kind)
            } else {
                let col = |ev: &Scalar| -> [Scalar; 2] {
                    let v = [a1.clone(), ev - &lp];
                    if !v[0].is_zero() || !v[1].is_zero() {
                        v
                    } else {
                        [ev - &mp, a2.clone()]
                    }
                };
                let c1 = col(&la);
                let c2 = col(&mu);
                let vmat = [
                    [c1[0].clone(), c2[0].clone(), Scalar::zero()],
                    [c1[1].clone(), c2[1].clone(), Scalar::zero()],
                    [Scalar::zero(), Scalar::zero(), Scalar::one()],
                ];
                let vinv = invert_matrix(&vmat).ok_or_else(|| Error::NotReducible {
                    reason: "spike block is not diagonalizable over the scalar field".into(),
                })?;
                let g2 = conjugate_with(&g1, &matrix_to_map(&vmat), &matrix_to_map(&vinv), dz)?;
                let lambda = linear_coeff(&g2, Axis::X, Axis::X, c);
                let mu_read = linear_coeff(&g2, Axis::Y, Axis::Y, c);
                if !linear_coeff(&g2, Axis::X, Axis::Y, c).is_zero()
                    || !linear_coeff(&g2, Axis::Y, Axis::X, c).is_zero()
                {
                    return Err(Error::NotReducible {
                        reason: "transverse block resists diagonalization".into(),
                    });
                }
                (
                    g2,
                    matmul(&vinv, &change),
                    ReducedKind::Spike {
                        lambda,
                        mu: mu_read,
                    },
                )
            }
        }
    };

    // Express the curve in the new coordinates and reparameterize it by
    // the third coordinate so it becomes a graph over the axis.
    let depth = curve.depth() as usize;
    let jets = [curve.jet(Axis::X), curve.jet(Axis::Y), curve.jet(Axis::Z)];
    let q: [Uni; 3] = std::array::from_fn(|i| {
        let mut acc = Uni::zero();
        for (k, jet) in jets.iter().enumerate() {
            acc = acc.add(&jet.scale(&total_change[i][k]));
        }
        acc
    });
    if !q[2].coeff(0).is_zero() {
        return Err(Error::NotReducible {
            reason: "curve misses the origin in normal coordinates".into(),
        });
    }
    if q[2].coeff(1).is_zero() {
        return Err(Error::NotReducible {
            reason: "curve is tangent to the marked plane".into(),
        });
    }
    let t_of_s = reverse_jet(&q[2], depth);
    let xt = q[0].compose_trunc(&t_of_s, depth);
    let yt = q[1].compose_trunc(&t_of_s, depth);

    // Shift the curve onto the axis.
    let xs = uni_along(&xt, Axis::Z);
    let ys = uni_along(&yt, Axis::Z);
    let varx = Series::variable(Axis::X, Cert::Exact);
    let vary = Series::variable(Axis::Y, Cert::Exact);
    let varz = Series::variable(Axis::Z, Cert::Exact);
    let phi = [varx.add(&xs), vary.add(&ys), varz.clone()];
    let psi = [varx.sub(&xs), vary.sub(&ys), varz];
    let mut g = conjugate_with(&g2, &phi, &psi, dz)?;

    // Pure-axis residue in the transverse components measures how far the
    // truncated curve is from exact invariance; it caps the usable jets.
    let junk_val = [Axis::X, Axis::Y]
        .iter()
        .filter_map(|ax| pure_axis_poly(&g.delta_comp(*ax), Axis::Z).valuation())
        .min();
    let junk_horizon = match junk_val {
        Some(v) => (curve.depth()).min(v.saturating_sub(1) as u32),
        None => curve.depth(),
    };

    // Axis restriction data.
    let tp = pure_axis_poly(&g.delta_comp(Axis::Z), Axis::Z);
    if tp.is_zero() {
        return Err(Error::CurvePointwiseFixed);
    }
    let rv = tp.valuation().expect("nonzero polynomial has a valuation") as u32;
    if rv < 2 {
        return Err(Error::NotReducible {
            reason: "axis restriction moves at linear order".into(),
        });
    }
    let r = rv - 1;
    let e = match kind {
        ReducedKind::Spike { .. } => r.checked_sub(c),
        ReducedKind::HalfCorner { .. } => r.checked_sub(c + 1),
    }
    .ok_or_else(|| Error::NotReducible {
        reason: "restriction order is below the marked multiplicity".into(),
    })?;
    let trust = curve_trust(&g);
    if trust < 2 * r + 1 {
        return Err(Error::NeedHigherOrder {
            have: trust,
            need: 2 * r + 1,
        });
    }

    // Sweep the cross-linear slots below level r. The diagonal gap is a
    // unit slope for both families, so each slot is killable by a shear.
    let d_lead = match &kind {
        ReducedKind::Spike { lambda, mu } => lambda - mu,
        ReducedKind::HalfCorner { a_x } => a_x.clone(),
    };
    if !d_lead.is_zero() {
        for j in 1..=(r - c) {
            let slot = (c + j) as usize;
            for (target, source) in [(Axis::X, Axis::Y), (Axis::Y, Axis::X)] {
                g = tune_slot(
                    &g,
                    |h| linear_slice(&h.delta_comp(target), source, Axis::Z).coeff(slot),
                    |h, s| {
                        let neg = -s;
                        conjugate_with(
                            h,
                            &shear_map(target, source, j, s),
                            &shear_map(target, source, j, &neg),
                            dz,
                        )
                    },
                    "cross-linear slot",
                )?;
            }
        }
    }

    // Normalize the restriction: clear the slots strictly between the
    // leading term and the resonant slot at 2r + 1.
    for slot in (r + 2)..=(2 * r) {
        let m_deg = slot - (r + 1);
        g = tune_slot(
            &g,
            |h| pure_axis_poly(&h.delta_comp(Axis::Z), Axis::Z).coeff(slot as usize),
            |h, s| h.conjugate(&zshift_map(m_deg, s)),
            "restriction slot",
        )?;
    }

    // Re-measure after all conjugations before reading the residual slot.
    let trust = curve_trust(&g);
    if trust < 2 * r + 1 {
        return Err(Error::NeedHigherOrder {
            have: trust,
            need: 2 * r + 1,
        });
    }
    let tp = pure_axis_poly(&g.delta_comp(Axis::Z), Axis::Z);
    let lead = tp.coeff((r + 1) as usize);
    if lead.is_zero() || tp.valuation() != Some((r + 1) as usize) {
        return Err(Error::NotReducible {
            reason: "restriction lost its leading slot during normalization".into(),
        });
    }
    for slot in (r + 2)..=(2 * r) {
        if !tp.coeff(slot as usize).is_zero() {
            return Err(Error::NotReducible {
                reason: "restriction slot survived normalization".into(),
            });
        }
    }
    let residual = tp.coeff((2 * r + 1) as usize);
    let beta = &residual * &(&lead * &lead).inv()?;

    Ok(Straightened {
        germ: g,
        kind,
        c,
        e,
        r,
        lead,
        beta,
        junk_horizon,
    })
}

// ---------------------------------------------------------------------------
// tower reduction
// ---------------------------------------------------------------------------

/// Run the blow-up tower on a straightened pair and extract the multiplier
/// logarithms of the reduced form.
pub fn rs_reduce(s: &Straightened) -> Result<RSData> {
    let (r, c, e) = (s.r, s.c, s.e);
    let n = r + e + 2;
    let need = n + r;
    if s.junk_horizon < need {
        return Err(Error::NeedHigherOrder {
            have: s.junk_horizon,
            need,
        });
    }

    let origin = [Scalar::zero(), Scalar::zero(), Scalar::one()];
    let mut g = s.germ.clone();
    for _ in 0..n {
        g = lift_point_blowup(&g, &origin, Axis::Z)?;
    }
    let trust = curve_trust(&g);
    if trust < 2 * r + 1 {
        return Err(Error::NeedHigherOrder {
            have: trust,
            need: 2 * r + 1,
        });
    }
    if g.divisor() != [0, 0, c] {
        return Err(Error::NotReducible {
            reason: "marked divisor drifted through the tower".into(),
        });
    }

    let dx = g.delta_comp(Axis::X);
    let dy = g.delta_comp(Axis::Y);
    let dzc = g.delta_comp(Axis::Z);

    // Window scan: everything outside the multiplier slots must sit above
    // the resolution level.
    let scan = |sr: &Series, diag: Axis, cross: Axis, what: &str| -> Result<()> {
        for (m, coeff) in sr.terms() {
            if coeff.is_zero() {
                continue;
            }
            let xy = m[Axis::X.index()] + m[Axis::Y.index()];
            let k = m[Axis::Z.index()];
            let ok = if xy == 1 && m[diag.index()] == 1 {
                true
            } else if xy == 1 && m[cross.index()] == 1 {
                k >= r
            } else {
                k >= r + 1
            };
            if !ok {
                return Err(Error::NotReducible {
                    reason: format!(
                        "{what} component escapes the normal-form window at {}",
                        mono_display(m)
                    ),
                });
            }
        }
        Ok(())
    };
    scan(&dx, Axis::X, Axis::Y, "first")?;
    scan(&dy, Axis::Y, Axis::X, "second")?;
    for (m, coeff) in dzc.terms() {
        if coeff.is_zero() {
            continue;
        }
        let xy = m[Axis::X.index()] + m[Axis::Y.index()];
        if xy >= 1 && m[Axis::Z.index()] < 2 * r + 2 {
            return Err(Error::NotReducible {
                reason: format!(
                    "third component escapes the normal-form window at {}",
                    mono_display(m)
                ),
            });
        }
    }
    let tp = pure_axis_poly(&dzc, Axis::Z);
    if tp.valuation() != Some((r + 1) as usize) || tp.coeff((r + 1) as usize) != s.lead {
        return Err(Error::NotReducible {
            reason: "restriction leading slot drifted through the tower".into(),
        });
    }
    for slot in (r + 2)..=(2 * r) {
        if !tp.coeff(slot as usize).is_zero() {
            return Err(Error::NotReducible {
                reason: "normalized restriction slot reappeared in the tower".into(),
            });
        }
    }

    let m1 = Uni::one().add(&linear_slice(&dx, Axis::X, Axis::Z));
    let n1 = linear_slice(&dx, Axis::Y, Axis::Z);
    let m2 = Uni::one().add(&linear_slice(&dy, Axis::Y, Axis::Z));
    let n2 = linear_slice(&dy, Axis::X, Axis::Z);

    let l1 = log_unit(&m1, r as usize);
    let l2 = log_unit(&m2, r as usize);
    let d1: Vec<Scalar> = (0..r).map(|k| l1.coeff(k as usize)).collect();
    let d2: Vec<Scalar> = (0..r).map(|k| l2.coeff(k as usize)).collect();
    let c11 = l1.coeff(r as usize);
    let c22 = l2.coeff(r as usize);
    let c12 = n1.coeff(r as usize);
    let c21 = n2.coeff(r as usize);

    let d1_poly = l1.truncate((r - 1) as usize);
    let d2_poly = l2.truncate((r - 1) as usize);
    match &s.kind {
        ReducedKind::Spike { lambda, mu } => {
            if d1_poly.scale(mu) != d2_poly.scale(lambda) {
                return Err(Error::NotReducible {
                    reason: "multiplier logarithms are not proportional to the eigenvalues"
                        .into(),
                });
            }
        }
        ReducedKind::HalfCorner { .. } => {
            if !d2_poly.is_zero() {
                return Err(Error::NotReducible {
                    reason: "half-corner reduction left a nonzero second logarithm".into(),
                });
            }
        }
    }
    if d1_poly != d2_poly && !(c12.is_zero() && c21.is_zero()) {
        return Err(Error::NotReducible {
            reason: "off-diagonal residue with distinct multiplier logarithms".into(),
        });
    }

    Ok(RSData {
        kind: s.kind.clone(),
        r,
        c,
        e,
        blowups: n,
        lead: s.lead.clone(),
        beta: s.beta.clone(),
        d1,
        d2,
        c11,
        c12,
        c21,
        c22,
    })
}

// ---------------------------------------------------------------------------
// certified signs along the parabolic directions
// ---------------------------------------------------------------------------

/// Interval enclosure of the principal argument of a nonzero scalar.
fn arg_itv(s: &Scalar, bits: u32) -> Itv {
    let re = s.re();
    let im = s.im();
    if re.is_zero() {
        let half = pi(bits).scale(&Rat::new(BigInt::one(), BigInt::from(2)));
        return if im.is_positive() { half } else { half.neg() };
    }
    let base = atan_itv(&Itv::point(im / re), bits);
    if re.is_positive() {
        base
    } else if im.is_negative() {
        base.sub(&pi(bits))
    } else {
        base.add(&pi(bits))
    }
}

/// Enclosure of `D·w^k` where `w` is the `t`-th root of `w^r = g`.
fn enclose_v(dcoef: &Scalar, gv: &Scalar, r: u32, t: u32, k: u32, bits: u32) -> CItv {
    let wb = bits + 32;
    let re2 = gv.re() * gv.re();
    let im2 = gv.im() * gv.im();
    let norm = &re2 + &im2;
    let rho = nth_root(&rat_pow(&norm, k), 2 * r, wb);
    let two_pi = pi(wb).scale(&Rat::from_integer(BigInt::from(2)));
    let raw = arg_itv(gv, wb)
        .add(&two_pi.scale(&Rat::from_integer(BigInt::from(t))))
        .scale(&Rat::new(BigInt::from(k), BigInt::from(r)));
    // Recenter the angle near zero so the polar kernel stays in range.
    let q = round_rat(&(&raw.mid() / &two_pi.mid()));
    let theta = raw.sub(&two_pi.scale(&Rat::from_integer(q)));
    let w = CItv::from_polar(&rho, &theta, bits);
    CItv::point(dcoef.re().clone(), dcoef.im().clone()).mul(&w)
}

/// Enclosure of the lattice index `a` with `Arg(D·w^k) = a·π/(2r)`.
fn ray_index_enclosure(dcoef: &Scalar, gv: &Scalar, r: u32, t: u32, k: u32, bits: u32) -> Itv {
    let num = arg_itv(dcoef, bits)
        .scale(&Rat::from_integer(BigInt::from(2 * r)))
        .add(&arg_itv(gv, bits).scale(&Rat::from_integer(BigInt::from(2 * k))));
    num.mul(&pi(bits).recip())
        .add(&Itv::point(Rat::from_integer(BigInt::from(4 * k * t))))
}

/// Certified sign of `Re(D·w^k)` for the `t`-th root of `w^r = g`.
///
/// A power test decides whether the value lies on a half-axis of the
/// `4r`-th-root lattice: `(D·w^k)^{2r} = D^{2r}·g^{2k}` is exact and
/// independent of `t`. If its imaginary part vanishes the argument is an
/// exact multiple of `π/(2r)` and is pinned to its integer index; otherwise
/// the real part is provably nonzero and interval evaluation terminates.
fn sign_re_slot(dcoef: &Scalar, gv: &Scalar, r: u32, t: u32, k: u32) -> Result<i8> {
    if dcoef.is_zero() {
        return Ok(0);
    }
    let power = &pow_scalar(dcoef, 2 * r) * &pow_scalar(gv, 2 * k);
    let cap = precision_cap();
    let mut bits: u32 = 64;
    if !power.im().is_zero() {
        loop {
            if let Some(sig) = enclose_v(dcoef, gv, r, t, k, bits).re.sign_strict() {
                return Ok(sig);
            }
            if bits >= cap {
                return Err(Error::PrecisionExhausted { bits });
            }
            bits = (bits * 2).min(cap);
        }
    }
    loop {
        let a = ray_index_enclosure(dcoef, gv, r, t, k, bits);
        let lo = a.lo().ceil().to_integer();
        let hi = a.hi().floor().to_integer();
        if lo == hi {
            let four_r = BigInt::from(4 * r);
            let m = ((lo % &four_r) + &four_r) % &four_r;
            let m = m.to_u32().expect("ray residue fits in u32");
            let sign = if m == r || m == 3 * r {
                0
            } else if m < r || m > 3 * r {
                1
            } else {
                -1
            };
            return Ok(sign);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(cap);
    }
}

/// Certified node/saddle table over the `r` parabolic directions.
///
/// Direction `t` carries the weight `w` with `w^r = −1/lead` and argument
/// `(Arg(−1/lead) + 2πt)/r`. A transverse coordinate is attracted when the
/// first nonzero entry of its sign vector is negative; each node adds one
/// to the stable dimension on top of the parabolic curve itself.
pub fn parabolic_report(d: &RSData) -> Result<ParabolicReport> {
    let gv = -&d.lead.inv()?;
    let r = d.r;
    let mut directions = Vec::with_capacity(r as usize);
    for t in 0..r {
        let signs = |coefs: &[Scalar]| -> Result<Vec<i8>> {
            (1..r)
                .map(|k| sign_re_slot(&coefs[k as usize], &gv, r, t, k))
                .collect()
        };
        let first = signs(&d.d1)?;
        let second = signs(&d.d2)?;
        let node = |v: &[i8]| {
            v.iter()
                .copied()
                .find(|s| *s != 0)
                .map(|s| s == -1)
                .unwrap_or(false)
        };
        let node_first = node(&first);
        let node_second = node(&second);
        let dimension = 1 + node_first as u32 + node_second as u32;
        directions.push(ParabolicDirection {
            index: t,
            first,
            second,
            node_first,
            node_second,
            dimension,
        });
    }
    Ok(ParabolicReport {
        r,
        count: r,
        directions,
    })
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

fn scalar_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl RSData {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.label(),
            "r": self.r,
            "c": self.c,
            "e": self.e,
            "blowups": self.blowups,
            "lead": self.lead.to_string(),
            "beta": self.beta.to_string(),
            "d1": scalar_strings(&self.d1),
            "d2": scalar_strings(&self.d2),
            "c11": self.c11.to_string(),
            "c12": self.c12.to_string(),
            "c21": self.c21.to_string(),
            "c22": self.c22.to_string(),
        })
    }
}

impl fmt::Display for RSData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "reduced form: {} (c={}, e={}, r={}, {} blow-ups)",
            self.kind.label(),
            self.c,
            self.e,
            self.r,
            self.blowups
        )?;
        writeln!(f, "  restriction: lead={}  beta={}", self.lead, self.beta)?;
        writeln!(f, "  d1 = [{}]", scalar_strings(&self.d1).join(", "))?;
        writeln!(f, "  d2 = [{}]", scalar_strings(&self.d2).join(", "))?;
        write!(
            f,
            "  level-r constants: c11={}  c12={}  c21={}  c22={}",
            self.c11, self.c12, self.c21, self.c22
        )
    }
}

fn sign_chars(v: &[i8]) -> String {
    let body: Vec<&str> = v
        .iter()
        .map(|s| match s.cmp(&0) {
            std::cmp::Ordering::Greater => "+",
            std::cmp::Ordering::Less => "-",
            std::cmp::Ordering::Equal => "0",
        })
        .collect();
    format!("({})", body.join(","))
}

impl ParabolicReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "r": self.r,
            "count": self.count,
            "directions": self.directions.iter().map(|d| json!({
                "index": d.index,
                "first": d.first,
                "second": d.second,
                "node_first": d.node_first,
                "node_second": d.node_second,
                "dimension": d.dimension,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ParabolicReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parabolic manifolds: {} directions", self.count)?;
        writeln!(f, "  dir  first      second     dim")?;
        for d in &self.directions {
            writeln!(
                f,
                "  {:>3}  {:<9}  {:<9}  {}",
                d.index,
                sign_chars(&d.first),
                sign_chars(&d.second),
                d.dimension
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn si(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn series(ts: Vec<(Mono, Scalar)>) -> Series {
        Series::from_terms(ts, Cert::Exact)
    }

    fn germ(delta: [Series; 3], n: u32, divisor: Mono) -> Germ {
        Germ::from_displacement(delta, n, divisor).expect("fixture must be a valid germ")
    }

    /// δ = (−x z², y z², Σ coef·z^k) with divisor z².
    fn spike_fixture(zslots: &[(u32, Scalar)], n: u32) -> Germ {
        germ(
            [
                series(vec![([1, 0, 2], si(-1))]),
                series(vec![([0, 1, 2], si(1))]),
                Series::from_terms(
                    zslots.iter().map(|(k, s)| ([0, 0, *k], s.clone())),
                    Cert::Exact,
                ),
            ],
            n,
            [0, 0, 2],
        )
    }

    fn axis_curve(depth: u32, divisor: Mono, axis: Axis) -> FormalCurve {
        FormalCurve::graph(axis, Uni::zero(), Uni::zero(), depth, divisor)
    }

    fn reduce(f: &Germ, curve: &FormalCurve) -> RSData {
        let st = straighten_pair(f, curve).expect("straightening must succeed");
        rs_reduce(&st).expect("reduction must succeed")
    }

    #[test]
    fn log_jet_matches_the_alternating_series() {
        let one_plus_z = Uni::one().add(&Uni::monomial(1, si(1)));
        let l = log_unit(&one_plus_z, 5);
        assert_eq!(l.coeff(1), si(1));
        assert_eq!(l.coeff(2), Scalar::from_rat(-1, 2));
        assert_eq!(l.coeff(3), Scalar::from_rat(1, 3));
        assert_eq!(l.coeff(4), Scalar::from_rat(-1, 4));
        assert_eq!(l.coeff(5), Scalar::from_rat(1, 5));
        // Logarithms add under truncated products.
        let sq = one_plus_z.mul_trunc(&one_plus_z, 5);
        assert_eq!(log_unit(&sq, 5), l.scale(&si(2)));
    }

    #[test]
    fn jet_reversion_inverts_composition() {
        let s = Uni::monomial(1, si(1))
            .add(&Uni::monomial(2, si(3)))
            .add(&Uni::monomial(3, si(-1)));
        let t = reverse_jet(&s, 8);
        let ident = Uni::monomial(1, si(1));
        assert_eq!(s.compose_trunc(&t, 8), ident.truncate(8));
        assert_eq!(t.compose_trunc(&s, 8), ident.truncate(8));
    }

    #[test]
    fn straightening_reads_the_marked_restriction() {
        let f = spike_fixture(&[(4, si(-1)), (7, si(7))], 16);
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let st = straighten_pair(&f, &curve).expect("straightening must succeed");
        assert_eq!(
            st.kind,
            ReducedKind::Spike {
                lambda: si(-1),
                mu: si(1)
            }
        );
        assert_eq!((st.c, st.e, st.r), (2, 1, 3));
        assert_eq!(st.lead, si(-1));
        assert_eq!(st.beta, si(7));
        assert_eq!(st.junk_horizon, 12);
        // The axis is exactly invariant here, so nothing is truncated.
        assert_eq!(curve_trust(&st.germ), u32::MAX);
    }

    #[test]
    fn spike_reduction_reaches_the_normal_form() {
        let f = spike_fixture(&[(4, si(-1)), (7, si(7))], 16);
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let data = reduce(&f, &curve);
        assert_eq!(data.r, 3);
        assert_eq!(data.blowups, 6);
        assert_eq!(data.lead, si(-1));
        assert_eq!(data.beta, si(7));
        assert_eq!(data.d1, vec![si(0), si(0), si(-1)]);
        assert_eq!(data.d2, vec![si(0), si(0), si(1)]);
        assert_eq!(data.c11, si(6));
        assert_eq!(data.c22, si(6));
        assert_eq!(data.c12, si(0));
        assert_eq!(data.c21, si(0));
    }

    #[test]
    fn generic_spike_has_three_planar_manifolds() {
        let f = spike_fixture(&[(4, si(-1)), (7, si(7))], 16);
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let report = parabolic_report(&reduce(&f, &curve)).expect("signs must certify");
        assert_eq!(report.count, 3);
        assert_eq!(report.directions.len(), 3);
        for d in &report.directions {
            assert_eq!(d.dimension, 2);
        }
        // Hand table: direction 0 attracts the first coordinate, the other
        // two attract the second.
        assert_eq!(report.directions[0].first, vec![0, -1]);
        assert_eq!(report.directions[0].second, vec![0, 1]);
        assert!(report.directions[0].node_first && !report.directions[0].node_second);
        assert_eq!(report.directions[1].first, vec![0, 1]);
        assert_eq!(report.directions[1].second, vec![0, -1]);
        assert_eq!(report.directions[2].first, vec![0, 1]);
        assert_eq!(report.directions[2].second, vec![0, -1]);
    }

    #[test]
    fn borderline_leading_term_drops_one_dimension() {
        // lead = 1+i puts every direction weight on the ray lattice.
        let f = spike_fixture(&[(4, Scalar::from_parts(1, 1, 1, 1))], 16);
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let data = reduce(&f, &curve);
        assert_eq!(data.beta, si(0));
        assert_eq!(data.c11, Scalar::from_parts(-6, 1, -6, 1));
        let report = parabolic_report(&data).expect("signs must certify");
        let dims: Vec<u32> = report.directions.iter().map(|d| d.dimension).collect();
        assert_eq!(dims, vec![1, 2, 2]);
        // Direction 0 sits on the lattice axis in both coordinates.
        assert_eq!(report.directions[0].first, vec![0, 0]);
        assert_eq!(report.directions[0].second, vec![0, 0]);
    }

    #[test]
    fn half_corner_reduction_kills_the_second_logarithm() {
        let f = germ(
            [
                series(vec![([1, 0, 1], si(2))]),
                series(vec![([1, 0, 2], si(1)), ([0, 1, 2], si(3))]),
                series(vec![([0, 0, 3], si(-1)), ([0, 0, 5], si(4))]),
            ],
            16,
            [0, 0, 1],
        );
        let curve = axis_curve(12, [0, 0, 1], Axis::Z);
        let st = straighten_pair(&f, &curve).expect("straightening must succeed");
        assert_eq!(st.kind, ReducedKind::HalfCorner { a_x: si(2) });
        assert_eq!((st.c, st.e, st.r), (1, 0, 2));
        assert_eq!(st.lead, si(-1));
        assert_eq!(st.beta, si(4));
        let data = rs_reduce(&st).expect("reduction must succeed");
        assert_eq!(data.blowups, 4);
        assert_eq!(data.d1, vec![si(0), si(2)]);
        assert_eq!(data.d2, vec![si(0), si(0)]);
        assert_eq!(data.c11, si(2));
        assert_eq!(data.c12, si(0));
        assert_eq!(data.c21, si(0));
        let report = parabolic_report(&data).expect("signs must certify");
        assert_eq!(report.count, 2);
        let dims: Vec<u32> = report.directions.iter().map(|d| d.dimension).collect();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn cross_terms_are_swept_before_lifting() {
        let f = germ(
            [
                series(vec![([1, 0, 2], si(-1)), ([0, 1, 3], si(5))]),
                series(vec![([0, 1, 2], si(1)), ([1, 0, 3], si(-2))]),
                series(vec![([0, 0, 4], si(-1)), ([0, 0, 7], si(7))]),
            ],
            16,
            [0, 0, 2],
        );
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let data = reduce(&f, &curve);
        let clean = reduce(
            &spike_fixture(&[(4, si(-1)), (7, si(7))], 16),
            &axis_curve(12, [0, 0, 2], Axis::Z),
        );
        assert_eq!(data, clean);
    }

    #[test]
    fn exact_conjugation_leaves_the_data_invariant() {
        let f = spike_fixture(&[(4, si(-1)), (7, si(7))], 16);
        // Conjugate by an exact polynomial shift; the curve follows along.
        let xs = series(vec![([0, 0, 2], si(1))]);
        let ys = series(vec![([0, 0, 3], si(-2))]);
        let varx = Series::variable(Axis::X, Cert::Exact);
        let vary = Series::variable(Axis::Y, Cert::Exact);
        let varz = Series::variable(Axis::Z, Cert::Exact);
        let phi = [varx.add(&xs), vary.add(&ys), varz.clone()];
        let psi = [varx.sub(&xs), vary.sub(&ys), varz];
        let moved = conjugate_with(&f, &phi, &psi, [0, 0, 2]).expect("conjugation must succeed");
        let curve = FormalCurve::graph(
            Axis::Z,
            Uni::monomial(2, si(-1)),
            Uni::monomial(3, si(2)),
            12,
            [0, 0, 2],
        );
        let data = reduce(&moved, &curve);
        let clean = reduce(
            &spike_fixture(&[(4, si(-1)), (7, si(7))], 16),
            &axis_curve(12, [0, 0, 2], Axis::Z),
        );
        assert_eq!(data, clean);
    }

    #[test]
    fn permuted_axes_reduce_identically() {
        // The spike fixture with the first and third axes exchanged.
        let f = germ(
            [
                series(vec![([4, 0, 0], si(-1)), ([7, 0, 0], si(7))]),
                series(vec![([2, 1, 0], si(1))]),
                series(vec![([2, 0, 1], si(-1))]),
            ],
            16,
            [2, 0, 0],
        );
        let curve = axis_curve(12, [2, 0, 0], Axis::X);
        let data = reduce(&f, &curve);
        let clean = reduce(
            &spike_fixture(&[(4, si(-1)), (7, si(7))], 16),
            &axis_curve(12, [0, 0, 2], Axis::Z),
        );
        // The permuted chart relabels the two transverse coordinates; the
        // reduced data agrees up to that swap.
        assert_eq!(
            data.kind,
            ReducedKind::Spike {
                lambda: si(1),
                mu: si(-1)
            }
        );
        assert_eq!(
            (data.r, data.c, data.e, data.blowups),
            (clean.r, clean.c, clean.e, clean.blowups)
        );
        assert_eq!(data.lead, clean.lead);
        assert_eq!(data.beta, clean.beta);
        assert_eq!(data.d1, clean.d2);
        assert_eq!(data.d2, clean.d1);
        assert_eq!(data.c11, clean.c22);
        assert_eq!(data.c22, clean.c11);
        assert_eq!(data.c12, clean.c21);
        assert_eq!(data.c21, clean.c12);
    }

    #[test]
    fn middle_slots_are_normalized_away() {
        let slots = [(4, si(-1)), (5, si(5)), (6, si(-3)), (7, si(2))];
        let f = spike_fixture(&slots, 18);
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let st = straighten_pair(&f, &curve).expect("straightening must succeed");
        assert_eq!(st.r, 3);
        assert_eq!(st.lead, si(-1));
        let data = rs_reduce(&st).expect("reduction must succeed");
        assert_eq!(data.d1, vec![si(0), si(0), si(-1)]);

        // The normalized data is a conjugation invariant: recompute after
        // an axis-preserving change of coordinates.
        let moved = f
            .conjugate(&zshift_map(1, &si(1)))
            .expect("conjugation must succeed");
        let data2 = reduce(&moved, &curve);
        assert_eq!(data2.r, data.r);
        assert_eq!(data2.lead, data.lead);
        assert_eq!(data2.beta, data.beta);
        assert_eq!(data2.d1, data.d1);
        assert_eq!(data2.d2, data.d2);
        assert_eq!(data2.c11, data.c11);
    }

    #[test]
    fn pointwise_fixed_restriction_is_rejected() {
        let f = germ(
            [
                series(vec![([1, 0, 2], si(-1))]),
                series(vec![([0, 1, 2], si(1))]),
                series(vec![([2, 0, 3], si(1))]),
            ],
            12,
            [0, 0, 2],
        );
        let curve = axis_curve(8, [0, 0, 2], Axis::Z);
        match straighten_pair(&f, &curve) {
            Err(Error::CurvePointwiseFixed) => {}
            other => panic!("expected a pointwise-fixed rejection, got {other:?}"),
        }
    }

    #[test]
    fn non_reducible_classes_are_rejected() {
        // Spinning corner: divisor with two marked planes.
        let sc = germ(
            [
                series(vec![([1, 1, 1], si(1)), ([2, 1, 1], si(1))]),
                series(vec![([1, 2, 1], si(1)), ([0, 3, 1], si(2)), ([0, 2, 2], si(3))]),
                series(vec![([1, 1, 2], si(-1)), ([0, 2, 2], si(2)), ([0, 1, 3], si(3))]),
            ],
            10,
            [0, 1, 1],
        );
        let curve = axis_curve(8, [0, 1, 1], Axis::Z);
        match straighten_pair(&sc, &curve) {
            Err(Error::NotReducible { .. }) => {}
            other => panic!("expected a family rejection, got {other:?}"),
        }

        // Simple half corner: nonzero constant in the second cofactor.
        let simple = germ(
            [
                series(vec![([1, 0, 1], si(2))]),
                series(vec![([0, 0, 2], si(1)), ([1, 0, 2], si(1))]),
                series(vec![([0, 0, 3], si(-1))]),
            ],
            12,
            [0, 0, 1],
        );
        let curve = axis_curve(8, [0, 0, 1], Axis::Z);
        match straighten_pair(&simple, &curve) {
            Err(Error::NotReducible { reason }) => {
                assert!(reason.contains("simple half corner"), "reason: {reason}");
            }
            other => panic!("expected a simple-half-corner rejection, got {other:?}"),
        }
    }

    #[test]
    fn shallow_curves_gate_the_blowup_budget() {
        let f = spike_fixture(&[(4, si(-1)), (7, si(7))], 16);
        let curve = axis_curve(5, [0, 0, 2], Axis::Z);
        let st = straighten_pair(&f, &curve).expect("straightening must succeed");
        assert_eq!(st.junk_horizon, 5);
        match rs_reduce(&st) {
            Err(Error::NeedHigherOrder { have: 5, need: 9 }) => {}
            other => panic!("expected a budget rejection, got {other:?}"),
        }
    }

    #[test]
    fn low_trust_gates_the_extraction() {
        let f = Germ::from_displacement(
            [
                Series::from_terms([([1, 0, 2], si(-1))], Cert::Total(6)),
                Series::from_terms([([0, 1, 2], si(1))], Cert::Total(6)),
                Series::from_terms([([0, 0, 4], si(-1))], Cert::Total(6)),
            ],
            6,
            [0, 0, 2],
        )
        .expect("fixture must be a valid germ");
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        match straighten_pair(&f, &curve) {
            Err(Error::NeedHigherOrder { have: 6, need: 7 }) => {}
            other => panic!("expected a trust rejection, got {other:?}"),
        }
    }

    #[test]
    fn ray_pinning_decides_axis_signs() {
        // Off-lattice value: interval evaluation decides both directions.
        let d = Scalar::from_parts(2, 1, 1, 1);
        let one = si(1);
        assert_eq!(sign_re_slot(&d, &one, 2, 0, 1).unwrap(), 1);
        assert_eq!(sign_re_slot(&d, &one, 2, 1, 1).unwrap(), -1);
        // Lattice value: both roots land exactly on the imaginary axis.
        let d = Scalar::from_parts(1, 1, 1, 1);
        let i = Scalar::i();
        assert_eq!(sign_re_slot(&d, &i, 2, 0, 1).unwrap(), 0);
        assert_eq!(sign_re_slot(&d, &i, 2, 1, 1).unwrap(), 0);
        // Negative real ray.
        assert_eq!(sign_re_slot(&si(-3), &one, 2, 0, 2).unwrap(), -1);
        // Zero coefficient short-circuits.
        assert_eq!(sign_re_slot(&si(0), &one, 3, 1, 2).unwrap(), 0);
    }

    #[test]
    fn reports_serialize_with_directions() {
        let f = spike_fixture(&[(4, si(-1)), (7, si(7))], 16);
        let curve = axis_curve(12, [0, 0, 2], Axis::Z);
        let data = reduce(&f, &curve);
        let dj = data.to_json();
        assert_eq!(dj["kind"], "degenerate-spike");
        assert_eq!(dj["r"], 3);
        assert_eq!(dj["d1"][2], "-1");
        let report = parabolic_report(&data).expect("signs must certify");
        let rj = report.to_json();
        assert_eq!(rj["count"], 3);
        assert_eq!(rj["directions"][0]["dimension"], 2);
        let text = report.to_string();
        assert!(text.contains("3 directions"));
        assert!(text.contains("dim"));
    }
}
