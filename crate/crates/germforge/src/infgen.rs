//! Formal infinitesimal generators: the operator logarithm of a
//! tangent-to-the-identity germ, its time-1 exponential, divisor
//! saturation, linear-part spectral analysis, and the singularity-quality
//! verdicts driving the reduction strategy.

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{mono_total, Axis, Cert, Mono, Scalar, Series};
use crate::germ::Germ;
use crate::{Error, Result};

/// A formal vector field Σ aⱼ ∂ⱼ with truncated polynomial coefficients.
///
/// `removed` records the monomial already divided out by saturation, so a
/// saturated field remembers the divisor it was reduced against.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    comps: [Series; 3],
    n: u32,
    removed: Mono,
}

impl VectorField {
    pub fn new(comps: [Series; 3], n: u32) -> VectorField {
        VectorField { comps, n, removed: [0, 0, 0] }
    }

    pub fn zero(n: u32) -> VectorField {
        VectorField::new(std::array::from_fn(|_| Series::zero(Cert::Total(n))), n)
    }

    pub fn comps(&self) -> &[Series; 3] {
        &self.comps
    }

    pub fn comp(&self, axis: Axis) -> &Series {
        &self.comps[axis.index()]
    }

    pub fn order_n(&self) -> u32 {
        self.n
    }

    pub fn removed(&self) -> Mono {
        self.removed
    }

    /// Minimum valuation across the coefficient components.
    pub fn val(&self) -> u32 {
        self.comps.iter().map(Series::val).min().expect("three components")
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Series::is_zero)
    }

    /// Apply the field as a derivation: φ ↦ Σ aᵢ ∂φ/∂xᵢ, truncated to the
    /// working order.
    pub fn apply(&self, phi: &Series) -> Series {
        let mut out = Series::zero(Cert::Total(self.n));
        for (i, a) in self.comps.iter().enumerate() {
            out = out.add(&a.mul(&phi.derivative(Axis::from_index(i))));
        }
        out.truncate_total(self.n)
    }

    /// Divide every component by a monomial, recording it as removed.
    pub fn saturate(&self, m: &Mono) -> Result<VectorField> {
        let mut comps: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Exact));
        for (j, c) in self.comps.iter().enumerate() {
            comps[j] = c.div_monomial(m).map_err(|_| Error::SaturationFails { comp: j })?;
        }
        let mut removed = self.removed;
        for k in 0..3 {
            removed[k] += m[k];
        }
        Ok(VectorField { comps, n: self.n.saturating_sub(mono_total(m)), removed })
    }

    /// Serialize with the same coefficient schema as germs.
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .comps
            .iter()
            .map(|d| {
                Value::Array(
                    d.terms()
                        .map(|(m, c)| json!([[m[0], m[1], m[2]], c.to_string()]))
                        .collect(),
                )
            })
            .collect();
        json!({
            "N": self.n,
            "removed": [self.removed[0], self.removed[1], self.removed[2]],
            "comps": comps,
        })
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["d/dx", "d/dy", "d/dz"];
        let mut first = true;
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {}", names[j])?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// ------------------------------------------------------------ log and exp

/// The formal infinitesimal generator: the unique vector field of
/// valuation ≥ 2 whose time-1 flow reproduces the germ to its working
/// order. Computed by fixed-point refinement: the correction f − exp(χ)
/// gains at least one degree of valuation per round, so at most n rounds
/// are needed.
pub fn log_germ(f: &Germ) -> Result<VectorField> {
    let n = f.order_n();
    let delta = f.delta();
    let mut chi = VectorField::new(
        std::array::from_fn(|j| delta[j].truncate_total(n)),
        n,
    );
    for _ in 0..=n {
        let g = exp_field(&chi)?;
        let resid: [Series; 3] = std::array::from_fn(|j| {
            f.delta_comp(Axis::from_index(j))
                .truncate_total(n)
                .sub(&g.delta_comp(Axis::from_index(j)).truncate_total(n))
        });
        if resid.iter().all(Series::is_zero) {
            return Ok(chi);
        }
        chi = VectorField::new(
            std::array::from_fn(|j| chi.comps[j].add(&resid[j])),
            n,
        );
    }
    unreachable!("the generator correction gains valuation every round");
}

/// The time-1 formal flow id + Σ_k χᵏ(id)/k!, finite per degree because
/// each application of χ (valuation ≥ 2) raises order by at least one.
pub fn exp_field(chi: &VectorField) -> Result<Germ> {
    if chi.removed != [0, 0, 0] {
        return Err(Error::FlowValuation);
    }
    if !chi.is_zero() && chi.val() < 2 {
        return Err(Error::FlowValuation);
    }
    let n = chi.n;
    let mut coords: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Total(n)));
    for j in 0..3 {
        let mut sum = Series::variable(Axis::from_index(j), Cert::Total(n));
        let mut term = chi.comps[j].truncate_total(n);
        let mut factorial = Scalar::one();
        let mut k: u32 = 1;
        while !term.is_zero() {
            sum = sum.add(&term.scale(&factorial.inv().expect("nonzero factorial")));
            k += 1;
            factorial = &factorial * &Scalar::from_int(i64::from(k));
            term = chi.apply(&term);
        }
        coords[j] = sum;
    }
    Germ::new(coords, n, [0, 0, 0])
}

// -------------------------------------------------- linear-part analysis

/// Exact spectral data of a singular point of a vector field.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPartReport {
    /// M[j][i] = coefficient of xᵢ in the j-th component.
    pub matrix: [[Scalar; 3]; 3],
    /// Monic characteristic polynomial λ³ + c₂λ² + c₁λ + c₀ as [c₀,c₁,c₂].
    pub char_poly: [Scalar; 3],
    /// The spectrum when the characteristic polynomial splits over the
    /// scalar field; `None` when a root lies outside it.
    pub eigenvalues: Option<[Scalar; 3]>,
    /// Least k ≥ 1 with Mᵏ = 0, when M is nilpotent.
    pub nilpotency_index: Option<u32>,
    pub rank: u32,
}

/// Behaviour of a vector field at the origin.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearBehavior {
    /// Nonvanishing field: the origin is not a singular point. Carries the
    /// velocity vector there.
    Regular { velocity: [Scalar; 3] },
    Singular(Box<LinearPartReport>),
}

/// Extract the linear part of a field at the origin, or report the
/// velocity when the origin is regular.
pub fn linear_part(chi: &VectorField) -> LinearBehavior {
    let velocity: [Scalar; 3] = std::array::from_fn(|j| chi.comps[j].coeff(&[0, 0, 0]));
    if velocity.iter().any(|v| !v.is_zero()) {
        return LinearBehavior::Regular { velocity };
    }
    let matrix: [[Scalar; 3]; 3] = std::array::from_fn(|j| {
        std::array::from_fn(|i| chi.comps[j].coeff(&Axis::from_index(i).unit_mono()))
    });
    let trace = &(&matrix[0][0] + &matrix[1][1]) + &matrix[2][2];
    let det = det3(&matrix);
    // sum of principal 2×2 minors
    let mut minors = Scalar::zero();
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let m = &(&matrix[a][a] * &matrix[b][b]) - &(&matrix[a][b] * &matrix[b][a]);
        minors = &minors + &m;
    }
    // λ³ − tr·λ² + minors·λ − det
    let char_poly = [-&det, minors, -&trace];
    let eigenvalues = solve_monic_cubic(&char_poly).map(|mut roots| {
        roots.sort();
        roots
    });
    let nilpotent = char_poly.iter().all(Scalar::is_zero);
    let nilpotency_index = if nilpotent {
        let mut p = matrix.clone();
        let mut k = 1;
        while p.iter().flatten().any(|c| !c.is_zero()) {
            p = mat_mul(&p, &matrix);
            k += 1;
        }
        Some(k)
    } else {
        None
    };
    let rank = mat_rank(&matrix);
    debug_assert!(cayley_hamilton_holds(&matrix, &char_poly), "char poly must annihilate M");
    LinearBehavior::Singular(Box::new(LinearPartReport {
        matrix,
        char_poly,
        eigenvalues,
        nilpotency_index,
        rank,
    }))
}

fn det3(m: &[[Scalar; 3]; 3]) -> Scalar {
    let mut det = Scalar::zero();
    for (c0, c1, c2, sgn) in
        [(0, 1, 2, 1i64), (1, 2, 0, 1), (2, 0, 1, 1), (2, 1, 0, -1), (1, 0, 2, -1), (0, 2, 1, -1)]
    {
        let p = &(&m[0][c0] * &m[1][c1]) * &m[2][c2];
        det = &det + &(&p * &Scalar::from_int(sgn));
    }
    det
}

fn mat_mul(a: &[[Scalar; 3]; 3], b: &[[Scalar; 3]; 3]) -> [[Scalar; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = Scalar::zero();
            for k in 0..3 {
                s = &s + &(&a[i][k] * &b[k][j]);
            }
            s
        })
    })
}

fn mat_rank(m: &[[Scalar; 3]; 3]) -> u32 {
    let mut rows: Vec<Vec<Scalar>> = m.iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..3 {
        if let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            rows.swap(rank, p);
            let inv = rows[rank][col].inv().expect("pivot nonzero");
            for r in rank + 1..rows.len() {
                let factor = &rows[r][col] * &inv;
                for c in col..3 {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
            rank += 1;
        }
    }
    rank as u32
}

fn cayley_hamilton_holds(m: &[[Scalar; 3]; 3], c: &[Scalar; 3]) -> bool {
    let m2 = mat_mul(m, m);
    let m3 = mat_mul(&m2, m);
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { Scalar::one() } else { Scalar::zero() };
            let v = &(&m3[i][j] + &(&c[2] * &m2[i][j]))
                + &(&(&c[1] * &m[i][j]) + &(&c[0] * &id));
            if !v.is_zero() {
                return false;
            }
        }
    }
    true
}

// ------------------------------------------------------- exact root search

/// Roots of λ² + bλ + c over the scalar field, when the discriminant is an
/// exact square there.
fn solve_monic_quadratic(b: &Scalar, c: &Scalar) -> Option<[Scalar; 2]> {
    let disc = &(b * b) - &(&Scalar::from_int(4) * c);
    let s = disc.sqrt_exact()?;
    let half = Scalar::from_rat(1, 2);
    let r1 = &(&-b + &s) * &half;
    let r2 = &(&-b - &s) * &half;
    Some([r1, r2])
}

/// Roots of λ³ + c₂λ² + c₁λ + c₀ over ℚ(i): peel off a Gaussian-rational
/// root (rational-root search in the Gaussian integers after clearing
/// denominators), then solve the remaining quadratic exactly.
fn solve_monic_cubic(c: &[Scalar; 3]) -> Option<[Scalar; 3]> {
    if c[0].is_zero() {
        let [r1, r2] = solve_monic_quadratic(&c[2], &c[1])?;
        return Some([Scalar::zero(), r1, r2]);
    }
    let root = find_gaussian_root(c)?;
    // deflate: λ³ + c₂λ² + c₁λ + c₀ = (λ − r)(λ² + βλ + γ)
    let beta = &c[2] + &root;
    let gamma = &c[1] + &(&root * &beta);
    let [r1, r2] = solve_monic_quadratic(&beta, &gamma)?;
    Some([root, r1, r2])
}

fn eval_monic_cubic(c: &[Scalar; 3], x: &Scalar) -> Scalar {
    // Horner: ((x + c₂)x + c₁)x + c₀
    let mut acc = &*x + &c[2];
    acc = &(&acc * x) + &c[1];
    &(&acc * x) + &c[0]
}

/// Rational-root search for a monic cubic over ℚ(i): clear denominators to
/// a Gaussian-integer polynomial and try p/q with p | a₀ and q | a₃.
fn find_gaussian_root(c: &[Scalar; 3]) -> Option<Scalar> {
    use crate::algebra::uni::gaussian_divisors;
    use num_bigint::BigInt;
    use num_traits::One;
    // common denominator of all coefficients
    let mut den = BigInt::one();
    for s in c {
        den = num_integer::lcm(den.clone(), s.re().denom().clone());
        den = num_integer::lcm(den, s.im().denom().clone());
    }
    let scaled = |s: &Scalar| -> (BigInt, BigInt) {
        let r = s.re() * num_rational::BigRational::from(den.clone());
        let i = s.im() * num_rational::BigRational::from(den.clone());
        (r.to_integer(), i.to_integer())
    };
    let (a0_re, a0_im) = scaled(&c[0]);
    let leading = (den.clone(), BigInt::from(0));
    for (p_re, p_im) in gaussian_divisors(&a0_re, &a0_im) {
        for (q_re, q_im) in gaussian_divisors(&leading.0, &leading.1) {
            let q = Scalar::from_parts(q_re, 1, q_im, 1);
            let p = Scalar::from_parts(p_re, 1, p_im, 1);
            let cand = &p * &q.inv().ok()?;
            if eval_monic_cubic(c, &cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

// ------------------------------------------------------ quality verdicts

/// Verdict on a singular point of the saturated generator. Log-canonical
/// means non-nilpotent linear part; it splits into the radial case
/// (spectrum proportional to a positive integer triple) and the canonical
/// one (everything else).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quality {
    Regular,
    Canonical,
    Radial,
    NonLogCanonical,
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quality::Regular => "regular",
            Quality::Canonical => "canonical",
            Quality::Radial => "radial",
            Quality::NonLogCanonical => "non-log-canonical",
        };
        write!(f, "{s}")
    }
}

/// Is the spectrum of the form λ·(n₁,n₂,n₃) with nᵢ positive integers?
/// Equivalent to: no zero eigenvalue and both ratios to the first are
/// positive rationals. A radial spectrum always lies in the scalar field,
/// so an unsplit characteristic polynomial is never radial.
pub fn is_radial(eigenvalues: &Option<[Scalar; 3]>) -> bool {
    let Some(e) = eigenvalues else { return false };
    if e.iter().any(Scalar::is_zero) {
        return false;
    }
    let base = e[0].inv().expect("nonzero");
    e.iter().all(|ev| {
        let r = ev * &base;
        r.is_rational() && r.re() > &num_rational::BigRational::from(num_bigint::BigInt::from(0))
    })
}

/// Classify a singular (or regular) point of a saturated field relative to
/// the marked divisor. The field must be tangent to every marked divisor
/// plane; transversality is an error so dicritical situations surface
/// loudly.
pub fn singularity_quality(chi: &VectorField, divisor: &Mono) -> Result<Quality> {
    check_divisor_tangency(chi, divisor)?;
    match linear_part(chi) {
        LinearBehavior::Regular { .. } => Ok(Quality::Regular),
        LinearBehavior::Singular(rep) => {
            if rep.char_poly.iter().all(Scalar::is_zero) {
                Ok(Quality::NonLogCanonical)
            } else if is_radial(&rep.eigenvalues) {
                Ok(Quality::Radial)
            } else {
                Ok(Quality::Canonical)
            }
        }
    }
}

fn check_divisor_tangency(chi: &VectorField, divisor: &Mono) -> Result<()> {
    for k in 0..3 {
        if divisor[k] == 0 {
            continue;
        }
        if chi.comps[k].terms().any(|(m, _)| m[k] == 0) {
            return Err(Error::NotTangentToDivisor { axis: Axis::from_index(k).name().chars().next().expect("axis name") });
        }
    }
    Ok(())
}

/// Hypothesis test for the no-nearby-orbit criterion: the generator,
/// saturated by the marked divisor, is regular at the origin and tangent
/// to the divisor.
pub fn check_no_nearby_orbits(f: &Germ) -> Result<bool> {
    let divisor = f.divisor();
    let chi = log_germ(f)?;
    let sat = chi.saturate(&divisor)?;
    let tangent = (0..3).all(|k| {
        divisor[k] == 0 || sat.comps[k].terms().all(|(m, _)| m[k] >= 1)
    });
    let regular = matches!(linear_part(&sat), LinearBehavior::Regular { .. });
    Ok(tangent && regular)
}

// ------------------------------------------------------------- field lifts

/// Transport a vector field through a point blow-up chart: the lift χ' is
/// σ-related to χ, i.e. Dσ·χ' = χ∘σ, which in the chart of axis j solves
/// to χ'_j = χ_j∘σ and χ'_k = (χ_k∘σ − (x_k + v_k)·χ_j∘σ)/x_j.
pub fn lift_field_point_blowup(
    chi: &VectorField,
    v: &[Scalar; 3],
    chart: Axis,
) -> Result<VectorField> {
    let j = chart.index();
    if v[j].is_zero() {
        return Err(Error::DirectionNotInChart);
    }
    let scale = v[j].inv().expect("nonzero");
    let v: [Scalar; 3] = std::array::from_fn(|k| &v[k] * &scale);
    let mut images = [Axis::X.unit_mono(), Axis::Y.unit_mono(), Axis::Z.unit_mono()];
    for k in 0..3 {
        if k != j {
            images[k][j] += 1;
        }
    }
    let pull = |s: &Series| -> Result<Series> {
        let mut t = s.subst_monomials(&images);
        for k in 0..3 {
            if k != j && !v[k].is_zero() {
                t = t.translate(Axis::from_index(k), &v[k])?;
            }
        }
        Ok(t)
    };
    let pulled: [Series; 3] = [pull(&chi.comps[0])?, pull(&chi.comps[1])?, pull(&chi.comps[2])?];
    let chart_mono = chart.unit_mono();
    let mut comps: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Exact));
    for k in 0..3 {
        if k == j {
            comps[k] = pulled[j].clone();
        } else {
            let xk = Series::variable(Axis::from_index(k), Cert::Exact)
                .add(&Series::constant(v[k].clone(), Cert::Exact));
            comps[k] = pulled[k].sub(&xk.mul(&pulled[j])).div_monomial(&chart_mono)?;
        }
    }
    let n = comps
        .iter()
        .filter_map(|c| c.cert().total_trust())
        .min()
        .unwrap_or(chi.n);
    Ok(VectorField { comps, n, removed: chi.removed })
}

/// Divisor-supported content of a field: the largest monomial in the given
/// axes dividing all components (used before saturation).
pub fn divisor_content(chi: &VectorField, divisor: &Mono) -> Mono {
    let mut content = [u32::MAX; 3];
    for c in &chi.comps {
        if let Some(sc) = c.stored_content() {
            for k in 0..3 {
                content[k] = content[k].min(sc[k]);
            }
        }
    }
    let mut out = [0u32; 3];
    for k in 0..3 {
        if divisor[k] > 0 && content[k] != u32::MAX {
            out[k] = content[k].min(divisor[k]);
        }
    }
    out
}

// ----------------------------------------------------------------- tests

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{mono_display, mono_divides, mono_sub};

    fn s(c: i64) -> Scalar {
        Scalar::from_int(c)
    }

    fn embedded_1d(n: u32) -> Germ {
        // f = id + z²·e_z
        Germ::from_displacement(
            [
                Series::zero(Cert::Total(n)),
                Series::zero(Cert::Total(n)),
                Series::poly_int(&[([0, 0, 2], 1)]).with_cert(Cert::Total(n)),
            ],
            n,
            [0, 0, 0],
        )
        .expect("valid germ")
    }

    fn cubic_jet(n: u32) -> Germ {
        Germ::from_displacement(
            [
                Series::poly_int(&[([0, 2, 1], 1), ([0, 1, 2], -1)]),
                Series::poly_int(&[([3, 0, 0], 1), ([1, 0, 2], -1)]),
                Series::poly_int(&[([1, 1, 1], 1), ([1, 0, 2], -1)]),
            ],
            n,
            [0, 0, 0],
        )
        .expect("valid germ")
    }

    #[test]
    fn log_of_identity_is_zero() {
        let id = Germ::identity(8);
        let chi = log_germ(&id).unwrap();
        assert!(chi.is_zero());
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let g = exp_field(&VectorField::zero(8)).unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn flow_of_z_squared_is_geometric() {
        // ż = z² has time-1 flow z/(1−z) = z + z² + z³ + z⁴ + …
        let chi = VectorField::new(
            [
                Series::zero(Cert::Total(8)),
                Series::zero(Cert::Total(8)),
                Series::poly_int(&[([0, 0, 2], 1)]).with_cert(Cert::Total(8)),
            ],
            8,
        );
        let g = exp_field(&chi).unwrap();
        for k in 1..=8 {
            assert_eq!(g.comp(Axis::Z).coeff(&[0, 0, k]), s(1), "z^{k} coefficient");
        }
        assert!(g.comp(Axis::X).sub(&Series::variable(Axis::X, Cert::Total(8))).is_zero());
    }

    #[test]
    fn log_of_unit_shift_flow() {
        // f = id + z²e_z has generator (z² − z³ + 3/2 z⁴ − 8/3 z⁵ + …)∂_z
        let chi = log_germ(&embedded_1d(8)).unwrap();
        let cz = chi.comp(Axis::Z);
        assert_eq!(cz.coeff(&[0, 0, 2]), s(1));
        assert_eq!(cz.coeff(&[0, 0, 3]), s(-1));
        assert_eq!(cz.coeff(&[0, 0, 4]), Scalar::from_rat(3, 2));
        assert_eq!(cz.coeff(&[0, 0, 5]), Scalar::from_rat(-8, 3));
        assert!(chi.comp(Axis::X).is_zero());
    }

    #[test]
    fn generator_matches_displacement_to_degree_four() {
        // order-3 germ: the generator corrections start at degree 2·3−1 = 5
        let f = cubic_jet(9);
        let chi = log_germ(&f).unwrap();
        for axis in Axis::ALL {
            let diff = chi.comp(axis).truncate_total(4).sub(&f.delta_comp(axis).truncate_total(4));
            assert!(diff.is_zero(), "degree-4 agreement fails in {axis}");
        }
        // and the round trip reproduces f on the whole working order
        let back = exp_field(&chi).unwrap();
        for axis in Axis::ALL {
            let diff = back
                .delta_comp(axis)
                .truncate_total(9)
                .sub(&f.delta_comp(axis).truncate_total(9));
            assert!(diff.is_zero(), "exp(log f) ≠ f in {axis}");
        }
    }

    #[test]
    fn log_exp_round_trip_on_field() {
        let chi = VectorField::new(
            [
                Series::poly_int(&[([0, 1, 1], 1), ([2, 0, 0], -1)]).with_cert(Cert::Total(7)),
                Series::poly_int(&[([0, 0, 2], 2), ([1, 1, 0], 1)]).with_cert(Cert::Total(7)),
                Series::poly_int(&[([0, 2, 0], -3)]).with_cert(Cert::Total(7)),
            ],
            7,
        );
        let back = log_germ(&exp_field(&chi).unwrap()).unwrap();
        for axis in Axis::ALL {
            let diff = back.comp(axis).sub(chi.comp(axis));
            assert!(diff.truncate_total(7).is_zero(), "log(exp χ) ≠ χ in {axis}");
        }
    }

    #[test]
    fn saturation_divides_and_records() {
        let chi = VectorField::new(
            [
                Series::poly_int(&[([1, 0, 2], 1)]),
                Series::poly_int(&[([0, 1, 2], -1)]),
                Series::zero(Cert::Exact),
            ],
            8,
        );
        let sat = chi.saturate(&[0, 0, 2]).unwrap();
        assert_eq!(sat.removed(), [0, 0, 2]);
        assert_eq!(sat.comp(Axis::X).coeff(&[1, 0, 0]), s(1));
        assert_eq!(sat.comp(Axis::Y).coeff(&[0, 1, 0]), s(-1));
        // a monomial not dividing every component is rejected
        let err = chi.saturate(&[1, 0, 0]).unwrap_err();
        assert!(matches!(err, Error::SaturationFails { comp: 1 }));
    }

    #[test]
    fn spectra_of_small_matrices() {
        // companion of the saddle (−y, −x, 0): eigenvalues {−1, 0, 1}
        let saddle = VectorField::new(
            [
                Series::poly_int(&[([0, 1, 0], -1)]).with_cert(Cert::Total(6)),
                Series::poly_int(&[([1, 0, 0], -1)]).with_cert(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
            ],
            6,
        );
        let LinearBehavior::Singular(rep) = linear_part(&saddle) else {
            panic!("saddle is singular at 0")
        };
        assert_eq!(rep.eigenvalues, Some([s(-1), s(0), s(1)]));
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.nilpotency_index, None);

        // rotation (−y, x, 0): eigenvalues {−i, 0, i}
        let rot = VectorField::new(
            [
                Series::poly_int(&[([0, 1, 0], -1)]).with_cert(Cert::Total(6)),
                Series::poly_int(&[([1, 0, 0], 1)]).with_cert(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
            ],
            6,
        );
        let LinearBehavior::Singular(rep) = linear_part(&rot) else { panic!() };
        let eig = rep.eigenvalues.expect("splits over Q(i)");
        assert!(eig.contains(&Scalar::i()));
        assert!(eig.contains(&-&Scalar::i()));
        assert!(eig.contains(&s(0)));

        // half-integer spectrum ½·{1, −3, −2}
        let halves = VectorField::new(
            [
                Series::poly_int(&[([1, 0, 0], 1)])
                    .scale(&Scalar::from_rat(1, 2))
                    .with_cert(Cert::Total(6)),
                Series::poly_int(&[([0, 1, 0], -3)])
                    .scale(&Scalar::from_rat(1, 2))
                    .with_cert(Cert::Total(6)),
                Series::poly_int(&[([0, 0, 1], -1)]).with_cert(Cert::Total(6)),
            ],
            6,
        );
        let LinearBehavior::Singular(rep) = linear_part(&halves) else { panic!() };
        let mut want = [Scalar::from_rat(1, 2), Scalar::from_rat(-3, 2), s(-1)];
        want.sort();
        assert_eq!(rep.eigenvalues, Some(want));

        // nilpotent rank-1 shear
        let shear = VectorField::new(
            [
                Series::poly_int(&[([0, 1, 0], 1)]).with_cert(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
            ],
            6,
        );
        let LinearBehavior::Singular(rep) = linear_part(&shear) else { panic!() };
        assert_eq!(rep.nilpotency_index, Some(2));
        assert_eq!(rep.rank, 1);
        assert_eq!(rep.eigenvalues, Some([s(0), s(0), s(0)]));
    }

    #[test]
    fn regular_points_report_velocity() {
        let chi = VectorField::new(
            [
                Series::poly_int(&[([0, 0, 0], 3), ([1, 0, 0], 1)]).with_cert(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
            ],
            6,
        );
        assert_eq!(
            linear_part(&chi),
            LinearBehavior::Regular { velocity: [s(3), s(0), s(0)] }
        );
    }

    #[test]
    fn quality_verdicts() {
        let mk = |diag: [i64; 3]| {
            VectorField::new(
                [
                    Series::poly_int(&[([1, 0, 0], diag[0])]).with_cert(Cert::Total(6)),
                    Series::poly_int(&[([0, 1, 0], diag[1])]).with_cert(Cert::Total(6)),
                    Series::poly_int(&[([0, 0, 1], diag[2])]).with_cert(Cert::Total(6)),
                ],
                6,
            )
        };
        // spectrum {1,2,3}: radial
        assert_eq!(singularity_quality(&mk([1, 2, 3]), &[0, 0, 1]).unwrap(), Quality::Radial);
        // spectrum {1,−1,0}: canonical (zero eigenvalue blocks radiality)
        let saddle = VectorField::new(
            [
                Series::poly_int(&[([0, 1, 0], -1)]).with_cert(Cert::Total(6)),
                Series::poly_int(&[([1, 0, 0], -1)]).with_cert(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
            ],
            6,
        );
        assert_eq!(singularity_quality(&saddle, &[0, 0, 0]).unwrap(), Quality::Canonical);
        // negative ratio: canonical
        assert_eq!(singularity_quality(&mk([1, -3, -2]), &[0, 0, 1]).unwrap(), Quality::Canonical);
        // nilpotent: not log-canonical
        let shear = VectorField::new(
            [
                Series::poly_int(&[([0, 1, 0], 1)]).with_cert(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
            ],
            6,
        );
        assert_eq!(
            singularity_quality(&shear, &[0, 0, 0]).unwrap(),
            Quality::NonLogCanonical
        );
        // transverse to the marked divisor: loud error
        let trans = VectorField::new(
            [
                Series::zero(Cert::Total(6)),
                Series::zero(Cert::Total(6)),
                Series::poly_int(&[([1, 0, 0], 1)]).with_cert(Cert::Total(6)),
            ],
            6,
        );
        assert!(matches!(
            singularity_quality(&trans, &[0, 0, 1]),
            Err(Error::NotTangentToDivisor { axis: 'z' })
        ));
    }

    #[test]
    fn nearby_orbit_criterion() {
        // regular saturated generator tangent to {z=0}: hypothesis holds
        let good = Germ::from_displacement(
            [
                Series::poly_int(&[([0, 0, 2], 1)]).with_cert(Cert::Total(8)),
                Series::zero(Cert::Total(8)),
                Series::poly_int(&[([0, 0, 3], 1)]).with_cert(Cert::Total(8)),
            ],
            8,
            [0, 0, 2],
        )
        .unwrap();
        assert!(check_no_nearby_orbits(&good).unwrap());

        // singular saturated generator: hypothesis fails
        let singular = Germ::from_displacement(
            [
                Series::poly_int(&[([1, 0, 2], 1)]).with_cert(Cert::Total(8)),
                Series::poly_int(&[([0, 1, 2], -1)]).with_cert(Cert::Total(8)),
                Series::zero(Cert::Total(8)),
            ],
            8,
            [0, 0, 2],
        )
        .unwrap();
        assert!(!check_no_nearby_orbits(&singular).unwrap());

        // dicritical: saturation transverse to the divisor
        let dicritical = Germ::from_displacement(
            [
                Series::zero(Cert::Total(8)),
                Series::zero(Cert::Total(8)),
                Series::poly_int(&[([0, 0, 2], 1)]).with_cert(Cert::Total(8)),
            ],
            8,
            [0, 0, 2],
        )
        .unwrap();
        assert!(!check_no_nearby_orbits(&dicritical).unwrap());
    }

    #[test]
    fn generator_lift_commutes_with_blowup() {
        use crate::blowup::lift_point_blowup;
        let f = cubic_jet(9);
        for (v, chart) in [
            ([s(1), s(1), s(1)], Axis::Z),
            ([s(1), s(2), s(1)], Axis::X),
            ([s(0), s(1), s(1)], Axis::Z),
        ] {
            let lifted_f = lift_point_blowup(&f, &v, chart).unwrap();
            let log_of_lift = log_germ(&lifted_f).unwrap();
            let lift_of_log = lift_field_point_blowup(&log_germ(&f).unwrap(), &v, chart).unwrap();
            // compare within the common certified window
            let n = log_of_lift.order_n().min(lift_of_log.order_n());
            for axis in Axis::ALL {
                let diff = log_of_lift
                    .comp(axis)
                    .truncate_total(n)
                    .sub(&lift_of_log.comp(axis).truncate_total(n));
                assert!(
                    diff.is_zero(),
                    "generator functoriality fails at {v:?} chart {chart} in {axis}: {diff}"
                );
            }
        }
    }

    #[test]
    fn json_export_shape() {
        let chi = VectorField::new(
            [
                Series::poly_int(&[([1, 0, 2], 1)]),
                Series::zero(Cert::Exact),
                Series::zero(Cert::Exact),
            ],
            8,
        );
        let js = chi.to_json();
        assert_eq!(js["N"], 8);
        assert_eq!(js["removed"], json!([0, 0, 0]));
        assert_eq!(js["comps"][0][0], json!([[1, 0, 2], "1"]));
    }

    #[test]
    fn unused_helpers_guard() {
        // divisor_content picks out the divisor-supported part only
        let chi = VectorField::new(
            [
                Series::poly_int(&[([1, 0, 3], 1)]),
                Series::poly_int(&[([0, 1, 2], 1)]),
                Series::poly_int(&[([0, 0, 4], 1)]),
            ],
            8,
        );
        assert_eq!(divisor_content(&chi, &[0, 0, 5]), [0, 0, 2]);
        assert_eq!(divisor_content(&chi, &[1, 0, 5]), [0, 0, 2]);
        let m: Mono = [1, 1, 1];
        assert!(mono_divides(&m, &[2, 1, 1]));
        assert_eq!(mono_sub(&[2, 1, 1], &m), [1, 0, 0]);
        let _ = mono_display(&m);
    }
}
