//! Formal invariant curves through the fixed point of a tangent-to-the-
//! identity germ.
//!
//! A curve is stored as a graph over one coordinate axis: the parameter `t`
//! runs along that axis and the other two coordinates are polynomial jets in
//! `t` with no constant term.  Three construction routes are provided:
//!
//! * [`curve_from_sequence`] follows a walker through a tower of point
//!   blow-ups and reads the curve off the infinitely-near centers — the
//!   center chosen at level `m` is exactly the pair of degree-`m`
//!   coefficients of the curve;
//! * [`half_corner_curve`] solves the invariance equation of a non-simple
//!   half corner degree by degree with a defect-correction sweep;
//! * [`spinning_corner_curve_analysis`] decides how many curves transverse
//!   to the exceptional set a spinning corner admits, and produces the jet
//!   in the unique case by one blow-up followed by the half-corner solver.
//!
//! [`verify_invariance`] is the independent audit: it substitutes a jet into
//! the germ and reports the largest degree through which the conjugacy
//! equation `f(C(t)) = C(f_axis(C(t)))` holds.

use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

use crate::algebra::uni::Uni;
use crate::algebra::{Axis, Mono, Scalar, Series};
use crate::blowup::lift_point_blowup;
use crate::classify::{classify_germ, SingularityClass};
use crate::directions::{singular_directions, DirectionReport};
use crate::germ::{invert_matrix, Germ};
use crate::{Error, Result};

/// A formal curve through the origin, presented as a graph over one
/// coordinate axis.  The component along `axis` is the parameter `t`
/// itself; the two remaining components are jets of degree at most `depth`
/// with zero constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalCurve {
    axis: Axis,
    /// Jet of the lower-index non-parameter coordinate.
    first: Uni,
    /// Jet of the higher-index non-parameter coordinate.
    second: Uni,
    depth: u32,
    /// Marked divisor of the ambient germ, kept for transversality queries.
    divisor: Mono,
}

/// The two axes different from `a`, in increasing index order.
fn other_axes(a: Axis) -> (Axis, Axis) {
    match a {
        Axis::X => (Axis::Y, Axis::Z),
        Axis::Y => (Axis::X, Axis::Z),
        Axis::Z => (Axis::X, Axis::Y),
    }
}

impl FormalCurve {
    /// Build a curve from its two graph components.  Panics if a component
    /// has a constant term (the curve must pass through the origin) or
    /// exceeds the stated depth.
    pub fn graph(axis: Axis, first: Uni, second: Uni, depth: u32, divisor: Mono) -> FormalCurve {
        assert!(
            first.coeff(0).is_zero() && second.coeff(0).is_zero(),
            "curve components must vanish at the origin"
        );
        assert!(
            first.deg().unwrap_or(0) <= depth as usize
                && second.deg().unwrap_or(0) <= depth as usize,
            "curve components must not exceed the stated depth"
        );
        FormalCurve { axis, first, second, depth, divisor }
    }

    /// Axis carrying the curve parameter.
    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Number of certified jet coefficients.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Marked divisor of the germ the curve was computed for.
    pub fn divisor(&self) -> Mono {
        self.divisor
    }

    /// The jet of one coordinate as a polynomial in the parameter.  The
    /// parameter axis itself returns the monomial `t`.
    pub fn jet(&self, a: Axis) -> Uni {
        let (ia, ib) = other_axes(self.axis);
        if a == self.axis {
            Uni::monomial(1, Scalar::one())
        } else if a == ia {
            self.first.clone()
        } else {
            debug_assert_eq!(a, ib);
            self.second.clone()
        }
    }

    /// All three component jets, indexed by axis.
    fn jets(&self) -> [Uni; 3] {
        [self.jet(Axis::X), self.jet(Axis::Y), self.jet(Axis::Z)]
    }

    /// Tangent direction at the origin: the linear coefficients of the
    /// three components (the parameter axis contributes 1).
    pub fn tangent(&self) -> [Scalar; 3] {
        let js = self.jets();
        std::array::from_fn(|i| js[i].coeff(1))
    }

    /// The infinitely-near centers of the curve: the center blown up at
    /// level `m` of the associated tower is the pair of degree-`m`
    /// coefficients of the two graph components.
    pub fn centers(&self) -> Vec<(Scalar, Scalar)> {
        (1..=self.depth as usize)
            .map(|m| (self.first.coeff(m), self.second.coeff(m)))
            .collect()
    }

    /// Whether the curve meets every marked divisor plane transversally:
    /// its tangent must leave each plane `{x_j = 0}` with `j` marked.
    pub fn transverse_to_divisor(&self) -> bool {
        let t = self.tangent();
        (0..3).all(|j| self.divisor[j] == 0 || !t[j].is_zero())
    }

    /// Strict transform of the curve under the point blow-up centered at
    /// its own tangent direction, written in the chart of the parameter
    /// axis.  The caller supplies the divisor of the lifted germ.  Requires
    /// `depth ≥ 1`; the transform has one coefficient less.
    pub fn strict_transform(&self, child_divisor: Mono) -> FormalCurve {
        assert!(self.depth >= 1, "strict transform needs at least one coefficient");
        let down = |jet: &Uni| -> Uni {
            // x(t) = t·(w + x'(t))  ⟹  x'(t) = x(t)/t − w
            let shifted: Vec<Scalar> = jet.coeffs().iter().skip(2).cloned().collect();
            Uni::new(shifted).shift_up(1)
        };
        FormalCurve {
            axis: self.axis,
            first: down(&self.first),
            second: down(&self.second),
            depth: self.depth - 1,
            divisor: child_divisor,
        }
    }

    /// Image of the curve under the point blow-down at `center` (a
    /// direction with coordinate 1 on the parameter axis), written in the
    /// same chart.  The caller supplies the divisor of the germ downstairs.
    pub fn blow_down(&self, center: &[Scalar; 3], parent_divisor: Mono) -> FormalCurve {
        assert!(
            center[self.axis.index()] == Scalar::one(),
            "blow-down center must be normalized in the chart of the curve"
        );
        let (ia, ib) = other_axes(self.axis);
        let up = |jet: &Uni, w: &Scalar| -> Uni {
            // downstairs x(t) = t·(w + x'(t))
            jet.shift_up(1).add(&Uni::monomial(1, w.clone()))
        };
        FormalCurve {
            axis: self.axis,
            first: up(&self.first, &center[ia.index()]),
            second: up(&self.second, &center[ib.index()]),
            depth: self.depth + 1,
            divisor: parent_divisor,
        }
    }

    /// JSON form: multiplicity, parameter axis, the two component
    /// coefficient lists (degrees 1..=depth, exact scalars as strings),
    /// depth, and the tangent direction.
    pub fn to_json(&self) -> Value {
        let (ia, ib) = other_axes(self.axis);
        let list = |jet: &Uni| -> Vec<String> {
            (1..=self.depth as usize).map(|m| jet.coeff(m).to_string()).collect()
        };
        json!({
            "e": 1,
            "param": self.axis.name(),
            ia.name(): list(&self.first),
            ib.name(): list(&self.second),
            "depth": self.depth,
            "tangent": self.tangent().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for FormalCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (ia, ib) = other_axes(self.axis);
        write!(
            f,
            "{}(t) = t, {}(t) = {}, {}(t) = {}  (depth {})",
            self.axis.name(),
            ia.name(),
            self.first,
            ib.name(),
            self.second,
            self.depth
        )
    }
}

/// Largest jet degree on which every coefficient of the germ is certified;
/// `u32::MAX` when all components are exact polynomials.
pub fn curve_trust(f: &Germ) -> u32 {
    f.coords()
        .iter()
        .map(|s| s.cert().total_trust().unwrap_or(u32::MAX))
        .min()
        .expect("a germ has three components")
}

/// Default curve depth for a germ: the certified working order minus the
/// divisor degree minus two, the deepest walk whose final germ still
/// carries a classifiable jet.
pub fn default_depth(f: &Germ) -> u32 {
    let ell: u32 = f.divisor().iter().sum();
    f.order_n().saturating_sub(ell + 2)
}

/// Substitute the three jets into a power series and truncate at `deg`.
/// Sound whenever `deg` does not exceed the certificate window: every
/// uncertified monomial has, on jets without constant term, parameter
/// order strictly above the window bound.
fn eval_series_on_jets(s: &Series, jets: &[Uni; 3], deg: usize) -> Uni {
    let mut powers: [Vec<Uni>; 3] =
        [vec![Uni::one()], vec![Uni::one()], vec![Uni::one()]];
    let mut acc = Uni::zero();
    for (m, coeff) in s.terms() {
        if coeff.is_zero() {
            continue;
        }
        let mut term = Uni::from_scalar(coeff.clone());
        for a in 0..3 {
            let e = m[a] as usize;
            while powers[a].len() <= e {
                let next = powers[a]
                    .last()
                    .expect("power cache starts at exponent zero")
                    .mul_trunc(&jets[a], deg);
                powers[a].push(next);
            }
            if term.is_zero() {
                break;
            }
            term = term.mul_trunc(&powers[a][e], deg);
        }
        acc = acc.add(&term);
    }
    acc.truncate(deg)
}

/// Largest degree `m ≤ degree` (capped by the certificate window of `f`)
/// such that the conjugacy equation of the curve holds through every order
/// `1..=m`: substituting the curve into the germ must reproduce the curve
/// composed with the parameter component.
pub fn verify_invariance(f: &Germ, curve: &FormalCurve, degree: u32) -> u32 {
    let cap = degree.min(curve_trust(f));
    let w = cap as usize;
    let jets = curve.jets();
    let coords = f.coords();
    let tau = eval_series_on_jets(&coords[curve.axis.index()], &jets, w);
    let (ia, ib) = other_axes(curve.axis);
    let residuals = [ia, ib].map(|a| {
        eval_series_on_jets(&coords[a.index()], &jets, w)
            .sub(&jets[a.index()].compose_trunc(&tau, w))
    });
    for n in 1..=w {
        if residuals.iter().any(|r| !r.coeff(n).is_zero()) {
            return (n - 1) as u32;
        }
    }
    cap
}

/// Smallest positive integer `m` with `num = m·den`, if one exists.  For
/// `den = 0` the answer is 1 when `num` also vanishes (every index works).
fn positive_integer_multiplier(num: &Scalar, den: &Scalar) -> Option<u32> {
    if den.is_zero() {
        return num.is_zero().then_some(1);
    }
    let ratio = num * &den.inv().expect("denominator checked nonzero");
    if !ratio.im().is_zero() {
        return None;
    }
    let re = ratio.re();
    if !re.is_integer() || !re.is_positive() {
        return None;
    }
    Some(re.to_integer().to_u32().unwrap_or(u32::MAX))
}

/// Follow a walker through `depth` point blow-ups and return the curve
/// whose infinitely-near centers are the chosen directions.
///
/// At each level the walker receives the level number, the current germ,
/// and its singular-direction report, and must return a direction with
/// scalar coordinates.  The walk validates each choice: the direction must
/// stay in the chart fixed at level one, must avoid the corners of the
/// exceptional set (no vanishing coordinate on a marked axis other than
/// the chart axis), and must be a singular point of the lifted generator.
/// Violations abort with the offending depth.
///
/// The returned jet is exactly the curve determined by the tower; whether
/// it is invariant is a property of the walk, certified separately with
/// [`verify_invariance`].
pub fn curve_from_sequence<W>(f: &Germ, mut walker: W, depth: u32) -> Result<FormalCurve>
where
    W: FnMut(u32, &Germ, &DirectionReport) -> Result<[Scalar; 3]>,
{
    assert!(depth >= 1, "a curve needs at least one coefficient");
    let mut current = f.clone();
    let mut axis: Option<Axis> = None;
    let mut centers: Vec<[Scalar; 3]> = Vec::new();
    for level in 1..=depth {
        let report = singular_directions(&current)?;
        let raw = walker(level, &current, &report)?;
        let ax = match axis {
            Some(ax) => ax,
            None => {
                let last = (0..3)
                    .rev()
                    .find(|&j| !raw[j].is_zero())
                    .ok_or_else(|| Error::WalkerAborted {
                        depth: level,
                        reason: "walker returned the zero direction".into(),
                    })?;
                let ax = Axis::from_index(last);
                axis = Some(ax);
                ax
            }
        };
        if raw[ax.index()].is_zero() {
            return Err(Error::WalkerAborted {
                depth: level,
                reason: format!("direction leaves the {}-chart of the walk", ax.name()),
            });
        }
        let scale = raw[ax.index()].inv().expect("chart coordinate checked nonzero");
        let v: [Scalar; 3] = std::array::from_fn(|j| &raw[j] * &scale);
        for j in 0..3 {
            if j != ax.index() && current.divisor()[j] > 0 && v[j].is_zero() {
                return Err(Error::WalkerAborted {
                    depth: level,
                    reason: "center lies on a corner of the exceptional set".into(),
                });
            }
        }
        let child = lift_point_blowup(&current, &v, ax)?;
        if matches!(classify_germ(&child)?, SingularityClass::Regular { .. }) {
            return Err(Error::WalkerAborted {
                depth: level,
                reason: "center is not a singular point of the lifted generator".into(),
            });
        }
        centers.push(v);
        current = child;
    }
    let ax = axis.expect("depth ≥ 1 fixed the chart");
    let (ia, ib) = other_axes(ax);
    let mut first = Uni::zero();
    let mut second = Uni::zero();
    for (h, w) in centers.iter().enumerate() {
        first = first.add(&Uni::monomial(h + 1, w[ia.index()].clone()));
        second = second.add(&Uni::monomial(h + 1, w[ib.index()].clone()));
    }
    Ok(FormalCurve { axis: ax, first, second, depth, divisor: f.divisor() })
}

/// Walker that picks, at every level, the unique isolated singular
/// direction transverse to the exceptional set.  Aborts when the count of
/// such directions differs from one.  Positive-dimensional families and
/// factors with roots outside the scalar field are not searched; they
/// never contain the transverse center of the walks this picker serves.
pub fn unique_transverse_walker(
) -> impl FnMut(u32, &Germ, &DirectionReport) -> Result<[Scalar; 3]> {
    |level, _germ, report| {
        let mut picks = report.resolved.iter().filter(|r| !r.exceptional);
        let Some(first) = picks.next() else {
            return Err(Error::WalkerAborted {
                depth: level,
                reason: "no isolated singular direction transverse to the exceptional set".into(),
            });
        };
        if picks.next().is_some() {
            return Err(Error::WalkerAborted {
                depth: level,
                reason: "several isolated singular directions are transverse to the exceptional set"
                    .into(),
            });
        }
        Ok(first.v.clone())
    }
}

/// Solve the invariance equation of a non-simple half corner for the jet
/// of its curve transverse to the exceptional set, to `depth`
/// coefficients.
///
/// Errors: a germ that is not a half corner is `NotReducible`-adjacent
/// (reported through the classifier), a simple half corner has
/// `NoTransverseCurve`, a resonant one (`b_y` a positive integer multiple
/// of `γ`) reports `ResonantCurve` with the resonance index, and a
/// certificate window shorter than `depth + c + 1` yields
/// `NeedHigherOrder`.
pub fn half_corner_curve(f: &Germ, depth: u32) -> Result<FormalCurve> {
    let class = classify_germ(f)?;
    let SingularityClass::HalfCorner(d) = class else {
        return Err(Error::NotReducible {
            reason: format!("curve solver expects a half corner, found {class}"),
        });
    };
    if d.simple {
        return Err(Error::NoTransverseCurve);
    }
    if let Some(index) = positive_integer_multiplier(&d.b_y, &d.gamma) {
        return Err(Error::ResonantCurve { index });
    }
    let need = depth + d.c + 1;
    let have = curve_trust(f);
    if have < need {
        return Err(Error::NeedHigherOrder { have, need });
    }
    let w = need as usize;
    let c = d.c as usize;
    let (rx, ry, k) = (d.roles[0].index(), d.roles[1].index(), d.roles[2].index());
    let sy = d.change[0][ry].clone();
    let inv_ax = d.a_x.inv().expect("half-corner leading coefficient is nonzero");
    let coords = f.coords();
    let mut jets: [Uni; 3] = std::array::from_fn(|_| Uni::zero());
    jets[k] = Uni::monomial(1, Scalar::one());

    // Degree-by-degree defect correction.  At step m the residual of the
    // sheared first component sits at parameter order m+c with leading
    // coefficient a_x on the unknown, and — after that unknown is fixed —
    // the residual of the second component sits at order m+c+1 with
    // leading coefficient b_y − mγ, nonzero by the resonance check.  The
    // compensating first-component update −sy·Y_m keeps the sheared
    // residual untouched.
    for m in 1..=depth {
        let tau = eval_series_on_jets(&coords[k], &jets, w);
        let r_x = eval_series_on_jets(&coords[rx], &jets, w)
            .sub(&jets[rx].compose_trunc(&tau, w));
        let r_y = eval_series_on_jets(&coords[ry], &jets, w)
            .sub(&jets[ry].compose_trunc(&tau, w));
        let r_u = r_x.add(&r_y.scale(&sy));
        let u_m = &(-&r_u.coeff(m as usize + c)) * &inv_ax;
        jets[rx] = jets[rx].add(&Uni::monomial(m as usize, u_m));

        let tau = eval_series_on_jets(&coords[k], &jets, w);
        let r_y = eval_series_on_jets(&coords[ry], &jets, w)
            .sub(&jets[ry].compose_trunc(&tau, w));
        let divider = &d.b_y - &(&Scalar::from_int(m as i64) * &d.gamma);
        let y_m = &(-&r_y.coeff(m as usize + c + 1))
            * &divider.inv().expect("non-resonance was checked");
        jets[ry] = jets[ry].add(&Uni::monomial(m as usize, y_m.clone()));
        jets[rx] = jets[rx].sub(&Uni::monomial(m as usize, &sy * &y_m));
    }

    let axis = d.roles[2];
    let (ia, ib) = other_axes(axis);
    let curve = FormalCurve {
        axis,
        first: jets[ia.index()].clone(),
        second: jets[ib.index()].clone(),
        depth,
        divisor: f.divisor(),
    };
    debug_assert_eq!(
        verify_invariance(f, &curve, depth),
        depth,
        "solved jet must satisfy the invariance equation through its depth"
    );
    Ok(curve)
}

/// Outcome of the transverse-curve count at a spinning corner.
#[derive(Clone, Debug, PartialEq)]
pub enum SpinningCurveVerdict {
    /// A one-parameter pencil of invariant curves crosses the exceptional
    /// set.
    InfinitelyMany,
    /// Exactly one invariant curve is transverse; its jet is attached.
    Unique(FormalCurve),
    /// No invariant curve leaves the exceptional set.
    NoTransverse,
}

/// Count the invariant curves of a spinning corner that are transverse to
/// the exceptional set `{yz = 0}`, following the linear data of the germ:
/// with `p = b_y − c_y` and `q = c_z − b_z`,
///
/// * both zero and some linear datum nonzero ⇒ infinitely many;
/// * both nonzero with `pq` outside `δℕ*` (δ = b_y c_z − b_z c_y) ⇒ exactly
///   one, crossing at `y₀ = q/p` on the distinguished direction line, and
///   its jet is produced by blowing up there and solving the resulting
///   half corner;
/// * exactly one of them zero ⇒ none.
///
/// The two remaining configurations (all four linear data zero, or `pq`
/// resonating against δ) are outside the trichotomy and reported as such.
pub fn spinning_corner_curve_analysis(f: &Germ, depth: u32) -> Result<SpinningCurveVerdict> {
    assert!(depth >= 1, "a curve needs at least one coefficient");
    let class = classify_germ(f)?;
    let SingularityClass::SpinningCorner(d) = class else {
        return Err(Error::NotReducible {
            reason: format!("curve analysis expects a spinning corner, found {class}"),
        });
    };
    let p = &d.b_y - &d.c_y;
    let q = &d.c_z - &d.b_z;
    match (p.is_zero(), q.is_zero()) {
        (true, true) => {
            if d.b_y.is_zero() && d.b_z.is_zero() && d.c_y.is_zero() && d.c_z.is_zero() {
                Err(Error::OutsideTrichotomy)
            } else {
                Ok(SpinningCurveVerdict::InfinitelyMany)
            }
        }
        (false, false) => {
            let delta = &(&d.b_y * &d.c_z) - &(&d.b_z * &d.c_y);
            if positive_integer_multiplier(&(&q * &p), &delta).is_some() {
                return Err(Error::OutsideTrichotomy);
            }
            let y0 = &q * &p.inv().expect("first difference checked nonzero");
            // The crossing direction [0 : y₀ : 1] is stated in the sheared
            // role coordinates; map it back through the recorded change.
            let inv_change =
                invert_matrix(&d.change).expect("recorded change of coordinates is invertible");
            let normal = [Scalar::zero(), y0, Scalar::one()];
            let raw: [Scalar; 3] = std::array::from_fn(|i| {
                let mut acc = Scalar::zero();
                for (j, nj) in normal.iter().enumerate() {
                    acc = &acc + &(&inv_change[i][j] * nj);
                }
                acc
            });
            let chart = (0..3)
                .rev()
                .find(|&j| !raw[j].is_zero())
                .expect("a direction has a nonzero coordinate");
            let ax = Axis::from_index(chart);
            let scale = raw[chart].inv().expect("chart coordinate is nonzero");
            let center: [Scalar; 3] = std::array::from_fn(|j| &raw[j] * &scale);
            let child = lift_point_blowup(f, &center, ax)?;
            let inner = half_corner_curve(&child, depth - 1)?;
            Ok(SpinningCurveVerdict::Unique(inner.blow_down(&center, f.divisor())))
        }
        _ => Ok(SpinningCurveVerdict::NoTransverse),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Cert;

    fn s(p: i64, q: i64) -> Scalar {
        Scalar::from_rat(p, q)
    }

    fn si(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn series(terms: Vec<(Mono, Scalar)>) -> Series {
        Series::from_terms(terms, Cert::Exact)
    }

    fn germ(delta: [Series; 3], n: u32, divisor: Mono) -> Germ {
        Germ::from_displacement(delta, n, divisor).expect("test germ must be valid")
    }

    /// Non-simple half corner with δ = (zx, z²(2y + 3z + y²), 5z³):
    /// a_x = 1, β = 0, b_y = 2, b_z = 3, γ = 5, c = 1.
    fn half_corner_sample() -> Germ {
        germ(
            [
                series(vec![([1, 0, 1], si(1))]),
                series(vec![
                    ([0, 1, 2], si(2)),
                    ([0, 0, 3], si(3)),
                    ([0, 2, 2], si(1)),
                ]),
                series(vec![([0, 0, 3], si(5))]),
            ],
            14,
            [0, 0, 1],
        )
    }

    /// Degenerate spike with δ = (z²(2x + z), z²(−3y + 2z), z⁴): the
    /// saturated linear part is diag(2, −3, 0) plus a kernel tilted to
    /// the direction (−1/2, 2/3, 1).
    fn tilted_spike_sample() -> Germ {
        germ(
            [
                series(vec![([1, 0, 2], si(2)), ([0, 0, 3], si(1))]),
                series(vec![([0, 1, 2], si(-3)), ([0, 0, 3], si(2))]),
                series(vec![([0, 0, 4], si(1))]),
            ],
            16,
            [0, 0, 2],
        )
    }

    fn spinning_sample(qy: i64, qz: i64, ry: i64, rz: i64) -> Germ {
        // δ = (yz·x, yz·y·(qy·y + qz·z), yz·z·(ry·y + rz·z))
        germ(
            [
                series(vec![([1, 1, 1], si(1))]),
                series(vec![([0, 3, 1], si(qy)), ([0, 2, 2], si(qz))]),
                series(vec![([0, 2, 2], si(ry)), ([0, 1, 3], si(rz))]),
            ],
            12,
            [0, 1, 1],
        )
    }

    #[test]
    fn half_corner_solver_matches_hand_recursion() {
        // By hand, the recursion (b_y − mγ)·y_m = lower-order data gives
        // y = t + t²/8 + t³/52 − 2555·t⁴/14976 and x ≡ 0.
        let f = half_corner_sample();
        let curve = half_corner_curve(&f, 4).expect("non-resonant half corner has a curve");
        assert_eq!(curve.axis(), Axis::Z);
        assert!(curve.jet(Axis::X).is_zero());
        let y = curve.jet(Axis::Y);
        assert_eq!(y.coeff(1), si(1));
        assert_eq!(y.coeff(2), s(1, 8));
        assert_eq!(y.coeff(3), s(1, 52));
        assert_eq!(y.coeff(4), s(-2555, 14976));
        assert_eq!(verify_invariance(&f, &curve, 4), 4);
        assert!(curve.transverse_to_divisor());
    }

    #[test]
    fn half_corner_jet_is_stable_under_deeper_solves() {
        let f = half_corner_sample();
        let shallow = half_corner_curve(&f, 3).expect("depth 3");
        let deep = half_corner_curve(&f, 6).expect("depth 6");
        for m in 0..=3 {
            assert_eq!(shallow.jet(Axis::Y).coeff(m), deep.jet(Axis::Y).coeff(m));
            assert_eq!(shallow.jet(Axis::X).coeff(m), deep.jet(Axis::X).coeff(m));
        }
        assert_eq!(verify_invariance(&f, &deep, 6), 6);
    }

    #[test]
    fn simple_half_corner_has_no_transverse_curve() {
        // β = 3 ≠ 0 makes the corner simple.
        let f = germ(
            [
                series(vec![([1, 0, 1], si(1)), ([0, 2, 1], si(1))]),
                series(vec![
                    ([0, 0, 2], si(3)),
                    ([1, 0, 2], si(1)),
                    ([0, 1, 2], si(4)),
                    ([0, 0, 3], si(5)),
                ]),
                series(vec![([0, 0, 3], si(2)), ([1, 0, 3], si(1))]),
            ],
            10,
            [0, 0, 1],
        );
        assert!(matches!(half_corner_curve(&f, 3), Err(Error::NoTransverseCurve)));
    }

    #[test]
    fn resonant_half_corner_reports_its_index() {
        // b_y = 3, γ = 1: the divider b_y − mγ vanishes at index 3.
        let f = germ(
            [
                series(vec![([1, 0, 1], si(1))]),
                series(vec![([0, 1, 2], si(3)), ([0, 0, 3], si(1))]),
                series(vec![([0, 0, 3], si(1))]),
            ],
            10,
            [0, 0, 1],
        );
        assert!(matches!(half_corner_curve(&f, 5), Err(Error::ResonantCurve { index: 3 })));
        // b_y = γ = 0 resonates at every index; the first is reported.
        let g = germ(
            [
                series(vec![([1, 0, 1], si(1))]),
                series(vec![([0, 0, 3], si(1)), ([0, 2, 2], si(1))]),
                series(vec![([0, 0, 4], si(1))]),
            ],
            10,
            [0, 0, 1],
        );
        assert!(matches!(half_corner_curve(&g, 2), Err(Error::ResonantCurve { index: 1 })));
    }

    #[test]
    fn curve_depth_is_limited_by_the_certificate_window() {
        let exact = half_corner_sample();
        let truncated = Germ::from_displacement(
            std::array::from_fn(|i| exact.delta()[i].truncate_total(5)),
            5,
            [0, 0, 1],
        )
        .expect("truncated germ stays valid");
        // depth 4 with c = 1 needs certified order 6 > 5
        assert!(matches!(
            half_corner_curve(&truncated, 4),
            Err(Error::NeedHigherOrder { have: 5, need: 6 })
        ));
        assert!(half_corner_curve(&truncated, 3).is_ok());
    }

    #[test]
    fn walker_reads_the_kernel_center_and_the_jet_checks_out() {
        let f = tilted_spike_sample();
        let curve = curve_from_sequence(&f, unique_transverse_walker(), 6)
            .expect("spike walk succeeds");
        assert_eq!(curve.axis(), Axis::Z);
        let centers = curve.centers();
        assert_eq!(centers[0], (s(-1, 2), s(2, 3)));
        // the independent audit: the walked jet satisfies the conjugacy
        // equation through its full depth
        assert_eq!(verify_invariance(&f, &curve, 6), 6);
        // and fails just past a perturbed coefficient
        let mut bad_first = curve.jet(Axis::X);
        bad_first = bad_first.add(&Uni::monomial(3, si(1)));
        let bad = FormalCurve::graph(Axis::Z, bad_first, curve.jet(Axis::Y), 6, f.divisor());
        assert!(verify_invariance(&f, &bad, 6) < 6);
    }

    #[test]
    fn walked_jet_prefix_is_stable_under_depth() {
        let f = tilted_spike_sample();
        let short = curve_from_sequence(&f, unique_transverse_walker(), 3).expect("depth 3");
        let long = curve_from_sequence(&f, unique_transverse_walker(), 5).expect("depth 5");
        for a in [Axis::X, Axis::Y] {
            for m in 0..=3 {
                assert_eq!(short.jet(a).coeff(m), long.jet(a).coeff(m));
            }
        }
    }

    #[test]
    fn axis_line_walk_yields_the_axis_curve() {
        // δ = (z²(2x + yz), z²(−3y + x²), 2z⁴): the z-axis is invariant
        // and the kernel sits exactly on it.
        let f = germ(
            [
                series(vec![([1, 0, 2], si(2)), ([0, 1, 3], si(1))]),
                series(vec![([0, 1, 2], si(-3)), ([2, 0, 2], si(1))]),
                series(vec![([0, 0, 4], si(2))]),
            ],
            16,
            [0, 0, 2],
        );
        let curve = curve_from_sequence(&f, unique_transverse_walker(), 5)
            .expect("axis walk succeeds");
        assert!(curve.jet(Axis::X).is_zero());
        assert!(curve.jet(Axis::Y).is_zero());
        assert_eq!(verify_invariance(&f, &curve, 5), 5);
    }

    #[test]
    fn strict_transform_of_the_walked_curve_is_invariant_upstairs() {
        let f = tilted_spike_sample();
        let curve = curve_from_sequence(&f, unique_transverse_walker(), 5)
            .expect("spike walk succeeds");
        let tangent = curve.tangent();
        let child = lift_point_blowup(&f, &tangent, Axis::Z).expect("lift at the tangent");
        let up = curve.strict_transform(child.divisor());
        assert_eq!(up.depth(), 4);
        assert_eq!(verify_invariance(&child, &up, 4), 4);
        // round trip: blowing the transform back down restores the curve
        let down = up.blow_down(&tangent, f.divisor());
        assert_eq!(down, curve);
    }

    #[test]
    fn walker_aborts_on_a_simple_corner() {
        // δ = (xy·x, xy·(−2y), xy·3z): every singular direction touches
        // the marked planes, so no transverse center exists.
        let f = germ(
            [
                series(vec![([2, 1, 0], si(1))]),
                series(vec![([1, 2, 0], si(-2))]),
                series(vec![([1, 1, 1], si(3))]),
            ],
            8,
            [1, 1, 0],
        );
        match curve_from_sequence(&f, unique_transverse_walker(), 2) {
            Err(Error::WalkerAborted { depth: 1, .. }) => {}
            other => panic!("expected an abort at depth 1, got {other:?}"),
        }
    }

    #[test]
    fn spinning_corner_with_equal_columns_has_a_pencil() {
        // Q = y(y + 2z), R = z(y + 2z): b-data equals c-data.
        let f = spinning_sample(1, 2, 1, 2);
        assert_eq!(
            spinning_corner_curve_analysis(&f, 3).expect("trichotomy applies"),
            SpinningCurveVerdict::InfinitelyMany
        );
    }

    #[test]
    fn spinning_corner_with_one_equality_has_no_transverse_curve() {
        // b_y = c_y = 1 but b_z ≠ c_z.
        let f = spinning_sample(1, 2, 1, 5);
        assert_eq!(
            spinning_corner_curve_analysis(&f, 3).expect("trichotomy applies"),
            SpinningCurveVerdict::NoTransverse
        );
    }

    #[test]
    fn spinning_corner_unique_curve_is_produced_and_invariant() {
        // Q = y + 2z, R = 3y + 7z on the cofactor lines: p = −2, q = 5,
        // δ = 1, q·p = −10 ∉ ℕ*, crossing at y₀ = −5/2.
        let f = spinning_sample(1, 2, 3, 7);
        let verdict = spinning_corner_curve_analysis(&f, 4).expect("trichotomy applies");
        let SpinningCurveVerdict::Unique(curve) = verdict else {
            panic!("expected the unique-curve branch, got {verdict:?}");
        };
        assert_eq!(curve.depth(), 4);
        assert_eq!(curve.tangent(), [si(0), s(-5, 2), si(1)]);
        assert_eq!(verify_invariance(&f, &curve, 4), 4);
    }

    #[test]
    fn spinning_corner_resonant_data_is_outside_the_trichotomy() {
        // p = −2, q = 2, δ = −2: q·p/δ = 2 is a positive integer.
        let f = spinning_sample(1, 2, 3, 4);
        assert!(matches!(
            spinning_corner_curve_analysis(&f, 3),
            Err(Error::OutsideTrichotomy)
        ));
        // all four linear data zero is also undecided
        let g = germ(
            [
                series(vec![([1, 1, 1], si(1))]),
                series(vec![([0, 4, 1], si(1))]),
                series(vec![([0, 1, 4], si(1))]),
            ],
            12,
            [0, 1, 1],
        );
        assert!(matches!(
            spinning_corner_curve_analysis(&g, 3),
            Err(Error::OutsideTrichotomy)
        ));
    }

    #[test]
    fn pencil_members_found_by_hand_are_invariant() {
        // With equal columns every crossing y₀ should carry a curve: blow
        // up at [0 : 1 : 1] by hand and solve the resulting half corner.
        let f = spinning_sample(1, 2, 1, 2);
        let center = [si(0), si(1), si(1)];
        let child = lift_point_blowup(&f, &center, Axis::Z).expect("lift at the crossing");
        let inner = half_corner_curve(&child, 3).expect("pencil member exists");
        let curve = inner.blow_down(&center, f.divisor());
        assert_eq!(verify_invariance(&f, &curve, 4), 4);
    }

    #[test]
    fn curve_json_and_display_carry_the_jet() {
        let f = half_corner_sample();
        let curve = half_corner_curve(&f, 2).expect("curve exists");
        let js = curve.to_json();
        assert_eq!(js["e"], 1);
        assert_eq!(js["param"], "z");
        assert_eq!(js["depth"], 2);
        assert_eq!(js["y"][0], "1");
        assert_eq!(js["y"][1], "1/8");
        assert_eq!(js["x"][0], "0");
        let line = curve.to_string();
        assert!(line.contains("z(t) = t"), "display names the parameter: {line}");
    }

    #[test]
    fn default_depth_follows_the_working_order() {
        let f = half_corner_sample(); // n = 14, divisor degree 1
        assert_eq!(default_depth(&f), 11);
        assert_eq!(curve_trust(&f), u32::MAX);
    }
}
