//! Point and coordinate-line blow-ups: chart maps, germ lifting,
//! exceptional-divisor bookkeeping, and the modification tree.
//!
//! Lifting is implemented twice, sharing one derivation:
//!
//! * an **exact engine** ([`RatGerm`]) representing a germ as
//!   `id + dn / den` with polynomial numerators `dn` and a single unit
//!   polynomial denominator. Lifts stay exact at any depth and the germ can
//!   be re-expanded to any truncation order afterwards;
//! * a **truncated path** working directly on certified series, used when
//!   the input germ is itself a truncation. Each point lift costs one
//!   degree of chart-jet certainty (the division by the chart variable).
//!
//! For the chart variable x_j and a direction v (normalized v_j = 1), the
//! chart map is σ(x) = (…, (x_k + v_k)·x_j, …, x_j, …); writing f = id +
//! dn/D one gets, with Q := D∘σ + (dn_j∘σ)/x_j (a unit since dn has
//! valuation ≥ 2):
//!
//! * lifted chart component: x_j·(1 + (dn_j∘σ)/x_j / D∘σ),
//! * other components: x_k + e_k/(x_j·Q) with
//!   e_k = dn_k∘σ − (x_k + v_k)·dn_j∘σ, which is divisible by x_j.

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{mono_display, Axis, Cert, Mono, Scalar, Series};
use crate::germ::Germ;
use crate::{Error, Result};

/// Hard cap on stored polynomial terms in the exact engine; exceeding it
/// aborts with [`Error::TermBudget`] instead of thrashing.
const TERM_BUDGET: usize = 2_000_000;

// ===================================================================== charts

/// What was blown up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    /// A point of the exceptional ℙ², as a projective direction with
    /// scalar coordinates (in the parent chart).
    Point([Scalar; 3]),
    /// The coordinate line {x_a = x_b = 0} of the parent chart.
    Line(Axis, Axis),
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Point(v) => write!(f, "[{}:{}:{}]", v[0], v[1], v[2]),
            Center::Line(a, b) => write!(f, "{{{a}={b}=0}}"),
        }
    }
}

/// A blow-up chart: which center kind it covers and which coordinate plays
/// the exceptional role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMap {
    pub center: Center,
    pub axis: Axis,
}

impl ChartMap {
    /// The monomial images (x_j ↦ monomial) of the chart substitution,
    /// before any recentering translation.
    pub fn images(&self) -> [Mono; 3] {
        let mut imgs = [Axis::X.unit_mono(), Axis::Y.unit_mono(), Axis::Z.unit_mono()];
        match &self.center {
            Center::Point(_) => {
                for k in 0..3 {
                    if k != self.axis.index() {
                        imgs[k][self.axis.index()] += 1;
                    }
                }
            }
            Center::Line(a, b) => {
                let other = if *a == self.axis { *b } else { *a };
                imgs[other.index()][self.axis.index()] += 1;
            }
        }
        imgs
    }
}

impl fmt::Display for ChartMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs = self.images();
        let strs: Vec<String> = imgs.iter().map(mono_display).collect();
        write!(f, "({})", strs.join(", "))
    }
}

/// Is a direction tangent to a marked divisor component at this point?
pub fn is_exceptional(divisor: &Mono, v: &[Scalar; 3]) -> bool {
    (0..3).any(|k| divisor[k] > 0 && v[k].is_zero())
}

// ============================================================== exact engine

/// Exact rational representation of a tangent-to-the-identity germ:
/// f = id + dn/den with polynomial numerators and a unit polynomial
/// denominator (den(0) = 1). Closed under blow-up lifts.
#[derive(Clone, Debug)]
pub struct RatGerm {
    dn: [Series; 3],
    den: Series,
    divisor: Mono,
}

impl RatGerm {
    /// Wrap a polynomial germ (exact coordinates required).
    pub fn from_polynomial_germ(g: &Germ) -> Result<RatGerm> {
        for c in g.coords() {
            if c.cert() != Cert::Exact {
                return Err(Error::NotReducible {
                    reason: "exact engine requires polynomial (exact) germ data".into(),
                });
            }
        }
        Ok(RatGerm {
            dn: g.delta(),
            den: Series::constant(Scalar::one(), Cert::Exact),
            divisor: g.divisor(),
        })
    }

    pub fn from_parts(dn: [Series; 3], den: Series, divisor: Mono) -> Result<RatGerm> {
        if den.coeff(&[0, 0, 0]) != Scalar::one() {
            return Err(Error::NonUnit);
        }
        let g = RatGerm { dn, den, divisor };
        g.check_budget()?;
        Ok(g)
    }

    fn check_budget(&self) -> Result<()> {
        let terms =
            self.dn.iter().map(Series::term_count).sum::<usize>() + self.den.term_count();
        if terms > TERM_BUDGET {
            return Err(Error::TermBudget { terms, cap: TERM_BUDGET });
        }
        Ok(())
    }

    pub fn divisor(&self) -> Mono {
        self.divisor
    }

    pub fn dn(&self) -> &[Series; 3] {
        &self.dn
    }

    pub fn den(&self) -> &Series {
        &self.den
    }

    /// Valuation of f − id (den is a unit, so the numerator valuation is
    /// the true order).
    pub fn order(&self) -> Result<u32> {
        let v = self.dn.iter().map(Series::val).min().expect("three components");
        if v == u32::MAX {
            return Err(Error::IdentityGerm);
        }
        Ok(v)
    }

    /// Per-axis monomial content of f − id (valid exactly: divisibility of
    /// dn/den by a monomial is equivalent to divisibility of dn).
    pub fn content(&self) -> Mono {
        let mut c = [u32::MAX; 3];
        for d in &self.dn {
            if let Some(sc) = d.stored_content() {
                for k in 0..3 {
                    c[k] = c[k].min(sc[k]);
                }
            }
        }
        if c[0] == u32::MAX {
            return [0, 0, 0];
        }
        c
    }

    /// Expand to a truncated germ of working order n (exact when den = 1).
    pub fn to_germ(&self, n: u32) -> Result<Germ> {
        let delta: [Series; 3] = if self.den.term_count() == 1 {
            self.dn.clone()
        } else {
            let inv = self.den.invert_unit_to(Cert::Total(n))?;
            std::array::from_fn(|j| self.dn[j].truncate_total(n).mul(&inv))
        };
        Germ::from_displacement(
            std::array::from_fn(|j| delta[j].truncate_total(n)),
            n,
            self.divisor,
        )
    }

    /// Exact lift under the point blow-up at direction v, in the chart of
    /// the given axis (v's chart coordinate must be nonzero; v is
    /// normalized so it becomes 1).
    pub fn lift_point(&self, v: &[Scalar; 3], chart: Axis) -> Result<RatGerm> {
        let j = chart.index();
        if v[j].is_zero() {
            return Err(Error::DirectionNotInChart);
        }
        let scale = v[j].inv().expect("nonzero");
        let v: [Scalar; 3] = std::array::from_fn(|k| &v[k] * &scale);
        let order = self.order()?;
        let chart_map = ChartMap { center: Center::Point(v.clone()), axis: chart };
        let images = chart_map.images();

        // pull back through σ: monomial substitution, then recentering
        let pull = |s: &Series| -> Result<Series> {
            let mut t = s.subst_monomials(&images);
            for k in 0..3 {
                if k != j && !v[k].is_zero() {
                    t = t.translate(Axis::from_index(k), &v[k])?;
                }
            }
            Ok(t)
        };
        let dns: [Series; 3] = [pull(&self.dn[0])?, pull(&self.dn[1])?, pull(&self.dn[2])?];
        let dsig = pull(&self.den)?;

        let chart_mono = chart.unit_mono();
        // Q-part: D∘σ + (dn_j∘σ)/x_j, the new unit factor
        let dprime = dsig.add(&dns[j].div_monomial(&chart_mono)?);
        let mut dn_new: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Exact));
        for k in 0..3 {
            if k == j {
                dn_new[k] = dns[j].mul(&dprime);
            } else {
                let xk = Series::variable(Axis::from_index(k), Cert::Exact)
                    .add(&Series::constant(v[k].clone(), Cert::Exact));
                let e = dns[k].sub(&xk.mul(&dns[j]));
                dn_new[k] = e.div_monomial(&chart_mono)?.mul(&dsig);
            }
        }
        let den_new = dsig.mul(&dprime);

        let divisor = updated_divisor_point(&self.divisor, &v, chart, order, &dn_new);
        RatGerm::from_parts(dn_new, den_new, divisor)
    }

    /// Exact lift under the blow-up of the coordinate line
    /// {x_a = x_b = 0}, in the chart where `chart` ∈ {a, b} stays a
    /// coordinate. Requires the line to be pointwise fixed.
    pub fn lift_line(&self, a: Axis, b: Axis, chart: Axis) -> Result<RatGerm> {
        assert!(a != b, "a coordinate line needs two distinct axes");
        assert!(chart == a || chart == b, "chart must be one of the line's axes");
        let other = if chart == a { b } else { a };
        let (c, o) = (chart.index(), other.index());
        for (k, d) in self.dn.iter().enumerate() {
            for (m, _) in d.terms() {
                if m[c] == 0 && m[o] == 0 {
                    return Err(Error::LineNotFixed {
                        comp: Axis::from_index(k).name(),
                        term: mono_display(m),
                    });
                }
            }
        }
        let chart_map = ChartMap { center: Center::Line(a, b), axis: chart };
        let images = chart_map.images();
        let pull = |s: &Series| s.subst_monomials(&images);
        let dns: [Series; 3] = [pull(&self.dn[0]), pull(&self.dn[1]), pull(&self.dn[2])];
        let dsig = pull(&self.den);

        let chart_mono = chart.unit_mono();
        let w = dsig.add(&dns[c].div_monomial(&chart_mono)?);
        let mut dn_new: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Exact));
        for k in 0..3 {
            if k == o {
                let xo = Series::variable(other, Cert::Exact);
                let e = dns[o].sub(&xo.mul(&dns[c]));
                dn_new[k] = e.div_monomial(&chart_mono)?.mul(&dsig);
            } else {
                dn_new[k] = dns[k].mul(&w);
            }
        }
        let den_new = dsig.mul(&w);

        let divisor = updated_divisor_line(&self.divisor, chart, other, &dn_new);
        RatGerm::from_parts(dn_new, den_new, divisor)
    }
}

/// Divisor of a point lift: old components stay visible where the
/// direction lies in them; the new exceptional multiplicity is the honest
/// chart-axis content of the lifted numerators (= order − 1 unless the
/// germ is dicritical along the exceptional divisor).
fn updated_divisor_point(
    old: &Mono,
    v: &[Scalar; 3],
    chart: Axis,
    order: u32,
    dn_new: &[Series; 3],
) -> Mono {
    let j = chart.index();
    let mut div = [0u32; 3];
    for k in 0..3 {
        if k != j && v[k].is_zero() {
            div[k] = old[k];
        }
    }
    let exc = dn_new
        .iter()
        .filter_map(Series::stored_content)
        .map(|c| c[j])
        .min()
        .unwrap_or(order.saturating_sub(1));
    debug_assert!(exc + 1 >= order, "exceptional multiplicity below order − 1");
    div[j] = exc;
    div
}

/// Divisor of a line lift: the third axis and the off-chart line axis keep
/// their multiplicities; the chart axis becomes exceptional with the honest
/// content multiplicity.
fn updated_divisor_line(old: &Mono, chart: Axis, other: Axis, dn_new: &[Series; 3]) -> Mono {
    let mut div = *old;
    let exc = dn_new
        .iter()
        .filter_map(Series::stored_content)
        .map(|c| c[chart.index()])
        .min()
        .unwrap_or(0);
    div[chart.index()] = exc;
    let _ = other;
    div
}

// ========================================================== germ-level lifts

/// Lift a germ under the point blow-up at direction v in the given chart.
/// Exact (polynomial) germs stay exact through the rational engine;
/// truncated germs are lifted with certificate accounting (one chart-jet
/// degree is spent on the division by the chart variable).
pub fn lift_point_blowup(f: &Germ, v: &[Scalar; 3], chart: Axis) -> Result<Germ> {
    if f.coords().iter().all(|c| c.cert() == Cert::Exact) {
        let n = f.order_n();
        return RatGerm::from_polynomial_germ(f)?.lift_point(v, chart)?.to_germ(n);
    }
    lift_point_series(f, v, chart)
}

fn lift_point_series(f: &Germ, v: &[Scalar; 3], chart: Axis) -> Result<Germ> {
    let j = chart.index();
    if v[j].is_zero() {
        return Err(Error::DirectionNotInChart);
    }
    let scale = v[j].inv().expect("nonzero");
    let v: [Scalar; 3] = std::array::from_fn(|k| &v[k] * &scale);
    let order = f.order()?;
    let chart_map = ChartMap { center: Center::Point(v.clone()), axis: chart };
    let images = chart_map.images();
    let delta = f.delta();
    let pull = |s: &Series| -> Result<Series> {
        let mut t = s.subst_monomials(&images);
        for k in 0..3 {
            if k != j && !v[k].is_zero() {
                t = t.translate(Axis::from_index(k), &v[k])?;
            }
        }
        Ok(t)
    };
    let dns: [Series; 3] = [pull(&delta[0])?, pull(&delta[1])?, pull(&delta[2])?];
    let chart_mono = chart.unit_mono();
    let q = dns[j].div_monomial(&chart_mono)?;
    let unit = Series::constant(Scalar::one(), q.cert()).add(&q);
    let inv = unit.invert_unit()?;
    let mut coords: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Exact));
    for k in 0..3 {
        if k == j {
            // x_j·(1 + q) exactly
            coords[k] = Series::variable(chart, Cert::Exact).add(&q.mul_monomial(&chart_mono));
        } else {
            let xk = Series::variable(Axis::from_index(k), Cert::Exact)
                .add(&Series::constant(v[k].clone(), Cert::Exact));
            let e = dns[k].sub(&xk.mul(&dns[j]));
            let lifted = e.div_monomial(&chart_mono)?.mul(&inv);
            coords[k] = Series::variable(Axis::from_index(k), Cert::Exact).add(&lifted);
        }
    }
    let trust = coords
        .iter()
        .filter_map(|c| c.cert().total_trust())
        .min()
        .expect("truncated lift has finite trust");
    let dn_view: [Series; 3] =
        std::array::from_fn(|k| coords[k].sub(&Series::variable(Axis::from_index(k), Cert::Exact)));
    let divisor = updated_divisor_point(&f.divisor(), &v, chart, order, &dn_view);
    Germ::new(coords, trust, divisor)
}

/// Lift a germ under the blow-up of the coordinate line {x_a = x_b = 0} in
/// the chart of the given axis (which must be a or b).
pub fn lift_line_blowup(f: &Germ, a: Axis, b: Axis, chart: Axis) -> Result<Germ> {
    if f.coords().iter().all(|c| c.cert() == Cert::Exact) {
        let n = f.order_n();
        return RatGerm::from_polynomial_germ(f)?.lift_line(a, b, chart)?.to_germ(n);
    }
    // truncated path: same algebra on certified series
    assert!(a != b && (chart == a || chart == b));
    let other = if chart == a { b } else { a };
    let (c, o) = (chart.index(), other.index());
    let delta = f.delta();
    for (k, d) in delta.iter().enumerate() {
        for (m, _) in d.terms() {
            if m[c] == 0 && m[o] == 0 {
                return Err(Error::LineNotFixed {
                    comp: Axis::from_index(k).name(),
                    term: mono_display(m),
                });
            }
        }
    }
    let images = ChartMap { center: Center::Line(a, b), axis: chart }.images();
    let dns: [Series; 3] = std::array::from_fn(|k| delta[k].subst_monomials(&images));
    let chart_mono = chart.unit_mono();
    let w = Series::constant(Scalar::one(), dns[c].cert())
        .add(&dns[c].div_monomial(&chart_mono)?);
    let inv = w.invert_unit()?;
    let mut coords: [Series; 3] = std::array::from_fn(|_| Series::zero(Cert::Exact));
    for k in 0..3 {
        if k == o {
            let xo = Series::variable(other, Cert::Exact);
            let e = dns[o].sub(&xo.mul(&dns[c]));
            let lifted = e.div_monomial(&chart_mono)?.mul(&inv);
            coords[k] = Series::variable(other, Cert::Exact).add(&lifted);
        } else {
            coords[k] = Series::variable(Axis::from_index(k), Cert::Exact).add(&dns[k]);
        }
    }
    let trust = coords
        .iter()
        .filter_map(|c| c.cert().total_trust())
        .min()
        .expect("truncated lift has finite trust");
    let dn_view: [Series; 3] =
        std::array::from_fn(|k| coords[k].sub(&Series::variable(Axis::from_index(k), Cert::Exact)));
    let divisor = updated_divisor_line(&f.divisor(), chart, other, &dn_view);
    Germ::new(coords, trust, divisor)
}

// ============================================================ the tree

/// One site of a modification tree.
#[derive(Clone, Debug)]
pub struct BlowupNode {
    pub parent: Option<usize>,
    /// How this node was reached (None at the root).
    pub chart: Option<ChartMap>,
    /// The recentering applied after the chart substitution.
    pub translation: [Scalar; 3],
    /// Exact engine state at this node.
    pub engine: RatGerm,
    /// Human-readable name (e.g. a point label) and classification verdict,
    /// filled in by the caller.
    pub name: String,
    pub verdict: Option<String>,
    pub children: Vec<usize>,
}

/// An arena-backed blow-up tree over the exact engine.
#[derive(Clone, Debug, Default)]
pub struct ModificationTree {
    nodes: Vec<BlowupNode>,
}

impl ModificationTree {
    pub fn new_root(engine: RatGerm, name: impl Into<String>) -> ModificationTree {
        ModificationTree {
            nodes: vec![BlowupNode {
                parent: None,
                chart: None,
                translation: [Scalar::zero(), Scalar::zero(), Scalar::zero()],
                engine,
                name: name.into(),
                verdict: None,
                children: Vec::new(),
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &BlowupNode {
        &self.nodes[id]
    }

    pub fn node_mut(&mut self, id: usize) -> &mut BlowupNode {
        &mut self.nodes[id]
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> {
        0..self.nodes.len()
    }

    /// Blow up a point below `parent` and append the lifted node.
    pub fn add_point_child(
        &mut self,
        parent: usize,
        v: &[Scalar; 3],
        chart: Axis,
        name: impl Into<String>,
    ) -> Result<usize> {
        let engine = self.nodes[parent].engine.lift_point(v, chart)?;
        let scale = v[chart.index()].inv().expect("visible in chart");
        let translation: [Scalar; 3] = std::array::from_fn(|k| &v[k] * &scale);
        let id = self.nodes.len();
        self.nodes.push(BlowupNode {
            parent: Some(parent),
            chart: Some(ChartMap { center: Center::Point(translation.clone()), axis: chart }),
            translation,
            engine,
            name: name.into(),
            verdict: None,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        Ok(id)
    }

    /// Blow up a coordinate line below `parent` and append the lifted node.
    pub fn add_line_child(
        &mut self,
        parent: usize,
        a: Axis,
        b: Axis,
        chart: Axis,
        name: impl Into<String>,
    ) -> Result<usize> {
        let engine = self.nodes[parent].engine.lift_line(a, b, chart)?;
        let id = self.nodes.len();
        self.nodes.push(BlowupNode {
            parent: Some(parent),
            chart: Some(ChartMap { center: Center::Line(a, b), axis: chart }),
            translation: [Scalar::zero(), Scalar::zero(), Scalar::zero()],
            engine,
            name: name.into(),
            verdict: None,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        Ok(id)
    }

    /// DOT rendering: one node per site, labelled name / chart / verdict.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph modification {\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let mut label = n.name.clone();
            if let Some(c) = &n.chart {
                label.push_str(&format!("\\n{} chart {}", c.center, c.axis));
            }
            if let Some(v) = &n.verdict {
                label.push_str(&format!("\\n{v}"));
            }
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", label.replace('"', "'")));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                out.push_str(&format!("  n{i} -> n{c};\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON rendering mirroring the node fields.
    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .map(|n| {
                let d = n.engine.divisor();
                json!({
                    "name": n.name,
                    "parent": n.parent,
                    "chart": n.chart.as_ref().map(|c| format!("{c}")),
                    "center": n.chart.as_ref().map(|c| format!("{}", c.center)),
                    "translation": n.translation.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "divisor": [d[0], d[1], d[2]],
                    "verdict": n.verdict,
                    "children": n.children,
                })
            })
            .collect();
        json!({ "nodes": nodes })
    }
}

// ================================================================== tests

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{mono_total, Rat};

    fn s(c: i64) -> Scalar {
        Scalar::from_int(c)
    }

    /// Eq-style cubic jet with polynomial tails P, Q, R of order ≥ 4:
    /// f − id = (yz(y−z) + P, x(x²−z²) + Q, xz(y−z) + R).
    fn cubic_family(p: &[(Mono, i64)], q: &[(Mono, i64)], r: &[(Mono, i64)]) -> Germ {
        let dx = Series::poly_int(&[([0, 2, 1], 1), ([0, 1, 2], -1)]).add(&Series::poly_int(p));
        let dy = Series::poly_int(&[([3, 0, 0], 1), ([1, 0, 2], -1)]).add(&Series::poly_int(q));
        let dz = Series::poly_int(&[([1, 1, 1], 1), ([1, 0, 2], -1)]).add(&Series::poly_int(r));
        Germ::from_displacement([dx, dy, dz], 12, [0, 0, 0]).unwrap()
    }

    #[test]
    fn first_blowup_origin_chart_z() {
        // P = x⁴, R = y⁴; at [0:0:1] the x-component displacement starts
        // z²·(−y + x² + y² − x²y) + z³·(P − x·R)(x, y, 1)
        let f = cubic_family(&[([4, 0, 0], 1)], &[], &[([0, 4, 0], 1)]);
        let lifted = lift_point_blowup(&f, &[s(0), s(0), s(1)], Axis::Z).unwrap();
        assert_eq!(lifted.divisor(), [0, 0, 2]);
        let dx = lifted.delta_comp(Axis::X);
        // z²-jet: −y + x² + y² − x²y
        assert_eq!(dx.coeff(&[0, 1, 2]), s(-1));
        assert_eq!(dx.coeff(&[2, 0, 2]), s(1));
        assert_eq!(dx.coeff(&[0, 2, 2]), s(1));
        assert_eq!(dx.coeff(&[2, 1, 2]), s(-1));
        // z³-jet picks up P − x·R at (x, y, 1): x⁴ − x·y⁴
        assert_eq!(dx.coeff(&[4, 0, 3]), s(1));
        assert_eq!(dx.coeff(&[1, 4, 3]), s(-1));
        // divisor z² divides the displacement
        assert_eq!(dx.coeff(&[0, 1, 1]), s(0));
    }

    #[test]
    fn blowup_at_interior_direction() {
        // [1:1:1] is a characteristic direction of the cubic jet; the lift
        // must recenter it to the origin and stay tangent to the identity.
        let f = cubic_family(&[], &[], &[]);
        let lifted = lift_point_blowup(&f, &[s(1), s(1), s(1)], Axis::Z).unwrap();
        assert_eq!(lifted.divisor(), [0, 0, 2]);
        assert!(lifted.order().unwrap() >= 2);
    }

    #[test]
    fn directions_invisible_in_chart_are_rejected() {
        let f = cubic_family(&[], &[], &[]);
        assert!(matches!(
            lift_point_blowup(&f, &[s(0), s(1), s(0)], Axis::Z),
            Err(Error::DirectionNotInChart)
        ));
    }

    #[test]
    fn truncated_lift_matches_exact_lift() {
        let f = cubic_family(&[([4, 0, 0], 1)], &[([0, 0, 4], 2)], &[([0, 4, 0], 1)]);
        let exact = lift_point_blowup(&f, &[s(0), s(1), s(1)], Axis::Z).unwrap();
        // same germ handed over as a total-degree truncation
        let trunc = Germ::from_displacement(
            [
                f.delta_comp(Axis::X).with_cert(Cert::Total(12)),
                f.delta_comp(Axis::Y).with_cert(Cert::Total(12)),
                f.delta_comp(Axis::Z).with_cert(Cert::Total(12)),
            ],
            12,
            [0, 0, 0],
        )
        .unwrap();
        let lifted = lift_point_blowup(&trunc, &[s(0), s(1), s(1)], Axis::Z).unwrap();
        assert_eq!(lifted.divisor(), exact.divisor());
        // certified z-jet degree 11 after spending one on the division
        let trust = lifted.comp(Axis::X).cert();
        assert_eq!(trust, Cert::Jet(Axis::Z, 11));
        // coefficients agree on the intersection of the two certificate
        // windows (total degree ≤ 12 for the exact expansion, z-degree ≤ 11
        // for the truncated lift)
        for axis in Axis::ALL {
            let want = exact.delta_comp(axis);
            let got = lifted.delta_comp(axis);
            for (m, c) in want.terms() {
                if m[2] <= 11 {
                    assert_eq!(got.coeff(m), *c, "missing {:?} in {axis}", m);
                }
            }
            for (m, c) in got.terms() {
                if mono_total(m) <= 12 {
                    assert_eq!(want.coeff(m), *c, "spurious {:?} in {axis}", m);
                }
            }
        }
        assert!(!lifted.delta_comp(Axis::X).is_zero());
    }

    #[test]
    fn simple_corner_blowup_exponent() {
        // f = id + x^a y^b z^c (λx, μy, ((a+b)λ + (b... just a generic ρz):
        // blow-up at [0:0:1] turns (a,b,c) into exceptional multiplicity
        // s = a + b + c on the z-axis.
        let (a, b, c) = (2u32, 1u32, 1u32);
        let dx = Series::from_terms([([a + 1, b, c], s(1))], Cert::Exact);
        let dy = Series::from_terms([([a, b + 1, c], s(-2))], Cert::Exact);
        let dz = Series::from_terms([([a, b, c + 1], s(3))], Cert::Exact);
        let f = Germ::from_displacement([dx, dy, dz], 12, [a, b, c]).unwrap();
        let lifted = lift_point_blowup(&f, &[s(0), s(0), s(1)], Axis::Z).unwrap();
        assert_eq!(lifted.divisor(), [a, b, a + b + c]);
    }

    #[test]
    fn line_blowup_requires_pointwise_fixed_line() {
        let f = cubic_family(&[], &[], &[]);
        // the cubic jet has the y-component x(x²−z²) ∉ ⟨x,y⟩... it is! use
        // the line {y=z=0}: x-component yz(y−z) ∈ ⟨y,z⟩ ✓ but the
        // y-component has the term x³ ∉ ⟨y,z⟩ → not pointwise fixed.
        assert!(matches!(
            lift_line_blowup(&f, Axis::Y, Axis::Z, Axis::Z),
            Err(Error::LineNotFixed { .. })
        ));
    }

    #[test]
    fn line_blowup_of_fixed_axis() {
        // f = id + (xz·x, xz·z·y, z²·1)... take dn = (x²z, xyz, z³):
        // every term lies in ⟨x,z⟩ so the line {x=z=0} is pointwise fixed.
        let f = Germ::from_displacement(
            [
                Series::poly_int(&[([2, 0, 1], 1)]),
                Series::poly_int(&[([1, 1, 1], 1)]),
                Series::poly_int(&[([0, 0, 3], 1)]),
            ],
            10,
            [0, 0, 0],
        )
        .unwrap();
        let lifted = lift_line_blowup(&f, Axis::X, Axis::Z, Axis::X).unwrap();
        // chart (x, y, xz): pullbacks (x³z, x²yz, x³z³); the unit factor is
        // 1 + x²z and the z-component displacement works out to
        // (x²z³ − x²z²)/(1 + x²z) = −x²z² + x²z³ + x⁴z³ − x⁴z⁴ + …
        assert_eq!(lifted.divisor(), [2, 0, 0]);
        assert_eq!(lifted.order().unwrap(), 4);
        let dz = lifted.delta_comp(Axis::Z);
        assert_eq!(dz.coeff(&[2, 0, 2]), s(-1));
        assert_eq!(dz.coeff(&[2, 0, 3]), s(1));
        assert_eq!(dz.coeff(&[4, 0, 3]), s(1));
        assert_eq!(dz.coeff(&[4, 0, 4]), s(-1));
    }

    #[test]
    fn chart_transition_conjugates_the_two_lifts() {
        // lift at v = [1:2:1], once in the z-chart and once in the x-chart;
        // the two germs are conjugate by the explicit transition map.
        let f = cubic_family(&[([4, 0, 0], 1)], &[], &[([0, 0, 4], 1)]);
        let n = 9u32;
        let gz = lift_point_blowup(&f, &[s(1), s(2), s(1)], Axis::Z).unwrap();
        let gx = lift_point_blowup(&f, &[s(1), s(2), s(1)], Axis::X).unwrap();
        // transition from z-chart coords (x,y,z) at (1,2,1) to x-chart
        // coords at (2,1): y' = (y+2)/(x+1) − 2, z' = 1/(x+1) − 1, x' = (x+1)z
        let one_plus_x = Series::poly_int(&[([0, 0, 0], 1), ([1, 0, 0], 1)]);
        let inv_1px = one_plus_x.invert_unit_to(Cert::Total(n)).unwrap();
        let y_img = Series::poly_int(&[([0, 1, 0], 1), ([0, 0, 0], 2)])
            .with_cert(Cert::Total(n))
            .mul(&inv_1px)
            .sub(&Series::constant(s(2), Cert::Total(n)));
        let z_img = inv_1px.sub(&Series::constant(s(1), Cert::Total(n)));
        let x_img = one_plus_x.mul(&Series::poly_int(&[([0, 0, 1], 1)]));
        // τ maps z-chart germ coords to x-chart coords (x', y', z')
        let tau = [x_img.truncate_total(n), y_img, z_img];
        // drop the divisor marking: the transition map renames the
        // exceptional coordinate, so the z-chart marking cannot survive
        let gz_t = Germ::from_displacement(
            [
                gz.delta_comp(Axis::X).truncate_total(n),
                gz.delta_comp(Axis::Y).truncate_total(n),
                gz.delta_comp(Axis::Z).truncate_total(n),
            ],
            n,
            [0, 0, 0],
        )
        .unwrap();
        let conj = gz_t.conjugate(&crate::germ::invert_map(&tau, n).unwrap()).unwrap();
        // compare within the weaker trust window
        for axis in Axis::ALL {
            let a = conj.delta_comp(axis);
            let b = gx.delta_comp(axis);
            let diff = a.sub(&b.truncate_total(n));
            let dt = diff.truncate_total(n.min(diff.cert().total_trust().unwrap_or(n)));
            assert!(dt.is_zero(), "transition mismatch in {axis}: {dt}");
        }
    }

    #[test]
    fn tree_building_and_export() {
        let f = cubic_family(&[], &[], &[]);
        let engine = RatGerm::from_polynomial_germ(&f).unwrap();
        let mut tree = ModificationTree::new_root(engine, "origin");
        let c1 = tree
            .add_point_child(0, &[s(0), s(0), s(1)], Axis::Z, "p1")
            .unwrap();
        tree.node_mut(c1).verdict = Some("degenerate spike".into());
        let dot = tree.to_dot();
        assert!(dot.contains("n0 -> n1"));
        assert!(dot.contains("degenerate spike"));
        let js = tree.to_json();
        assert_eq!(js["nodes"].as_array().unwrap().len(), 2);
        assert_eq!(js["nodes"][1]["divisor"], json!([0, 0, 2]));
    }

    #[test]
    fn exceptional_flags() {
        let div = [0u32, 0, 2];
        assert!(is_exceptional(&div, &[s(1), s(0), s(0)]));
        assert!(is_exceptional(&div, &[s(1), s(1), s(0)]));
        assert!(!is_exceptional(&div, &[s(0), s(0), s(1)]));
        assert!(!is_exceptional(&div, &[s(1), s(1), s(1)]));
    }

    #[test]
    fn reexpansion_at_higher_order() {
        let f = cubic_family(&[([4, 0, 0], 1)], &[], &[]);
        let eng = RatGerm::from_polynomial_germ(&f).unwrap();
        let lifted = eng.lift_point(&[s(1), s(1), s(1)], Axis::Z).unwrap();
        let g8 = lifted.to_germ(8).unwrap();
        let g12 = lifted.to_germ(12).unwrap();
        // the lower-order expansion is the truncation of the higher one
        for axis in Axis::ALL {
            let d = g12.delta_comp(axis).truncate_total(8).sub(&g8.delta_comp(axis));
            assert!(d.is_zero());
        }
        let _ = Rat::default();
    }
}
