//! Tangent-to-the-identity germs of (ℂ³, 0).
//!
//! A [`Germ`] stores the three coordinate components of the map, a working
//! truncation order, and the marked fixed-divisor monomial. Construction
//! validates tangency to the identity and divisor divisibility; composition,
//! conjugation and iteration preserve certified-degree accounting through
//! the underlying [`Series`] certificates.

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{mono_display, mono_divides, mono_is_zero, Axis, Cert, Mono, Scalar, Series};
use crate::{Error, Result};

/// A formal self-map of (ℂ³, 0) tangent to the identity, with a marked
/// fixed divisor x^a y^b z^c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    coords: [Series; 3],
    n: u32,
    divisor: Mono,
}

/// Lowest-degree data of a germ: the bottom homogeneous part of f − id,
/// its monomial content, and the content-free bottom part.
#[derive(Clone, Debug)]
pub struct HomogeneousData {
    /// Bottom homogeneous part of f − id (exact polynomials, one per
    /// component; a component is zero when its valuation exceeds `order`).
    pub h: [Series; 3],
    /// Exponents of the monomial content ℓ of f − id.
    pub l_exps: Mono,
    /// Bottom homogeneous part of ℓ⁻¹·(f − id).
    pub h_l: [Series; 3],
    /// Degree of `h` (valuation of f − id).
    pub order: u32,
    /// Degree of `h_l` (= order − |ℓ|).
    pub pure_order: u32,
}

impl Germ {
    /// Validate and build a germ from its three coordinate components.
    pub fn new(coords: [Series; 3], n: u32, divisor: Mono) -> Result<Germ> {
        for (j, c) in coords.iter().enumerate() {
            if let Some(t) = c.cert().total_trust() {
                if t < n {
                    return Err(Error::NeedHigherOrder { have: t, need: n });
                }
            }
            // constant and linear coefficients must match the identity
            let zero = [0, 0, 0];
            if !c.coeff(&zero).is_zero() {
                return Err(Error::NotTangentToIdentity {
                    reason: format!("component {} has a nonzero constant term", Axis::from_index(j)),
                });
            }
            for k in 0..3 {
                let got = c.coeff(&Axis::from_index(k).unit_mono());
                let want = if k == j { Scalar::one() } else { Scalar::zero() };
                if got != want {
                    return Err(Error::NotTangentToIdentity {
                        reason: format!(
                            "linear part of component {} in {} is {}, expected {}",
                            Axis::from_index(j),
                            Axis::from_index(k),
                            got,
                            want
                        ),
                    });
                }
            }
        }
        let g = Germ { coords, n, divisor };
        g.check_divisor()?;
        Ok(g)
    }

    fn check_divisor(&self) -> Result<()> {
        if mono_is_zero(&self.divisor) {
            return Ok(());
        }
        for j in 0..3 {
            let d = self.delta_comp(Axis::from_index(j));
            for (m, _) in d.terms() {
                if !mono_divides(&self.divisor, m) {
                    return Err(Error::DivisorDoesNotDivide {
                        divisor: mono_display(&self.divisor),
                        comp: Axis::from_index(j).name(),
                        term: mono_display(m),
                    });
                }
            }
        }
        Ok(())
    }

    /// The identity germ at working order n.
    pub fn identity(n: u32) -> Germ {
        Germ {
            coords: [
                Series::variable(Axis::X, Cert::Exact),
                Series::variable(Axis::Y, Cert::Exact),
                Series::variable(Axis::Z, Cert::Exact),
            ],
            n,
            divisor: [0, 0, 0],
        }
    }

    /// Build `id + displacement` from the three displacement components.
    pub fn from_displacement(delta: [Series; 3], n: u32, divisor: Mono) -> Result<Germ> {
        let coords = [
            delta[0].add(&Series::variable(Axis::X, Cert::Exact)),
            delta[1].add(&Series::variable(Axis::Y, Cert::Exact)),
            delta[2].add(&Series::variable(Axis::Z, Cert::Exact)),
        ];
        Germ::new(coords, n, divisor)
    }

    pub fn comp(&self, axis: Axis) -> &Series {
        &self.coords[axis.index()]
    }

    pub fn coords(&self) -> &[Series; 3] {
        &self.coords
    }

    /// One component of f − id.
    pub fn delta_comp(&self, axis: Axis) -> Series {
        self.coords[axis.index()].sub(&Series::variable(axis, Cert::Exact))
    }

    pub fn delta(&self) -> [Series; 3] {
        [
            self.delta_comp(Axis::X),
            self.delta_comp(Axis::Y),
            self.delta_comp(Axis::Z),
        ]
    }

    pub fn order_n(&self) -> u32 {
        self.n
    }

    pub fn divisor(&self) -> Mono {
        self.divisor
    }

    pub fn is_identity(&self) -> bool {
        self.delta().iter().all(Series::is_zero)
    }

    /// Valuation of f − id (the order of the germ).
    pub fn order(&self) -> Result<u32> {
        let v = self.delta().iter().map(Series::val).min().expect("three components");
        if v == u32::MAX || v > self.n {
            return Err(Error::IdentityGerm);
        }
        Ok(v)
    }

    /// Lowest-degree homogeneous data of f − id.
    pub fn homogeneous_data(&self) -> Result<HomogeneousData> {
        let delta = self.delta();
        let order = self.order()?;
        let h = [
            delta[0].homogeneous_part(order),
            delta[1].homogeneous_part(order),
            delta[2].homogeneous_part(order),
        ];
        // monomial content across all three components
        let mut l_exps = [u32::MAX; 3];
        for d in &delta {
            if let Some(c) = d.stored_content() {
                for k in 0..3 {
                    l_exps[k] = l_exps[k].min(c[k]);
                }
            }
        }
        debug_assert!(l_exps.iter().all(|&e| e != u32::MAX), "non-identity germ has terms");
        let h_l = [
            h[0].div_monomial(&l_exps)?,
            h[1].div_monomial(&l_exps)?,
            h[2].div_monomial(&l_exps)?,
        ];
        let pure_order = order - (l_exps[0] + l_exps[1] + l_exps[2]);
        Ok(HomogeneousData { h, l_exps, h_l, order, pure_order })
    }

    /// Composition f∘g at the weaker of the two working orders.
    pub fn compose(&self, g: &Germ) -> Result<Germ> {
        let n = self.n.min(g.n);
        let delta = self.delta();
        // exact inputs stay exact (f∘g = g + (f − id)∘g)
        if self.coords.iter().chain(g.coords.iter()).all(|c| c.cert() == Cert::Exact) {
            let exact = [
                delta[0].compose(&g.coords)?.add(&g.coords[0]),
                delta[1].compose(&g.coords)?.add(&g.coords[1]),
                delta[2].compose(&g.coords)?.add(&g.coords[2]),
            ];
            return Germ::new(exact, n, self.divisor);
        }
        let gt = [
            g.coords[0].truncate_total(n),
            g.coords[1].truncate_total(n),
            g.coords[2].truncate_total(n),
        ];
        let coords: [Series; 3] = std::array::from_fn(|j| {
            let d = delta[j]
                .truncate_total(n)
                .compose(&gt)
                .expect("coordinate maps vanish at the origin");
            g.coords[j].truncate_total(n).add(&d)
        });
        Germ::new(coords, n, self.divisor)
    }

    /// n-fold iterate f∘…∘f.
    pub fn iterate(&self, k: u32) -> Result<Germ> {
        assert!(k >= 1, "iterate requires a positive count");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Conjugation φ⁻¹∘f∘φ by a formal coordinate change with invertible
    /// linear part. The divisor marking is kept and re-validated; a change
    /// that destroys divisor divisibility is rejected.
    pub fn conjugate(&self, phi: &[Series; 3]) -> Result<Germ> {
        let n = self.n;
        let psi = invert_map(phi, n)?;
        // ψ∘(f∘φ); everything stays exact when f, φ and ψ are polynomials
        let all_exact = self
            .coords
            .iter()
            .chain(phi.iter())
            .chain(psi.iter())
            .all(|c| c.cert() == Cert::Exact);
        let fc: [Series; 3] = if all_exact {
            self.coords.clone()
        } else {
            std::array::from_fn(|j| self.coords[j].truncate_total(n))
        };
        let f_phi = [fc[0].compose(phi)?, fc[1].compose(phi)?, fc[2].compose(phi)?];
        let coords = [
            psi[0].compose(&f_phi)?,
            psi[1].compose(&f_phi)?,
            psi[2].compose(&f_phi)?,
        ];
        Germ::new(coords, n, self.divisor).map_err(|e| match e {
            Error::DivisorDoesNotDivide { divisor, comp, term } => {
                Error::DivisorNotPreserved { divisor, comp, term }
            }
            other => other,
        })
    }

    // ------------------------------------------------------------- JSON

    /// Serialize as `{"N", "divisor", "coords"}` with `coords` holding the
    /// three components of f − id as `[[i,j,k], "scalar"]` pairs.
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .delta()
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
            "divisor": [self.divisor[0], self.divisor[1], self.divisor[2]],
            "coords": comps,
        })
    }

    /// Parse the JSON germ format. Coefficient lists are order-independent
    /// (duplicate monomials accumulate); coefficients are read as exact
    /// polynomial data.
    pub fn from_json(v: &Value) -> Result<Germ> {
        let obj = v.as_object().ok_or_else(|| bad("germ must be a JSON object"))?;
        let n = obj
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or invalid \"N\""))? as u32;
        let div = obj
            .get("divisor")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"divisor\""))?;
        let divisor = parse_mono(div)?;
        let comps = obj
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"coords\""))?;
        if comps.len() != 3 {
            return Err(bad("\"coords\" must list exactly three components"));
        }
        let mut delta = Vec::with_capacity(3);
        for comp in comps {
            let pairs = comp
                .as_array()
                .ok_or_else(|| bad("component must be an array of [monomial, scalar] pairs"))?;
            let mut terms = Vec::with_capacity(pairs.len());
            for p in pairs {
                let pair = p
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("expected [ [i,j,k], \"scalar\" ]"))?;
                let m = parse_mono(
                    pair[0].as_array().ok_or_else(|| bad("monomial must be [i,j,k]"))?,
                )?;
                let s: Scalar = pair[1]
                    .as_str()
                    .ok_or_else(|| bad("coefficient must be a string"))?
                    .parse()?;
                terms.push((m, s));
            }
            delta.push(Series::from_terms(terms, Cert::Exact));
        }
        let delta: [Series; 3] = delta.try_into().expect("length checked");
        Germ::from_displacement(delta, n, divisor)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Germ> {
        Germ::from_json(&serde_json::from_str(s)?)
    }
}

fn bad(msg: &str) -> Error {
    Error::GermFormat(msg.to_string())
}

fn parse_mono(a: &[Value]) -> Result<Mono> {
    if a.len() != 3 {
        return Err(bad("exponent triple must have three entries"));
    }
    let mut m = [0u32; 3];
    for (k, v) in a.iter().enumerate() {
        m[k] = v.as_u64().ok_or_else(|| bad("exponent must be a nonnegative integer"))? as u32;
    }
    Ok(m)
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (axis, c) in Axis::ALL.iter().zip(self.coords.iter()) {
            writeln!(f, "{axis} -> {c}")?;
        }
        if !mono_is_zero(&self.divisor) {
            writeln!(f, "divisor: {}", mono_display(&self.divisor))?;
        }
        Ok(())
    }
}

// ------------------------------------------------------------- map algebra

/// Compose two coordinate maps: (f∘g)_j = f_j(g).
pub fn map_compose(f: &[Series; 3], g: &[Series; 3]) -> Result<[Series; 3]> {
    Ok([f[0].compose(g)?, f[1].compose(g)?, f[2].compose(g)?])
}

/// Is the map linear (origin-preserving with only degree-1 terms)?
fn is_linear_map(phi: &[Series; 3]) -> bool {
    phi.iter().all(|c| {
        c.cert() == Cert::Exact && c.terms().all(|(m, _)| m[0] + m[1] + m[2] == 1)
    })
}

/// The linear part of a map as a 3×3 matrix (rows = components).
pub fn linear_part_matrix(phi: &[Series; 3]) -> [[Scalar; 3]; 3] {
    std::array::from_fn(|j| {
        std::array::from_fn(|k| {
            let m = Axis::from_index(k).unit_mono();
            if phi[j].cert().allows(&m) {
                phi[j].coeff(&m)
            } else {
                Scalar::zero()
            }
        })
    })
}

/// Exact inverse of a 3×3 matrix, `None` when singular.
pub fn invert_matrix(a: &[[Scalar; 3]; 3]) -> Option<[[Scalar; 3]; 3]> {
    let det = det3(a);
    if det.is_zero() {
        return None;
    }
    let inv_det = det.inv().expect("nonzero determinant");
    let cof = |r: usize, c: usize| -> Scalar {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let minor = &a[rs[0]][cs[0]] * &a[rs[1]][cs[1]] - &a[rs[0]][cs[1]] * &a[rs[1]][cs[0]];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // inverse = adjugate / det; adjugate = transposed cofactors
    Some(std::array::from_fn(|j| std::array::from_fn(|k| &cof(k, j) * &inv_det)))
}

pub fn det3(a: &[[Scalar; 3]; 3]) -> Scalar {
    let t1 = &a[0][0] * &(&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1]);
    let t2 = &a[0][1] * &(&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0]);
    let t3 = &a[0][2] * &(&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0]);
    t1 - t2 + t3
}

/// Apply a matrix to the coordinate vector as an exact linear map.
pub fn matrix_to_map(a: &[[Scalar; 3]; 3]) -> [Series; 3] {
    std::array::from_fn(|j| {
        Series::from_terms(
            (0..3).map(|k| (Axis::from_index(k).unit_mono(), a[j][k].clone())),
            Cert::Exact,
        )
    })
}

/// Formal inverse of an origin-preserving coordinate change with
/// invertible linear part: exact for linear maps, otherwise computed
/// order-by-order to total degree n.
pub fn invert_map(phi: &[Series; 3], n: u32) -> Result<[Series; 3]> {
    for c in phi {
        if c.val() == 0 {
            return Err(Error::NonInvertibleChange);
        }
    }
    let a = linear_part_matrix(phi);
    let a_inv = invert_matrix(&a).ok_or(Error::NonInvertibleChange)?;
    if is_linear_map(phi) {
        return Ok(matrix_to_map(&a_inv));
    }
    let phi_t = [
        phi[0].truncate_total(n),
        phi[1].truncate_total(n),
        phi[2].truncate_total(n),
    ];
    // Newton-style refinement: ψ ← ψ − A⁻¹·(φ(ψ) − id), one degree per step
    let mut psi = [
        matrix_to_map(&a_inv)[0].with_cert(Cert::Total(n)),
        matrix_to_map(&a_inv)[1].with_cert(Cert::Total(n)),
        matrix_to_map(&a_inv)[2].with_cert(Cert::Total(n)),
    ];
    for _ in 0..n {
        let comp = map_compose(&phi_t, &psi)?;
        let err: [Series; 3] = std::array::from_fn(|j| {
            comp[j].sub(&Series::variable(Axis::from_index(j), Cert::Exact))
        });
        if err.iter().all(Series::is_zero) {
            break;
        }
        for j in 0..3 {
            let mut corr = Series::zero(Cert::Total(n));
            for (k, e) in err.iter().enumerate() {
                corr = corr.add(&e.scale(&a_inv[j][k]));
            }
            psi[j] = psi[j].sub(&corr);
        }
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rat;
    use num_bigint::BigInt;

    fn s(c: i64) -> Scalar {
        Scalar::from_int(c)
    }

    /// The order-3 jet (yz(y−z), x(x²−z²), xz(y−z)) added to the identity.
    fn cubic_example(n: u32) -> Germ {
        let dx = Series::poly_int(&[([0, 2, 1], 1), ([0, 1, 2], -1)]);
        let dy = Series::poly_int(&[([3, 0, 0], 1), ([1, 0, 2], -1)]);
        let dz = Series::poly_int(&[([1, 1, 1], 1), ([1, 0, 2], -1)]);
        Germ::from_displacement([dx, dy, dz], n, [0, 0, 0]).unwrap()
    }

    #[test]
    fn identity_roundtrip() {
        let id = Germ::identity(8);
        assert!(id.is_identity());
        assert!(matches!(id.order(), Err(Error::IdentityGerm)));
    }

    #[test]
    fn rejects_linear_perturbation() {
        let dx = Series::poly_int(&[([0, 1, 0], 1)]); // x-component gains +y
        let g = Germ::from_displacement(
            [dx, Series::zero(Cert::Exact), Series::zero(Cert::Exact)],
            6,
            [0, 0, 0],
        );
        assert!(matches!(g, Err(Error::NotTangentToIdentity { .. })));
    }

    #[test]
    fn homogeneous_data_of_cubic_jet() {
        let g = cubic_example(8);
        let hd = g.homogeneous_data().unwrap();
        assert_eq!(hd.order, 3);
        assert_eq!(hd.pure_order, 3);
        assert_eq!(hd.l_exps, [0, 0, 0]);
        assert_eq!(hd.h[0], Series::poly_int(&[([0, 2, 1], 1), ([0, 1, 2], -1)]));
    }

    #[test]
    fn content_extraction() {
        // f − id = x²y·(x, y, z): content x²y, pure bottom (x, y, z) of degree 1
        let d = [
            Series::poly_int(&[([3, 1, 0], 1)]),
            Series::poly_int(&[([2, 2, 0], 1)]),
            Series::poly_int(&[([2, 1, 1], 1)]),
        ];
        let g = Germ::from_displacement(d, 8, [0, 0, 0]).unwrap();
        let hd = g.homogeneous_data().unwrap();
        assert_eq!(hd.l_exps, [2, 1, 0]);
        assert_eq!(hd.order, 4);
        assert_eq!(hd.pure_order, 1);
        assert_eq!(hd.h_l[2], Series::poly_int(&[([0, 0, 1], 1)]));
    }

    #[test]
    fn divisor_divisibility_enforced() {
        let d = [
            Series::poly_int(&[([0, 0, 2], 1)]),
            Series::zero(Cert::Exact),
            Series::zero(Cert::Exact),
        ];
        assert!(Germ::from_displacement(d.clone(), 6, [0, 0, 2]).is_ok());
        assert!(matches!(
            Germ::from_displacement(d, 6, [1, 0, 0]),
            Err(Error::DivisorDoesNotDivide { .. })
        ));
    }

    #[test]
    fn one_dimensional_iteration() {
        // f = id + z²∂-direction: (f∘f)_z = z + 2z² + 2z³ + z⁴
        let d = [
            Series::zero(Cert::Exact),
            Series::zero(Cert::Exact),
            Series::poly_int(&[([0, 0, 2], 1)]),
        ];
        let g = Germ::from_displacement(d, 8, [0, 0, 0]).unwrap();
        let g2 = g.iterate(2).unwrap();
        let want = Series::poly_int(&[
            ([0, 0, 1], 1),
            ([0, 0, 2], 2),
            ([0, 0, 3], 2),
            ([0, 0, 4], 1),
        ]);
        assert_eq!(g2.comp(Axis::Z), &want);
    }

    #[test]
    fn iteration_associates() {
        let g = cubic_example(7);
        let left = g.compose(&g).unwrap().compose(&g).unwrap();
        let right = g.compose(&g.compose(&g).unwrap()).unwrap();
        assert_eq!(left.coords()[0], right.coords()[0]);
        assert_eq!(left, g.iterate(3).unwrap());
    }

    #[test]
    fn conjugation_by_identity_and_scaling() {
        let g = cubic_example(7);
        let id = [
            Series::variable(Axis::X, Cert::Exact),
            Series::variable(Axis::Y, Cert::Exact),
            Series::variable(Axis::Z, Cert::Exact),
        ];
        assert_eq!(g.conjugate(&id).unwrap(), g);
        // conjugation by the involution (−ix, iy, iz) preserves the 3-jet
        let i = Scalar::i();
        let sigma = [
            Series::monomial([1, 0, 0], -&i, Cert::Exact),
            Series::monomial([0, 1, 0], i.clone(), Cert::Exact),
            Series::monomial([0, 0, 1], i.clone(), Cert::Exact),
        ];
        let conj = g.conjugate(&sigma).unwrap();
        assert_eq!(conj, g);
    }

    #[test]
    fn formal_map_inversion() {
        // φ = (x + y², y, z + xz): ψ∘φ = id to degree 8
        let phi = [
            Series::poly_int(&[([1, 0, 0], 1), ([0, 2, 0], 1)]),
            Series::poly_int(&[([0, 1, 0], 1)]),
            Series::poly_int(&[([0, 0, 1], 1), ([1, 0, 1], 1)]),
        ];
        let psi = invert_map(&phi, 8).unwrap();
        let comp = map_compose(&phi, &psi).unwrap();
        for (j, c) in comp.iter().enumerate() {
            let e = c.sub(&Series::variable(Axis::from_index(j), Cert::Exact));
            assert!(e.is_zero(), "component {j} differs: {e}");
        }
    }

    #[test]
    fn matrix_inverse_is_exact() {
        let a = [
            [s(2), s(1), s(0)],
            [s(0), s(1), s(3)],
            [Scalar::i(), s(0), s(1)],
        ];
        let inv = invert_matrix(&a).unwrap();
        // A·A⁻¹ = 1 entrywise
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = Scalar::zero();
                for k in 0..3 {
                    acc += &(&a[r][k] * &inv[k][c]);
                }
                assert_eq!(acc, if r == c { Scalar::one() } else { Scalar::zero() });
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let mut g = cubic_example(9);
        g = Germ::from_displacement(
            [
                g.delta_comp(Axis::X)
                    .add(&Series::monomial([0, 0, 4], Scalar::from_rat(1, 2), Cert::Exact)),
                g.delta_comp(Axis::Y),
                g.delta_comp(Axis::Z)
                    .add(&Series::monomial([0, 0, 4], Scalar::new(
                        Rat::from_integer(BigInt::from(1)),
                        Rat::from_integer(BigInt::from(2)),
                    ), Cert::Exact)),
            ],
            9,
            [0, 0, 0],
        )
        .unwrap();
        let text = g.to_json_string();
        let back = Germ::from_json_str(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn json_rejects_malformed_input() {
        assert!(Germ::from_json_str("{\"N\": 6}").is_err());
        let two_comps = r#"{"N": 6, "divisor": [0,0,0], "coords": [[], []]}"#;
        assert!(Germ::from_json_str(two_comps).is_err());
        let bad_scalar = r#"{"N": 6, "divisor": [0,0,0],
            "coords": [[[[0,0,2],"??"]], [], []]}"#;
        assert!(Germ::from_json_str(bad_scalar).is_err());
    }
}
