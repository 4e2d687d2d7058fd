//! Sparse truncated power series in three variables with soundness
//! certificates.
//!
//! A [`Series`] stores finitely many monomial coefficients together with a
//! [`Cert`] describing *which* coefficients of the underlying formal series
//! the stored data faithfully represents:
//!
//! * [`Cert::Exact`] — the stored terms are the whole object (a polynomial);
//! * [`Cert::Total`]`(g)` — all terms of total degree ≤ g are stored and
//!   correct; nothing is claimed beyond that window;
//! * [`Cert::Jet`]`(a, b)` — all terms with degree ≤ b in the axis `a` are
//!   stored and correct, with *no* truncation in the other two variables.
//!
//! Every operation computes the strongest certificate that is provably
//! sound for its result and prunes stored terms to that window. Operations
//! that would silently lose soundness (translating a totally-truncated
//! series, inverting an exact unit into an infinite object, …) refuse with
//! a typed error instead.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::scalar::{Rat, Scalar};
use crate::{Error, Result};

/// Exponent triple of a monomial x^a y^b z^c.
pub type Mono = [u32; 3];

pub fn mono_total(m: &Mono) -> u32 {
    m[0] + m[1] + m[2]
}

pub fn mono_add(a: &Mono, b: &Mono) -> Mono {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn mono_divides(d: &Mono, m: &Mono) -> bool {
    d[0] <= m[0] && d[1] <= m[1] && d[2] <= m[2]
}

pub fn mono_sub(m: &Mono, d: &Mono) -> Mono {
    debug_assert!(mono_divides(d, m));
    [m[0] - d[0], m[1] - d[1], m[2] - d[2]]
}

pub fn mono_is_zero(m: &Mono) -> bool {
    *m == [0, 0, 0]
}

/// Render x^a y^b z^c (empty string for the unit monomial).
pub fn mono_display(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (name, &e) in ["x", "y", "z"].iter().zip(m.iter()) {
        match e {
            0 => {}
            1 => parts.push((*name).to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// One of the three coordinate axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }

    /// The other two axes, in increasing order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }

    pub fn unit_mono(self) -> Mono {
        let mut m = [0, 0, 0];
        m[self.index()] = 1;
        m
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Soundness certificate of a [`Series`]: which true coefficients the
/// stored terms are guaranteed to represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cert {
    /// The stored terms are the entire object.
    Exact,
    /// Correct and complete on total degree ≤ g.
    Total(u32),
    /// Correct and complete on axis-degree ≤ b, untruncated in the other
    /// two variables.
    Jet(Axis, u32),
}

impl Cert {
    /// Does the certificate's trusted window contain this monomial?
    pub fn allows(&self, m: &Mono) -> bool {
        match *self {
            Cert::Exact => true,
            Cert::Total(g) => mono_total(m) <= g,
            Cert::Jet(a, b) => m[a.index()] <= b,
        }
    }

    /// Trust level in the total-degree sense: every true term of total
    /// degree ≤ this bound lies inside the window.
    pub fn total_trust(&self) -> Option<u32> {
        match *self {
            Cert::Exact => None,
            Cert::Total(g) => Some(g),
            // total degree ≤ b forces axis degree ≤ b
            Cert::Jet(_, b) => Some(b),
        }
    }

    /// Strongest certificate sound for a sum of series with these two.
    pub fn meet(a: Cert, b: Cert) -> Cert {
        match (a, b) {
            (Cert::Exact, c) | (c, Cert::Exact) => c,
            (Cert::Total(g), Cert::Total(h)) => Cert::Total(g.min(h)),
            (Cert::Jet(ax, g), Cert::Jet(bx, h)) => {
                if ax == bx {
                    Cert::Jet(ax, g.min(h))
                } else {
                    Cert::Total(g.min(h))
                }
            }
            (Cert::Total(g), Cert::Jet(_, b)) | (Cert::Jet(_, b), Cert::Total(g)) => {
                Cert::Total(g.min(b))
            }
        }
    }

    /// Is `self` at least as strong as `weaker` (so that re-labelling a
    /// series from `self` to `weaker` is sound)?
    pub fn refines(&self, weaker: &Cert) -> bool {
        match (*self, *weaker) {
            (Cert::Exact, _) => true,
            (Cert::Total(g), Cert::Total(h)) => g >= h,
            // a jet never certifies a *different* axis window fully, and a
            // total truncation never certifies any jet window
            (Cert::Jet(a, g), Cert::Jet(b, h)) => a == b && g >= h,
            (Cert::Jet(_, g), Cert::Total(h)) => g >= h,
            _ => false,
        }
    }
}

impl fmt::Display for Cert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cert::Exact => write!(f, "exact"),
            Cert::Total(g) => write!(f, "total<={g}"),
            Cert::Jet(a, b) => write!(f, "{a}-jet<={b}"),
        }
    }
}

/// A sparse 3-variable series: trusted terms plus their certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    cert: Cert,
    terms: BTreeMap<Mono, Scalar>,
}

impl Series {
    // ------------------------------------------------------------ builders

    pub fn zero(cert: Cert) -> Series {
        Series { cert, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, cert: Cert) -> Series {
        Series::monomial([0, 0, 0], c, cert)
    }

    pub fn monomial(m: Mono, c: Scalar, cert: Cert) -> Series {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && cert.allows(&m) {
            terms.insert(m, c);
        }
        Series { cert, terms }
    }

    pub fn variable(axis: Axis, cert: Cert) -> Series {
        Series::monomial(axis.unit_mono(), Scalar::one(), cert)
    }

    /// Exact polynomial from integer-coefficient terms (testing and
    /// example convenience).
    pub fn poly_int(terms: &[(Mono, i64)]) -> Series {
        Series::from_terms(
            terms.iter().map(|(m, c)| (*m, Scalar::from_int(*c))),
            Cert::Exact,
        )
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Scalar)>, cert: Cert) -> Series {
        let mut s = Series::zero(cert);
        for (m, c) in it {
            s.add_term(m, c);
        }
        s
    }

    // ----------------------------------------------------------- accessors

    pub fn cert(&self) -> Cert {
        self.cert
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True when no terms are stored: the object vanishes on the whole
    /// trusted window.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial inside the trusted window.
    ///
    /// Panics when the monomial lies outside the window: reading an
    /// uncertified coefficient is a programming error, not a zero.
    pub fn coeff(&self, m: &Mono) -> Scalar {
        assert!(
            self.cert.allows(m),
            "coefficient of {:?} requested outside certified window {}",
            m,
            self.cert
        );
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Lower bound for the valuation (minimal total degree) of the true
    /// object; `u32::MAX` encodes +∞ (the exact zero series).
    pub fn val(&self) -> u32 {
        match self.terms.keys().map(mono_total).min() {
            Some(v) => v,
            None => match self.cert {
                Cert::Exact => u32::MAX,
                Cert::Total(g) => g + 1,
                Cert::Jet(_, b) => b + 1,
            },
        }
    }

    /// Lower bound for the valuation in a single axis. Only meaningful on
    /// exact series or jets in that same axis; panics otherwise.
    pub fn axis_val(&self, axis: Axis) -> u32 {
        let hidden_floor = match self.cert {
            Cert::Exact => u32::MAX,
            Cert::Jet(a, b) if a == axis => b + 1,
            other => panic!("axis valuation in {axis} unavailable under certificate {other}"),
        };
        self.terms
            .keys()
            .map(|m| m[axis.index()])
            .min()
            .map_or(hidden_floor, |v| v.min(hidden_floor))
    }

    /// Componentwise minimum of the stored exponents (the largest monomial
    /// dividing every *stored* term); `None` when no terms are stored.
    pub fn stored_content(&self) -> Option<Mono> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, m| {
            [acc[0].min(m[0]), acc[1].min(m[1]), acc[2].min(m[2])]
        }))
    }

    // ------------------------------------------------------- cert plumbing

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() || !self.cert.allows(&m) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Re-label with a weaker (or equal) certificate, pruning to its
    /// window. Panics when the target is not actually weaker.
    #[must_use]
    pub fn with_cert(&self, cert: Cert) -> Series {
        assert!(
            self.cert.refines(&cert),
            "cannot re-certify {} as {}",
            self.cert,
            cert
        );
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| cert.allows(m))
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Series { cert, terms }
    }

    /// Truncate to total degree ≤ g (certificate-meet with `Total(g)`).
    #[must_use]
    pub fn truncate_total(&self, g: u32) -> Series {
        let cert = Cert::meet(self.cert, Cert::Total(g));
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| cert.allows(m))
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Series { cert, terms }
    }

    // ------------------------------------------------------------- algebra

    #[must_use]
    pub fn add(&self, other: &Series) -> Series {
        let cert = Cert::meet(self.cert, other.cert);
        let mut out = Series::zero(cert);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*m, c.clone());
        }
        out
    }

    #[must_use]
    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    #[must_use]
    pub fn neg(&self) -> Series {
        Series {
            cert: self.cert,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    #[must_use]
    pub fn scale(&self, c: &Scalar) -> Series {
        if c.is_zero() {
            return Series::zero(self.cert);
        }
        Series {
            cert: self.cert,
            terms: self.terms.iter().map(|(m, t)| (*m, t * c)).collect(),
        }
    }

    /// Strongest sound certificate for a product.
    fn mul_cert(&self, other: &Series) -> Cert {
        // An identically-zero exact factor forces an exact zero product.
        if (self.cert == Cert::Exact && self.is_zero())
            || (other.cert == Cert::Exact && other.is_zero())
        {
            return Cert::Exact;
        }
        match (self.cert, other.cert) {
            (Cert::Exact, Cert::Exact) => Cert::Exact,
            (Cert::Exact, Cert::Total(g)) => Cert::Total(g + self.val()),
            (Cert::Total(g), Cert::Exact) => Cert::Total(g + other.val()),
            (Cert::Exact, Cert::Jet(a, b)) => Cert::Jet(a, b + self.axis_val(a)),
            (Cert::Jet(a, b), Cert::Exact) => Cert::Jet(a, b + other.axis_val(a)),
            (Cert::Total(g), Cert::Total(h)) => {
                Cert::Total((g + other.val()).min(h + self.val()))
            }
            (Cert::Jet(a, b), Cert::Jet(a2, b2)) if a == a2 => {
                Cert::Jet(a, (b + other.axis_val(a)).min(b2 + self.axis_val(a)))
            }
            // mixed jets / jet-with-total: weaken both to totals
            _ => {
                let g = self.cert.total_trust().expect("non-exact");
                let h = other.cert.total_trust().expect("non-exact");
                Cert::Total((g + other.val()).min(h + self.val()))
            }
        }
    }

    #[must_use]
    pub fn mul(&self, other: &Series) -> Series {
        let cert = self.mul_cert(other);
        self.mul_pruned(other, cert)
    }

    /// Product with all terms outside `cert`'s window dropped on the fly.
    /// The caller is responsible for `cert` being sound for the product.
    #[must_use]
    pub fn mul_pruned(&self, other: &Series, cert: Cert) -> Series {
        let mut out = Series::zero(cert);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = mono_add(m1, m2);
                if cert.allows(&m) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        out
    }

    /// k-th power (binary), pruned to the certificate sound for the
    /// iterated product.
    #[must_use]
    pub fn pow(&self, k: u32) -> Series {
        match k {
            0 => Series::constant(Scalar::one(), self.cert),
            _ => {
                let mut acc = self.clone();
                for _ in 1..k {
                    acc = acc.mul(self);
                }
                acc
            }
        }
    }

    /// Divide by a monomial; every stored term must be divisible.
    pub fn div_monomial(&self, d: &Mono) -> Result<Series> {
        if mono_is_zero(d) {
            return Ok(self.clone());
        }
        let cert = match self.cert {
            Cert::Exact => Cert::Exact,
            Cert::Total(g) => Cert::Total(
                g.checked_sub(mono_total(d))
                    .expect("certificate drained by monomial division"),
            ),
            Cert::Jet(a, b) => Cert::Jet(
                a,
                b.checked_sub(d[a.index()])
                    .expect("certificate drained by monomial division"),
            ),
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if !mono_divides(d, m) {
                return Err(Error::NotDivisible {
                    term: mono_display(m),
                    by: mono_display(d),
                });
            }
            terms.insert(mono_sub(m, d), c.clone());
        }
        Ok(Series { cert, terms })
    }

    #[must_use]
    pub fn mul_monomial(&self, d: &Mono) -> Series {
        let cert = match self.cert {
            Cert::Exact => Cert::Exact,
            Cert::Total(g) => Cert::Total(g + mono_total(d)),
            Cert::Jet(a, b) => Cert::Jet(a, b + d[a.index()]),
        };
        let terms = self.terms.iter().map(|(m, c)| (mono_add(m, d), c.clone())).collect();
        Series { cert, terms }
    }

    /// Partial derivative along an axis.
    #[must_use]
    pub fn derivative(&self, axis: Axis) -> Series {
        let cert = match self.cert {
            Cert::Exact => Cert::Exact,
            Cert::Total(g) => {
                Cert::Total(g.checked_sub(1).expect("certificate drained by derivative"))
            }
            Cert::Jet(a, b) if a == axis => {
                Cert::Jet(a, b.checked_sub(1).expect("certificate drained by derivative"))
            }
            Cert::Jet(a, b) => Cert::Jet(a, b),
        };
        let j = axis.index();
        let mut out = Series::zero(cert);
        for (m, c) in &self.terms {
            if m[j] >= 1 {
                let mut m2 = *m;
                m2[j] -= 1;
                out.add_term(m2, c * &Scalar::from_int(m[j] as i64));
            }
        }
        out
    }

    /// Substitute `x_axis ↦ x_axis + v`. Sound only when the certificate
    /// window is insensitive to this axis: exact series, or jets in a
    /// *different* axis.
    pub fn translate(&self, axis: Axis, v: &Scalar) -> Result<Series> {
        match self.cert {
            Cert::Exact => {}
            Cert::Jet(a, _) if a != axis => {}
            _ => return Err(Error::UnsoundShift { axis: axis.name() }),
        }
        if v.is_zero() {
            return Ok(self.clone());
        }
        let j = axis.index();
        let mut out = Series::zero(self.cert);
        for (m, c) in &self.terms {
            let k = m[j];
            // (x+v)^k expanded; binomials built incrementally
            let mut binom = Rat::from_integer(BigInt::from(1));
            let mut vpow = Scalar::one();
            // iterate i = k, k-1, …, 0 as the surviving exponent
            for i in (0..=k).rev() {
                let mut m2 = *m;
                m2[j] = i;
                let coeff = c * &(&vpow * &Scalar::from_rational(binom.clone()));
                out.add_term(m2, coeff);
                if i > 0 {
                    // C(k, k-i+1) = C(k, k-i) · i / (k-i+1)
                    binom = binom * Rat::new(BigInt::from(i), BigInt::from(k - i + 1));
                    vpow = &vpow * v;
                }
            }
        }
        Ok(out)
    }

    /// Substitute each variable by a monomial in the new variables (the
    /// coefficient-free part of a blow-up chart map).
    ///
    /// Each image must be a nonunit monomial. The result certificate is a
    /// jet in any axis contained in all three images, else a total
    /// truncation at the same trust level.
    #[must_use]
    pub fn subst_monomials(&self, images: &[Mono; 3]) -> Series {
        for img in images {
            assert!(mono_total(img) >= 1, "variable image must be a nonunit monomial");
        }
        let cert = match self.cert.total_trust() {
            None => Cert::Exact,
            Some(t) => {
                let collector = (0..3).find(|&k| images.iter().all(|img| img[k] >= 1));
                match collector {
                    Some(k) => Cert::Jet(Axis::from_index(k), t),
                    None => Cert::Total(t),
                }
            }
        };
        let mut out = Series::zero(cert);
        for (m, c) in &self.terms {
            let mut img = [0u32; 3];
            for (j, e) in m.iter().enumerate() {
                for k in 0..3 {
                    img[k] += images[j][k] * e;
                }
            }
            out.add_term(img, c.clone());
        }
        out
    }

    /// Relabel variables: variable `j` of `self` becomes variable `map[j]`
    /// of the result (`map` must be a permutation).
    #[must_use]
    pub fn relabel(&self, map: &[Axis; 3]) -> Series {
        let mut seen = [false; 3];
        for a in map {
            seen[a.index()] = true;
        }
        assert!(seen.iter().all(|&s| s), "relabel requires a permutation");
        let cert = match self.cert {
            Cert::Jet(a, b) => Cert::Jet(map[a.index()], b),
            c => c,
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = [0u32; 3];
                for j in 0..3 {
                    m2[map[j].index()] = m[j];
                }
                (m2, c.clone())
            })
            .collect();
        Series { cert, terms }
    }

    /// Full composition `self(g_x, g_y, g_z)`; every image must vanish at
    /// the origin. Exact throughout when all inputs are exact, otherwise a
    /// total truncation at the weakest trust level involved.
    pub fn compose(&self, images: &[Series; 3]) -> Result<Series> {
        for img in images {
            if img.val() == 0 {
                return Err(Error::UnitSubstitution);
            }
        }
        let trusts: Vec<Option<u32>> = std::iter::once(self.cert.total_trust())
            .chain(images.iter().map(|g| g.cert.total_trust()))
            .collect();
        let cert = if trusts.iter().all(Option::is_none) {
            Cert::Exact
        } else {
            Cert::Total(trusts.into_iter().flatten().min().expect("some finite trust"))
        };
        // memoized pruned powers of each image
        let mut powers: [Vec<Series>; 3] = [
            vec![Series::constant(Scalar::one(), cert)],
            vec![Series::constant(Scalar::one(), cert)],
            vec![Series::constant(Scalar::one(), cert)],
        ];
        let power = |j: usize, e: u32, powers: &mut [Vec<Series>; 3]| -> Series {
            while powers[j].len() <= e as usize {
                let next = powers[j]
                    .last()
                    .expect("nonempty")
                    .mul_pruned(&images[j], cert);
                powers[j].push(next);
            }
            powers[j][e as usize].clone()
        };
        let mut out = Series::zero(cert);
        for (m, c) in &self.terms {
            // skip terms that cannot contribute inside the window: with
            // val(g_j) ≥ 1 the image of x^a y^b z^c has valuation ≥ a+b+c
            if let Cert::Total(g) = cert {
                if mono_total(m) > g {
                    continue;
                }
            }
            let mut prod = Series::constant(c.clone(), cert);
            for j in 0..3 {
                if m[j] > 0 {
                    prod = prod.mul_pruned(&power(j, m[j], &mut powers), cert);
                }
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// Multiplicative inverse of a unit (nonzero constant term), computed
    /// within the certificate window.
    ///
    /// Exact units refuse (the true inverse is an infinite object): weaken
    /// with [`Series::with_cert`] first. Under a jet certificate, every
    /// non-constant term must contain the jet axis, else the inverse is
    /// not finitely representable in that window.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.terms.get(&[0, 0, 0]).cloned().unwrap_or_else(Scalar::zero);
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let steps = match self.cert {
            Cert::Exact => return Err(Error::InverseNeedsTruncation),
            Cert::Total(g) => g,
            Cert::Jet(a, b) => {
                let tail_ok = self
                    .terms
                    .iter()
                    .all(|(m, _)| mono_is_zero(m) || m[a.index()] >= 1);
                if !tail_ok {
                    return Err(Error::InversionValuation);
                }
                b
            }
        };
        let cert = self.cert;
        let inv_c0 = c0.inv().expect("nonzero constant");
        // u := self/c0 − 1 has valuation ≥ 1 (axis valuation ≥ 1 for jets)
        let mut u = self.scale(&inv_c0);
        u.add_term([0, 0, 0], -Scalar::one());
        // Horner form of the Neumann series: r ← 1 − u·r
        let one = Series::constant(Scalar::one(), cert);
        let mut r = one.clone();
        for _ in 0..steps {
            r = one.sub(&u.mul_pruned(&r, cert));
        }
        Ok(r.scale(&inv_c0))
    }

    /// Invert an exact unit polynomial as a series truncated to `cert`.
    pub fn invert_unit_to(&self, cert: Cert) -> Result<Series> {
        assert!(self.cert == Cert::Exact, "only exact units take a target certificate");
        self.with_cert(cert).invert_unit()
    }

    // ---------------------------------------------------------- structure

    /// The homogeneous part of total degree d, as an exact polynomial.
    /// Requires d to lie within the trusted window.
    pub fn homogeneous_part(&self, d: u32) -> Series {
        if let Some(t) = self.cert.total_trust() {
            assert!(d <= t, "homogeneous part of degree {d} outside trust {t}");
        }
        Series {
            cert: Cert::Exact,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_total(m) == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Valuation and the lowest homogeneous part; `None` for a window-zero
    /// series.
    pub fn lowest_part(&self) -> Option<(u32, Series)> {
        if self.is_zero() {
            return None;
        }
        let v = self.val();
        Some((v, self.homogeneous_part(v)))
    }

    /// Map every coefficient (pruning any that become zero).
    #[must_use]
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Series {
        let mut out = Series::zero(self.cert);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }
}

/// Graded display: terms ordered by total degree, then lexicographically.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Mono> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            mono_total(a)
                .cmp(&mono_total(b))
                .then_with(|| b.cmp(a)) // within a degree: descending powers of x, then y
        });
        let mut first = true;
        for m in keys {
            let c = &self.terms[m];
            let body = term_display(c, m);
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

fn term_display(c: &Scalar, m: &Mono) -> String {
    let mono = mono_display(m);
    if mono.is_empty() {
        return format!("{c}");
    }
    if c.is_one() {
        return mono;
    }
    if (-c).is_one() {
        return format!("-{mono}");
    }
    let cs = format!("{c}");
    if cs.contains(" + ") || cs.contains(" - ") {
        format!("({cs})*{mono}")
    } else {
        format!("{cs}*{mono}")
    }
}
