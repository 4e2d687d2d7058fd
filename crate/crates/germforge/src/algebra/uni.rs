//! Exact univariate and bivariate polynomial arithmetic over the scalar
//! field: dense representation, Euclidean gcd, Gaussian-rational root
//! search, and the primitive pseudo-remainder elimination used to solve
//! two-variable polynomial systems.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::scalar::Scalar;

/// Dense univariate polynomial; index = degree, trimmed, empty = zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Uni {
    c: Vec<Scalar>,
}

impl Uni {
    pub fn new(mut c: Vec<Scalar>) -> Uni {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        Uni { c }
    }

    pub fn zero() -> Uni {
        Uni { c: Vec::new() }
    }

    pub fn one() -> Uni {
        Uni::from_scalar(Scalar::one())
    }

    pub fn from_scalar(s: Scalar) -> Uni {
        Uni::new(vec![s])
    }

    pub fn monomial(k: usize, s: Scalar) -> Uni {
        let mut c = vec![Scalar::zero(); k];
        c.push(s);
        Uni::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn lc(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_else(Scalar::zero)
    }

    /// Order of vanishing at 0, or None for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|s| !s.is_zero())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &Uni) -> Uni {
        let n = self.c.len().max(other.c.len());
        Uni::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Uni) -> Uni {
        let n = self.c.len().max(other.c.len());
        Uni::new((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Uni) -> Uni {
        if self.is_zero() || other.is_zero() {
            return Uni::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Uni::new(c)
    }

    pub fn scale(&self, s: &Scalar) -> Uni {
        Uni::new(self.c.iter().map(|a| a * s).collect())
    }

    /// Drop every coefficient of degree strictly above `deg`.
    pub fn truncate(&self, deg: usize) -> Uni {
        Uni::new(self.c.iter().take(deg + 1).cloned().collect())
    }

    /// Product truncated at degree `deg` (coefficients above it are never
    /// formed).
    pub fn mul_trunc(&self, other: &Uni, deg: usize) -> Uni {
        let mut c = vec![Scalar::zero(); deg + 1];
        for (i, a) in self.c.iter().enumerate().take(deg + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate().take(deg + 1 - i) {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Uni::new(c)
    }

    /// Composition `self(inner(t))` truncated at degree `deg`.  `inner`
    /// must have no constant term, so the composite is a well-defined jet.
    pub fn compose_trunc(&self, inner: &Uni, deg: usize) -> Uni {
        assert!(
            inner.coeff(0).is_zero(),
            "composition requires an inner jet without constant term"
        );
        let mut acc = Uni::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul_trunc(inner, deg).add(&Uni::from_scalar(a.clone()));
        }
        acc.truncate(deg)
    }

    /// Multiply by t^k.
    pub fn shift_up(&self, k: usize) -> Uni {
        if self.is_zero() {
            return Uni::zero();
        }
        let mut c = vec![Scalar::zero(); k];
        c.extend(self.c.iter().cloned());
        Uni::new(c)
    }

    pub fn derivative(&self) -> Uni {
        Uni::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Division with remainder over the scalar field.
    pub fn divrem(&self, d: &Uni) -> (Uni, Uni) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.deg().expect("nonzero");
        let lc_inv = d.lc().inv().expect("leading coefficient nonzero");
        let mut rem = self.c.clone();
        let mut quo = vec![Scalar::zero(); self.c.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = &rem[rem.len() - 1] * &lc_inv;
            if !f.is_zero() {
                for (i, dc) in d.c.iter().enumerate() {
                    let sub = &f * dc;
                    rem[k + i] = &rem[k + i] - &sub;
                }
                quo[k] = f;
            }
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        (Uni::new(quo), Uni::new(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, d: &Uni) -> Uni {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (Euclid over the scalar field).
    pub fn gcd(&self, other: &Uni) -> Uni {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Normalize the leading coefficient to 1 (zero stays zero).
    pub fn monic(&self) -> Uni {
        if self.is_zero() {
            return Uni::zero();
        }
        self.scale(&self.lc().inv().expect("nonzero leading coefficient"))
    }
}

impl std::fmt::Display for Uni {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*t")?,
                _ => write!(f, "({a})*t^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

// ------------------------------------------------------------- root search

/// Gaussian integers dividing re + im·i (all unit multiples included). The
/// search is capped; polynomials with astronomically large trailing
/// coefficients simply return fewer candidates, making the caller's root
/// list possibly incomplete but never wrong.
pub fn gaussian_divisors(re: &BigInt, im: &BigInt) -> Vec<(i64, i64)> {
    let norm = re * re + im * im;
    if norm.is_zero() {
        return Vec::new();
    }
    let cap = norm.to_i64().unwrap_or(i64::MAX).min(1_000_000);
    let bound = (cap as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let n = a * a + b * b;
            if n == 0 {
                continue;
            }
            let nn = BigInt::from(n);
            if !(&norm % &nn).is_zero() {
                continue;
            }
            let num_re = re * a + im * b;
            let num_im = im * a - re * b;
            if (&num_re % &nn).is_zero() && (&num_im % &nn).is_zero() {
                out.push((a, b));
            }
        }
    }
    out
}

/// All roots of the polynomial in the scalar field, with multiplicity
/// (repeated entries), together with the remaining root-free factor.
///
/// Strategy: peel roots at 0, then exhaust Gaussian-rational candidates
/// p/q (p dividing the trailing, q the leading integer-cleared
/// coefficient), deflating on every hit; finish degree ≤ 2 leftovers with
/// the exact quadratic formula.
pub fn scalar_roots(poly: &Uni) -> (Vec<Scalar>, Uni) {
    let mut roots = Vec::new();
    let mut p = poly.clone();
    if p.is_zero() {
        return (roots, p);
    }
    // roots at the origin
    if let Some(v) = p.valuation() {
        for _ in 0..v {
            roots.push(Scalar::zero());
        }
        p = Uni::new(p.c[v..].to_vec());
    }
    loop {
        match p.deg() {
            None | Some(0) => break,
            Some(1) => {
                let r = &-&p.coeff(0) * &p.coeff(1).inv().expect("degree-1 leading");
                roots.push(r);
                p = Uni::from_scalar(p.lc());
                break;
            }
            Some(2) => {
                let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
                let disc = &(&b * &b) - &(&Scalar::from_int(4) * &(&a * &c));
                if let Some(s) = disc.sqrt_exact() {
                    let half = (&Scalar::from_int(2) * &a).inv().expect("nonzero");
                    roots.push(&(&-&b + &s) * &half);
                    roots.push(&(&-&b - &s) * &half);
                    p = Uni::from_scalar(p.lc());
                }
                break;
            }
            Some(_) => match find_one_root(&p) {
                Some(r) => {
                    let lin = Uni::new(vec![-&r, Scalar::one()]);
                    p = p.div_exact(&lin);
                    roots.push(r);
                }
                None => break,
            },
        }
    }
    (roots, p)
}

fn find_one_root(p: &Uni) -> Option<Scalar> {
    // clear denominators
    let mut den = BigInt::one();
    for s in p.coeffs() {
        den = num_integer::lcm(den, s.re().denom().clone());
        den = num_integer::lcm(den, s.im().denom().clone());
    }
    let cleared: Vec<(BigInt, BigInt)> = p
        .coeffs()
        .iter()
        .map(|s| {
            let r = s.re() * num_rational::BigRational::from(den.clone());
            let i = s.im() * num_rational::BigRational::from(den.clone());
            (r.to_integer(), i.to_integer())
        })
        .collect();
    let trailing = cleared.first()?;
    let leading = cleared.last()?;
    for (p_re, p_im) in gaussian_divisors(&trailing.0, &trailing.1) {
        for (q_re, q_im) in gaussian_divisors(&leading.0, &leading.1) {
            let q = Scalar::from_parts(q_re, 1, q_im, 1);
            let cand = &Scalar::from_parts(p_re, 1, p_im, 1) * &q.inv().ok()?;
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

// ----------------------------------------------------------- two variables

/// Bivariate polynomial over the scalar field: coefficients in the first
/// variable u, graded by powers of the second variable w.
#[derive(Clone, Debug, PartialEq)]
pub struct Biv {
    w: Vec<Uni>,
}

impl Biv {
    pub fn new(mut w: Vec<Uni>) -> Biv {
        while w.last().is_some_and(Uni::is_zero) {
            w.pop();
        }
        Biv { w }
    }

    pub fn zero() -> Biv {
        Biv { w: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_empty()
    }

    pub fn deg_w(&self) -> Option<usize> {
        self.w.len().checked_sub(1)
    }

    pub fn coeff_w(&self, k: usize) -> Uni {
        self.w.get(k).cloned().unwrap_or_else(Uni::zero)
    }

    pub fn lc_w(&self) -> Uni {
        self.w.last().cloned().unwrap_or_else(Uni::zero)
    }

    /// Content: gcd of the w-coefficients, a polynomial in u alone.
    pub fn content_u(&self) -> Uni {
        let mut g = Uni::zero();
        for c in &self.w {
            g = if g.is_zero() { c.monic() } else { g.gcd(c) };
        }
        g
    }

    pub fn primitive_part(&self) -> Biv {
        if self.is_zero() {
            return Biv::zero();
        }
        let content = self.content_u();
        Biv::new(self.w.iter().map(|c| c.div_exact(&content)).collect())
    }

    pub fn mul_uni(&self, f: &Uni) -> Biv {
        Biv::new(self.w.iter().map(|c| c.mul(f)).collect())
    }

    pub fn sub(&self, other: &Biv) -> Biv {
        let n = self.w.len().max(other.w.len());
        Biv::new((0..n).map(|k| self.coeff_w(k).sub(&other.coeff_w(k))).collect())
    }

    pub fn shift_w(&self, k: usize) -> Biv {
        if self.is_zero() {
            return Biv::zero();
        }
        let mut w = vec![Uni::zero(); k];
        w.extend(self.w.iter().cloned());
        Biv::new(w)
    }

    /// Specialize u ↦ value, leaving a univariate polynomial in w.
    pub fn eval_u(&self, value: &Scalar) -> Uni {
        Uni::new(self.w.iter().map(|c| c.eval(value)).collect())
    }

    /// Pseudo-remainder of self by d with respect to w: lc(d)^k·self mod d
    /// stays polynomial in u.
    pub fn pseudo_rem(&self, d: &Biv) -> Biv {
        let dd = d.deg_w().expect("nonzero divisor");
        let lc = d.lc_w();
        let mut r = self.clone();
        let mut guard = self.w.len() + 2;
        while let Some(rd) = r.deg_w() {
            if rd < dd {
                break;
            }
            // r ← lc·r − lr·w^{rd−dd}·d
            let lr = r.lc_w();
            r = r.mul_uni(&lc).sub(&d.mul_uni(&lr).shift_w(rd - dd));
            debug_assert!(r.deg_w().map_or(true, |nd| nd < rd), "degree must drop");
            guard -= 1;
            assert!(guard > 0, "pseudo-division failed to terminate");
        }
        r
    }

    /// Exact division by a factor (panics if not a factor).
    pub fn div_exact(&self, d: &Biv) -> Biv {
        let dd = d.deg_w().expect("nonzero divisor");
        let mut r = self.clone();
        let mut q = vec![Uni::zero(); self.w.len().saturating_sub(dd)];
        while let Some(rd) = r.deg_w() {
            if rd < dd {
                break;
            }
            let f = r.lc_w().div_exact(&d.lc_w());
            q[rd - dd] = f.clone();
            r = r.sub(&d.mul_uni(&f).shift_w(rd - dd));
        }
        assert!(r.is_zero(), "inexact bivariate division");
        Biv::new(q)
    }

    /// Primitive-PRS gcd in (scalar field)[u][w], up to a unit in u.
    pub fn gcd_w(&self, other: &Biv) -> Biv {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.is_zero() {
            return b;
        }
        loop {
            if b.is_zero() {
                return a;
            }
            if b.deg_w() == Some(0) {
                // w-coprime: the gcd is a content polynomial, already split off
                return Biv::new(vec![Uni::one()]);
            }
            if a.deg_w() < b.deg_w() {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
    }

    /// The leading coefficients encountered along the pseudo-remainder
    /// sequence plus the final w-free eliminant: every common root of the
    /// pair has its u-coordinate among the roots of these polynomials.
    pub fn elimination_candidates(&self, other: &Biv) -> Vec<Uni> {
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut out = Vec::new();
        loop {
            if b.is_zero() {
                // the pair shares a factor (or one input was zero); any
                // leftover w-free part still pins candidate u-values
                if a.deg_w() == Some(0) {
                    out.push(a.coeff_w(0));
                } else if !a.is_zero() {
                    out.push(a.content_u());
                }
                break;
            }
            if a.deg_w() < b.deg_w() {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            if b.deg_w() == Some(0) {
                out.push(b.coeff_w(0));
                break;
            }
            out.push(b.lc_w());
            let r = a.pseudo_rem(&b);
            a = b;
            b = r;
        }
        out.retain(|p| p.deg().is_some_and(|d| d >= 1));
        out
    }
}
