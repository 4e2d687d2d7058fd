//! Cyclotomic extensions ℚ(ζ_M) of the scalar field.
//!
//! Elements are stored in the power basis ζ^0, …, ζ^{φ(M)−1} modulo the
//! cyclotomic polynomial Φ_M, with M always a multiple of 4 so that
//! i = ζ_M^{M/4} is available and ℚ(i) embeds. Requesting a root of unity of
//! order m yields the level M = lcm(4, m). Mixed-level arithmetic lifts both
//! operands to the least common level.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;

use num_traits::{One, Signed, Zero};

use super::scalar::{Rat, Scalar};
use crate::{Error, Result};

/// An element of the cyclotomic field ℚ(ζ_M), 4 | M.
#[derive(Clone, Debug)]
pub struct Cyc {
    level: u32,
    /// Coordinates in the power basis; length φ(M).
    coords: Vec<Rat>,
}

/// Euler's totient.
fn phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Φ_m as a monic rational-coefficient polynomial (little-endian).
fn cyclotomic_poly(m: u32, memo: &mut HashMap<u32, Vec<Rat>>) -> Vec<Rat> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let poly = if m == 1 {
        vec![-Rat::one(), Rat::one()] // x - 1
    } else {
        // (x^m - 1) / prod of lower cyclotomics
        let mut num = vec![Rat::zero(); m as usize + 1];
        num[0] = -Rat::one();
        num[m as usize] = Rat::one();
        let mut den = vec![Rat::one()];
        for d in 1..m {
            if m % d == 0 {
                den = poly_mul(&den, &cyclotomic_poly(d, memo));
            }
        }
        let (q, r) = poly_divrem(&num, &den);
        debug_assert!(r.iter().all(Rat::is_zero), "cyclotomic division not exact");
        q
    };
    memo.insert(m, poly.clone());
    poly
}

fn modulus(m: u32) -> Vec<Rat> {
    let mut memo = HashMap::new();
    cyclotomic_poly(m, &mut memo)
}

// --- dense univariate polynomial helpers over ℚ (little-endian vectors) ---

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    poly_trim(&mut out);
    out
}

/// Quotient and remainder of a by b (b nonzero).
fn poly_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r: Vec<Rat> = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = &r[dr] / &lead;
        q[dr - db] = c.clone();
        for k in 0..=db {
            let t = &b[k] * &c;
            r[dr - db + k] -= t;
        }
        poly_trim(&mut r);
    }
    (q, r)
}

/// Extended gcd: returns (g, u, v) with u·a + v·b = g, g monic (or zero).
fn poly_egcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut r0: Vec<Rat> = a.to_vec();
    let mut r1: Vec<Rat> = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rat::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rat::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let next_s = poly_sub(&s0, &poly_mul(&q, &s1));
        let next_t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, next_s);
        t0 = std::mem::replace(&mut t1, next_t);
    }
    if let Some(lead) = r0.last().cloned() {
        if !lead.is_one() {
            for c in r0.iter_mut().chain(s0.iter_mut()).chain(t0.iter_mut()) {
                *c = &*c / &lead;
            }
        }
    }
    (r0, s0, t0)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rat::zero());
    }
    for (o, c) in out.iter_mut().zip(b.iter()) {
        *o -= c;
    }
    poly_trim(&mut out);
    out
}

impl Cyc {
    fn reduce_at(level: u32, raw: Vec<Rat>) -> Cyc {
        let md = modulus(level);
        let (_, mut r) = poly_divrem(&raw, &md);
        let dim = phi(level) as usize;
        r.resize(dim, Rat::zero());
        Cyc { level, coords: r }
    }

    /// Zero at the base level.
    pub fn zero() -> Cyc {
        Cyc { level: 4, coords: vec![Rat::zero(); 2] }
    }

    pub fn one() -> Cyc {
        Cyc::from_scalar(&Scalar::one())
    }

    /// Embed a Gaussian rational at level 4 (basis {1, ζ₄ = i}).
    pub fn from_scalar(s: &Scalar) -> Cyc {
        Cyc { level: 4, coords: vec![s.re().clone(), s.im().clone()] }
    }

    pub fn from_rat(r: Rat) -> Cyc {
        Cyc { level: 4, coords: vec![r, Rat::zero()] }
    }

    /// The primitive m-th root of unity e^{2πi/m}, at level lcm(4, m).
    pub fn zeta(m: u32) -> Cyc {
        assert!(m >= 1);
        let level = lcm_u32(4, m);
        let e = (level / m) as usize;
        let mut raw = vec![Rat::zero(); e + 1];
        raw[e] = Rat::one();
        Cyc::reduce_at(level, raw)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Power-basis coordinates (length φ(level)).
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    /// Re-express at a higher level (new_level must be a multiple).
    pub fn lift(&self, new_level: u32) -> Cyc {
        assert!(new_level % self.level == 0, "lift only to a multiple level");
        if new_level == self.level {
            return self.clone();
        }
        let stride = (new_level / self.level) as usize;
        let mut raw = vec![Rat::zero(); (self.coords.len() - 1) * stride + 1];
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                raw[j * stride] = c.clone();
            }
        }
        Cyc::reduce_at(new_level, raw)
    }

    fn common(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        let l = lcm_u32(a.level, b.level);
        (a.lift(l), b.lift(l))
    }

    /// Galois conjugation ζ ↦ ζ⁻¹ (extends i ↦ −i).
    #[must_use]
    pub fn conj(&self) -> Cyc {
        let m = self.level as usize;
        let mut raw = vec![Rat::zero(); m];
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                let idx = if j == 0 { 0 } else { m - j };
                raw[idx] = &raw[idx] + c;
            }
        }
        Cyc::reduce_at(self.level, raw)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// The element as a Gaussian rational, when it lies in ℚ(i).
    pub fn to_scalar(&self) -> Option<Scalar> {
        let i_vec = Cyc::from_scalar(&Scalar::i()).lift(self.level);
        // solve coords = a·e0 + b·i_vec over ℚ
        let mut b = Rat::zero();
        for (j, w) in i_vec.coords.iter().enumerate() {
            if j != 0 && !w.is_zero() {
                b = &self.coords[j] / w;
                break;
            }
        }
        let mut rem = self.coords.clone();
        for (r, w) in rem.iter_mut().zip(i_vec.coords.iter()) {
            *r -= &b * w;
        }
        let a = rem[0].clone();
        if rem.iter().skip(1).all(Rat::is_zero) {
            Some(Scalar::new(a, b))
        } else {
            None
        }
    }

    /// Rational value, when the element lies in ℚ.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.coords.iter().skip(1).all(Rat::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let md = modulus(self.level);
        let mut me = self.coords.clone();
        poly_trim(&mut me);
        let (g, u, _) = poly_egcd(&me, &md);
        debug_assert_eq!(g.len(), 1, "cyclotomic modulus must be coprime to nonzero elements");
        let ginv = g[0].recip();
        let scaled: Vec<Rat> = u.iter().map(|c| c * &ginv).collect();
        Ok(Cyc::reduce_at(self.level, scaled))
    }

    pub fn pow(&self, e: i64) -> Result<Cyc> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Cyc::one();
        let mut base = self.clone();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Real part (x + x̄)/2, itself a (conjugation-fixed) field element.
    #[must_use]
    pub fn real_part(&self) -> Cyc {
        let half = Cyc::from_rat(Rat::new(BigInt::one(), BigInt::from(2)));
        &(self + &self.conj()) * &half
    }

    /// Imaginary part (x − x̄)/(2i), a conjugation-fixed field element.
    #[must_use]
    pub fn imag_part(&self) -> Cyc {
        let minus_half_i = Cyc::from_scalar(&Scalar::new(
            Rat::zero(),
            -Rat::new(BigInt::one(), BigInt::from(2)),
        ));
        &(self - &self.conj()) * &minus_half_i
    }
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    (a as u64).lcm(&(b as u64)) as u32
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyc::common(self, other);
        a.coords == b.coords
    }
}

impl Eq for Cyc {}

impl<'a, 'b> Add<&'b Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &'b Cyc) -> Cyc {
        let (mut a, b) = Cyc::common(self, rhs);
        for (x, y) in a.coords.iter_mut().zip(b.coords.iter()) {
            *x += y;
        }
        a
    }
}

impl<'a, 'b> Sub<&'b Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &'b Cyc) -> Cyc {
        let (mut a, b) = Cyc::common(self, rhs);
        for (x, y) in a.coords.iter_mut().zip(b.coords.iter()) {
            *x -= y;
        }
        a
    }
}

impl<'a, 'b> Mul<&'b Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &'b Cyc) -> Cyc {
        let (a, b) = Cyc::common(self, rhs);
        let raw = poly_mul(&a.coords, &b.coords);
        Cyc::reduce_at(a.level, raw)
    }
}

impl<'a, 'b> Div<&'b Cyc> for &'a Cyc {
    type Output = Cyc;
    fn div(self, rhs: &'b Cyc) -> Cyc {
        self * &rhs.inv().expect("division by zero cyclotomic element")
    }
}

impl<'a> Neg for &'a Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { level: self.level, coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned_cyc {
    ($trait:ident, $method:ident) => {
        impl $trait for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: Cyc) -> Cyc {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Cyc> for Cyc {
            type Output = Cyc;
            fn $method(self, rhs: &'a Cyc) -> Cyc {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_cyc!(Add, add);
forward_owned_cyc!(Sub, sub);
forward_owned_cyc!(Mul, mul);
forward_owned_cyc!(Div, div);

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

/// Gaussian elements render as scalars; the rest as polynomials in ζ_M,
/// e.g. "1/2 - zeta_12^2".
impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.to_scalar() {
            return write!(f, "{}", s);
        }
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let base = match j {
                0 => String::new(),
                1 => format!("zeta_{}", self.level),
                _ => format!("zeta_{}^{}", self.level, j),
            };
            if j == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", base)?;
            } else {
                write!(f, "{}*{}", mag, base)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
