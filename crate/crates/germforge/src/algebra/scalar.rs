//! Gaussian rationals: the base scalar field ℚ(i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational number (re-exported alias used throughout the crate).
pub type Rat = BigRational;

/// An element a + b·i of ℚ(i), stored as two rationals in lowest terms.
///
/// Arithmetic is exact; there is no rounding anywhere. Conjugation
/// (i ↦ −i) is the only field automorphism used, and elements fixed by it
/// are ordinary rationals with a well-defined sign.
///
/// ```
/// use germforge::algebra::Scalar;
/// let z = Scalar::i() + Scalar::from_int(2);
/// assert_eq!((z.clone() * z.conj()).to_string(), "5");
/// ```
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rat,
    im: Rat,
}

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(Rat::zero(), Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(Rat::from_integer(BigInt::from(n)), Rat::zero())
    }

    /// p/q as a scalar. Panics if q = 0.
    pub fn from_rat(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::new(
            Rat::new(BigInt::from(p), BigInt::from(q)),
            Rat::zero(),
        )
    }

    /// a/b + (c/d)i from four integers. Panics if b or d is 0.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(b != 0 && d != 0, "zero denominator");
        Scalar::new(
            Rat::new(BigInt::from(a), BigInt::from(b)),
            Rat::new(BigInt::from(c), BigInt::from(d)),
        )
    }

    pub fn from_rational(r: Rat) -> Self {
        Scalar::new(r, Rat::zero())
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True iff the element is fixed by conjugation, i.e. lies in ℚ.
    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate (the i ↦ −i automorphism).
    #[must_use]
    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// Field norm a² + b² (a non-negative rational, 0 only at 0).
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Scalar::one();
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

    /// Exact square root within ℚ(i), when one exists.
    ///
    /// Solves (u+vi)² = a+bi over ℚ: requires the norm a²+b² to be a
    /// rational square and the derived components to be squares in turn.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let n = self.norm_sq();
        let r = rat_sqrt(&n)?; // r = |self| must be rational
        if self.im.is_zero() {
            // a real: sqrt is real (a > 0) or purely imaginary (a < 0)
            return if self.re.is_positive() {
                rat_sqrt(&self.re).map(Scalar::from_rational)
            } else {
                rat_sqrt(&(-self.re.clone())).map(|v| Scalar::new(Rat::zero(), v))
            };
        }
        // u² = (a + r)/2, v = b/(2u)
        let two = Rat::from_integer(BigInt::from(2));
        let u2 = (&self.re + &r) / &two;
        let u = rat_sqrt(&u2)?;
        if u.is_zero() {
            return None;
        }
        let v = &self.im / &(&two * &u);
        Some(Scalar::new(u, v))
    }

    /// Sign of a conjugation-fixed element; error on genuinely complex input.
    pub fn sign_if_real(&self) -> Result<i8> {
        if !self.im.is_zero() {
            return Err(Error::NonRealSign);
        }
        Ok(rat_sign(&self.re))
    }
}

/// Sign of a rational as −1/0/+1.
pub(crate) fn rat_sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub(crate) fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(Rat::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

// Arithmetic on references (the primary implementations) with owned
// forwarding, so callers can mix &Scalar and Scalar freely.

impl<'a, 'b> Add<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a, 'b> Sub<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = (&*self) * rhs;
    }
}

// A deterministic total order used for canonical sorting of reports and
// map keys. It is NOT compatible with the field structure (ℂ has no such
// order); comparisons are lexicographic on (re, im).
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

/// Canonical rendering: "a/b", "c/d*i", "a/b + c/d*i", "a/b - c/d*i";
/// unit imaginary parts collapse to "i". Parses back via [`FromStr`].
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let im_str = |r: &Rat| {
            if r.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", r)
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", im_str(&-self.im.clone()))
            } else {
                write!(f, "{}", im_str(&self.im))
            }
        } else if self.im.is_negative() {
            write!(f, "{} - {}", self.re, im_str(&-self.im.clone()))
        } else {
            write!(f, "{} + {}", self.re, im_str(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts sums of rational and imaginary terms: "0", "-3/2", "i",
    /// "-i", "3*i", "3i", "2 + 3/4*i", "1/2 - i".
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::ScalarParse(s.to_string()));
        }
        let bad = || Error::ScalarParse(s.to_string());
        // Split into signed terms.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !matches!(compact.as_bytes()[idx - 1], b'+' | b'-' | b'/' | b'*') {
                terms.push(std::mem::take(&mut cur));
                cur.push(ch);
            } else {
                cur.push(ch);
            }
        }
        terms.push(cur);
        let mut total = Scalar::zero();
        for t in terms {
            if t.is_empty() {
                return Err(bad());
            }
            let (neg, body) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (imaginary, num) = if let Some(rest) = body.strip_suffix("*i") {
                (true, rest)
            } else if let Some(rest) = body.strip_suffix('i') {
                (true, rest)
            } else {
                (false, body)
            };
            let magnitude: Rat = if imaginary && num.is_empty() {
                Rat::one()
            } else {
                num.parse().map_err(|_| bad())?
            };
            let signed = if neg { -magnitude } else { magnitude };
            if imaginary {
                total.im += signed;
            } else {
                total.re += signed;
            }
        }
        Ok(total)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let z = Scalar::from_parts(3, 7, -2, 5);
        let w = z.inv().unwrap();
        assert!((z * w).is_one());
    }

    #[test]
    fn conjugation_is_an_involution_and_multiplicative() {
        let a = Scalar::from_parts(1, 2, 3, 1);
        let b = Scalar::from_parts(-2, 3, 1, 4);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &b).conj(), a.conj() * b.conj());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_rat(-3, 2).to_string(), "-3/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((-Scalar::i()).to_string(), "-i");
        assert_eq!(Scalar::from_parts(2, 1, -3, 4).to_string(), "2 - 3/4*i");
        assert_eq!(Scalar::from_parts(0, 1, 5, 1).to_string(), "5*i");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-3/2", "i", "-i", "2 - 3/4*i", "5*i", "1/2 + i"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s, "roundtrip of {s}");
        }
        // tolerated variants
        assert_eq!("3i".parse::<Scalar>().unwrap(), Scalar::from_parts(0, 1, 3, 1));
        assert_eq!("+2".parse::<Scalar>().unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn sqrt_exact_cases() {
        // (1+i)² = 2i
        let two_i = Scalar::from_parts(0, 1, 2, 1);
        let r = two_i.sqrt_exact().unwrap();
        assert_eq!(&r * &r, two_i);
        // 9/4 → 3/2
        assert_eq!(
            Scalar::from_rat(9, 4).sqrt_exact().unwrap(),
            Scalar::from_rat(3, 2)
        );
        // -4 → 2i
        let m4 = Scalar::from_int(-4);
        let r = m4.sqrt_exact().unwrap();
        assert_eq!(&r * &r, m4);
        // 2 has no rational square root
        assert!(Scalar::from_int(2).sqrt_exact().is_none());
        // 3+4i = (2+i)²
        let z = Scalar::from_parts(3, 1, 4, 1);
        let r = z.sqrt_exact().unwrap();
        assert_eq!(&r * &r, z);
    }

    #[test]
    fn pow_negative() {
        let z = Scalar::from_parts(0, 1, 1, 2); // i/2
        let p = z.pow(-2).unwrap();
        assert_eq!(p, Scalar::from_int(-4));
    }
}
