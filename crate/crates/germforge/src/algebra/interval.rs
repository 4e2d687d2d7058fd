//! Exact rational interval arithmetic with certified enclosures for π,
//! cos, sin, atan and real n-th roots.
//!
//! Every function returns an interval with exact `BigRational` endpoints
//! that provably contains the true value; tightening is driven by a `bits`
//! parameter (target accuracy ~2^−bits). These enclosures back the
//! adaptive-precision sign decisions for real cyclotomic numbers and the
//! parabolic-manifold eigendirection tests.

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use super::cyclotomic::Cyc;
use super::scalar::Rat;

/// A closed interval [lo, hi] with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Itv {
    lo: Rat,
    hi: Rat,
}

fn pow2_inv(b: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << b)
}

impl Itv {
    pub fn new(lo: Rat, hi: Rat) -> Itv {
        assert!(lo <= hi, "interval endpoints out of order");
        Itv { lo, hi }
    }

    pub fn point(v: Rat) -> Itv {
        Itv { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Itv {
        Itv::point(Rat::zero())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn rad(&self) -> Rat {
        (&self.hi - &self.lo) / Rat::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Largest absolute value attained on the interval.
    pub fn abs_upper(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign certified by the enclosure: `Some(1)`/`Some(-1)` when the whole
    /// interval is on one side of zero, `Some(0)` for the exact point zero,
    /// `None` when the interval straddles zero.
    pub fn sign_strict(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    #[must_use]
    pub fn add(&self, o: &Itv) -> Itv {
        Itv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    #[must_use]
    pub fn sub(&self, o: &Itv) -> Itv {
        Itv { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    #[must_use]
    pub fn neg(&self) -> Itv {
        Itv { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    #[must_use]
    pub fn mul(&self, o: &Itv) -> Itv {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Itv { lo, hi }
    }

    /// Multiply by an exact rational.
    #[must_use]
    pub fn scale(&self, c: &Rat) -> Itv {
        if c.is_negative() {
            Itv { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Itv { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    /// Reciprocal; the interval must not contain zero.
    #[must_use]
    pub fn recip(&self) -> Itv {
        assert!(!self.contains_zero(), "reciprocal of interval containing zero");
        Itv { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    /// Symmetrically enlarge both endpoints by `eps` ≥ 0.
    #[must_use]
    pub fn widen(&self, eps: &Rat) -> Itv {
        debug_assert!(!eps.is_negative());
        Itv { lo: &self.lo - eps, hi: &self.hi + eps }
    }

    /// Replace by an enclosing interval with dyadic endpoints of scale
    /// 2^−g, keeping the numbers involved in long series summations small.
    #[must_use]
    pub fn round_dyadic(&self, g: u32) -> Itv {
        let scale = BigInt::one() << g;
        let lo = (&self.lo * Rat::from_integer(scale.clone())).floor();
        let hi = (&self.hi * Rat::from_integer(scale.clone())).ceil();
        let s = Rat::from_integer(scale);
        Itv { lo: lo / s.clone(), hi: hi / s }
    }
}

fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    f
}

/// atan(1/n) for integer n ≥ 2, by the alternating Leibniz series with the
/// first omitted term bounding the tail.
fn atan_unit_fraction(n: u64, bits: u32) -> Itv {
    let x = Rat::new(BigInt::one(), BigInt::from(n));
    let x2 = &x * &x;
    let tol = pow2_inv(bits + 4);
    let mut sum = Rat::zero();
    let mut pow = x; // x^{2k+1}
    let mut k: u32 = 0;
    loop {
        let term = &pow / Rat::from_integer(BigInt::from(2 * k + 1));
        if term < tol {
            // alternating series: partial sum error bounded by `term`
            let half = Itv::point(sum);
            return half.widen(&term);
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        pow *= &x2;
        k += 1;
    }
}

/// Certified enclosure of π (Machin: π = 16·atan(1/5) − 4·atan(1/239)).
pub fn pi(bits: u32) -> Itv {
    let a = atan_unit_fraction(5, bits + 6).scale(&Rat::from_integer(BigInt::from(16)));
    let b = atan_unit_fraction(239, bits + 6).scale(&Rat::from_integer(BigInt::from(4)));
    a.sub(&b)
}

/// Taylor cosine at an exact rational point |x| ≤ 8, with a rigorous tail
/// bound. Returns an interval of width < 2^−bits around cos(x).
fn cos_point(x: &Rat, bits: u32) -> Itv {
    assert!(x.abs() <= Rat::from_integer(BigInt::from(8)), "cosine argument reduction missing");
    let x2 = x * x;
    let tol = pow2_inv(bits + 2);
    // Find K ≥ 6 with tail bound 2·|x|^{2K}/(2K)! < tol. (For |x| ≤ 8 the
    // term ratio x²/((2k+1)(2k+2)) is ≤ 64/182 < 1/2 from k = 6 on, so the
    // tail is dominated by a geometric series with ratio 1/2.)
    let mut kk: u32 = 6;
    let bound = |k: u32| -> Rat {
        let num = x2.pow(k as i32) * Rat::from_integer(BigInt::from(2));
        num / Rat::from_integer(factorial(2 * k))
    };
    while bound(kk) >= tol {
        kk += 1;
    }
    let mut sum = Rat::zero();
    let mut term = Rat::one(); // x^{2k}/(2k)!
    for k in 0..kk {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = term * &x2 / Rat::from_integer(BigInt::from((2 * k + 1) * (2 * k + 2)));
    }
    Itv::point(sum).widen(&bound(kk))
}

/// Taylor sine at an exact rational point |x| ≤ 8 with a rigorous tail bound.
fn sin_point(x: &Rat, bits: u32) -> Itv {
    assert!(x.abs() <= Rat::from_integer(BigInt::from(8)), "sine argument reduction missing");
    let x2 = x * x;
    let tol = pow2_inv(bits + 2);
    let mut kk: u32 = 6;
    let bound = |k: u32| -> Rat {
        let num = x.abs().pow((2 * k + 1) as i32) * Rat::from_integer(BigInt::from(2));
        num / Rat::from_integer(factorial(2 * k + 1))
    };
    while bound(kk) >= tol {
        kk += 1;
    }
    let mut sum = Rat::zero();
    let mut term = x.clone(); // x^{2k+1}/(2k+1)!
    for k in 0..kk {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = term * &x2 / Rat::from_integer(BigInt::from((2 * k + 2) * (2 * k + 3)));
    }
    Itv::point(sum).widen(&bound(kk))
}

/// cos over an interval with |x| ≤ 8: Taylor at the (dyadically rounded)
/// midpoint, widened by the radius since |cos′| ≤ 1.
pub fn cos_itv(x: &Itv, bits: u32) -> Itv {
    let x = x.round_dyadic(bits + 8);
    let mid = x.mid();
    let rad = x.rad();
    cos_point(&mid, bits).widen(&rad)
}

/// sin over an interval with |x| ≤ 8, same scheme as [`cos_itv`].
pub fn sin_itv(x: &Itv, bits: u32) -> Itv {
    let x = x.round_dyadic(bits + 8);
    let mid = x.mid();
    let rad = x.rad();
    sin_point(&mid, bits).widen(&rad)
}

/// atan at an exact rational point, via argument reduction to |t| ≤ 1/2 and
/// the alternating Maclaurin series.
fn atan_point(x: &Rat, bits: u32) -> Itv {
    if x.is_negative() {
        return atan_point(&-x.clone(), bits).neg();
    }
    let one = Rat::one();
    if *x > one {
        // atan x = π/2 − atan(1/x)
        let half_pi = pi(bits + 4).scale(&Rat::new(BigInt::one(), BigInt::from(2)));
        return half_pi.sub(&atan_point(&x.recip(), bits + 2));
    }
    if *x > Rat::new(BigInt::one(), BigInt::from(2)) {
        // atan x = π/4 + atan((x−1)/(x+1)), the argument lying in (−1/3, 0]
        let quarter_pi = pi(bits + 4).scale(&Rat::new(BigInt::one(), BigInt::from(4)));
        let t = (x - &one) / (x + &one);
        return quarter_pi.add(&atan_point(&t, bits + 2));
    }
    // |x| ≤ 1/2: alternating series, error bounded by first omitted term
    let x2 = x * x;
    let tol = pow2_inv(bits + 2);
    let mut sum = Rat::zero();
    let mut pow = x.clone();
    let mut k: u32 = 0;
    loop {
        let term = &pow / Rat::from_integer(BigInt::from(2 * k + 1));
        if term.abs() < tol {
            return Itv::point(sum).widen(&term.abs());
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        pow *= &x2;
        k += 1;
    }
}

/// atan over an interval (monotone hull of the endpoint enclosures).
pub fn atan_itv(x: &Itv, bits: u32) -> Itv {
    let x = x.round_dyadic(bits + 8);
    let a = atan_point(x.lo(), bits);
    let b = atan_point(x.hi(), bits);
    Itv::new(a.lo().clone(), b.hi().clone())
}

/// Enclosure of the real n-th root of a rational a ≥ 0, by bisection to
/// width < 2^−bits.
pub fn nth_root(a: &Rat, n: u32, bits: u32) -> Itv {
    assert!(n >= 1);
    assert!(!a.is_negative(), "real n-th root of a negative rational");
    if a.is_zero() {
        return Itv::zero();
    }
    let one = Rat::one();
    let mut lo = Rat::zero();
    let mut hi = if *a > one { a.clone() } else { one };
    let tol = pow2_inv(bits);
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
        if mid.pow(n as i32) <= *a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Itv::new(lo, hi)
}

/// A rectangular complex enclosure.
#[derive(Clone, Debug)]
pub struct CItv {
    pub re: Itv,
    pub im: Itv,
}

impl CItv {
    pub fn point(re: Rat, im: Rat) -> CItv {
        CItv { re: Itv::point(re), im: Itv::point(im) }
    }

    pub fn one() -> CItv {
        CItv::point(Rat::one(), Rat::zero())
    }

    #[must_use]
    pub fn mul(&self, o: &CItv) -> CItv {
        CItv {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    #[must_use]
    pub fn add(&self, o: &CItv) -> CItv {
        CItv { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    #[must_use]
    pub fn scale(&self, c: &Rat) -> CItv {
        CItv { re: self.re.scale(c), im: self.im.scale(c) }
    }

    /// Complex enclosure of ρ·e^{iθ} from enclosures of modulus and argument
    /// (|θ| ≤ 8 after any reduction by the caller).
    pub fn from_polar(rho: &Itv, theta: &Itv, bits: u32) -> CItv {
        let c = cos_itv(theta, bits);
        let s = sin_itv(theta, bits);
        CItv { re: rho.mul(&c), im: rho.mul(&s) }
    }
}

/// Numerical enclosure of a cyclotomic number Σ c_j ζ_M^j as a complex
/// rectangle, with ζ_M^j = cos(2πj/M) + i·sin(2πj/M).
pub fn eval_cyc(x: &Cyc, bits: u32) -> CItv {
    let m = x.level();
    let two_pi = pi(bits + 8).scale(&Rat::from_integer(BigInt::from(2)));
    let mut re = Itv::zero();
    let mut im = Itv::zero();
    for (j, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let frac = Rat::new(BigInt::from(j as u32), BigInt::from(m));
        let theta = two_pi.scale(&frac);
        re = re.add(&cos_itv(&theta, bits).scale(c));
        im = im.add(&sin_itv(&theta, bits).scale(c));
    }
    CItv { re, im }
}

/// Enclosure of the real value of a conjugation-fixed cyclotomic number.
pub fn eval_cyc_real(x: &Cyc, bits: u32) -> Itv {
    eval_cyc(x, bits).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Scalar;

    fn approx(v: f64) -> Rat {
        Rat::new(BigInt::from((v * 1e12) as i64), BigInt::from(1_000_000_000_000u64))
    }

    fn contains(itv: &Itv, v: f64) -> bool {
        let r = approx(v);
        // slack for the float approximation itself
        let eps = Rat::new(BigInt::one(), BigInt::from(1_000_000u64));
        *itv.lo() <= &r + &eps && &r - &eps <= *itv.hi()
    }

    #[test]
    fn pi_enclosure() {
        let p = pi(64);
        assert!(contains(&p, std::f64::consts::PI));
        assert!(p.width() < Rat::new(BigInt::one(), BigInt::from(1u64 << 60)));
    }

    #[test]
    fn cosine_values() {
        let p = pi(64);
        assert!(contains(&cos_itv(&Itv::zero(), 64), 1.0));
        assert!(cos_itv(&p, 64).sign_strict() == Some(-1)); // cos π = −1 < 0
        let third = p.scale(&Rat::new(BigInt::one(), BigInt::from(3)));
        assert!(contains(&cos_itv(&third, 64), 0.5));
    }

    #[test]
    fn sine_values() {
        let p = pi(64);
        let half = p.scale(&Rat::new(BigInt::one(), BigInt::from(2)));
        assert!(contains(&sin_itv(&half, 64), 1.0));
        let sixth = p.scale(&Rat::new(BigInt::one(), BigInt::from(6)));
        assert!(contains(&sin_itv(&sixth, 64), 0.5));
    }

    #[test]
    fn arctangent_values() {
        assert!(contains(&atan_itv(&Itv::point(Rat::one()), 64), std::f64::consts::FRAC_PI_4));
        assert!(contains(
            &atan_itv(&Itv::point(Rat::from_integer(BigInt::from(3))), 64),
            1.2490457723982544,
        ));
        assert!(contains(
            &atan_itv(&Itv::point(-Rat::new(BigInt::from(2), BigInt::from(3))), 64),
            -0.5880026035475675,
        ));
    }

    #[test]
    fn roots_by_bisection() {
        let two = Rat::from_integer(BigInt::from(2));
        let r = nth_root(&two, 2, 80);
        assert!(contains(&r, std::f64::consts::SQRT_2));
        let r3 = nth_root(&Rat::from_integer(BigInt::from(27)), 3, 64);
        assert!(contains(&r3, 3.0));
    }

    #[test]
    fn cyclotomic_evaluation() {
        // ζ₃ = −1/2 + i·√3/2
        let z = Cyc::zeta(3);
        let e = eval_cyc(&z, 64);
        assert!(contains(&e.re, -0.5));
        assert!(contains(&e.im, 0.8660254037844386));
        // a Gaussian point evaluates to itself
        let g = Cyc::from_scalar(&Scalar::from_parts(3, 4, -2, 5));
        let eg = eval_cyc(&g, 48);
        assert!(contains(&eg.re, 0.75));
        assert!(contains(&eg.im, -0.4));
    }
}
