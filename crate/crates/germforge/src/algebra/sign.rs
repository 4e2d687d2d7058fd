//! Certified signs of real field elements.
//!
//! Gaussian-rational signs are exact. For real cyclotomic numbers the sign
//! is decided by exact shortcuts where possible and otherwise by rational
//! interval enclosures at increasing working precision: 32, 64, 128, … bits
//! up to a cap (default 512, overridable via the `GERMFORGE_PRECISION_CAP`
//! environment variable). Because the power-basis representation is
//! canonical, zero is decided syntactically, so the ladder only ever needs
//! to separate a genuinely nonzero value from zero and must terminate; the
//! cap turns a runaway computation into a loud error instead of a wrong
//! answer.

use num_traits::Signed;

use super::cyclotomic::Cyc;
use super::interval::eval_cyc_real;
use super::scalar::Scalar;
use crate::{Error, Result};

/// Default precision ladder cap, in bits.
const DEFAULT_PRECISION_CAP: u32 = 512;

/// The precision cap in bits, from `GERMFORGE_PRECISION_CAP` when set to a
/// positive integer, else 512.
pub fn precision_cap() -> u32 {
    std::env::var("GERMFORGE_PRECISION_CAP")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

/// Exact sign of a real Gaussian rational: −1, 0 or 1.
///
/// Returns [`Error::NonRealSign`] when the imaginary part is nonzero.
pub fn sign_of_real_scalar(s: &Scalar) -> Result<i8> {
    s.sign_if_real()
}

/// One rung of the sign ladder: decide the sign of a real cyclotomic number
/// using enclosures of roughly `bits` bits, or report `None` when the
/// enclosure still straddles zero.
pub fn sign_of_real_at(x: &Cyc, bits: u32) -> Result<Option<i8>> {
    if !x.is_real() {
        return Err(Error::NonRealSign);
    }
    if x.is_zero() {
        return Ok(Some(0));
    }
    if let Some(r) = x.to_rat() {
        return Ok(Some(if r.is_positive() { 1 } else { -1 }));
    }
    if let Some(s) = x.to_scalar() {
        // real by the check above, so the imaginary part is zero
        return Ok(Some(s.sign_if_real()?));
    }
    let enc = eval_cyc_real(x, bits);
    Ok(match enc.sign_strict() {
        Some(0) | None => None, // interval zero is never certified for nonzero input
        s => s,
    })
}

/// Certified sign of a real cyclotomic number, escalating precision until
/// the enclosure separates from zero or the cap is exhausted.
pub fn sign_of_real(x: &Cyc) -> Result<i8> {
    let cap = precision_cap();
    let mut bits = 32u32;
    loop {
        if let Some(s) = sign_of_real_at(x, bits)? {
            return Ok(s);
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits = (bits * 2).min(cap.max(32));
    }
}
