//! Exact scalar fields and truncated multivariate power series.
//!
//! [`Scalar`] is the workhorse field ℚ(i); [`Cyc`] extends it by a root of
//! unity when sign tables over cyclotomic fields are needed. [`Series`] is a
//! sparse power series in three variables with a soundness certificate.
//! Certified signs of real algebraic numbers are determined exactly when
//! possible and by adaptive-precision rational intervals otherwise.

mod cyclotomic;
mod interval;
mod scalar;
mod series;
mod sign;
pub(crate) mod uni;

pub use cyclotomic::Cyc;
pub use interval::{atan_itv, cos_itv, eval_cyc, eval_cyc_real, nth_root, pi, sin_itv, CItv, Itv};
pub use scalar::{Rat, Scalar};
pub use series::{
    mono_add, mono_display, mono_divides, mono_is_zero, mono_sub, mono_total, Axis, Cert, Mono,
    Series,
};
pub use sign::{precision_cap, sign_of_real, sign_of_real_at, sign_of_real_scalar};
