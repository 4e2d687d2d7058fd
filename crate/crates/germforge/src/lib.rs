//! Exact computer algebra for tangent-to-the-identity germs of (ℂ³, 0).
//!
//! The crate provides, over exact Gaussian-rational scalars (optionally
//! extended by roots of unity):
//!
//! * truncated multivariate power series with soundness certificates
//!   ([`algebra::Series`]) and exact rational germ representations that
//!   survive recentering ([`germ::RatGerm`]);
//! * formal infinitesimal generators — logarithm and exponential of a germ —
//!   with saturation and linear-part analysis ([`infgen`]);
//! * point and coordinate-line blow-ups with germ lifting and
//!   exceptional-divisor bookkeeping ([`blowup`]);
//! * characteristic/singular directions with exact intersection
//!   multiplicities ([`directions`]);
//! * classification into four singularity families, with blow-up closure
//!   tables ([`classify`]);
//! * formal invariant curves ([`curves`]) and the reduction to the
//!   one-dimensional normal form along them, with per-direction
//!   node/saddle verdicts and parabolic-manifold counts ([`ramis_sibuya`]);
//! * an end-to-end pipeline for a concrete family of order-3 germs,
//!   resolving its singularities and producing the invariant-curve and
//!   parabolic-manifold reports ([`pipeline`]).
//!
//! All arithmetic is exact; numerical interval evaluation appears only inside
//! certified sign determination, guarded by precision doubling and a hard cap.

pub mod algebra;
pub mod blowup;
pub mod classify;
pub mod curves;
pub mod directions;
pub mod germ;
pub mod infgen;
pub mod pipeline;
pub mod ramis_sibuya;

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are deliberately fine-grained: callers (and the CLI exit-code
/// mapping) distinguish parse problems, violated invariants, and honest
/// "cannot decide at this precision/order" outcomes.
#[derive(Debug, Error)]
pub enum Error {
    // --- scalars ---
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("sign of a non-real element requested (conjugate differs)")]
    NonRealSign,
    #[error(
        "sign undecided at {bits} bits; raise GERMFORGE_PRECISION_CAP if the value is truly nonzero"
    )]
    PrecisionExhausted { bits: u32 },
    #[error("cannot parse scalar from {0:?}")]
    ScalarParse(String),

    // --- series ---
    #[error("substitution component has a nonzero constant term (valuation 0)")]
    UnitSubstitution,
    #[error("series is not a unit (vanishes at the origin)")]
    NonUnit,
    #[error("term {term} is not divisible by {by}")]
    NotDivisible { term: String, by: String },
    #[error("recentering a series whose certificate cannot absorb a shift in {axis}")]
    UnsoundShift { axis: &'static str },
    #[error("inverting a polynomial (exact) series requires a target truncation")]
    InverseNeedsTruncation,
    #[error("unit inversion within a jet certificate needs positive valuation in the jet variable")]
    InversionValuation,

    // --- germs ---
    #[error("not tangent to the identity: {reason}")]
    NotTangentToIdentity { reason: String },
    #[error("marked divisor {divisor} does not divide component {comp} (offending term {term})")]
    DivisorDoesNotDivide { divisor: String, comp: &'static str, term: String },
    #[error("germ equals the identity to the certified order")]
    IdentityGerm,
    #[error("coordinate change has a non-invertible linear part")]
    NonInvertibleChange,
    #[error("conjugation does not preserve the marked divisor {divisor} on component {comp} (term {term})")]
    DivisorNotPreserved { divisor: String, comp: &'static str, term: String },

    // --- vector fields ---
    #[error("vector field valuation must be at least 2 for the time-1 flow")]
    FlowValuation,
    #[error("monomial does not divide component {comp} of the vector field")]
    SaturationFails { comp: usize },
    #[error("saturated field is not tangent to the divisor plane {axis}")]
    NotTangentToDivisor { axis: char },

    // --- blow-ups ---
    #[error("direction is not visible in the requested chart (chart coordinate vanishes)")]
    DirectionNotInChart,
    #[error("blow-up center must have coordinates in the scalar field")]
    CenterOutsideField,
    #[error("line is not pointwise fixed by the germ: component {comp} has term {term} outside the line ideal")]
    LineNotFixed { comp: &'static str, term: String },
    #[error("blow-up would exceed the term budget ({terms} terms > {cap}); raise the cap or lower the depth")]
    TermBudget { terms: usize, cap: usize },

    // --- directions/classification ---
    #[error("direction is not characteristic for the germ")]
    NotCharacteristic,
    #[error("certified jet degree {have} is too low for this operation (need {need}); raise the working order")]
    NeedHigherOrder { have: u32, need: u32 },
    #[error("germ does not match any of the four singularity families: {reason}")]
    Unclassifiable { reason: String },
    #[error("blow-up closure table falsified: {report}")]
    ClosureFalsified { report: String },
    #[error("singular locus contains no coordinate line through the origin")]
    NoCore,

    // --- curves ---
    #[error("walker aborted at depth {depth}: {reason}")]
    WalkerAborted { depth: u32, reason: String },
    #[error("no transverse invariant curve (simple half corner)")]
    NoTransverseCurve,
    #[error("resonant half corner (b_y ∈ γℕ* at index {index}); existence undecided")]
    ResonantCurve { index: u32 },
    #[error("spinning-corner data falls outside the existence trichotomy")]
    OutsideTrichotomy,

    // --- normal form reduction ---
    #[error("curve is pointwise fixed to the certified order")]
    CurvePointwiseFixed,
    #[error("germ/curve pair is not in a reducible class: {reason}")]
    NotReducible { reason: String },

    // --- pipeline ---
    #[error("input violates the family shape: {reason}")]
    BadInstance { reason: String },
    #[error("genericity failure: {flags:?}")]
    NotGeneric { flags: Vec<String> },

    // --- io ---
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed germ data: {0}")]
    GermFormat(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
