//! Scalar machinery: entropies, the tangent line to the binary entropy,
//! Hamming-ball volumes with their exponential bounds, binomial tails with
//! their sandwich/tail/CDF bounds, and the random-coding error exponent.
//!
//! Every quantity that feeds an inequality check exists in two forms: an
//! exact one (big integers / big rationals) used as the oracle, and a
//! floating-point log-domain form for large blocklengths.

mod suites;
mod tails;
mod volumes;

pub use suites::{run_tail_suite, run_volume_suite, SuiteOutcome, SuiteRow};
pub use tails::{
    binom_cdf, binom_cdf_bound, binom_cdf_bound_exact, binom_cdf_exact, binom_coefficient,
    binom_pmf_exact, binom_tail_sandwich, binom_tail_sandwich_exact, binom_upper_tail,
    binom_upper_tail_bound, binom_upper_tail_bound_exact, binom_upper_tail_exact,
};
pub use volumes::{ball_volume, ball_volume_lower_bound, ball_volume_upper_bound};

use num::bigint::{BigInt, BigUint};
use num::rational::{BigRational, Ratio};
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact nonnegative count (ball volumes, codebook sizes, target-set sizes).
pub type BigCount = BigUint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BinmathError {
    #[error("probability must lie in [0, 1] and be finite, got {0}")]
    ProbabilityRange(String),
    #[error("alphabet size must satisfy q >= 2, got {0}")]
    AlphabetSize(u32),
    #[error("radius out of range: r = {r}, n = {n}")]
    RadiusRange { r: u64, n: u64 },
    #[error("index out of range: k = {k}, n = {n}")]
    IndexRange { k: u64, n: u64 },
    #[error("eps must lie strictly inside (0, 1)")]
    EpsEndpoint,
    #[error("precondition floor(n*eps) >= 1 fails (n = {n})")]
    FloorTooSmall { n: u64 },
    #[error("precondition floor(n*eps) <= n - 1 fails (n = {n})")]
    FloorTooLarge { n: u64 },
    #[error("precondition floor(n*eps)/n <= 1 - 1/q fails")]
    FloorFractionTooLarge,
    #[error("eps must satisfy eps <= 1/2 here")]
    EpsAboveHalf,
    #[error("k/n must exceed eps for this tail bound (k = {k}, n = {n})")]
    RatioNotAboveEps { k: u64, n: u64 },
    #[error("k/n must be below eps for this CDF bound (k = {k}, n = {n})")]
    RatioNotBelowEps { k: u64, n: u64 },
    #[error("entropy value must lie in [0, 1], got {0}")]
    EntropyRange(f64),
    #[error("rate {rate} exceeds the capacity {capacity} of this channel")]
    RateAboveCapacity { rate: f64, capacity: f64 },
    #[error("rate must be nonnegative, got {0}")]
    RateNegative(f64),
    #[error("eps must lie strictly inside (0, 1/2)")]
    EpsOpenHalf,
}

/// A probability stored as an exact rational in [0, 1].
///
/// Keeping the exact value (floats convert via their dyadic expansion) lets
/// every downstream floor `⌊n·p⌋` and every rational oracle stay exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability {
    ratio: BigRational,
}

impl Probability {
    pub fn new(ratio: BigRational) -> Result<Self, BinmathError> {
        if ratio.is_negative() || ratio > BigRational::one() {
            return Err(BinmathError::ProbabilityRange(ratio.to_string()));
        }
        Ok(Self { ratio })
    }

    /// Exact conversion: the f64 is taken at face value as a dyadic rational.
    pub fn from_f64(x: f64) -> Result<Self, BinmathError> {
        let ratio = BigRational::from_float(x)
            .ok_or_else(|| BinmathError::ProbabilityRange(format!("{x}")))?;
        Self::new(ratio)
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self, BinmathError> {
        if den == 0 {
            return Err(BinmathError::ProbabilityRange(format!("{num}/0")));
        }
        Self::new(Ratio::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self { ratio: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self { ratio: BigRational::one() }
    }

    pub fn ratio(&self) -> &BigRational {
        &self.ratio
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.ratio)
    }

    pub fn is_zero(&self) -> bool {
        self.ratio.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.ratio.is_one()
    }

    /// 1 - p, exact.
    pub fn complement(&self) -> Self {
        Self { ratio: BigRational::one() - &self.ratio }
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.ratio)
    }
}

/// A nonnegative quantity carried as its base-2 logarithm.
///
/// `NEG_INFINITY` encodes zero. Underflow-free for exponents far beyond the
/// f64 linear range, which is what the `2^{-n[...]}` bounds need.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb {
    log2: f64,
}

impl LogProb {
    pub const ZERO: LogProb = LogProb { log2: f64::NEG_INFINITY };
    pub const ONE: LogProb = LogProb { log2: 0.0 };

    pub fn from_log2(log2: f64) -> Self {
        debug_assert!(!log2.is_nan());
        Self { log2 }
    }

    pub fn from_linear(p: f64) -> Self {
        debug_assert!(p >= 0.0);
        Self { log2: p.log2() }
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        if r.is_zero() {
            Self::ZERO
        } else {
            Self { log2: ratio_log2(r) }
        }
    }

    pub fn log2(self) -> f64 {
        self.log2
    }

    pub fn to_linear(self) -> f64 {
        self.log2.exp2()
    }

    /// Multiply by an exact count (e.g. a target-set size).
    pub fn scale(self, count: &BigCount) -> LogProb {
        if count.is_zero() {
            return LogProb::ZERO;
        }
        self * LogProb::from_log2(log2_biguint(count))
    }
}

/// Probability addition, performed in the log domain.
impl std::ops::Add for LogProb {
    type Output = LogProb;

    fn add(self, other: LogProb) -> LogProb {
        let (hi, lo) = if self.log2 >= other.log2 {
            (self.log2, other.log2)
        } else {
            (other.log2, self.log2)
        };
        if hi == f64::NEG_INFINITY {
            return LogProb::ZERO;
        }
        LogProb { log2: hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2 }
    }
}

/// Probability product: the log values add.
impl std::ops::Mul for LogProb {
    type Output = LogProb;

    fn mul(self, other: LogProb) -> LogProb {
        if self.log2 == f64::NEG_INFINITY || other.log2 == f64::NEG_INFINITY {
            return LogProb::ZERO;
        }
        LogProb { log2: self.log2 + other.log2 }
    }
}

/// Evaluation of one inequality at one parameter point.
///
/// `holds` is decided by the routine that produced the report (exactly, when
/// an exact route exists); the log2 fields are the displayed magnitudes.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub lhs_log2: f64,
    pub rhs_log2: f64,
    pub holds: bool,
    pub params: Vec<(String, String)>,
}

impl BoundReport {
    pub fn new(lhs_log2: f64, rhs_log2: f64, holds: bool) -> Self {
        Self { lhs_log2, rhs_log2, holds, params: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }
}

// ---------------------------------------------------------------------------
// exact helpers shared across the crate
// ---------------------------------------------------------------------------

/// Exact `⌊n·x⌋` for a nonnegative rational x. Never floors through floats.
pub fn floor_mul(n: u64, x: &BigRational) -> u64 {
    debug_assert!(!x.is_negative());
    let scaled = x * BigRational::from_integer(BigInt::from(n));
    scaled.floor().to_integer().to_u64().expect("floor(n*x) exceeds u64")
}

/// log2 of a positive big integer, accurate to a few ulps.
pub fn log2_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("small BigUint converts").log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit top converts");
    top.log2() + shift as f64
}

/// log2 of a positive big rational.
pub fn ratio_log2(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude())
}

/// f64 value of a big rational, robust to numerator/denominator overflowing
/// the f64 range individually. Correctly rounded for operands up to 53 bits.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let (nb, db) = (num.bits(), den.bits());
    if nb <= 53 && db <= 53 {
        let n = num.to_f64().expect("53-bit integer converts");
        let d = den.to_f64().expect("53-bit integer converts");
        return sign * n / d;
    }
    let shift_n = nb.saturating_sub(63);
    let shift_d = db.saturating_sub(63);
    let top_n = (num >> shift_n).to_f64().expect("63-bit top converts");
    let top_d = (den >> shift_d).to_f64().expect("63-bit top converts");
    sign * (top_n / top_d) * (shift_n as f64 - shift_d as f64).exp2()
}

// ---------------------------------------------------------------------------
// entropies and the tangent line
// ---------------------------------------------------------------------------

/// Binary entropy H(p) in bits, with the 0·log 0 = 0 convention.
pub fn binary_entropy(p: &Probability) -> f64 {
    h2(p.to_f64())
}

pub(crate) fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// q-ary entropy H_q(p) = p·log_q(q-1) - p·log_q p - (1-p)·log_q(1-p).
pub fn qary_entropy(p: &Probability, q: u32) -> Result<f64, BinmathError> {
    if q < 2 {
        return Err(BinmathError::AlphabetSize(q));
    }
    let x = p.to_f64();
    let ln_q = (q as f64).ln();
    let mut v = x * ((q - 1) as f64).ln() / ln_q;
    if x > 0.0 && x < 1.0 {
        v += (-x * x.ln() - (1.0 - x) * (1.0 - x).ln()) / ln_q;
    }
    Ok(v)
}

/// Tangent to H at eps, evaluated at p: T_eps(p) = -p·log2(eps) - (1-p)·log2(1-eps).
pub fn tangent_line(eps: &Probability, p: &Probability) -> Result<f64, BinmathError> {
    if eps.is_zero() || eps.is_one() {
        return Err(BinmathError::EpsEndpoint);
    }
    Ok(tangent_f64(eps.to_f64(), p.to_f64()))
}

pub(crate) fn tangent_f64(eps: f64, p: f64) -> f64 {
    -p * eps.log2() - (1.0 - p) * (1.0 - eps).log2()
}

/// T_eps(p) - H(p): zero at p = eps, strictly positive elsewhere.
///
/// This gap is the exponent that drives every tail bound and the admissible
/// target-identification rates.
pub fn tangent_entropy_gap(eps: &Probability, p: &Probability) -> Result<f64, BinmathError> {
    if eps.is_zero() || eps.is_one() {
        return Err(BinmathError::EpsEndpoint);
    }
    Ok(gap_f64(eps.to_f64(), p.to_f64()))
}

pub(crate) fn gap_f64(eps: f64, p: f64) -> f64 {
    tangent_f64(eps, p) - h2(p)
}

/// The unique p in [0, 1/2] with H(p) = h, by bisection to 1e-12 absolute.
pub fn inverse_binary_entropy(h: f64) -> Result<f64, BinmathError> {
    if !(0.0..=1.0).contains(&h) || h.is_nan() {
        return Err(BinmathError::EntropyRange(h));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which branch of the random-coding exponent applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentBranch {
    /// delta within [eps, theta]: the tangent-gap form T_eps(delta) - H(delta).
    TangentGap,
    /// delta above theta = sqrt(eps)/(sqrt(eps)+sqrt(1-eps)): the linear form.
    Linear,
}

#[derive(Debug, Clone, Copy)]
pub struct ErrorExponentPoint {
    pub rate: f64,
    pub delta: f64,
    pub branch: ExponentBranch,
    pub value: f64,
}

/// Random-coding error exponent E_r(R) for the BSC at rate R.
///
/// delta is recovered from R = 1 - H(delta); the two branches split at
/// theta = sqrt(eps)/(sqrt(eps)+sqrt(1-eps)). The linear branch reproduces
/// the closed form as written, which does not join the tangent-gap branch
/// continuously at the critical rate; sweeps that assert smooth shape should
/// therefore stay on the tangent-gap branch.
pub fn error_exponent_point(
    rate: f64,
    eps: &Probability,
) -> Result<ErrorExponentPoint, BinmathError> {
    let e = eps.to_f64();
    if !(e > 0.0 && e < 0.5) {
        return Err(BinmathError::EpsOpenHalf);
    }
    if rate < 0.0 || rate.is_nan() {
        return Err(BinmathError::RateNegative(rate));
    }
    let capacity = 1.0 - h2(e);
    if rate > capacity + 1e-12 {
        return Err(BinmathError::RateAboveCapacity { rate, capacity });
    }
    let delta = inverse_binary_entropy((1.0 - rate).clamp(0.0, 1.0))?;
    let theta = e.sqrt() / (e.sqrt() + (1.0 - e).sqrt());
    if delta <= theta {
        Ok(ErrorExponentPoint {
            rate,
            delta,
            branch: ExponentBranch::TangentGap,
            value: gap_f64(e, delta),
        })
    } else {
        Ok(ErrorExponentPoint {
            rate,
            delta,
            branch: ExponentBranch::Linear,
            value: 1.0 - rate - theta.log2(),
        })
    }
}

pub fn error_exponent(rate: f64, eps: &Probability) -> Result<f64, BinmathError> {
    Ok(error_exponent_point(rate, eps)?.value)
}
