//! Threshold-based K-identification over the BSC: parameters, the decoder,
//! exact error oracles, analytic bounds, Monte Carlo estimation, and the
//! capacity / admissible-rate calculators.
//!
//! The decoder accepts iff the channel output lands within Hamming distance
//! ⌊n·delta⌋ of at least one codeword in the target set, where the threshold
//! delta = (1 - beta/2)·eps + beta/4 sits strictly between eps and
//! (1 - beta)·eps + beta/2.

mod bounds;
mod mc;
mod oracles;

pub use bounds::{analytic_bounds, run_zeta_suite, AnalyticBounds};
pub use mc::{mc_estimate, ErrorEstimate, ErrorKind};
pub use oracles::{
    brute_force_type1, brute_force_type2, pair_accept_prob_exact, type2_decomposition_check,
    DecompositionCheck, BRUTE_FORCE_MAX_N,
};

use crate::binmath::{
    binary_entropy, binom_upper_tail, binom_upper_tail_exact, floor_mul, log2_biguint,
    tangent_entropy_gap, BigCount, BinmathError, LogProb, Probability,
};
use crate::hamming::Word;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DkiError {
    #[error("crossover probability must lie strictly inside (0, 1/2)")]
    InvalidEps,
    #[error("beta = 0 degenerates the decoder (threshold collapses onto eps)")]
    DegenerateBeta,
    #[error("beta must satisfy 0 < beta < 1 with floor(n*beta) < n")]
    BetaRange,
    #[error("blocklength must satisfy n >= 2, got {0}")]
    BlocklengthRange(u32),
    #[error("weight fraction A must be positive")]
    WeightFraction,
    #[error("target rate kappa must be nonnegative, got {0}")]
    KappaNegative(f64),
    #[error("target-set size K must be at least 1")]
    KTooSmall,
    #[error("index {index} out of range for codebook of size {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("duplicate index {0} in target set")]
    DuplicateIndex(usize),
    #[error("target set of size {k} cannot be drawn from {m} messages")]
    TargetSetTooLarge { k: usize, m: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(u32, u32),
    #[error("exhaustive oracle supports n <= {BRUTE_FORCE_MAX_N}, got {0}")]
    BruteForceTooLarge(u32),
    #[error("type I requires the sent index inside the target set")]
    SentIndexNotInTargetSet,
    #[error("type II requires the sent index outside the target set")]
    SentIndexInTargetSet,
    #[error("at least one trial is required")]
    TrialsZero,
    #[error(transparent)]
    Binmath(#[from] BinmathError),
}

/// Full experiment parameter bundle. Exactly one of kappa / K is supplied;
/// the other is derived via K = ⌈2^{kappa·n}⌉ or kappa = log2(K)/n.
#[derive(Debug, Clone)]
pub struct DkiParams {
    n: u32,
    eps: Probability,
    a: BigRational,
    beta: BigRational,
    kappa: f64,
    k_size: BigCount,
}

impl DkiParams {
    pub fn with_kappa(
        n: u32,
        eps: Probability,
        a: BigRational,
        beta: BigRational,
        kappa: f64,
    ) -> Result<Self, DkiError> {
        if kappa < 0.0 || kappa.is_nan() {
            return Err(DkiError::KappaNegative(kappa));
        }
        let k_size = ceil_exp2(kappa * n as f64);
        Self::validate(n, &eps, &a, &beta)?;
        Ok(Self { n, eps, a, beta, kappa, k_size })
    }

    pub fn with_k(
        n: u32,
        eps: Probability,
        a: BigRational,
        beta: BigRational,
        k: BigCount,
    ) -> Result<Self, DkiError> {
        if k.is_zero() {
            return Err(DkiError::KTooSmall);
        }
        Self::validate(n, &eps, &a, &beta)?;
        let kappa = log2_biguint(&k) / n as f64;
        Ok(Self { n, eps, a, beta, kappa, k_size: k })
    }

    fn validate(
        n: u32,
        eps: &Probability,
        a: &BigRational,
        beta: &BigRational,
    ) -> Result<(), DkiError> {
        if n < 2 {
            return Err(DkiError::BlocklengthRange(n));
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        if eps.is_zero() || eps.ratio() >= &half {
            return Err(DkiError::InvalidEps);
        }
        if !a.is_positive() {
            return Err(DkiError::WeightFraction);
        }
        if beta.is_zero() || beta.is_negative() {
            return Err(DkiError::DegenerateBeta);
        }
        if beta >= &BigRational::one() || floor_mul(n as u64, beta) >= n as u64 {
            return Err(DkiError::BetaRange);
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eps(&self) -> &Probability {
        &self.eps
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn k_size(&self) -> &BigCount {
        &self.k_size
    }

    /// Decoding threshold fraction (1 - beta/2)·eps + beta/4, exact.
    /// Always strictly between eps and (1 - beta)·eps + beta/2.
    pub fn delta_beta(&self) -> BigRational {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        (BigRational::one() - &half * &self.beta) * self.eps.ratio() + quarter * &self.beta
    }

    /// Integer decoding threshold ⌊n·delta⌋, floored on exact rationals.
    pub fn decoding_threshold(&self) -> u64 {
        floor_mul(self.n as u64, &self.delta_beta())
    }
}

/// ⌈2^t⌉ for t >= 0, carried into big integers so large exponents stay exact
/// once the f64 evaluation of 2^t is fixed.
fn ceil_exp2(t: f64) -> BigCount {
    if t <= 0.0 {
        return BigCount::one();
    }
    let int_part = t.floor();
    let m = (t - int_part).exp2(); // in [1, 2)
    let mant = (m * (1u64 << 52) as f64) as u64; // exact: 52 fractional bits
    let shift = int_part as i64 - 52;
    if shift >= 0 {
        BigCount::from(mant) << shift as usize
    } else {
        let s = (-shift) as u32;
        BigCount::from(mant.div_ceil(1u64 << s))
    }
}

/// A sorted set of message indices (0-based) bound to a codebook size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    indices: Vec<usize>,
}

impl TargetSet {
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self, DkiError> {
        if indices.is_empty() {
            return Err(DkiError::KTooSmall);
        }
        indices.sort_unstable();
        for pair in indices.windows(2) {
            if pair[0] == pair[1] {
                return Err(DkiError::DuplicateIndex(pair[0]));
            }
        }
        if let Some(&max) = indices.last() {
            if max >= m {
                return Err(DkiError::IndexOutOfRange { index: max, m });
            }
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Uniform K-subset of 0..m without replacement.
    pub fn random(m: usize, k: usize, rng: &mut impl Rng) -> Result<Self, DkiError> {
        if k == 0 {
            return Err(DkiError::KTooSmall);
        }
        if k > m {
            return Err(DkiError::TargetSetTooLarge { k, m });
        }
        let indices = rand::seq::index::sample(rng, m, k).into_vec();
        Self::new(indices, m)
    }

    /// Uniform K-subset forced to contain `include`.
    pub fn random_including(
        m: usize,
        k: usize,
        include: usize,
        rng: &mut impl Rng,
    ) -> Result<Self, DkiError> {
        if include >= m {
            return Err(DkiError::IndexOutOfRange { index: include, m });
        }
        if k == 0 {
            return Err(DkiError::KTooSmall);
        }
        if k > m {
            return Err(DkiError::TargetSetTooLarge { k, m });
        }
        let mut indices: Vec<usize> = rand::seq::index::sample(rng, m - 1, k - 1)
            .into_iter()
            .map(|x| if x >= include { x + 1 } else { x })
            .collect();
        indices.push(include);
        Self::new(indices, m)
    }

    /// Uniform K-subset avoiding `exclude`.
    pub fn random_excluding(
        m: usize,
        k: usize,
        exclude: usize,
        rng: &mut impl Rng,
    ) -> Result<Self, DkiError> {
        if exclude >= m {
            return Err(DkiError::IndexOutOfRange { index: exclude, m });
        }
        if k == 0 {
            return Err(DkiError::KTooSmall);
        }
        if k + 1 > m {
            return Err(DkiError::TargetSetTooLarge { k, m });
        }
        let indices: Vec<usize> = rand::seq::index::sample(rng, m - 1, k)
            .into_iter()
            .map(|x| if x >= exclude { x + 1 } else { x })
            .collect();
        Self::new(indices, m)
    }

    /// The K codewords nearest to word `i` (excluding `i`), ties broken by
    /// index; the adversarial choice that stresses the union bound.
    pub fn nearest_to(words: &[Word], i: usize, k: usize) -> Result<Self, DkiError> {
        if i >= words.len() {
            return Err(DkiError::IndexOutOfRange { index: i, m: words.len() });
        }
        if k == 0 {
            return Err(DkiError::KTooSmall);
        }
        if k + 1 > words.len() {
            return Err(DkiError::TargetSetTooLarge { k, m: words.len() });
        }
        let mut by_distance: Vec<(u64, usize)> = words
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(j, w)| (w.distance(&words[i]), j))
            .collect();
        by_distance.sort_unstable();
        Self::new(by_distance[..k].iter().map(|&(_, j)| j).collect(), words.len())
    }
}

/// Decoder: accept iff some target codeword lies within distance thr of y.
/// Short-circuits on the first hit; the outcome is order-independent.
pub fn identify(
    y: &Word,
    words: &[Word],
    ks: &TargetSet,
    thr: u64,
) -> Result<bool, DkiError> {
    for &j in ks.indices() {
        let w = words
            .get(j)
            .ok_or(DkiError::IndexOutOfRange { index: j, m: words.len() })?;
        if w.len() != y.len() {
            return Err(DkiError::LengthMismatch(w.len(), y.len()));
        }
        if y.distance(w) <= thr {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Codeword-independent type-I tail P(d(Y, c) > thr) for a single decoder;
/// an upper bound on the union decoder's miss probability.
pub fn exact_type1(p: &DkiParams) -> LogProb {
    binom_upper_tail(p.n() as u64, p.decoding_threshold() + 1, p.eps())
        .expect("threshold + 1 <= n + 1 by construction")
}

pub fn exact_type1_rational(p: &DkiParams) -> BigRational {
    binom_upper_tail_exact(p.n() as u64, p.decoding_threshold() + 1, p.eps().ratio())
        .expect("threshold + 1 <= n + 1 by construction")
}

/// Admissible target-rate bounds at (eps, beta).
#[derive(Debug, Clone, Copy)]
pub struct KappaRegion {
    /// Gap evaluated at (1 - beta)·eps + beta/2.
    pub theorem: f64,
    /// Gap evaluated at the decoding threshold (1 - beta/2)·eps + beta/4,
    /// the limit the error analysis itself yields.
    pub asymptotic: f64,
}

pub fn kappa_region(eps: &Probability, beta: &Probability) -> Result<KappaRegion, DkiError> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if eps.is_zero() || eps.ratio() >= &half {
        return Err(DkiError::InvalidEps);
    }
    if beta.is_zero() || beta.is_one() {
        return Err(DkiError::BetaRange);
    }
    let b = beta.ratio();
    let theorem_arg = (BigRational::one() - b) * eps.ratio() + &half * b;
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let asym_arg = (BigRational::one() - &half * b) * eps.ratio() + quarter * b;
    let theorem = tangent_entropy_gap(eps, &Probability::new(theorem_arg)?)?;
    let asymptotic = tangent_entropy_gap(eps, &Probability::new(asym_arg)?)?;
    Ok(KappaRegion { theorem, asymptotic })
}

/// Identification capacity as a function of the weight fraction:
/// H(A) below 1/2, and 1 from 1/2 on. Independent of eps and kappa inside
/// the admissible region.
pub fn dki_capacity(a: &BigRational) -> Result<f64, DkiError> {
    if !a.is_positive() {
        return Err(DkiError::WeightFraction);
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if a < &half {
        Ok(binary_entropy(&Probability::new(a.clone())?))
    } else {
        Ok(1.0)
    }
}
