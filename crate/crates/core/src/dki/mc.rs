//! Seeded Monte Carlo estimation of the decoder's error probabilities.

use super::{DkiError, DkiParams, TargetSet};
use crate::channel::{transmit, BscParams, Seed};
use crate::hamming::Word;

const Z_95: f64 = 1.959963984540054;

/// Which error probability an estimate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Miss: the sent index was in the target set but the decoder rejected.
    Type1,
    /// False acceptance: the sent index was outside the target set.
    Type2,
}

impl std::fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorKind::Type1 => write!(f, "type1"),
            ErrorKind::Type2 => write!(f, "type2"),
        }
    }
}

/// Trial counts with a point estimate and 95% Wilson interval.
#[derive(Debug, Clone)]
pub struct ErrorEstimate {
    pub kind: ErrorKind,
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: Seed,
}

impl ErrorEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the interval must contain the point estimate even at the 0/1 edges,
    // where center - half cancels to rounding noise
    (((center - half).max(0.0)).min(p), ((center + half).min(1.0)).max(p))
}

/// Estimate one error probability by seeded transmission of words[i].
///
/// Membership of i in the target set selects the measured error type. Trial
/// t draws from stream `s.stream + t`, so the estimate is independent of how
/// trials are sliced across workers and is bit-reproducible for a fixed seed.
pub fn mc_estimate(
    words: &[Word],
    ks: &TargetSet,
    i: usize,
    p: &DkiParams,
    trials: u64,
    s: Seed,
) -> Result<ErrorEstimate, DkiError> {
    if trials == 0 {
        return Err(DkiError::TrialsZero);
    }
    let sent = words
        .get(i)
        .ok_or(DkiError::IndexOutOfRange { index: i, m: words.len() })?;
    let mut targets = Vec::with_capacity(ks.k());
    for &j in ks.indices() {
        let w = words
            .get(j)
            .ok_or(DkiError::IndexOutOfRange { index: j, m: words.len() })?;
        if w.len() != p.n() {
            return Err(DkiError::LengthMismatch(w.len(), p.n()));
        }
        targets.push(w);
    }
    if sent.len() != p.n() {
        return Err(DkiError::LengthMismatch(sent.len(), p.n()));
    }
    let kind = if ks.contains(i) { ErrorKind::Type1 } else { ErrorKind::Type2 };
    let bsc = BscParams::new(p.eps().clone()).map_err(|_| DkiError::InvalidEps)?;
    let thr = p.decoding_threshold();
    let mut hits = 0u64;
    for t in 0..trials {
        let y = transmit(sent, &bsc, s.with_stream_offset(t));
        let accepted = targets.iter().any(|w| y.distance(w) <= thr);
        let hit = match kind {
            ErrorKind::Type1 => !accepted,
            ErrorKind::Type2 => accepted,
        };
        if hit {
            hits += 1;
        }
    }
    let (ci_low, ci_high) = wilson_interval(hits, trials, Z_95);
    Ok(ErrorEstimate {
        kind,
        trials,
        hits,
        p_hat: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        seed: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binmath::{BigCount, Probability};
    use crate::dki::brute_force_type1;
    use num::rational::BigRational;
    use num::BigInt;

    fn params(n: u32, beta: (i64, i64)) -> DkiParams {
        DkiParams::with_k(
            n,
            Probability::from_ratio(1, 10).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(1)),
            BigRational::new(BigInt::from(beta.0), BigInt::from(beta.1)),
            BigCount::from(1u32),
        )
        .unwrap()
    }

    fn words4() -> Vec<Word> {
        [0x000u64, 0xfff, 0x0f0, 0xf0f]
            .iter()
            .map(|&v| Word::from_value(v, 12).unwrap())
            .collect()
    }

    #[test]
    fn wilson_contains_p_hat() {
        for (h, t) in [(0u64, 100u64), (100, 100), (37, 100), (1, 1000)] {
            let (lo, hi) = wilson_interval(h, t, Z_95);
            let p = h as f64 / t as f64;
            assert!(lo <= p && p <= hi);
            assert!((0.0..=1.0).contains(&lo));
            assert!((0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn mc_is_reproducible() {
        let p = params(12, (1, 5));
        let words = words4();
        let ks = TargetSet::new(vec![0], 4).unwrap();
        let s = Seed::new(17, 3);
        let a = mc_estimate(&words, &ks, 0, &p, 2000, s).unwrap();
        let b = mc_estimate(&words, &ks, 0, &p, 2000, s).unwrap();
        assert_eq!(a.hits, b.hits);
        assert_eq!(a.kind, ErrorKind::Type1);
        assert!(a.ci_low <= a.p_hat && a.p_hat <= a.ci_high);
    }

    #[test]
    fn mc_type_selected_by_membership() {
        let p = params(12, (1, 5));
        let words = words4();
        let ks = TargetSet::new(vec![1, 2], 4).unwrap();
        let est = mc_estimate(&words, &ks, 0, &p, 100, Seed::new(1, 0)).unwrap();
        assert_eq!(est.kind, ErrorKind::Type2);
        assert!(mc_estimate(&words, &ks, 0, &p, 0, Seed::new(1, 0)).is_err());
        assert!(mc_estimate(&words, &ks, 9, &p, 10, Seed::new(1, 0)).is_err());
    }

    #[test]
    fn full_coverage_never_misses() {
        // when every word of the cube is enrolled, the decoder accepts any
        // output at distance 0 from itself: type-I hits are impossible
        let p = DkiParams::with_k(
            4,
            Probability::from_ratio(1, 10).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(1)),
            BigRational::new(BigInt::from(1), BigInt::from(5)),
            BigCount::from(1u32),
        )
        .unwrap();
        let words: Vec<Word> = (0u64..16).map(|v| Word::from_value(v, 4).unwrap()).collect();
        let ks = TargetSet::new((0..16).collect(), 16).unwrap();
        let est = mc_estimate(&words, &ks, 0, &p, 5000, Seed::new(2, 0)).unwrap();
        assert_eq!(est.hits, 0);
    }

    #[test]
    fn noiseless_separation_never_false_accepts() {
        let eps = Probability::from_ratio(1, 1 << 20).unwrap();
        let p = DkiParams::with_k(
            12,
            eps,
            BigRational::new(BigInt::from(1), BigInt::from(1)),
            BigRational::new(BigInt::from(1), BigInt::from(5)),
            BigCount::from(1u32),
        )
        .unwrap();
        assert_eq!(p.decoding_threshold(), 0);
        let words = words4();
        let ks = TargetSet::new(vec![1], 4).unwrap();
        let est = mc_estimate(&words, &ks, 0, &p, 10_000, Seed::new(3, 0)).unwrap();
        assert_eq!(est.hits, 0);
    }

    #[test]
    fn mc_calibrates_against_exact_oracle() {
        let p = params(12, (1, 5));
        let words = words4();
        let ks = TargetSet::new(vec![0], 4).unwrap();
        let exact = brute_force_type1(&words, 0, &ks, &p).unwrap();
        let exact_f = crate::binmath::ratio_to_f64(&exact);
        let mut covered = 0;
        for seed in 0..30u64 {
            let est = mc_estimate(&words, &ks, 0, &p, 20_000, Seed::new(seed, 0)).unwrap();
            if est.contains(exact_f) {
                covered += 1;
            }
        }
        assert!(covered >= 26, "coverage {covered}/30");
    }
}
