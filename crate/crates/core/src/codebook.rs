//! Greedy minimum-distance codebook construction under a Hamming-weight
//! constraint, the packing lower bound on the codebook size, verification,
//! and a line-oriented persistent format.

use crate::binmath::{ball_volume, floor_mul, log2_biguint, ratio_to_f64, BinmathError};
use crate::channel::Seed;
use crate::hamming::{enumerate_weight_bounded, Word, ENUMERATION_MAX_N};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, Zero};
use std::io::{BufRead, Write};
use thiserror::Error;

/// Largest n for which the exhaustive lexicographic builder runs; it walks
/// the whole constrained space, so this is a hard budget.
pub const EXHAUSTIVE_MAX_N: u32 = 20;

#[derive(Debug, Error)]
pub enum CodebookError {
    #[error("blocklength must satisfy n >= 2, got {0}")]
    BlocklengthRange(u32),
    #[error("weight fraction A must be positive, got {0}")]
    WeightFraction(BigRational),
    #[error("packing parameter beta must satisfy 0 < beta and floor(n*beta) < n")]
    BetaRange,
    #[error("exhaustive construction supports n <= {EXHAUSTIVE_MAX_N}, got {0}")]
    ExhaustiveTooLarge(u32),
    #[error("coverage certificate needs n <= {ENUMERATION_MAX_N}, got {0}")]
    CoverageTooLarge(u32),
    #[error("malformed codebook file: {0}")]
    Format(String),
    #[error("codebook file failed revalidation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Binmath(#[from] BinmathError),
}

/// Construction parameters: blocklength n, weight fraction A (A >= 1 encodes
/// "unconstrained"), and the packing parameter beta fixing the minimum
/// distance ⌊n·beta⌋ + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookParams {
    n: u32,
    a: BigRational,
    beta: BigRational,
}

impl CodebookParams {
    pub fn new(n: u32, a: BigRational, beta: BigRational) -> Result<Self, CodebookError> {
        if n < 2 {
            return Err(CodebookError::BlocklengthRange(n));
        }
        if !a.is_positive() {
            return Err(CodebookError::WeightFraction(a));
        }
        if !beta.is_positive() || beta >= BigRational::one() {
            return Err(CodebookError::BetaRange);
        }
        let params = Self { n, a, beta };
        if params.packing_radius() >= n as u64 {
            return Err(CodebookError::BetaRange);
        }
        Ok(params)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    /// Hard per-codeword weight bound ⌊n·A⌋, absent when A >= 1.
    pub fn weight_cap(&self) -> Option<u64> {
        if self.a < BigRational::one() {
            Some(floor_mul(self.n as u64, &self.a))
        } else {
            None
        }
    }

    /// Radius ⌊n·beta⌋ of the packed balls.
    pub fn packing_radius(&self) -> u64 {
        floor_mul(self.n as u64, &self.beta)
    }

    /// Required pairwise minimum distance ⌊n·beta⌋ + 1.
    pub fn min_distance(&self) -> u64 {
        self.packing_radius() + 1
    }

    /// Candidate sampling bias min(A, 1/2): entropy-maximal once A clears 1/2.
    pub fn sampling_bias(&self) -> f64 {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        if self.a >= half {
            0.5
        } else {
            ratio_to_f64(&self.a)
        }
    }

    /// Radius ⌊n·min(A,1)⌋ of the constrained input space around zero.
    pub fn space_radius(&self) -> u64 {
        let capped = if self.a > BigRational::one() { BigRational::one() } else { self.a.clone() };
        floor_mul(self.n as u64, &capped)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    GreedyRandom { seed: u64, stream: u64, budget: u64 },
    Exhaustive,
}

impl Construction {
    fn label(&self) -> &'static str {
        match self {
            Construction::GreedyRandom { .. } => "greedy-random",
            Construction::Exhaustive => "exhaustive",
        }
    }
}

/// An ordered set of distinct codewords with a recorded minimum-distance
/// certificate. Immutable once built.
#[derive(Debug, Clone)]
pub struct Codebook {
    params: CodebookParams,
    words: Vec<Word>,
    min_distance: u64,
    construction: Construction,
}

impl Codebook {
    pub fn params(&self) -> &CodebookParams {
        &self.params
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    /// Recorded pairwise minimum distance; n+1 by convention when fewer than
    /// two words exist (no pair to measure).
    pub fn min_distance(&self) -> u64 {
        self.min_distance
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }
}

struct GreedyState {
    words: Vec<Word>,
    min_distance: u64,
}

impl GreedyState {
    fn new(n: u32) -> Self {
        Self { words: Vec::new(), min_distance: n as u64 + 1 }
    }

    /// Accept the candidate iff it clears the exclusion radius against every
    /// accepted word. Duplicates fall out automatically (distance 0 <= radius).
    fn try_accept(&mut self, candidate: Word, radius: u64) -> bool {
        let mut closest = u64::MAX;
        for w in &self.words {
            let d = candidate.distance(w);
            if d <= radius {
                return false;
            }
            closest = closest.min(d);
        }
        if closest < self.min_distance {
            self.min_distance = closest;
        }
        self.words.push(candidate);
        true
    }
}

/// Greedy random construction: candidates are sampled i.i.d. Bernoulli
/// per bit, rejected when they break the weight cap or land within the
/// exclusion radius of an accepted word, and the build stops after `budget`
/// consecutive rejections (or at `max_words`, when given).
pub fn gv_greedy_construct_capped(
    params: CodebookParams,
    seed: Seed,
    budget: u64,
    max_words: Option<u64>,
) -> Codebook {
    assert!(budget >= 1, "rejection budget must be positive");
    let mut rng = seed.rng();
    let bias = params.sampling_bias();
    let radius = params.packing_radius();
    let cap = params.weight_cap();
    let mut state = GreedyState::new(params.n());
    let mut consecutive_rejections = 0u64;
    while consecutive_rejections < budget
        && max_words.is_none_or(|m| (state.words.len() as u64) < m)
    {
        let candidate = Word::sample_bernoulli(params.n(), bias, &mut rng)
            .expect("params guarantee a valid length");
        let weight_ok = cap.is_none_or(|c| candidate.weight() <= c);
        if weight_ok && state.try_accept(candidate, radius) {
            consecutive_rejections = 0;
        } else {
            consecutive_rejections += 1;
        }
    }
    Codebook {
        params,
        words: state.words,
        min_distance: state.min_distance,
        construction: Construction::GreedyRandom {
            seed: seed.seed,
            stream: seed.stream,
            budget,
        },
    }
}

pub fn gv_greedy_construct(params: CodebookParams, seed: Seed, budget: u64) -> Codebook {
    gv_greedy_construct_capped(params, seed, budget, None)
}

/// Deterministic greedy sweep over the lexicographic enumeration of the
/// weight-constrained space. Guarantees true exhaustion: on return, every
/// point of the space lies within the packing radius of some codeword.
pub fn exhaustive_construct(params: CodebookParams) -> Result<Codebook, CodebookError> {
    if params.n() > EXHAUSTIVE_MAX_N {
        return Err(CodebookError::ExhaustiveTooLarge(params.n()));
    }
    let radius = params.packing_radius();
    let mut state = GreedyState::new(params.n());
    for candidate in enumerate_weight_bounded(params.n(), params.space_radius())
        .map_err(|e| CodebookError::Format(e.to_string()))?
    {
        state.try_accept(candidate, radius);
    }
    Ok(Codebook {
        params,
        words: state.words,
        min_distance: state.min_distance,
        construction: Construction::Exhaustive,
    })
}

/// Packing lower bound on the codebook size, exact:
/// Vol(B_0(n, ⌊n·min(A,1)⌋)) / Vol(B(n, ⌊n·beta⌋)).
pub fn gv_size_lower_bound_exact(params: &CodebookParams) -> BigRational {
    let n = params.n() as u64;
    let space = ball_volume(n, params.space_radius(), 2).expect("space radius <= n");
    let ball = ball_volume(n, params.packing_radius(), 2).expect("packing radius <= n");
    BigRational::new(BigInt::from(space), BigInt::from(ball))
}

pub fn gv_size_lower_bound(params: &CodebookParams) -> f64 {
    ratio_to_f64(&gv_size_lower_bound_exact(params))
}

/// Empirical rate log2(M)/n of a nonempty codebook.
pub fn empirical_rate(cb: &Codebook) -> f64 {
    assert!(!cb.is_empty(), "rate of an empty codebook");
    log2_biguint(&BigUint::from(cb.len() as u64)) / cb.params().n() as f64
}

/// Independent recheck of every codebook invariant. Violations are report
/// content; an empty report means the codebook is sound.
#[derive(Debug, Default)]
pub struct VerifyReport {
    pub violations: Vec<String>,
    pub recomputed_min_distance: Option<u64>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify(cb: &Codebook) -> VerifyReport {
    let mut report = VerifyReport::default();
    let required = cb.params().min_distance();
    if let Some(cap) = cb.params().weight_cap() {
        for (i, w) in cb.words().iter().enumerate() {
            if w.weight() > cap {
                report
                    .violations
                    .push(format!("word {i} has weight {} above the cap {cap}", w.weight()));
            }
        }
    }
    let mut lengths_ok = true;
    for (i, w) in cb.words().iter().enumerate() {
        if w.len() != cb.params().n() {
            report.violations.push(format!("word {i} has length {} != n", w.len()));
            lengths_ok = false;
        }
    }
    if !lengths_ok {
        // pairwise distances are undefined across lengths
        return report;
    }
    let mut recomputed = cb.params().n() as u64 + 1;
    for i in 0..cb.len() {
        for j in (i + 1)..cb.len() {
            let d = cb.word(i).distance(cb.word(j));
            if d == 0 {
                report.violations.push(format!("words {i} and {j} are identical"));
            } else if d < required {
                report.violations.push(format!(
                    "words {i} and {j} at distance {d} below the required {required}"
                ));
            }
            recomputed = recomputed.min(d);
        }
    }
    report.recomputed_min_distance = Some(recomputed);
    if recomputed != cb.min_distance() {
        report.violations.push(format!(
            "recorded min_distance {} differs from recomputed {recomputed}",
            cb.min_distance()
        ));
    }
    report
}

/// Points of the constrained space not covered by any radius-⌊n·beta⌋ ball
/// around a codeword. Empty output is the exhaustion certificate.
pub fn exhaustion_uncovered(cb: &Codebook) -> Result<Vec<Word>, CodebookError> {
    if cb.params().n() > ENUMERATION_MAX_N {
        return Err(CodebookError::CoverageTooLarge(cb.params().n()));
    }
    let radius = cb.params().packing_radius();
    let mut uncovered = Vec::new();
    for point in enumerate_weight_bounded(cb.params().n(), cb.params().space_radius())
        .map_err(|e| CodebookError::Format(e.to_string()))?
    {
        if !cb.words().iter().any(|w| w.distance(&point) <= radius) {
            uncovered.push(point);
        }
    }
    Ok(uncovered)
}

// ---------------------------------------------------------------------------
// persistent format (versioned, line-oriented)
// ---------------------------------------------------------------------------

impl Codebook {
    /// Serialize: header lines, then one hex word per line in acceptance order.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str("version=1\n");
        out.push_str(&format!("n={}\n", self.params.n()));
        out.push_str(&format!("A={}\n", self.params.a()));
        out.push_str(&format!("beta={}\n", self.params.beta()));
        out.push_str(&format!("construction={}\n", self.construction.label()));
        if let Construction::GreedyRandom { seed, stream, budget } = &self.construction {
            out.push_str(&format!("seed={seed}\n"));
            out.push_str(&format!("stream={stream}\n"));
            out.push_str(&format!("budget={budget}\n"));
        }
        out.push_str(&format!("min_distance={}\n", self.min_distance));
        out.push_str(&format!("M={}\n", self.words.len()));
        for w in &self.words {
            out.push_str(&w.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn save(&self, mut writer: impl Write) -> Result<(), CodebookError> {
        writer.write_all(self.to_file_string().as_bytes())?;
        Ok(())
    }

    /// Parse and revalidate. A loaded codebook is rejected unless every
    /// invariant (count, lengths, weights, distinctness, minimum distance)
    /// checks out against its own header.
    pub fn parse(text: &str) -> Result<Self, CodebookError> {
        let mut lines = text.lines();
        let mut header = std::collections::BTreeMap::new();
        let mut words = Vec::new();
        let mut in_words = false;
        for line in lines.by_ref() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if !in_words {
                // word lines also start with "n=", so the hex marker decides
                if line.contains(":0x") {
                    in_words = true;
                    words.push(
                        Word::from_hex(line).map_err(|e| CodebookError::Format(e.to_string()))?,
                    );
                    continue;
                }
                if let Some((key, value)) = line.split_once('=') {
                    header.insert(key.to_string(), value.to_string());
                    continue;
                }
                return Err(CodebookError::Format(format!("unexpected line {line:?}")));
            }
            words.push(Word::from_hex(line).map_err(|e| CodebookError::Format(e.to_string()))?);
        }
        let get = |key: &str| {
            header
                .get(key)
                .cloned()
                .ok_or_else(|| CodebookError::Format(format!("missing header line {key}=")))
        };
        let version = get("version")?;
        if version != "1" {
            return Err(CodebookError::Format(format!("unsupported version {version}")));
        }
        let n: u32 = get("n")?
            .parse()
            .map_err(|_| CodebookError::Format("bad n".into()))?;
        let a = parse_rational(&get("A")?)
            .ok_or_else(|| CodebookError::Format("bad A".into()))?;
        let beta = parse_rational(&get("beta")?)
            .ok_or_else(|| CodebookError::Format("bad beta".into()))?;
        let params = CodebookParams::new(n, a, beta)?;
        let min_distance: u64 = get("min_distance")?
            .parse()
            .map_err(|_| CodebookError::Format("bad min_distance".into()))?;
        let m: usize = get("M")?
            .parse()
            .map_err(|_| CodebookError::Format("bad M".into()))?;
        let construction = match get("construction")?.as_str() {
            "greedy-random" => Construction::GreedyRandom {
                seed: get("seed")?
                    .parse()
                    .map_err(|_| CodebookError::Format("bad seed".into()))?,
                stream: get("stream")?
                    .parse()
                    .map_err(|_| CodebookError::Format("bad stream".into()))?,
                budget: get("budget")?
                    .parse()
                    .map_err(|_| CodebookError::Format("bad budget".into()))?,
            },
            "exhaustive" => Construction::Exhaustive,
            other => return Err(CodebookError::Format(format!("unknown construction {other}"))),
        };
        if words.len() != m {
            return Err(CodebookError::Invalid(format!(
                "header claims M={m} but {} words follow",
                words.len()
            )));
        }
        let cb = Codebook { params, words, min_distance, construction };
        let report = verify(&cb);
        if !report.is_clean() {
            return Err(CodebookError::Invalid(report.violations.join("; ")));
        }
        Ok(cb)
    }

    pub fn load(mut reader: impl BufRead) -> Result<Self, CodebookError> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::parse(&text)
    }
}

/// Parse `p/q`, an integer, or a plain decimal (exactly, e.g. 0.05 = 1/20).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_part: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac: BigInt = frac_part.parse().ok()?;
        let magnitude = int_part.magnitude() * scale.magnitude() + frac.magnitude();
        let signed = if negative {
            -BigInt::from(magnitude)
        } else {
            BigInt::from(magnitude)
        };
        return Some(BigRational::new(signed, scale));
    }
    let int: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(int))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn params(n: u32, a: BigRational, beta: BigRational) -> CodebookParams {
        CodebookParams::new(n, a, beta).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(CodebookParams::new(1, rat(1, 1), rat(1, 5)).is_err());
        assert!(CodebookParams::new(8, rat(0, 1), rat(1, 5)).is_err());
        assert!(CodebookParams::new(8, rat(1, 1), rat(0, 1)).is_err());
        assert!(CodebookParams::new(8, rat(1, 1), rat(1, 1)).is_err());
        let p = params(12, rat(1, 2), rat(1, 10));
        assert_eq!(p.weight_cap(), Some(6));
        assert_eq!(p.packing_radius(), 1);
        assert_eq!(p.min_distance(), 2);
        let unconstrained = params(12, rat(3, 2), rat(1, 10));
        assert_eq!(unconstrained.weight_cap(), None);
        assert_eq!(unconstrained.space_radius(), 12);
        assert_eq!(unconstrained.sampling_bias(), 0.5);
        assert_eq!(params(10, rat(3, 10), rat(1, 10)).sampling_bias(), 0.3);
    }

    #[test]
    fn greedy_respects_invariants() {
        let p = params(8, rat(1, 1), rat(1, 8));
        let cb = gv_greedy_construct(p, Seed::new(3, 0), 10_000);
        assert!(cb.min_distance() >= 2);
        assert!(verify(&cb).is_clean());

        let p = params(12, rat(1, 2), rat(1, 10));
        let cb = gv_greedy_construct(p, Seed::new(4, 0), 10_000);
        assert!(cb.words().iter().all(|w| w.weight() <= 6));
        assert!(cb.min_distance() >= 2);
        assert!(verify(&cb).is_clean());
    }

    #[test]
    fn greedy_meets_packing_bound_at_exhaustion() {
        let p = params(14, rat(1, 1), rat(1, 5));
        let bound = gv_size_lower_bound(&p);
        assert!((bound - 16384.0 / 106.0).abs() < 1e-9);
        let cb = gv_greedy_construct(p, Seed::new(7, 1), 100_000);
        assert!(cb.len() as f64 >= bound, "M = {} < {bound}", cb.len());
        assert!(cb.len() >= 155);
    }

    #[test]
    fn greedy_is_reproducible() {
        let p = params(16, rat(1, 1), rat(1, 5));
        let a = gv_greedy_construct(p.clone(), Seed::new(99, 5), 2000);
        let b = gv_greedy_construct(p, Seed::new(99, 5), 2000);
        assert_eq!(a.words(), b.words());
    }

    #[test]
    fn greedy_word_cap_stops_early() {
        let p = params(16, rat(1, 1), rat(1, 16));
        let cb = gv_greedy_construct_capped(p, Seed::new(2, 0), 10_000, Some(5));
        assert_eq!(cb.len(), 5);
        assert!(verify(&cb).is_clean());
    }

    #[test]
    fn exhaustive_pinned_examples() {
        // n=4, A=1, beta=0.3: the even-weight code of size 8
        let cb = exhaustive_construct(params(4, rat(1, 1), rat(3, 10))).unwrap();
        let values: Vec<u64> = cb.words().iter().map(|w| w.to_value()).collect();
        assert_eq!(values, vec![0b0000, 0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100, 0b1111]);
        assert_eq!(cb.min_distance(), 2);

        // n=3, A=1/3, beta=0.4: space {000,001,010,100}, min distance 2.
        // Greedy accepts 000 and rejects every weight-1 word (distance 1),
        // leaving the singleton codebook; pinned from the brute-force run.
        let cb = exhaustive_construct(params(3, rat(1, 3), rat(2, 5))).unwrap();
        assert_eq!(cb.len(), 1);
        assert_eq!(cb.word(0).to_value(), 0);
        assert!(exhaustion_uncovered(&cb).unwrap().is_empty());

        // n=2, A=1, beta=0.6: the complement pair
        let cb = exhaustive_construct(params(2, rat(1, 1), rat(3, 5))).unwrap();
        let values: Vec<u64> = cb.words().iter().map(|w| w.to_value()).collect();
        assert_eq!(values, vec![0b00, 0b11]);

        assert!(exhaustive_construct(params(21, rat(1, 1), rat(1, 5))).is_err());
    }

    #[test]
    fn exhaustive_is_exhausted_and_bounded() {
        for (n, a, beta) in [(10u32, rat(1, 1), rat(1, 10)), (12, rat(3, 10), rat(1, 5))] {
            let p = params(n, a, beta);
            let cb = exhaustive_construct(p.clone()).unwrap();
            assert!(verify(&cb).is_clean());
            assert!(exhaustion_uncovered(&cb).unwrap().is_empty());
            let lower = gv_size_lower_bound_exact(&p);
            let m = BigRational::from_integer(BigInt::from(cb.len()));
            assert!(m >= lower, "n={n}");
            let space = ball_volume(n as u64, p.space_radius(), 2).unwrap();
            assert!(BigUint::from(cb.len() as u64) <= space);
        }
    }

    #[test]
    fn rate_monotone_in_beta() {
        let mut prev = f64::INFINITY;
        for beta_num in [1i64, 2, 3, 4] {
            let p = params(12, rat(1, 1), rat(beta_num, 10));
            let cb = exhaustive_construct(p).unwrap();
            let rate = empirical_rate(&cb);
            assert!(rate <= prev + 1e-12, "beta={beta_num}/10");
            prev = rate;
        }
    }

    #[test]
    fn gv_bound_examples() {
        // radius-0 packing: the bound is the whole space
        let p = params(10, rat(2, 1), rat(1, 20));
        assert_eq!(p.packing_radius(), 0);
        assert!((gv_size_lower_bound(&p) - 1024.0).abs() < 1e-9);
        let p = params(10, rat(3, 10), rat(1, 10));
        let exact = gv_size_lower_bound_exact(&p);
        assert_eq!(exact, rat(176, 11));
        assert_eq!(exact.to_integer().to_u64().unwrap(), 16);
    }

    #[test]
    fn empirical_rate_edges() {
        let p = params(10, rat(2, 1), rat(1, 20));
        let cb = exhaustive_construct(p).unwrap();
        assert_eq!(cb.len(), 1024); // radius 0 keeps every word
        assert!((empirical_rate(&cb) - 1.0).abs() < 1e-12);
        let single = exhaustive_construct(params(3, rat(1, 3), rat(2, 5))).unwrap();
        assert_eq!(empirical_rate(&single), 0.0);
    }

    #[test]
    fn verify_flags_violations() {
        let p = params(6, rat(1, 1), rat(1, 6));
        let good = exhaustive_construct(p.clone()).unwrap();
        assert!(verify(&good).is_clean());

        let w = Word::from_value(0b000000, 6).unwrap();
        let dup = Codebook {
            params: p.clone(),
            words: vec![w.clone(), w.clone()],
            min_distance: 0,
            construction: Construction::Exhaustive,
        };
        let report = verify(&dup);
        assert!(report.violations.iter().any(|v| v.contains("identical")));

        let close = Codebook {
            params: p.clone(),
            words: vec![w, Word::from_value(0b000001, 6).unwrap()],
            min_distance: 1,
            construction: Construction::Exhaustive,
        };
        let report = verify(&close);
        assert!(report.violations.iter().any(|v| v.contains("below the required")));

        // recorded min distance must match reality
        let mut lied = good;
        lied.min_distance += 1;
        assert!(!verify(&lied).is_clean());
    }

    #[test]
    fn file_round_trip() {
        let p = params(14, rat(1, 1), rat(1, 5));
        let cb = gv_greedy_construct(p, Seed::new(5, 2), 5000);
        let text = cb.to_file_string();
        let loaded = Codebook::parse(&text).unwrap();
        assert_eq!(loaded.words(), cb.words());
        assert_eq!(loaded.min_distance(), cb.min_distance());
        assert_eq!(loaded.construction(), cb.construction());
        assert_eq!(loaded.params(), cb.params());

        let ex = exhaustive_construct(params(8, rat(1, 2), rat(1, 8))).unwrap();
        let loaded = Codebook::parse(&ex.to_file_string()).unwrap();
        assert_eq!(loaded.words(), ex.words());
    }

    #[test]
    fn loader_rejects_corruption() {
        let p = params(10, rat(1, 1), rat(1, 5));
        let cb = gv_greedy_construct(p, Seed::new(8, 0), 5000);
        let text = cb.to_file_string();

        // overwrite one word with its neighbor: a guaranteed duplicate
        let first_word_line = text.lines().position(|l| l.contains(":0x")).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        lines[first_word_line] = lines[first_word_line + 1].clone();
        let bad = lines.join("\n");
        assert!(Codebook::parse(&bad).is_err());

        // nudge a word onto a near neighbor of another: min distance breaks
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let second = Word::from_hex(&lines[first_word_line + 1]).unwrap();
        let mut bits: Vec<bool> = (0..second.len()).map(|i| second.get(i)).collect();
        bits[0] = !bits[0];
        lines[first_word_line] = Word::from_bits(&bits).unwrap().to_hex();
        let bad = lines.join("\n");
        assert!(Codebook::parse(&bad).is_err());

        // header miscounts M
        let bad = text.replacen(&format!("M={}", cb.len()), &format!("M={}", cb.len() + 1), 1);
        assert!(Codebook::parse(&bad).is_err());

        // unsupported version
        let bad = text.replacen("version=1", "version=9", 1);
        assert!(Codebook::parse(&bad).is_err());

        // truncated header
        assert!(Codebook::parse("version=1\nn=10\n").is_err());
    }

    #[test]
    fn rational_parser() {
        assert_eq!(parse_rational("1/10").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("0.05").unwrap(), rat(1, 20));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("1.5").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("1.").is_none());
    }
}
