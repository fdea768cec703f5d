//! Exact error-probability oracles: full-output-space enumeration at small n
//! and the p1/p2 split of the joint decoding event at any n.

use super::{DkiError, DkiParams, TargetSet};
use crate::binmath::{binom_cdf_exact, binom_coefficient, LogProb};
use crate::hamming::Word;
use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Zero};

/// Hard ceiling for the 2^n output-space enumerations.
pub const BRUTE_FORCE_MAX_N: u32 = 14;

fn check_words(words: &[Word], p: &DkiParams) -> Result<(), DkiError> {
    for w in words {
        if w.len() != p.n() {
            return Err(DkiError::LengthMismatch(w.len(), p.n()));
        }
    }
    if p.n() > BRUTE_FORCE_MAX_N {
        return Err(DkiError::BruteForceTooLarge(p.n()));
    }
    Ok(())
}

/// Counts of decoder-accepted outputs, bucketed by distance from words[i].
fn accepted_distance_counts(
    words: &[Word],
    i: usize,
    ks: &TargetSet,
    thr: u64,
) -> Result<Vec<u64>, DkiError> {
    let n = words[i].len();
    let ci = words[i].block0();
    let targets: Vec<u64> = ks
        .indices()
        .iter()
        .map(|&j| {
            words
                .get(j)
                .map(|w| w.block0())
                .ok_or(DkiError::IndexOutOfRange { index: j, m: words.len() })
        })
        .collect::<Result<_, _>>()?;
    let mut counts = vec![0u64; n as usize + 1];
    for y in 0u64..1 << n {
        if targets.iter().any(|&c| ((y ^ c).count_ones() as u64) <= thr) {
            counts[(y ^ ci).count_ones() as usize] += 1;
        }
    }
    Ok(counts)
}

/// Sum counts[d] · eps^d (1-eps)^{n-d} over d, exactly.
fn weighted_mass(counts: &[u64], eps: &BigRational) -> BigRational {
    let n = counts.len() - 1;
    let a = eps.numer().magnitude().clone();
    let b = eps.denom().magnitude().clone();
    let c = &b - &a;
    let mut numer = BigUint::zero();
    let mut pow_a = BigUint::one();
    let mut pows_c = vec![BigUint::one()];
    for _ in 0..n {
        let next = pows_c.last().expect("nonempty") * &c;
        pows_c.push(next);
    }
    for (d, &count) in counts.iter().enumerate() {
        if count != 0 {
            numer += BigUint::from(count) * &pow_a * &pows_c[n - d];
        }
        if d < n {
            pow_a *= &a;
        }
    }
    BigRational::new(
        BigInt::from(numer),
        BigInt::from(b.pow(n.try_into().expect("n fits u32"))),
    )
}

/// Exact miss probability of the union decoder when message i (inside the
/// target set) is sent: 1 - sum over accepted outputs of W(y | c_i).
pub fn brute_force_type1(
    words: &[Word],
    i: usize,
    ks: &TargetSet,
    p: &DkiParams,
) -> Result<BigRational, DkiError> {
    check_words(words, p)?;
    if i >= words.len() {
        return Err(DkiError::IndexOutOfRange { index: i, m: words.len() });
    }
    if !ks.contains(i) {
        return Err(DkiError::SentIndexNotInTargetSet);
    }
    let counts = accepted_distance_counts(words, i, ks, p.decoding_threshold())?;
    Ok(BigRational::one() - weighted_mass(&counts, p.eps().ratio()))
}

/// Exact false-acceptance probability when message i (outside the target
/// set) is sent: sum over accepted outputs of W(y | c_i).
pub fn brute_force_type2(
    words: &[Word],
    i: usize,
    ks: &TargetSet,
    p: &DkiParams,
) -> Result<BigRational, DkiError> {
    check_words(words, p)?;
    if i >= words.len() {
        return Err(DkiError::IndexOutOfRange { index: i, m: words.len() });
    }
    if ks.contains(i) {
        return Err(DkiError::SentIndexInTargetSet);
    }
    let counts = accepted_distance_counts(words, i, ks, p.decoding_threshold())?;
    Ok(weighted_mass(&counts, p.eps().ratio()))
}

/// Exact P(d(Y, cj) <= thr) when ci is sent, via the p1/p2 split over the
/// d positions where ci and cj differ. Combinatorial, so any n works.
pub fn pair_accept_prob_exact(
    ci: &Word,
    cj: &Word,
    thr: u64,
    eps: &BigRational,
) -> Result<BigRational, DkiError> {
    if ci.len() != cj.len() {
        return Err(DkiError::LengthMismatch(ci.len(), cj.len()));
    }
    let n = ci.len() as u64;
    let d = ci.distance(cj);
    let a = eps.numer().magnitude().clone();
    let b = eps.denom().magnitude().clone();
    let c = &b - &a;
    // flips on the differing block: p1 of d; acceptance needs (d - p1) + p2 <= thr
    let mut total = BigRational::zero();
    let mut coeff = BigUint::one();
    let mut pow_a = BigUint::one();
    let mut pow_c = c.pow(d.try_into().expect("d fits u32"));
    for p1 in 0..=d {
        let cap = thr as i64 - d as i64 + p1 as i64;
        if cap >= 0 {
            let cdf = binom_cdf_exact(n - d, (cap as u64).min(n - d), eps)?;
            let head = BigRational::new(
                BigInt::from(&coeff * &pow_a * &pow_c),
                BigInt::from(b.pow(d.try_into().expect("d fits u32"))),
            );
            total += head * cdf;
        }
        if p1 < d {
            coeff = coeff * BigUint::from(d - p1) / BigUint::from(p1 + 1);
            pow_a *= &a;
            pow_c /= &c;
        }
    }
    Ok(total)
}

/// Pieces of the joint-event accounting behind the type-II bound.
///
/// With d = d(ci, cj), p1 flips on the differing positions and p2 elsewhere,
/// the joint decoding event {d(Y,ci) <= thr} ∩ {d(Y,cj) <= thr} constrains
/// p2 <= min(thr - p1, thr - d + p1). `double_sum` evaluates that double sum
/// exactly; `factorized` relaxes the inner cap to its maximum (at p1 = ⌊d/2⌋)
/// and drops the p1 marginal to 1, which is the step the closed-form bound
/// takes.
#[derive(Debug, Clone)]
pub struct DecompositionCheck {
    pub distance: u64,
    pub exact_joint: BigRational,
    pub double_sum: BigRational,
    pub factorized: BigRational,
    pub zeta0: LogProb,
    /// double_sum >= exact_joint (the acceptance requirement).
    pub dominates: bool,
}

pub fn type2_decomposition_check(
    ci: &Word,
    cj: &Word,
    p: &DkiParams,
) -> Result<DecompositionCheck, DkiError> {
    if ci.len() != cj.len() {
        return Err(DkiError::LengthMismatch(ci.len(), cj.len()));
    }
    if ci.len() != p.n() {
        return Err(DkiError::LengthMismatch(ci.len(), p.n()));
    }
    if p.n() > BRUTE_FORCE_MAX_N {
        return Err(DkiError::BruteForceTooLarge(p.n()));
    }
    let n = p.n() as u64;
    let d = ci.distance(cj);
    let thr = p.decoding_threshold();
    let eps = p.eps().ratio();

    // exact joint probability by full enumeration
    let (bi, bj) = (ci.block0(), cj.block0());
    let mut counts = vec![0u64; n as usize + 1];
    for y in 0u64..1 << n {
        let di = (y ^ bi).count_ones() as u64;
        if di <= thr && ((y ^ bj).count_ones() as u64) <= thr {
            counts[di as usize] += 1;
        }
    }
    let exact_joint = weighted_mass(&counts, eps);

    // the same quantity through the p1/p2 double sum
    let a = eps.numer().magnitude().clone();
    let b = eps.denom().magnitude().clone();
    let c = &b - &a;
    let mut double_numer = BigUint::zero();
    for p1 in 0..=d {
        let cap = (thr as i64 - p1 as i64).min(thr as i64 - d as i64 + p1 as i64);
        if cap < 0 {
            continue;
        }
        let p2_max = (cap as u64).min(n - d);
        for p2 in 0..=p2_max {
            double_numer += binom_coefficient(d, p1)
                * binom_coefficient(n - d, p2)
                * a.pow((p1 + p2).try_into().expect("fits u32"))
                * c.pow((n - p1 - p2).try_into().expect("fits u32"));
        }
    }
    let denom = BigInt::from(b.pow(n.try_into().expect("fits u32")));
    let double_sum = BigRational::new(BigInt::from(double_numer), denom.clone());

    // relax the cap to its maximum over p1 and bound the p1 marginal by 1
    let cap_max = thr as i64 - d as i64 + (d / 2) as i64;
    let factorized = if cap_max < 0 {
        BigRational::zero()
    } else {
        binom_cdf_exact(n - d, (cap_max as u64).min(n - d), eps)?
    };

    let dominates = double_sum >= exact_joint;
    Ok(DecompositionCheck {
        distance: d,
        exact_joint,
        double_sum,
        factorized,
        zeta0: super::analytic_bounds(p).zeta0,
        dominates,
    })
}
