//! Binomial tails and CDFs, exact and in the log domain, together with the
//! single-term sandwich, the exponential upper-tail bound, and the CDF bound.

use super::{BinmathError, LogProb, Probability};
use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Largest n routed through exact rationals before switching to the
/// compensated log-domain summation.
const EXACT_N_CUTOFF: u64 = 64;

/// Exact binomial coefficient C(n, k).
pub fn binom_coefficient(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

fn split_eps(eps: &BigRational) -> Result<(BigUint, BigUint), BinmathError> {
    if eps.is_negative() || eps > &BigRational::one() {
        return Err(BinmathError::ProbabilityRange(eps.to_string()));
    }
    let a = eps.numer().magnitude().clone();
    let b = eps.denom().magnitude().clone();
    Ok((a, b))
}

/// Exact sum_{j=lo}^{hi} C(n,j) eps^j (1-eps)^{n-j}.
fn binom_sum_exact(
    n: u64,
    lo: u64,
    hi: u64,
    eps: &BigRational,
) -> Result<BigRational, BinmathError> {
    let (a, b) = split_eps(eps)?;
    if lo > hi {
        return Ok(BigRational::zero());
    }
    let c = &b - &a; // 1 - eps, scaled by b
    // powers of a and (b - a) up to n
    let mut pow_a = Vec::with_capacity(n as usize + 1);
    let mut pow_c = Vec::with_capacity(n as usize + 1);
    pow_a.push(BigUint::one());
    pow_c.push(BigUint::one());
    for i in 0..n {
        let pa = &pow_a[i as usize] * &a;
        let pc = &pow_c[i as usize] * &c;
        pow_a.push(pa);
        pow_c.push(pc);
    }
    let mut numer = BigUint::zero();
    let mut coeff = binom_coefficient(n, lo);
    for j in lo..=hi {
        numer += &coeff * &pow_a[j as usize] * &pow_c[(n - j) as usize];
        if j < hi {
            // C(n,j+1) from C(n,j); exact division
            coeff = coeff * BigUint::from(n - j) / BigUint::from(j + 1);
        }
    }
    let denom = b.pow(n.try_into().expect("n fits u32 for pow"));
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
}

/// Exact pmf C(n,k) eps^k (1-eps)^{n-k}.
pub fn binom_pmf_exact(n: u64, k: u64, eps: &BigRational) -> Result<BigRational, BinmathError> {
    if k > n {
        return Err(BinmathError::IndexRange { k, n });
    }
    binom_sum_exact(n, k, k, eps)
}

/// Exact upper tail sum_{j=k}^{n}; k = n+1 is allowed and yields zero.
pub fn binom_upper_tail_exact(
    n: u64,
    k: u64,
    eps: &BigRational,
) -> Result<BigRational, BinmathError> {
    if k > n + 1 {
        return Err(BinmathError::IndexRange { k, n });
    }
    if k == n + 1 {
        return Ok(BigRational::zero());
    }
    binom_sum_exact(n, k, n, eps)
}

/// Exact CDF sum_{j=0}^{k}.
pub fn binom_cdf_exact(n: u64, k: u64, eps: &BigRational) -> Result<BigRational, BinmathError> {
    if k > n {
        return Err(BinmathError::IndexRange { k, n });
    }
    binom_sum_exact(n, 0, k, eps)
}

fn log2_term(n: u64, j: u64, ln_eps: f64, ln_1m: f64, lg_n1: f64) -> f64 {
    let ln = lg_n1 - libm::lgamma((j + 1) as f64) - libm::lgamma((n - j + 1) as f64)
        + j as f64 * ln_eps
        + (n - j) as f64 * ln_1m;
    ln / std::f64::consts::LN_2
}

/// Log-domain summation of binomial terms over [lo, hi], anchored at the
/// largest term with Kahan accumulation of the relative masses.
fn binom_sum_log(n: u64, lo: u64, hi: u64, eps: f64) -> LogProb {
    if lo > hi {
        return LogProb::ZERO;
    }
    let ln_eps = eps.ln();
    let ln_1m = (1.0 - eps).ln();
    let lg_n1 = libm::lgamma((n + 1) as f64);
    let mode = ((n + 1) as f64 * eps).floor() as u64;
    let peak = mode.clamp(lo, hi);
    let lp = log2_term(n, peak, ln_eps, ln_1m, lg_n1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut kahan = |t: f64| {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    };
    for j in peak..=hi {
        let t = (log2_term(n, j, ln_eps, ln_1m, lg_n1) - lp).exp2();
        kahan(t);
        if t < 1e-22 && j > mode {
            break;
        }
    }
    for j in (lo..peak).rev() {
        let t = (log2_term(n, j, ln_eps, ln_1m, lg_n1) - lp).exp2();
        kahan(t);
        if t < 1e-22 && j < mode {
            break;
        }
    }
    LogProb::from_log2(lp + sum.log2())
}

/// Upper tail P(X >= k) for X ~ Binomial(n, eps).
///
/// Exact rationals below n = 64, compensated log-domain summation above.
/// k = n+1 is allowed and yields zero (the empty tail).
pub fn binom_upper_tail(n: u64, k: u64, eps: &Probability) -> Result<LogProb, BinmathError> {
    if k > n + 1 {
        return Err(BinmathError::IndexRange { k, n });
    }
    if k == n + 1 {
        return Ok(LogProb::ZERO);
    }
    if k == 0 {
        return Ok(LogProb::ONE);
    }
    if n <= EXACT_N_CUTOFF {
        return Ok(LogProb::from_ratio(&binom_upper_tail_exact(n, k, eps.ratio())?));
    }
    if eps.is_zero() {
        return Ok(LogProb::ZERO);
    }
    if eps.is_one() {
        return Ok(LogProb::ONE);
    }
    Ok(binom_sum_log(n, k, n, eps.to_f64()))
}

/// CDF P(X <= k) for X ~ Binomial(n, eps).
pub fn binom_cdf(n: u64, k: u64, eps: &Probability) -> Result<LogProb, BinmathError> {
    if k > n {
        return Err(BinmathError::IndexRange { k, n });
    }
    if k == n {
        return Ok(LogProb::ONE);
    }
    if n <= EXACT_N_CUTOFF {
        return Ok(LogProb::from_ratio(&binom_cdf_exact(n, k, eps.ratio())?));
    }
    if eps.is_zero() {
        return Ok(LogProb::ONE);
    }
    if eps.is_one() {
        return Ok(LogProb::ZERO);
    }
    Ok(binom_sum_log(n, 0, k, eps.to_f64()))
}

fn require_ratio_above_eps(n: u64, k: u64, eps: &BigRational) -> Result<(), BinmathError> {
    if eps <= &BigRational::zero() || eps >= &BigRational::one() {
        return Err(BinmathError::EpsEndpoint);
    }
    let ratio = BigRational::new(BigInt::from(k), BigInt::from(n));
    if !(&ratio > eps && ratio < BigRational::one()) {
        return Err(BinmathError::RatioNotAboveEps { k, n });
    }
    Ok(())
}

/// Sandwich coefficient k(1-eps) / (k(1-eps) - (n-k)eps), exact.
fn sandwich_coeff(n: u64, k: u64, eps: &BigRational) -> BigRational {
    let kq = BigRational::from_integer(BigInt::from(k)) * (BigRational::one() - eps);
    let nk = BigRational::from_integer(BigInt::from(n - k)) * eps;
    &kq / (&kq - &nk)
}

/// Exact 2^{n·H(k/n)} = n^n / (k^k (n-k)^{n-k}), with 0^0 = 1.
fn pow2_n_entropy(n: u64, k: u64) -> BigRational {
    fn powself(x: u64) -> BigUint {
        if x == 0 {
            BigUint::one()
        } else {
            BigUint::from(x).pow(x.try_into().expect("exponent fits u32"))
        }
    }
    BigRational::new(
        BigInt::from(powself(n)),
        BigInt::from(powself(k) * powself(n - k)),
    )
}

/// Single-term sandwich around the upper tail (exact form):
/// C(n,k) eps^k (1-eps)^{n-k}  <=  tail  <=  same term times the sandwich
/// coefficient. Requires eps < k/n < 1.
pub fn binom_tail_sandwich_exact(
    n: u64,
    k: u64,
    eps: &BigRational,
) -> Result<(BigRational, BigRational), BinmathError> {
    require_ratio_above_eps(n, k, eps)?;
    let term = binom_pmf_exact(n, k, eps)?;
    let upper = &term * sandwich_coeff(n, k, eps);
    Ok((term, upper))
}

pub fn binom_tail_sandwich(
    n: u64,
    k: u64,
    eps: &Probability,
) -> Result<(LogProb, LogProb), BinmathError> {
    let (lo, hi) = binom_tail_sandwich_exact(n, k, eps.ratio())?;
    Ok((LogProb::from_ratio(&lo), LogProb::from_ratio(&hi)))
}

/// Exponential upper-tail bound (exact form):
/// tail <= coeff · 2^{n[H(k/n) - T_eps(k/n)]}, with the same coefficient as
/// the sandwich. The identity 2^{-n·T_eps(k/n)} = eps^k (1-eps)^{n-k} keeps
/// this rational.
pub fn binom_upper_tail_bound_exact(
    n: u64,
    k: u64,
    eps: &BigRational,
) -> Result<BigRational, BinmathError> {
    require_ratio_above_eps(n, k, eps)?;
    let pow_t = binom_sum_exact(n, k, k, eps)? / BigRational::from_integer(BigInt::from(
        binom_coefficient(n, k),
    )); // eps^k (1-eps)^{n-k}
    Ok(sandwich_coeff(n, k, eps) * pow2_n_entropy(n, k) * pow_t)
}

pub fn binom_upper_tail_bound(n: u64, k: u64, eps: &Probability) -> Result<LogProb, BinmathError> {
    require_ratio_above_eps(n, k, eps.ratio())?;
    let e = eps.to_f64();
    let (nf, kf) = (n as f64, k as f64);
    let coeff = kf * (1.0 - e) / (kf * (1.0 - e) - (nf - kf) * e);
    // n[H(k/n) - T(k/n)] assembled termwise to keep the large-n exponent sharp
    let n_h = kf * (nf / kf).log2() + (nf - kf) * (nf / (nf - kf)).log2();
    let n_t = -kf * e.log2() - (nf - kf) * (1.0 - e).log2();
    Ok(LogProb::from_log2(coeff.log2() + n_h - n_t))
}

fn require_ratio_below_eps(n: u64, k: u64, eps: &BigRational) -> Result<(), BinmathError> {
    if eps <= &BigRational::zero() || eps >= &BigRational::one() {
        return Err(BinmathError::EpsEndpoint);
    }
    if k >= n {
        return Err(BinmathError::IndexRange { k, n });
    }
    let ratio = BigRational::new(BigInt::from(k), BigInt::from(n));
    if &ratio >= eps {
        return Err(BinmathError::RatioNotBelowEps { k, n });
    }
    Ok(())
}

/// CDF bound (exact form): for k/n < eps,
/// CDF(k) <= [eps(n-k) / (eps·n - k)] · 2^{n[H(k/n) - T_eps(k/n)]}.
pub fn binom_cdf_bound_exact(
    n: u64,
    k: u64,
    eps: &BigRational,
) -> Result<BigRational, BinmathError> {
    require_ratio_below_eps(n, k, eps)?;
    let coeff = (eps * BigRational::from_integer(BigInt::from(n - k)))
        / (eps * BigRational::from_integer(BigInt::from(n))
            - BigRational::from_integer(BigInt::from(k)));
    let pow_t = if k == 0 {
        // eps^0 (1-eps)^n
        binom_sum_exact(n, 0, 0, eps)?
    } else {
        binom_sum_exact(n, k, k, eps)?
            / BigRational::from_integer(BigInt::from(binom_coefficient(n, k)))
    };
    Ok(coeff * pow2_n_entropy(n, k) * pow_t)
}

pub fn binom_cdf_bound(n: u64, k: u64, eps: &Probability) -> Result<LogProb, BinmathError> {
    require_ratio_below_eps(n, k, eps.ratio())?;
    let e = eps.to_f64();
    let (nf, kf) = (n as f64, k as f64);
    let coeff = e * (nf - kf) / (e * nf - kf);
    let n_h = if k == 0 {
        0.0
    } else {
        kf * (nf / kf).log2() + (nf - kf) * (nf / (nf - kf)).log2()
    };
    let n_t = -kf * e.log2() - (nf - kf) * (1.0 - e).log2();
    Ok(LogProb::from_log2(coeff.log2() + n_h - n_t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binmath::ratio_log2;
    use proptest::prelude::*;

    fn prob(x: f64) -> Probability {
        Probability::from_f64(x).unwrap()
    }

    fn rat(a: u64, b: u64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn tail_pinned_values() {
        // brute-force over the 8 outcomes of 3 flips at eps = 1/10: 7/250
        let t = binom_upper_tail_exact(3, 2, &rat(1, 10)).unwrap();
        assert_eq!(t, rat(7, 250));
        assert_eq!(binom_upper_tail(10, 0, &prob(0.37)).unwrap(), LogProb::ONE);
        let top = binom_upper_tail(5, 5, &prob(0.5)).unwrap();
        assert!((top.to_linear() - 1.0 / 32.0).abs() < 1e-15);
        // empty tail via the k = n+1 clamp
        assert_eq!(binom_upper_tail(5, 6, &prob(0.5)).unwrap(), LogProb::ZERO);
        assert!(binom_upper_tail(5, 7, &prob(0.5)).is_err());
    }

    #[test]
    fn cdf_pinned_values() {
        assert_eq!(binom_cdf(7, 7, &prob(0.3)).unwrap(), LogProb::ONE);
        let c = binom_cdf_exact(2, 0, &rat(3, 10)).unwrap();
        assert_eq!(c, rat(49, 100));
        let c = binom_cdf_exact(4, 2, &rat(1, 2)).unwrap();
        assert_eq!(c, rat(11, 16));
        assert!(binom_cdf(4, 5, &prob(0.5)).is_err());
    }

    #[test]
    fn complement_identity_exact_and_float() {
        for n in [1u64, 2, 7, 30, 64] {
            for k in 0..n {
                let e = rat(3, 10);
                let s = binom_cdf_exact(n, k, &e).unwrap()
                    + binom_upper_tail_exact(n, k + 1, &e).unwrap();
                assert!(s.is_one(), "n={n} k={k}");
            }
        }
        // float path at large n
        let p = prob(0.23);
        for k in [10u64, 100, 150, 199] {
            let s = binom_cdf(200, k, &p).unwrap().to_linear()
                + binom_upper_tail(200, k + 1, &p).unwrap().to_linear();
            assert!((s - 1.0).abs() < 1e-12, "k={k}: {s}");
        }
    }

    #[test]
    fn log_path_matches_exact_path() {
        // same n evaluated both ways
        let eps = rat(1, 10);
        let p = prob(0.1);
        for k in [1u64, 5, 10, 20, 40] {
            let exact = binom_upper_tail_exact(40, k, &eps).unwrap();
            let log = binom_sum_log(40, k, 40, p.to_f64());
            assert!(
                (log.log2() - ratio_log2(&exact)).abs() < 1e-10,
                "k={k}"
            );
        }
    }

    #[test]
    fn sandwich_holds_exactly() {
        for (n, k, e) in [(20u64, 10u64, rat(3, 10)), (50, 25, rat(1, 5)), (30, 29, rat(1, 2))] {
            let tail = binom_upper_tail_exact(n, k, &e).unwrap();
            let (lo, hi) = binom_tail_sandwich_exact(n, k, &e).unwrap();
            assert!(lo <= tail && tail <= hi, "n={n} k={k}");
        }
        assert!(matches!(
            binom_tail_sandwich_exact(10, 2, &rat(3, 10)),
            Err(BinmathError::RatioNotAboveEps { .. })
        ));
    }

    #[test]
    fn upper_tail_bound_holds_and_matches_identity() {
        for (n, k, e) in [(30u64, 15u64, rat(1, 5)), (100, 40, rat(3, 10))] {
            let tail = binom_upper_tail_exact(n, k, &e).unwrap();
            let bound = binom_upper_tail_bound_exact(n, k, &e).unwrap();
            assert!(bound >= tail, "n={n} k={k}");
        }
        // 2^{-n T(k/n)} = eps^k (1-eps)^{n-k} at (n,k,eps) = (7,3,1/4)
        let e = 0.25f64;
        let lhs = -(7.0) * super::super::tangent_f64(e, 3.0 / 7.0);
        let rhs = 3.0 * e.log2() + 4.0 * (1.0 - e).log2();
        assert!((lhs - rhs).abs() < 1e-12);
        // float route agrees with the exact route
        let fb = binom_upper_tail_bound(30, 15, &prob(0.2)).unwrap().log2();
        let eb = ratio_log2(&binom_upper_tail_bound_exact(30, 15, &rat(1, 5)).unwrap());
        assert!((fb - eb).abs() < 1e-9);
    }

    #[test]
    fn cdf_bound_holds() {
        for (n, k, e) in [(40u64, 5u64, rat(3, 10)), (100, 10, rat(1, 5)), (25, 0, rat(1, 10))] {
            let cdf = binom_cdf_exact(n, k, &e).unwrap();
            let bound = binom_cdf_bound_exact(n, k, &e).unwrap();
            assert!(bound >= cdf, "n={n} k={k}");
        }
        assert!(matches!(
            binom_cdf_bound_exact(10, 4, &rat(3, 10)),
            Err(BinmathError::RatioNotBelowEps { .. })
        ));
        let fb = binom_cdf_bound(40, 5, &prob(0.3)).unwrap().log2();
        let eb = ratio_log2(&binom_cdf_bound_exact(40, 5, &rat(3, 10)).unwrap());
        assert!((fb - eb).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn complement_identity_prop(n in 1u64..=20, kk in 0u64..20, a in 1u64..10, b in 10u64..20) {
            let k = kk % n;
            let e = rat(a, b);
            let s = binom_cdf_exact(n, k, &e).unwrap()
                + binom_upper_tail_exact(n, k + 1, &e).unwrap();
            prop_assert!(s.is_one());
        }

        #[test]
        fn tail_monotone_in_k(n in 2u64..=30, a in 1u64..10) {
            let e = prob(a as f64 / 20.0);
            let mut prev = binom_upper_tail(n, 0, &e).unwrap().to_linear();
            for k in 1..=n {
                let cur = binom_upper_tail(n, k, &e).unwrap().to_linear();
                prop_assert!(cur <= prev + 1e-15);
                prev = cur;
            }
        }
    }
}
