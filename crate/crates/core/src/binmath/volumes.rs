//! Hamming-ball volumes, exact and with their exponential bounds.

use super::{floor_mul, BigCount, BinmathError, LogProb, Probability};
use num::bigint::BigUint;
use num::One;

/// Exact volume of a radius-r Hamming ball in the q-ary n-cube:
/// sum_{i=0}^{r} C(n,i) (q-1)^i.
pub fn ball_volume(n: u64, r: u64, q: u32) -> Result<BigCount, BinmathError> {
    if q < 2 {
        return Err(BinmathError::AlphabetSize(q));
    }
    if r > n {
        return Err(BinmathError::RadiusRange { r, n });
    }
    let qm1 = BigUint::from(q as u64 - 1);
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 0..r {
        // C(n,i+1)(q-1)^{i+1} from C(n,i)(q-1)^i; the division is exact
        term = term * BigUint::from(n - i) / BigUint::from(i + 1) * &qm1;
        sum += &term;
    }
    Ok(sum)
}

/// Stirling-based lower bound on log2 Vol(B(n, ⌊n·eps⌋)) over a q-ary alphabet:
/// q^{n·H_q(k/n) + log_q Res(n)} with k = ⌊n·eps⌋ and
/// Res(n) = e^{-1/(12k) - 1/(n-k)} / sqrt(2π·k·(1-k/n)).
///
/// The e^{-1/(n-k)} term is looser than the 1/(12(n-k)) Stirling correction
/// would permit, so the bound stays valid with extra slack.
pub fn ball_volume_lower_bound(
    n: u64,
    eps: &Probability,
    q: u32,
) -> Result<LogProb, BinmathError> {
    if q < 2 {
        return Err(BinmathError::AlphabetSize(q));
    }
    let k = floor_mul(n, eps.ratio());
    if k < 1 {
        return Err(BinmathError::FloorTooSmall { n });
    }
    if n - k < 1 {
        return Err(BinmathError::FloorTooLarge { n });
    }
    // k/n <= 1 - 1/q  <=>  k*q <= n*(q-1)
    if k * q as u64 > n * (q as u64 - 1) {
        return Err(BinmathError::FloorFractionTooLarge);
    }
    let (nf, kf) = (n as f64, k as f64);
    // n·H_q(k/n)·log2(q), expanded so no n·(entropy) product loses precision
    let mut log2 = kf * (nf / kf).log2() + (nf - kf) * (nf / (nf - kf)).log2();
    if q > 2 {
        log2 += kf * ((q - 1) as f64).log2();
    }
    // log2 Res(n)
    let log2e = std::f64::consts::LOG2_E;
    log2 += -(1.0 / (12.0 * kf) + 1.0 / (nf - kf)) * log2e;
    log2 -= 0.5 * (2.0 * std::f64::consts::PI * kf * (1.0 - kf / nf)).log2();
    Ok(LogProb::from_log2(log2))
}

/// Entropy upper bound on log2 Vol(B(n, ⌊n·eps⌋)) in the binary cube: n·H(eps).
pub fn ball_volume_upper_bound(n: u64, eps: &Probability) -> Result<LogProb, BinmathError> {
    let half = Probability::from_ratio(1, 2).expect("1/2 is a probability");
    if eps.is_zero() || eps.ratio() > half.ratio() {
        return Err(BinmathError::EpsAboveHalf);
    }
    let k = floor_mul(n, eps.ratio());
    if k < 1 {
        return Err(BinmathError::FloorTooSmall { n });
    }
    if k >= n {
        return Err(BinmathError::FloorTooLarge { n });
    }
    Ok(LogProb::from_log2(n as f64 * super::h2(eps.to_f64())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binmath::log2_biguint;
    use num::ToPrimitive;

    fn prob(x: f64) -> Probability {
        Probability::from_f64(x).unwrap()
    }

    #[test]
    fn volume_small_cases() {
        assert_eq!(ball_volume(3, 1, 2).unwrap().to_u64().unwrap(), 4);
        assert_eq!(ball_volume(20, 20, 2).unwrap().to_u64().unwrap(), 1 << 20);
        // brute-force count of ternary words within distance 2 of a center
        assert_eq!(ball_volume(4, 2, 3).unwrap().to_u64().unwrap(), 33);
        assert_eq!(ball_volume(20, 10, 2).unwrap().to_u64().unwrap(), 616666);
        assert_eq!(ball_volume(30, 3, 2).unwrap().to_u64().unwrap(), 4526);
        assert!(ball_volume(3, 4, 2).is_err());
        assert!(ball_volume(3, 1, 1).is_err());
    }

    #[test]
    fn volume_matches_brute_force_enumeration() {
        // histogram the q-ary cube by distance from the zero word, then
        // compare every radius prefix against the closed-form volume
        for q in [2u32, 3] {
            for n in 1u64..=12 {
                let total = (q as u64).pow(n as u32);
                let mut by_distance = vec![0u64; n as usize + 1];
                for mut v in 0..total {
                    let mut nonzero = 0usize;
                    for _ in 0..n {
                        if v % q as u64 != 0 {
                            nonzero += 1;
                        }
                        v /= q as u64;
                    }
                    by_distance[nonzero] += 1;
                }
                let mut prefix = 0u64;
                for r in 0..=n {
                    prefix += by_distance[r as usize];
                    assert_eq!(
                        ball_volume(n, r, q).unwrap().to_u64().unwrap(),
                        prefix,
                        "n={n} r={r} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn volume_monotone_in_radius() {
        let mut prev = ball_volume(40, 0, 2).unwrap();
        for r in 1..=40 {
            let cur = ball_volume(40, r, 2).unwrap();
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn lower_bound_below_exact_volume() {
        for (n, eps) in [(100u64, 0.2f64), (1000, 0.3), (64, 0.5), (250, 0.05)] {
            let p = prob(eps);
            let k = floor_mul(n, p.ratio());
            let exact = log2_biguint(&ball_volume(n, k, 2).unwrap());
            let bound = ball_volume_lower_bound(n, &p, 2).unwrap().log2();
            assert!(bound <= exact, "n={n} eps={eps}: {bound} > {exact}");
        }
        // q = 3 spot check
        let p = prob(0.4);
        let k = floor_mul(60, p.ratio());
        let exact = log2_biguint(&ball_volume(60, k, 3).unwrap());
        let bound = ball_volume_lower_bound(60, &p, 3).unwrap().log2();
        assert!(bound <= exact);
    }

    #[test]
    fn upper_bound_above_exact_volume() {
        for (n, eps) in [(20u64, 0.5f64), (30, 0.1), (1000, 0.25)] {
            let p = prob(eps);
            let k = floor_mul(n, p.ratio());
            let exact = log2_biguint(&ball_volume(n, k, 2).unwrap());
            let bound = ball_volume_upper_bound(n, &p).unwrap().log2();
            assert!(bound >= exact, "n={n} eps={eps}");
        }
        assert!((ball_volume_upper_bound(20, &prob(0.5)).unwrap().log2() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn bound_preconditions_rejected() {
        // floor(10 * 0.05) = 0
        assert!(matches!(
            ball_volume_lower_bound(10, &prob(0.05), 2),
            Err(BinmathError::FloorTooSmall { .. })
        ));
        assert!(matches!(
            ball_volume_upper_bound(10, &prob(0.05)),
            Err(BinmathError::FloorTooSmall { .. })
        ));
        assert!(ball_volume_upper_bound(10, &prob(0.7)).is_err());
        // k/n > 1 - 1/q for q = 2 at eps close to 1
        assert!(ball_volume_lower_bound(10, &prob(0.9), 2).is_err());
    }
}
