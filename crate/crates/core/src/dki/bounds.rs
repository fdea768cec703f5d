//! Closed-form error bounds for the threshold decoder and the grid suite
//! checking them against exact tails.

use super::{exact_type1_rational, DkiParams};
use crate::binmath::{
    ratio_log2, ratio_to_f64, tangent_entropy_gap, BoundReport, LogProb, Probability,
    SuiteOutcome,
};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed, Zero};

/// Closed-form pieces of the error analysis at one parameter point.
#[derive(Debug, Clone)]
pub struct AnalyticBounds {
    /// Single-decoder miss bound:
    /// [(delta + 1/n)(1-eps)/(delta-eps)] · 2^{-n·gap((thr+1)/n)}.
    pub zeta1: LogProb,
    /// Joint-event bound [eps(1-tau)/(eps-tau)] · 2^{-n·gap(tau)}; zero when
    /// tau <= 0, where the inner sum it dominates is empty.
    pub zeta0: LogProb,
    /// tau = (delta - beta/2)/(1 - beta), always strictly below eps. For
    /// eps < beta/(4 - 2·beta) it goes nonpositive, hence a plain real here.
    pub tau: f64,
    /// Largest admissible target rate the analysis yields: gap(delta).
    pub kappa_max: f64,
    /// False-acceptance bound K·(zeta0 + zeta1) for target sets of size K.
    pub type2_bound: LogProb,
}

pub fn analytic_bounds(p: &DkiParams) -> AnalyticBounds {
    let n = p.n() as f64;
    let thr = p.decoding_threshold();
    let delta = p.delta_beta();
    let eps_f = p.eps().to_f64();
    let delta_f = ratio_to_f64(&delta);

    let coeff1 = (delta_f + 1.0 / n) * (1.0 - eps_f) / (delta_f - eps_f);
    let arg1 = Probability::from_ratio(thr + 1, p.n() as u64)
        .expect("thr + 1 <= n since delta < 1/2");
    let gap1 = tangent_entropy_gap(p.eps(), &arg1).expect("eps inside (0,1)");
    let zeta1 = LogProb::from_log2(coeff1.log2() - n * gap1);

    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let tau_ratio = (&delta - &half * p.beta()) / (BigRational::one() - p.beta());
    let tau = ratio_to_f64(&tau_ratio);
    let zeta0 = if tau_ratio.is_positive() {
        let coeff0 = eps_f * (1.0 - tau) / (eps_f - tau);
        let gap0 = tangent_entropy_gap(
            p.eps(),
            &Probability::new(tau_ratio).expect("0 < tau < eps < 1"),
        )
        .expect("eps inside (0,1)");
        LogProb::from_log2(coeff0.log2() - n * gap0)
    } else {
        LogProb::ZERO
    };

    let kappa_max = tangent_entropy_gap(
        p.eps(),
        &Probability::new(delta).expect("delta inside (eps, 1/2)"),
    )
    .expect("eps inside (0,1)");

    let type2_bound = (zeta0 + zeta1).scale(p.k_size());
    AnalyticBounds { zeta1, zeta0, tau, kappa_max, type2_bound }
}

/// Sweep (n, eps, beta) points and check the closed-form pieces:
/// zeta1 dominates the exact single-decoder tail, tau stays below eps, and
/// the admissible-rate gap stays positive.
pub fn run_zeta_suite(
    ns: &[u32],
    eps_list: &[Probability],
    beta_list: &[BigRational],
) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for &n in ns {
        for eps in eps_list {
            for beta in beta_list {
                let params_kv = |check: &str| {
                    vec![
                        ("check".to_string(), check.to_string()),
                        ("n".to_string(), n.to_string()),
                        ("eps".to_string(), eps.to_string()),
                        ("beta".to_string(), beta.to_string()),
                    ]
                };
                let p = match DkiParams::with_k(
                    n,
                    eps.clone(),
                    BigRational::one(),
                    beta.clone(),
                    BigUint::one(),
                ) {
                    Ok(p) => p,
                    Err(err) => {
                        out.push_skipped(params_kv("zeta1-dominates-type1"), &err);
                        out.push_skipped(params_kv("tau-below-eps"), &err);
                        out.push_skipped(params_kv("kappa-positive"), err);
                        continue;
                    }
                };
                let bounds = analytic_bounds(&p);
                let tail = exact_type1_rational(&p);
                let tail_log2 = if tail.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    ratio_log2(&tail)
                };
                let mut report = BoundReport::new(
                    tail_log2,
                    bounds.zeta1.log2(),
                    tail_log2 <= bounds.zeta1.log2(),
                );
                report.params = params_kv("zeta1-dominates-type1");
                out.push_checked(report);

                let eps_f = eps.to_f64();
                let tau_log2 = if bounds.tau > 0.0 {
                    bounds.tau.log2()
                } else {
                    f64::NEG_INFINITY
                };
                let mut report = BoundReport::new(tau_log2, eps_f.log2(), bounds.tau < eps_f);
                report.params = params_kv("tau-below-eps");
                out.push_checked(report);

                let mut report =
                    BoundReport::new(0.0, bounds.kappa_max.log2(), bounds.kappa_max > 0.0);
                report.params = params_kv("kappa-positive");
                out.push_checked(report);
            }
        }
    }
    out
}
