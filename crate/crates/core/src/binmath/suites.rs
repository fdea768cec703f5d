//! Grid drivers that sweep the volume and tail inequalities and collect
//! per-point reports. Violations are report content, not panics, so the CLI
//! can render full tables and the acceptance suite can count them.

use super::{
    ball_volume, ball_volume_lower_bound, ball_volume_upper_bound, binom_cdf_bound_exact,
    binom_cdf_exact, binom_tail_sandwich_exact, binom_upper_tail_bound_exact,
    binom_upper_tail_exact, floor_mul, log2_biguint, ratio_log2, BoundReport, Probability,
};
use num::Zero;

#[derive(Debug, Clone)]
pub enum SuiteRow {
    Checked(BoundReport),
    Skipped { params: Vec<(String, String)>, reason: String },
}

#[derive(Debug, Default)]
pub struct SuiteOutcome {
    pub rows: Vec<SuiteRow>,
    pub violations: usize,
    pub skipped: usize,
}

impl SuiteOutcome {
    pub fn push_checked(&mut self, report: BoundReport) {
        if !report.holds {
            self.violations += 1;
        }
        self.rows.push(SuiteRow::Checked(report));
    }

    pub fn push_skipped(&mut self, params: Vec<(String, String)>, reason: impl ToString) {
        self.skipped += 1;
        self.rows.push(SuiteRow::Skipped { params, reason: reason.to_string() });
    }

    pub fn merge(&mut self, other: SuiteOutcome) {
        self.violations += other.violations;
        self.skipped += other.skipped;
        self.rows.extend(other.rows);
    }
}

fn volume_params(check: &str, n: u64, eps: &Probability, q: u32) -> Vec<(String, String)> {
    vec![
        ("check".into(), check.into()),
        ("n".into(), n.to_string()),
        ("eps".into(), eps.to_string()),
        ("q".into(), q.to_string()),
    ]
}

/// Check both exponential volume bounds against the exact volume on a grid.
/// The exact volume is big-integer; the comparison happens on log2 values
/// whose error is orders of magnitude below the bounds' slack.
pub fn run_volume_suite(ns: &[u64], eps_list: &[Probability], q: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for &n in ns {
        for eps in eps_list {
            let k = floor_mul(n, eps.ratio());
            let exact_log2 = if k <= n {
                ball_volume(n, k, q).ok().map(|v| log2_biguint(&v))
            } else {
                None
            };
            match ball_volume_lower_bound(n, eps, q) {
                Ok(bound) => {
                    let exact = exact_log2.expect("volume exists when bound preconditions hold");
                    let mut report = BoundReport::new(bound.log2(), exact, bound.log2() <= exact);
                    report.params = volume_params("volume-lower", n, eps, q);
                    out.push_checked(report);
                }
                Err(err) => out.push_skipped(volume_params("volume-lower", n, eps, q), err),
            }
            if q == 2 {
                match ball_volume_upper_bound(n, eps) {
                    Ok(bound) => {
                        let exact =
                            exact_log2.expect("volume exists when bound preconditions hold");
                        let mut report =
                            BoundReport::new(exact, bound.log2(), exact <= bound.log2());
                        report.params = volume_params("volume-upper", n, eps, q);
                        out.push_checked(report);
                    }
                    Err(err) => out.push_skipped(volume_params("volume-upper", n, eps, q), err),
                }
            }
        }
    }
    out
}

fn tail_params(check: &str, n: u64, k: u64, eps: &Probability) -> Vec<(String, String)> {
    vec![
        ("check".into(), check.into()),
        ("n".into(), n.to_string()),
        ("k".into(), k.to_string()),
        ("eps".into(), eps.to_string()),
    ]
}

fn log2_or_neg_inf(r: &num::rational::BigRational) -> f64 {
    if r.is_zero() {
        f64::NEG_INFINITY
    } else {
        ratio_log2(r)
    }
}

/// Sweep every (n <= n_max, 0 <= k <= n, eps) point and check the sandwich,
/// the exponential upper-tail bound, and the CDF bound wherever their
/// preconditions hold, entirely in exact rational arithmetic.
pub fn run_tail_suite(n_max: u64, eps_list: &[Probability]) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    for n in 1..=n_max {
        for eps in eps_list {
            let er = eps.ratio();
            for k in 0..=n {
                match binom_tail_sandwich_exact(n, k, er) {
                    Ok((lo, hi)) => {
                        let tail = binom_upper_tail_exact(n, k, er)
                            .expect("tail defined on sandwich domain");
                        let mut report = BoundReport::new(
                            log2_or_neg_inf(&lo),
                            log2_or_neg_inf(&tail),
                            lo <= tail,
                        );
                        report.params = tail_params("sandwich-lower", n, k, eps);
                        out.push_checked(report);
                        let mut report = BoundReport::new(
                            log2_or_neg_inf(&tail),
                            log2_or_neg_inf(&hi),
                            tail <= hi,
                        );
                        report.params = tail_params("sandwich-upper", n, k, eps);
                        out.push_checked(report);
                    }
                    Err(err) => {
                        out.push_skipped(tail_params("sandwich-lower", n, k, eps), &err);
                        out.push_skipped(tail_params("sandwich-upper", n, k, eps), &err);
                    }
                }
                match binom_upper_tail_bound_exact(n, k, er) {
                    Ok(bound) => {
                        let tail = binom_upper_tail_exact(n, k, er)
                            .expect("tail defined on bound domain");
                        let mut report = BoundReport::new(
                            log2_or_neg_inf(&tail),
                            log2_or_neg_inf(&bound),
                            tail <= bound,
                        );
                        report.params = tail_params("tail-exp-bound", n, k, eps);
                        out.push_checked(report);
                    }
                    Err(err) => out.push_skipped(tail_params("tail-exp-bound", n, k, eps), err),
                }
                match binom_cdf_bound_exact(n, k, er) {
                    Ok(bound) => {
                        let cdf =
                            binom_cdf_exact(n, k, er).expect("cdf defined on bound domain");
                        let mut report = BoundReport::new(
                            log2_or_neg_inf(&cdf),
                            log2_or_neg_inf(&bound),
                            cdf <= bound,
                        );
                        report.params = tail_params("cdf-bound", n, k, eps);
                        out.push_checked(report);
                    }
                    Err(err) => out.push_skipped(tail_params("cdf-bound", n, k, eps), err),
                }
            }
        }
    }
    out
}
