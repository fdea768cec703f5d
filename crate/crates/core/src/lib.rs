//! Deterministic K-identification (DKI) coding over the binary symmetric channel.
//!
//! The receiver of a DKI code answers a binary question: does the transmitted
//! message belong to a given target set of K messages? This crate provides the
//! building blocks for studying that setting at finite blocklength:
//!
//! * [`binmath`]: entropies, tangent lines, Hamming-ball volumes, binomial
//!   tails, and the inequalities relating them, with exact rational oracles
//!   next to the floating-point paths.
//! * [`hamming`]: packed binary words, the Hamming metric, and exhaustive
//!   enumeration primitives used by oracles and the codebook builder.
//! * [`channel`]: the memoryless BSC: exact likelihoods and seeded,
//!   reproducible transmission.
//! * [`codebook`]: greedy minimum-distance codebook construction under a
//!   Hamming-weight constraint, the packing lower bound on the codebook size,
//!   verification, and a line-oriented file format.
//! * [`dki`]: the threshold decoder, exact error-probability oracles,
//!   analytic error bounds, Monte Carlo estimation, and the capacity and
//!   rate-region calculators.

pub mod binmath;
pub mod channel;
pub mod codebook;
pub mod dki;
pub mod hamming;

pub use binmath::{BigCount, BoundReport, LogProb, Probability, SuiteOutcome, SuiteRow};
pub use channel::{BscParams, Seed};
pub use codebook::{Codebook, CodebookParams, Construction};
pub use dki::{AnalyticBounds, DkiParams, ErrorEstimate, TargetSet};
pub use hamming::Word;
