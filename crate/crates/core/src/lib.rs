//! Exact and asymptotic counting of regular partitions.
//!
//! `p(N, t)` denotes the number of partitions of `N` with no part divisible
//! by `t + 1`. The crate provides
//!
//! * exact big-integer counters for `p(N)`, `p(N, t)`, bounded-multiplicity
//!   partitions and `t`-cores ([`exact_count`]),
//! * extended-precision scalars, log-space values and divisor-sum tables
//!   ([`numerics`]),
//! * the Dedekind eta function on the upper half-plane, its modular
//!   reduction and axis brackets ([`eta_lab`]),
//! * the normalised log-eta derivatives `mu_k` with both series expansions
//!   and the quantitative bound sweeps ([`mu_lab`]),
//! * the saddle-point equation solver and the `(N, t)` regime classifier
//!   ([`saddle`]),
//! * every closed-form estimator for `p(N, t)`, `p(N)` and the character
//!   zero-count lower bounds ([`asymptotics`]).
//!
//! Estimates for `p(N, t)` overflow any fixed-width float for interesting
//! `N`, so estimator results are carried as [`numerics::LogValue`] (sign plus
//! natural log of magnitude) and only rendered to decimal at an output
//! boundary.

// Domain guards use negated comparisons (`!(y > 0)`) on purpose: unlike
// `y <= 0`, they also reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod eta_lab;
pub mod exact_count;
pub mod mu_lab;
pub mod numerics;
pub mod saddle;

pub use exact_count::{BigCount, CountTable, TableKind};
pub use numerics::{LogValue, Precision, SigmaTable};
