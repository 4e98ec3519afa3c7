//! Exact arithmetic engine for partition rank statistics and q-series congruences.
//!
//! The crate is layered bottom-up:
//!
//! * [`series`]: truncated Laurent series with arbitrary-precision integer
//!   coefficients, including the 5-dissection operators.
//! * [`etaq`]: Euler products `E_j`, eta-quotients and the named series built
//!   from them (the rank-difference series `c`, the Rogers–Ramanujan product,
//!   `z`, `u`, `t`, and the weight-form series `F`, `G`).
//! * [`partitions`]: ground-truth partition counts, Dyson-rank distributions
//!   and `NT(m, k, n)` by dynamic programming with an enumeration oracle.
//! * [`mmatrix`]: the recursively defined matrix `M`, the derived matrices,
//!   the coefficient vectors `x̃_α`, and 5-adic valuation audits.
//! * [`verify`]: each congruence or identity as a parameterized check
//!   producing a [`VerificationReport`].

pub mod error;
pub mod etaq;
pub mod mmatrix;
pub mod partitions;
pub mod report;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use report::{Failure, Modulus, Status, VerificationReport};
pub use series::{SparseSeries, TruncSeries};
