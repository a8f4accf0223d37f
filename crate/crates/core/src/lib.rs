//! Exact symbolic kernel for an antisymmetrized rational-function identity.
//!
//! The crate constructs both sides of the identity
//!
//! ```text
//!   sum_{pi in S_k} sgn(pi) pi[ x1 x2^2 ... xk^k /
//!       ((1 - x_k)(1 - x_k x_{k-1}) ... (1 - x_k ... x_1)) ]
//!     = x1 ... xk prod_{i<j}(x_j - x_i) /
//!       ( prod_i (1 - x_i) prod_{i<j}(1 - x_i x_j) )
//! ```
//!
//! verifies them against each other symbolically and numerically, carries
//! out the specialization `x_i := q^{a_i}` with the exact limit
//! `lim_{q->1} (1-q)^k * (both sides)`, and cross-checks the resulting value
//! against ordered-simplex determinant integrals computed by independent
//! routes (iterated exact integration and Monte Carlo).
//!
//! All correctness-critical arithmetic is arbitrary-precision rational;
//! parallel sums use fixed reduction trees so results are reproducible under
//! any worker count.

pub mod error;
pub mod factored;
pub mod identity;
pub mod integral;
pub mod parallel;
pub mod perm;
pub mod poly;
pub mod qlimit;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
