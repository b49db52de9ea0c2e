//! Arithmetic of two-generator l-numerical semigroups and the prime-counting
//! experiments built on top of them.
//!
//! For coprime integers `1 < c < d` and a level `l >= 0`, the l-numerical
//! semigroup is the set of integers `n` with strictly more than `l`
//! representations `n = c*x + d*y` in non-negative integers. Its complement is
//! finite; the largest excluded element is the l-Frobenius number
//! `g_l = (l+1)cd - c - d`. The crate provides:
//!
//! * [`semigroup`] — exact representation counting in O(log d) per query,
//!   gap-set enumeration, and the canonical decomposition
//!   `n = (k-1)cd + c*x0 + d*y0` of a k-fold representable integer;
//! * [`sieve`] — a segmented Eratosthenes sieve with von Mangoldt support:
//!   primality over arbitrary 63-bit windows, `pi(x)`, and the Chebyshev
//!   sums `psi(x)`, `theta(x)`;
//! * [`counts`] — the headline statistics per `(c, d, l)`: the prime count
//!   `pi_ell` inside the semigroup, its Lambda- and log-p-weighted analogues
//!   `psi_ell` / `theta_ell`, the convergence ratio
//!   `(2l+2) * pi_ell / pi(g_l)`, and a partial-summation reconstruction of
//!   `pi_ell` from `theta_ell` that must hold as an identity;
//! * [`circle`] — a numerical workbench for the exponential sums `f`, `h`,
//!   the orthogonality identity recovering `psi_ell` as a convolution, and a
//!   major/minor arc decomposition of the unit interval at desk scale;
//! * [`cli`] — the deterministic `frob` command-line front end.
//!
//! All counting paths are exact integer arithmetic; floating point enters
//! only through logarithms and is always accumulated with compensated
//! summation in a fixed order, so results are bit-identical regardless of
//! worker count.

pub mod circle;
pub mod cli;
pub mod counts;
mod kahan;
pub mod semigroup;
pub mod sieve;

pub use counts::{CountReport, Pairing, ScanSpec};
pub use semigroup::{ExactDecomposition, Representation, SemigroupError, SemigroupParams};
pub use sieve::LambdaTable;
