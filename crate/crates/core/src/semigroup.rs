//! Exact arithmetic for representations `n = c*x + d*y` over non-negative
//! integers, with `1 < c < d` and `gcd(c, d) = 1`.
//!
//! The representation count is computed without enumeration: the solutions
//! form an arithmetic progression `x = x_min + t*d` (t >= 0), where
//! `x_min = n * c^{-1} mod d`, so the count is a single modular inverse plus
//! a division. Everything is integer arithmetic with 128-bit intermediates;
//! no floating point appears anywhere in this module.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Brute-force loops refuse to run past this bound instead of silently
/// truncating.
pub const ORACLE_LIMIT: u64 = 100_000_000;

/// Gap-set enumeration refuses targets whose Frobenius number exceeds this.
pub const ENUMERATION_LIMIT: u64 = 100_000_000;

/// All magnitudes, including the derived `(l+1)*c*d`, must fit in 63 bits so
/// that sums and differences never overflow a signed intermediate.
pub const MAGNITUDE_CAP: u64 = i64::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("generators must be coprime: gcd({c}, {d}) != 1")]
    NotCoprime { c: u64, d: u64 },
    #[error("generators must satisfy 1 < c < d (got c={c}, d={d})")]
    BadRange { c: u64, d: u64 },
    #[error("(ell+1)*c*d exceeds the 63-bit magnitude cap (c={c}, d={d}, ell={ell})")]
    Overflow { c: u64, d: u64, ell: u64 },
    #[error("brute-force oracle limited to n <= {limit} (got n={n})")]
    OracleRangeExceeded { n: u64, limit: u64 },
    #[error("gap enumeration limited to g_ell <= {limit} (got g_ell={g_ell})")]
    EnumerationTooLarge { g_ell: u64, limit: u64 },
    #[error("{n} is not representable as c*x + d*y")]
    NotRepresentable { n: u64 },
}

/// Validated `(c, d, ell)` triple with the l-Frobenius number cached.
///
/// Construction enforces `1 < c < d`, coprimality, and the magnitude cap, so
/// downstream arithmetic never needs to re-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupParams {
    c: u64,
    d: u64,
    ell: u64,
    g_ell: u64,
}

impl SemigroupParams {
    /// Validate and construct. Fails with [`SemigroupError::NotCoprime`],
    /// [`SemigroupError::BadRange`], or [`SemigroupError::Overflow`].
    pub fn new(c: u64, d: u64, ell: u64) -> Result<Self, SemigroupError> {
        if !(1 < c && c < d) {
            return Err(SemigroupError::BadRange { c, d });
        }
        if gcd(c, d) != 1 {
            return Err(SemigroupError::NotCoprime { c, d });
        }
        let prod = (ell as u128 + 1) * c as u128 * d as u128;
        if prod > MAGNITUDE_CAP as u128 {
            return Err(SemigroupError::Overflow { c, d, ell });
        }
        let g_ell = (prod - c as u128 - d as u128) as u64;
        Ok(Self { c, d, ell, g_ell })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// The l-Frobenius number `(l+1)*c*d - c - d`.
    pub fn g_ell(&self) -> u64 {
        self.g_ell
    }

    /// `l*c*d`, the lower end of the counting window `(l*c*d, g_ell]`.
    pub fn ell_cd(&self) -> u64 {
        (self.ell as u128 * self.c as u128 * self.d as u128) as u64
    }

    /// The ordinary Frobenius number `g_0 = c*d - c - d` of the same pair.
    pub fn g_zero(&self) -> u64 {
        (self.c as u128 * self.d as u128 - self.c as u128 - self.d as u128) as u64
    }
}

/// Validate `(c, d, ell)` and compute the cached l-Frobenius number.
pub fn validate_params(c: u64, d: u64, ell: u64) -> Result<SemigroupParams, SemigroupError> {
    SemigroupParams::new(c, d, ell)
}

/// The l-Frobenius number `(l+1)*c*d - c - d` of validated parameters.
pub fn frobenius_ell(params: &SemigroupParams) -> u64 {
    params.g_ell()
}

/// One solution of `c*x + d*y = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub x: u64,
    pub y: u64,
}

/// Canonical decomposition `n = (level-1)*c*d + c*x0 + d*y0` of an integer
/// with `level >= 1` representations, where `0 <= x0 <= d-1` and
/// `0 <= y0 <= c-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDecomposition {
    pub level: u64,
    pub x0: u64,
    pub y0: u64,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
/// Requires `gcd(a, m) = 1` and `m > 1`.
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inputs must be coprime");
    old_s.rem_euclid(m as i128) as u64
}

/// Repeated-query representation counter for a fixed pair, with the modular
/// inverse of `c` precomputed. One multiplication, one reduction, and one
/// division per query.
#[derive(Debug, Clone, Copy)]
pub struct RepCounter {
    c: u64,
    d: u64,
    cd: u64,
    c_inv_mod_d: u64,
}

impl RepCounter {
    pub fn new(c: u64, d: u64) -> Result<Self, SemigroupError> {
        if !(1 < c && c < d) {
            return Err(SemigroupError::BadRange { c, d });
        }
        if gcd(c, d) != 1 {
            return Err(SemigroupError::NotCoprime { c, d });
        }
        let cd = c as u128 * d as u128;
        if cd > MAGNITUDE_CAP as u128 {
            return Err(SemigroupError::Overflow { c, d, ell: 0 });
        }
        Ok(Self {
            c,
            d,
            cd: cd as u64,
            c_inv_mod_d: mod_inverse(c % d, d),
        })
    }

    pub fn for_params(params: &SemigroupParams) -> Self {
        // Params are already validated, so this cannot fail.
        Self::new(params.c(), params.d()).expect("validated params")
    }

    /// Number of non-negative solutions of `c*x + d*y = n`.
    #[inline]
    pub fn count(&self, n: u64) -> u64 {
        let x_min = (n % self.d) as u128 * self.c_inv_mod_d as u128 % self.d as u128;
        let c_x_min = self.c as u128 * x_min;
        if c_x_min > n as u128 {
            0
        } else {
            ((n as u128 - c_x_min) / self.cd as u128) as u64 + 1
        }
    }

    /// The smallest x over all representations of `n`, or `None` when `n` is
    /// not representable.
    #[inline]
    fn x_min(&self, n: u64) -> Option<u64> {
        let x_min = (n % self.d) as u128 * self.c_inv_mod_d as u128 % self.d as u128;
        if self.c as u128 * x_min > n as u128 {
            None
        } else {
            Some(x_min as u64)
        }
    }
}

fn check_n(n: u64) -> Result<(), SemigroupError> {
    if n > MAGNITUDE_CAP {
        // Reuse the overflow error: n itself breaks the 63-bit contract.
        return Err(SemigroupError::Overflow { c: 0, d: 0, ell: 0 });
    }
    Ok(())
}

/// Number of non-negative solutions of `c*x + d*y = n`, in O(log d).
pub fn rep_count(c: u64, d: u64, n: u64) -> Result<u64, SemigroupError> {
    check_n(n)?;
    Ok(RepCounter::new(c, d)?.count(n))
}

/// Independent brute-force count: loop x from 0 to n/c and test
/// divisibility. Kept deliberately naive; this is the oracle the fast path
/// is audited against.
pub fn rep_count_oracle(c: u64, d: u64, n: u64) -> Result<u64, SemigroupError> {
    if n > ORACLE_LIMIT {
        return Err(SemigroupError::OracleRangeExceeded {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    if !(1 < c && c < d) {
        return Err(SemigroupError::BadRange { c, d });
    }
    if gcd(c, d) != 1 {
        return Err(SemigroupError::NotCoprime { c, d });
    }
    let mut count = 0u64;
    let mut rem = n;
    loop {
        if rem % d == 0 {
            count += 1;
        }
        if rem < c {
            break;
        }
        rem -= c;
    }
    Ok(count)
}

/// Up to `max_count` representations of `n`, sorted by increasing x.
/// Consecutive entries differ by `(+d, -c)`.
pub fn representations(
    c: u64,
    d: u64,
    n: u64,
    max_count: u64,
) -> Result<Vec<Representation>, SemigroupError> {
    check_n(n)?;
    let counter = RepCounter::new(c, d)?;
    let total = counter.count(n);
    let take = total.min(max_count);
    let mut out = Vec::with_capacity(take as usize);
    if take == 0 {
        return Ok(out);
    }
    let mut x = counter.x_min(n).expect("count > 0 implies representable");
    let mut y = (n - c * x) / d;
    for _ in 0..take {
        out.push(Representation { x, y });
        x += d;
        y = y.wrapping_sub(c); // only read while another representation exists
    }
    Ok(out)
}

/// Membership in the l-numerical semigroup: more than `ell` representations.
pub fn is_member(params: &SemigroupParams, n: u64) -> Result<bool, SemigroupError> {
    check_n(n)?;
    let counter = RepCounter::for_params(params);
    Ok(counter.count(n) >= params.ell() + 1)
}

/// All gaps of the l-numerical semigroup: the `n` in `[0, g_ell]` with at
/// most `ell` representations, in increasing order. The maximum returned
/// element is `g_ell` itself.
///
/// Note that for `ell >= 1` the list starts with 0, which has exactly one
/// representation `(0, 0)`; only for `ell = 0` is 0 a semigroup element.
pub fn gaps(params: &SemigroupParams) -> Result<Vec<u64>, SemigroupError> {
    let g_ell = params.g_ell();
    if g_ell > ENUMERATION_LIMIT {
        return Err(SemigroupError::EnumerationTooLarge {
            g_ell,
            limit: ENUMERATION_LIMIT,
        });
    }
    let counter = RepCounter::for_params(params);
    let ell = params.ell();
    let mut out = Vec::new();
    for n in 0..=g_ell {
        if counter.count(n) <= ell {
            out.push(n);
        }
    }
    debug_assert_eq!(out.last().copied(), Some(g_ell));
    Ok(out)
}

/// Canonical decomposition of a representable `n`: with `k = rep_count(n)`,
/// returns `(level = k, x0, y0)` such that `n = (k-1)*c*d + c*x0 + d*y0`.
/// `x0` is the x of the minimal-x representation and `y0` the y of the
/// maximal-x one, which pins a unique choice.
pub fn exact_decompose(c: u64, d: u64, n: u64) -> Result<ExactDecomposition, SemigroupError> {
    check_n(n)?;
    let counter = RepCounter::new(c, d)?;
    let level = counter.count(n);
    if level == 0 {
        return Err(SemigroupError::NotRepresentable { n });
    }
    let x0 = counter.x_min(n).expect("representable");
    // Largest x: x0 + (level-1)*d; its y is the smallest over representations.
    let x_max = x0 as u128 + (level as u128 - 1) * d as u128;
    let y0 = ((n as u128 - c as u128 * x_max) / d as u128) as u64;
    debug_assert!(x0 <= d - 1);
    debug_assert!(y0 <= c - 1);
    debug_assert_eq!(
        (level as u128 - 1) * c as u128 * d as u128 + c as u128 * x0 as u128 + d as u128 * y0 as u128,
        n as u128
    );
    Ok(ExactDecomposition { level, x0, y0 })
}
