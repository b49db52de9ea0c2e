//! Segmented sieve of Eratosthenes with von Mangoldt support.
//!
//! The central type is [`LambdaTable`]: primality flags over an arbitrary
//! interval `[lo, hi]` of 63-bit integers plus a sparse list of proper prime
//! powers `p^k` (k >= 2) in the same interval. Together these reconstruct
//! `Lambda(n)` exactly: `log p` for flagged primes and listed powers, 0
//! otherwise. Prime powers are enumerated directly from the base primes
//! (there are only O(sqrt(hi)) of them); `Lambda` is never computed by trial
//! factoring, which keeps the Chebyshev sums linear in the range length.
//!
//! Only odd candidates are ever marked: even positions are pre-cleared by a
//! word mask, and every base prime strides through its odd multiples in
//! steps of `2p`. Large ranges are sieved segment by segment; segments are
//! independent pure functions of their bounds, so a pool of workers can
//! produce them in any order while callers fold the results in a fixed
//! order. All floating-point accumulation downstream is therefore
//! bit-identical regardless of worker count.

use rayon::prelude::*;
use thiserror::Error;

use crate::kahan::KahanSum;
use crate::semigroup::MAGNITUDE_CAP;

/// Largest permitted table length `hi - lo`.
pub const MAX_RANGE_LEN: u64 = 1 << 40;

/// Numbers per sieve segment; 2^20 flags keeps a segment inside L2.
pub const DEFAULT_SEGMENT_LEN: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("invalid range: lo={lo} > hi={hi}")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("range too large: length {len} exceeds {max} (or hi above 63-bit cap)")]
    RangeTooLarge { len: u64, max: u64 },
    #[error("n={n} outside table range [{lo}, {hi}]")]
    OutOfTableRange { n: u64, lo: u64, hi: u64 },
}

/// Integer square root: largest r with r*r <= n.
pub(crate) fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |rr| rr <= n) {
        r += 1;
    }
    r
}

/// Odd primes up to `limit`, by a plain odd-index sieve.
fn odd_primes_upto(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let count = ((limit - 3) / 2 + 1) as usize; // flags for 3, 5, 7, ...
    let mut composite = vec![false; count];
    let mut p = 3u64;
    while p * p <= limit {
        if !composite[((p - 3) / 2) as usize] {
            let mut m = p * p;
            while m <= limit {
                composite[((m - 3) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    (0..count)
        .filter(|&i| !composite[i])
        .map(|i| 3 + 2 * i as u64)
        .collect()
}

/// Odd base primes for sieving any interval with hi <= `hi`.
#[derive(Debug, Clone)]
pub(crate) struct BasePrimes {
    odd: Vec<u64>,
    limit: u64,
}

impl BasePrimes {
    pub fn for_hi(hi: u64) -> Self {
        let limit = isqrt(hi);
        Self {
            odd: odd_primes_upto(limit),
            limit,
        }
    }
}

const EVEN_LO_MASK: u64 = 0xAAAA_AAAA_AAAA_AAAA; // odd offsets when lo is even
const ODD_LO_MASK: u64 = 0x5555_5555_5555_5555; // even offsets are the odd numbers

/// Sieve `[start, end]` into `words` (bit i <=> start + i prime). `start`
/// must be 64-aligned relative to the table origin so chunks never share a
/// word. Only odd candidates are marked; evens are dead by the fill mask.
fn sieve_chunk(base: &BasePrimes, start: u64, end: u64, words: &mut [u64]) {
    let mask = if start % 2 == 0 {
        EVEN_LO_MASK
    } else {
        ODD_LO_MASK
    };
    words.fill(mask);
    for &p in &base.odd {
        let p2 = match p.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
        if p2 > end {
            break;
        }
        let mut m = if p2 >= start {
            p2
        } else {
            let first = start.div_ceil(p) * p;
            if first % 2 == 0 {
                first + p
            } else {
                first
            }
        };
        debug_assert!(m % 2 == 1);
        let step = 2 * p;
        while m <= end {
            let bit = m - start;
            words[(bit >> 6) as usize] &= !(1u64 << (bit & 63));
            m += step;
        }
    }
}

/// Proper prime powers `p^k` (k >= 2) in `[lo, hi]`, as `(n, log p)` sorted
/// by n. Enumerated from scratch: 2 first, then the odd base primes.
fn prime_powers_in(base: &BasePrimes, lo: u64, hi: u64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut push_powers = |p: u64| {
        let mut pw = p as u128 * p as u128;
        let log_p = (p as f64).ln();
        while pw < lo as u128 {
            pw *= p as u128;
        }
        while pw <= hi as u128 {
            out.push((pw as u64, log_p));
            pw *= p as u128;
        }
    };
    if 4 <= hi as u128 {
        push_powers(2);
    }
    for &p in &base.odd {
        if p as u128 * p as u128 > hi as u128 {
            break;
        }
        push_powers(p);
    }
    out.sort_unstable_by_key(|&(n, _)| n);
    out
}

/// Primality flags and von Mangoldt data over one integer interval.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
    powers: Vec<(u64, f64)>,
}

impl LambdaTable {
    fn validate(lo: u64, hi: u64) -> Result<(), SieveError> {
        if lo > hi {
            return Err(SieveError::InvalidRange { lo, hi });
        }
        let len = hi - lo + 1;
        if len > MAX_RANGE_LEN || hi > MAGNITUDE_CAP {
            return Err(SieveError::RangeTooLarge {
                len,
                max: MAX_RANGE_LEN,
            });
        }
        Ok(())
    }

    pub(crate) fn build_with_base(base: &BasePrimes, lo: u64, hi: u64) -> Result<Self, SieveError> {
        Self::validate(lo, hi)?;
        debug_assert!(base.limit >= isqrt(hi));
        let len = hi - lo + 1;
        let n_words = len.div_ceil(64) as usize;
        let mut words = vec![0u64; n_words];

        // Chunk boundaries are word-aligned so parallel sieving writes to
        // disjoint words; content is a pure function of the chunk bounds.
        let chunk_words = (DEFAULT_SEGMENT_LEN / 64) as usize;
        words
            .par_chunks_mut(chunk_words)
            .enumerate()
            .for_each(|(i, chunk)| {
                let start = lo + (i * chunk_words) as u64 * 64;
                let end = hi.min(start + (chunk.len() as u64 * 64 - 1));
                sieve_chunk(base, start, end, chunk);
            });

        // Patch the three constants the mask/marking scheme cannot see.
        let mut set = |n: u64, prime: bool| {
            if n >= lo && n <= hi {
                let bit = n - lo;
                if prime {
                    words[(bit >> 6) as usize] |= 1u64 << (bit & 63);
                } else {
                    words[(bit >> 6) as usize] &= !(1u64 << (bit & 63));
                }
            }
        };
        set(0, false);
        set(1, false);
        set(2, true);

        // Clear the dead bits past hi so popcounts are exact.
        let tail = (len % 64) as u32;
        if tail != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << tail) - 1;
        }

        Ok(Self {
            lo,
            hi,
            words,
            powers: prime_powers_in(base, lo, hi),
        })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn covers(&self, n: u64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn is_prime(&self, n: u64) -> Result<bool, SieveError> {
        if !self.covers(n) {
            return Err(SieveError::OutOfTableRange {
                n,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let bit = n - self.lo;
        Ok(self.words[(bit >> 6) as usize] >> (bit & 63) & 1 == 1)
    }

    /// Exact von Mangoldt value: `log p` when `n = p^k`, else 0.
    pub fn lambda(&self, n: u64) -> Result<f64, SieveError> {
        if self.is_prime(n)? {
            return Ok((n as f64).ln());
        }
        match self.powers.binary_search_by_key(&n, |&(m, _)| m) {
            Ok(i) => Ok(self.powers[i].1),
            Err(_) => Ok(0.0),
        }
    }

    /// Proper prime powers `(p^k, log p)` with k >= 2, sorted by the power.
    pub fn prime_powers(&self) -> &[(u64, f64)] {
        &self.powers
    }

    pub fn count_primes(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Primes of the table in increasing order.
    pub fn iter_primes(&self) -> PrimeIter<'_> {
        PrimeIter {
            lo: self.lo,
            words: &self.words,
            idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// All `(n, Lambda(n))` with `Lambda(n) > 0`, in increasing n: primes and
    /// proper prime powers merged into one stream.
    pub fn lambda_entries(&self) -> LambdaEntryIter<'_> {
        let mut primes = self.iter_primes();
        let next_prime = primes.next();
        LambdaEntryIter {
            primes,
            next_prime,
            powers: &self.powers,
            power_idx: 0,
        }
    }
}

pub struct LambdaEntryIter<'a> {
    primes: PrimeIter<'a>,
    next_prime: Option<u64>,
    powers: &'a [(u64, f64)],
    power_idx: usize,
}

impl Iterator for LambdaEntryIter<'_> {
    type Item = (u64, f64);

    fn next(&mut self) -> Option<(u64, f64)> {
        let power = self.powers.get(self.power_idx).copied();
        match (self.next_prime, power) {
            (Some(p), Some((n, log_p))) if n < p => {
                self.power_idx += 1;
                Some((n, log_p))
            }
            (Some(p), _) => {
                self.next_prime = self.primes.next();
                Some((p, (p as f64).ln()))
            }
            (None, Some((n, log_p))) => {
                self.power_idx += 1;
                Some((n, log_p))
            }
            (None, None) => None,
        }
    }
}

pub struct PrimeIter<'a> {
    lo: u64,
    words: &'a [u64],
    idx: usize,
    current: u64,
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        while self.current == 0 {
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.idx];
        }
        let tz = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(self.lo + (self.idx as u64) * 64 + tz as u64)
    }
}

/// Sieve `[lo, hi]` into one table. Base primes up to sqrt(hi) are computed
/// once; segments inside are sieved in parallel.
pub fn sieve_range(lo: u64, hi: u64) -> Result<LambdaTable, SieveError> {
    LambdaTable::validate(lo, hi)?;
    let base = BasePrimes::for_hi(hi);
    LambdaTable::build_with_base(&base, lo, hi)
}

/// Stream `[lo, hi]` as a sequence of segment tables delivered to `f` in
/// increasing order. Segments are pre-sieved in parallel blocks, but `f`
/// always observes them lo-to-hi, so any accumulation inside `f` is
/// deterministic no matter how many workers sieve.
pub fn stream_tables<E, F>(lo: u64, hi: u64, segment_len: u64, f: &mut F) -> Result<(), E>
where
    E: From<SieveError>,
    F: FnMut(&LambdaTable) -> Result<(), E>,
{
    LambdaTable::validate(lo, hi).map_err(E::from)?;
    let seg = segment_len.max(64).div_ceil(64) * 64;
    let base = BasePrimes::for_hi(hi);
    let n_segments = (hi - lo + 1).div_ceil(seg);
    let block = (rayon::current_num_threads() * 2).max(1) as u64;

    let mut start_seg = 0u64;
    while start_seg < n_segments {
        let end_seg = (start_seg + block).min(n_segments);
        let tables: Vec<Result<LambdaTable, SieveError>> = (start_seg..end_seg)
            .into_par_iter()
            .map(|k| {
                let s_lo = lo + k * seg;
                let s_hi = hi.min(s_lo + seg - 1);
                LambdaTable::build_with_base(&base, s_lo, s_hi)
            })
            .collect();
        for t in tables {
            f(&t.map_err(E::from)?)?;
        }
        start_seg = end_seg;
    }
    Ok(())
}

/// pi(x): the number of primes up to x.
pub fn prime_count(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let mut total = 0u64;
    let result: Result<(), SieveError> = stream_tables(0, x, DEFAULT_SEGMENT_LEN, &mut |t| {
        total += t.count_primes();
        Ok(())
    });
    result.expect("range [0, x] is always valid");
    total
}

/// Chebyshev psi: the sum of `Lambda(n)` over n <= x.
pub fn chebyshev_psi(x: u64) -> f64 {
    let mut sum = KahanSum::new();
    if x < 2 {
        return 0.0;
    }
    let result: Result<(), SieveError> = stream_tables(0, x, DEFAULT_SEGMENT_LEN, &mut |t| {
        for p in t.iter_primes() {
            sum.add((p as f64).ln());
        }
        for &(_, log_p) in t.prime_powers() {
            sum.add(log_p);
        }
        Ok(())
    });
    result.expect("range [0, x] is always valid");
    sum.value()
}

/// Chebyshev theta: the sum of `log p` over primes p <= x.
pub fn chebyshev_theta(x: u64) -> f64 {
    let mut sum = KahanSum::new();
    if x < 2 {
        return 0.0;
    }
    let result: Result<(), SieveError> = stream_tables(0, x, DEFAULT_SEGMENT_LEN, &mut |t| {
        for p in t.iter_primes() {
            sum.add((p as f64).ln());
        }
        Ok(())
    });
    result.expect("range [0, x] is always valid");
    sum.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division primality, the independent oracle for spot checks.
    fn is_prime_slow(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                return false;
            }
            p += 1;
        }
        true
    }

    #[test]
    fn small_table_primes_and_powers() {
        let t = sieve_range(0, 30).unwrap();
        let primes: Vec<u64> = t.iter_primes().collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let powers: Vec<u64> = t.prime_powers().iter().map(|&(n, _)| n).collect();
        assert_eq!(powers, vec![4, 8, 9, 16, 25, 27]);
        for &(n, log_p) in t.prime_powers() {
            // Each entry must be a real prime power with the right base.
            let mut m = n;
            let mut base = 0;
            for p in 2..=n {
                if m % p == 0 {
                    base = p;
                    while m % p == 0 {
                        m /= p;
                    }
                    break;
                }
            }
            assert_eq!(m, 1, "n={n} is not a prime power");
            assert!((log_p - (base as f64).ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn window_above_one_million() {
        let t = sieve_range(1_000_000, 1_000_100).unwrap();
        let primes: Vec<u64> = t.iter_primes().collect();
        assert_eq!(
            primes,
            vec![1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099]
        );
        for n in 1_000_000..=1_000_100 {
            assert_eq!(t.is_prime(n).unwrap(), is_prime_slow(n), "n={n}");
        }
    }

    #[test]
    fn invalid_and_oversized_ranges() {
        assert_eq!(
            sieve_range(5, 4).map(|_| ()),
            Err(SieveError::InvalidRange { lo: 5, hi: 4 })
        );
        assert!(matches!(
            sieve_range(0, MAX_RANGE_LEN + 5),
            Err(SieveError::RangeTooLarge { .. })
        ));
        assert!(matches!(
            sieve_range(MAGNITUDE_CAP - 10, MAGNITUDE_CAP + 1),
            Err(SieveError::RangeTooLarge { .. })
        ));
    }

    #[test]
    fn lambda_values() {
        let t = sieve_range(0, 30).unwrap();
        assert!((t.lambda(8).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(t.lambda(6).unwrap(), 0.0);
        assert!((t.lambda(7).unwrap() - 7f64.ln()).abs() < 1e-15);
        assert_eq!(t.lambda(1).unwrap(), 0.0);
        assert!(matches!(
            t.lambda(31),
            Err(SieveError::OutOfTableRange { .. })
        ));
    }

    #[test]
    fn prime_count_examples() {
        assert_eq!(prime_count(0), 0);
        assert_eq!(prime_count(1), 0);
        assert_eq!(prime_count(2), 1);
        assert_eq!(prime_count(7), 4);
        assert_eq!(prime_count(22), 8);
        assert_eq!(prime_count(100), 25);
    }

    #[test]
    fn chebyshev_examples() {
        assert!((chebyshev_psi(10) - 2520f64.ln()).abs() < 1e-12);
        assert!((chebyshev_theta(10) - 210f64.ln()).abs() < 1e-12);
        assert_eq!(chebyshev_psi(1), 0.0);
        assert_eq!(chebyshev_theta(0), 0.0);
    }

    #[test]
    fn psi_minus_theta_bounded_by_power_correction() {
        for x in [10u64, 100, 1_000, 10_000] {
            let psi = chebyshev_psi(x);
            let theta = chebyshev_theta(x);
            assert!(psi >= theta);
            let bound = 2.0 * (x as f64).sqrt() * (x as f64).ln();
            assert!(psi - theta <= bound, "x={x}");
        }
    }

    #[test]
    fn segment_independence_bit_for_bit() {
        // One sieve of [lo, hi] must agree with any partition into pieces.
        let (lo, hi) = (999_900u64, 1_010_000u64);
        let whole = sieve_range(lo, hi).unwrap();
        for cut_len in [97u64, 4096, 65_536] {
            let mut primes = Vec::new();
            let mut powers = Vec::new();
            let mut s = lo;
            while s <= hi {
                let e = hi.min(s + cut_len - 1);
                let part = sieve_range(s, e).unwrap();
                primes.extend(part.iter_primes());
                powers.extend(part.prime_powers().iter().map(|&(n, _)| n));
                s = e + 1;
            }
            assert_eq!(primes, whole.iter_primes().collect::<Vec<_>>());
            assert_eq!(
                powers,
                whole
                    .prime_powers()
                    .iter()
                    .map(|&(n, _)| n)
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn lambda_entries_merge_in_order() {
        let t = sieve_range(0, 30).unwrap();
        let ns: Vec<u64> = t.lambda_entries().map(|(n, _)| n).collect();
        assert_eq!(
            ns,
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
        );
        for (n, lambda) in t.lambda_entries() {
            assert_eq!(lambda, t.lambda(n).unwrap());
        }
    }

    #[test]
    fn streaming_matches_single_table() {
        let mut count = 0u64;
        let r: Result<(), SieveError> = stream_tables(0, 100_000, 1 << 12, &mut |t| {
            count += t.count_primes();
            Ok(())
        });
        r.unwrap();
        assert_eq!(count, prime_count(100_000));
        assert_eq!(count, 9592);
    }
}
