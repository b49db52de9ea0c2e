//! Numerical workbench for the circle-method view of `psi_ell`.
//!
//! With `g = g_0(c, d)` and a level shift `l*c*d`, the two exponential sums
//!
//! * `f(alpha) = sum_{0 <= n <= g} Lambda(l*c*d + n) e(alpha n)` and
//! * `h(alpha) = sum_{0 <= x <= d, 0 <= y <= c} e(alpha (c x + d y))`
//!
//! satisfy `psi_ell = int_0^1 f(alpha) h(-alpha) d alpha`. That identity is
//! implemented here as an exact finite convolution ([`psi_by_orthogonality`]),
//! never as numeric quadrature. Quadrature appears only in the major/minor
//! arc split ([`arc_decomposition`]), where each uniform grid point of a
//! shifted unit interval is assigned to exactly one side of the partition.
//! In exact-grid mode the grid is finer than the trigonometric degree of
//! `f(alpha) h(-alpha)`, so major + minor recovers the exact total up to
//! floating-point rounding.
//!
//! A variant of `f` summing `Lambda(m) e(alpha m)` over the unshifted prime
//! support differs from ours only by the unimodular factor `e(-alpha*l*c*d)`;
//! only `f` itself is exposed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kahan::KahanSum;
use crate::semigroup::{gcd, SemigroupParams};
use crate::sieve::LambdaTable;

/// This module is a demonstration instrument, not the counting path: the
/// support of `f` is materialized, so `g_0` is capped.
pub const CIRCLE_G_LIMIT: u64 = 100_000_000;

/// Hard cap on quadrature grids (memory for the FFT buffer).
pub const MAX_GRID_POINTS: usize = 1 << 26;

/// Geometric-sum phases this close to an integer use the exact integer value
/// of the factor. Kept at the scale of accumulated rounding (a few ulp) so
/// the closed form stays within 1e-10 of the naive double sum even at phases
/// deliberately offset by 1e-12.
const PHASE_SNAP: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleError {
    #[error("Q={q} violates the standing assumption Q^3 < c (c={c}) or degenerates the window")]
    QTooLarge { q: u64, c: u64 },
    #[error("exact grid needs more than {needed} points, got {got}")]
    GridTooCoarse { needed: u64, got: u64 },
    #[error("grid of {got} points exceeds the cap of {max}")]
    GridTooLarge { got: u64, max: u64 },
    #[error("g_0 = {g0} exceeds the circle-module cap {limit}")]
    EnumerationTooLarge { g0: u64, limit: u64 },
    #[error("table [{lo}, {hi}] does not cover required range [{need_lo}, {need_hi}]")]
    TableDoesNotCoverRange {
        need_lo: u64,
        need_hi: u64,
        lo: u64,
        hi: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcMode {
    /// Grid finer than the trigonometric degree of f*h: the quadrature total
    /// is exact up to rounding.
    ExactGrid,
    /// Any grid; the split is a sampled approximation.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcConfig {
    pub q: u64,
    pub grid_points: u64,
    pub mode: ArcMode,
}

/// Result of the major/minor split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcDecomposition {
    pub q: u64,
    pub grid_points: u64,
    pub mode: ArcMode,
    pub major: Complex64,
    pub minor: Complex64,
    /// `psi_ell` by exact convolution, the reference the split must add to.
    pub total_exact: f64,
    pub half_g: f64,
    /// Declared bound on |major + minor - total_exact|: 1e-6 * max(1, total)
    /// in exact-grid mode, the measured defect in sampled mode.
    pub error_estimate: f64,
    pub major_points: u64,
    pub minor_points: u64,
}

/// Decomposition plus the sampled sup of |f| on the minor arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcReport {
    pub decomposition: ArcDecomposition,
    pub minor_sup_estimate: f64,
}

/// `alpha * k` reduced mod 1 to [-1/2, 1/2], with an exact two-product so
/// the reduced phase keeps full precision even when the raw product is ~1e8.
#[inline]
fn frac_mul(alpha: f64, k: u64) -> f64 {
    let kf = k as f64;
    let p = alpha * kf;
    let err = alpha.mul_add(kf, -p);
    (p - p.round()) + err
}

#[inline]
fn unit_phase(alpha: f64, k: u64) -> Complex64 {
    let (s, c) = (2.0 * PI * frac_mul(alpha, k)).sin_cos();
    Complex64::new(c, s)
}

/// Closed form of `sum_{j=0}^{len-1} e(alpha * k * j)`. When the phase
/// `alpha * k` is within [`PHASE_SNAP`] of an integer the factor is exactly
/// `len`.
fn geometric_sum(alpha: f64, k: u64, len: u64) -> Complex64 {
    let beta = frac_mul(alpha, k);
    if beta.abs() < PHASE_SNAP {
        return Complex64::new(len as f64, 0.0);
    }
    let m = len as f64;
    let ratio = (PI * beta * m).sin() / (PI * beta).sin();
    let angle = PI * beta * (m - 1.0);
    ratio * Complex64::new(angle.cos(), angle.sin())
}

/// `h(alpha)`: the box sum as a product of two closed-form geometric series,
/// `(d+1)` terms stepping by `alpha*c` times `(c+1)` terms stepping by
/// `alpha*d`.
pub fn eval_h(c: u64, d: u64, alpha: f64) -> Complex64 {
    geometric_sum(alpha, c, d + 1) * geometric_sum(alpha, d, c + 1)
}

/// The Lambda-weighted support of `f`: offsets `n = m - l*c*d` in `[0, g_0]`
/// paired with `Lambda(m)`.
struct Support {
    entries: Vec<(u64, f64)>,
}

fn check_coverage(
    table: &LambdaTable,
    need_lo: u64,
    need_hi: u64,
) -> Result<(), CircleError> {
    if table.lo() > need_lo || table.hi() < need_hi {
        return Err(CircleError::TableDoesNotCoverRange {
            need_lo,
            need_hi,
            lo: table.lo(),
            hi: table.hi(),
        });
    }
    Ok(())
}

fn support(params: &SemigroupParams, table: &LambdaTable) -> Result<Support, CircleError> {
    let ell_cd = params.ell_cd();
    let g_ell = params.g_ell();
    check_coverage(table, ell_cd, g_ell)?;
    let mut entries = Vec::new();
    for (m, lambda) in table.lambda_entries() {
        if m < ell_cd || m > g_ell {
            continue;
        }
        entries.push((m - ell_cd, lambda));
    }
    Ok(Support { entries })
}

fn eval_f_support(entries: &[(u64, f64)], alpha: f64) -> Complex64 {
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for &(n, lambda) in entries {
        let z = unit_phase(alpha, n);
        re.add(lambda * z.re);
        im.add(lambda * z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `f(alpha)`: the Lambda-weighted exponential sum over the shifted window,
/// evaluated on its sparse prime-power support only.
pub fn eval_f(
    params: &SemigroupParams,
    table: &LambdaTable,
    alpha: f64,
) -> Result<Complex64, CircleError> {
    let sup = support(params, table)?;
    Ok(eval_f_support(&sup.entries, alpha))
}

/// Bitset of box-representable residuals: bit m set iff
/// `m = c*x + d*y` for some `0 <= x <= d`, `0 <= y <= c`. For `m <= g_0`
/// such a representation is unique, making this a 0/1 convolution kernel.
fn box_representable(c: u64, d: u64, g0: u64) -> Vec<u64> {
    let mut words = vec![0u64; (g0 / 64 + 1) as usize];
    for x in 0..=d {
        let cx = c * x;
        if cx > g0 {
            break;
        }
        let mut m = cx;
        let mut y = 0;
        while m <= g0 && y <= c {
            debug_assert_eq!(
                words[(m >> 6) as usize] >> (m & 63) & 1,
                0,
                "box representation must be unique below g_0"
            );
            words[(m >> 6) as usize] |= 1 << (m & 63);
            m += d;
            y += 1;
        }
    }
    words
}

fn psi_convolution(params: &SemigroupParams, sup: &Support) -> Result<f64, CircleError> {
    let g0 = params.g_zero();
    if g0 > CIRCLE_G_LIMIT {
        return Err(CircleError::EnumerationTooLarge {
            g0,
            limit: CIRCLE_G_LIMIT,
        });
    }
    let r_box = box_representable(params.c(), params.d(), g0);
    let mut sum = KahanSum::new();
    for &(n, lambda) in &sup.entries {
        if r_box[(n >> 6) as usize] >> (n & 63) & 1 == 1 {
            sum.add(lambda);
        }
    }
    Ok(sum.value())
}

/// `psi_ell` evaluated exactly as the discrete convolution
/// `sum_m Lambda(l*c*d + m) * r_box(m)` — the orthogonality integral with no
/// quadrature involved. The box kernel is enumerated on the `(x, y)` grid,
/// fully independent of the modular-inverse counting path it is checked
/// against.
pub fn psi_by_orthogonality(
    params: &SemigroupParams,
    table: &LambdaTable,
) -> Result<f64, CircleError> {
    let sup = support(params, table)?;
    psi_convolution(params, &sup)
}

/// Major arcs around each rational a/q (q <= Q, gcd(a, q) = 1), half-width
/// `Q / (q g)`, merged and clipped to the shifted window.
fn major_intervals(q_max: u64, g0: u64, window: (f64, f64)) -> Vec<(f64, f64)> {
    let mut raw = Vec::new();
    for q in 1..=q_max {
        for a in 1..=q {
            if gcd(a, q) != 1 {
                continue;
            }
            let center = a as f64 / q as f64;
            let hw = q_max as f64 / (q as f64 * g0 as f64);
            let lo = (center - hw).max(window.0);
            let hi = (center + hw).min(window.1);
            if lo <= hi {
                raw.push((lo, hi));
            }
        }
    }
    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for (lo, hi) in raw {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

fn validate_arc_inputs(
    params: &SemigroupParams,
    config: &ArcConfig,
) -> Result<(), CircleError> {
    let (c, q) = (params.c(), config.q);
    if q == 0 || (q as u128).pow(3) >= c as u128 {
        return Err(CircleError::QTooLarge { q, c });
    }
    let g0 = params.g_zero();
    // The window [(Q+1)/g, 1 + (Q+1)/g] must still contain the arc around 1.
    if g0 <= 2 * q + 1 {
        return Err(CircleError::QTooLarge { q, c });
    }
    if g0 > CIRCLE_G_LIMIT {
        return Err(CircleError::EnumerationTooLarge {
            g0,
            limit: CIRCLE_G_LIMIT,
        });
    }
    if config.grid_points == 0 {
        return Err(CircleError::GridTooCoarse {
            needed: 1,
            got: 0,
        });
    }
    if config.grid_points > MAX_GRID_POINTS as u64 {
        return Err(CircleError::GridTooLarge {
            got: config.grid_points,
            max: MAX_GRID_POINTS as u64,
        });
    }
    if config.mode == ArcMode::ExactGrid {
        // Degree bound: no nonzero frequency of f(a)h(-a) may be divisible
        // by the grid size.
        let needed = g0 as u128
            + params.ell_cd() as u128
            + params.c() as u128 * params.d() as u128
            + params.c() as u128
            + params.d() as u128;
        if config.grid_points as u128 <= needed {
            return Err(CircleError::GridTooCoarse {
                needed: needed as u64,
                got: config.grid_points,
            });
        }
    }
    Ok(())
}

/// Split the shifted unit interval into major and minor arcs and integrate
/// `f(alpha) h(-alpha)` over each side by uniform-grid quadrature. Each grid
/// point belongs to exactly one side; ties at interval endpoints go to the
/// major arcs.
pub fn arc_decomposition(
    params: &SemigroupParams,
    table: &LambdaTable,
    config: &ArcConfig,
) -> Result<ArcDecomposition, CircleError> {
    validate_arc_inputs(params, config)?;
    let sup = support(params, table)?;
    let total_exact = psi_convolution(params, &sup)?;

    let g0 = params.g_zero();
    let n = config.grid_points as usize;
    let w0 = (config.q as f64 + 1.0) / g0 as f64;
    let majors = major_intervals(config.q, g0, (w0, w0 + 1.0));

    // f on the grid in one FFT: fold the support mod n, twist by the window
    // offset, and let the inverse transform supply the exact e(jn/N) phases.
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for &(off, lambda) in &sup.entries {
        buf[(off % n as u64) as usize] += lambda * unit_phase(w0, off);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);

    let mut major_re = KahanSum::new();
    let mut major_im = KahanSum::new();
    let mut minor_re = KahanSum::new();
    let mut minor_im = KahanSum::new();
    let mut major_points = 0u64;
    let mut arc_idx = 0usize;
    let (c, d) = (params.c(), params.d());
    let inv_n = 1.0 / n as f64;
    for (j, f_val) in buf.iter().enumerate() {
        let alpha = w0 + j as f64 * inv_n;
        while arc_idx < majors.len() && majors[arc_idx].1 < alpha {
            arc_idx += 1;
        }
        let in_major = arc_idx < majors.len()
            && majors[arc_idx].0 <= alpha
            && alpha <= majors[arc_idx].1;
        let term = f_val * eval_h(c, d, -alpha);
        if in_major {
            major_points += 1;
            major_re.add(term.re);
            major_im.add(term.im);
        } else {
            minor_re.add(term.re);
            minor_im.add(term.im);
        }
    }

    let major = Complex64::new(major_re.value() * inv_n, major_im.value() * inv_n);
    let minor = Complex64::new(minor_re.value() * inv_n, minor_im.value() * inv_n);
    let error_estimate = match config.mode {
        ArcMode::ExactGrid => 1e-6 * total_exact.abs().max(1.0),
        ArcMode::Sampled => (major + minor - total_exact).norm(),
    };

    Ok(ArcDecomposition {
        q: config.q,
        grid_points: config.grid_points,
        mode: config.mode,
        major,
        minor,
        total_exact,
        half_g: g0 as f64 / 2.0,
        error_estimate,
        major_points,
        minor_points: config.grid_points - major_points,
    })
}

/// Sampled sup of |f| over the minor arcs: the max of |f(alpha)| at
/// `samples` seeded-uniform points of the complement of the major arcs,
/// reproducible from the seed.
pub fn minor_arc_sup(
    params: &SemigroupParams,
    table: &LambdaTable,
    q: u64,
    samples: u64,
    seed: u64,
) -> Result<f64, CircleError> {
    let sup = support(params, table)?;
    let g0 = params.g_zero();
    let w0 = (q as f64 + 1.0) / g0 as f64;
    let window = (w0, w0 + 1.0);
    let majors = major_intervals(q.max(1), g0, window);

    let mut minors: Vec<(f64, f64)> = Vec::with_capacity(majors.len() + 1);
    let mut cursor = window.0;
    for &(lo, hi) in &majors {
        if lo > cursor {
            minors.push((cursor, lo));
        }
        cursor = cursor.max(hi);
    }
    if cursor < window.1 {
        minors.push((cursor, window.1));
    }
    let total_len: f64 = minors.iter().map(|&(lo, hi)| hi - lo).sum();
    if !(total_len > 0.0) {
        return Ok(0.0);
    }

    // Positions are drawn sequentially from one stream so the sample set is
    // a pure function of the seed; the max reduction is order-independent.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<f64> = (0..samples.max(1))
        .map(|_| {
            let mut u = rng.random::<f64>() * total_len;
            for &(lo, hi) in &minors {
                let len = hi - lo;
                if u < len {
                    return lo + u;
                }
                u -= len;
            }
            minors.last().map(|&(_, hi)| hi).unwrap()
        })
        .collect();

    Ok(positions
        .par_iter()
        .map(|&alpha| eval_f_support(&sup.entries, alpha).norm())
        .reduce(|| 0.0, f64::max))
}

/// Run the decomposition and the minor-arc sup together.
pub fn arc_report(
    params: &SemigroupParams,
    table: &LambdaTable,
    config: &ArcConfig,
    samples: u64,
    seed: u64,
) -> Result<ArcReport, CircleError> {
    let decomposition = arc_decomposition(params, table, config)?;
    let minor_sup_estimate = minor_arc_sup(params, table, config.q, samples, seed)?;
    Ok(ArcReport {
        decomposition,
        minor_sup_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts;
    use crate::semigroup::validate_params;
    use crate::sieve::sieve_range;
    use proptest::prelude::*;

    fn table_for(params: &SemigroupParams) -> LambdaTable {
        sieve_range(0, params.g_ell()).unwrap()
    }

    /// The (d+1)(c+1)-term double sum, with the same exact phase reduction.
    fn eval_h_naive(c: u64, d: u64, alpha: f64) -> Complex64 {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for x in 0..=d {
            for y in 0..=c {
                let z = unit_phase(alpha, c * x + d * y);
                re.add(z.re);
                im.add(z.im);
            }
        }
        Complex64::new(re.value(), im.value())
    }

    #[test]
    fn h_examples() {
        let h0 = eval_h(3, 5, 0.0);
        assert!((h0 - Complex64::new(24.0, 0.0)).norm() < 1e-12);

        let h_half = eval_h(3, 5, 0.5);
        assert!(h_half.norm() < 1e-12);

        let h_third = eval_h(3, 5, 1.0 / 3.0);
        assert!((h_third - Complex64::new(6.0, 0.0)).norm() < 1e-10);
        assert!((eval_h_naive(3, 5, 1.0 / 3.0) - Complex64::new(6.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn h_closed_form_matches_naive_at_singular_offsets() {
        for &(c, d) in &[(3u64, 5u64), (7, 11), (29, 30)] {
            for k in 1..=3u64 {
                for base in [k as f64 / c as f64, k as f64 / d as f64] {
                    for off in [0.0, 1e-15, -1e-15, 1e-13, -1e-13, 1e-12, -1e-12] {
                        let alpha = base + off;
                        let diff = (eval_h(c, d, alpha) - eval_h_naive(c, d, alpha)).norm();
                        assert!(diff < 1e-10, "c={c} d={d} alpha={alpha:e} diff={diff:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn f_at_zero_is_lambda_mass() {
        let p = validate_params(3, 5, 0).unwrap();
        let t = table_for(&p);
        let f0 = eval_f(&p, &t, 0.0).unwrap();
        assert!((f0.re - 420f64.ln()).abs() < 1e-12);
        assert!(f0.im.abs() < 1e-12);
    }

    #[test]
    fn f_is_periodic_and_bounded_by_f0() {
        let p = validate_params(7, 11, 1).unwrap();
        let t = table_for(&p);
        let f0 = eval_f(&p, &t, 0.0).unwrap().re;
        for alpha in [0.1234, 0.5, 0.789] {
            let a = eval_f(&p, &t, alpha).unwrap();
            let b = eval_f(&p, &t, alpha + 1.0).unwrap();
            assert!((a - b).norm() < 1e-10);
            assert!(a.norm() <= f0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn orthogonality_examples() {
        let p = validate_params(3, 5, 0).unwrap();
        let v = psi_by_orthogonality(&p, &table_for(&p)).unwrap();
        assert!((v - 15f64.ln()).abs() < 1e-12);

        let p = validate_params(2, 3, 0).unwrap();
        assert_eq!(psi_by_orthogonality(&p, &table_for(&p)).unwrap(), 0.0);

        let p = validate_params(7, 11, 1).unwrap();
        let t = table_for(&p);
        let conv = psi_by_orthogonality(&p, &t).unwrap();
        let direct = counts::psi_ell(&p, &t).unwrap();
        assert!((conv - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn arc_split_is_exact_on_fine_grids() {
        let p = validate_params(3, 5, 0).unwrap();
        let t = table_for(&p);
        let config = ArcConfig {
            q: 1,
            grid_points: 1024,
            mode: ArcMode::ExactGrid,
        };
        let dec = arc_decomposition(&p, &t, &config).unwrap();
        let defect = (dec.major + dec.minor - dec.total_exact).norm();
        assert!(defect <= dec.error_estimate, "defect={defect:e}");
        assert!((dec.total_exact - 15f64.ln()).abs() < 1e-12);
        assert!((dec.major + dec.minor).im.abs() < 1e-9);
        assert_eq!(dec.major_points + dec.minor_points, 1024);
    }

    #[test]
    fn arc_validation_errors() {
        let p = validate_params(8, 9, 0).unwrap();
        let t = sieve_range(0, p.g_ell()).unwrap();
        // 2^3 = 8 is not < c = 8.
        let config = ArcConfig {
            q: 2,
            grid_points: 4096,
            mode: ArcMode::ExactGrid,
        };
        assert!(matches!(
            arc_decomposition(&p, &t, &config),
            Err(CircleError::QTooLarge { .. })
        ));

        let p = validate_params(101, 103, 0).unwrap();
        let t = sieve_range(0, p.g_ell()).unwrap();
        let config = ArcConfig {
            q: 4,
            grid_points: 1024, // far below the degree bound
            mode: ArcMode::ExactGrid,
        };
        assert!(matches!(
            arc_decomposition(&p, &t, &config),
            Err(CircleError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn major_arcs_pairwise_disjoint_below_sixth_root() {
        // Exact integer check: |a/q - a'/q'| > Q/(qg) + Q/(q'g) iff
        // |a q' - a' q| * g > Q (q + q').
        let p = validate_params(101, 103, 0).unwrap();
        let g0 = p.g_zero();
        let q_max = 4u64; // 4 < g0^{1/6} ~ 4.66
        let mut fractions = Vec::new();
        for q in 1..=q_max {
            for a in 1..=q {
                if gcd(a, q) == 1 {
                    fractions.push((a, q));
                }
            }
        }
        for (i, &(a, q)) in fractions.iter().enumerate() {
            for &(a2, q2) in fractions.iter().skip(i + 1) {
                let num = (a as i128 * q2 as i128 - a2 as i128 * q as i128).unsigned_abs();
                assert!(
                    num * g0 as u128 > (q_max * (q + q2)) as u128,
                    "arcs around {a}/{q} and {a2}/{q2} overlap"
                );
            }
        }
        // And the merged interval list has as many entries as fractions.
        let w0 = (q_max as f64 + 1.0) / g0 as f64;
        assert_eq!(
            major_intervals(q_max, g0, (w0, w0 + 1.0)).len(),
            fractions.len()
        );
    }

    #[test]
    fn minor_sup_is_reproducible_and_bounded() {
        let p = validate_params(101, 103, 0).unwrap();
        let t = table_for(&p);
        let a = minor_arc_sup(&p, &t, 4, 1, 7).unwrap();
        let b = minor_arc_sup(&p, &t, 4, 1, 7).unwrap();
        assert_eq!(a, b);
        let f0 = eval_f(&p, &t, 0.0).unwrap().re;
        let sup = minor_arc_sup(&p, &t, 4, 500, 7).unwrap();
        assert!(sup > 0.0 && sup <= f0 * (1.0 + 1e-12));
    }

    fn arb_pair() -> impl Strategy<Value = (u64, u64)> {
        let pairs: Vec<(u64, u64)> = vec![(2, 3), (3, 5), (4, 9), (5, 7), (7, 11), (13, 30)];
        (0..pairs.len()).prop_map(move |i| pairs[i])
    }

    proptest! {
        #[test]
        fn h_periodicity_and_naive_agreement(pair in arb_pair(), alpha in 0.0f64..1.0) {
            let (c, d) = pair;
            let closed = eval_h(c, d, alpha);
            prop_assert!((closed - eval_h_naive(c, d, alpha)).norm() < 1e-10);
            prop_assert!((closed - eval_h(c, d, alpha + 1.0)).norm() < 1e-10);
        }
    }
}
