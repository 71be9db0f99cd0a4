//! Certified enclosures for the natural-log expressions in the parameter
//! formulas.
//!
//! Ceilings like `ceil(c * ln x)` are decided from a fixed-point interval
//! `[lo, hi]` (values scaled by `2^prec`) that provably contains the real
//! value: every operation rounds `lo` down and `hi` up. When the enclosure
//! straddles an integer the precision is doubled and the value recomputed.
//! The quantities involved are irrational, so the loop terminates; precision
//! starts at 128 bits, well past what an off-by-one in a ceiling would need.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

const PRECISIONS: [u64; 5] = [128, 256, 512, 1024, 2048];

/// `ceil((c_num / c_den) * ln(a / b))` for integers `a >= b >= 1`.
pub(crate) fn ceil_ratio_ln(c_num: u64, c_den: u64, a: &BigUint, b: &BigUint) -> Result<u64> {
    assert!(c_den > 0 && !b.is_zero() && a >= b);
    if c_num == 0 || a == b {
        return Ok(0);
    }
    for prec in PRECISIONS {
        let scale = BigUint::one() << prec;
        let (la_lo, la_hi) = ln_enclosure(a, prec);
        let (lb_lo, lb_hi) = ln_enclosure(b, prec);
        let diff_lo = saturating_sub(&la_lo, &lb_hi);
        let diff_hi = &la_hi - &lb_lo;
        let v_lo = diff_lo * c_num / c_den;
        let v_hi = diff_hi * c_num / c_den + 1u32;
        let ceil_lo = ceil_div(&v_lo, &scale);
        let ceil_hi = ceil_div(&v_hi, &scale);
        if ceil_lo == ceil_hi {
            return u64::try_from(ceil_lo)
                .map_err(|_| Error::Internal("ceiling exceeds u64".into()));
        }
    }
    Err(Error::Internal("log enclosure failed to settle".into()))
}

/// Decides `gamma <= 3 * lambda / (5 * ln lambda)`, i.e.
/// `5 * gamma * ln lambda <= 3 * lambda`, for `lambda >= 2`.
pub(crate) fn within_prime_sampling_threshold(gamma: u64, lambda: u64) -> Result<bool> {
    assert!(lambda >= 2);
    let lam = BigUint::from(lambda);
    for prec in PRECISIONS {
        let (lo, hi) = ln_enclosure(&lam, prec);
        let factor = BigUint::from(5u32) * gamma;
        let lhs_lo = lo * &factor;
        let lhs_hi = hi * &factor;
        let rhs = (BigUint::from(3u32) * lambda) << prec;
        if lhs_hi < rhs {
            return Ok(true);
        }
        if lhs_lo > rhs {
            return Ok(false);
        }
    }
    Err(Error::Internal("threshold enclosure failed to settle".into()))
}

/// `[lo, hi]` with `ln(x) * 2^prec` in the interval; requires `x >= 1`.
fn ln_enclosure(x: &BigUint, prec: u64) -> (BigUint, BigUint) {
    let scale = BigUint::one() << prec;
    if x.is_one() {
        return (BigUint::zero(), BigUint::zero());
    }
    // x = 2^k * t with t in [1, 2)
    let k = x.bits() - 1;
    let shifted = x << prec;
    let t_lo: BigUint = &shifted >> k;
    let t_hi = if prec >= k { t_lo.clone() } else { &t_lo + 1u32 };
    // u = (t - 1) / (t + 1), increasing in t
    let u_lo = ((&t_lo - &scale) << prec) / (&t_hi + &scale);
    let u_hi = (((&t_hi - &scale) << prec) / (&t_lo + &scale)) + 1u32;
    let (at_lo, at_hi) = atanh_enclosure(&u_lo, &u_hi, prec);
    let (l2_lo, l2_hi) = ln2_enclosure(prec);
    // ln x = 2 * atanh(u) + k * ln 2
    ((at_lo << 1) + l2_lo * k, (at_hi << 1) + l2_hi * k)
}

/// `ln 2 = 2 * atanh(1/3)`.
fn ln2_enclosure(prec: u64) -> (BigUint, BigUint) {
    let scale = BigUint::one() << prec;
    let u_lo = &scale / 3u32;
    let u_hi = &u_lo + 1u32;
    let (lo, hi) = atanh_enclosure(&u_lo, &u_hi, prec);
    (lo << 1, hi << 1)
}

/// Series `atanh(u) = sum u^{2n+1} / (2n+1)` for `u in [0, 0.34]`, where
/// consecutive terms shrink by at least a factor of 8.
fn atanh_enclosure(u_lo: &BigUint, u_hi: &BigUint, prec: u64) -> (BigUint, BigUint) {
    let usq_lo = (u_lo * u_lo) >> prec;
    let usq_hi = ((u_hi * u_hi) >> prec) + 1u32;
    let mut term_lo = u_lo.clone();
    let mut term_hi = u_hi.clone();
    let mut sum_lo = u_lo.clone();
    let mut sum_hi = u_hi.clone();
    let mut n = 1u64;
    loop {
        term_lo = (&term_lo * &usq_lo) >> prec;
        term_hi = ((&term_hi * &usq_hi) >> prec) + 1u32;
        n += 2;
        sum_lo += &term_lo / n;
        sum_hi += &term_hi / n + 1u32;
        if term_hi <= BigUint::from(16u32) {
            break;
        }
    }
    // geometric tail plus accumulated rounding, well under 64 ulps
    (sum_lo, sum_hi + 64u32)
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

fn saturating_sub(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        BigUint::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn known_ceilings() {
        // ceil((40/3) * ln 100) = 62
        assert_eq!(ceil_ratio_ln(40, 3, &b(100), &b(1)).unwrap(), 62);
        // ceil((40 * 7 / 3) * ln 2^20) = 1294
        assert_eq!(ceil_ratio_ln(280, 3, &(b(1) << 20), &b(1)).unwrap(), 1294);
        // ceil(8 * ln 20) = ceil(23.966) = 24
        assert_eq!(ceil_ratio_ln(8, 1, &b(20), &b(1)).unwrap(), 24);
        // ceil(8 * ln(1)) = 0, ceil(0 * ln x) = 0
        assert_eq!(ceil_ratio_ln(8, 1, &b(1), &b(1)).unwrap(), 0);
        assert_eq!(ceil_ratio_ln(0, 3, &b(100), &b(1)).unwrap(), 0);
        // fraction argument: ceil(8 * ln(20/3)) = ceil(15.17..) = 16
        assert_eq!(ceil_ratio_ln(8, 1, &b(20), &b(3)).unwrap(), 16);
    }

    #[test]
    fn matches_f64_away_from_ties() {
        for x in [2u64, 3, 5, 17, 62, 101, 860, 1843, 65536, 1_000_000] {
            for (num, den) in [(1u64, 1u64), (8, 1), (40, 3), (7, 2)] {
                let exact = ceil_ratio_ln(num, den, &b(x), &b(1)).unwrap();
                let approx = num as f64 / den as f64 * (x as f64).ln();
                if (approx - approx.round()).abs() > 1e-6 {
                    assert_eq!(exact, approx.ceil() as u64, "x={x} c={num}/{den}");
                }
            }
        }
    }

    #[test]
    fn threshold_examples() {
        // 3 * 62 / (5 ln 62) = 9.0139...
        assert!(within_prime_sampling_threshold(9, 62).unwrap());
        assert!(!within_prime_sampling_threshold(10, 62).unwrap());
        assert!(!within_prime_sampling_threshold(24, 62).unwrap());
        // 3 * 1843 / (5 ln 1843) = 147.06...
        assert!(within_prime_sampling_threshold(147, 1843).unwrap());
        assert!(!within_prime_sampling_threshold(148, 1843).unwrap());
    }

    #[test]
    fn enclosures_are_tight_and_ordered() {
        for x in [2u64, 10, 1000, 1 << 40] {
            let (lo, hi) = ln_enclosure(&b(x), 128);
            assert!(lo <= hi);
            let width = &hi - &lo;
            assert!(width < (BigUint::one() << 32)); // far below 2^128 ulps
            let lo64: BigUint = lo >> 64;
            let got = u128::try_from(lo64).unwrap() as f64 / 2f64.powi(64);
            let want = (x as f64).ln();
            assert!((got - want).abs() <= 1e-12 * want.max(1.0), "x={x}");
        }
    }
}
