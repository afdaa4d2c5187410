//! Exact integer primitives shared across the crate.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Floor of the square root of a non-negative integer, by Newton iteration.
///
/// No floating point is involved; the initial guess comes from the bit length
/// and the loop contracts monotonically once it overshoots.
///
/// # Panics
/// Panics if `n < 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    if n.is_zero() {
        return BigInt::zero();
    }
    // 2^ceil(bits/2) >= sqrt(n), so the iteration starts above the root.
    let mut r: BigInt = BigInt::from(1) << n.bits().div_ceil(2);
    loop {
        let next = (&r + n / &r) >> 1;
        if next >= r {
            return r;
        }
        r = next;
    }
}

/// True iff `v` is the square of a natural number.
pub fn is_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = isqrt(v);
    &r * &r == *v
}

/// Base-2 logarithm of `|v|`, accurate to roughly f64 precision.
///
/// Used only for the degree growth estimate, never for any exact identity.
/// `|v|` must be nonzero.
pub fn log2_abs(v: &BigInt) -> f64 {
    let mag = v.magnitude();
    assert!(!mag.is_zero(), "log2 of zero");
    let bits = mag.bits();
    if bits <= 53 {
        let lo: u64 = mag.try_into().expect("fits in u64");
        return (lo as f64).log2();
    }
    // Take the top 53 bits as a mantissa.
    let shift = bits - 53;
    let top: u64 = (mag >> shift).try_into().expect("53 bits fit in u64");
    (top as f64).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn isqrt_small_values() {
        for n in 0u64..2000 {
            let r = isqrt(&BigInt::from(n));
            let r: u64 = (&r).try_into().unwrap();
            assert!(r * r <= n, "floor property at {n}");
            assert!((r + 1) * (r + 1) > n, "tightness at {n}");
        }
    }

    #[test]
    fn isqrt_around_large_squares() {
        let base = BigInt::from(10u32).pow(40) + 12345u32;
        let sq = &base * &base;
        assert_eq!(isqrt(&sq), base);
        assert_eq!(isqrt(&(&sq - 1)), &base - 1);
        assert_eq!(isqrt(&(&sq + 1)), base);
    }

    #[test]
    fn is_square_examples() {
        assert!(is_square(&BigInt::from(9409))); // 97^2
        assert!(is_square(&BigInt::from(0)));
        assert!(!is_square(&BigInt::from(-4)));
        assert!(!is_square(&BigInt::from(193)));
    }

    #[test]
    fn log2_tracks_bit_length() {
        let v = BigInt::from(1u8) << 1000;
        assert!((log2_abs(&v) - 1000.0).abs() < 1e-9);
        let w = BigInt::from(-10);
        assert!((log2_abs(&w) - 10f64.log2()).abs() < 1e-12);
    }
}
