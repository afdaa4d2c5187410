//! Fixed-width evaluation paths for the exhaustive grids.
//!
//! `K1` collected by powers of `y` gives five coefficient polynomials
//! `gamma_0, gamma_2, ..., gamma_8` in `(x1, x2, x3)` (odd powers vanish).
//! From the `z`-collection defining `K2` one gets, by rearranging the
//! binomial sums,
//!
//! ```text
//! K2(u, x, p, r) = sum_t gamma_2t(x) * (p*u - r)^(2t) * p^(8-2t)
//! K (y, x, p, r, n, v) = K2(y - n*v, x, p, r)
//! ```
//!
//! so a grid cell needs only the five gamma values and a Horner pass per
//! scanned `y`. The suites assert agreement with the expanded polynomials
//! on random points before trusting these paths; every grid stays far
//! inside i128 range (bounds are documented at the call sites).

use num_bigint::BigInt;

use crate::poly::Polynomial;

/// The y-collected coefficients of `K1` with i128 coefficients.
/// `gammas[t]` holds the monomials of the coefficient of `y^(2t)` as
/// `(coefficient, x1/x2/x3 exponents)`.
pub struct K1Profile {
    gammas: [Vec<(i128, [u32; 3])>; 5],
}

impl K1Profile {
    /// # Panics
    /// Panics if `k1` has an odd `y`-power or a `y`-degree above 8 — both
    /// impossible for the sign-product construction.
    pub fn new(k1: &Polynomial) -> Self {
        assert_eq!(k1.arity(), 4);
        let mut gammas: [Vec<(i128, [u32; 3])>; 5] = Default::default();
        for m in k1.terms() {
            let ey = m.exponents[0];
            assert!(ey % 2 == 0 && ey <= 8, "y-power {ey} out of shape");
            let c = i128::try_from(&m.coefficient).expect("K1 coefficients are small");
            gammas[(ey / 2) as usize].push((c, [m.exponents[1], m.exponents[2], m.exponents[3]]));
        }
        K1Profile { gammas }
    }

    /// The five gamma values at `(x1, x2, x3)`.
    pub fn gamma_values(&self, x1: i128, x2: i128, x3: i128) -> [i128; 5] {
        let xs = [x1, x2, x3];
        std::array::from_fn(|t| {
            self.gammas[t]
                .iter()
                .map(|(c, exps)| {
                    let mut v = *c;
                    for (x, &e) in xs.iter().zip(exps) {
                        for _ in 0..e {
                            v *= x;
                        }
                    }
                    v
                })
                .sum()
        })
    }
}

/// `K1(y, x)` from the gamma values: Horner in `y^2`.
pub fn k1_value(g: &[i128; 5], y: i128) -> i128 {
    let t = y * y;
    (((g[4] * t + g[3]) * t + g[2]) * t + g[1]) * t + g[0]
}

/// Per-`p` premultiplied coefficients `a[t] = gamma_2t * p^(8-2t)`, so that
/// `K` at a point with `m = p*(y - n*v) - r` is a Horner pass in `m^2`.
pub fn premultiply(g: &[i128; 5], p: i128) -> [i128; 5] {
    let p2 = p * p;
    let p4 = p2 * p2;
    [g[0] * p4 * p4, g[1] * p2 * p4, g[2] * p4, g[3] * p2, g[4]]
}

/// `K2(u, x, p, r)` with `m = p*u - r`, from premultiplied coefficients.
pub fn k_value(a: &[i128; 5], m: i128) -> i128 {
    let t = m * m;
    (((a[4] * t + a[3]) * t + a[2]) * t + a[1]) * t + a[0]
}

/// Gamma values as `BigInt`s, for cross-checking the i128 path.
pub fn k1_value_big(k1: &Polynomial, y: i64, x1: u64, x2: u64, x3: u64) -> BigInt {
    k1.evaluate(&[BigInt::from(y), BigInt::from(x1), BigInt::from(x2), BigInt::from(x3)])
        .expect("arity 4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kpoly::build_k1;

    #[test]
    fn profile_matches_expanded_k1() {
        let k1 = build_k1();
        let profile = K1Profile::new(&k1);
        for x1 in [0u64, 1, 3, 9, 50] {
            for x2 in [1u64, 4, 7] {
                for x3 in [0u64, 2, 16] {
                    let g = profile.gamma_values(x1 as i128, x2 as i128, x3 as i128);
                    for y in -12i64..=12 {
                        let fast = k1_value(&g, y as i128);
                        let slow = k1_value_big(&k1, y, x1, x2, x3);
                        assert_eq!(BigInt::from(fast), slow, "y={y} x=({x1},{x2},{x3})");
                    }
                }
            }
        }
    }

    #[test]
    fn k_value_matches_clearing_form() {
        // p^8 * K1(u - r/p) at integer u with p | r reduces to K1(u - r/p),
        // scaled; check against the expanded K1 on divisible cases.
        let k1 = build_k1();
        let profile = K1Profile::new(&k1);
        let g = profile.gamma_values(9, 1, 4);
        for p in 1i128..=4 {
            let a = premultiply(&g, p);
            for u in -6i128..=6 {
                for q in -3i128..=3 {
                    let r = p * q; // divisible case: K2(u,..) = p^8 K1(u - q)
                    let m = p * u - r;
                    let fast = k_value(&a, m);
                    let slow = k1_value_big(&k1, (u - q) as i64, 9, 1, 4);
                    let p8 = BigInt::from(p).pow(8);
                    assert_eq!(BigInt::from(fast), p8 * slow);
                }
            }
        }
    }
}
