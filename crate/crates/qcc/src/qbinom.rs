//! Quantum binomial coefficients, in two flavours.
//!
//! * The **symmetrized** binomial `[n r]` built from balanced quantum
//!   numbers `[m] = (Q^m - Q^{-m}) / (Q - Q^{-1})`. For `n >= r >= 0` it is
//!   a bar-invariant Laurent polynomial; negative `n` is supported via the
//!   same product formula (each factor `[-m] = -[m]`), which stays a Laurent
//!   polynomial.
//! * The **Gaussian** binomial `(n k)` built from `(Q^m - 1) / (Q - 1)`
//!   factors; at a prime power `Q = |F|` it counts k-dimensional subspaces
//!   of an n-dimensional F-space. Negative `n` evaluates by the same product
//!   formula (e.g. `(-1 0) = 1`, `(-1 1) = -Q^{-1}`).
//!
//! The two are linked by `[n r]_Q = Q^{-r(n-r)} (n r)_{Q^2}`, which the
//! tests verify on a grid.
//!
//! Both functions take the base as a power of q: the symmetrized binomial in
//! half-power units (base `q^{s/2}`, so `s = 2` means base q and `s = d`
//! means base `q^{d/2}`), the Gaussian binomial in whole-power units.

use crate::scalar::QScalar;

/// Balanced quantum number `[m]` at base `q^{s/2}`:
/// `Q^{m-1} + Q^{m-3} + ... + Q^{-(m-1)}` for positive `m`, `[0] = 0`,
/// `[-m] = -[m]`.
fn quantum_number(m: i64, s_half: i64) -> QScalar {
    let mut out = QScalar::zero(1);
    let (mag, sign) = if m >= 0 { (m, 1) } else { (-m, -1) };
    let mut e = mag - 1;
    while e >= -(mag - 1) {
        out = &out + &QScalar::term(1, e * s_half, sign);
        e -= 2;
    }
    out
}

/// Symmetrized quantum binomial `[n r]` at base `q^{s_half/2}`.
///
/// `r` must be nonnegative; `n` may be any integer. For `n >= r >= 0` the
/// result is bar-invariant and satisfies `[n r] = [n n-r]`; `[n 0] = 1`.
pub fn qbinom_sym(n: i64, r: i64, s_half: i64) -> QScalar {
    assert!(r >= 0, "lower index of a quantum binomial must be nonnegative");
    assert!(s_half != 0, "binomial base must be a nonzero power of q");
    let mut num = QScalar::one(1);
    for i in 0..r {
        num = &num * &quantum_number(n - i, s_half);
    }
    let mut den = QScalar::one(1);
    for i in 1..=r {
        den = &den * &quantum_number(i, s_half);
    }
    num.exact_div(&den)
        .expect("quantum binomial product is always divisible by [r]!")
}

/// Gaussian binomial `(n k)` at base `q^{power}`.
///
/// `k` must be nonnegative; `n` may be any integer. `(n 0) = 1` for every
/// `n`; `(n k) = 0` for `0 <= n < k`; at a prime power `q0` the value of
/// `(n k)` counts the k-dimensional subspaces of an n-dimensional space
/// over the field with `q0^power` elements.
pub fn gauss_binom(n: i64, k: i64, power: u32) -> QScalar {
    assert!(k >= 0, "lower index of a Gaussian binomial must be nonnegative");
    assert!(power >= 1, "binomial base must be a positive power of q");
    let p = 2 * power as i64; // whole powers of q^power, in key units
    let mut num = QScalar::one(1);
    let mut den = QScalar::one(1);
    for i in 1..=k {
        num = &num * &(&QScalar::q_power(1, (n - k + i) * p) - &QScalar::one(1));
        den = &den * &(&QScalar::q_power(1, i * p) - &QScalar::one(1));
    }
    num.exact_div(&den)
        .expect("Gaussian binomial product is always divisible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;

    /// Independent oracle: evaluate the symmetrized binomial as an exact
    /// rational function of the base at `q0`, without any polynomial
    /// arithmetic.
    fn sym_binom_at(n: i64, r: i64, q0: i64) -> BigRational {
        fn qnum(m: i64, q0: i64) -> BigRational {
            // (q0^m - q0^{-m}) / (q0 - q0^{-1})
            let q = BigRational::from_integer(BigInt::from(q0));
            let num = q.pow(m as i32) - q.pow(-m as i32);
            let den = q.pow(1) - q.pow(-1);
            num / den
        }
        let mut v = BigRational::one();
        for i in 0..r {
            v *= qnum(n - i, q0);
        }
        for i in 1..=r {
            v /= qnum(i, q0);
        }
        v
    }

    /// Independent oracle for the Gaussian binomial at base `q0`.
    fn gauss_binom_at(n: i64, k: i64, q0: i64) -> BigRational {
        let q = BigRational::from_integer(BigInt::from(q0));
        let mut v = BigRational::one();
        for i in 1..=k {
            v *= q.pow((n - k + i) as i32) - BigRational::one();
            v /= q.pow(i as i32) - BigRational::one();
        }
        v
    }

    #[test]
    fn forced_small_values() {
        // [2 1] at base q is the two-term sum q + q^{-1}.
        let b = qbinom_sym(2, 1, 2);
        assert_eq!(b, &QScalar::q_power(1, 2) + &QScalar::q_power(1, -2));
        // [n 0] = 1 for any n, including negative.
        for n in [-5, -1, 0, 3, 9] {
            assert!(qbinom_sym(n, 0, 2).is_one());
            assert!(gauss_binom(n, 0, 1).is_one());
        }
        // (2 1) at base q is 1 + q; (0 1) = 0.
        assert_eq!(gauss_binom(2, 1, 1), &QScalar::one(1) + &QScalar::q_power(1, 2));
        assert!(gauss_binom(0, 1, 1).is_zero());
    }

    #[test]
    fn expanded_values_match_rational_oracle() {
        // [4 2] at base q: q^4 + q^2 + 2 + q^-2 + q^-4.
        let b = qbinom_sym(4, 2, 2);
        let mut expect = QScalar::from_int(1, 2);
        for k in [8, 4, -4, -8] {
            expect = &expect + &QScalar::q_power(1, k);
        }
        assert_eq!(b, expect);
        // [-1 1] at base q: (q^{-1} - q)/(q - q^{-1}) = -1.
        assert_eq!(qbinom_sym(-1, 1, 2), QScalar::from_int(1, -1));
        // (3 1) at base q^2: q^4 + q^2 + 1.
        let g = gauss_binom(3, 1, 2);
        let expect = &(&QScalar::one(1) + &QScalar::q_power(1, 4)) + &QScalar::q_power(1, 8);
        assert_eq!(g, expect);

        // Cross-check a full grid (including negative upper index) against
        // the rational-function oracle at several evaluation points.
        for n in -6..=8 {
            for r in 0..=6 {
                let sym = qbinom_sym(n, r, 2);
                let gau = gauss_binom(n, r, 1);
                for q0 in [2, 3, 5] {
                    assert_eq!(
                        sym.specialize_rational(q0).unwrap(),
                        sym_binom_at(n, r, q0),
                        "sym binom [{n} {r}] at q={q0}"
                    );
                    assert_eq!(
                        gau.specialize_rational(q0).unwrap(),
                        gauss_binom_at(n, r, q0),
                        "gauss binom ({n} {r}) at q={q0}"
                    );
                }
            }
        }
    }

    #[test]
    fn bar_invariance_and_symmetry() {
        for n in 0..=8 {
            for r in 0..=n {
                let b = qbinom_sym(n, r, 2);
                assert!(b.is_bar_invariant(), "[{n} {r}] should be bar-invariant");
                assert_eq!(b, qbinom_sym(n, n - r, 2), "[{n} {r}] = [{n} {}]", n - r);
            }
        }
        // The documented instance: bar([4 2]) = [4 2].
        let b = qbinom_sym(4, 2, 2);
        assert_eq!(b.bar(), b);
    }

    #[test]
    fn symmetrized_links_to_gaussian_at_squared_base() {
        // [n r]_q = q^{-r(n-r)} (n r)_{q^2} for 0 <= r <= n <= 8.
        for n in 0..=8 {
            for r in 0..=n {
                let lhs = qbinom_sym(n, r, 2);
                let rhs = gauss_binom(n, r, 2).shifted(-2 * r * (n - r));
                assert_eq!(lhs, rhs, "identity fails at n={n} r={r}");
            }
        }
    }

    #[test]
    fn fractional_bases_scale_exponents() {
        // [2 1] at base q^{1/2} is q^{1/2} + q^{-1/2}.
        let b = qbinom_sym(2, 1, 1);
        assert_eq!(b, &QScalar::q_power(1, 1) + &QScalar::q_power(1, -1));
        // [2 1] at base q^{3/2} is q^{3/2} + q^{-3/2}.
        let b = qbinom_sym(2, 1, 3);
        assert_eq!(b, &QScalar::q_power(1, 3) + &QScalar::q_power(1, -3));
    }
}
