//! Exact coefficient arithmetic in Z[q^{1/(2d)}, q^{-1/(2d)}].
//!
//! Every coefficient appearing in a quantum cluster expansion is a Laurent
//! polynomial in a fixed fractional power of q. A [`QScalar`] stores the
//! denominator scale `d` and a map from integer keys `k` to nonzero integer
//! coefficients, where key `k` encodes the exponent `k / (2d)`. With `d = 1`
//! the representable powers are the half-integers (q^{±1/2}, q^{±1}, ...);
//! larger `d` arises when the skew form has non-integer entries.
//!
//! Scalars with different scales interoperate by rescaling to the least
//! common multiple, and equality is scale-independent.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// A Laurent polynomial in q^{1/(2d)} with arbitrary-precision integer
/// coefficients.
///
/// Invariant: `terms` never stores a zero coefficient; the empty map is the
/// zero scalar.
#[derive(Debug, Clone)]
pub struct QScalar {
    scale: u32,
    terms: BTreeMap<i64, BigInt>,
}

impl QScalar {
    /// The zero scalar at the given denominator scale.
    pub fn zero(scale: u32) -> Self {
        assert!(scale >= 1, "denominator scale must be positive");
        QScalar { scale, terms: BTreeMap::new() }
    }

    /// The scalar 1.
    pub fn one(scale: u32) -> Self {
        Self::from_int(scale, 1)
    }

    /// An integer constant.
    pub fn from_int(scale: u32, v: impl Into<BigInt>) -> Self {
        Self::term(scale, 0, v.into())
    }

    /// The single term `c * q^{k/(2d)}`.
    pub fn term(scale: u32, k: i64, c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(scale);
        let c = c.into();
        if !c.is_zero() {
            s.terms.insert(k, c);
        }
        s
    }

    /// The pure power `q^{k/(2d)}`.
    pub fn q_power(scale: u32, k: i64) -> Self {
        Self::term(scale, k, 1)
    }

    /// Denominator scale `d` (exponents are multiples of `1/(2d)`).
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Iterate `(k, coefficient)` pairs in ascending q-power order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent key, if nonzero.
    pub fn max_key(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent key, if nonzero.
    pub fn min_key(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Coefficient at key `k` (zero if absent).
    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Rewrite at a new scale, which must be a multiple of the current one.
    pub fn rescaled(&self, new_scale: u32) -> Self {
        assert!(
            new_scale % self.scale == 0,
            "rescale target {new_scale} must be a multiple of {}",
            self.scale
        );
        let f = (new_scale / self.scale) as i64;
        let terms = self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect();
        QScalar { scale: new_scale, terms }
    }

    /// Minimal-scale canonical form: divides the scale and all keys by the
    /// largest common factor that keeps the scale integral.
    pub fn reduced(&self) -> Self {
        if self.terms.is_empty() {
            return Self::zero(1);
        }
        let mut g = self.scale as i64;
        for k in self.terms.keys() {
            g = g.gcd(k);
            if g == 1 {
                return self.clone();
            }
        }
        let terms = self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect();
        QScalar { scale: self.scale / g as u32, terms }
    }

    /// Bring two scalars to a common scale.
    fn unified(a: &Self, b: &Self) -> (Self, Self) {
        if a.scale == b.scale {
            return (a.clone(), b.clone());
        }
        let l = (a.scale as u64).lcm(&(b.scale as u64)) as u32;
        (a.rescaled(l), b.rescaled(l))
    }

    fn insert_add(terms: &mut BTreeMap<i64, BigInt>, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiply by the pure power `q^{k/(2d)}`.
    pub fn shifted(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect();
        QScalar { scale: self.scale, terms }
    }

    /// The involution q^{1/2} -> q^{-1/2} (negates every exponent).
    pub fn bar(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (-k, c.clone())).collect();
        QScalar { scale: self.scale, terms }
    }

    /// True when fixed by [`QScalar::bar`].
    pub fn is_bar_invariant(&self) -> bool {
        self == &self.bar()
    }

    /// True when every integer coefficient is nonnegative.
    pub fn coeffs_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact division of Laurent polynomials; fails with
    /// [`Error::NonExactDivision`] if `self` is not a multiple of `rhs`.
    pub fn exact_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::NonExactDivision("division by zero scalar".into()));
        }
        let (mut rem, den) = Self::unified(self, rhs);
        let scale = rem.scale;
        let mut quo = Self::zero(scale);
        if rem.is_zero() {
            return Ok(quo);
        }
        // For an exact quotient, key ranges add: min and max keys of the
        // quotient are pinned by those of the operands. Stepping outside that
        // window proves inexactness without unbounded descent.
        let min_allowed = rem.min_key().unwrap() - den.min_key().unwrap();
        let (dk, dc) = {
            let k = den.max_key().unwrap();
            (k, den.coeff(k))
        };
        while !rem.is_zero() {
            let rk = rem.max_key().unwrap();
            let qk = rk - dk;
            if qk < min_allowed {
                return Err(Error::NonExactDivision(
                    "remainder degree window exhausted".into(),
                ));
            }
            let rc = rem.coeff(rk);
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return Err(Error::NonExactDivision(
                    "leading coefficient does not divide".into(),
                ));
            }
            Self::insert_add(&mut quo.terms, qk, qc.clone());
            for (j, c) in den.iter() {
                Self::insert_add(&mut rem.terms, qk + j, -(c * &qc));
            }
        }
        Ok(quo)
    }

    /// Evaluate exactly at the integer `q0 >= 2`; requires every exponent to
    /// be an integer (key divisible by `2d`).
    pub fn specialize_rational(&self, q0: i64) -> Result<BigRational> {
        if q0 == 0 {
            return Err(Error::Invalid("cannot specialize at q = 0".into()));
        }
        let step = 2 * self.scale as i64;
        let mut acc = BigRational::zero();
        let base = BigRational::from_integer(BigInt::from(q0));
        for (k, c) in self.iter() {
            if k % step != 0 {
                return Err(Error::FractionalPower(format!(
                    "exponent {k}/{step} is not an integer"
                )));
            }
            let e = k / step;
            acc += BigRational::from_integer(c.clone()) * Pow::pow(base.clone(), e as i32);
        }
        Ok(acc)
    }

    /// Evaluate exactly at the integer `q0`, requiring an integer result.
    pub fn specialize_integer(&self, q0: i64) -> Result<BigInt> {
        let v = self.specialize_rational(q0)?;
        if !v.is_integer() {
            return Err(Error::FractionalPower(format!(
                "value {v} at q = {q0} is not an integer"
            )));
        }
        Ok(v.to_integer())
    }

    /// Evaluate at q = q0 inside Z[sqrt(q0)]: returns (a, b) with value
    /// a + b*sqrt(q0), both exact rationals. Requires all exponents to be
    /// half-integers.
    pub fn specialize_sqrt(&self, q0: i64) -> Result<(BigRational, BigRational)> {
        let mut rat = BigRational::zero();
        let mut irr = BigRational::zero();
        let base = BigRational::from_integer(BigInt::from(q0));
        for (k, c) in self.iter() {
            if k % self.scale as i64 != 0 {
                return Err(Error::FractionalPower(format!(
                    "exponent key {k} at scale {} is not a half-integer power",
                    self.scale
                )));
            }
            let t = k / self.scale as i64; // exponent = t/2
            let coeff = BigRational::from_integer(c.clone());
            if t.rem_euclid(2) == 0 {
                rat += coeff * Pow::pow(base.clone(), (t / 2) as i32);
            } else {
                irr += coeff * Pow::pow(base.clone(), ((t - 1) / 2) as i32);
            }
        }
        Ok((rat, irr))
    }

    /// Serialize to `{"scale": .., "terms": [{"hp": .., "c": ".."}]}` with
    /// keys ascending (hp counts half-powers times the scale).
    pub fn to_json(&self) -> serde_json::Value {
        let r = self.reduced();
        serde_json::json!({
            "scale": r.scale,
            "terms": r.iter().map(|(k, c)| serde_json::json!({
                "hp": k,
                "c": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parse the canonical JSON form.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("malformed scalar JSON: {what}"));
        let scale = v["scale"].as_u64().ok_or_else(|| bad("scale"))? as u32;
        if scale == 0 {
            return Err(bad("zero scale"));
        }
        let mut out = Self::zero(scale);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let k = t["hp"].as_i64().ok_or_else(|| bad("hp"))?;
            let c: BigInt = t["c"]
                .as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("coefficient"))?;
            out = &out + &Self::term(scale, k, c);
        }
        Ok(out)
    }

    /// Render one exponent key as a q-power string with explicit fractions,
    /// e.g. `q`, `q^2`, `q^(3/2)`, `q^(-1/4)`.
    fn power_string(&self, k: i64) -> String {
        debug_assert!(k != 0);
        let den = 2 * self.scale as i64;
        let g = k.gcd(&den);
        let (num, den) = (k / g, den / g);
        if den == 1 {
            if num == 1 {
                "q".to_string()
            } else if num >= 0 {
                format!("q^{num}")
            } else {
                format!("q^({num})")
            }
        } else {
            format!("q^({num}/{den})")
        }
    }
}

impl PartialEq for QScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.scale == other.scale {
            return self.terms == other.terms;
        }
        let (a, b) = Self::unified(self, other);
        a.terms == b.terms
    }
}

impl Eq for QScalar {}

impl std::ops::Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c)).collect();
        QScalar { scale: self.scale, terms }
    }
}

impl std::ops::Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        let (mut a, b) = QScalar::unified(self, rhs);
        for (k, c) in b.terms {
            QScalar::insert_add(&mut a.terms, k, c);
        }
        a
    }
}

impl std::ops::Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        let (a, b) = QScalar::unified(self, rhs);
        let mut out = QScalar::zero(a.scale);
        for (j, c) in a.iter() {
            for (k, d) in b.iter() {
                QScalar::insert_add(&mut out.terms, j + k, c * d);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<QScalar> for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl std::ops::Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl fmt::Display for QScalar {
    /// Terms in ascending q-power order: `1 + q + q^(3/2)`, `2q^(-1/2) - q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.power_string(k))?;
            } else {
                write!(f, "{mag}{}", self.power_string(k))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_scale_unification() {
        // q^{1/2} at scale 1 equals q^{2/4} at scale 2.
        let a = QScalar::q_power(1, 1);
        let b = QScalar::q_power(2, 2);
        assert_eq!(a, b);

        let s = &a + &QScalar::q_power(1, -1); // q^{1/2} + q^{-1/2}
        assert!(s.is_bar_invariant());
        assert_eq!((&s - &s), QScalar::zero(1));

        // (q^{1/2} + q^{-1/2})^2 = q + 2 + q^{-1}
        let sq = &s * &s;
        let expected = &(&QScalar::q_power(1, 2) + &QScalar::from_int(1, 2))
            + &QScalar::q_power(1, -2);
        assert_eq!(sq, expected);
    }

    #[test]
    fn exact_division_round_trips_products() {
        let a = &QScalar::q_power(1, 3) + &QScalar::from_int(1, 2); // q^{3/2} + 2
        let b = &QScalar::q_power(1, -1) - &QScalar::from_int(1, 7);
        let p = &a * &b;
        assert_eq!(p.exact_div(&b).unwrap(), a);
        assert_eq!(p.exact_div(&a).unwrap(), b);
    }

    #[test]
    fn inexact_division_is_rejected() {
        let a = &QScalar::q_power(1, 2) + &QScalar::one(1); // q + 1
        let b = &QScalar::q_power(1, 2) - &QScalar::one(1); // q - 1
        assert!(a.exact_div(&b).is_err());
        // 2 does not divide 3 coefficient-wise
        let three = QScalar::from_int(1, 3);
        let two = QScalar::from_int(1, 2);
        assert!(three.exact_div(&two).is_err());
    }

    #[test]
    fn specialization_requires_integer_powers() {
        let s = &QScalar::q_power(1, 2) + &QScalar::from_int(1, 1); // q + 1
        assert_eq!(s.specialize_integer(3).unwrap(), BigInt::from(4));

        let half = QScalar::q_power(1, 1); // q^{1/2}
        assert!(matches!(
            half.specialize_integer(3),
            Err(Error::FractionalPower(_))
        ));

        // q^{-1} at q = 2 is 1/2, not an integer.
        let inv = QScalar::q_power(1, -2);
        assert!(inv.specialize_integer(2).is_err());
        assert_eq!(
            inv.specialize_rational(2).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn display_uses_ascending_powers_and_explicit_fractions() {
        let s = &(&QScalar::q_power(1, 3) + &QScalar::q_power(1, -1))
            + &QScalar::from_int(1, 2);
        assert_eq!(s.to_string(), "q^(-1/2) + 2 + q^(3/2)");
        let t = &QScalar::q_power(2, 1) - &QScalar::from_int(2, 5);
        assert_eq!(t.to_string(), "-5 + q^(1/4)");
    }

    #[test]
    fn reduced_form_minimizes_scale() {
        let s = QScalar::term(2, 4, 3); // 3 q^{4/4} = 3q
        let r = s.reduced();
        assert_eq!(r.scale(), 1);
        assert_eq!(r, QScalar::term(1, 2, 3));
        assert_eq!(s, r);
    }
}
