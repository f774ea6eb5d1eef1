//! The based quantum torus: noncommutative Laurent polynomials with an
//! exact right division.
//!
//! Fix a skew-symmetric bilinear form Λ on Z^n with values in (1/d)Z. The
//! quantum torus has a distinguished scalar basis of *normalized monomials*
//! X^((a)), a in Z^n, multiplying by
//!
//! ```text
//!     X^((a)) · X^((b)) = q^{Λ(a,b)/2} · X^((a+b))
//! ```
//!
//! so that X^((a))·X^((-a)) = 1 and each X^((a)) is fixed by the bar
//! involution q^{1/2} -> q^{-1/2}. In terms of the raw generators
//! X_i = X^((e_i)) one has X^((a)) = q^{-1/2 Σ_{i<j} λ_ij a_i a_j}
//! X_1^{a_1} ··· X_n^{a_n}; the equivalent form with the opposite sign and
//! λ_ji in place of λ_ij is the same number by skew-symmetry, so only this
//! one formula is implemented.
//!
//! A [`TorusElement`] is a finite scalar combination of normalized
//! monomials. Exact right division ([`TorusElement::exact_div_right`])
//! eliminates leading terms under the lexicographic exponent order; it is
//! how a cluster variable produced by an exchange relation is recovered as
//! a genuine Laurent polynomial.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IMat;
use crate::scalar::QScalar;

/// A skew-symmetric form Λ on Z^n with entries in (1/d)Z, stored exactly as
/// the integer matrix d·Λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewForm {
    n: usize,
    d: u32,
    /// `lamd[i][j] = d · λ_ij`, skew-symmetric with zero diagonal.
    lamd: IMat,
}

impl SkewForm {
    /// Build from the integer matrix `d·λ`. Fails unless the matrix is
    /// skew-symmetric with zero diagonal.
    pub fn new(d: u32, lamd: IMat) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("skew form denominator must be positive".into()));
        }
        let n = lamd.len();
        for (i, row) in lamd.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid("skew form matrix must be square".into()));
            }
            for j in 0..n {
                if lamd[i][j] != -lamd[j][i] {
                    return Err(Error::Invalid(format!(
                        "form is not skew-symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(SkewForm { n, d, lamd })
    }

    /// Convenience constructor for an integer-valued form (d = 1).
    pub fn from_integer(lam: IMat) -> Result<Self> {
        Self::new(1, lam)
    }

    /// Rank of the ambient lattice.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Common denominator d of the form values.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// The stored integer matrix d·λ.
    pub fn lamd(&self) -> &IMat {
        &self.lamd
    }

    /// `d·Λ(e,f)` as an exact integer. Since q-power keys at scale d mean
    /// exponent key/(2d), this integer is exactly the key of q^{Λ(e,f)/2}.
    pub fn pairing(&self, e: &[i64], f: &[i64]) -> i64 {
        assert_eq!(e.len(), self.n, "vector length must match form rank");
        assert_eq!(f.len(), self.n, "vector length must match form rank");
        let mut s = 0i64;
        for i in 0..self.n {
            if e[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                s += e[i] * self.lamd[i][j] * f[j];
            }
        }
        s
    }

    /// The scalar q^{Λ(e,f)/2}.
    pub fn half_pairing_power(&self, e: &[i64], f: &[i64]) -> QScalar {
        QScalar::q_power(self.d, self.pairing(e, f))
    }
}

/// An element of the based quantum torus over a fixed [`SkewForm`]: a
/// finite scalar combination of normalized monomials X^((a)).
///
/// Invariant: no stored zero scalars. Canonical term order is
/// lexicographically descending on exponent vectors (iteration, display and
/// serialization all use it).
#[derive(Debug, Clone)]
pub struct TorusElement {
    form: SkewForm,
    terms: BTreeMap<Vec<i64>, QScalar>,
}

impl TorusElement {
    pub fn zero(form: &SkewForm) -> Self {
        TorusElement { form: form.clone(), terms: BTreeMap::new() }
    }

    pub fn one(form: &SkewForm) -> Self {
        Self::monomial(form, &vec![0; form.n()])
    }

    /// The normalized basis monomial X^((a)).
    pub fn monomial(form: &SkewForm, a: &[i64]) -> Self {
        Self::term(form, a, QScalar::one(form.d()))
    }

    /// The i-th generator X_i = X^((e_i)).
    pub fn generator(form: &SkewForm, i: usize) -> Self {
        assert!(i < form.n(), "generator index out of range");
        let mut a = vec![0; form.n()];
        a[i] = 1;
        Self::monomial(form, &a)
    }

    /// The single term c·X^((a)).
    pub fn term(form: &SkewForm, a: &[i64], c: QScalar) -> Self {
        assert_eq!(a.len(), form.n(), "exponent length must match form rank");
        let mut el = Self::zero(form);
        if !c.is_zero() {
            el.terms.insert(a.to_vec(), c);
        }
        el
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of X^((a)) (zero if absent).
    pub fn coeff(&self, a: &[i64]) -> QScalar {
        self.terms.get(a).cloned().unwrap_or_else(|| QScalar::zero(self.form.d()))
    }

    /// Iterate terms in canonical (lex-descending) order.
    pub fn iter(&self) -> impl Iterator<Item = (&[i64], &QScalar)> {
        self.terms.iter().rev().map(|(a, c)| (a.as_slice(), c))
    }

    fn insert_add(&mut self, a: Vec<i64>, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn assert_same_form(&self, other: &Self) {
        assert_eq!(
            self.form, other.form,
            "torus elements live over different skew forms"
        );
    }

    /// Multiply every term by the scalar c.
    pub fn scalar_mul(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(&self.form);
        for (a, x) in self.terms.iter() {
            out.insert_add(a.clone(), x * c);
        }
        out
    }

    /// Nonnegative integer power (repeated multiplication).
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.form);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The bar involution: q^{1/2} -> q^{-1/2} on scalars, fixing every
    /// normalized monomial. An involution.
    pub fn bar(&self) -> Self {
        let mut out = Self::zero(&self.form);
        for (a, c) in self.terms.iter() {
            out.terms.insert(a.clone(), c.bar());
        }
        out
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(|c| c.is_bar_invariant())
    }

    /// True when every integer coefficient of every scalar is nonnegative.
    pub fn coeffs_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c.coeffs_nonnegative())
    }

    /// Exact right division: the unique Q with `self = Q · divisor`, found
    /// by leading-term elimination under lexicographic exponent order.
    ///
    /// In the torus, the lex-greatest term of a product is the product of
    /// the factors' lex-greatest terms, so each elimination step is forced.
    /// If no exact quotient exists the remainder never reaches zero; a step
    /// budget of `numerator terms × divisor terms + 64` converts that into
    /// [`Error::NonExactDivision`] (legitimate quotients at every call site
    /// have nonnegative coefficients, which keeps them within the budget).
    pub fn exact_div_right(&self, divisor: &Self) -> Result<Self> {
        self.assert_same_form(divisor);
        if divisor.is_zero() {
            return Err(Error::NonExactDivision("division by zero element".into()));
        }
        let mut rem = self.clone();
        let mut quo = Self::zero(&self.form);
        let budget = self.num_terms() * divisor.num_terms() + 64;
        let (da, dc) = {
            let (a, c) = divisor.terms.iter().next_back().unwrap();
            (a.clone(), c.clone())
        };
        let mut steps = 0usize;
        while let Some((ra, rc)) = rem.terms.iter().next_back().map(|(a, c)| (a.clone(), c.clone())) {
            steps += 1;
            if steps > budget {
                return Err(Error::NonExactDivision(format!(
                    "no Laurent quotient within {budget} elimination steps"
                )));
            }
            let qe: Vec<i64> = ra.iter().zip(&da).map(|(r, d)| r - d).collect();
            // Leading terms multiply: rc = qc · dc · q^{Λ(qe,da)/2}.
            let untwisted =
                &rc * &QScalar::q_power(self.form.d(), -self.form.pairing(&qe, &da));
            let qc = untwisted.exact_div(&dc).map_err(|_| {
                Error::NonExactDivision("leading scalar does not divide exactly".into())
            })?;
            quo.insert_add(qe.clone(), qc.clone());
            let piece = Self::term(&self.form, &qe, qc);
            rem = &rem - &(&piece * divisor);
        }
        Ok(quo)
    }

    /// Restrict every exponent vector to the coordinates in `keep` (in
    /// order), reinterpreting over `target`; scalars are carried across
    /// unchanged and colliding terms add.
    pub fn project(&self, keep: &[usize], target: &SkewForm) -> Self {
        assert_eq!(keep.len(), target.n(), "projection must match target rank");
        let mut out = Self::zero(target);
        for (a, c) in self.terms.iter() {
            let b: Vec<i64> = keep.iter().map(|&i| a[i]).collect();
            out.insert_add(b, c.clone());
        }
        out
    }

    /// Render in LaTeX notation, e.g. `q^{1/2}X^{(1,-1)} + X^{(0,1)}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (a, c) in self.iter() {
            let mono = if a.iter().all(|&x| x == 0) {
                String::new()
            } else {
                let body = a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("X^{{({body})}}")
            };
            let coeff = render_scalar_latex(c);
            let term = match (coeff.as_str(), mono.is_empty()) {
                ("1", false) => mono,
                (_, true) => coeff,
                (_, false) => format!("{coeff}{mono}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }

    /// Serialize to the canonical JSON form
    /// `{"d": .., "terms": [{"exp": [..], "coeff": [{"hp": .., "c": ".."}]}]}`
    /// with terms lex-descending and scalar keys ascending.
    pub fn to_json(&self) -> serde_json::Value {
        let mut scale = self.form.d();
        for c in self.terms.values() {
            scale = num_integer::lcm(scale, c.scale());
        }
        let terms: Vec<TermDto> = self
            .iter()
            .map(|(a, c)| {
                let c = c.rescaled(scale);
                TermDto {
                    exp: a.to_vec(),
                    coeff: c
                        .iter()
                        .map(|(k, v)| CoeffDto { hp: k, c: v.to_string() })
                        .collect(),
                }
            })
            .collect();
        serde_json::to_value(ElementDto { d: scale, terms }).expect("DTO serializes")
    }

    /// Parse the canonical JSON form back over a given skew form.
    pub fn from_json(form: &SkewForm, v: &serde_json::Value) -> Result<Self> {
        let dto: ElementDto = serde_json::from_value(v.clone())
            .map_err(|e| Error::Invalid(format!("malformed torus element JSON: {e}")))?;
        let mut out = Self::zero(form);
        for t in dto.terms {
            if t.exp.len() != form.n() {
                return Err(Error::Invalid(format!(
                    "exponent length {} does not match rank {}",
                    t.exp.len(),
                    form.n()
                )));
            }
            let mut c = QScalar::zero(dto.d);
            for co in t.coeff {
                let v: num_bigint::BigInt = co
                    .c
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad integer literal {:?}", co.c)))?;
                c = &c + &QScalar::term(dto.d, co.hp, v);
            }
            out.insert_add(t.exp, c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementDto {
    d: u32,
    terms: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    exp: Vec<i64>,
    coeff: Vec<CoeffDto>,
}

#[derive(Serialize, Deserialize)]
struct CoeffDto {
    hp: i64,
    c: String,
}

fn render_scalar_latex(c: &QScalar) -> String {
    if c.num_terms() > 1 {
        return format!("\\left({}\\right)", render_scalar_latex_single(c));
    }
    render_scalar_latex_single(c)
}

fn render_scalar_latex_single(c: &QScalar) -> String {
    // Reuse the text renderer but swap q^(a/b) for q^{a/b}.
    c.to_string().replace("q^(", "q^{").replace(')', "}")
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl std::ops::Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        let mut out = TorusElement::zero(&self.form);
        for (a, c) in self.terms.iter() {
            out.terms.insert(a.clone(), -c);
        }
        out
    }
}

impl std::ops::Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.assert_same_form(rhs);
        let mut out = self.clone();
        for (a, c) in rhs.terms.iter() {
            out.insert_add(a.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.assert_same_form(rhs);
        let mut out = TorusElement::zero(&self.form);
        for (a, ca) in self.terms.iter() {
            for (b, cb) in rhs.terms.iter() {
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let twist = self.form.half_pairing_power(a, b);
                out.insert_add(e, &(ca * cb) * &twist);
            }
        }
        out
    }
}

impl fmt::Display for TorusElement {
    /// Canonical text: terms lex-descending, scalars ascending in q-power,
    /// multi-term scalars parenthesized: `(q + q^(-1)) X^(1,0) + X^(0,-1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = if a.iter().all(|&x| x == 0) {
                String::new()
            } else {
                let body = a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("X^({body})")
            };
            let cs = c.to_string();
            match (c.num_terms(), c.is_one(), mono.is_empty()) {
                (_, _, true) => write!(f, "{cs}")?,
                (_, true, false) => write!(f, "{mono}")?,
                (1, false, false) => write!(f, "{cs} {mono}")?,
                (_, false, false) => write!(f, "({cs}) {mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// Assemble a torus element from (exponent, coefficient-terms) pairs,
    /// each coefficient term being (key, integer) at the form's scale.
    pub(crate) fn elem(form: &SkewForm, terms: &[(Vec<i64>, &[(i64, i64)])]) -> TorusElement {
        let mut out = TorusElement::zero(form);
        for (exp, coeffs) in terms {
            let mut s = QScalar::zero(form.d());
            for &(k, c) in *coeffs {
                s = &s + &QScalar::term(form.d(), k, c);
            }
            out = &out + &TorusElement::term(form, exp, s);
        }
        out
    }
}
