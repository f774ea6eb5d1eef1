//! The cluster character: expanding count tables into quantum torus
//! elements, the closed forms for the doubled-valuation series, the
//! coefficient-variable factorization, and the mutation compatibility
//! check between the two engines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::count::{CountMode, CountTable, KroneckerSide};
use crate::error::{Error, Result};
use crate::linalg::{rational_inverse, IMat};
use crate::qbinom::qbinom_sym;
use crate::quiver::{RootContext, ValuedQuiver};
use crate::scalar::QScalar;
use crate::seed::{CompatiblePair, QuantumSeed};
use crate::torus::{SkewForm, TorusElement};

/// Expand a count table into the quantum torus: the sum over the table's
/// support of A_e X^((*e - e* - *m)), where m is the table's class, the
/// stars are the one-sided Euler twists of the root context, and A_e is
/// the normalized value (tables in other modes are twisted on the fly by
/// q^(-<e, m-e>/2), integer-mode counts keeping that prefactor formal).
pub fn cc_expand(ctx: &RootContext, form: &SkewForm, table: &CountTable) -> Result<TorusElement> {
    let n = ctx.quiver().n();
    if form.n() != n || table.class.len() != n {
        return Err(Error::Invalid("rank mismatch between context, form and table".into()));
    }
    table.validate()?;
    let star_m = ctx.star_left(&table.class);
    let mut out = TorusElement::zero(form);
    for (e, value) in &table.entries {
        let coeff = match table.mode {
            CountMode::Normalized => value.clone(),
            CountMode::Polynomial | CountMode::IntegerAt(_) => {
                let rest: Vec<i64> =
                    table.class.iter().zip(e).map(|(&m, &x)| m - x).collect();
                value * &QScalar::q_power(1, -ctx.euler_form(e, &rest))
            }
        };
        let sl = ctx.star_left(e);
        let sr = ctx.star_right(e);
        let a: Vec<i64> = (0..n).map(|i| sl[i] - sr[i] - star_m[i]).collect();
        out = &out + &TorusElement::term(form, &a, coeff);
    }
    Ok(out)
}

/// The canonical two-vertex form: lambda_12 = 1 at scale 1. Every valued
/// quiver [[0, b], [-c, 0]] with d = (c, b) induces exactly this form.
pub fn rank2_form() -> SkewForm {
    SkewForm::new(1, vec![vec![0, 1], vec![-1, 0]]).expect("constant form is valid")
}

/// Independent literal implementation of the two-vertex expansion: for a
/// module with class (v1, v2) on the quiver [[0, b], [-c, 0]],
/// X = sum_e q^(-D_e/2) |Gr_e| X^((-v1 + b v2 - b e2, c e1 - v2)) with
/// D_e = c e1 (v1 - e1) - b (c e1 - e2)(v2 - e2). Normalized-mode tables
/// already carry the twist.
pub fn cc_expand_rank2(b: i64, c: i64, table: &CountTable) -> Result<TorusElement> {
    if table.class.len() != 2 {
        return Err(Error::Invalid("two-vertex expansion needs a rank-2 table".into()));
    }
    table.validate()?;
    let form = rank2_form();
    let (v1, v2) = (table.class[0], table.class[1]);
    let mut out = TorusElement::zero(&form);
    for (e, value) in &table.entries {
        let (e1, e2) = (e[0], e[1]);
        let coeff = match table.mode {
            CountMode::Normalized => value.clone(),
            CountMode::Polynomial | CountMode::IntegerAt(_) => {
                let d_e = c * e1 * (v1 - e1) - b * (c * e1 - e2) * (v2 - e2);
                value * &QScalar::q_power(1, -d_e)
            }
        };
        let a = vec![-v1 + b * v2 - b * e2, c * e1 - v2];
        out = &out + &TorusElement::term(&form, &a, coeff);
    }
    Ok(out)
}

/// Closed-form expansions for the doubled-valuation two-vertex series,
/// as elements of the canonical rank-2 torus. The preprojective side is
/// the variable below the initial cluster with denominator (n, n+1); the
/// preinjective side is the one above it with denominator (n+1, n).
pub fn kronecker_closed_form(n: i64, side: KroneckerSide) -> TorusElement {
    assert!(n >= 0, "series index must be nonnegative");
    let form = rank2_form();
    let mut out = match side {
        KroneckerSide::Preprojective => TorusElement::monomial(&form, &[n + 2, -n - 1]),
        KroneckerSide::Preinjective => TorusElement::monomial(&form, &[-n - 1, n + 2]),
    };
    for p in 0..=n {
        for r in 0..=(n - p) {
            let coeff = &qbinom_sym(n - r, p, 2) * &qbinom_sym(n + 1 - p, r, 2);
            let a = match side {
                KroneckerSide::Preprojective => vec![2 * r - n, 2 * p - n - 1],
                KroneckerSide::Preinjective => vec![2 * p - n - 1, 2 * r - n],
            };
            out = &out + &TorusElement::term(&form, &a, coeff);
        }
    }
    out
}

/// The coefficient-variable part of an expansion: an element of the
/// Z-variable torus (relations Z_i Z_j = q^(d_i b_ij) Z_j Z_i) presented
/// as an exponent-to-scalar map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFactor {
    pub entries: BTreeMap<Vec<i64>, QScalar>,
}

impl FFactor {
    pub fn constant_term_is_one(&self, n: usize) -> bool {
        self.entries.get(&vec![0; n]).is_some_and(|c| c.is_one())
    }

    pub fn coeffs_nonnegative(&self) -> bool {
        self.entries.values().all(|c| c.coeffs_nonnegative())
    }
}

/// Build the coefficient factorization from a count table: g = -*m and
/// F = 1 + sum_{e != 0} q^(<e,e>/2) |Gr_e| Z^((e)).
pub fn f_factor(ctx: &RootContext, table: &CountTable) -> Result<(Vec<i64>, FFactor)> {
    table.validate()?;
    let poly = table.to_polynomial(ctx)?;
    let g: Vec<i64> = ctx.star_left(&poly.class).iter().map(|&v| -v).collect();
    let mut entries = BTreeMap::new();
    for (e, count) in &poly.entries {
        let coeff = count * &QScalar::q_power(1, ctx.euler_form(e, e));
        entries.insert(e.clone(), coeff);
    }
    Ok((g, FFactor { entries }))
}

/// Substitute Z^((e)) -> X^((-Be)) and multiply by X^((g)) on the left:
/// sum_e coeff_e q^(Lambda(g, -Be)/2) X^((g - Be)).
pub fn recombine(form: &SkewForm, b: &IMat, g: &[i64], f: &FFactor) -> Result<TorusElement> {
    let n = form.n();
    if g.len() != n || b.len() != n {
        return Err(Error::Invalid("rank mismatch in recombination".into()));
    }
    let mut out = TorusElement::zero(form);
    for (e, coeff) in &f.entries {
        let be: Vec<i64> = (0..n).map(|i| (0..n).map(|j| b[i][j] * e[j]).sum()).collect();
        let a: Vec<i64> = (0..n).map(|i| g[i] - be[i]).collect();
        let twist = QScalar::q_power(form.d(), -form.pairing(g, &be));
        out = &out + &TorusElement::term(form, &a, coeff * &twist);
    }
    Ok(out)
}

/// Factor an arbitrary torus element through the column lattice of B:
/// divide off X^((g)) and solve g - a = Be for each exponent a. Fails with
/// `NotBCompatible` when some exponent does not land in the lattice cone.
pub fn b_compatible_check(x: &TorusElement, b: &IMat, g: &[i64]) -> Result<FFactor> {
    let n = x.form().n();
    if g.len() != n || b.len() != n {
        return Err(Error::Invalid("rank mismatch in factorization".into()));
    }
    let binv = rational_inverse(b).map_err(|_| {
        Error::NotBCompatible("exchange matrix is singular".into())
    })?;
    let mut entries = BTreeMap::new();
    for (a, coeff) in x.iter() {
        let diff: Vec<BigRational> = (0..n)
            .map(|i| BigRational::from_integer(BigInt::from(g[i] - a[i])))
            .collect();
        let mut e = Vec::with_capacity(n);
        for i in 0..n {
            let v: BigRational = (0..n).map(|j| &binv[i][j] * &diff[j]).sum();
            if !v.is_integer() {
                return Err(Error::NotBCompatible(format!(
                    "exponent {a:?} is not congruent to g modulo the column lattice"
                )));
            }
            let vi = v.to_integer().to_i64().ok_or_else(|| {
                Error::Invalid("lattice coordinate overflows".into())
            })?;
            if vi < 0 {
                return Err(Error::NotBCompatible(format!(
                    "exponent {a:?} needs a negative lattice coordinate"
                )));
            }
            e.push(vi);
        }
        let be: Vec<i64> = (0..n).map(|i| (0..n).map(|j| b[i][j] * e[j]).sum()).collect();
        let twist = QScalar::q_power(x.form().d(), x.form().pairing(g, &be));
        entries.insert(e, coeff * &twist);
    }
    Ok(FFactor { entries })
}

/// Check that expanding counts of a module over Q and re-expanding the
/// reflected module's counts over the mutated quiver give the same
/// ambient element once the mutated cluster is substituted back in.
pub fn cc_verify_mutation(
    q: &ValuedQuiver,
    i: usize,
    counts_n: &CountTable,
    counts_sin: &CountTable,
) -> Result<bool> {
    let pair = CompatiblePair::from_invertible(q.clone())?;
    let ctx = RootContext::new(q);
    let lhs = cc_expand(&ctx, pair.form(), counts_n)?;
    let seed = QuantumSeed::initial(pair).mutated(i)?;
    let qm = q.mutated(i);
    let ctx_m = RootContext::new(&qm);
    let formal = cc_expand(&ctx_m, seed.pair().form(), counts_sin)?;
    // A wrong table can make the substitution fall outside the torus;
    // that is a failed check, not a caller error.
    let rhs = match seed.evaluate(&formal) {
        Ok(v) => v,
        Err(Error::NonExactDivision(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(lhs == rhs)
}

/// Compare two torus elements after evaluating every coefficient in
/// Z[sqrt(q0)]: used to test integer-mode expansions against symbolic
/// ones at an actual field size.
pub fn specialized_equal(x: &TorusElement, y: &TorusElement, q0: i64) -> Result<bool> {
    let mut exps: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    exps.extend(x.iter().map(|(a, _)| a.to_vec()));
    exps.extend(y.iter().map(|(a, _)| a.to_vec()));
    for a in exps {
        if x.coeff(&a).specialize_sqrt(q0)? != y.coeff(&a).specialize_sqrt(q0)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{enumerate_subreps, kronecker_table, recursion_counts};
    use crate::rep::build_example_rep;
    use crate::torus::tests_support::elem;

    fn rank2_setup(b: i64, c: i64) -> (ValuedQuiver, RootContext, SkewForm) {
        let q = ValuedQuiver::rank2(b, c);
        let ctx = RootContext::new(&q);
        (q, ctx, rank2_form())
    }

    #[test]
    fn simple_modules_expand_to_printed_forms() {
        let (q, ctx, form) = rank2_setup(1, 1);
        // Simple at the source: X^((-1,1)) + X^((-1,0)).
        let t = recursion_counts(&q, &[0]).unwrap();
        let expect = elem(&form, &[(vec![-1, 1], &[(0, 1)]), (vec![-1, 0], &[(0, 1)])]);
        assert_eq!(cc_expand(&ctx, &form, &t).unwrap(), expect);
        // Middle module: three unit terms.
        let t = recursion_counts(&q, &[0, 1]).unwrap();
        let expect = elem(
            &form,
            &[
                (vec![0, -1], &[(0, 1)]),
                (vec![-1, 0], &[(0, 1)]),
                (vec![-1, -1], &[(0, 1)]),
            ],
        );
        assert_eq!(cc_expand(&ctx, &form, &t).unwrap(), expect);
    }

    #[test]
    fn tripled_edge_printed_expansions() {
        let (q, ctx, form) = rank2_setup(3, 1);
        // Dimension (3,1): leading 1s and two (q + 1 + q^-1) coefficients.
        let t = recursion_counts(&q, &[0, 1]).unwrap();
        let mid = [(2i64, 1i64), (0, 1), (-2, 1)];
        let expect = elem(
            &form,
            &[
                (vec![-3, 2], &[(0, 1)]),
                (vec![-3, 1], &mid),
                (vec![-3, 0], &mid),
                (vec![0, -1], &[(0, 1)]),
                (vec![-3, -1], &[(0, 1)]),
            ],
        );
        assert_eq!(cc_expand(&ctx, &form, &t).unwrap(), expect);
        // Dimension (3,2): includes the q^(3/2) + q^(-3/2) coefficient.
        let t = recursion_counts(&q, &[0, 1, 0, 1]).unwrap();
        let expect = elem(
            &form,
            &[
                (vec![-3, 1], &[(0, 1)]),
                (vec![-3, 0], &mid),
                (vec![0, -1], &mid),
                (vec![-3, -1], &mid),
                (vec![3, -2], &[(0, 1)]),
                (vec![0, -2], &[(3, 1), (-3, 1)]),
                (vec![-3, -2], &[(0, 1)]),
            ],
        );
        assert_eq!(cc_expand(&ctx, &form, &t).unwrap(), expect);
    }

    #[test]
    fn literal_rank2_formula_agrees_with_general_expansion() {
        for (b, c, seqs) in [
            (1i64, 1i64, vec![vec![0usize], vec![0, 1], vec![1]]),
            (2, 1, vec![vec![0, 1], vec![0, 1, 0]]),
            (3, 1, vec![vec![0, 1], vec![0, 1, 0], vec![0, 1, 0, 1]]),
            (2, 2, vec![vec![1, 0], vec![1, 0, 1], vec![0, 1, 0]]),
        ] {
            let (q, ctx, form) = rank2_setup(b, c);
            for seq in seqs {
                let t = recursion_counts(&q, &seq).unwrap();
                let general = cc_expand(&ctx, &form, &t).unwrap();
                let literal = cc_expand_rank2(b, c, &t).unwrap();
                assert_eq!(general, literal, "b={b} c={c} seq={seq:?}");
                // And the polynomial-mode route gives the same element.
                let poly = t.to_polynomial(&ctx).unwrap();
                assert_eq!(cc_expand_rank2(b, c, &poly).unwrap(), general);
            }
        }
    }

    #[test]
    fn closed_forms_match_expansion_of_count_tables() {
        let (_, ctx, form) = rank2_setup(2, 2);
        for n in 0..=3i64 {
            for side in [KroneckerSide::Preprojective, KroneckerSide::Preinjective] {
                let table = kronecker_table(side, n);
                let via_counts = cc_expand(&ctx, &form, &table).unwrap();
                assert_eq!(kronecker_closed_form(n, side), via_counts, "{side:?} n={n}");
            }
        }
    }

    #[test]
    fn integer_mode_matches_symbolic_at_field_sizes() {
        let (q, ctx, form) = rank2_setup(2, 1);
        let symbolic = cc_expand(&ctx, &form, &recursion_counts(&q, &[0, 1]).unwrap()).unwrap();
        for p in [2i64, 3] {
            let rep = build_example_rep("c2", "i2", p as u64).unwrap();
            let counted = enumerate_subreps(&rep, 1 << 24).unwrap();
            let at_p = cc_expand(&ctx, &form, &counted).unwrap();
            assert!(specialized_equal(&at_p, &symbolic, p).unwrap());
            assert!(!specialized_equal(&at_p, &symbolic, p + 2).unwrap());
        }
    }

    #[test]
    fn factorization_round_trips_and_is_positive() {
        for (family, b, c, seqs) in [
            ("a2", 1i64, 1i64, vec![vec![0usize], vec![0, 1], vec![0, 1, 0]]),
            ("c2", 2, 1, vec![vec![0, 1], vec![0, 1, 0]]),
            ("g2", 3, 1, vec![vec![0, 1], vec![0, 1, 0], vec![0, 1, 0, 1]]),
        ] {
            let (q, ctx, form) = rank2_setup(b, c);
            for seq in seqs {
                let t = recursion_counts(&q, &seq).unwrap();
                let x = cc_expand(&ctx, &form, &t).unwrap();
                let (g, f) = f_factor(&ctx, &t).unwrap();
                assert!(f.constant_term_is_one(2), "{family} {seq:?}");
                assert!(f.coeffs_nonnegative(), "{family} {seq:?}");
                let back = recombine(&form, q.b(), &g, &f).unwrap();
                assert_eq!(back, x, "{family} {seq:?} recombination");
                let peeled = b_compatible_check(&x, q.b(), &g).unwrap();
                assert_eq!(peeled, f, "{family} {seq:?} factor extraction");
            }
        }
    }

    #[test]
    fn factorization_rejects_off_lattice_elements() {
        let (q, _, form) = rank2_setup(1, 1);
        let x = elem(&form, &[(vec![0, 0], &[(0, 1)]), (vec![1, 0], &[(0, 1)])]);
        // g = 0: the exponent (1,0) would need e = B^{-1}(-1,0) which is
        // not a nonnegative integer vector.
        assert!(matches!(
            b_compatible_check(&x, q.b(), &[0, 0]),
            Err(Error::NotBCompatible(_))
        ));
    }

    #[test]
    fn mutation_compatibility_on_small_quivers() {
        // Source mutation on the single-edge quiver, reflected simple.
        let q = ValuedQuiver::rank2(1, 1);
        let n_table = CountTable::simple(2, 1, CountMode::Normalized);
        let sin_table = recursion_counts(&q.mutated(0), &[0, 1]).unwrap();
        assert!(cc_verify_mutation(&q, 0, &n_table, &sin_table).unwrap());
        // A wrong target table is detected.
        let wrong = CountTable::simple(2, 1, CountMode::Normalized);
        assert!(!cc_verify_mutation(&q, 0, &n_table, &wrong).unwrap());
    }
}
