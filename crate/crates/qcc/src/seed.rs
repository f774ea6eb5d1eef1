//! Quantum seeds and their mutation.
//!
//! A quantum seed couples a valued quiver (B, D) with a compatible skew
//! form Λ on the same lattice (BᵀΛ = D, as diagonal matrices) and a tuple
//! of cluster variables living in the quantum torus of the *initial* form.
//! Mutation in an exchangeable direction k replaces the k-th variable by
//! the quantum exchange binomial, mutates B, and transports Λ by the
//! unimodular matrix E_k. Every intermediate object stays inside the
//! initial torus, which is what makes cross-checks against the counting
//! engine possible term by term.

use crate::error::{Error, Result};
use crate::linalg::{self, IMat};
use crate::quiver::{self, ValuedQuiver};
use crate::scalar::QScalar;
use crate::torus::{SkewForm, TorusElement};

/// A valued quiver together with a compatible skew form: BᵀΛ = D, where D
/// is the valuation matrix. Mutation-invariant, so it travels with seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatiblePair {
    quiver: ValuedQuiver,
    form: SkewForm,
    /// Directions 0..mutable are exchangeable; the rest are frozen.
    mutable: usize,
}

impl CompatiblePair {
    /// Validate compatibility: Bᵀ·(d·Λ) = d·diag(D) entrywise, where d is
    /// the denominator scale of the stored form.
    pub fn new(quiver: ValuedQuiver, form: SkewForm, mutable: usize) -> Result<Self> {
        let m = quiver.n();
        if form.n() != m || mutable > m {
            return Err(Error::Invalid("skew form rank must match the quiver".into()));
        }
        let bt = linalg::transpose(quiver.b());
        let prod = linalg::mat_mul(&bt, form.lamd());
        for i in 0..m {
            for j in 0..m {
                let want = if i == j { form.d() as i64 * quiver.d()[i] } else { 0 };
                if prod[i][j] != want {
                    return Err(Error::NotBCompatible(format!(
                        "BᵀΛ has entry {}/{} at ({i},{j}), expected {}/{}",
                        prod[i][j],
                        form.d(),
                        want,
                        form.d()
                    )));
                }
            }
        }
        Ok(CompatiblePair { quiver, form, mutable })
    }

    /// The canonical pair Λ = -D B^{-1} of an invertible exchange matrix;
    /// every direction is exchangeable.
    pub fn from_invertible(quiver: ValuedQuiver) -> Result<Self> {
        let form = quiver::lambda_from_b(&quiver)?;
        let mutable = quiver.n();
        CompatiblePair::new(quiver, form, mutable)
    }

    /// The principal completion of an arbitrary valued quiver: the 2n x 2n
    /// exchange matrix [[B, -I], [I, 0]] with doubled valuations and the
    /// integral skew form [[0, -D], [D, -DB]]. Only the first n directions
    /// are exchangeable.
    pub fn principal(quiver: &ValuedQuiver) -> Result<Self> {
        let n = quiver.n();
        let (b, d) = (quiver.b(), quiver.d());
        let mut bb = linalg::zeros(2 * n, 2 * n);
        let mut lamd = linalg::zeros(2 * n, 2 * n);
        for i in 0..n {
            bb[i + n][i] = 1;
            bb[i][i + n] = -1;
            lamd[i][i + n] = -d[i];
            lamd[i + n][i] = d[i];
            for j in 0..n {
                bb[i][j] = b[i][j];
                lamd[i + n][j + n] = -d[i] * b[i][j];
            }
        }
        let mut dd = d.to_vec();
        dd.extend_from_slice(d);
        CompatiblePair::new(ValuedQuiver::new(bb, dd)?, SkewForm::new(1, lamd)?, n)
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    /// Total rank (exchangeable plus frozen directions).
    pub fn m(&self) -> usize {
        self.quiver.n()
    }

    /// Number of exchangeable directions.
    pub fn mutable(&self) -> usize {
        self.mutable
    }

    /// Mutate both members in direction k and re-validate compatibility.
    pub fn mutated(&self, k: usize) -> Result<Self> {
        if k >= self.mutable {
            return Err(Error::Invalid(format!("direction {k} is frozen or out of range")));
        }
        let q = self.quiver.mutated(k);
        let form = lambda_mutation(&self.form, self.quiver.b(), k)?;
        CompatiblePair::new(q, form, self.mutable)
    }
}

/// The unimodular column operation matrix of a mutation: E agrees with the
/// identity off column k, and its k-th column is -1 on the diagonal and
/// [-b_ik]_+ elsewhere.
pub fn mutation_matrix(b: &IMat, k: usize) -> IMat {
    let m = b.len();
    let mut e = linalg::identity(m);
    for i in 0..m {
        e[i][k] = if i == k { -1 } else { (-b[i][k]).max(0) };
    }
    e
}

/// Transport of the skew form along a mutation: Λ' = Eᵀ Λ E at the same
/// denominator scale.
pub fn lambda_mutation(form: &SkewForm, b: &IMat, k: usize) -> Result<SkewForm> {
    let e = mutation_matrix(b, k);
    let et = linalg::transpose(&e);
    SkewForm::new(form.d(), linalg::mat_mul(&linalg::mat_mul(&et, form.lamd()), &e))
}

/// A quantum seed: a compatible pair plus the current cluster variables,
/// all expressed in the quantum torus of the initial form.
#[derive(Debug, Clone)]
pub struct QuantumSeed {
    pair: CompatiblePair,
    vars: Vec<TorusElement>,
    history: Vec<usize>,
}

impl QuantumSeed {
    /// The initial seed: variables are the torus generators.
    pub fn initial(pair: CompatiblePair) -> Self {
        let vars = (0..pair.m()).map(|i| TorusElement::generator(pair.form(), i)).collect();
        QuantumSeed { pair, vars, history: Vec::new() }
    }

    pub fn pair(&self) -> &CompatiblePair {
        &self.pair
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &TorusElement {
        &self.vars[i]
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    /// The normalized monomial M(c) in the *current* cluster variables:
    /// for c with a single sign, q^{-1/2 Σ_{i<j} λ'_ij c_i c_j} times the
    /// ordered product of variable powers; mixed signs split as
    /// M(c) = q^{Λ'(c, c_-)/2} M(c_+) M(c_-)^{-1}, evaluated by exact
    /// right division in the torus.
    pub fn frame_monomial(&self, c: &[i64]) -> Result<TorusElement> {
        let m = self.pair.m();
        if c.len() != m {
            return Err(Error::Invalid("frame vector rank mismatch".into()));
        }
        let plus: Vec<i64> = c.iter().map(|&x| x.max(0)).collect();
        let minus: Vec<i64> = c.iter().map(|&x| (-x).max(0)).collect();
        let num = self.ordered_power_product(&plus);
        if minus.iter().all(|&x| x == 0) {
            return Ok(num);
        }
        let den = self.ordered_power_product(&minus);
        let twist = QScalar::q_power(self.pair.form().d(), self.pair.form().pairing(c, &minus));
        num.scalar_mul(&twist).exact_div_right(&den)
    }

    /// q^{-1/2 Σ_{i<j} λ'_ij v_i v_j} · M_1^{v_1} ··· M_m^{v_m} for v >= 0,
    /// with λ' the current form.
    fn ordered_power_product(&self, v: &[i64]) -> TorusElement {
        let lamd = self.pair.form().lamd();
        let mut key = 0;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                key += v[i] * v[j] * lamd[j][i];
            }
        }
        let mut out = TorusElement::term(
            self.vars[0].form(),
            &vec![0; self.vars[0].form().n()],
            QScalar::q_power(self.pair.form().d(), key),
        );
        for (i, &vi) in v.iter().enumerate() {
            debug_assert!(vi >= 0);
            if vi > 0 {
                out = &out * &self.vars[i].pow(vi as u32);
            }
        }
        out
    }

    /// Mutate in direction k: the k-th variable is replaced by the sum of
    /// the two exchange monomials M(c^±), where c^± has -1 in slot k and
    /// [∓b_lk]_+ elsewhere, and the pair is transported.
    ///
    /// Each M(c^±) alone is q^{Λ'(c^±, α_k)/2} · (monomial in the current
    /// variables) · X_k^{-1}, which need not be a Laurent polynomial once
    /// X_k has several terms; only the sum is. So the two numerators are
    /// summed first and divided by the current X_k once.
    pub fn mutated(&self, k: usize) -> Result<Self> {
        if k >= self.pair.mutable() {
            return Err(Error::Invalid(format!("direction {k} is frozen or out of range")));
        }
        let m = self.pair.m();
        let b = self.pair.quiver().b();
        let form = self.pair.form();
        let mut ek = vec![0i64; m];
        ek[k] = 1;
        let mut numerator = TorusElement::zero(self.vars[0].form());
        for sign in [-1i64, 1] {
            let mut c: Vec<i64> = (0..m).map(|l| (sign * b[l][k]).max(0)).collect();
            c[k] = -1;
            let plus: Vec<i64> = c.iter().map(|&x| x.max(0)).collect();
            let twist = QScalar::q_power(form.d(), form.pairing(&c, &ek));
            numerator = &numerator + &self.ordered_power_product(&plus).scalar_mul(&twist);
        }
        let new_var = numerator.exact_div_right(&self.vars[k])?;
        let pair = self.pair.mutated(k)?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        let mut history = self.history.clone();
        history.push(k);
        Ok(QuantumSeed { pair, vars, history })
    }

    /// Apply a whole mutation sequence.
    pub fn mutated_along(&self, seq: &[usize]) -> Result<Self> {
        let mut s = self.clone();
        for &k in seq {
            s = s.mutated(k)?;
        }
        Ok(s)
    }

    /// Substitute the current cluster into a formal Laurent polynomial
    /// written over this seed's frame: each normalized monomial with
    /// exponent a becomes the frame monomial M(a). Individual mixed-sign
    /// monomials need not be Laurent in the ambient torus, so everything
    /// is put over the common right denominator M(-c) with
    /// c_j = min(0, min_a a_j) and divided once at the end.
    pub fn evaluate(&self, x: &TorusElement) -> Result<TorusElement> {
        let form = self.pair.form();
        if x.form() != form {
            return Err(Error::Invalid(
                "element is not written over this seed's frame".into(),
            ));
        }
        let m = self.pair.m();
        let mut cmin = vec![0i64; m];
        for (a, _) in x.iter() {
            for j in 0..m {
                cmin[j] = cmin[j].min(a[j]);
            }
        }
        let neg: Vec<i64> = cmin.iter().map(|&v| -v).collect();
        let mut num = TorusElement::zero(self.vars[0].form());
        for (a, coeff) in x.iter() {
            // M(a) = q^{-Λ'(a - c, c)/2} M(a - c) M(-c)^{-1}.
            let u: Vec<i64> = a.iter().zip(&cmin).map(|(&ai, &ci)| ai - ci).collect();
            let twist = QScalar::q_power(form.d(), -form.pairing(&u, &cmin));
            let term = self.ordered_power_product(&u).scalar_mul(&(coeff * &twist));
            num = &num + &term;
        }
        if neg.iter().all(|&v| v == 0) {
            return Ok(num);
        }
        num.exact_div_right(&self.ordered_power_product(&neg))
    }
}

/// The cluster variable with label [target; seq]: mutate the initial seed
/// along seq and read off variable `target`. Indices are 0-based.
pub fn variable_by_label(
    pair: &CompatiblePair,
    target: usize,
    seq: &[usize],
) -> Result<TorusElement> {
    if target >= pair.m() {
        return Err(Error::Invalid("variable index out of range".into()));
    }
    let seed = QuantumSeed::initial(pair.clone()).mutated_along(seq)?;
    Ok(seed.vars[target].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::tests_support::elem;

    fn pair_a2() -> CompatiblePair {
        CompatiblePair::from_invertible(
            ValuedQuiver::new(vec![vec![0, 1], vec![-1, 0]], vec![1, 1]).unwrap(),
        )
        .unwrap()
    }

    fn pair_c2() -> CompatiblePair {
        CompatiblePair::from_invertible(
            ValuedQuiver::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap(),
        )
        .unwrap()
    }

    fn pair_g2() -> CompatiblePair {
        CompatiblePair::from_invertible(
            ValuedQuiver::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).unwrap(),
        )
        .unwrap()
    }

    fn pair_rank4() -> CompatiblePair {
        CompatiblePair::from_invertible(
            ValuedQuiver::new(
                vec![
                    vec![0, 2, 0, 0],
                    vec![-2, 0, 2, 0],
                    vec![0, -2, 0, 2],
                    vec![0, 0, -2, 0],
                ],
                vec![1, 1, 1, 1],
            )
            .unwrap(),
        )
        .unwrap()
    }

    /// Walk the alternating sequence 1, 2, 1, 2, ... (0-based 0, 1, 0, ...)
    /// and collect the freshly created variable at each step.
    fn alternating_walk(pair: &CompatiblePair, steps: usize) -> Vec<TorusElement> {
        let mut seed = QuantumSeed::initial(pair.clone());
        let mut out = Vec::new();
        for t in 0..steps {
            let k = t % 2;
            seed = seed.mutated(k).unwrap();
            out.push(seed.var(k).clone());
        }
        out
    }

    #[test]
    fn two_vertex_unit_exchange_sequence() {
        let pair = pair_a2();
        let f = pair.form().clone();
        let xs = alternating_walk(&pair, 5);
        let one = [(0i64, 1i64)];
        assert_eq!(xs[0], elem(&f, &[(vec![-1, 1], &one), (vec![-1, 0], &one)]));
        assert_eq!(
            xs[1],
            elem(&f, &[(vec![-1, 0], &one), (vec![0, -1], &one), (vec![-1, -1], &one)])
        );
        assert_eq!(xs[2], elem(&f, &[(vec![1, -1], &one), (vec![0, -1], &one)]));
        assert_eq!(xs[3], TorusElement::generator(&f, 0));
        assert_eq!(xs[4], TorusElement::generator(&f, 1));
    }

    #[test]
    fn doubled_edge_exchange_sequence() {
        let pair = pair_c2();
        let f = pair.form().clone();
        let xs = alternating_walk(&pair, 6);
        let one = [(0i64, 1i64)];
        let half = [(1i64, 1i64), (-1, 1)]; // q^(1/2) + q^(-1/2)
        assert_eq!(xs[0], elem(&f, &[(vec![-1, 1], &one), (vec![-1, 0], &one)]));
        assert_eq!(
            xs[1],
            elem(
                &f,
                &[
                    (vec![-2, 1], &one),
                    (vec![-2, 0], &half),
                    (vec![0, -1], &one),
                    (vec![-2, -1], &one)
                ]
            )
        );
        assert_eq!(
            xs[2],
            elem(&f, &[(vec![-1, 0], &one), (vec![1, -1], &one), (vec![-1, -1], &one)])
        );
        assert_eq!(xs[3], elem(&f, &[(vec![2, -1], &one), (vec![0, -1], &one)]));
        assert_eq!(xs[4], TorusElement::generator(&f, 0));
        assert_eq!(xs[5], TorusElement::generator(&f, 1));
    }

    #[test]
    fn tripled_edge_exchange_sequence() {
        let pair = pair_g2();
        let f = pair.form().clone();
        let xs = alternating_walk(&pair, 8);
        let one = [(0i64, 1i64)];
        let half = [(1i64, 1i64), (-1, 1)]; // q^(1/2) + q^(-1/2)
        let triple = [(2i64, 1i64), (0, 1), (-2, 1)]; // q + 1 + q^(-1)
        let threehalf = [(3i64, 1i64), (-3, 1)]; // q^(3/2) + q^(-3/2)
        assert_eq!(xs[0], elem(&f, &[(vec![-1, 1], &one), (vec![-1, 0], &one)]));
        assert_eq!(
            xs[1],
            elem(
                &f,
                &[
                    (vec![-3, 2], &one),
                    (vec![-3, 1], &triple),
                    (vec![-3, 0], &triple),
                    (vec![0, -1], &one),
                    (vec![-3, -1], &one)
                ]
            )
        );
        assert_eq!(
            xs[2],
            elem(
                &f,
                &[
                    (vec![-2, 1], &one),
                    (vec![-2, 0], &half),
                    (vec![1, -1], &one),
                    (vec![-2, -1], &one)
                ]
            )
        );
        assert_eq!(
            xs[3],
            elem(
                &f,
                &[
                    (vec![-3, 1], &one),
                    (vec![-3, 0], &triple),
                    (vec![0, -1], &triple),
                    (vec![-3, -1], &triple),
                    (vec![3, -2], &one),
                    (vec![0, -2], &threehalf),
                    (vec![-3, -2], &one)
                ]
            )
        );
        assert_eq!(
            xs[4],
            elem(&f, &[(vec![-1, 0], &one), (vec![2, -1], &one), (vec![-1, -1], &one)])
        );
        assert_eq!(xs[5], elem(&f, &[(vec![3, -1], &one), (vec![0, -1], &one)]));
        assert_eq!(xs[6], TorusElement::generator(&f, 0));
        assert_eq!(xs[7], TorusElement::generator(&f, 1));
    }

    #[test]
    fn rank4_cyclic_cluster_variables() {
        let pair = pair_rank4();
        let f = pair.form().clone();
        let one = [(0i64, 1i64)];
        // Scale is 2 (quarter powers), so key k means q^(k/4).
        let half = [(2i64, 1i64), (-2, 1)]; // q^(1/2) + q^(-1/2)
        let four = [(6i64, 1i64), (2, 1), (-2, 1), (-6, 1)];
        let five = [(8i64, 1i64), (4, 1), (0, 2), (-4, 1), (-8, 1)];
        let mid = [(4i64, 1i64), (0, 2), (-4, 1)]; // q + 2 + q^(-1)

        let x22 = variable_by_label(&pair, 1, &[1]).unwrap();
        assert_eq!(
            x22,
            elem(&f, &[(vec![0, -1, 2, 0], &one), (vec![2, -1, 0, 0], &one)])
        );

        let x323 = variable_by_label(&pair, 2, &[1, 2]).unwrap();
        assert_eq!(
            x323,
            elem(
                &f,
                &[
                    (vec![0, -2, 3, 2], &one),
                    (vec![2, -2, 1, 2], &half),
                    (vec![4, -2, -1, 2], &one),
                    (vec![4, 0, -1, 0], &one)
                ]
            )
        );

        let x4234 = variable_by_label(&pair, 3, &[1, 2, 3]).unwrap();
        assert_eq!(
            x4234,
            elem(
                &f,
                &[
                    (vec![0, -4, 6, 3], &one),
                    (vec![2, -4, 4, 3], &four),
                    (vec![4, -4, 2, 3], &five),
                    (vec![6, -4, 0, 3], &four),
                    (vec![8, -4, -2, 3], &one),
                    (vec![4, -2, 2, 1], &half),
                    (vec![6, -2, 0, 1], &mid),
                    (vec![8, -2, -2, 1], &half),
                    (vec![8, 0, 0, -1], &one),
                    (vec![8, 0, -2, -1], &one)
                ]
            )
        );
    }

    #[test]
    fn frame_monomials_reduce_to_torus_monomials_initially() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for pair in [pair_a2(), pair_c2(), pair_rank4()] {
            let seed = QuantumSeed::initial(pair.clone());
            for _ in 0..25 {
                let c: Vec<i64> = (0..pair.m()).map(|_| rng.random_range(-3..=3)).collect();
                let got = seed.frame_monomial(&c).unwrap();
                assert_eq!(got, TorusElement::monomial(pair.form(), &c));
            }
        }
    }

    #[test]
    fn mutation_is_involutive() {
        for pair in [pair_a2(), pair_c2(), pair_g2(), pair_rank4()] {
            let seed = QuantumSeed::initial(pair.clone());
            for k in 0..pair.mutable() {
                let back = seed.mutated(k).unwrap().mutated(k).unwrap();
                assert_eq!(back.pair(), seed.pair());
                assert_eq!(back.vars(), seed.vars());
            }
        }
    }

    #[test]
    fn mutation_preserves_commutation_and_bar_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for pair in [pair_a2(), pair_c2(), pair_g2(), pair_rank4()] {
            let mut seed = QuantumSeed::initial(pair.clone());
            for _ in 0..4 {
                let k = rng.random_range(0..pair.mutable());
                seed = seed.mutated(k).unwrap();
                // Compatibility of the mutated pair is re-validated inside
                // `mutated`; check the cluster still q-commutes according
                // to the transported form, and is bar-invariant.
                let lamd = seed.pair().form().lamd();
                let d = seed.pair().form().d();
                for i in 0..pair.m() {
                    assert!(seed.var(i).is_bar_invariant());
                    for j in 0..pair.m() {
                        let lhs = seed.var(i) * seed.var(j);
                        let rhs =
                            (seed.var(j) * seed.var(i)).scalar_mul(&QScalar::q_power(d, 2 * lamd[i][j]));
                        assert_eq!(lhs, rhs, "variables {i},{j} fail q-commutation");
                    }
                }
            }
        }
    }

    #[test]
    fn transported_form_matches_recomputed_form() {
        // For invertible B the transported Λ' = EᵀΛE must agree with the
        // canonical form -D(B')^{-1} of the mutated quiver.
        for pair in [pair_a2(), pair_c2(), pair_g2(), pair_rank4()] {
            for k in 0..pair.mutable() {
                let moved = pair.mutated(k).unwrap();
                let fresh = CompatiblePair::from_invertible(moved.quiver().clone()).unwrap();
                let (a, b) = (moved.form(), fresh.form());
                let l = num_integer::lcm(a.d(), b.d());
                let (sa, sb) = ((l / a.d()) as i64, (l / b.d()) as i64);
                for i in 0..pair.m() {
                    for j in 0..pair.m() {
                        assert_eq!(a.lamd()[i][j] * sa, b.lamd()[i][j] * sb);
                    }
                }
            }
        }
    }

    #[test]
    fn principal_completion_blocks() {
        let q = ValuedQuiver::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap();
        let pair = CompatiblePair::principal(&q).unwrap();
        assert_eq!(pair.m(), 4);
        assert_eq!(pair.mutable(), 2);
        assert_eq!(
            pair.quiver().b(),
            &vec![
                vec![0, 2, -1, 0],
                vec![-1, 0, 0, -1],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0]
            ]
        );
        assert_eq!(
            pair.form().lamd(),
            &vec![
                vec![0, 0, -1, 0],
                vec![0, 0, 0, -2],
                vec![1, 0, 0, -2],
                vec![0, 2, 2, 0]
            ]
        );
        assert_eq!(pair.quiver().d(), &[1, 2, 1, 2]);
        // Frozen directions reject mutation.
        let seed = QuantumSeed::initial(pair.clone());
        assert!(seed.mutated(2).is_err());
        // The frozen-frozen block of B stays zero along mutations.
        let mut p = pair;
        for k in [0, 1, 0, 1, 0] {
            p = p.mutated(k).unwrap();
            for i in 2..4 {
                for j in 2..4 {
                    assert_eq!(p.quiver().b()[i][j], 0);
                }
            }
        }
    }

    #[test]
    fn rank2_exchange_relation() {
        // Consecutive variables satisfy X_{m-1} X_{m+1} = q^{b/2} X_m^b + 1
        // for odd m (and with c for even m). Checked for (b, c) = (1, 1):
        // X_2 X_4 = q^(1/2) X_3 + 1.
        let pair = pair_a2();
        let seed0 = QuantumSeed::initial(pair.clone());
        let xs = alternating_walk(&pair, 2);
        let lhs = seed0.var(1) * &xs[1];
        let rhs = &xs[0].scalar_mul(&QScalar::q_power(1, 1))
            + &TorusElement::monomial(pair.form(), &[0, 0]);
        assert_eq!(lhs, rhs);
    }
}
