//! Counting subrepresentations: tables of Grassmannian cardinalities per
//! dimension vector, produced by three independent engines.
//!
//! * [`enumerate_subreps`] walks every tuple of subspaces over an actual
//!   finite field and checks the arrow conditions (integer counts).
//! * [`kronecker_count`] evaluates closed-form products of Gaussian
//!   binomials for the doubled-valuation two-vertex series (polynomials).
//! * [`recursion_counts`] transports the table of a simple along a
//!   sequence of reflections with symmetrized-binomial convolutions
//!   (bar-invariant normalized values).
//!
//! A table's `mode` says what its values mean: raw integers at a fixed
//! field size, polynomials in q counting over F_q, or the normalized
//! bar-invariant coefficients that enter the cluster expansion directly;
//! normalized and polynomial values differ by the twist q^(-<e, m-e>/2).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{rref, in_row_space, subspace_count, subspaces, Fel};
use crate::qbinom::{gauss_binom, qbinom_sym};
use crate::quiver::{RootContext, ValuedQuiver};
use crate::rep::{ScalarRestriction, ValuedRep};
use crate::scalar::QScalar;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// Integer cardinalities over a field of the given size.
    IntegerAt(i64),
    /// Polynomials in q (formal field size).
    Polynomial,
    /// Normalized values A_e = q^(-<e, m-e>/2) |Gr_e|.
    Normalized,
}

/// Grassmannian count table for one representation class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub mode: CountMode,
    pub class: Vec<i64>,
    pub entries: BTreeMap<Vec<i64>, QScalar>,
}

impl CountTable {
    pub fn new(mode: CountMode, class: Vec<i64>) -> Result<Self> {
        if class.iter().any(|&v| v < 0) {
            return Err(Error::Invalid("class vector must be nonnegative".into()));
        }
        Ok(CountTable { mode, class, entries: BTreeMap::new() })
    }

    /// The table of a simple: the zero subspace and the whole space.
    pub fn simple(n: usize, k: usize, mode: CountMode) -> Self {
        let mut class = vec![0i64; n];
        class[k] = 1;
        let mut entries = BTreeMap::new();
        entries.insert(vec![0; n], QScalar::one(1));
        entries.insert(class.clone(), QScalar::one(1));
        CountTable { mode, class, entries }
    }

    pub fn insert(&mut self, e: Vec<i64>, v: QScalar) {
        if !v.is_zero() {
            self.entries.insert(e, v);
        }
    }

    /// Value at `e`, zero when absent or outside the box [0, class].
    pub fn get(&self, e: &[i64]) -> QScalar {
        self.entries.get(e).cloned().unwrap_or_else(|| QScalar::zero(1))
    }

    /// Structural invariants: support inside the box and unit boundary
    /// values at 0 and at the full class.
    pub fn validate(&self) -> Result<()> {
        let n = self.class.len();
        for e in self.entries.keys() {
            if e.len() != n || e.iter().zip(&self.class).any(|(&x, &m)| x < 0 || x > m) {
                return Err(Error::Invalid(format!(
                    "table entry {e:?} outside the box [0, {:?}]",
                    self.class
                )));
            }
        }
        for corner in [vec![0; n], self.class.clone()] {
            if !self.get(&corner).is_one() {
                return Err(Error::Invalid(format!(
                    "boundary entry at {corner:?} must be 1"
                )));
            }
        }
        Ok(())
    }

    /// Twist polynomial counts into normalized values (and back). The
    /// context must belong to the same quiver the class lives on.
    pub fn to_normalized(&self, ctx: &RootContext) -> Result<CountTable> {
        match self.mode {
            CountMode::Normalized => Ok(self.clone()),
            CountMode::Polynomial => Ok(self.twisted(ctx, -1, CountMode::Normalized)),
            CountMode::IntegerAt(_) => Err(Error::Invalid(
                "integer tables carry no formal q to normalize".into(),
            )),
        }
    }

    pub fn to_polynomial(&self, ctx: &RootContext) -> Result<CountTable> {
        match self.mode {
            CountMode::Polynomial => Ok(self.clone()),
            CountMode::Normalized => Ok(self.twisted(ctx, 1, CountMode::Polynomial)),
            CountMode::IntegerAt(_) => Err(Error::Invalid(
                "integer tables carry no formal q to untwist".into(),
            )),
        }
    }

    fn twisted(&self, ctx: &RootContext, sign: i64, mode: CountMode) -> CountTable {
        let mut out = CountTable { mode, class: self.class.clone(), entries: BTreeMap::new() };
        for (e, v) in &self.entries {
            let rest: Vec<i64> = self.class.iter().zip(e).map(|(&m, &x)| m - x).collect();
            let twist = QScalar::q_power(1, sign * ctx.euler_form(e, &rest));
            out.insert(e.clone(), v * &twist);
        }
        out
    }

    /// Evaluate a polynomial-mode table at an integer field size.
    pub fn specialize(&self, q0: i64) -> Result<CountTable> {
        if self.mode != CountMode::Polynomial {
            return Err(Error::Invalid("only polynomial tables specialize directly".into()));
        }
        let mut out = CountTable::new(CountMode::IntegerAt(q0), self.class.clone())?;
        for (e, v) in &self.entries {
            out.insert(e.clone(), QScalar::from_int(1, v.specialize_integer(q0)?));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let (mode, q0) = match self.mode {
            CountMode::IntegerAt(q0) => ("integer-at-q0", Some(q0)),
            CountMode::Polynomial => ("polynomial-in-q", None),
            CountMode::Normalized => ("normalized-a", None),
        };
        json!({
            "mode": mode,
            "q0": q0,
            "class": self.class,
            "entries": self.entries.iter().map(|(e, v)| json!({
                "e": e,
                "count": v.to_json(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("count table JSON: {what}"));
        let mode = match v["mode"].as_str().ok_or_else(|| bad("mode"))? {
            "integer-at-q0" => {
                CountMode::IntegerAt(v["q0"].as_i64().ok_or_else(|| bad("q0"))?)
            }
            "polynomial-in-q" => CountMode::Polynomial,
            "normalized-a" => CountMode::Normalized,
            _ => return Err(bad("unknown mode")),
        };
        let class = v["class"]
            .as_array()
            .ok_or_else(|| bad("class"))?
            .iter()
            .map(|x| x.as_i64())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("class entries"))?;
        let mut out = CountTable::new(mode, class)?;
        for entry in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            let e = entry["e"]
                .as_array()
                .ok_or_else(|| bad("entry e"))?
                .iter()
                .map(|x| x.as_i64())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("entry e values"))?;
            out.insert(e, QScalar::from_json(&entry["count"])?);
        }
        Ok(out)
    }
}

/// Iterate all integer vectors 0 <= e <= bound componentwise.
pub(crate) fn box_iter(bound: &[i64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let mut cur: Option<Vec<i64>> = Some(vec![0; bound.len()]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        // Odometer increment.
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == next.len() {
                cur = None;
                break;
            }
            if next[i] < bound[i] {
                next[i] += 1;
                cur = Some(next);
                break;
            }
            next[i] = 0;
            i += 1;
        }
        Some(out)
    })
}

// ---------------------------------------------------------------------
// Engine 1: brute-force enumeration over an actual finite field.
// ---------------------------------------------------------------------

/// Count subrepresentations of every dimension vector by enumerating
/// subspace tuples. Fails with `BudgetExceeded` when the total number of
/// candidate tuples passes `budget`.
pub fn enumerate_subreps(rep: &ValuedRep, budget: u128) -> Result<CountTable> {
    let q = rep.quiver();
    let n = q.n();
    let dims = rep.dims();
    let class = rep.class();

    // Budget: sum over the box of the per-vertex subspace-count products.
    let fields: Vec<_> = (0..n).map(|i| rep.vertex_field(i)).collect();
    let mut total: u128 = 0;
    for e in box_iter(&class) {
        let mut prod: u128 = 1;
        for i in 0..n {
            prod = prod.saturating_mul(subspace_count(&fields[i], dims[i], e[i] as usize));
        }
        total = total.saturating_add(prod);
    }
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "enumeration needs {total} candidate tuples, budget is {budget}"
        )));
    }

    // Subspace lists per vertex and dimension.
    let subs: Vec<Vec<Vec<Vec<Vec<Fel>>>>> = (0..n)
        .map(|i| (0..=dims[i]).map(|k| subspaces(&fields[i], dims[i], k)).collect())
        .collect();

    // Restrictions per arrow bundle endpoint.
    struct ArrowCtx {
        from: usize,
        to: usize,
        src: ScalarRestriction,
        tgt: ScalarRestriction,
        mats: Vec<Vec<Vec<Fel>>>,
        edge: crate::gf::FiniteField,
    }
    let mut arrows = Vec::new();
    for a in rep.arrows() {
        let edge = rep.edge_field(a.from, a.to);
        arrows.push(ArrowCtx {
            from: a.from,
            to: a.to,
            src: ScalarRestriction::new(&fields[a.from], &edge)?,
            tgt: ScalarRestriction::new(&fields[a.to], &edge)?,
            mats: a.mats.clone(),
            edge,
        });
    }

    let mut table = CountTable::new(CountMode::IntegerAt(rep.base_order() as i64), class.clone())?;
    for e in box_iter(&class) {
        // Pre-restrict every candidate subspace for each incident arrow.
        // images[a][s] = mapped edge-coordinate spanning vectors of source
        // subspace s; targets[a][t] = echelonized restricted target basis.
        let mut images: Vec<Vec<Vec<Vec<Fel>>>> = Vec::new();
        let mut targets: Vec<Vec<(Vec<Vec<Fel>>, Vec<usize>)>> = Vec::new();
        for a in &arrows {
            let src_list = &subs[a.from][e[a.from] as usize];
            let imgs = src_list
                .iter()
                .map(|basis| {
                    let restricted = a.src.restrict_basis(basis);
                    restricted
                        .iter()
                        .flat_map(|v| a.mats.iter().map(move |m| mat_vec_gf(&a.edge, m, v)))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>();
            let tgt_list = &subs[a.to][e[a.to] as usize];
            let tgts = tgt_list
                .iter()
                .map(|basis| {
                    let mut rows = a.tgt.restrict_basis(basis);
                    let piv = rref(&a.edge, &mut rows);
                    (rows, piv)
                })
                .collect::<Vec<_>>();
            images.push(imgs);
            targets.push(tgts);
        }

        // Odometer over per-vertex subspace indices.
        let sizes: Vec<usize> = (0..n).map(|i| subs[i][e[i] as usize].len()).collect();
        let mut idx = vec![0usize; n];
        let mut count: u128 = 0;
        'outer: loop {
            let ok = arrows.iter().enumerate().all(|(ai, a)| {
                let (rows, piv) = &targets[ai][idx[a.to]];
                images[ai][idx[a.from]]
                    .iter()
                    .all(|v| in_row_space(&a.edge, rows, piv, v))
            });
            if ok {
                count += 1;
            }
            for i in 0..=n {
                if i == n {
                    break 'outer;
                }
                idx[i] += 1;
                if idx[i] < sizes[i] {
                    break;
                }
                idx[i] = 0;
            }
            if n == 0 {
                break;
            }
        }
        table.insert(e, QScalar::from_int(1, count as i64));
    }
    table.validate()?;
    Ok(table)
}

fn mat_vec_gf(f: &crate::gf::FiniteField, m: &[Vec<Fel>], v: &[Fel]) -> Vec<Fel> {
    m.iter()
        .map(|row| {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(v) {
                acc = f.add(&acc, &f.mul(a, b));
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------
// Engine 2: closed forms for the doubled-valuation two-vertex series.
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KroneckerSide {
    /// Dimension vectors (n, n+1).
    Preprojective,
    /// Dimension vectors (n+1, n).
    Preinjective,
}

/// |Gr_(a,b)| for the n-th module of the series, as a polynomial in q
/// (products of Gaussian binomials in q^2), zero outside the box.
pub fn kronecker_count(side: KroneckerSide, n: i64, a: i64, b: i64) -> QScalar {
    let gnat = |t: i64, k: i64| -> QScalar {
        if k == 0 {
            QScalar::one(1)
        } else if k < 0 || t < k {
            QScalar::zero(1)
        } else {
            gauss_binom(t, k, 2)
        }
    };
    match side {
        KroneckerSide::Preprojective => {
            if a < 0 || a > n || b < 0 || b > n + 1 {
                return QScalar::zero(1);
            }
            &gnat(n + 1 - a, n + 1 - b) * &gnat(b - 1, a)
        }
        KroneckerSide::Preinjective => {
            if a < 0 || a > n + 1 || b < 0 || b > n {
                return QScalar::zero(1);
            }
            &gnat(b + 1, a) * &gnat(n - a, n - b)
        }
    }
}

/// The full polynomial table for one module of the series.
pub fn kronecker_table(side: KroneckerSide, n: i64) -> CountTable {
    let class = match side {
        KroneckerSide::Preprojective => vec![n, n + 1],
        KroneckerSide::Preinjective => vec![n + 1, n],
    };
    let mut table = CountTable::new(CountMode::Polynomial, class.clone())
        .expect("class is nonnegative");
    for e in box_iter(&class) {
        table.insert(e.clone(), kronecker_count(side, n, e[0], e[1]));
    }
    table
}

// ---------------------------------------------------------------------
// Engine 3: reflection recursion.
// ---------------------------------------------------------------------

/// The coordinate-i reflection in the displayed convention of the step
/// quiver: only coordinate i changes, to sum_l e_l [b_il]_+ - e_i.
fn sigma_disp(q: &ValuedQuiver, i: usize, e: &[i64]) -> Vec<i64> {
    let mut out = e.to_vec();
    out[i] = e
        .iter()
        .enumerate()
        .map(|(l, &x)| if l == i { 0 } else { x * q.b()[i][l].max(0) })
        .sum::<i64>()
        - e[i];
    out
}

/// Normalized count table of the module obtained by reflecting the simple
/// at `seq[last]` backwards along `seq`: mutate the quiver left to right,
/// seed the simple's table at the end, then pull the table back one step
/// at a time. Each pullback is a triangular convolution by symmetrized
/// binomials, solved forward when the step vertex is a sink and backward
/// (with a full consistency re-check) otherwise.
pub fn recursion_counts(q: &ValuedQuiver, seq: &[usize]) -> Result<CountTable> {
    let n = q.n();
    if seq.is_empty() || seq.iter().any(|&k| k >= n) {
        return Err(Error::NotAdmissible(
            "sequence must be nonempty with in-range vertices".into(),
        ));
    }
    if seq.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotAdmissible(
            "sequence must not repeat a vertex consecutively".into(),
        ));
    }
    let r = seq.len() - 1;
    let mut quivers = vec![q.clone()];
    for j in 0..r {
        let next = quivers[j].mutated(seq[j]);
        quivers.push(next);
    }

    let mut table = CountTable::simple(n, seq[r], CountMode::Normalized);
    for j in (1..=r).rev() {
        let i = seq[j - 1];
        let pre = &quivers[j - 1];
        let post = &quivers[j];
        let (class, entries) = if pre.is_sink(i) {
            let nc = sigma_disp(post, i, &table.class);
            check_class(&nc)?;
            (nc.clone(), direct_step(post, i, &table, &nc))
        } else {
            let nc = sigma_disp(pre, i, &table.class);
            check_class(&nc)?;
            (nc.clone(), solve_step(pre, i, &table, &nc)?)
        };
        table = CountTable { mode: CountMode::Normalized, class, entries };
    }
    table.validate()?;
    Ok(table)
}

fn check_class(c: &[i64]) -> Result<()> {
    if c.iter().any(|&v| v < 0) {
        return Err(Error::Invalid(format!(
            "reflected class {c:?} is not a representation class"
        )));
    }
    Ok(())
}

/// Forward evaluation: the step vertex is a source of `post`, and the
/// output value at f is a binomial combination of input values along the
/// i-axis above the reflection of f.
fn direct_step(
    post: &ValuedQuiver,
    i: usize,
    input: &CountTable,
    out_class: &[i64],
) -> BTreeMap<Vec<i64>, QScalar> {
    let di = post.d()[i];
    let mut out = BTreeMap::new();
    for f in box_iter(out_class) {
        let sf = sigma_disp(post, i, &f);
        let top = out_class[i] - sf[i] - f[i];
        let mut acc = QScalar::zero(1);
        let c_lo = (-sf[i]).max(0);
        let c_hi = input.class[i] - sf[i];
        for c in c_lo..=c_hi.max(c_lo - 1) {
            let mut g = sf.clone();
            g[i] += c;
            let v = input.get(&g);
            if v.is_zero() {
                continue;
            }
            acc = &acc + &(&qbinom_sym(top, c, di) * &v);
        }
        if !acc.is_zero() {
            out.insert(f, acc);
        }
    }
    out
}

/// Backward solve: the defining relation expresses the known table as a
/// binomial convolution of the unknown one; solving from the top of each
/// i-axis slice downward determines the unknown, and the relation is then
/// re-checked on a window wide enough to cover the zero-extension.
fn solve_step(
    pre: &ValuedQuiver,
    i: usize,
    known: &CountTable,
    out_class: &[i64],
) -> Result<BTreeMap<Vec<i64>, QScalar>> {
    let di = pre.d()[i];
    let mi = out_class[i];
    let mut off_box = out_class.to_vec();
    off_box[i] = 0;
    let mut out = BTreeMap::new();
    for y in box_iter(&off_box) {
        let s: i64 = y
            .iter()
            .enumerate()
            .map(|(l, &v)| if l == i { 0 } else { v * pre.b()[i][l].max(0) })
            .sum();
        let top = known.class[i] - s;
        let k_get = |v: i64| -> QScalar {
            if v < 0 {
                return QScalar::zero(1);
            }
            let mut e = y.clone();
            e[i] = v;
            known.get(&e)
        };
        let mut u = vec![QScalar::zero(1); (mi + 1) as usize];
        for g in (0..=mi).rev() {
            let mut val = k_get(s - g);
            for c in 1..=(mi - g) {
                val = &val - &(&qbinom_sym(top, c, di) * &u[(g + c) as usize]);
            }
            u[g as usize] = val;
        }
        // Consistency: the relation must hold for every input slot,
        // including those that extend past the unknown's support.
        for ei in 0..=(s + mi + 2) {
            let mut rhs = QScalar::zero(1);
            for c in (ei - s).max(0)..=(ei - s + mi) {
                let slot = s - ei + c;
                if (0..=mi).contains(&slot) {
                    rhs = &rhs + &(&qbinom_sym(top, c, di) * &u[slot as usize]);
                }
            }
            if rhs != k_get(ei) {
                return Err(Error::Invalid(format!(
                    "reflection recursion is inconsistent at slice {y:?}, slot {ei}"
                )));
            }
        }
        for g in 0..=mi {
            if !u[g as usize].is_zero() {
                let mut f = y.clone();
                f[i] = g;
                out.insert(f, u[g as usize].clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::build_example_rep;

    const BUDGET: u128 = 10_000_000;

    fn rank2_ctx(b: i64, c: i64) -> (ValuedQuiver, RootContext) {
        let q = ValuedQuiver::rank2(b, c);
        let ctx = RootContext::new(&q);
        (q, ctx)
    }

    #[test]
    fn single_vertex_counts_are_gaussian_binomials() {
        for (d, p) in [(1i64, 2u64), (1, 3), (2, 2)] {
            let q = ValuedQuiver::new(vec![vec![0]], vec![d]).unwrap();
            let rep = ValuedRep::new(q, p, 1, vec![3], vec![]).unwrap();
            let table = enumerate_subreps(&rep, BUDGET).unwrap();
            let q0 = (p as i64).pow(d as u32);
            for k in 0..=3i64 {
                let expected = gauss_binom(3, k, 1).specialize_integer(q0).unwrap();
                assert_eq!(table.get(&[k]), QScalar::from_int(1, expected));
            }
        }
    }

    #[test]
    fn enumeration_oracle_values() {
        // Unequal-valuation inclusion k^2 -> K: three middle subrepresentations
        // over F_2 (graphs of the two-dimensional identification).
        let i2 = build_example_rep("c2", "i2", 2).unwrap();
        let table = enumerate_subreps(&i2, BUDGET).unwrap();
        assert_eq!(table.get(&[1, 1]), QScalar::from_int(1, 3));
        // Triple-valuation rep k^3 -> K^2: the K-lines of K^2 number 1 + 8.
        let i4 = build_example_rep("g2", "i4", 2).unwrap();
        let table = enumerate_subreps(&i4, BUDGET).unwrap();
        assert_eq!(table.get(&[0, 1]), QScalar::from_int(1, 9));
        // Two-vertex equal-valuation identity map.
        let i1 = build_example_rep("a2", "i1", 3).unwrap();
        let table = enumerate_subreps(&i1, BUDGET).unwrap();
        let expect: BTreeMap<Vec<i64>, QScalar> = [
            (vec![0, 0], QScalar::one(1)),
            (vec![0, 1], QScalar::one(1)),
            (vec![1, 1], QScalar::one(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(table.entries, expect);
    }

    #[test]
    fn budget_is_enforced() {
        let p5 = build_example_rep("kronecker", "p5", 2).unwrap();
        assert!(matches!(enumerate_subreps(&p5, 10), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for n in 0..=2i64 {
            for side in [KroneckerSide::Preprojective, KroneckerSide::Preinjective] {
                let name = match side {
                    KroneckerSide::Preprojective => format!("p{n}"),
                    KroneckerSide::Preinjective => format!("i{n}"),
                };
                let rep = build_example_rep("kronecker", &name, 2).unwrap();
                let enumerated = enumerate_subreps(&rep, BUDGET).unwrap();
                let closed = kronecker_table(side, n).specialize(2).unwrap();
                assert_eq!(closed, enumerated, "side {side:?} n = {n}");
            }
        }
    }

    #[test]
    fn duality_swaps_the_box() {
        for n in 1..=2i64 {
            let rep = build_example_rep("kronecker", &format!("p{n}"), 2).unwrap();
            let table = enumerate_subreps(&rep, BUDGET).unwrap();
            let dual_table = enumerate_subreps(&rep.dual(), BUDGET).unwrap();
            for e in box_iter(&table.class) {
                let co: Vec<i64> = table.class.iter().zip(&e).map(|(&m, &x)| m - x).collect();
                assert_eq!(table.get(&e), dual_table.get(&co));
            }
        }
    }

    #[test]
    fn recursion_base_and_malformed_input() {
        let q = ValuedQuiver::rank2(1, 1);
        let t = recursion_counts(&q, &[0]).unwrap();
        assert_eq!(t.class, vec![1, 0]);
        assert_eq!(t.entries.len(), 2);
        assert!(recursion_counts(&q, &[]).is_err());
        assert!(recursion_counts(&q, &[2]).is_err());
        assert!(recursion_counts(&q, &[0, 0]).is_err());
    }

    #[test]
    fn recursion_is_order_independent_for_the_middle_module() {
        // Both admissible routes to the dimension-(1,1) module agree.
        let q = ValuedQuiver::rank2(1, 1);
        let a = recursion_counts(&q, &[0, 1]).unwrap();
        let b = recursion_counts(&q, &[1, 0]).unwrap();
        assert_eq!(a.class, vec![1, 1]);
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn recursion_matches_enumeration_on_unequal_valuations() {
        // Modules of the doubled and tripled edges, checked at two field
        // sizes against brute force.
        let cases: Vec<(&str, &str, i64, i64, Vec<usize>)> = vec![
            ("c2", "i1", 2, 1, vec![0, 1, 0]),
            ("c2", "i2", 2, 1, vec![0, 1]),
            ("g2", "i1", 3, 1, vec![0, 1, 0, 1, 0]),
            ("g2", "i2", 3, 1, vec![0, 1, 0]),
            ("g2", "i3", 3, 1, vec![0, 1]),
            ("g2", "i4", 3, 1, vec![0, 1, 0, 1]),
        ];
        for (family, name, b, c, seq) in cases {
            let (q, ctx) = rank2_ctx(b, c);
            let rec = recursion_counts(&q, &seq).unwrap();
            for p in [2u64, 3] {
                let rep = build_example_rep(family, name, p).unwrap();
                assert_eq!(rec.class, rep.class(), "{family}/{name} class");
                let enumerated = enumerate_subreps(&rep, BUDGET).unwrap();
                let specialized = rec
                    .to_polynomial(&ctx)
                    .unwrap()
                    .specialize(p as i64)
                    .unwrap();
                assert_eq!(specialized, enumerated, "{family}/{name} at p = {p}");
            }
        }
    }

    #[test]
    fn recursion_reproduces_closed_forms_symbolically() {
        let (q, ctx) = rank2_ctx(2, 2);
        for n in 0..=4i64 {
            // Walks starting at the sink give the (n, n+1) series; walks
            // starting at the source give the (n+1, n) series.
            let seq_p: Vec<usize> = (0..=n as usize).map(|t| (1 + t) % 2).collect();
            let seq_i: Vec<usize> = (0..=n as usize).map(|t| t % 2).collect();
            let rec_p = recursion_counts(&q, &seq_p).unwrap();
            let rec_i = recursion_counts(&q, &seq_i).unwrap();
            assert_eq!(rec_p.class, vec![n, n + 1]);
            assert_eq!(rec_i.class, vec![n + 1, n]);
            let closed_p = kronecker_table(KroneckerSide::Preprojective, n)
                .to_normalized(&ctx)
                .unwrap();
            let closed_i = kronecker_table(KroneckerSide::Preinjective, n)
                .to_normalized(&ctx)
                .unwrap();
            assert_eq!(rec_p.entries, closed_p.entries, "preprojective n = {n}");
            assert_eq!(rec_i.entries, closed_i.entries, "preinjective n = {n}");
        }
    }

    #[test]
    fn table_json_round_trip() {
        let t = kronecker_table(KroneckerSide::Preprojective, 2);
        let back = CountTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let (q, ctx) = rank2_ctx(3, 1);
        let norm = recursion_counts(&q, &[0, 1, 0, 1]).unwrap();
        assert_eq!(CountTable::from_json(&norm.to_json()).unwrap(), norm);
        let int = norm.to_polynomial(&ctx).unwrap().specialize(2).unwrap();
        assert_eq!(CountTable::from_json(&int.to_json()).unwrap(), int);
    }
}
