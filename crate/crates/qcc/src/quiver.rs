//! Valued quivers, matrix mutation, admissible sequences, and the root
//! lattice attached to a skew-symmetrizable exchange matrix.
//!
//! A valued quiver is a pair (B, D): an n x n integer exchange matrix B and
//! positive vertex valuations D = diag(d_1, ..., d_n) with DB
//! skew-symmetric (d_i b_ij = -d_j b_ji). An entry b_ij > 0 is read as
//! arrows from i to j.
//!
//! The module also carries the root-lattice structure used by the counting
//! engines: the Cartan counterpart C, the Euler form, the integer star
//! vectors *e and e*, simple reflections, and the rank-2 labeling of
//! negative real roots by integers outside {1, 2}.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{self, IMat};
use crate::torus::SkewForm;

/// A valued quiver (B, D) with DB skew-symmetric and zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedQuiver {
    b: IMat,
    d: Vec<i64>,
}

impl ValuedQuiver {
    pub fn new(b: IMat, d: Vec<i64>) -> Result<Self> {
        let n = b.len();
        if d.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(
                "exchange matrix must be square with matching valuations".into(),
            ));
        }
        if d.iter().any(|&x| x <= 0) {
            return Err(Error::Invalid("valuations must be positive".into()));
        }
        for i in 0..n {
            if b[i][i] != 0 {
                return Err(Error::Invalid(format!("diagonal entry b[{i}][{i}] must be 0")));
            }
            for j in 0..n {
                if d[i] * b[i][j] != -d[j] * b[j][i] {
                    return Err(Error::Invalid(format!(
                        "DB is not skew-symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(ValuedQuiver { b, d })
    }

    /// Rank-2 quiver with exchange matrix [[0, b], [-c, 0]] and valuations
    /// (c, b): one vertex carrying a degree-c field, one a degree-b field,
    /// joined by gcd(b, c) arrows.
    pub fn rank2(b: i64, c: i64) -> Self {
        assert!(b > 0 && c > 0);
        ValuedQuiver::new(vec![vec![0, b], vec![-c, 0]], vec![c, b])
            .expect("rank-2 data is always consistent")
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn b(&self) -> &IMat {
        &self.b
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    /// Number of arrow copies on the edge i -> j (only meaningful when
    /// b_ij > 0): gcd(|b_ij|, |b_ji|).
    pub fn arrow_copies(&self, i: usize, j: usize) -> i64 {
        self.b[i][j].abs().gcd(&self.b[j][i].abs())
    }

    /// True when no arrows leave i (b_ij <= 0 for all j).
    pub fn is_sink(&self, i: usize) -> bool {
        self.b[i].iter().all(|&x| x <= 0)
    }

    /// True when no arrows enter i (b_ij >= 0 for all j).
    pub fn is_source(&self, i: usize) -> bool {
        self.b[i].iter().all(|&x| x >= 0)
    }

    /// The quiver with exchange matrix mutated in direction k (valuations
    /// are unchanged by mutation).
    pub fn mutated(&self, k: usize) -> Self {
        ValuedQuiver {
            b: matrix_mutation(&self.b, k),
            d: self.d.clone(),
        }
    }

    /// Check the admissibility of a vertex sequence k_1, ..., k_{r+1}:
    /// consecutive entries differ, and each of k_1, ..., k_r is a sink or a
    /// source in the quiver mutated along the preceding entries. The final
    /// vertex is exempt. Out-of-range indices and the empty sequence are
    /// reported inadmissible.
    pub fn is_admissible(&self, seq: &[usize]) -> bool {
        if seq.is_empty() || seq.iter().any(|&k| k >= self.n()) {
            return false;
        }
        if seq.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        let mut q = self.clone();
        for &k in &seq[..seq.len() - 1] {
            if !q.is_sink(k) && !q.is_source(k) {
                return false;
            }
            q = q.mutated(k);
        }
        true
    }
}

/// Exchange-matrix mutation in direction k:
/// entries in row or column k flip sign; elsewhere
/// `b'_ij = b_ij + sgn(b_ik) [b_ik b_kj]_+`. Involutive.
pub fn matrix_mutation(b: &IMat, k: usize) -> IMat {
    let n = b.len();
    assert!(k < n, "mutation direction out of range");
    let mut out = linalg::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
            };
        }
    }
    out
}

/// The skew form Λ = -D B^{-1} canonically attached to an invertible
/// valued quiver. Satisfies ΛB = -BᵀΛ = -D exactly.
pub fn lambda_from_b(q: &ValuedQuiver) -> Result<SkewForm> {
    let n = q.n();
    let inv = linalg::rational_inverse(q.b())?;
    // λ_ij = -d_i (B^{-1})_ij; collect the lcm of denominators, then store
    // the integer matrix (lcm)·λ.
    let lam: Vec<Vec<num_rational::BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    -num_rational::BigRational::from_integer(q.d()[i].into()) * &inv[i][j]
                })
                .collect()
        })
        .collect();
    let mut den: num_bigint::BigInt = 1.into();
    for row in &lam {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let d: u32 = den
        .try_into()
        .map_err(|_| Error::Invalid("skew form denominator overflows".into()))?;
    let lamd: IMat = lam
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = x * num_rational::BigRational::from_integer(d.into());
                    debug_assert!(v.is_integer());
                    let vi: i64 = v.to_integer().try_into().expect("entry fits in i64");
                    vi
                })
                .collect()
        })
        .collect();
    SkewForm::new(d, lamd)
}

/// The root lattice of a valued quiver: Cartan counterpart, Euler form,
/// star vectors and simple reflections.
#[derive(Debug, Clone)]
pub struct RootContext {
    quiver: ValuedQuiver,
    cartan: IMat,
    gram: IMat,
}

impl RootContext {
    pub fn new(quiver: &ValuedQuiver) -> Self {
        let n = quiver.n();
        let (b, d) = (quiver.b(), quiver.d());
        let mut cartan = linalg::zeros(n, n);
        let mut gram = linalg::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                cartan[i][j] = if i == j { 2 } else { -b[i][j].abs() };
                // <α_i, α_j> = d_i if i = j, -max(0, d_i b_ij) otherwise.
                gram[i][j] = if i == j { d[i] } else { -(d[i] * b[i][j]).max(0) };
            }
        }
        RootContext { quiver: quiver.clone(), cartan, gram }
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }

    /// The Euler form <e, f> via the Gram matrix on simple classes.
    pub fn euler_form(&self, e: &[i64], f: &[i64]) -> i64 {
        let n = self.quiver.n();
        assert!(e.len() == n && f.len() == n);
        let mut s = 0;
        for i in 0..n {
            if e[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += e[i] * self.gram[i][j] * f[j];
            }
        }
        s
    }

    /// The integer vector *e with coordinates <α_i^∨, e> = e_i - Σ_j [b_ij]_+ e_j.
    pub fn star_left(&self, e: &[i64]) -> Vec<i64> {
        let b = self.quiver.b();
        (0..self.quiver.n())
            .map(|i| e[i] - b[i].iter().zip(e).map(|(&bij, &ej)| bij.max(0) * ej).sum::<i64>())
            .collect()
    }

    /// The integer vector e* with coordinates <e, α_i^∨> = e_i - Σ_j [-b_ij]_+ e_j.
    pub fn star_right(&self, e: &[i64]) -> Vec<i64> {
        let b = self.quiver.b();
        (0..self.quiver.n())
            .map(|i| {
                e[i] - b[i].iter().zip(e).map(|(&bij, &ej)| (-bij).max(0) * ej).sum::<i64>()
            })
            .collect()
    }

    /// Simple reflection σ_i(e) = e - (Σ_j c_ij e_j) α_i from the Cartan
    /// counterpart; an involution.
    pub fn reflect(&self, i: usize, e: &[i64]) -> Vec<i64> {
        let mut out = e.to_vec();
        let s: i64 = self.cartan[i].iter().zip(e).map(|(&c, &x)| c * x).sum();
        out[i] -= s;
        out
    }
}

/// Dimension vector of the indecomposable representation labeled by the
/// m-th cluster variable of the rank-2 algebra with exchange parameters
/// (b, c): the negative real root -α_m, for m outside {1, 2}.
///
/// The labels obey α_{m-1} + α_{m+1} = b·α_m (m odd) or c·α_m (m even),
/// anchored at α_0 = -α_2 and α_3 = -α_1. Root coordinates grow
/// exponentially for bc >= 4, so the walk is bounded: |m| beyond the
/// configured limit or an i64 overflow reports an error.
pub fn rank2_root(b: i64, c: i64, m: i64) -> Result<Vec<i64>> {
    assert!(b > 0 && c > 0);
    if m == 1 || m == 2 {
        return Err(Error::Invalid(
            "labels 1 and 2 are the initial cluster, not representation labels".into(),
        ));
    }
    const MAX_STEPS: i64 = 64;
    if !(-MAX_STEPS..=MAX_STEPS).contains(&m) {
        return Err(Error::Invalid(format!(
            "label {m} exceeds the supported walk length {MAX_STEPS}"
        )));
    }
    let coeff = |t: i64| if t.rem_euclid(2) == 1 { b } else { c };
    let overflow = || Error::Invalid("root coordinates overflow".into());
    let step = |cf: i64, cur: &[i64], other: &[i64]| -> Result<Vec<i64>> {
        cur.iter()
            .zip(other)
            .map(|(&x, &y)| cf.checked_mul(x).and_then(|p| p.checked_sub(y)).ok_or_else(overflow))
            .collect()
    };
    if m <= 0 {
        // Walk downward from (α_1, α_0 = -α_2).
        let mut upper = vec![1, 0];
        let mut cur = vec![0, -1];
        let mut t = 0;
        while t > m {
            let prev = step(coeff(t), &cur, &upper)?;
            upper = std::mem::replace(&mut cur, prev);
            t -= 1;
        }
        Ok(cur.iter().map(|&x| -x).collect())
    } else {
        // Walk upward from (α_2, α_3 = -α_1).
        let mut lower = vec![0, 1];
        let mut cur = vec![-1, 0];
        let mut t = 3;
        while t < m {
            let next = step(coeff(t), &cur, &lower)?;
            lower = std::mem::replace(&mut cur, next);
            t += 1;
        }
        Ok(cur.iter().map(|&x| -x).collect())
    }
}
