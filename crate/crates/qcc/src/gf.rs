//! Small finite fields F_{p^m} with deterministic construction, subfield
//! embeddings, and the linear algebra needed to enumerate subspaces.
//!
//! Elements are coefficient vectors over F_p modulo a fixed monic
//! irreducible. The modulus is chosen deterministically: the first
//! irreducible when the non-leading coefficients (a_{m-1}, ..., a_0) are
//! read as a base-p integer and counted upward. Embeddings map the
//! subfield generator to the smallest root (same numeric element order)
//! of the sub-modulus in the superfield, which makes every tower
//! reproducible without lookup tables.

use crate::error::{Error, Result};

/// Element of a [`FiniteField`]: coefficients c_0..c_{m-1} over F_p,
/// representing c_0 + c_1 x + ... modulo the field's modulus.
pub type Fel = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    m: usize,
    /// Monic irreducible modulus of degree m: coefficients of degree
    /// 0..m-1 (the leading 1 is implicit).
    modulus: Vec<u64>,
}

/// Build F_{p^m} with the deterministic modulus choice.
pub fn gf_make(p: u64, m: usize) -> FiniteField {
    assert!(m >= 1 && p >= 2, "field parameters must be positive");
    assert!(is_prime(p), "characteristic must be prime");
    if m == 1 {
        return FiniteField { p, m, modulus: vec![0] };
    }
    let total = p.pow(m as u32);
    for idx in 0..total {
        let mut c = decode_digits(idx, p, m);
        c.reverse(); // idx counts (a_{m-1},...,a_0) as base-p digits
        if is_irreducible(p, &c) {
            return FiniteField { p, m, modulus: c };
        }
    }
    unreachable!("an irreducible polynomial of every degree exists");
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn decode_digits(mut idx: u64, p: u64, m: usize) -> Vec<u64> {
    // Digits most-significant first: (a_{m-1}, ..., a_0).
    let mut out = vec![0; m];
    for slot in (0..m).rev() {
        out[m - 1 - slot] = (idx / p.pow(slot as u32)) % p;
        idx %= p.pow(slot as u32);
    }
    out
}

/// Test irreducibility of x^m + c_{m-1}x^{m-1} + ... + c_0 over F_p by
/// trial division with every monic polynomial of degree at most m/2.
fn is_irreducible(p: u64, c: &[u64]) -> bool {
    let m = c.len();
    if c[0] == 0 {
        return false; // divisible by x
    }
    let mut full: Vec<u64> = c.to_vec();
    full.push(1);
    for d in 1..=m / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut div = decode_digits(idx, p, d);
            div.reverse();
            div.push(1); // monic divisor of degree d
            if poly_rem_is_zero(p, &full, &div) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, num: &[u64], den: &[u64]) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (i, &dc) in den.iter().enumerate() {
                let t = rem[shift + i];
                rem[shift + i] = (t + p - (lead * dc) % p) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&x| x == 0)
}

impl FiniteField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Number of elements p^m.
    pub fn order(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    pub fn zero(&self) -> Fel {
        vec![0; self.m]
    }

    pub fn one(&self) -> Fel {
        self.from_int(1)
    }

    pub fn from_int(&self, v: u64) -> Fel {
        let mut e = self.zero();
        e[0] = v % self.p;
        e
    }

    /// The class of x (a generator of the field over F_p for m > 1).
    pub fn gen(&self) -> Fel {
        if self.m == 1 {
            self.one()
        } else {
            let mut e = self.zero();
            e[1] = 1;
            e
        }
    }

    pub fn is_zero(&self, a: &Fel) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &Fel, b: &Fel) -> Fel {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fel, b: &Fel) -> Fel {
        a.iter().zip(b).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &Fel) -> Fel {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn scalar_mul(&self, s: u64, a: &Fel) -> Fel {
        a.iter().map(|&x| (x * (s % self.p)) % self.p).collect()
    }

    pub fn mul(&self, a: &Fel, b: &Fel) -> Fel {
        // Schoolbook product then reduction by the modulus.
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // x^m = -modulus(lower part); reduce from the top down.
        for k in (self.m..prod.len()).rev() {
            let lead = prod[k];
            if lead != 0 {
                prod[k] = 0;
                for (i, &mc) in self.modulus.iter().enumerate() {
                    let slot = k - self.m + i;
                    prod[slot] = (prod[slot] + self.p * self.p - lead * mc % self.p) % self.p;
                }
            }
        }
        prod.truncate(self.m);
        prod
    }

    pub fn pow(&self, a: &Fel, mut e: u64) -> Fel {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Fel) -> Result<Fel> {
        if self.is_zero(a) {
            return Err(Error::Invalid("inversion of zero field element".into()));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Deterministic total order key: coefficients read as a base-p
    /// integer, least-significant coefficient in the lowest digit.
    pub fn element_key(&self, a: &Fel) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// The element with the given order key (inverse of `element_key`).
    pub fn element_from_key(&self, mut key: u64) -> Fel {
        let mut out = self.zero();
        for slot in out.iter_mut() {
            *slot = key % self.p;
            key /= self.p;
        }
        out
    }

    /// All field elements in key order.
    pub fn all_elements(&self) -> impl Iterator<Item = Fel> + '_ {
        (0..self.order()).map(|k| self.element_from_key(k))
    }

    /// Evaluate a polynomial with F_p coefficients at a field element.
    fn eval_prime_poly(&self, coeffs: &[u64], x: &Fel) -> Fel {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.from_int(c));
        }
        acc
    }
}

/// A ring embedding F_{p^s} -> F_{p^t} (s | t) fixing F_p, determined by
/// sending the subfield generator to the smallest root of the sub-modulus.
#[derive(Debug, Clone)]
pub struct Embedding {
    sub: FiniteField,
    sup: FiniteField,
    gen_image: Fel,
}

pub fn gf_embed(sub: &FiniteField, sup: &FiniteField) -> Result<Embedding> {
    if sub.p != sup.p {
        return Err(Error::Invalid("embedding requires equal characteristic".into()));
    }
    if sup.m % sub.m != 0 {
        return Err(Error::Invalid(format!(
            "degree {} does not divide degree {}",
            sub.m, sup.m
        )));
    }
    if sub.m == 1 {
        return Ok(Embedding { sub: sub.clone(), sup: sup.clone(), gen_image: sup.one() });
    }
    let mut poly = sub.modulus.clone();
    poly.push(1);
    for x in sup.all_elements() {
        if sup.is_zero(&sup.eval_prime_poly(&poly, &x)) {
            return Ok(Embedding { sub: sub.clone(), sup: sup.clone(), gen_image: x });
        }
    }
    unreachable!("the sub-modulus splits in any extension of divisible degree");
}

impl Embedding {
    pub fn sub(&self) -> &FiniteField {
        &self.sub
    }

    pub fn sup(&self) -> &FiniteField {
        &self.sup
    }

    pub fn apply(&self, a: &Fel) -> Fel {
        let mut acc = self.sup.zero();
        for &c in a.iter().rev() {
            acc = self.sup.mul(&acc, &self.gen_image);
            acc = self.sup.add(&acc, &self.sup.from_int(c));
        }
        acc
    }
}

/// Row-reduce `rows` in place over `f` to reduced echelon form; returns the
/// pivot column of each nonzero row (rows stay ordered, zero rows dropped).
pub fn rref(f: &FiniteField, rows: &mut Vec<Vec<Fel>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !f.is_zero(&rows[i][c]) {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = f.mul(&factor, &rows[r][j]);
                    rows[i][j] = f.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Reduce `v` against reduced-echelon `rows` (pivot columns `pivots`);
/// the result is zero iff v lies in the row space.
pub fn reduce_vector(f: &FiniteField, rows: &[Vec<Fel>], pivots: &[usize], v: &[Fel]) -> Vec<Fel> {
    let mut out = v.to_vec();
    for (row, &pc) in rows.iter().zip(pivots) {
        if !f.is_zero(&out[pc]) {
            let factor = out[pc].clone();
            for j in 0..out.len() {
                let t = f.mul(&factor, &row[j]);
                out[j] = f.sub(&out[j], &t);
            }
        }
    }
    out
}

pub fn in_row_space(f: &FiniteField, rows: &[Vec<Fel>], pivots: &[usize], v: &[Fel]) -> bool {
    reduce_vector(f, rows, pivots, v).iter().all(|x| f.is_zero(x))
}

/// The number of k-dimensional subspaces of F^n (for progress/budget
/// estimates): the Gaussian binomial evaluated at |F|.
pub fn subspace_count(f: &FiniteField, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = f.order() as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Enumerate every k-dimensional subspace of F^n exactly once, as the rows
/// of its unique reduced-echelon basis.
pub fn subspaces(f: &FiniteField, n: usize, k: usize) -> Vec<Vec<Vec<Fel>>> {
    assert!(k <= n, "subspace dimension exceeds ambient dimension");
    let mut out = Vec::new();
    let mut pivots = (0..k).collect::<Vec<usize>>();
    loop {
        emit_for_pivots(f, n, k, &pivots, &mut out);
        // Advance the pivot combination (lexicographic k-subsets of 0..n).
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

fn emit_for_pivots(
    f: &FiniteField,
    n: usize,
    k: usize,
    pivots: &[usize],
    out: &mut Vec<Vec<Vec<Fel>>>,
) {
    // Free cells: (row t, column c) with c > pivots[t] and c not a pivot.
    let mut free = Vec::new();
    for t in 0..k {
        for c in pivots[t] + 1..n {
            if !pivots.contains(&c) {
                free.push((t, c));
            }
        }
    }
    let q = f.order();
    let combos = q.pow(free.len() as u32);
    for mut idx in 0..combos {
        let mut basis = vec![vec![f.zero(); n]; k];
        for (t, &pc) in pivots.iter().enumerate() {
            basis[t][pc] = f.one();
        }
        for &(t, c) in &free {
            basis[t][c] = f.element_from_key(idx % q);
            idx /= q;
        }
        out.push(basis);
    }
}
