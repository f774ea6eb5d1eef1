//! Finite-dimensional representations of valued quivers over finite fields.
//!
//! A representation places a vector space of dimension `dims[i]` over the
//! vertex field F_{p^(m·d_i)} at each vertex, and for each edge i -> j
//! (where b_ij > 0) a bundle of gcd(|b_ij|, |b_ji|) linear maps over the
//! common subfield F_{p^(m·gcd(d_i, d_j))}, acting between the vertex
//! spaces viewed as modules over that subfield (restriction of scalars).
//!
//! Restricted coordinates are fixed once and for all: a vertex-field
//! coordinate c splits into the tuple (u_0, ..., u_{r-1}) over the edge
//! field determined by c = sum_t embed(u_t) * g^t, where g is the vertex
//! field's canonical generator and r is the relative degree.

use crate::error::{Error, Result};
use crate::gf::{gf_embed, gf_make, rref, Embedding, Fel, FiniteField};
use crate::quiver::ValuedQuiver;
use num_integer::Integer;
use serde_json::{json, Value};

/// One edge's bundle of matrices. Each matrix is row-major over the edge
/// field, with shape (dims[to] * d_to / g) x (dims[from] * d_from / g)
/// where g = gcd(d_from, d_to).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepArrow {
    pub from: usize,
    pub to: usize,
    pub mats: Vec<Vec<Vec<Fel>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedRep {
    quiver: ValuedQuiver,
    base_p: u64,
    base_m: usize,
    dims: Vec<usize>,
    arrows: Vec<RepArrow>,
}

impl ValuedRep {
    pub fn new(
        quiver: ValuedQuiver,
        base_p: u64,
        base_m: usize,
        dims: Vec<usize>,
        arrows: Vec<RepArrow>,
    ) -> Result<Self> {
        let n = quiver.n();
        if dims.len() != n {
            return Err(Error::Invalid("dimension vector length differs from rank".into()));
        }
        if base_m == 0 {
            return Err(Error::Invalid("base field degree must be positive".into()));
        }
        let rep = ValuedRep { quiver, base_p, base_m, dims, arrows };
        // Every positively-oriented edge must carry exactly one bundle of
        // the right multiplicity and shape.
        for i in 0..n {
            for j in 0..n {
                let bij = rep.quiver.b()[i][j];
                let groups: Vec<&RepArrow> =
                    rep.arrows.iter().filter(|a| a.from == i && a.to == j).collect();
                if bij <= 0 {
                    if !groups.is_empty() {
                        return Err(Error::Invalid(format!(
                            "arrow bundle {i}->{j} has no positive b entry"
                        )));
                    }
                    continue;
                }
                if groups.len() != 1 {
                    return Err(Error::Invalid(format!(
                        "edge {i}->{j} needs exactly one arrow bundle"
                    )));
                }
                let group = groups[0];
                if group.mats.len() as i64 != rep.quiver.arrow_copies(i, j) {
                    return Err(Error::Invalid(format!(
                        "edge {i}->{j} needs {} matrices, found {}",
                        rep.quiver.arrow_copies(i, j),
                        group.mats.len()
                    )));
                }
                let (rows, cols) = rep.restricted_shape(i, j);
                let ef = rep.edge_field(i, j);
                for mat in &group.mats {
                    if mat.len() != rows || mat.iter().any(|r| r.len() != cols) {
                        return Err(Error::Invalid(format!(
                            "edge {i}->{j} matrix must be {rows}x{cols}"
                        )));
                    }
                    for row in mat {
                        for entry in row {
                            if entry.len() != ef.degree()
                                || entry.iter().any(|&c| c >= rep.base_p)
                            {
                                return Err(Error::Invalid(format!(
                                    "edge {i}->{j} entries must be coefficient vectors \
                                     of length {} over F_{}",
                                    ef.degree(),
                                    rep.base_p
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(rep)
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn base_p(&self) -> u64 {
        self.base_p
    }

    pub fn base_m(&self) -> usize {
        self.base_m
    }

    /// Cardinality of the base field.
    pub fn base_order(&self) -> u64 {
        self.base_p.pow(self.base_m as u32)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension vector as the representation's class.
    pub fn class(&self) -> Vec<i64> {
        self.dims.iter().map(|&v| v as i64).collect()
    }

    pub fn arrows(&self) -> &[RepArrow] {
        &self.arrows
    }

    pub fn vertex_field(&self, i: usize) -> FiniteField {
        gf_make(self.base_p, self.base_m * self.quiver.d()[i] as usize)
    }

    pub fn edge_field(&self, i: usize, j: usize) -> FiniteField {
        let g = (self.quiver.d()[i] as usize).gcd(&(self.quiver.d()[j] as usize));
        gf_make(self.base_p, self.base_m * g)
    }

    /// (rows, cols) of an edge matrix in restricted coordinates.
    pub fn restricted_shape(&self, i: usize, j: usize) -> (usize, usize) {
        let di = self.quiver.d()[i] as usize;
        let dj = self.quiver.d()[j] as usize;
        let g = di.gcd(&dj);
        (self.dims[j] * dj / g, self.dims[i] * di / g)
    }

    /// The dual representation: arrows reversed, matrices transposed over
    /// their edge fields. Subspaces correspond to annihilators whenever the
    /// vertex and edge fields coincide.
    pub fn dual(&self) -> ValuedRep {
        let n = self.quiver.n();
        let mut nb = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                nb[i][j] = -self.quiver.b()[i][j];
            }
        }
        let quiver = ValuedQuiver::new(nb, self.quiver.d().to_vec())
            .expect("negating b preserves validity");
        let arrows = self
            .arrows
            .iter()
            .map(|a| RepArrow {
                from: a.to,
                to: a.from,
                mats: a.mats.iter().map(|m| transpose_mat(m)).collect(),
            })
            .collect();
        ValuedRep {
            quiver,
            base_p: self.base_p,
            base_m: self.base_m,
            dims: self.dims.clone(),
            arrows,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": {"p": self.base_p, "m": self.base_m},
            "quiver": {"b": self.quiver.b(), "d": self.quiver.d()},
            "dims": self.dims,
            "arrows": self.arrows.iter().map(|a| json!({
                "from": a.from,
                "to": a.to,
                "copies": a.mats.len(),
                "matrices": a.mats,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("representation JSON: {what}"));
        let p = v["field"]["p"].as_u64().ok_or_else(|| bad("field.p"))?;
        let m = v["field"]["m"].as_u64().ok_or_else(|| bad("field.m"))? as usize;
        let b = parse_imat(&v["quiver"]["b"]).ok_or_else(|| bad("quiver.b"))?;
        let d = parse_ivec(&v["quiver"]["d"]).ok_or_else(|| bad("quiver.d"))?;
        let quiver = ValuedQuiver::new(b, d)?;
        let dims = v["dims"]
            .as_array()
            .ok_or_else(|| bad("dims"))?
            .iter()
            .map(|x| x.as_u64().map(|u| u as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("dims entries"))?;
        let mut arrows = Vec::new();
        for a in v["arrows"].as_array().ok_or_else(|| bad("arrows"))? {
            let from = a["from"].as_u64().ok_or_else(|| bad("arrow from"))? as usize;
            let to = a["to"].as_u64().ok_or_else(|| bad("arrow to"))? as usize;
            let mut mats = Vec::new();
            for mat in a["matrices"].as_array().ok_or_else(|| bad("matrices"))? {
                let mut rows = Vec::new();
                for row in mat.as_array().ok_or_else(|| bad("matrix rows"))? {
                    let mut out = Vec::new();
                    for entry in row.as_array().ok_or_else(|| bad("matrix row"))? {
                        let coeffs = entry
                            .as_array()
                            .ok_or_else(|| bad("matrix entry"))?
                            .iter()
                            .map(|c| c.as_u64())
                            .collect::<Option<Vec<_>>>()
                            .ok_or_else(|| bad("entry coefficients"))?;
                        out.push(coeffs);
                    }
                    rows.push(out);
                }
                mats.push(rows);
            }
            if a["copies"].as_u64() != Some(mats.len() as u64) {
                return Err(bad("copies disagrees with matrix count"));
            }
            arrows.push(RepArrow { from, to, mats });
        }
        ValuedRep::new(quiver, p, m, dims, arrows)
    }
}

fn transpose_mat(m: &[Vec<Fel>]) -> Vec<Vec<Fel>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

fn parse_imat(v: &Value) -> Option<Vec<Vec<i64>>> {
    v.as_array()?.iter().map(parse_ivec_value).collect()
}

fn parse_ivec(v: &Value) -> Option<Vec<i64>> {
    parse_ivec_value(v)
}

fn parse_ivec_value(v: &Value) -> Option<Vec<i64>> {
    v.as_array()?.iter().map(|x| x.as_i64()).collect()
}

/// Change of coordinates between a vertex field and one of its edge
/// subfields: converts vertex-field coefficients into tuples of edge-field
/// coefficients and back.
pub struct ScalarRestriction {
    vertex: FiniteField,
    edge: FiniteField,
    emb: Embedding,
    /// Relative degree [vertex : edge].
    r: usize,
    /// Inverse of the prime-field change-of-basis matrix (D x D).
    inv: Vec<Vec<u64>>,
}

impl ScalarRestriction {
    pub fn new(vertex: &FiniteField, edge: &FiniteField) -> Result<Self> {
        let emb = gf_embed(edge, vertex)?;
        let r = vertex.degree() / edge.degree();
        let dd = vertex.degree();
        let ed = edge.degree();
        let gv = vertex.gen();
        // Column (t * ed + s): coefficients of embed(x^s) * g^t.
        let mut cols = vec![vec![0u64; dd]; dd];
        let mut gpow = vertex.one();
        for t in 0..r {
            for s in 0..ed {
                let mut basis = edge.zero();
                basis[s] = 1;
                let val = vertex.mul(&emb.apply(&basis), &gpow);
                for (row, &coef) in val.iter().enumerate() {
                    cols[t * ed + s][row] = coef;
                }
            }
            gpow = vertex.mul(&gpow, &gv);
        }
        let inv = fp_inverse(vertex.p(), &cols_to_rows(&cols))?;
        Ok(ScalarRestriction { vertex: vertex.clone(), edge: edge.clone(), emb, r, inv })
    }

    pub fn relative_degree(&self) -> usize {
        self.r
    }

    /// Split a vertex-field element into its r edge-field components.
    pub fn to_edge(&self, c: &Fel) -> Vec<Fel> {
        let p = self.vertex.p();
        let dd = self.vertex.degree();
        let ed = self.edge.degree();
        let mut u = vec![0u64; dd];
        for (row, slot) in u.iter_mut().enumerate() {
            let mut acc = 0u64;
            for col in 0..dd {
                acc = (acc + self.inv[row][col] * c[col]) % p;
            }
            *slot = acc;
        }
        (0..self.r).map(|t| u[t * ed..(t + 1) * ed].to_vec()).collect()
    }

    /// Inverse of `to_edge`.
    pub fn embed_to_vertex(&self, u: &[Fel]) -> Fel {
        let gv = self.vertex.gen();
        let mut acc = self.vertex.zero();
        let mut gpow = self.vertex.one();
        for part in u {
            let term = self.vertex.mul(&self.emb.apply(part), &gpow);
            acc = self.vertex.add(&acc, &term);
            gpow = self.vertex.mul(&gpow, &gv);
        }
        acc
    }

    /// Restrict a whole vector over the vertex field to edge-field
    /// coordinates (blocks of r components per original coordinate).
    pub fn restrict_vector(&self, v: &[Fel]) -> Vec<Fel> {
        v.iter().flat_map(|c| self.to_edge(c)).collect()
    }

    /// An edge-field spanning set (in restricted coordinates) of the
    /// vertex-field span of `basis`.
    pub fn restrict_basis(&self, basis: &[Vec<Fel>]) -> Vec<Vec<Fel>> {
        let gv = self.vertex.gen();
        let mut out = Vec::with_capacity(basis.len() * self.r);
        for w in basis {
            let mut scaled = w.to_vec();
            for _ in 0..self.r {
                out.push(self.restrict_vector(&scaled));
                for c in scaled.iter_mut() {
                    *c = self.vertex.mul(c, &gv);
                }
            }
        }
        out
    }
}

fn cols_to_rows(cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = cols.len();
    (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect()
}

/// Invert a square matrix over F_p.
fn fp_inverse(p: u64, m: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let f = gf_make(p, 1);
    let n = m.len();
    let mut aug: Vec<Vec<Fel>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        vec![m[i][j] % p]
                    } else if j - n == i {
                        f.one()
                    } else {
                        f.zero()
                    }
                })
                .collect()
        })
        .collect();
    let pivots = rref(&f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.iter().map(|row| row[n..].iter().map(|e| e[0]).collect()).collect())
}

/// Construct the bundled example representations by family and name.
///
/// Families: "a2", "c2", "g2" (doubled edge toward a long root),
/// "kronecker" (doubled valuations on both ends). Names: "s1"/"s2" for
/// simples everywhere; "i1" (a2), "i1"/"i2" (c2), "i1".."i4" (g2);
/// "p<n>"/"i<n>" for the Kronecker preprojective/preinjective series.
pub fn build_example_rep(family: &str, name: &str, p: u64) -> Result<ValuedRep> {
    match family {
        "a2" => {
            let q = ValuedQuiver::rank2(1, 1);
            let dims = match name {
                "s1" => (1, 0),
                "s2" => (0, 1),
                "i1" => (1, 1),
                _ => return Err(unknown(family, name)),
            };
            let f = gf_make(p, 1);
            let mat = identity_block(&f, dims.1.min(dims.0), dims.1, dims.0);
            two_vertex_rep(q, p, dims, vec![mat])
        }
        "c2" => {
            let q = ValuedQuiver::rank2(2, 1);
            // Vertex 2 carries the quadratic extension; the single map is
            // base-field linear into its restricted coordinates.
            let f = gf_make(p, 1);
            let (dims, mat) = match name {
                "s1" => ((1, 0), identity_block(&f, 0, 0, 1)),
                "s2" => ((0, 1), identity_block(&f, 0, 2, 0)),
                "i1" => ((1, 1), identity_block(&f, 1, 2, 1)),
                "i2" => ((2, 1), identity_block(&f, 2, 2, 2)),
                _ => return Err(unknown(family, name)),
            };
            two_vertex_rep(q, p, dims, vec![mat])
        }
        "g2" => {
            let q = ValuedQuiver::rank2(3, 1);
            let f = gf_make(p, 1);
            let (dims, mat) = match name {
                "s1" => ((1, 0), identity_block(&f, 0, 0, 1)),
                "s2" => ((0, 1), identity_block(&f, 0, 3, 0)),
                "i1" => ((1, 1), identity_block(&f, 1, 3, 1)),
                "i2" => ((2, 1), identity_block(&f, 2, 3, 2)),
                "i3" => ((3, 1), identity_block(&f, 3, 3, 3)),
                "i4" => {
                    // k^3 -> K^2 by (u1, u2, u3) -> (u1 + u3*g, u2 + u3*g^2)
                    // with g the cubic generator: three inclusion lines in
                    // general position, so the map is injective and no
                    // 2-dimensional subspace lands inside a single K-line.
                    let mut m = identity_block(&f, 0, 6, 3);
                    m[0][0] = f.one();
                    m[3][1] = f.one();
                    m[1][2] = f.one();
                    m[5][2] = f.one();
                    ((3, 2), m)
                }
                _ => return Err(unknown(family, name)),
            };
            two_vertex_rep(q, p, dims, vec![mat])
        }
        "kronecker" => {
            let q = ValuedQuiver::rank2(2, 2);
            let k = gf_make(p, 2);
            let Some(n) = name
                .strip_prefix('p')
                .or_else(|| name.strip_prefix('i'))
                .and_then(|s| s.parse::<usize>().ok())
            else {
                return Err(unknown(family, name));
            };
            if name.starts_with('p') {
                // dims (n, n+1); the two maps embed K^n into K^(n+1) at the
                // top and at the bottom.
                let a = shift_block(&k, n + 1, n, 0);
                let b = shift_block(&k, n + 1, n, 1);
                two_vertex_rep(q, p, (n, n + 1), vec![a, b])
            } else {
                // dims (n+1, n); the two maps project K^(n+1) onto K^n by
                // dropping the last (resp. first) coordinate.
                let a = transpose_mat(&shift_block(&k, n + 1, n, 0));
                let b = transpose_mat(&shift_block(&k, n + 1, n, 1));
                two_vertex_rep(q, p, (n + 1, n), vec![a, b])
            }
        }
        _ => Err(unknown(family, name)),
    }
}

fn unknown(family: &str, name: &str) -> Error {
    Error::Invalid(format!("unknown example representation {family}/{name}"))
}

/// rows x cols zero matrix over f with an identity in the top-left k x k
/// corner.
fn identity_block(f: &FiniteField, k: usize, rows: usize, cols: usize) -> Vec<Vec<Fel>> {
    let mut m = vec![vec![f.zero(); cols]; rows];
    for t in 0..k {
        m[t][t] = f.one();
    }
    m
}

/// rows x cols matrix with an identity block starting at row `offset`.
fn shift_block(f: &FiniteField, rows: usize, cols: usize, offset: usize) -> Vec<Vec<Fel>> {
    let mut m = vec![vec![f.zero(); cols]; rows];
    for t in 0..cols {
        m[t + offset][t] = f.one();
    }
    m
}

fn two_vertex_rep(
    q: ValuedQuiver,
    p: u64,
    dims: (usize, usize),
    mats: Vec<Vec<Vec<Fel>>>,
) -> Result<ValuedRep> {
    let copies = q.arrow_copies(0, 1) as usize;
    let mats = if mats.len() == copies {
        mats
    } else {
        // Single-matrix families with multiplicity-one edges.
        return Err(Error::Invalid("arrow bundle multiplicity mismatch".into()));
    };
    ValuedRep::new(q, p, 1, vec![dims.0, dims.1], vec![RepArrow { from: 0, to: 1, mats }])
}
