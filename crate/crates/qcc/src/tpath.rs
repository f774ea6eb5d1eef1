//! Polygon triangulations and the edge-path expansion of linear-type
//! cluster variables: diagonal flips, the rotation-rule exchange matrix,
//! enumeration of admissible edge paths, and the quantum path-sum
//! expansion of the variable attached to a diagonal.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{zeros, IMat};
use crate::scalar::QScalar;
use crate::torus::{SkewForm, TorusElement};

/// What to do with the coordinates of boundary edges in an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frozen {
    /// Keep all 2n+3 coordinates.
    Keep,
    /// Set boundary variables to 1, leaving an element of the rank-n
    /// torus (with trivial commutation, for engine comparisons).
    One,
}

/// A triangulation of a convex (n+3)-gon with vertices 0..n+2 listed
/// counterclockwise. The n diagonals carry labels 1..n in list order;
/// the boundary edge (i, i+1 mod n+3) carries label n+1+i.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangulation {
    n: usize,
    diagonals: Vec<(usize, usize)>,
}

fn normalize(a: usize, b: usize) -> (usize, usize) {
    if a <= b { (a, b) } else { (b, a) }
}

/// Do the chords (a,b) and (c,d) of a convex polygon on `nv` vertices
/// cross in the interior? Sharing an endpoint does not count.
fn chords_cross(nv: usize, ab: (usize, usize), cd: (usize, usize)) -> bool {
    let (a, b) = ab;
    let (c, d) = cd;
    if c == a || c == b || d == a || d == b {
        return false;
    }
    let inside = |x: usize| -> bool {
        let r = (x + nv - a) % nv;
        let s = (b + nv - a) % nv;
        r > 0 && r < s
    };
    inside(c) != inside(d)
}

impl Triangulation {
    pub fn new(n: usize, diagonals: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("a triangle has no diagonals to flip".into()));
        }
        let nv = n + 3;
        if diagonals.len() != n {
            return Err(Error::Invalid(format!(
                "an (n+3)-gon needs exactly {n} diagonals, got {}",
                diagonals.len()
            )));
        }
        let mut seen = BTreeSet::new();
        let mut norm = Vec::with_capacity(n);
        for &(a, b) in &diagonals {
            if a >= nv || b >= nv {
                return Err(Error::Invalid(format!("vertex out of range in ({a},{b})")));
            }
            let (a, b) = normalize(a, b);
            if a == b || b - a == 1 || (a == 0 && b == nv - 1) {
                return Err(Error::Invalid(format!(
                    "({a},{b}) is not a diagonal of the {nv}-gon"
                )));
            }
            if !seen.insert((a, b)) {
                return Err(Error::Invalid(format!("duplicate diagonal ({a},{b})")));
            }
            norm.push((a, b));
        }
        for i in 0..norm.len() {
            for j in i + 1..norm.len() {
                if chords_cross(nv, norm[i], norm[j]) {
                    return Err(Error::Invalid(format!(
                        "diagonals {:?} and {:?} cross",
                        norm[i], norm[j]
                    )));
                }
            }
        }
        Ok(Triangulation { n, diagonals: norm })
    }

    /// The fan triangulation: every diagonal from vertex 0.
    pub fn fan(n: usize) -> Self {
        let diagonals = (2..n + 2).map(|k| (0, k)).collect();
        Triangulation { n, diagonals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n + 3
    }

    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    /// Total number of edge labels (diagonals plus boundary).
    pub fn label_count(&self) -> usize {
        2 * self.n + 3
    }

    /// Endpoints of the edge with the given 1-based label.
    pub fn endpoints(&self, label: usize) -> Result<(usize, usize)> {
        let nv = self.vertex_count();
        if label >= 1 && label <= self.n {
            Ok(self.diagonals[label - 1])
        } else if label > self.n && label <= self.label_count() {
            let i = label - self.n - 1;
            Ok(normalize(i, (i + 1) % nv))
        } else {
            Err(Error::Invalid(format!("edge label {label} out of range")))
        }
    }

    /// Label of the edge joining u and v, if it is an edge of the
    /// triangulated polygon.
    pub fn label_of(&self, u: usize, v: usize) -> Option<usize> {
        let nv = self.vertex_count();
        if u >= nv || v >= nv || u == v {
            return None;
        }
        let (a, b) = normalize(u, v);
        if b - a == 1 {
            return Some(self.n + 1 + a);
        }
        if a == 0 && b == nv - 1 {
            return Some(self.n + 1 + b);
        }
        self.diagonals.iter().position(|&d| d == (a, b)).map(|i| i + 1)
    }

    /// The triangles (faces) of the triangulation, each as an increasing
    /// vertex triple. On a convex polygon a vertex triple is a face
    /// exactly when all three connecting segments are edges.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let nv = self.vertex_count();
        let mut out = Vec::with_capacity(self.n + 1);
        for u in 0..nv {
            for v in u + 1..nv {
                if self.label_of(u, v).is_none() {
                    continue;
                }
                for w in v + 1..nv {
                    if self.label_of(v, w).is_some() && self.label_of(u, w).is_some() {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out
    }

    /// Flip the k-th diagonal (0-based slot): replace it by the other
    /// diagonal of the quadrilateral formed by its two adjacent
    /// triangles. The slot keeps its label.
    pub fn flip(&self, k: usize) -> Result<Triangulation> {
        if k >= self.n {
            return Err(Error::Invalid(format!("no diagonal in slot {k}")));
        }
        let (a, b) = self.diagonals[k];
        let opposite: Vec<usize> = self
            .triangles()
            .into_iter()
            .filter(|&(u, v, w)| {
                let t = [u, v, w];
                t.contains(&a) && t.contains(&b)
            })
            .map(|(u, v, w)| *[u, v, w].iter().find(|&&x| x != a && x != b).unwrap())
            .collect();
        debug_assert_eq!(opposite.len(), 2, "a diagonal bounds exactly two faces");
        let mut diagonals = self.diagonals.clone();
        diagonals[k] = normalize(opposite[0], opposite[1]);
        Triangulation::new(self.n, diagonals)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "diagonals": self.diagonals.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| Error::Invalid("triangulation JSON needs integer n".into()))?
            as usize;
        let list = v["diagonals"]
            .as_array()
            .ok_or_else(|| Error::Invalid("triangulation JSON needs diagonals".into()))?;
        let mut diagonals = Vec::with_capacity(list.len());
        for d in list {
            let pair = d.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                Error::Invalid("each diagonal must be a pair [a,b]".into())
            })?;
            let a = pair[0].as_u64().ok_or_else(|| Error::Invalid("bad vertex".into()))?;
            let b = pair[1].as_u64().ok_or_else(|| Error::Invalid("bad vertex".into()))?;
            diagonals.push((a as usize, b as usize));
        }
        Triangulation::new(n, diagonals)
    }
}

/// Sign of the rotation from edge (s,p) to edge (s,r) about their shared
/// vertex s: +1 when counterclockwise (p precedes r going counterclockwise
/// from s), -1 when clockwise.
fn rotation_sign(nv: usize, s: usize, p: usize, r: usize) -> i64 {
    let rp = (p + nv - s) % nv;
    let rr = (r + nv - s) % nv;
    if rp < rr { 1 } else { -1 }
}

/// The signed edge-adjacency matrix over all 2n+3 labels: entry (i,j) is
/// +1/-1 when edges i+1 and j+1 bound a common triangle and the rotation
/// from the first to the second is counterclockwise/clockwise, else 0.
pub fn extended_adjacency(t: &Triangulation) -> IMat {
    let m = t.label_count();
    let nv = t.vertex_count();
    let mut out = zeros(m, m);
    for (u, v, w) in t.triangles() {
        let sides = [(u, v), (v, w), (u, w)];
        for &si in &sides {
            for &sj in &sides {
                if si == sj {
                    continue;
                }
                let li = t.label_of(si.0, si.1).expect("triangle side is an edge");
                let lj = t.label_of(sj.0, sj.1).expect("triangle side is an edge");
                // Shared vertex and the two far endpoints.
                let s = if si.0 == sj.0 || si.0 == sj.1 { si.0 } else { si.1 };
                let p = if si.0 == s { si.1 } else { si.0 };
                let r = if sj.0 == s { sj.1 } else { sj.0 };
                out[li - 1][lj - 1] = rotation_sign(nv, s, p, r);
            }
        }
    }
    out
}

/// The exchange matrix of a triangulation: the diagonal-diagonal block of
/// the signed adjacency (boundary edges excluded).
pub fn b_from_triangulation(t: &Triangulation) -> IMat {
    let full = extended_adjacency(t);
    (0..t.n()).map(|i| full[i][..t.n()].to_vec()).collect()
}

/// An edge path from a to b in a triangulated polygon: vertices
/// a_0..a_l and 1-based edge labels i_1..i_l, with the interleaving
/// conditions checked by the constructor: steps walk edges of the
/// triangulation, labels are pairwise distinct, the length is odd,
/// every even step crosses the target diagonal, and all crossing steps
/// appear in the order of their crossing points from a to b.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TPath {
    pub vertices: Vec<usize>,
    pub labels: Vec<usize>,
}

impl TPath {
    pub fn new(
        t: &Triangulation,
        a: usize,
        b: usize,
        vertices: Vec<usize>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        let nv = t.vertex_count();
        check_target_diagonal(t, a, b)?;
        if vertices.first() != Some(&a) || vertices.last() != Some(&b) {
            return Err(Error::Invalid("path must run from a to b".into()));
        }
        if vertices.iter().any(|&v| v >= nv) {
            return Err(Error::Invalid("path vertex out of range".into()));
        }
        if labels.len() + 1 != vertices.len() {
            return Err(Error::Invalid("one edge label per step required".into()));
        }
        for (k, &lab) in labels.iter().enumerate() {
            let ends = t.endpoints(lab)?;
            if ends != normalize(vertices[k], vertices[k + 1]) {
                return Err(Error::Invalid(format!(
                    "step {} does not walk edge {lab}",
                    k + 1
                )));
            }
        }
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Invalid("edge labels must be pairwise distinct".into()));
        }
        if labels.len() % 2 == 0 {
            return Err(Error::Invalid("path length must be odd".into()));
        }
        // Even steps must cross the target diagonal.
        for (idx, &lab) in labels.iter().enumerate() {
            let k = idx + 1;
            if k % 2 == 0 && !chords_cross(nv, (a, b), t.endpoints(lab)?) {
                return Err(Error::Invalid(format!("step {k} must cross the diagonal")));
            }
        }
        // All crossing steps are ordered by closeness of their crossing
        // point to a (combinatorial comparison of arc positions).
        let crossing: Vec<(usize, usize)> = labels
            .iter()
            .enumerate()
            .filter(|&(_, &lab)| chords_cross(nv, (a, b), t.endpoints(lab).unwrap()))
            .map(|(idx, &lab)| (idx, lab))
            .collect();
        for i in 0..crossing.len() {
            for j in i + 1..crossing.len() {
                let ei = t.endpoints(crossing[i].1)?;
                let ej = t.endpoints(crossing[j].1)?;
                if !crossing_closer(nv, (a, b), ei, ej) {
                    return Err(Error::Invalid(format!(
                        "crossing steps {} and {} are out of order",
                        crossing[i].0 + 1,
                        crossing[j].0 + 1
                    )));
                }
            }
        }
        Ok(TPath { vertices, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The exponent vector of the path: +1 at odd-step labels, -1 at
    /// even-step labels (coordinates are label-1).
    pub fn weight(&self, label_count: usize) -> Vec<i64> {
        let mut w = vec![0i64; label_count];
        for (idx, &lab) in self.labels.iter().enumerate() {
            w[lab - 1] += if (idx + 1) % 2 == 1 { 1 } else { -1 };
        }
        w
    }
}

fn check_target_diagonal(t: &Triangulation, a: usize, b: usize) -> Result<()> {
    let nv = t.vertex_count();
    if a >= nv || b >= nv || a == b {
        return Err(Error::Invalid(format!("({a},{b}) is not a vertex pair")));
    }
    let (x, y) = normalize(a, b);
    if y - x == 1 || (x == 0 && y == nv - 1) {
        return Err(Error::AdjacentVertices(format!(
            "vertices {a} and {b} are adjacent; no diagonal joins them"
        )));
    }
    Ok(())
}

/// Combinatorial order of crossing points along the diagonal (a,b): both
/// chords cross (a,b) and neither crosses the other, so the chord whose
/// endpoints sit no further from a along both arcs crosses first.
fn crossing_closer(
    nv: usize,
    ab: (usize, usize),
    e1: (usize, usize),
    e2: (usize, usize),
) -> bool {
    let (a, b) = ab;
    let rel = |x: usize| (x + nv - a) % nv;
    let split = |e: (usize, usize)| -> (usize, usize) {
        // Endpoint on the counterclockwise arc from a to b first.
        let s = rel(b);
        if rel(e.0) < s { (rel(e.0), rel(e.1)) } else { (rel(e.1), rel(e.0)) }
    };
    let (c1, d1) = split(e1);
    let (c2, d2) = split(e2);
    c1 <= c2 && d1 >= d2 && (c1, d1) != (c2, d2)
}

/// Exact crossing parameter of the chord `cd` along the segment from a to
/// b, with polygon vertex k placed at the rational point (k, k^2): the
/// vertices are in convex position and counterclockwise, so chord
/// combinatorics agree with the abstract polygon while intersection
/// ordering becomes exact arithmetic.
fn crossing_parameter(ab: (usize, usize), cd: (usize, usize)) -> BigRational {
    let pt = |v: usize| -> (BigRational, BigRational) {
        let t = BigRational::from_integer(BigInt::from(v as i64));
        (t.clone(), &t * &t)
    };
    let (ax, ay) = pt(ab.0);
    let (bx, by) = pt(ab.1);
    let (cx, cy) = pt(cd.0);
    let (dx, dy) = pt(cd.1);
    let cross = |ux: &BigRational, uy: &BigRational, vx: &BigRational, vy: &BigRational| {
        ux * vy - uy * vx
    };
    let (abx, aby) = (&bx - &ax, &by - &ay);
    let (cdx, cdy) = (&dx - &cx, &dy - &cy);
    let (acx, acy) = (&cx - &ax, &cy - &ay);
    cross(&acx, &acy, &cdx, &cdy) / cross(&abx, &aby, &cdx, &cdy)
}

/// All admissible edge paths from a to b, sorted. Errors with
/// `AdjacentVertices` when (a,b) is not a diagonal of the polygon. Every
/// returned path has passed the constructor's independent validation.
pub fn enumerate_tpaths(t: &Triangulation, a: usize, b: usize) -> Result<Vec<TPath>> {
    check_target_diagonal(t, a, b)?;
    let nv = t.vertex_count();
    let m = t.label_count();
    if m >= 64 {
        return Err(Error::Invalid(
            "path enumeration is limited to polygons with at most 63 edges".into(),
        ));
    }
    // Incidence lists and geometric crossing ranks.
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    let mut crossing_rank: Vec<Option<usize>> = vec![None; m + 1];
    let mut crossings: Vec<(BigRational, usize)> = Vec::new();
    for lab in 1..=m {
        let (u, v) = t.endpoints(lab)?;
        incident[u].push((v, lab));
        incident[v].push((u, lab));
        if chords_cross(nv, (a, b), (u, v)) {
            crossings.push((crossing_parameter((a, b), (u, v)), lab));
        }
    }
    crossings.sort();
    for (rank, (_, lab)) in crossings.iter().enumerate() {
        crossing_rank[*lab] = Some(rank);
    }

    struct Dfs<'a> {
        t: &'a Triangulation,
        a: usize,
        b: usize,
        incident: &'a [Vec<(usize, usize)>],
        crossing_rank: &'a [Option<usize>],
        out: Vec<TPath>,
    }
    impl Dfs<'_> {
        fn walk(
            &mut self,
            cur: usize,
            used: u64,
            last_rank: Option<usize>,
            vertices: &mut Vec<usize>,
            labels: &mut Vec<usize>,
        ) -> Result<()> {
            if cur == self.b && labels.len() % 2 == 1 {
                let path =
                    TPath::new(self.t, self.a, self.b, vertices.clone(), labels.clone())?;
                self.out.push(path);
            }
            let next_even = (labels.len() + 1) % 2 == 0;
            for &(nbr, lab) in &self.incident[cur] {
                if used & (1 << lab) != 0 {
                    continue;
                }
                let rank = self.crossing_rank[lab];
                if next_even && rank.is_none() {
                    continue;
                }
                if let Some(r) = rank {
                    if last_rank.is_some_and(|lr| r <= lr) {
                        continue;
                    }
                }
                vertices.push(nbr);
                labels.push(lab);
                self.walk(nbr, used | (1 << lab), rank.or(last_rank), vertices, labels)?;
                vertices.pop();
                labels.pop();
            }
            Ok(())
        }
    }

    let mut dfs = Dfs { t, a, b, incident: &incident, crossing_rank: &crossing_rank, out: Vec::new() };
    let mut vertices = vec![a];
    let mut labels = Vec::new();
    dfs.walk(a, 0, None, &mut vertices, &mut labels)?;
    let mut out = dfs.out;
    out.sort();
    Ok(out)
}

/// The path-sum expansion of the variable attached to the diagonal (a,b):
/// the sum of X^((w)) over all admissible paths, each with coefficient 1.
/// With `Frozen::Keep` the exponents live on all 2n+3 edge coordinates
/// (commutation given by the signed edge adjacency); with `Frozen::One`
/// boundary coordinates are dropped and the result lives on the rank-n
/// torus with trivial commutation, the common frame used to compare
/// engines (the expansion itself fixes no frozen-variable quantization).
pub fn tpath_expand(
    t: &Triangulation,
    a: usize,
    b: usize,
    frozen: Frozen,
) -> Result<TorusElement> {
    let paths = enumerate_tpaths(t, a, b)?;
    let m = t.label_count();
    let form = match frozen {
        Frozen::Keep => SkewForm::new(1, extended_adjacency(t))?,
        Frozen::One => SkewForm::new(1, zeros(t.n(), t.n()))?,
    };
    let mut out = TorusElement::zero(&form);
    for p in &paths {
        let w = p.weight(m);
        let exp = match frozen {
            Frozen::Keep => w,
            Frozen::One => w[..t.n()].to_vec(),
        };
        out = &out + &TorusElement::term(&form, &exp, QScalar::one(1));
    }
    Ok(out)
}

/// Breadth-first flip exploration from a starting triangulation: every
/// reachable triangulation paired with a shortest flip sequence (slot
/// indices) that produces it. For a convex polygon this is all of them.
pub fn flip_orbit(start: &Triangulation) -> Vec<(Triangulation, Vec<usize>)> {
    let mut seen = BTreeSet::new();
    let mut queue = std::collections::VecDeque::new();
    let mut out = Vec::new();
    seen.insert(start.clone());
    queue.push_back((start.clone(), Vec::new()));
    while let Some((t, seq)) = queue.pop_front() {
        out.push((t.clone(), seq.clone()));
        for k in 0..t.n() {
            let next = t.flip(k).expect("slot index is in range");
            if seen.insert(next.clone()) {
                let mut s = seq.clone();
                s.push(k);
                queue.push_back((next, s));
            }
        }
    }
    out
}
