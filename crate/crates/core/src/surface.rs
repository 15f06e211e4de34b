//! Ideal triangulations of closed punctured surfaces.
//!
//! Conventions, fixed throughout the crate:
//! - each triangle lists its three sides in clockwise order;
//! - corner `k` of a triangle is the vertex between side `k` and side `k+1`;
//! - side `k` runs clockwise from corner `k-1` to corner `k`;
//! - every edge is oriented canonically along the clockwise direction of its
//!   first occurrence, so that triangle lies to the right of the edge.
//!
//! Edge ids are 0-based in the API and 1-based in files and rendered output.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::qtorus::EpsilonForm;

/// A side slot `(triangle, side index)`.
pub type Side = (usize, usize);

#[derive(Debug, Serialize, Deserialize)]
struct TriangulationFile {
    edges: usize,
    triangles: Vec<[usize; 3]>,
    corners: Vec<[Value; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealTriangulation {
    num_edges: usize,
    triangles: Vec<[usize; 3]>,
    corners: Vec<[usize; 3]>,
    puncture_labels: Vec<String>,
    /// Both side slots of each edge; the first fixes the canonical direction.
    edge_sides: Vec<[Side; 2]>,
}

impl IdealTriangulation {
    /// Build from 0-based edge ids and per-corner puncture labels.
    pub fn new(num_edges: usize, triangles: Vec<[usize; 3]>, corner_labels: Vec<[String; 3]>) -> Result<Self> {
        let bad = |m: String| Error::InvalidTriangulation(m);
        if triangles.is_empty() {
            return Err(bad("no triangles".into()));
        }
        if corner_labels.len() != triangles.len() {
            return Err(bad(format!(
                "{} corner triples for {} triangles",
                corner_labels.len(),
                triangles.len()
            )));
        }
        let mut slots: Vec<Vec<Side>> = vec![Vec::new(); num_edges];
        for (t, tri) in triangles.iter().enumerate() {
            for (k, &e) in tri.iter().enumerate() {
                if e >= num_edges {
                    return Err(bad(format!("triangle {} uses unknown edge {}", t + 1, e + 1)));
                }
                slots[e].push((t, k));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(bad(format!("triangle {} is self-folded", t + 1)));
            }
        }
        let mut edge_sides = Vec::with_capacity(num_edges);
        for (e, s) in slots.iter().enumerate() {
            if s.len() != 2 {
                return Err(bad(format!("edge {} occurs in {} sides, expected 2", e + 1, s.len())));
            }
            edge_sides.push([s[0], s[1]]);
        }

        // Corner identifications induced by orientation-reversing side gluings.
        let mut uf = UnionFind::new(3 * triangles.len());
        for &[(t, k), (u, m)] in &edge_sides {
            uf.union(3 * t + (k + 2) % 3, 3 * u + m);
            uf.union(3 * t + k, 3 * u + (m + 2) % 3);
        }
        let mut label_ids: BTreeMap<&str, usize> = BTreeMap::new();
        let mut puncture_labels = Vec::new();
        let mut corners = Vec::with_capacity(triangles.len());
        for row in &corner_labels {
            let mut ids = [0; 3];
            for (k, l) in row.iter().enumerate() {
                let next = label_ids.len();
                let id = *label_ids.entry(l.as_str()).or_insert_with(|| {
                    puncture_labels.push(l.clone());
                    next
                });
                ids[k] = id;
            }
            corners.push(ids);
        }
        let mut class_of_label: BTreeMap<usize, usize> = BTreeMap::new();
        let mut label_of_class: BTreeMap<usize, usize> = BTreeMap::new();
        for t in 0..triangles.len() {
            for k in 0..3 {
                let class = uf.find(3 * t + k);
                let label = corners[t][k];
                if *class_of_label.entry(label).or_insert(class) != class
                    || *label_of_class.entry(class).or_insert(label) != label
                {
                    return Err(bad(format!(
                        "corner {} of triangle {} ({}) disagrees with the gluing",
                        k + 1,
                        t + 1,
                        puncture_labels[label]
                    )));
                }
            }
        }

        let tri = Self { num_edges, triangles, corners, puncture_labels, edge_sides };
        if !tri.is_connected() {
            return Err(bad("surface is disconnected".into()));
        }
        let chi = tri.euler_characteristic();
        if chi > 2 || chi % 2 != 0 {
            return Err(bad(format!("Euler characteristic {chi} is not 2 - 2g")));
        }
        Ok(tri)
    }

    /// Parse the JSON file format; edge ids in the file are 1-based.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: TriangulationFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("triangulation JSON: {e}")))?;
        let mut triangles = Vec::with_capacity(file.triangles.len());
        for tri in &file.triangles {
            let mut t = [0; 3];
            for (k, &e) in tri.iter().enumerate() {
                if e == 0 {
                    return Err(Error::Parse("edge ids are 1-based".into()));
                }
                t[k] = e - 1;
            }
            triangles.push(t);
        }
        let mut labels = Vec::with_capacity(file.corners.len());
        for row in &file.corners {
            let mut out: [String; 3] = Default::default();
            for (k, v) in row.iter().enumerate() {
                out[k] = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    other => return Err(Error::Parse(format!("corner label {other} is not a string or number"))),
                };
            }
            labels.push(out);
        }
        Self::new(file.edges, triangles, labels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = TriangulationFile {
            edges: self.num_edges,
            triangles: self.triangles.iter().map(|t| [t[0] + 1, t[1] + 1, t[2] + 1]).collect(),
            corners: self
                .corners
                .iter()
                .map(|c| c.map(|p| Value::String(self.puncture_labels[p].clone())))
                .collect(),
        };
        serde_json::to_string(&file).expect("serializable")
    }

    /// The once-punctured torus with two triangles.
    pub fn punctured_torus() -> Self {
        Self::from_json(include_str!("../fixtures/punctured_torus.json")).expect("bundled fixture")
    }

    /// The four-punctured sphere triangulated as a tetrahedron.
    pub fn sphere_4() -> Self {
        Self::from_json(include_str!("../fixtures/sphere_4.json")).expect("bundled fixture")
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_punctures(&self) -> usize {
        self.puncture_labels.len()
    }

    pub fn puncture_label(&self, p: usize) -> &str {
        &self.puncture_labels[p]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Edge on side `k` of triangle `t`.
    pub fn edge(&self, t: usize, k: usize) -> usize {
        self.triangles[t][k % 3]
    }

    /// Puncture at corner `k` of triangle `t`.
    pub fn corner(&self, t: usize, k: usize) -> usize {
        self.corners[t][k % 3]
    }

    pub fn edge_sides(&self, e: usize) -> [Side; 2] {
        self.edge_sides[e]
    }

    /// The side glued to `(t, k)`.
    pub fn opposite(&self, t: usize, k: usize) -> Side {
        let [a, b] = self.edge_sides[self.triangles[t][k]];
        if a == (t, k) {
            b
        } else {
            a
        }
    }

    /// Whether `(t, k)` is the side that fixes the canonical direction of its edge.
    pub fn is_canonical_side(&self, t: usize, k: usize) -> bool {
        self.edge_sides[self.triangles[t][k]][0] == (t, k)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_punctures() as i64 - self.num_edges as i64 + self.triangles.len() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.triangles.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let (u, _) = self.opposite(t, k);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Signed count of angular sectors: side `k` followed clockwise by side
    /// `k+1` contributes `+1` to `ε[edge k][edge k+1]`.
    pub fn epsilon_matrix(&self) -> EpsilonForm {
        let n = self.num_edges;
        let mut rows = vec![vec![0i64; n]; n];
        for tri in &self.triangles {
            for k in 0..3 {
                let (i, j) = (tri[k], tri[(k + 1) % 3]);
                rows[i][j] += 1;
                rows[j][i] -= 1;
            }
        }
        EpsilonForm::new(rows).expect("skew by construction")
    }

    pub fn epsilon(&self) -> Arc<EpsilonForm> {
        Arc::new(self.epsilon_matrix())
    }

    /// Doubled coordinates `μ` of the loop around puncture `p`: the number of
    /// ends of each edge at `p`.
    pub fn peripheral_vector(&self, p: usize) -> Result<Vec<i64>> {
        if p >= self.num_punctures() {
            return Err(Error::UnknownPuncture(p));
        }
        let mut mu = vec![0i64; self.num_edges];
        for (e, &[(t, k), _]) in self.edge_sides.iter().enumerate() {
            for c in [(k + 2) % 3, k] {
                if self.corners[t][c] == p {
                    mu[e] += 1;
                }
            }
        }
        Ok(mu)
    }

    /// Corners `(t, k)` at puncture `p`.
    pub fn corners_at(&self, p: usize) -> Vec<Side> {
        let mut out = Vec::new();
        for t in 0..self.triangles.len() {
            for k in 0..3 {
                if self.corners[t][k] == p {
                    out.push((t, k));
                }
            }
        }
        out
    }

    pub fn split(&self) -> SplitTriangulation {
        let biangles = self
            .edge_sides
            .iter()
            .enumerate()
            .map(|(e, &[right, left])| Biangle { edge: e, right, left })
            .collect();
        SplitTriangulation { triangulation: self.clone(), biangles }
    }
}

/// One biangle per edge. Both sides point along the canonical edge direction;
/// the canonical triangle lies to the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Biangle {
    pub edge: usize,
    pub right: Side,
    pub left: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTriangulation {
    pub triangulation: IdealTriangulation,
    pub biangles: Vec<Biangle>,
}

impl SplitTriangulation {
    pub fn num_biangles(&self) -> usize {
        self.biangles.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangulation.num_triangles()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Commutation exponents of edge elements `Z_e = Z_{t,k} ⊗ Z_{t',m}` in the
    /// tensor product of triangle algebras, summed slot pair by slot pair.
    fn sector_oracle(t: &IdealTriangulation) -> Vec<Vec<i64>> {
        let n = t.num_edges();
        let local = |k1: usize, k2: usize| match (k2 + 3 - k1) % 3 {
            1 => 1,
            2 => -1,
            _ => 0,
        };
        (0..n)
            .map(|e| {
                (0..n)
                    .map(|f| {
                        let mut s = 0;
                        for (te, ke) in t.edge_sides(e) {
                            for (tf, kf) in t.edge_sides(f) {
                                if te == tf {
                                    s += local(ke, kf);
                                }
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn punctured_torus_epsilon() {
        let t = IdealTriangulation::punctured_torus();
        let eps = t.epsilon_matrix();
        assert_eq!(eps.rows(), vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]);
        assert_eq!(eps.rows(), sector_oracle(&t));
        assert_eq!(t.num_punctures(), 1);
        assert_eq!(t.genus(), 1);
    }

    #[test]
    fn sphere_epsilon() {
        let t = IdealTriangulation::sphere_4();
        let eps = t.epsilon_matrix();
        assert_eq!(eps.rows(), sector_oracle(&t));
        for row in eps.rows() {
            assert!(row.iter().all(|x| (-2..=2).contains(x)));
        }
        assert_eq!(t.num_punctures(), 4);
        assert_eq!(t.genus(), 0);
    }

    #[test]
    fn epsilon_invariant_under_relabeling() {
        let t = IdealTriangulation::sphere_4();
        let mut tris: Vec<[usize; 3]> = t.triangles().to_vec();
        let mut labels: Vec<[String; 3]> =
            (0..4).map(|i| [0, 1, 2].map(|k| t.puncture_label(t.corner(i, k)).to_string())).collect();
        tris.reverse();
        labels.reverse();
        for (tri, lab) in tris.iter_mut().zip(labels.iter_mut()) {
            tri.rotate_left(1);
            lab.rotate_left(1);
        }
        let u = IdealTriangulation::new(6, tris, labels).unwrap();
        assert_eq!(u.epsilon_matrix(), t.epsilon_matrix());
    }

    #[test]
    fn peripheral_vectors() {
        let t = IdealTriangulation::punctured_torus();
        assert_eq!(t.peripheral_vector(0).unwrap(), vec![2, 2, 2]);
        assert_eq!(t.peripheral_vector(1), Err(Error::UnknownPuncture(1)));
        let s = IdealTriangulation::sphere_4();
        for p in 0..4 {
            let mu = s.peripheral_vector(p).unwrap();
            assert!(mu.iter().all(|&m| m == 0 || m == 1));
            assert_eq!(mu.iter().sum::<i64>(), 3);
        }
    }

    #[test]
    fn peripheral_vectors_span_kernel() {
        for t in [IdealTriangulation::punctured_torus(), IdealTriangulation::sphere_4()] {
            let eps = t.epsilon_matrix();
            for p in 0..t.num_punctures() {
                let mu = t.peripheral_vector(p).unwrap();
                assert!(eps.apply(&mu).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn split_counts() {
        let pt = IdealTriangulation::punctured_torus().split();
        assert_eq!((pt.num_triangles(), pt.num_biangles()), (2, 3));
        let s = IdealTriangulation::sphere_4().split();
        assert_eq!((s.num_triangles(), s.num_biangles()), (4, 6));
    }

    #[test]
    fn validation_errors() {
        let single = IdealTriangulation::from_json(r#"{"edges":2,"triangles":[[1,1,2]],"corners":[[0,0,0]]}"#);
        assert!(matches!(single, Err(Error::InvalidTriangulation(_))));
        let dangling = IdealTriangulation::from_json(r#"{"edges":3,"triangles":[[1,2,3]],"corners":[[0,0,0]]}"#);
        assert!(matches!(dangling, Err(Error::InvalidTriangulation(_))));
        let wrong_corners = IdealTriangulation::from_json(
            r#"{"edges":3,"triangles":[[1,2,3],[1,2,3]],"corners":[[0,0,0],[0,0,1]]}"#,
        );
        assert!(matches!(wrong_corners, Err(Error::InvalidTriangulation(_))));
        assert!(matches!(IdealTriangulation::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn json_round_trip() {
        let t = IdealTriangulation::sphere_4();
        assert_eq!(IdealTriangulation::from_json(&t.to_json()).unwrap(), t);
    }
}
