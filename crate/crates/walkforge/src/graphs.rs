//! Graph model with complex Hermitian edge weights, generators for the graph
//! families the walk engine cares about, Hamming-level aggregation, and the
//! JSON graph file format.
//!
//! A [`Graph`] stores the upper triangle (plus real diagonal) of its adjacency
//! matrix; Hermiticity is enforced structurally, so `adjacency()` is Hermitian
//! by construction. Complex off-diagonal weights are allowed and give chiral
//! walks; real self-loops are allowed because the extraction pipeline produces
//! them.

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numlin::CMatrix;

/// Largest hypercube dimension the generators accept (memory contract).
pub const MAX_HYPERCUBE_DIM: usize = 20;
/// Tolerance for treating a stored diagonal weight as real.
const DIAGONAL_IMAG_TOL: f64 = 1e-12;
/// Tolerance when checking conflicting duplicate edges on load.
const CONFLICT_TOL: f64 = 1e-12;

/// Vertex set plus Hermitian complex-weighted edge map.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    /// Upper-triangle storage: key (i, j) with i ≤ j.
    edges: BTreeMap<(usize, usize), C64>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(num_vertices: usize) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidArgument(
                "graph needs at least one vertex".into(),
            ));
        }
        Ok(Self {
            num_vertices,
            edges: BTreeMap::new(),
            labels: None,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Set A_ij (and implicitly A_ji = conj). Diagonal weights must be real.
    /// Overwrites any previous weight on the same pair.
    pub fn set_edge(&mut self, i: usize, j: usize, w: C64) -> Result<()> {
        let (key, value) = self.canonical(i, j, w)?;
        if value.norm() == 0.0 {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, value);
        }
        Ok(())
    }

    /// Like [`set_edge`](Self::set_edge) but a second write to the same pair
    /// must agree with the first (up to conjugation); used by the file loader
    /// so that `(0,1,w)` plus `(1,0,w')` with `w' ≠ conj(w)` is rejected.
    fn insert_edge_checked(&mut self, i: usize, j: usize, w: C64) -> Result<()> {
        let (key, value) = self.canonical(i, j, w)?;
        if let Some(prev) = self.edges.get(&key) {
            if (prev - value).norm() > CONFLICT_TOL {
                return Err(Error::NotHermitian {
                    residual: (prev - value).norm(),
                    tol: CONFLICT_TOL,
                });
            }
        }
        self.edges.insert(key, value);
        Ok(())
    }

    fn canonical(&self, i: usize, j: usize, w: C64) -> Result<((usize, usize), C64)> {
        let d = self.num_vertices;
        if i >= d || j >= d {
            return Err(Error::InvalidArgument(format!(
                "edge ({i}, {j}) out of range for {d} vertices"
            )));
        }
        if i == j {
            if w.im.abs() > DIAGONAL_IMAG_TOL {
                return Err(Error::NotHermitian {
                    residual: w.im.abs(),
                    tol: DIAGONAL_IMAG_TOL,
                });
            }
            return Ok(((i, i), C64::new(w.re, 0.0)));
        }
        if i < j {
            Ok(((i, j), w))
        } else {
            Ok(((j, i), w.conj()))
        }
    }

    /// Weight A_ij (conjugated automatically below the diagonal).
    pub fn weight(&self, i: usize, j: usize) -> C64 {
        let (key, flip) = if i <= j { ((i, j), false) } else { ((j, i), true) };
        match self.edges.get(&key) {
            Some(&w) if flip => w.conj(),
            Some(&w) => w,
            None => C64::new(0.0, 0.0),
        }
    }

    /// Iterate stored (upper-triangle) edges as (i, j, w) with i ≤ j.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    /// Dense Hermitian adjacency matrix.
    pub fn adjacency(&self) -> CMatrix {
        let d = self.num_vertices;
        let mut a = Array2::from_elem((d, d), C64::new(0.0, 0.0));
        for (&(i, j), &w) in &self.edges {
            a[[i, j]] = w;
            if i != j {
                a[[j, i]] = w.conj();
            }
        }
        a
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.num_vertices {
            return Err(Error::LengthMismatch {
                expected: self.num_vertices,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Vertex label: the stored one, a bit-string when the vertex count is a
    /// power of two, or the decimal index.
    pub fn label_of(&self, v: usize) -> String {
        if let Some(ls) = &self.labels {
            return ls[v].clone();
        }
        if self.num_vertices.is_power_of_two() && self.num_vertices > 1 {
            bitstring_label(v, self.num_vertices.trailing_zeros() as usize)
        } else {
            v.to_string()
        }
    }

    /// Neighbor indices of v (nonzero weight), self-loops excluded.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&(i, j), _) in &self.edges {
            if i == v && j != v {
                out.push(j);
            } else if j == v && i != v {
                out.push(i);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Bit-string label of a basis index; the leftmost character is qubit 0.
pub fn bitstring_label(v: usize, n: usize) -> String {
    (0..n)
        .map(|b| if (v >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parse a bit-string label back to (basis index, qubit count).
pub fn vertex_from_bitstring(s: &str) -> Result<(usize, usize)> {
    if s.is_empty() || s.len() > 63 {
        return Err(Error::InvalidArgument(format!(
            "bit-string `{s}` must have between 1 and 63 characters"
        )));
    }
    let mut v = 0usize;
    for (b, ch) in s.chars().enumerate() {
        match ch {
            '1' => v |= 1 << b,
            '0' => {}
            other => {
                return Err(Error::InvalidArgument(format!(
                    "bit-string `{s}` contains `{other}`"
                )))
            }
        }
    }
    Ok((v, s.len()))
}

/// n-dimensional hypercube: 2^n vertices labeled by n-bit strings, unit-weight
/// edges between strings at Hamming distance 1.
pub fn hypercube(n: usize) -> Result<Graph> {
    check_dimension(n)?;
    let d = 1usize << n;
    let mut g = Graph::new(d)?;
    for v in 0..d {
        for b in 0..n {
            let u = v ^ (1 << b);
            if v < u {
                g.set_edge(v, u, C64::new(1.0, 0.0))?;
            }
        }
    }
    g.set_labels((0..d).map(|v| bitstring_label(v, n)).collect())?;
    Ok(g)
}

/// Weighted path on n+1 vertices with couplings β_i = sqrt(i(n+1−i)) between
/// vertices i−1 and i, i = 1…n. These are the engineered weights under which
/// the line walk reproduces the hypercube walk level by level, and which give
/// perfect end-to-end transfer at s = π/2.
pub fn pst_line(n: usize) -> Result<Graph> {
    check_dimension(n)?;
    let mut g = Graph::new(n + 1)?;
    for (i, beta) in pst_couplings(n).iter().enumerate() {
        g.set_edge(i, i + 1, C64::new(*beta, 0.0))?;
    }
    g.set_labels((0..=n).map(|v| v.to_string()).collect())?;
    Ok(g)
}

/// The n couplings β_1 … β_n of [`pst_line`].
pub fn pst_couplings(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| ((i * (n + 1 - i)) as f64).sqrt())
        .collect()
}

/// Complete graph as the all-ones matrix J (diagonal included); J/d is
/// idempotent, which is what makes it a free term in graph extraction.
pub fn complete_allones(d: usize) -> Result<Graph> {
    let mut g = Graph::new(d)?;
    for i in 0..d {
        for j in i..d {
            g.set_edge(i, j, C64::new(1.0, 0.0))?;
        }
    }
    Ok(g)
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension n must be ≥ 1".into()));
    }
    if n > MAX_HYPERCUBE_DIM {
        return Err(Error::DimensionTooLarge {
            got: n,
            max: MAX_HYPERCUBE_DIM,
            hint: "",
        });
    }
    Ok(())
}

/// Probabilities aggregated by Hamming distance from an origin vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct HammingProfile {
    /// levels[k] = total probability at Hamming distance k, k = 0…n.
    pub levels: Vec<f64>,
}

impl HammingProfile {
    pub fn dimension(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.levels.iter().sum()
    }
}

/// Aggregate a per-vertex distribution over 2^n vertices into levels by
/// Hamming distance from `origin`.
pub fn hamming_profile(probabilities: &[f64], origin: usize) -> Result<HammingProfile> {
    let d = probabilities.len();
    if !d.is_power_of_two() || d < 2 {
        return Err(Error::LengthMismatch {
            expected: d.next_power_of_two().max(2),
            got: d,
        });
    }
    let n = d.trailing_zeros() as usize;
    if origin >= d {
        return Err(Error::InvalidArgument(format!(
            "origin {origin} out of range for {d} vertices"
        )));
    }
    let mut levels = vec![0.0; n + 1];
    for (v, p) in probabilities.iter().enumerate() {
        levels[(v ^ origin).count_ones() as usize] += p;
    }
    Ok(HammingProfile { levels })
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    num_vertices: usize,
    edges: Vec<EdgeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Serialize a graph to the JSON graph file format (upper triangle only).
pub fn to_json(g: &Graph) -> String {
    let file = GraphFile {
        num_vertices: g.num_vertices(),
        edges: g
            .edges()
            .map(|(i, j, w)| EdgeRecord {
                i,
                j,
                re: w.re,
                im: w.im,
            })
            .collect(),
        labels: g.labels().map(|ls| ls.to_vec()),
    };
    serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
}

/// Parse the JSON graph file format. Accepts edges in either orientation and
/// rejects conjugation conflicts and non-real diagonals as NotHermitian.
pub fn from_json(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::ParseError {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut g = Graph::new(file.num_vertices)?;
    for rec in &file.edges {
        g.insert_edge_checked(rec.i, rec.j, C64::new(rec.re, rec.im))?;
    }
    if let Some(labels) = file.labels {
        g.set_labels(labels)?;
    }
    Ok(g)
}

pub fn save(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(g))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text)
}
