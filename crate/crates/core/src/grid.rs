//! The complete grid graph `K_t^n`.
//!
//! Vertices are `n`-tuples over `0..t`; two vertices are adjacent iff they
//! differ in exactly one coordinate. Internally every vertex is addressed by
//! its mixed-radix rank with the last coordinate least significant, so the
//! layer of a vertex is `rank % t` and its column is `rank / t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a complete grid `K_t^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    t: usize,
    n: usize,
    vertex_count: usize,
}

impl GridSpec {
    pub fn new(t: usize, n: usize) -> Result<Self> {
        if t < 2 || n < 1 {
            return Err(Error::InvalidGrid { t, n });
        }
        let vertex_count = checked_pow(t, n).ok_or(Error::Overflow("vertex count"))?;
        Ok(Self { t, n, vertex_count })
    }

    /// Side length: vertices per coordinate axis.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Degree of every vertex, `n(t - 1)`.
    pub fn degree(&self) -> usize {
        self.n * (self.t - 1)
    }

    /// `n * t^(n-1) * t(t-1)/2`, with overflow reported.
    pub fn edge_count(&self) -> Result<u64> {
        let t = self.t as u64;
        let per_line = t
            .checked_mul(t - 1)
            .map(|x| x / 2)
            .ok_or(Error::Overflow("edge count"))?;
        let lines = checked_pow_u64(t, self.n - 1).ok_or(Error::Overflow("edge count"))?;
        (self.n as u64)
            .checked_mul(lines)
            .and_then(|x| x.checked_mul(per_line))
            .ok_or(Error::Overflow("edge count"))
    }

    /// The grid spanned by the first `n - 1` coordinates (a layer), if any.
    pub fn layer_spec(&self) -> Option<GridSpec> {
        (self.n > 1).then(|| GridSpec {
            t: self.t,
            n: self.n - 1,
            vertex_count: self.vertex_count / self.t,
        })
    }

    /// Number of columns, `t^(n-1)`.
    pub fn column_count(&self) -> usize {
        self.vertex_count / self.t
    }

    pub fn contains(&self, rank: usize) -> bool {
        rank < self.vertex_count
    }

    pub fn rank(&self, v: &Vertex) -> Result<usize> {
        if v.coords.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.coords.len(),
            });
        }
        let mut rank = 0usize;
        for &c in &v.coords {
            if c >= self.t {
                return Err(Error::CoordinateOutOfRange {
                    value: c,
                    t: self.t,
                });
            }
            rank = rank * self.t + c;
        }
        Ok(rank)
    }

    /// Inverse of [`GridSpec::rank`]. `rank` must be in range.
    pub fn vertex(&self, rank: usize) -> Vertex {
        debug_assert!(self.contains(rank));
        let mut coords = vec![0; self.n];
        let mut r = rank;
        for c in coords.iter_mut().rev() {
            *c = r % self.t;
            r /= self.t;
        }
        Vertex { coords }
    }

    pub fn is_grid_edge(&self, u: &Vertex, v: &Vertex) -> Result<bool> {
        Ok(self.adjacent(self.rank(u)?, self.rank(v)?))
    }

    /// Adjacency on ranks. Out-of-range ranks are never adjacent.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edge_index(a, b).is_some()
    }

    /// Dense index of the edge `{a, b}` in `0..edge_count`, or `None` when
    /// the two ranks are not adjacent.
    ///
    /// Edges are grouped by the coordinate position they change, then by the
    /// line (the remaining coordinates), then by the unordered value pair.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        if a == b || !self.contains(a) || !self.contains(b) {
            return None;
        }
        let t = self.t;
        let pairs = t * (t - 1) / 2;
        let lines = self.vertex_count / t;
        let mut weight = 1usize;
        let mut found = None;
        for j in (0..self.n).rev() {
            let da = (a / weight) % t;
            let db = (b / weight) % t;
            if da != db {
                if found.is_some() {
                    return None;
                }
                found = Some((j, weight, da, db));
            }
            weight = weight.saturating_mul(t);
        }
        let (j, w, da, db) = found?;
        let line = (a / (w * t)) * w + a % w;
        let (x, y) = if da < db { (da, db) } else { (db, da) };
        let pair = x * (2 * t - x - 1) / 2 + (y - x - 1);
        Some((j * lines + line) * pairs + pair)
    }

    /// Every edge once, as `(lo, hi)` rank pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let t = self.t;
        (0..self.vertex_count).flat_map(move |a| {
            let mut out = Vec::new();
            let mut weight = 1usize;
            for _ in 0..self.n {
                let d = (a / weight) % t;
                for y in d + 1..t {
                    out.push((a, a + (y - d) * weight));
                }
                weight *= t;
            }
            out
        })
    }
}

/// A grid vertex by coordinates (0-indexed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    coords: Vec<usize>,
}

impl Vertex {
    pub fn new(coords: Vec<usize>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    /// The last coordinate.
    pub fn layer_of(&self) -> usize {
        *self
            .coords
            .last()
            .expect("vertex has at least one coordinate")
    }

    /// The first `n - 1` coordinates; empty when `n = 1`.
    pub fn column_of(&self) -> &[usize] {
        &self.coords[..self.coords.len().saturating_sub(1)]
    }
}

impl From<Vec<usize>> for Vertex {
    fn from(coords: Vec<usize>) -> Self {
        Self::new(coords)
    }
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Layer index of a vertex rank.
#[inline]
pub fn layer_of(rank: usize, t: usize) -> usize {
    rank % t
}

/// Column rank (rank within `K_t^(n-1)`) of a vertex rank.
#[inline]
pub fn column_of(rank: usize, t: usize) -> usize {
    rank / t
}

/// A walk given by vertex ranks. Validity as a trail (adjacent steps, no
/// repeated edge) is checked by [`Trail::is_trail`], not on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trail {
    vertices: Vec<usize>,
}

impl Trail {
    /// # Panics
    /// If `vertices` is empty.
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a trail has at least one vertex");
        Self { vertices }
    }

    pub fn single(v: usize) -> Self {
        Self { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// True iff every step is a grid edge and no edge repeats.
    pub fn is_trail(&self, spec: &GridSpec) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.steps()
            .all(|(a, b)| spec.edge_index(a, b).is_some_and(|e| seen.insert(e)))
    }

    /// Embed a trail of `K_t^(n-1)` into layer `k` of `K_t^n`.
    pub fn lift(&self, t: usize, k: usize) -> Result<Trail> {
        if k >= t {
            return Err(Error::LayerOutOfRange { k, t });
        }
        Ok(Trail {
            vertices: self.vertices.iter().map(|&v| v * t + k).collect(),
        })
    }

    /// Embed a trail of `K_t` (ranks `0..t`) into column `column` of `K_t^n`.
    pub fn into_column(self, t: usize, column: usize) -> Trail {
        Trail {
            vertices: self.vertices.into_iter().map(|x| column * t + x).collect(),
        }
    }

    /// Append `other`, whose first vertex must equal this trail's last.
    pub fn extend(&mut self, other: &Trail) -> Result<()> {
        if other.first() != self.last() {
            return Err(Error::EndpointMismatch(format!(
                "trail ends at {} but next piece starts at {}",
                self.last(),
                other.first()
            )));
        }
        self.vertices.extend_from_slice(&other.vertices[1..]);
        Ok(())
    }

    /// Cut out closed sub-walks at repeated vertices, leaving a path with the
    /// same endpoints whose edges are a subset of the original ones.
    pub fn simplify(&self) -> Trail {
        let mut out: Vec<usize> = Vec::with_capacity(self.vertices.len());
        for &v in &self.vertices {
            if let Some(pos) = out.iter().position(|&w| w == v) {
                out.truncate(pos + 1);
            } else {
                out.push(v);
            }
        }
        Trail { vertices: out }
    }

    pub fn to_vertices(&self, spec: &GridSpec) -> Vec<Vertex> {
        self.vertices.iter().map(|&r| spec.vertex(r)).collect()
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

fn checked_pow_u64(base: u64, exp: usize) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}
