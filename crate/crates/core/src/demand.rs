//! Demand multigraphs and the auxiliary column graph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::Multigraph;
use crate::grid::{column_of, GridSpec, Vertex};

pub type DemandId = u64;

/// One requested connection between two distinct vertex ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DemandEdge {
    pub id: DemandId,
    pub u: usize,
    pub v: usize,
}

impl DemandEdge {
    pub fn new(id: DemandId, u: usize, v: usize) -> Self {
        Self { id, u, v }
    }
}

/// A demand multigraph on the vertices of a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandGraph {
    spec: GridSpec,
    edges: Vec<DemandEdge>,
    q: Option<usize>,
}

impl DemandGraph {
    /// Validates ranges, rejects self-demands and repeated ids.
    pub fn new(spec: GridSpec, edges: Vec<DemandEdge>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(edges.len());
        for e in &edges {
            for r in [e.u, e.v] {
                if !spec.contains(r) {
                    return Err(Error::VertexOutOfRange(r));
                }
            }
            if e.u == e.v {
                return Err(Error::SelfDemand(e.id));
            }
            if !ids.insert(e.id) {
                return Err(Error::DuplicateDemandId(e.id));
            }
        }
        Ok(Self {
            spec,
            edges,
            q: None,
        })
    }

    /// Demands from a list of vertex pairs; ids are assigned `0..pairs.len()`.
    pub fn from_pairing(spec: GridSpec, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, (x, y))| Ok(DemandEdge::new(i as DemandId, spec.rank(x)?, spec.rank(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, edges)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn edges(&self) -> &[DemandEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The degree budget, once fixed.
    pub fn q(&self) -> Option<usize> {
        self.q
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.spec.vertex_count()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Maximum demand degree, `0` for an empty demand set.
    pub fn max_degree(&self) -> usize {
        max_degree(
            self.spec.vertex_count(),
            self.edges.iter().map(|e| (e.u, e.v)),
        )
    }

    /// Select the budget with [`choose_q`], or with `unchecked` the smallest
    /// even `q >= max(2, Δ)` regardless of `t`.
    pub fn fix_budget(&mut self, unchecked: bool) -> Result<usize> {
        let delta = self.max_degree();
        let q = if unchecked {
            even_at_least(delta.max(2))
        } else {
            choose_q(self.spec.t(), delta)?
        };
        self.q = Some(q);
        Ok(q)
    }

    /// Set an explicit budget; it must be even, at least 2 and cover Δ(D).
    pub fn with_budget(mut self, q: usize) -> Result<Self> {
        let degree = self.max_degree();
        if q < 2 || !q.is_multiple_of(2) || degree > q {
            return Err(Error::BudgetExceeded { degree, q });
        }
        self.q = Some(q);
        Ok(self)
    }
}

/// Largest admissible budget for side length `t`, `floor(t/6) - 1`.
pub fn budget_limit(t: usize) -> Option<usize> {
    (t / 6).checked_sub(1)
}

/// Smallest even `q` with `q >= delta` and `q >= 2`, provided it does not
/// exceed `floor(t/6) - 1`.
pub fn choose_q(t: usize, delta: usize) -> Result<usize> {
    let q = even_at_least(delta.max(2));
    match budget_limit(t) {
        Some(limit) if q <= limit => Ok(q),
        _ => Err(Error::InfeasibleBudget { t, delta }),
    }
}

fn even_at_least(x: usize) -> usize {
    x + x % 2
}

pub(crate) fn max_degree(vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut deg = vec![0usize; vertices];
    for (a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.into_iter().max().unwrap_or(0)
}

/// Partition into `(intra_column, cross_column)`; order is preserved.
pub fn split_demands(d: &DemandGraph) -> (Vec<DemandEdge>, Vec<DemandEdge>) {
    let t = d.spec.t();
    d.edges
        .iter()
        .partition(|e| column_of(e.u, t) == column_of(e.v, t))
}

/// Where an auxiliary edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeOrigin {
    Demand(DemandId),
    Dummy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuxEdge {
    pub a: usize,
    pub b: usize,
    pub origin: EdgeOrigin,
}

impl AuxEdge {
    pub fn is_dummy(&self) -> bool {
        self.origin == EdgeOrigin::Dummy
    }
}

/// Multigraph on the columns `V(K_t^(n-1))`, one edge per cross-column
/// demand plus dummy padding after [`regularize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxGraph {
    vertex_count: usize,
    edges: Vec<AuxEdge>,
}

impl AuxGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[AuxEdge] {
        &self.edges
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// The underlying multigraph; edge ids are positions in [`AuxGraph::edges`].
    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph::new(
            self.vertex_count,
            self.edges.iter().map(|e| (e.a, e.b)).collect(),
        )
        .expect("auxiliary edges are in range")
    }
}

/// Project cross-column demands onto their columns.
pub fn project(cross: &[DemandEdge], spec: &GridSpec) -> Result<AuxGraph> {
    let t = spec.t();
    let edges = cross
        .iter()
        .map(|e| {
            let (a, b) = (column_of(e.u, t), column_of(e.v, t));
            if a == b {
                return Err(Error::NotCrossColumn(e.id));
            }
            Ok(AuxEdge {
                a,
                b,
                origin: EdgeOrigin::Demand(e.id),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuxGraph {
        vertex_count: spec.column_count(),
        edges,
    })
}

/// Pad `h` with dummy edges until every vertex has degree exactly `r`.
///
/// Dummy edges join the two currently most deficient distinct vertices; a
/// lone deficient vertex receives dummy loops. Existing edges are kept in
/// place and the dummies are appended after them.
pub fn regularize(h: &AuxGraph, r: usize) -> Result<AuxGraph> {
    let degrees = h.degrees();
    let mut heap = BinaryHeap::with_capacity(h.vertex_count);
    for (v, &d) in degrees.iter().enumerate() {
        if d > r {
            return Err(Error::DegreeExceedsTarget {
                degree: d,
                target: r,
            });
        }
        if d < r {
            // max-heap on deficiency, ties to the smaller vertex
            heap.push((r - d, Reverse(v)));
        }
    }
    let total: usize = heap.iter().map(|(d, _)| d).sum();
    assert!(
        total.is_multiple_of(2),
        "total deficiency {total} is odd: r * |V(H)| must be even"
    );

    let mut edges = h.edges.clone();
    let dummy = |a, b| AuxEdge {
        a,
        b,
        origin: EdgeOrigin::Dummy,
    };
    while let Some((d1, Reverse(v1))) = heap.pop() {
        match heap.pop() {
            Some((d2, Reverse(v2))) => {
                edges.push(dummy(v1, v2));
                if d1 > 1 {
                    heap.push((d1 - 1, Reverse(v1)));
                }
                if d2 > 1 {
                    heap.push((d2 - 1, Reverse(v2)));
                }
            }
            None => {
                assert!(d1 % 2 == 0, "lone deficiency {d1} must be even");
                edges.extend((0..d1 / 2).map(|_| dummy(v1, v1)));
            }
        }
    }
    Ok(AuxGraph {
        vertex_count: h.vertex_count,
        edges,
    })
}
