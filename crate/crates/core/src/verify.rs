//! Independent certification of routings, summary statistics, and an
//! exhaustive oracle for tiny instances.
//!
//! Nothing here trusts router bookkeeping: edge usage is rebuilt from the
//! trails alone.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::demand::{DemandGraph, DemandId};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Trail, Vertex};
use crate::router::Routing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    /// A demand has no trail.
    MissingDemand,
    /// A trail references an id that is not a demand.
    UnknownDemand,
    /// The same demand id has several trails.
    DuplicateDemand,
    /// Trail ends differ from the demand's endpoints.
    EndpointMismatch,
    /// A vertex rank is outside the grid.
    InvalidVertex,
    /// Consecutive trail vertices are not adjacent.
    NotAnEdge,
    /// A grid edge is used more than once.
    DuplicateEdge,
    /// The routing was produced for another grid.
    GridMismatch,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ViolationKind::MissingDemand => "MISSING_DEMAND",
            ViolationKind::UnknownDemand => "UNKNOWN_DEMAND",
            ViolationKind::DuplicateDemand => "DUPLICATE_DEMAND",
            ViolationKind::EndpointMismatch => "ENDPOINT_MISMATCH",
            ViolationKind::InvalidVertex => "INVALID_VERTEX",
            ViolationKind::NotAnEdge => "NOT_AN_EDGE",
            ViolationKind::DuplicateEdge => "DUPLICATE_EDGE",
            ViolationKind::GridMismatch => "GRID_MISMATCH",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub demands: Vec<DemandId>,
    pub edge: Option<(Vertex, Vertex)>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.demands.is_empty() {
            let ids: Vec<String> = self.demands.iter().map(ToString::to_string).collect();
            write!(f, " demands [{}]", ids.join(", "))?;
        }
        if let Some((a, b)) = &self.edge {
            write!(f, " edge {a}-{b}")?;
        }
        Ok(())
    }
}

/// Headline statistics of a routing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsBlock {
    /// Trail length (edges) to number of trails.
    pub length_histogram: BTreeMap<usize, usize>,
    pub max_trail_length: usize,
    /// `6n - 3`.
    pub length_bound: usize,
    pub edges_used: u64,
    pub total_edges: u64,
    pub max_degree: usize,
    /// `n(t-1) / log2 N`.
    pub degree_ratio_exact: f64,
    /// `t·n / log2 N`.
    pub degree_ratio_nominal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub stats: StatsBlock,
}

impl VerificationReport {
    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    /// Human-readable rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(if self.ok { "OK\n" } else { "FAILED\n" });
        for v in &self.violations {
            out.push_str(&format!("  {v}\n"));
        }
        out.push_str(&self.stats.render());
        out
    }
}

impl StatsBlock {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("trail length histogram:\n");
        for (len, count) in &self.length_histogram {
            out.push_str(&format!("  {len:>3}: {count}\n"));
        }
        out.push_str(&format!(
            "max trail length: {} (bound 6n-3 = {})\n",
            self.max_trail_length, self.length_bound
        ));
        let pct = if self.total_edges == 0 {
            0.0
        } else {
            100.0 * self.edges_used as f64 / self.total_edges as f64
        };
        out.push_str(&format!(
            "edges used: {} / {} ({pct:.2}%)\n",
            self.edges_used, self.total_edges
        ));
        out.push_str(&format!(
            "max degree / log2 N: {:.2} (exact n(t-1) = {})\n",
            self.degree_ratio_exact, self.max_degree
        ));
        out.push_str(&format!(
            "max degree / log2 N: {:.2} (t*n convention)\n",
            self.degree_ratio_nominal
        ));
        out
    }
}

/// `(n(t-1) / log2 t^n, t·n / log2 t^n)`, i.e. `((t-1)/log2 t, t/log2 t)`.
pub fn degree_ratio(spec: &GridSpec) -> (f64, f64) {
    let log_n = spec.n() as f64 * (spec.t() as f64).log2();
    let exact = spec.degree() as f64 / log_n;
    let nominal = (spec.t() * spec.n()) as f64 / log_n;
    (exact, nominal)
}

/// Certify `r` against the demands of `d` on grid `spec`.
pub fn verify(spec: &GridSpec, d: &DemandGraph, r: &Routing) -> VerificationReport {
    let mut violations = Vec::new();
    if r.spec() != spec || d.spec() != spec {
        violations.push(Violation {
            kind: ViolationKind::GridMismatch,
            demands: Vec::new(),
            edge: None,
        });
    }
    let demands: HashMap<DemandId, (usize, usize)> =
        d.edges().iter().map(|e| (e.id, (e.u, e.v))).collect();

    let mut seen: HashMap<DemandId, usize> = HashMap::new();
    for (id, _) in r.trails() {
        *seen.entry(*id).or_default() += 1;
    }
    for e in d.edges() {
        match seen.get(&e.id) {
            None => violations.push(Violation {
                kind: ViolationKind::MissingDemand,
                demands: vec![e.id],
                edge: None,
            }),
            Some(&c) if c > 1 => violations.push(Violation {
                kind: ViolationKind::DuplicateDemand,
                demands: vec![e.id],
                edge: None,
            }),
            _ => {}
        }
    }

    // `u32::MAX` marks an unused edge; the value is the index of the record
    // that first used it.
    let total_edges = spec.edge_count().unwrap_or(0);
    let mut ledger = vec![u32::MAX; total_edges as usize];
    let mut histogram = BTreeMap::new();
    let mut edges_used = 0u64;
    for (idx, (id, trail)) in r.trails().iter().enumerate() {
        *histogram.entry(trail.len()).or_insert(0) += 1;
        match demands.get(id) {
            None => violations.push(Violation {
                kind: ViolationKind::UnknownDemand,
                demands: vec![*id],
                edge: None,
            }),
            Some(&(u, v)) => {
                let ends = (trail.first(), trail.last());
                if ends != (u, v) && ends != (v, u) {
                    violations.push(Violation {
                        kind: ViolationKind::EndpointMismatch,
                        demands: vec![*id],
                        edge: None,
                    });
                }
            }
        }
        if trail.vertices().iter().any(|&x| !spec.contains(x)) {
            violations.push(Violation {
                kind: ViolationKind::InvalidVertex,
                demands: vec![*id],
                edge: None,
            });
            continue;
        }
        for (a, b) in trail.steps() {
            let edge = Some((spec.vertex(a), spec.vertex(b)));
            match spec.edge_index(a, b) {
                None => violations.push(Violation {
                    kind: ViolationKind::NotAnEdge,
                    demands: vec![*id],
                    edge,
                }),
                Some(e) => {
                    let owner = ledger[e];
                    if owner == u32::MAX {
                        ledger[e] = idx as u32;
                        edges_used += 1;
                    } else {
                        violations.push(Violation {
                            kind: ViolationKind::DuplicateEdge,
                            demands: vec![r.trails()[owner as usize].0, *id],
                            edge,
                        });
                    }
                }
            }
        }
    }

    let (exact, nominal) = degree_ratio(spec);
    let stats = StatsBlock {
        max_trail_length: histogram.keys().next_back().copied().unwrap_or(0),
        length_histogram: histogram,
        length_bound: 6 * spec.n() - 3,
        edges_used,
        total_edges,
        max_degree: spec.degree(),
        degree_ratio_exact: exact,
        degree_ratio_nominal: nominal,
    };
    VerificationReport {
        ok: violations.is_empty(),
        violations,
        stats,
    }
}

/// Longest trail the oracle enumerates.
pub const ORACLE_MAX_TRAIL: usize = 4;
const ORACLE_MAX_EDGES: u64 = 100;
const ORACLE_MAX_DEMANDS: usize = 8;

/// Exhaustive search for an edge-disjoint trail system on a small grid.
///
/// Demands are taken in the given order; for each one every trail of length
/// at most [`ORACLE_MAX_TRAIL`] over still-unused edges is tried, shortest
/// first. Returns `Ok(None)` when no such system exists.
pub fn oracle_solve(d: &DemandGraph) -> Result<Option<Routing>> {
    let spec = *d.spec();
    let edge_count = spec.edge_count()?;
    if edge_count > ORACLE_MAX_EDGES || d.len() > ORACLE_MAX_DEMANDS {
        return Err(Error::SizeLimit(format!(
            "{edge_count} edges, {} demands (limits {ORACLE_MAX_EDGES}, {ORACLE_MAX_DEMANDS})",
            d.len()
        )));
    }
    let neighbours: Vec<Vec<(usize, usize)>> = (0..spec.vertex_count())
        .map(|a| {
            (0..spec.vertex_count())
                .filter_map(|b| spec.edge_index(a, b).map(|e| (b, e)))
                .collect()
        })
        .collect();
    // candidate trails per demand, by increasing length
    let candidates: Vec<Vec<(Vec<usize>, Vec<usize>)>> = d
        .edges()
        .iter()
        .map(|e| {
            let mut found = Vec::new();
            for len in 1..=ORACLE_MAX_TRAIL {
                let mut walk = vec![e.u];
                let mut edges = Vec::new();
                enumerate_trails(&neighbours, e.v, len, &mut walk, &mut edges, &mut found);
            }
            found
        })
        .collect();
    let mut used = vec![false; edge_count as usize];
    let mut chosen = Vec::with_capacity(d.len());
    if backtrack(&candidates, &mut used, &mut chosen) {
        let trails = d
            .edges()
            .iter()
            .zip(&candidates)
            .zip(chosen)
            .map(|((e, options), c)| (e.id, Trail::new(options[c].0.clone())))
            .collect();
        Ok(Some(Routing::new(spec, trails)))
    } else {
        Ok(None)
    }
}

fn enumerate_trails(
    neighbours: &[Vec<(usize, usize)>],
    target: usize,
    len: usize,
    walk: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    found: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    let here = *walk.last().unwrap();
    if edges.len() == len {
        if here == target {
            found.push((walk.clone(), edges.clone()));
        }
        return;
    }
    for &(next, e) in &neighbours[here] {
        if edges.contains(&e) {
            continue;
        }
        walk.push(next);
        edges.push(e);
        enumerate_trails(neighbours, target, len, walk, edges, found);
        walk.pop();
        edges.pop();
    }
}

fn backtrack(
    candidates: &[Vec<(Vec<usize>, Vec<usize>)>],
    used: &mut [bool],
    chosen: &mut Vec<usize>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return true;
    }
    for (c, (_, edges)) in candidates[i].iter().enumerate() {
        if edges.iter().any(|&e| used[e]) {
            continue;
        }
        for &e in edges {
            used[e] = true;
        }
        chosen.push(c);
        if backtrack(candidates, used, chosen) {
            return true;
        }
        chosen.pop();
        for &e in edges {
            used[e] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::DemandEdge;

    fn grid(t: usize, n: usize) -> GridSpec {
        GridSpec::new(t, n).unwrap()
    }

    fn demands(spec: GridSpec, pairs: &[(usize, usize)]) -> DemandGraph {
        DemandGraph::new(
            spec,
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| DemandEdge::new(i as u64, u, v))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn valid_single_edge() {
        let g = grid(3, 2);
        let d = demands(g, &[(0, 1)]);
        let r = Routing::new(g, vec![(0, Trail::new(vec![0, 1]))]);
        let rep = verify(&g, &d, &r);
        assert!(rep.ok, "{}", rep.render());
        assert_eq!(rep.stats.edges_used, 1);
        assert_eq!(rep.stats.total_edges, 18);
    }

    #[test]
    fn shared_edge_is_duplicate() {
        let g = grid(3, 2);
        // (0,0)=0, (0,1)=1, (0,2)=2
        let d = demands(g, &[(0, 1), (0, 2)]);
        let r = Routing::new(
            g,
            vec![(0, Trail::new(vec![0, 1])), (1, Trail::new(vec![0, 1, 2]))],
        );
        let rep = verify(&g, &d, &r);
        assert!(!rep.ok);
        assert_eq!(rep.violations.len(), 1);
        let v = &rep.violations[0];
        assert_eq!(v.kind, ViolationKind::DuplicateEdge);
        assert_eq!(v.demands, vec![0, 1]);
        assert_eq!(
            v.edge,
            Some((Vertex::new(vec![0, 0]), Vertex::new(vec![0, 1])))
        );
    }

    #[test]
    fn non_adjacent_step() {
        let g = grid(3, 2);
        // (0,0) to (1,1) is not an edge
        let d = demands(g, &[(0, 4)]);
        let r = Routing::new(g, vec![(0, Trail::new(vec![0, 4]))]);
        let rep = verify(&g, &d, &r);
        assert!(!rep.ok);
        assert_eq!(rep.count(ViolationKind::NotAnEdge), 1);
    }

    #[test]
    fn coverage_and_endpoints() {
        let g = grid(3, 1);
        let d = demands(g, &[(0, 1), (1, 2)]);
        let r = Routing::new(
            g,
            vec![(0, Trail::new(vec![0, 2])), (7, Trail::new(vec![1, 2]))],
        );
        let rep = verify(&g, &d, &r);
        assert_eq!(rep.count(ViolationKind::EndpointMismatch), 1);
        assert_eq!(rep.count(ViolationKind::MissingDemand), 1);
        assert_eq!(rep.count(ViolationKind::UnknownDemand), 1);

        let r = Routing::new(g, vec![(0, Trail::new(vec![0, 5]))]);
        assert_eq!(verify(&g, &d, &r).count(ViolationKind::InvalidVertex), 1);

        let reversed = Routing::new(
            g,
            vec![(0, Trail::new(vec![1, 0])), (1, Trail::new(vec![1, 2]))],
        );
        assert!(verify(&g, &d, &reversed).ok);
    }

    #[test]
    fn degree_ratio_values() {
        let (exact, nominal) = degree_ratio(&grid(18, 3));
        // independent: t / log2 t and (t - 1) / log2 t via ln
        let ln18 = 18f64.ln() / 2f64.ln();
        assert!((nominal - 18.0 / ln18).abs() < 1e-12);
        assert!((exact - 17.0 / ln18).abs() < 1e-12);
        assert!((nominal - 4.3166).abs() < 1e-3);
        assert!((exact - 4.0768).abs() < 1e-3);
        let (exact, _) = degree_ratio(&grid(2, 5));
        assert!((exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let k4 = grid(4, 1);
        let d = demands(k4, &[(0, 1), (0, 1), (0, 1)]);
        let r = oracle_solve(&d)
            .unwrap()
            .expect("three routes exist in K_4");
        assert!(verify(&k4, &d, &r).ok);

        let k3 = grid(3, 1);
        let d = demands(k3, &[(0, 1), (0, 1), (0, 1)]);
        assert!(oracle_solve(&d).unwrap().is_none());

        let d = demands(k4, &[]);
        assert!(oracle_solve(&d).unwrap().unwrap().is_empty());

        let big = grid(6, 2);
        let d = demands(big, &[(0, 1)]);
        assert!(matches!(oracle_solve(&d), Err(Error::SizeLimit(_))));
    }
}
