//! Seeded random demand instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::demand::{choose_q, DemandEdge, DemandGraph};
use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// A perfect matching of all vertices.
    Pairing,
    /// A multigraph whose maximum degree is exactly `q`.
    Multigraph { q: usize },
}

/// Uniformly random perfect pairing of all vertices of `spec`.
pub fn random_pairing<R: Rng + ?Sized>(spec: GridSpec, rng: &mut R) -> Result<DemandGraph> {
    let nv = spec.vertex_count();
    if !nv.is_multiple_of(2) {
        return Err(Error::Generator(format!(
            "pairing needs an even vertex count, K_{}^{} has {nv}",
            spec.t(),
            spec.n()
        )));
    }
    let mut vs: Vec<usize> = (0..nv).collect();
    vs.shuffle(rng);
    let edges = vs
        .chunks_exact(2)
        .enumerate()
        .map(|(i, p)| DemandEdge::new(i as u64, p[0], p[1]))
        .collect();
    DemandGraph::new(spec, edges)
}

/// `degree` rounds of random matchings on the vertices; every vertex gets
/// degree `degree`, except one left out per round when the count is odd.
/// Parallel demands are allowed.
pub fn random_multigraph<R: Rng + ?Sized>(
    spec: GridSpec,
    degree: usize,
    rng: &mut R,
) -> Result<DemandGraph> {
    let nv = spec.vertex_count();
    let mut vs: Vec<usize> = (0..nv).collect();
    let mut edges = Vec::with_capacity(degree * nv / 2);
    for _ in 0..degree {
        vs.shuffle(rng);
        for p in vs.chunks_exact(2) {
            edges.push(DemandEdge::new(edges.len() as u64, p[0], p[1]));
        }
    }
    DemandGraph::new(spec, edges)
}

/// Instance generator behind the `gen` command. Multigraph mode checks the
/// budget `q <= floor(t/6) - 1` unless `unchecked`.
pub fn generate<R: Rng + ?Sized>(
    spec: GridSpec,
    mode: GenMode,
    unchecked: bool,
    rng: &mut R,
) -> Result<DemandGraph> {
    match mode {
        GenMode::Pairing => random_pairing(spec, rng),
        GenMode::Multigraph { q } => {
            if q == 0 || q % 2 != 0 {
                return Err(Error::Generator(format!(
                    "q = {q} must be even and positive"
                )));
            }
            if !unchecked && choose_q(spec.t(), q)? != q {
                return Err(Error::InfeasibleBudget {
                    t: spec.t(),
                    delta: q,
                });
            }
            random_multigraph(spec, q, rng)
        }
    }
}
