//! Recursive edge-disjoint routing in `K_t^n`.
//!
//! Each level splits the demands by column. Cross-column demands are
//! projected onto the column graph `H`, which is padded to `t·q`-regular,
//! 2-factorized and grouped into `t` layer subgraphs. A demand assigned to
//! layer `k` becomes a connector inside its source column, a middle demand
//! inside layer `k`, and a connector inside its target column. Layers recurse
//! one dimension down; columns are complete graphs solved directly.

mod complete;

pub use complete::{solve_complete, BaseOptions};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::demand::{project, regularize, split_demands, DemandEdge, DemandGraph, DemandId};
use crate::error::{Claim, Error, Result};
use crate::factorization::{group_factors, two_factorization, LayerAssignment};
use crate::grid::{column_of, layer_of, GridSpec, Trail};

use complete::route_complete;

/// Trails keyed by demand id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Routing {
    spec: GridSpec,
    trails: Vec<(DemandId, Trail)>,
}

impl Routing {
    pub fn new(spec: GridSpec, trails: Vec<(DemandId, Trail)>) -> Self {
        Self { spec, trails }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Records in stored order. Ids are not required to be unique here; the
    /// verifier reports duplicates.
    pub fn trails(&self) -> &[(DemandId, Trail)] {
        &self.trails
    }

    pub fn get(&self, id: DemandId) -> Option<&Trail> {
        self.trails.iter().find(|(i, _)| *i == id).map(|(_, t)| t)
    }

    pub fn len(&self) -> usize {
        self.trails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trails.is_empty()
    }

    pub fn max_trail_length(&self) -> usize {
        self.trails.iter().map(|(_, t)| t.len()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[derive(Default)]
pub struct SolveOptions {
    pub seed: u64,
    /// Worker threads for subproblem fan-out; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Accept degree budgets above `floor(t/6) - 1`.
    pub unchecked: bool,
    /// Permute the 2-factors before grouping them into layers.
    pub shuffle_factors: bool,
    /// Cut closed sub-walks out of the final trails.
    pub simplify: bool,
    pub base: BaseOptions,
}


/// Observed maxima of the layer and column demand degrees over all levels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub q: usize,
    pub max_layer_degree: usize,
    pub max_column_degree: usize,
    pub layer_subproblems: usize,
    pub column_subproblems: usize,
}

impl PipelineReport {
    fn merge(&mut self, other: &PipelineReport) {
        self.max_layer_degree = self.max_layer_degree.max(other.max_layer_degree);
        self.max_column_degree = self.max_column_degree.max(other.max_column_degree);
        self.layer_subproblems += other.layer_subproblems;
        self.column_subproblems += other.column_subproblems;
    }
}

/// A cross-column demand `u = (a, i)`, `v = (b, j)` rerouted through layer `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewrittenDemand {
    pub original_id: DemandId,
    pub layer: usize,
    /// `(a, i) - (a, k)`, absent when `i = k`.
    pub connector_u: Option<DemandEdge>,
    /// `(a, k) - (b, k)`.
    pub middle: DemandEdge,
    /// `(b, k) - (b, j)`, absent when `j = k`.
    pub connector_v: Option<DemandEdge>,
}

/// Replace a cross-column demand by its connector and middle demands. All
/// pieces carry the original id.
pub fn rewrite(d: &DemandEdge, k: usize, t: usize) -> Result<RewrittenDemand> {
    if k >= t {
        return Err(Error::LayerOutOfRange { k, t });
    }
    let (a, i) = (column_of(d.u, t), layer_of(d.u, t));
    let (b, j) = (column_of(d.v, t), layer_of(d.v, t));
    if a == b {
        return Err(Error::NotCrossColumn(d.id));
    }
    let (uk, vk) = (a * t + k, b * t + k);
    Ok(RewrittenDemand {
        original_id: d.id,
        layer: k,
        connector_u: (i != k).then(|| DemandEdge::new(d.id, d.u, uk)),
        middle: DemandEdge::new(d.id, uk, vk),
        connector_v: (j != k).then(|| DemandEdge::new(d.id, vk, d.v)),
    })
}

/// Concatenate the connector, lifted middle, and connector trails of one
/// rewritten demand. Absent connectors are passed as single-vertex trails.
pub fn stitch(
    r: &RewrittenDemand,
    connector_u: &Trail,
    middle: &Trail,
    connector_v: &Trail,
) -> Result<Trail> {
    let (u, v) = match (&r.connector_u, &r.connector_v) {
        (Some(cu), Some(cv)) => (cu.u, cv.v),
        (Some(cu), None) => (cu.u, r.middle.v),
        (None, Some(cv)) => (r.middle.u, cv.v),
        (None, None) => (r.middle.u, r.middle.v),
    };
    if connector_u.first() != u || connector_v.last() != v {
        return Err(Error::EndpointMismatch(format!(
            "demand {} expects {u} .. {v}, pieces give {} .. {}",
            r.original_id,
            connector_u.first(),
            connector_v.last()
        )));
    }
    let mut out = connector_u.clone();
    out.extend(middle)?;
    out.extend(connector_v)?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SubproblemLayer {
    pub k: usize,
    /// Demands over `K_t^(n-1)` with local ids `0..m`.
    pub demands: DemandGraph,
}

#[derive(Debug, Clone)]
pub struct SubproblemColumn {
    /// Column rank in `K_t^(n-1)`.
    pub column: usize,
    /// Demands over the column's last coordinates `0..t`, local ids `0..m`.
    pub demands: Vec<DemandEdge>,
}

/// How one original demand is reassembled from subproblem solutions.
#[derive(Debug, Clone)]
pub enum DemandPlan {
    Intra {
        column: usize,
        local: usize,
    },
    Cross {
        rewritten: RewrittenDemand,
        connector_u: Option<usize>,
        middle: usize,
        connector_v: Option<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct Subproblems {
    pub layers: Vec<SubproblemLayer>,
    pub columns: Vec<SubproblemColumn>,
    /// One entry per demand of the parent, in its edge order.
    pub plan: Vec<DemandPlan>,
}

impl Subproblems {
    pub fn max_layer_degree(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.demands.max_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn max_column_degree(&self, t: usize) -> usize {
        self.columns
            .iter()
            .map(|c| crate::demand::max_degree(t, c.demands.iter().map(|e| (e.u, e.v))))
            .max()
            .unwrap_or(0)
    }
}

/// Distribute the demands of `d` over the `t` layers and `t^(n-1)` columns.
///
/// `assign.layer(i)` is the layer of the `i`-th cross-column demand in the
/// order of [`split_demands`]. Both degree claims are checked against `q`.
pub fn build_subproblems(
    d: &DemandGraph,
    assign: &LayerAssignment,
    q: usize,
) -> Result<Subproblems> {
    let spec = d.spec();
    let t = spec.t();
    let layer_spec = spec.layer_spec().ok_or(Error::InvalidGrid { t, n: 0 })?;
    let mut layer_edges: Vec<Vec<DemandEdge>> = vec![Vec::new(); t];
    let mut columns: Vec<SubproblemColumn> = (0..spec.column_count())
        .map(|column| SubproblemColumn {
            column,
            demands: Vec::new(),
        })
        .collect();
    let mut push_column = |e: &DemandEdge| -> usize {
        let col = &mut columns[column_of(e.u, t)].demands;
        let local = col.len();
        col.push(DemandEdge::new(
            local as DemandId,
            layer_of(e.u, t),
            layer_of(e.v, t),
        ));
        local
    };

    let mut plan = Vec::with_capacity(d.len());
    let mut cross_index = 0;
    for e in d.edges() {
        if column_of(e.u, t) == column_of(e.v, t) {
            let local = push_column(e);
            plan.push(DemandPlan::Intra {
                column: column_of(e.u, t),
                local,
            });
            continue;
        }
        let k = assign.layer(cross_index);
        cross_index += 1;
        let r = rewrite(e, k, t)?;
        let connector_u = r.connector_u.as_ref().map(&mut push_column);
        let connector_v = r.connector_v.as_ref().map(&mut push_column);
        let layer = &mut layer_edges[k];
        let middle = layer.len();
        layer.push(DemandEdge::new(
            middle as DemandId,
            column_of(r.middle.u, t),
            column_of(r.middle.v, t),
        ));
        plan.push(DemandPlan::Cross {
            rewritten: r,
            connector_u,
            middle,
            connector_v,
        });
    }

    let layers = layer_edges
        .into_iter()
        .enumerate()
        .map(|(k, edges)| {
            Ok(SubproblemLayer {
                k,
                demands: DemandGraph::new(layer_spec, edges)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sub = Subproblems {
        layers,
        columns,
        plan,
    };

    let layer_degree = sub.max_layer_degree();
    if layer_degree > q {
        return Err(Error::ClaimViolation {
            claim: Claim::Layer,
            degree: layer_degree,
            bound: q,
        });
    }
    let column_degree = sub.max_column_degree(t);
    if column_degree > 2 * q {
        return Err(Error::ClaimViolation {
            claim: Claim::Column,
            degree: column_degree,
            bound: 2 * q,
        });
    }
    Ok(sub)
}

/// Route every demand of `d` on pairwise edge-disjoint trails.
pub fn solve(d: &DemandGraph, opts: &SolveOptions) -> Result<Routing> {
    solve_with_report(d, opts).map(|(r, _)| r)
}

/// [`solve`], also returning the observed subproblem degree maxima.
pub fn solve_with_report(
    d: &DemandGraph,
    opts: &SolveOptions,
) -> Result<(Routing, PipelineReport)> {
    let spec = *d.spec();
    if d.is_empty() {
        return Ok((Routing::new(spec, Vec::new()), PipelineReport::default()));
    }
    let mut d = d.clone();
    let q = match d.q() {
        Some(q) => q,
        None => d.fix_budget(opts.unchecked)?,
    };
    let run = || solve_level(&d, q, opts.seed, opts);
    let (trails, mut report) = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    report.q = q;
    let mut records: Vec<(DemandId, Trail)> = d
        .edges()
        .iter()
        .map(|e| e.id)
        .zip(trails)
        .map(|(id, tr)| {
            if opts.simplify {
                (id, tr.simplify())
            } else {
                (id, tr)
            }
        })
        .collect();
    records.sort_by_key(|(id, _)| *id);
    Ok((Routing::new(spec, records), report))
}

const TAG_LAYER: u64 = 1;
const TAG_COLUMN: u64 = 2;
const TAG_SHUFFLE: u64 = 3;

/// Independent per-subproblem seed; keeps results independent of scheduling.
fn derive_seed(seed: u64, tag: u64, index: usize) -> u64 {
    let mut z = seed
        ^ tag.wrapping_mul(0xA076_1D64_78BD_642F)
        ^ (index as u64).wrapping_mul(0xE703_7ED1_A0B4_28DB);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Trails for `d.edges()` in order, as ranks of `d.spec()`.
fn solve_level(
    d: &DemandGraph,
    q: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<(Vec<Trail>, PipelineReport)> {
    let spec = d.spec();
    let t = spec.t();
    if spec.n() == 1 {
        let pairs: Vec<(usize, usize)> = d.edges().iter().map(|e| (e.u, e.v)).collect();
        let trails = route_complete(t, &pairs, seed, &opts.base)?;
        return Ok((trails, PipelineReport::default()));
    }

    let (_, cross) = split_demands(d);
    let h = regularize(&project(&cross, spec)?, t * q)?;
    let host = h.to_multigraph();
    let factors = two_factorization(&host, t * q / 2)?;
    let mut shuffle = opts
        .shuffle_factors
        .then(|| ChaCha8Rng::seed_from_u64(derive_seed(seed, TAG_SHUFFLE, 0)));
    let assign = group_factors(&factors, q, t, shuffle.as_mut())?;
    debug_assert!(assign.max_layer_degree(&host, |e| !h.edges()[e].is_dummy()) <= q);
    let sub = build_subproblems(d, &assign, q)?;

    let mut report = PipelineReport {
        q,
        max_layer_degree: sub.max_layer_degree(),
        max_column_degree: sub.max_column_degree(t),
        layer_subproblems: sub.layers.iter().filter(|l| !l.demands.is_empty()).count(),
        column_subproblems: sub.columns.iter().filter(|c| !c.demands.is_empty()).count(),
    };

    let layer_results = sub
        .layers
        .par_iter()
        .map(|layer| {
            if layer.demands.is_empty() {
                return Ok((Vec::new(), PipelineReport::default()));
            }
            let (trails, rep) = solve_level(
                &layer.demands,
                q,
                derive_seed(seed, TAG_LAYER, layer.k),
                opts,
            )?;
            let lifted = trails
                .iter()
                .map(|tr| tr.lift(t, layer.k))
                .collect::<Result<Vec<_>>>()?;
            Ok((lifted, rep))
        })
        .collect::<Result<Vec<_>>>()?;
    let column_results = sub
        .columns
        .par_iter()
        .map(|col| {
            let pairs: Vec<(usize, usize)> = col.demands.iter().map(|e| (e.u, e.v)).collect();
            let trails = route_complete(
                t,
                &pairs,
                derive_seed(seed, TAG_COLUMN, col.column),
                &opts.base,
            )?;
            Ok(trails
                .into_iter()
                .map(|tr| tr.into_column(t, col.column))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    for (_, rep) in &layer_results {
        report.merge(rep);
    }

    let trails = sub
        .plan
        .iter()
        .map(|p| match p {
            DemandPlan::Intra { column, local } => Ok(column_results[*column][*local].clone()),
            DemandPlan::Cross {
                rewritten,
                connector_u,
                middle,
                connector_v,
            } => {
                let cu = match connector_u {
                    Some(i) => column_results[column_of(rewritten.middle.u, t)][*i].clone(),
                    None => Trail::single(rewritten.middle.u),
                };
                let cv = match connector_v {
                    Some(i) => column_results[column_of(rewritten.middle.v, t)][*i].clone(),
                    None => Trail::single(rewritten.middle.v),
                };
                let mid = &layer_results[rewritten.layer].0[*middle];
                stitch(rewritten, &cu, mid, &cv)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((trails, report))
}
