//! Routing inside a single complete graph `K_t`.
//!
//! Staged greedy: direct edges first, then two-edge detours through the least
//! loaded intermediate vertex, then three-edge detours. Failed attempts are
//! retried with shuffled demand order and random tie-breaking; small `t`
//! falls back to exhaustive search over simple paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Routing;
use crate::demand::DemandEdge;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Trail};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseOptions {
    /// Randomized restarts after the deterministic first attempt.
    pub restarts: usize,
    /// Exhaustive fallback is attempted only for `t` up to this value.
    pub exhaustive_max_t: usize,
    /// Search-node cap for the exhaustive fallback.
    pub exhaustive_node_limit: u64,
}

impl Default for BaseOptions {
    fn default() -> Self {
        Self {
            restarts: 200,
            exhaustive_max_t: 8,
            exhaustive_node_limit: 5_000_000,
        }
    }
}

/// Route every demand of a `K_t` instance (vertices `0..t`) on pairwise
/// edge-disjoint trails.
pub fn solve_complete(
    t: usize,
    demands: &[DemandEdge],
    seed: u64,
    opts: &BaseOptions,
) -> Result<Routing> {
    let spec = GridSpec::new(t, 1)?;
    for d in demands {
        for x in [d.u, d.v] {
            if x >= t {
                return Err(Error::VertexOutOfRange(x));
            }
        }
        if d.u == d.v {
            return Err(Error::SelfDemand(d.id));
        }
    }
    let pairs: Vec<(usize, usize)> = demands.iter().map(|d| (d.u, d.v)).collect();
    let trails = route_complete(t, &pairs, seed, opts)?;
    Ok(Routing::new(
        spec,
        demands.iter().map(|d| d.id).zip(trails).collect(),
    ))
}

/// Positional variant: `trails[i]` joins `pairs[i].0` to `pairs[i].1`.
pub(crate) fn route_complete(
    t: usize,
    pairs: &[(usize, usize)],
    seed: u64,
    opts: &BaseOptions,
) -> Result<Vec<Trail>> {
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    if let Some(paths) = Greedy::new(t).run(pairs, &order, None) {
        return Ok(into_trails(paths));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..opts.restarts {
        order.shuffle(&mut rng);
        if let Some(paths) = Greedy::new(t).run(pairs, &order, Some(&mut rng)) {
            return Ok(into_trails(paths));
        }
    }
    if t <= opts.exhaustive_max_t {
        if let Some(paths) = Exhaustive::new(t, pairs, opts.exhaustive_node_limit).run() {
            return Ok(into_trails(paths));
        }
    }
    Err(Error::BaseSolverExhausted {
        t,
        demands: pairs.len(),
    })
}

fn into_trails(paths: Vec<Vec<usize>>) -> Vec<Trail> {
    paths.into_iter().map(Trail::new).collect()
}

struct Greedy {
    t: usize,
    used: Vec<bool>,
    load: Vec<usize>,
}

impl Greedy {
    fn new(t: usize) -> Self {
        Self {
            t,
            used: vec![false; t * t],
            load: vec![0; t],
        }
    }

    fn free(&self, a: usize, b: usize) -> bool {
        !self.used[a * self.t + b]
    }

    fn take(&mut self, path: &[usize]) {
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            self.used[a * self.t + b] = true;
            self.used[b * self.t + a] = true;
            self.load[a] += 1;
            self.load[b] += 1;
        }
    }

    fn run(
        mut self,
        pairs: &[(usize, usize)],
        order: &[usize],
        mut rng: Option<&mut ChaCha8Rng>,
    ) -> Option<Vec<Vec<usize>>> {
        let mut out: Vec<Option<Vec<usize>>> = vec![None; pairs.len()];
        for &i in order {
            let (x, y) = pairs[i];
            if self.free(x, y) {
                let p = vec![x, y];
                self.take(&p);
                out[i] = Some(p);
            }
        }
        for &i in order {
            if out[i].is_some() {
                continue;
            }
            let (x, y) = pairs[i];
            let candidates = (0..self.t)
                .filter(|&w| w != x && w != y && self.free(x, w) && self.free(w, y))
                .map(|w| (self.load[w], w));
            if let Some(w) = pick_min(candidates, rng.as_deref_mut()) {
                let p = vec![x, w, y];
                self.take(&p);
                out[i] = Some(p);
            }
        }
        for &i in order {
            if out[i].is_some() {
                continue;
            }
            let (x, y) = pairs[i];
            let t = self.t;
            let candidates = (0..t)
                .filter(|&w| w != x && w != y && self.free(x, w))
                .flat_map(|w| {
                    (0..t)
                        .filter(move |&z| z != x && z != y && z != w)
                        .map(move |z| (w, z))
                })
                .filter(|&(w, z)| self.free(w, z) && self.free(z, y))
                .map(|(w, z)| (self.load[w] + self.load[z], (w, z)));
            let (w, z) = pick_min(candidates, rng.as_deref_mut())?;
            let p = vec![x, w, z, y];
            self.take(&p);
            out[i] = Some(p);
        }
        out.into_iter().collect()
    }
}

/// Minimum by key; ties go to the first candidate, or to a uniformly random
/// one when `rng` is given.
fn pick_min<T: Copy>(
    candidates: impl Iterator<Item = (usize, T)>,
    rng: Option<&mut ChaCha8Rng>,
) -> Option<T> {
    let mut best: Option<(usize, T)> = None;
    let mut ties = 0u32;
    match rng {
        None => {
            for (k, c) in candidates {
                if best.is_none_or(|(bk, _)| k < bk) {
                    best = Some((k, c));
                }
            }
        }
        Some(rng) => {
            for (k, c) in candidates {
                match best {
                    Some((bk, _)) if k > bk => {}
                    Some((bk, _)) if k == bk => {
                        ties += 1;
                        if rng.gen_range(0..=ties) == 0 {
                            best = Some((k, c));
                        }
                    }
                    _ => {
                        best = Some((k, c));
                        ties = 0;
                    }
                }
            }
        }
    }
    best.map(|(_, c)| c)
}

/// Backtracking over simple paths, shortest first, demands in input order.
/// Any edge-disjoint trail system can be shortcut to one of simple paths, so
/// the search is complete when it does not hit the node limit.
struct Exhaustive<'a> {
    t: usize,
    pairs: &'a [(usize, usize)],
    used: Vec<bool>,
    on_path: Vec<bool>,
    chosen: Vec<Vec<usize>>,
    nodes: u64,
    limit: u64,
}

impl<'a> Exhaustive<'a> {
    fn new(t: usize, pairs: &'a [(usize, usize)], limit: u64) -> Self {
        Self {
            t,
            pairs,
            used: vec![false; t * t],
            on_path: vec![false; t],
            chosen: Vec::with_capacity(pairs.len()),
            nodes: 0,
            limit,
        }
    }

    fn run(mut self) -> Option<Vec<Vec<usize>>> {
        self.demand(0).then_some(self.chosen)
    }

    fn set(&mut self, path: &[usize], value: bool) {
        for w in path.windows(2) {
            self.used[w[0] * self.t + w[1]] = value;
            self.used[w[1] * self.t + w[0]] = value;
        }
    }

    fn demand(&mut self, i: usize) -> bool {
        if i == self.pairs.len() {
            return true;
        }
        let (x, y) = self.pairs[i];
        for len in 1..self.t {
            let mut path = vec![x];
            self.on_path[x] = true;
            let done = self.extend(i, y, len, &mut path);
            self.on_path[x] = false;
            if done {
                return true;
            }
            if self.nodes > self.limit {
                return false;
            }
        }
        false
    }

    /// Grow `path` to exactly `len` edges ending at `y`, then recurse into
    /// the next demand.
    fn extend(&mut self, i: usize, y: usize, len: usize, path: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let last = *path.last().unwrap();
        let remaining = len - (path.len() - 1);
        if remaining == 1 {
            if self.used[last * self.t + y] {
                return false;
            }
            path.push(y);
            let p = path.clone();
            self.set(&p, true);
            self.chosen.push(p);
            if self.demand(i + 1) {
                return true;
            }
            let p = self.chosen.pop().unwrap();
            self.set(&p, false);
            path.pop();
            return false;
        }
        for w in 0..self.t {
            if w == y || self.on_path[w] || self.used[last * self.t + w] {
                continue;
            }
            path.push(w);
            self.on_path[w] = true;
            let done = self.extend(i, y, len, path);
            self.on_path[w] = false;
            path.pop();
            if done {
                return true;
            }
        }
        false
    }
}
