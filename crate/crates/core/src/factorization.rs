//! Constructive 2-factorization of regular multigraphs.
//!
//! A `2k`-regular multigraph is oriented along Euler circuits so that every
//! vertex has `k` outgoing and `k` incoming edges. Splitting each vertex into
//! an out-copy and an in-copy turns the orientation into a `k`-regular
//! bipartite multigraph, whose perfect matchings pull back to 2-factors.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// An undirected multigraph; edge ids are positions in [`Multigraph::edges`].
/// Loops are allowed and count twice toward their vertex's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a >= vertex_count || b >= vertex_count)
        {
            return Err(Error::VertexOutOfRange(a.max(b)));
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        degrees_of(self.vertex_count, self.edges.iter().copied())
    }

    /// `Some(d)` if every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        match deg.first() {
            None => Some(0),
            Some(&d) => deg.iter().all(|&x| x == d).then_some(d),
        }
    }
}

fn degrees_of(vertex_count: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut deg = vec![0; vertex_count];
    for (a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg
}

/// Direction assigned to every edge, `(tail, head)` by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_degrees(&self, vertex_count: usize) -> Vec<usize> {
        let mut d = vec![0; vertex_count];
        for &(a, _) in &self.arcs {
            d[a] += 1;
        }
        d
    }

    pub fn in_degrees(&self, vertex_count: usize) -> Vec<usize> {
        let mut d = vec![0; vertex_count];
        for &(_, b) in &self.arcs {
            d[b] += 1;
        }
        d
    }
}

/// Orient every edge along an Euler circuit of its component (Hierholzer).
pub fn euler_orient(g: &Multigraph) -> Result<Orientation> {
    for (vertex, &degree) in g.degrees().iter().enumerate() {
        if degree % 2 != 0 {
            return Err(Error::OddDegree { vertex, degree });
        }
    }
    Ok(orient_even(g.vertex_count, &g.edges))
}

/// Euler orientation of an even-degree edge list. Every forward move of the
/// stack walk belongs to a closed trail, so in- and out-degrees balance.
fn orient_even(vertex_count: usize, edges: &[(usize, usize)]) -> Orientation {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((id, b));
        if a != b {
            adj[b].push((id, a));
        }
    }
    let mut next = vec![0usize; vertex_count];
    let mut used = vec![false; edges.len()];
    let mut arcs = vec![(0, 0); edges.len()];
    let mut stack = Vec::new();
    for start in 0..vertex_count {
        stack.push(start);
        while let Some(&x) = stack.last() {
            let list = &adj[x];
            while next[x] < list.len() && used[list[next[x]].0] {
                next[x] += 1;
            }
            match list.get(next[x]) {
                Some(&(id, y)) => {
                    used[id] = true;
                    arcs[id] = (x, y);
                    stack.push(y);
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    Orientation { arcs }
}

/// A spanning 2-regular sub-multigraph, by host edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactor {
    edges: Vec<usize>,
}

impl TwoFactor {
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// True iff every vertex of `host` has degree exactly 2 in this factor.
    pub fn is_spanning_two_regular(&self, host: &Multigraph) -> bool {
        degrees_of(host.vertex_count, self.edges.iter().map(|&e| host.edges[e]))
            .iter()
            .all(|&d| d == 2)
    }
}

/// Decompose a `2k`-regular multigraph into `k` edge-disjoint 2-factors.
pub fn two_factorization(g: &Multigraph, k: usize) -> Result<Vec<TwoFactor>> {
    let regular = g.regular_degree();
    if regular != Some(2 * k) && !(g.vertex_count == 0 && g.edges.is_empty()) {
        return Err(Error::NotRegular(2 * k));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let orientation = orient_even(g.vertex_count, &g.edges);
    let v = g.vertex_count;
    // out-copy of x is x, in-copy of y is v + y
    let cover: Vec<(usize, usize)> = orientation.arcs.iter().map(|&(x, y)| (x, v + y)).collect();
    let ids = (0..cover.len()).collect();
    let mut matchings = Vec::with_capacity(k);
    decompose_regular_bipartite(v, v, &cover, ids, k, &mut matchings)?;
    Ok(matchings
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            TwoFactor { edges }
        })
        .collect())
}

/// Split a `k`-regular bipartite multigraph into `k` perfect matchings
/// (edge ids of `b`). The bipartition is found by BFS 2-colouring.
pub fn bipartite_matching_decomposition(b: &Multigraph, k: usize) -> Result<Vec<Vec<usize>>> {
    if b.regular_degree() != Some(k) {
        return Err(Error::NotRegular(k));
    }
    let side = two_colour(b).ok_or(Error::NotBipartite)?;
    let mut local = vec![0usize; b.vertex_count];
    let (mut nl, mut nr) = (0, 0);
    for (x, &s) in side.iter().enumerate() {
        if s {
            local[x] = nr;
            nr += 1;
        } else {
            local[x] = nl;
            nl += 1;
        }
    }
    if nl != nr {
        return Err(Error::NotRegular(k));
    }
    let edges: Vec<(usize, usize)> = b
        .edges
        .iter()
        .map(|&(x, y)| {
            let (l, r) = if side[x] { (y, x) } else { (x, y) };
            (local[l], nl + local[r])
        })
        .collect();
    let mut out = Vec::with_capacity(k);
    decompose_regular_bipartite(nl, nr, &edges, (0..edges.len()).collect(), k, &mut out)?;
    for m in &mut out {
        m.sort_unstable();
    }
    Ok(out)
}

/// `false` for the first side, `true` for the second; `None` if an odd
/// cycle or loop exists.
fn two_colour(g: &Multigraph) -> Option<Vec<bool>> {
    let mut adj = vec![Vec::new(); g.vertex_count];
    for &(a, b) in &g.edges {
        if a == b {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut colour: Vec<Option<bool>> = vec![None; g.vertex_count];
    let mut queue = VecDeque::new();
    for s in 0..g.vertex_count {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            let cx = colour[x].unwrap();
            for &y in &adj[x] {
                match colour[y] {
                    None => {
                        colour[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(Option::unwrap).collect())
}

/// `edges[id] = (left, nl + right)`; `ids` selects a `degree`-regular
/// subgraph. Even degrees are halved by an Euler split, odd degrees peel one
/// perfect matching first.
fn decompose_regular_bipartite(
    nl: usize,
    nr: usize,
    edges: &[(usize, usize)],
    ids: Vec<usize>,
    degree: usize,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    match degree {
        0 => Ok(()),
        1 => {
            out.push(ids);
            Ok(())
        }
        d if d % 2 == 0 => {
            let sub: Vec<(usize, usize)> = ids.iter().map(|&e| edges[e]).collect();
            let orientation = orient_even(nl + nr, &sub);
            let mut forward = Vec::with_capacity(ids.len() / 2);
            let mut backward = Vec::with_capacity(ids.len() / 2);
            for (&e, &(tail, _)) in ids.iter().zip(&orientation.arcs) {
                if tail < nl {
                    forward.push(e);
                } else {
                    backward.push(e);
                }
            }
            decompose_regular_bipartite(nl, nr, edges, forward, d / 2, out)?;
            decompose_regular_bipartite(nl, nr, edges, backward, d / 2, out)
        }
        d => {
            let matching = perfect_matching(nl, edges, &ids).ok_or(Error::NotRegular(d))?;
            let mut taken = vec![false; edges.len()];
            for &e in &matching {
                taken[e] = true;
            }
            let rest = ids.into_iter().filter(|&e| !taken[e]).collect();
            out.push(matching);
            decompose_regular_bipartite(nl, nr, edges, rest, d - 1, out)
        }
    }
}

const NIL: usize = usize::MAX;

/// Hopcroft-Karp from a greedy maximal matching. Returns matched edge ids
/// when the matching is perfect.
fn perfect_matching(nl: usize, edges: &[(usize, usize)], ids: &[usize]) -> Option<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nl];
    for &e in ids {
        let (l, r) = edges[e];
        adj[l].push((r - nl, e));
    }
    let mut match_l = vec![NIL; nl];
    let mut edge_l = vec![NIL; nl];
    let mut match_r = vec![NIL; nl];
    for l in 0..nl {
        if let Some(&(r, e)) = adj[l].iter().find(|(r, _)| match_r[*r] == NIL) {
            match_l[l] = r;
            edge_l[l] = e;
            match_r[r] = l;
        }
    }
    let mut dist = vec![0usize; nl];
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..nl {
            if match_l[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &(r, _) in &adj[l] {
                let m = match_r[r];
                if m == NIL {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; nl];
        for l in 0..nl {
            if match_l[l] == NIL {
                augment(
                    l,
                    &adj,
                    &mut match_l,
                    &mut edge_l,
                    &mut match_r,
                    &mut dist,
                    &mut cursor,
                );
            }
        }
    }
    edge_l.iter().all(|&e| e != NIL).then_some(edge_l)
}

fn augment(
    l: usize,
    adj: &[Vec<(usize, usize)>],
    match_l: &mut [usize],
    edge_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    while cursor[l] < adj[l].len() {
        let (r, e) = adj[l][cursor[l]];
        cursor[l] += 1;
        let m = match_r[r];
        let ok = m == NIL
            || (dist[m] == dist[l] + 1 && augment(m, adj, match_l, edge_l, match_r, dist, cursor));
        if ok {
            match_l[l] = r;
            edge_l[l] = e;
            match_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// Assignment of every auxiliary edge id to a layer index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerAssignment {
    layers: Vec<usize>,
    t: usize,
}

impl LayerAssignment {
    pub fn layer(&self, edge: usize) -> usize {
        self.layers[edge]
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    /// Largest degree of any vertex in any layer subgraph, over the edges
    /// selected by `keep`.
    pub fn max_layer_degree(&self, host: &Multigraph, keep: impl Fn(usize) -> bool) -> usize {
        let mut deg = vec![0usize; host.vertex_count * self.t];
        for (e, &(a, b)) in host.edges.iter().enumerate() {
            if keep(e) {
                let k = self.layers[e];
                deg[a * self.t + k] += 1;
                deg[b * self.t + k] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Group `t * q / 2` two-factors into `t` layers, `q / 2` consecutive factors
/// each. With `shuffle`, the factor order is permuted first.
pub fn group_factors<R: Rng + ?Sized>(
    factors: &[TwoFactor],
    q: usize,
    t: usize,
    shuffle: Option<&mut R>,
) -> Result<LayerAssignment> {
    let expected = t * q / 2;
    if !q.is_multiple_of(2) || q == 0 || factors.len() != expected {
        return Err(Error::WrongFactorCount {
            expected,
            got: factors.len(),
        });
    }
    let mut order: Vec<usize> = (0..factors.len()).collect();
    if let Some(rng) = shuffle {
        order.shuffle(rng);
    }
    let edge_count = factors.iter().map(|f| f.edges.len()).sum();
    let mut layers = vec![usize::MAX; edge_count];
    for (slot, &f) in order.iter().enumerate() {
        let k = slot / (q / 2);
        for &e in &factors[f].edges {
            layers[e] = k;
        }
    }
    debug_assert!(layers.iter().all(|&k| k < t));
    Ok(LayerAssignment { layers, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(v: usize, edges: &[(usize, usize)]) -> Multigraph {
        Multigraph::new(v, edges.to_vec()).unwrap()
    }

    fn balanced(g: &Multigraph, o: &Orientation) -> bool {
        o.out_degrees(g.vertex_count()) == o.in_degrees(g.vertex_count())
    }

    fn same_edges(g: &Multigraph, o: &Orientation) -> bool {
        g.edges()
            .iter()
            .zip(o.arcs())
            .all(|(&(a, b), &(x, y))| (a, b) == (x, y) || (a, b) == (y, x))
    }

    #[test]
    fn orient_triangle() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let o = euler_orient(&g).unwrap();
        assert!(balanced(&g, &o));
        assert!(same_edges(&g, &o));
        assert_eq!(o.out_degrees(3), vec![1, 1, 1]);
    }

    #[test]
    fn orient_two_components() {
        let g = graph(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
            ],
        );
        let o = euler_orient(&g).unwrap();
        assert!(balanced(&g, &o));
        assert!(same_edges(&g, &o));
        assert!(o.out_degrees(8).iter().all(|&d| d == 1));
    }

    #[test]
    fn orient_loops() {
        let g = graph(1, &[(0, 0), (0, 0)]);
        let o = euler_orient(&g).unwrap();
        assert_eq!(o.out_degrees(1), vec![2]);
        assert_eq!(o.in_degrees(1), vec![2]);
    }

    #[test]
    fn orient_rejects_odd() {
        let g = graph(2, &[(0, 1)]);
        assert!(matches!(
            euler_orient(&g),
            Err(Error::OddDegree {
                vertex: 0,
                degree: 1
            })
        ));
    }

    fn check_factorization(g: &Multigraph, k: usize, factors: &[TwoFactor]) {
        assert_eq!(factors.len(), k);
        let mut all: Vec<usize> = factors.iter().flat_map(|f| f.edges().to_vec()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..g.edges().len()).collect::<Vec<_>>());
        for f in factors {
            assert!(f.is_spanning_two_regular(g));
        }
    }

    #[test]
    fn factor_of_two_regular_is_itself() {
        let g = graph(7, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)]);
        let f = two_factorization(&g, 1).unwrap();
        check_factorization(&g, 1, &f);
    }

    #[test]
    fn factor_k5() {
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((a, b));
            }
        }
        let g = graph(5, &edges);
        let f = two_factorization(&g, 2).unwrap();
        check_factorization(&g, 2, &f);
    }

    #[test]
    fn factor_loops_only() {
        let g = graph(1, &[(0, 0), (0, 0), (0, 0)]);
        let f = two_factorization(&g, 3).unwrap();
        check_factorization(&g, 3, &f);
        assert!(f.iter().all(|x| x.edges().len() == 1));
    }

    #[test]
    fn factor_rejects_irregular() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0), (0, 1), (0, 1)]);
        assert!(matches!(
            two_factorization(&g, 2),
            Err(Error::NotRegular(4))
        ));
    }

    fn check_matchings(b: &Multigraph, k: usize, ms: &[Vec<usize>]) {
        assert_eq!(ms.len(), k);
        let mut all: Vec<usize> = ms.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..b.edges().len()).collect::<Vec<_>>());
        for m in ms {
            let deg = degrees_of(b.vertex_count(), m.iter().map(|&e| b.edges()[e]));
            assert!(deg.iter().all(|&d| d == 1));
        }
    }

    #[test]
    fn matching_decomposition_examples() {
        let b = graph(4, &[(0, 2), (1, 3)]);
        let ms = bipartite_matching_decomposition(&b, 1).unwrap();
        check_matchings(&b, 1, &ms);

        // two disjoint even cycles, one with parallel edges
        let b = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (4, 5)]);
        let ms = bipartite_matching_decomposition(&b, 2).unwrap();
        check_matchings(&b, 2, &ms);

        let mut edges = Vec::new();
        for l in 0..4 {
            for r in 4..8 {
                edges.push((l, r));
            }
        }
        let b = graph(8, &edges);
        let ms = bipartite_matching_decomposition(&b, 4).unwrap();
        check_matchings(&b, 4, &ms);

        // odd degree exercises the matching peel
        let mut edges = Vec::new();
        for l in 0..3 {
            for r in 3..6 {
                edges.push((l, r));
            }
        }
        let b = graph(6, &edges);
        check_matchings(&b, 3, &bipartite_matching_decomposition(&b, 3).unwrap());
    }

    #[test]
    fn matching_decomposition_errors() {
        let triangle = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(
            bipartite_matching_decomposition(&triangle, 2),
            Err(Error::NotBipartite)
        ));
        let path = graph(3, &[(0, 1), (1, 2)]);
        assert!(matches!(
            bipartite_matching_decomposition(&path, 1),
            Err(Error::NotRegular(1))
        ));
    }

    #[test]
    fn grouping_examples() {
        let f = |e: &[usize]| TwoFactor { edges: e.to_vec() };
        let factors = vec![f(&[0]), f(&[1]), f(&[2])];
        let a = group_factors::<ChaCha8Rng>(&factors, 2, 3, None).unwrap();
        assert_eq!(a.layers(), &[0, 1, 2]);

        let factors = vec![f(&[0]), f(&[1]), f(&[2]), f(&[3])];
        let a = group_factors::<ChaCha8Rng>(&factors, 4, 2, None).unwrap();
        assert_eq!(a.layers(), &[0, 0, 1, 1]);

        assert!(matches!(
            group_factors::<ChaCha8Rng>(&factors, 2, 3, None),
            Err(Error::WrongFactorCount {
                expected: 3,
                got: 4
            })
        ));
    }

    #[test]
    fn shuffled_grouping_keeps_degree_bound() {
        let mut edges = Vec::new();
        for a in 0..7 {
            for b in a + 1..7 {
                edges.push((a, b));
            }
        }
        // K_7 is 6-regular: q = 2, t = 3
        let g = graph(7, &edges);
        let factors = two_factorization(&g, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = group_factors(&factors, 2, 3, Some(&mut rng)).unwrap();
        assert!(a.max_layer_degree(&g, |_| true) <= 2);
    }
}
