//! Line-oriented instance and routing files.
//!
//! Instance:
//!
//! ```text
//! GRID t n
//! DEMANDS m
//! id c1 .. cn d1 .. dn        (m lines)
//! ```
//!
//! Routing:
//!
//! ```text
//! ROUTING m
//! id len v0 | v1 | .. | v_len  (m lines, each vertex as n coordinates)
//! ```

use std::fmt::Write as _;

use crate::demand::{DemandEdge, DemandGraph, DemandId};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Trail, Vertex};
use crate::router::Routing;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found {tok:?}")))
}

/// Non-empty lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn header<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
    arity: usize,
) -> Result<(usize, Vec<usize>)> {
    let (no, line) = it
        .next()
        .ok_or_else(|| parse_err(0, format!("missing {keyword} header")))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(parse_err(no, format!("expected {keyword} header")));
    }
    let values = toks
        .map(|t| num(t, no, "integer"))
        .collect::<Result<Vec<usize>>>()?;
    if values.len() != arity {
        return Err(parse_err(
            no,
            format!("{keyword} takes {arity} value(s), found {}", values.len()),
        ));
    }
    Ok((no, values))
}

pub fn write_instance(d: &DemandGraph) -> String {
    let spec = d.spec();
    let mut out = String::new();
    writeln!(out, "GRID {} {}", spec.t(), spec.n()).unwrap();
    writeln!(out, "DEMANDS {}", d.len()).unwrap();
    for e in d.edges() {
        write!(out, "{}", e.id).unwrap();
        for r in [e.u, e.v] {
            for c in spec.vertex(r).coords() {
                write!(out, " {c}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_instance(text: &str) -> Result<DemandGraph> {
    let mut it = lines(text);
    let (grid_line, tn) = header(&mut it, "GRID", 2)?;
    let spec = GridSpec::new(tn[0], tn[1]).map_err(|e| parse_err(grid_line, e.to_string()))?;
    let (_, m) = header(&mut it, "DEMANDS", 1)?;
    let m = m[0];
    let n = spec.n();
    let mut edges = Vec::with_capacity(m);
    for (no, line) in it.by_ref() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 1 + 2 * n {
            return Err(parse_err(
                no,
                format!("expected {} fields, found {}", 1 + 2 * n, toks.len()),
            ));
        }
        let id: DemandId = num(toks[0], no, "demand id")?;
        let coords = toks[1..]
            .iter()
            .map(|t| num(t, no, "coordinate"))
            .collect::<Result<Vec<usize>>>()?;
        let rank = |c: &[usize]| {
            spec.rank(&Vertex::new(c.to_vec()))
                .map_err(|e| parse_err(no, e.to_string()))
        };
        edges.push(DemandEdge::new(
            id,
            rank(&coords[..n])?,
            rank(&coords[n..])?,
        ));
    }
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} demands, found {}", edges.len()),
        ));
    }
    DemandGraph::new(spec, edges).map_err(|e| parse_err(0, e.to_string()))
}

pub fn write_routing(r: &Routing) -> String {
    let spec = r.spec();
    let mut out = String::new();
    writeln!(out, "ROUTING {}", r.len()).unwrap();
    for (id, trail) in r.trails() {
        write!(out, "{id} {}", trail.len()).unwrap();
        for (i, &v) in trail.vertices().iter().enumerate() {
            if i > 0 {
                out.push_str(" |");
            }
            for c in spec.vertex(v).coords() {
                write!(out, " {c}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// A parsed routing file. `declared` is the header count, which may differ
/// from the number of records; the verifier judges the records themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRouting {
    pub routing: Routing,
    pub declared: usize,
}

/// Parse a routing file for grid `spec` (the file itself does not name it).
pub fn parse_routing(text: &str, spec: &GridSpec) -> Result<ParsedRouting> {
    let mut it = lines(text);
    let (_, m) = header(&mut it, "ROUTING", 1)?;
    let n = spec.n();
    let mut trails = Vec::new();
    for (no, line) in it {
        let (head, rest) = split_head(line)
            .ok_or_else(|| parse_err(no, "expected `id len` followed by vertices"))?;
        let id: DemandId = num(head.0, no, "demand id")?;
        let len: usize = num(head.1, no, "trail length")?;
        let mut vertices = Vec::with_capacity(len + 1);
        for group in rest.split('|') {
            let coords = group
                .split_whitespace()
                .map(|t| num(t, no, "coordinate"))
                .collect::<Result<Vec<usize>>>()?;
            if coords.len() != n {
                return Err(parse_err(
                    no,
                    format!("vertex has {} coordinates, expected {n}", coords.len()),
                ));
            }
            let rank = spec
                .rank(&Vertex::new(coords))
                .map_err(|e| parse_err(no, e.to_string()))?;
            vertices.push(rank);
        }
        if vertices.len() != len + 1 {
            return Err(parse_err(
                no,
                format!(
                    "length {len} needs {} vertices, found {}",
                    len + 1,
                    vertices.len()
                ),
            ));
        }
        trails.push((id, Trail::new(vertices)));
    }
    Ok(ParsedRouting {
        routing: Routing::new(*spec, trails),
        declared: m[0],
    })
}

/// `"id len rest"` into `((id, len), rest)`.
fn split_head(line: &str) -> Option<((&str, &str), &str)> {
    let line = line.trim_start();
    let (id, rest) = line.split_once(char::is_whitespace)?;
    let rest = rest.trim_start();
    let (len, rest) = rest.split_once(char::is_whitespace)?;
    Some(((id, len), rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn instance_layout() {
        let spec = GridSpec::new(3, 2).unwrap();
        let d = DemandGraph::new(spec, vec![DemandEdge::new(4, 1, 8)]).unwrap();
        assert_eq!(write_instance(&d), "GRID 3 2\nDEMANDS 1\n4 0 1 2 2\n");
    }

    #[test]
    fn routing_layout() {
        let spec = GridSpec::new(3, 2).unwrap();
        let r = Routing::new(spec, vec![(0, Trail::new(vec![1, 2, 5]))]);
        let text = write_routing(&r);
        assert_eq!(text, "ROUTING 1\n0 2 0 1 | 0 2 | 1 2\n");
        let parsed = parse_routing(&text, &spec).unwrap();
        assert_eq!(parsed.routing, r);
        assert_eq!(parsed.declared, 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "GRID 3 2\nDEMANDS 2\n0 0 0 1 1\n1 0 x 1 1\n";
        match parse_instance(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_instance("GRID 3\nDEMANDS 0\n").is_err());
        assert!(parse_instance("DEMANDS 0\n").is_err());
        assert!(parse_instance("GRID 3 2\nDEMANDS 2\n0 0 0 1 1\n").is_err());
        assert!(parse_instance("GRID 3 2\nDEMANDS 1\n0 0 0 3 1\n").is_err());
        assert!(parse_instance("GRID 3 2\nDEMANDS 1\n0 0 0 0 0\n").is_err());

        let spec = GridSpec::new(3, 2).unwrap();
        assert!(parse_routing("ROUTING 1\n0 2 0 1 | 0 2\n", &spec).is_err());
        assert!(parse_routing("ROUTING 1\n0 1 0 1 0 | 0 2\n", &spec).is_err());
        assert!(parse_routing("ROUTING 1\n0\n", &spec).is_err());
    }

    #[test]
    fn routing_tolerates_extra_records() {
        let spec = GridSpec::new(3, 1).unwrap();
        let parsed = parse_routing("ROUTING 1\n0 1 0 | 1\n0 1 0 | 1\n", &spec).unwrap();
        assert_eq!(parsed.declared, 1);
        assert_eq!(parsed.routing.len(), 2);
    }

    fn instance_strategy() -> impl Strategy<Value = DemandGraph> {
        (2usize..6, 1usize..4).prop_flat_map(|(t, n)| {
            let spec = GridSpec::new(t, n).unwrap();
            let nv = spec.vertex_count();
            proptest::collection::vec((0..nv, 1..nv), 0..20).prop_map(move |pairs| {
                let edges = pairs
                    .into_iter()
                    .enumerate()
                    .map(|(i, (u, off))| DemandEdge::new(i as u64 * 3, u, (u + off) % nv))
                    .collect();
                DemandGraph::new(spec, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn instance_round_trip(d in instance_strategy()) {
            prop_assert_eq!(parse_instance(&write_instance(&d)).unwrap(), d);
        }

        #[test]
        fn routing_round_trip(
            t in 2usize..6,
            n in 1usize..4,
            walks in proptest::collection::vec(proptest::collection::vec(any::<usize>(), 1..8), 0..10),
        ) {
            let spec = GridSpec::new(t, n).unwrap();
            let trails = walks
                .into_iter()
                .enumerate()
                .map(|(i, w)| {
                    let vs = w.into_iter().map(|x| x % spec.vertex_count()).collect();
                    (i as u64, Trail::new(vs))
                })
                .collect();
            let r = Routing::new(spec, trails);
            let parsed = parse_routing(&write_routing(&r), &spec).unwrap();
            prop_assert_eq!(parsed.routing, r);
        }
    }
}
