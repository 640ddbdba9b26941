use std::collections::{BTreeMap, VecDeque};

use super::decide::{decide_index, IndexOptions};
use super::IndexError;
use crate::graph::{make_u_folded, Edge, LabeledGraph};
use crate::words::{Letter, StandardWord};

fn require_free(g: &LabeledGraph) -> Result<(), IndexError> {
    if g.tower().is_free() {
        Ok(())
    } else {
        Err(IndexError::NotLevelZero)
    }
}

/// Pullback of two folded free graphs, keeping the core at the pair of
/// base vertices.
pub fn free_intersection(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<LabeledGraph, IndexError> {
    require_free(g1)?;
    require_free(g2)?;
    let start = (g1.base(), g2.base());
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    let syms = g1.tower().alphabet.len();
    while let Some((a, b)) = queue.pop_front() {
        let from = ids[&(a, b)];
        for sym in 0..syms {
            let (Some(s1), Some(s2)) = (g1.base_step(a, sym, false), g2.base_step(b, sym, false))
            else {
                continue;
            };
            let next = (g1.step_target(a, s1), g2.step_target(b, s2));
            let n = ids.len();
            let to = *ids.entry(next).or_insert_with(|| {
                queue.push_back(next);
                n
            });
            edges.push((from, to, sym));
        }
        for sym in 0..syms {
            let (Some(s1), Some(s2)) = (g1.base_step(a, sym, true), g2.base_step(b, sym, true))
            else {
                continue;
            };
            let next = (g1.step_target(a, s1), g2.step_target(b, s2));
            if !ids.contains_key(&next) {
                let n = ids.len();
                ids.insert(next, n);
                queue.push_back(next);
            }
        }
    }
    let mut g = LabeledGraph::new(g1.tower().clone());
    for _ in 1..ids.len() {
        g.add_vertex();
    }
    for (from, to, sym) in edges {
        g.add_edge(from, to, Letter::base(sym));
    }
    Ok(make_u_folded(&g, &Default::default())?)
}

/// `g·L(gh)·g⁻¹`: a path spelling `g` from a new base into the old one.
pub fn conjugate_graph(gh: &LabeledGraph, g: &StandardWord) -> Result<LabeledGraph, IndexError> {
    if g.is_empty() {
        return Ok(gh.clone());
    }
    let mut h = gh.clone();
    let nb = h.add_vertex();
    h.add_path(nb, g, Some(gh.base()));
    let edges: Vec<Edge> = h.edges().to_vec();
    let moved = LabeledGraph::from_parts(h.tower().clone(), h.num_vertices(), edges, nb);
    Ok(make_u_folded(&moved, &Default::default())?)
}

/// Whether `g` commensurates `L(gh)`: both `H` and `gHg⁻¹` have finite
/// index over their intersection.
pub fn comm_contains_level0(
    gh: &LabeledGraph,
    g: &StandardWord,
    gg: &LabeledGraph,
) -> Result<bool, IndexError> {
    require_free(gh)?;
    require_free(gg)?;
    if !gg.accepts(g)? {
        return Err(IndexError::NotSubgroup(g.render(gg.tower())));
    }
    let conj = conjugate_graph(gh, g)?;
    let meet = free_intersection(gh, &conj)?;
    let opts = IndexOptions::default();
    Ok(decide_index(gh, &meet, &opts)?.is_finite()
        && decide_index(&conj, &meet, &opts)?.is_finite())
}
