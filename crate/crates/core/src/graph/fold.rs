use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::check::{assert_u_folded_with, default_assert_len};
use super::labeled::{analyze, Edge, LabeledGraph};
use super::GraphError;
use crate::words::{Letter, StandardWord, Tower};
use crate::zt_poly::Poly;

pub const DEFAULT_CLOSURE_POWER: usize = 4;
pub const DEFAULT_MOVE_BUDGET: usize = 100_000;
pub const DEFAULT_PATH_BUDGET: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldOptions {
    /// Largest `k` for which paths spelling `π(u)^k` are glued into
    /// `u`-components.
    pub closure_power: usize,
    /// Cap on vertex merges plus added closure edges.
    pub move_budget: usize,
    /// Path length for the certificate; `None` picks the default.
    pub assert_len: Option<usize>,
    /// Cap on the number of paths the certificate inspects.
    pub path_budget: usize,
}

impl Default for FoldOptions {
    fn default() -> Self {
        FoldOptions {
            closure_power: DEFAULT_CLOSURE_POWER,
            move_budget: DEFAULT_MOVE_BUDGET,
            assert_len: None,
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }
}

/// Mutable edge soup with a union-find over vertices.
struct Work {
    tower: Arc<Tower>,
    parent: Vec<usize>,
    edges: Vec<Edge>,
    base: usize,
    moves: usize,
    budget: usize,
}

impl Work {
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Merges two classes, keeping the smaller id as representative.
    fn union(&mut self, a: usize, b: usize) -> Result<bool, GraphError> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(false);
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        self.spend()?;
        Ok(true)
    }

    fn spend(&mut self) -> Result<(), GraphError> {
        self.moves += 1;
        if self.moves > self.budget {
            return Err(GraphError::Budget { moves: self.moves });
        }
        Ok(())
    }

    /// Re-homes edges onto representatives and drops exact duplicates.
    fn canonicalize(&mut self) {
        let mut edges = std::mem::take(&mut self.edges);
        for e in &mut edges {
            e.from = self.find(e.from);
            e.to = self.find(e.to);
        }
        let mut seen = HashSet::new();
        edges.retain(|e| seen.insert(e.clone()));
        self.base = self.find(self.base);
        self.edges = edges;
    }

    fn n(&self) -> usize {
        self.parent.len()
    }

    fn snapshot(&self) -> LabeledGraph {
        LabeledGraph::from_parts(self.tower.clone(), self.n(), self.edges.clone(), self.base)
    }
}

/// Classical Stallings folding of base-letter edges, to a fixpoint.
fn free_fold_work(w: &mut Work) -> Result<bool, GraphError> {
    let mut changed = false;
    loop {
        w.canonicalize();
        let mut ends: HashMap<(usize, usize, bool), usize> = HashMap::new();
        let mut pairs = Vec::new();
        for e in &w.edges {
            let Letter::Base { sym, .. } = e.label else {
                continue;
            };
            for (key, other) in [((e.from, sym, false), e.to), ((e.to, sym, true), e.from)] {
                match ends.entry(key) {
                    Entry::Occupied(o) => {
                        if *o.get() != other {
                            pairs.push((*o.get(), other));
                        }
                    }
                    Entry::Vacant(v) => {
                        v.insert(other);
                    }
                }
            }
        }
        if pairs.is_empty() {
            return Ok(changed);
        }
        for (a, b) in pairs {
            changed |= w.union(a, b)?;
        }
    }
}

/// Merges vertices of one `u`-component that share a coset.
fn separate(w: &mut Work, root: usize) -> Result<bool, GraphError> {
    let mut merged = false;
    for data in analyze(w.n(), &w.edges, root) {
        let mut by_rep: HashMap<&Poly, usize> = HashMap::new();
        let mut pairs = Vec::new();
        for &v in &data.vertices {
            match by_rep.entry(&data.reps[&v]) {
                Entry::Occupied(o) => pairs.push((*o.get(), v)),
                Entry::Vacant(e) => {
                    e.insert(v);
                }
            }
        }
        for (a, b) in pairs {
            merged |= w.union(a, b)?;
        }
    }
    if merged {
        w.canonicalize();
    }
    Ok(merged)
}

/// Rewrites every `u`-component as a positively oriented spine through its
/// vertices (ordered by coset representative) plus one loop per lattice
/// basis vector at its smallest vertex. Vertices touched only by this
/// component's edges are dropped.
fn rewrite(w: &mut Work, root: usize) {
    let comps = analyze(w.n(), &w.edges, root);
    if comps.is_empty() {
        return;
    }
    let mut outside = vec![false; w.n()];
    for e in &w.edges {
        if e.label.root() != Some(root) {
            outside[e.from] = true;
            outside[e.to] = true;
        }
    }
    let mut edges: Vec<Edge> = w
        .edges
        .iter()
        .filter(|e| e.label.root() != Some(root))
        .cloned()
        .collect();
    for data in comps {
        let mut kept: Vec<usize> = data
            .vertices
            .iter()
            .copied()
            .filter(|&v| outside[v] || v == w.base)
            .collect();
        if kept.is_empty() {
            kept.push(data.base);
        }
        let z = kept[0];
        let shift = data.reps[&z].clone();
        let mut placed: Vec<(Poly, usize)> = kept
            .iter()
            .map(|&v| (data.lattice.reduce(&(&data.reps[&v] - &shift)), v))
            .collect();
        placed.sort();
        for pair in placed.windows(2) {
            edges.push(Edge {
                from: pair[0].1,
                to: pair[1].1,
                label: Letter::power(root, &pair[1].0 - &pair[0].0),
            });
        }
        for b in data.lattice.basis() {
            edges.push(Edge {
                from: z,
                to: z,
                label: Letter::power(root, b.clone()),
            });
        }
    }
    w.edges = edges;
}

/// Drops non-base vertices of degree one until none is left.
fn trim_hairs(w: &mut Work) {
    loop {
        let mut degree = vec![0usize; w.n()];
        for e in &w.edges {
            degree[e.from] += 1;
            degree[e.to] += 1;
        }
        let before = w.edges.len();
        let base = w.base;
        w.edges.retain(|e| {
            e.from == e.to
                || !((degree[e.from] == 1 && e.from != base) || (degree[e.to] == 1 && e.to != base))
        });
        if w.edges.len() == before {
            return;
        }
    }
}

/// Adds `u^k` edges for paths spelling `π(u)^k` that leave a `u`-component
/// vertex, unless the component already implies them.
fn close_levels(w: &mut Work, closure_power: usize) -> Result<bool, GraphError> {
    if closure_power == 0 || w.tower.roots.is_empty() {
        return Ok(false);
    }
    let g = w.snapshot();
    let mut added = Vec::new();
    for c in g.components() {
        let pu = w.tower.root_word(c.root).clone();
        for &a in &c.vertices {
            for k in 1..=closure_power as i64 {
                for s in [k, -k] {
                    let word = pu.pow(s);
                    let Some(b) = g.read_unchecked(a, &word) else {
                        continue;
                    };
                    let implied = c.step(a, &Poly::constant(s)) == Some(b);
                    if !implied {
                        added.push(Edge {
                            from: a,
                            to: b,
                            label: Letter::power(c.root, Poly::constant(s)),
                        });
                    }
                }
            }
        }
    }
    if added.is_empty() {
        return Ok(false);
    }
    for e in added {
        w.spend()?;
        w.edges.push(e);
    }
    Ok(true)
}

/// Breadth-first renumbering from the base; unreachable vertices vanish.
fn renumber(w: &Work) -> (usize, Vec<Edge>) {
    let n = w.n();
    let mut incident: Vec<Vec<(bool, String, usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in w.edges.iter().enumerate() {
        let tok = e.label.render(&w.tower);
        incident[e.from].push((false, tok.clone(), e.to, i));
        incident[e.to].push((true, tok, e.from, i));
    }
    for inc in &mut incident {
        inc.sort();
    }
    let mut new_id = vec![usize::MAX; n];
    new_id[w.base] = 0;
    let mut count = 1;
    let mut queue = VecDeque::from([w.base]);
    while let Some(x) = queue.pop_front() {
        for (_, _, y, _) in &incident[x] {
            if new_id[*y] == usize::MAX {
                new_id[*y] = count;
                count += 1;
                queue.push_back(*y);
            }
        }
    }
    let edges = w
        .edges
        .iter()
        .filter(|e| new_id[e.from] != usize::MAX)
        .map(|e| Edge {
            from: new_id[e.from],
            to: new_id[e.to],
            label: e.label.clone(),
        })
        .collect();
    (count, edges)
}

fn run(g: &LabeledGraph, opts: &FoldOptions, roots_too: bool) -> Result<Work, GraphError> {
    let mut w = Work {
        tower: g.tower().clone(),
        parent: (0..g.num_vertices()).collect(),
        edges: g.edges().to_vec(),
        base: g.base(),
        moves: 0,
        budget: opts.move_budget,
    };
    let roots: Vec<usize> = (0..w.tower.roots.len()).collect();
    loop {
        free_fold_work(&mut w)?;
        if !roots_too {
            trim_hairs(&mut w);
            return Ok(w);
        }
        let mut merged = false;
        for &u in &roots {
            if separate(&mut w, u)? {
                merged = true;
                break;
            }
        }
        if merged {
            continue;
        }
        trim_hairs(&mut w);
        for &u in &roots {
            rewrite(&mut w, u);
        }
        if close_levels(&mut w, opts.closure_power)? {
            continue;
        }
        return Ok(w);
    }
}

fn finish(w: Work) -> LabeledGraph {
    let (n, edges) = renumber(&w);
    let mut w2 = Work {
        tower: w.tower.clone(),
        parent: (0..n).collect(),
        edges,
        base: 0,
        moves: 0,
        budget: usize::MAX,
    };
    for u in 0..w2.tower.roots.len() {
        rewrite(&mut w2, u);
    }
    let tower = w2.tower.clone();
    let mut keyed: Vec<(usize, usize, String, Edge)> = w2
        .edges
        .into_iter()
        .map(|e| (e.from, e.to, e.label.render(&tower), e))
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    keyed.dedup_by(|a, b| a.3 == b.3);
    LabeledGraph::from_parts(tower, n, keyed.into_iter().map(|k| k.3).collect(), 0)
}

/// Classical Stallings folding of the base-letter edges only, followed by
/// hair trimming and canonical renumbering. Power edges are carried along
/// untouched.
pub fn free_fold(g: &LabeledGraph) -> Result<LabeledGraph, GraphError> {
    let w = run(g, &FoldOptions::default(), false)?;
    let (n, edges) = renumber(&w);
    Ok(LabeledGraph::from_parts(w.tower.clone(), n, edges, 0))
}

/// Applies free folds, component separation, spine rewriting and
/// cross-level closure until nothing changes, then certifies the result.
pub fn make_u_folded(g: &LabeledGraph, opts: &FoldOptions) -> Result<LabeledGraph, GraphError> {
    let w = run(g, opts, true)?;
    let mut out = finish(w);
    let max_len = opts.assert_len.unwrap_or_else(|| default_assert_len(&out));
    if let Err(v) = assert_u_folded_with(&out, max_len, opts.path_budget, opts.closure_power) {
        return Err(GraphError::NotUFolded(v.to_string()));
    }
    out.mark_folded();
    Ok(out)
}

/// Bouquet of loops spelling `gens` at one base vertex, then folded.
pub fn graph_from_words(
    gens: &[StandardWord],
    tower: &Arc<Tower>,
    opts: &FoldOptions,
) -> Result<LabeledGraph, GraphError> {
    let mut g = LabeledGraph::new(tower.clone());
    for w in gens {
        let b = g.base();
        g.add_path(b, w, Some(b));
    }
    make_u_folded(&g, opts)
}

/// Both graphs glued at their base vertices (unfolded).
pub fn wedge(g1: &LabeledGraph, g2: &LabeledGraph) -> LabeledGraph {
    assert!(Arc::ptr_eq(g1.tower(), g2.tower()) || **g1.tower() == **g2.tower());
    let n1 = g1.num_vertices();
    let map2 = |v: usize| {
        if v == g2.base() {
            g1.base()
        } else if v < g2.base() {
            n1 + v
        } else {
            n1 + v - 1
        }
    };
    let mut edges = g1.edges().to_vec();
    for e in g2.edges() {
        edges.push(Edge {
            from: map2(e.from),
            to: map2(e.to),
            label: e.label.clone(),
        });
    }
    LabeledGraph::from_parts(
        g1.tower().clone(),
        n1 + g2.num_vertices() - 1,
        edges,
        g1.base(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn tower(text: &str) -> Arc<Tower> {
        Arc::new(Tower::from_text(text).unwrap())
    }

    fn build(t: &Arc<Tower>, gens: &[&str]) -> LabeledGraph {
        let ws: Vec<StandardWord> = gens.iter().map(|g| parse_word(g, t).unwrap()).collect();
        graph_from_words(&ws, t, &FoldOptions::default()).unwrap()
    }

    fn member(g: &LabeledGraph, w: &str) -> bool {
        g.accepts(&parse_word(w, g.tower()).unwrap()).unwrap()
    }

    #[test]
    fn free_examples() {
        let t = tower("alphabet: x y");
        let g = build(&t, &["x"]);
        assert_eq!((g.num_vertices(), g.edges().len()), (1, 1));
        let g = build(&t, &["x y"]);
        assert_eq!((g.num_vertices(), g.edges().len()), (2, 2));
        let g = build(&t, &["x", "x"]);
        assert_eq!(g.edges().len(), 1);
        let g = build(&t, &["x y x^-1", "x"]);
        assert_eq!((g.num_vertices(), g.edges().len()), (1, 2));
    }

    #[test]
    fn free_fold_keeps_power_edges() {
        let t = tower("alphabet: x y\nroot u = x y x");
        let mut g = LabeledGraph::new(t.clone());
        let b = g.base();
        g.add_path(b, &parse_word("x", &t).unwrap(), Some(b));
        g.add_path(b, &parse_word("x x^-1 u^{t}", &t).unwrap(), Some(b));
        let f = free_fold(&g).unwrap();
        assert_eq!(f.num_vertices(), 1);
        assert_eq!(f.edges().len(), 2);
    }

    #[test]
    fn power_examples() {
        let t = tower("alphabet: x y z\nroot u1 = x y x");
        let g = build(&t, &["u1^{t}"]);
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(
            g.components()[0].lattice.basis(),
            &["t".parse::<Poly>().unwrap()]
        );
        assert!(member(&g, "u1^{2t}"));
        assert!(!member(&g, "u1^{t+1}"));

        let g = build(&t, &["u1^{t}", "x y x"]);
        let c = &g.components()[0];
        assert_eq!(c.lattice.rank(), 2);
        assert!(member(&g, "u1^{t+1}"));
        assert!(member(&g, "u1^{-3}"));
    }

    #[test]
    fn parallel_power_edges() {
        let t = tower("alphabet: x y z\nroot u1 = x y x");
        let mut g = LabeledGraph::new(t.clone());
        let a = g.add_vertex();
        let b = g.base();
        g.add_edge(b, a, Letter::base(2));
        g.add_edge(a, b, Letter::power(0, "t".parse().unwrap()));
        g.add_edge(a, b, Letter::power(0, "t+1".parse().unwrap()));
        let f = make_u_folded(&g, &FoldOptions::default()).unwrap();
        let c = &f.components()[0];
        assert_eq!(c.lattice.basis(), &[Poly::constant(1)]);
        // from the base the coset of the other vertex is t + {1}
        let z = f.component_of(f.base(), 0).unwrap();
        let other = *z.vertices.iter().find(|&&v| v != f.base()).unwrap();
        let co = z.coset(other, f.base());
        assert!(co.contains(&"t".parse().unwrap()));
        assert!(co.contains(&"t+5".parse().unwrap()));
    }

    #[test]
    fn separation_merges_equal_cosets() {
        let t = tower("alphabet: x y z\nroot u1 = x y x");
        let g = build(&t, &["u1^{t} z u1^{-t}", "u1^{2t} z u1^{-2t}", "u1^{t}"]);
        // both conjugates reduce to one z-loop at the base
        assert_eq!(g.num_vertices(), 1);
        assert!(member(&g, "u1^{5t} z u1^{-t}"));
    }

    #[test]
    fn example_group_graph() {
        let t = tower("alphabet: x y z1 z2\nroot u1 = x y x");
        let g = build(&t, &["x u1^{t} z1 u1^{t} x y", "x u1^{t} z2 u1^{t} x y"]);
        assert_eq!(g.num_vertices(), 6);
        assert_eq!(g.components().len(), 1);
        let c = &g.components()[0];
        assert!(c.lattice.is_trivial());
        assert_eq!(c.len(), 4);
        assert!(member(&g, "x u1^{t} z1 u1^{t} x y"));
        assert!(member(&g, "x u1^{t} z1 z2^-1 u1^{-t} x^-1"));
        assert!(!member(&g, "x u1^{t} z1"));
    }

    #[test]
    fn budget_is_enforced() {
        let t = tower("alphabet: x y");
        let mut g = LabeledGraph::new(t.clone());
        let b = g.base();
        g.add_path(b, &parse_word("x x x x x", &t).unwrap(), Some(b));
        g.add_path(b, &parse_word("x", &t).unwrap(), Some(b));
        let opts = FoldOptions {
            move_budget: 2,
            ..FoldOptions::default()
        };
        assert!(matches!(
            make_u_folded(&g, &opts),
            Err(GraphError::Budget { .. })
        ));
    }

    #[test]
    fn dump_roundtrip_and_idempotence() {
        let t = tower("alphabet: x y z1 z2\nroot u1 = x y x");
        let g = build(&t, &["x u1^{t} z1 u1^{t} x y", "y z2"]);
        let dump = g.dump();
        let again = LabeledGraph::load(&dump, t.clone()).unwrap();
        assert_eq!(again.dump(), dump);
        let refolded = make_u_folded(&again, &FoldOptions::default()).unwrap();
        assert_eq!(refolded.num_vertices(), g.num_vertices());
        assert_eq!(refolded.edges().len(), g.edges().len());
        assert!(g.to_dot().contains("label=\"u1^{"));
    }

    #[test]
    fn generators_read_back() {
        let t = tower("alphabet: x y z1 z2\nroot u1 = x y x");
        let g = build(
            &t,
            &["x u1^{t} z1 u1^{t} x y", "x u1^{t} z2 u1^{t} x y", "y y"],
        );
        for w in g.language_generators(g.base()) {
            assert!(g.accepts(&w).unwrap(), "{}", w.render(&t));
        }
    }
}
