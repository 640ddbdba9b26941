use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use super::GraphError;
use crate::words::{parse_letters, Letter, StandardWord, Tower};
use crate::zt_poly::{Coset, Lattice, Poly};

/// A directed edge; labels are base letters with positive orientation or
/// root powers with nonzero exponent. Inverses are traversed implicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Letter,
}

/// One step along an edge, forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: usize,
    pub inverse: bool,
}

/// A maximal connected piece of the `u`-power subgraph, with its vertices
/// placed by their label cosets relative to the base `z`.
#[derive(Clone, Debug)]
pub struct UComponent {
    pub root: usize,
    pub base: usize,
    pub lattice: Lattice,
    /// Member vertices sorted by canonical representative.
    pub vertices: Vec<usize>,
    pub reps: Vec<Poly>,
    /// Non-loop `u`-edges.
    pub spine: Vec<usize>,
    /// Loops.
    pub chords: Vec<usize>,
    slot: HashMap<Poly, usize>,
    position: HashMap<usize, usize>,
}

impl UComponent {
    pub(crate) fn new(
        root: usize,
        base: usize,
        lattice: Lattice,
        mut placed: Vec<(Poly, usize)>,
        edges: &[Edge],
        edge_ids: &[usize],
    ) -> Self {
        placed.sort();
        let vertices: Vec<usize> = placed.iter().map(|(_, v)| *v).collect();
        let reps: Vec<Poly> = placed.iter().map(|(r, _)| r.clone()).collect();
        let slot = placed.iter().map(|(r, v)| (r.clone(), *v)).collect();
        let position = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let (chords, spine) = edge_ids
            .iter()
            .partition(|&&e| edges[e].from == edges[e].to);
        UComponent {
            root,
            base,
            lattice,
            vertices,
            reps,
            spine,
            chords,
            slot,
            position,
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.position.contains_key(&v)
    }

    pub fn rep_of(&self, v: usize) -> Option<&Poly> {
        self.position.get(&v).map(|&i| &self.reps[i])
    }

    /// All exponents `α` labelling some path `a → b` inside the component.
    pub fn coset(&self, a: usize, b: usize) -> Coset {
        let ra = self.rep_of(a).expect("vertex outside the component");
        let rb = self.rep_of(b).expect("vertex outside the component");
        Coset::new(rb - ra, self.lattice.clone())
    }

    /// The vertex reached from `a` by `u^alpha`, if any.
    pub fn step(&self, a: usize, alpha: &Poly) -> Option<usize> {
        let target = self.lattice.reduce(&(self.rep_of(a)? + alpha));
        self.slot.get(&target).copied()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A `(Z[t], X)`-labelled graph over a fixed tower.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    tower: Arc<Tower>,
    num_vertices: usize,
    edges: Vec<Edge>,
    base: usize,
    folded: bool,
    comps: Vec<UComponent>,
    comp_at: HashMap<(usize, usize), usize>,
    base_step: HashMap<(usize, usize, bool), Step>,
}

impl LabeledGraph {
    /// A single base vertex and no edges.
    pub fn new(tower: Arc<Tower>) -> Self {
        let mut g = LabeledGraph {
            tower,
            num_vertices: 1,
            edges: Vec::new(),
            base: 0,
            folded: false,
            comps: Vec::new(),
            comp_at: HashMap::new(),
            base_step: HashMap::new(),
        };
        g.index();
        g
    }

    pub(crate) fn from_parts(
        tower: Arc<Tower>,
        num_vertices: usize,
        edges: Vec<Edge>,
        base: usize,
    ) -> Self {
        let mut g = LabeledGraph {
            tower,
            num_vertices,
            edges,
            base,
            folded: false,
            comps: Vec::new(),
            comp_at: HashMap::new(),
            base_step: HashMap::new(),
        };
        g.index();
        g
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn is_folded(&self) -> bool {
        self.folded
    }

    pub(crate) fn mark_folded(&mut self) {
        self.folded = true;
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.folded = false;
        self.num_vertices - 1
    }

    /// Adds an edge, flipping base letters given with negative orientation.
    pub fn add_edge(&mut self, from: usize, to: usize, label: Letter) {
        assert!(from < self.num_vertices && to < self.num_vertices);
        let edge = match label {
            Letter::Base { sym, inv: true } => Edge {
                from: to,
                to: from,
                label: Letter::Base { sym, inv: false },
            },
            Letter::Power { ref exp, .. } if exp.is_zero() => return,
            label => Edge { from, to, label },
        };
        self.edges.push(edge);
        self.folded = false;
        self.index();
    }

    /// Appends a path spelling `w` from `start`, ending at `end` (or at a
    /// fresh vertex).
    pub fn add_path(&mut self, start: usize, w: &StandardWord, end: Option<usize>) -> usize {
        let ls = w.letters();
        let mut cur = start;
        for (i, l) in ls.iter().enumerate() {
            let next = match end {
                Some(e) if i + 1 == ls.len() => e,
                _ => self.add_vertex(),
            };
            self.push_edge_raw(cur, next, l.clone());
            cur = next;
        }
        if ls.is_empty() {
            if let Some(e) = end {
                assert_eq!(e, start, "an empty path cannot join distinct vertices");
            }
        }
        self.index();
        cur
    }

    fn push_edge_raw(&mut self, from: usize, to: usize, label: Letter) {
        let edge = match label {
            Letter::Base { sym, inv: true } => Edge {
                from: to,
                to: from,
                label: Letter::Base { sym, inv: false },
            },
            label => Edge { from, to, label },
        };
        self.edges.push(edge);
        self.folded = false;
    }

    pub fn components(&self) -> &[UComponent] {
        &self.comps
    }

    pub fn component_of(&self, v: usize, root: usize) -> Option<&UComponent> {
        self.comp_at.get(&(v, root)).map(|&c| &self.comps[c])
    }

    pub(crate) fn component_index(&self, v: usize, root: usize) -> Option<usize> {
        self.comp_at.get(&(v, root)).copied()
    }

    /// Roots with at least one power edge.
    pub fn roots_present(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.edges.iter().filter_map(|e| e.label.root()).collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// The unique base-letter step out of `v` reading `sym^±1`.
    pub fn base_step(&self, v: usize, sym: usize, inv: bool) -> Option<Step> {
        self.base_step.get(&(v, sym, inv)).copied()
    }

    pub fn step_target(&self, v: usize, s: Step) -> usize {
        let e = &self.edges[s.edge];
        debug_assert_eq!(if s.inverse { e.to } else { e.from }, v);
        if s.inverse {
            e.from
        } else {
            e.to
        }
    }

    pub fn step_label(&self, s: Step) -> Letter {
        let l = &self.edges[s.edge].label;
        if s.inverse {
            l.inverse()
        } else {
            l.clone()
        }
    }

    /// Edge steps leaving `v`, in edge order, forward before backward.
    pub fn steps_from(&self, v: usize) -> Vec<Step> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push(Step {
                    edge: i,
                    inverse: false,
                });
            }
            if e.to == v {
                out.push(Step {
                    edge: i,
                    inverse: true,
                });
            }
        }
        out
    }

    /// Recomputes the lookup tables from the edge list. Components are
    /// placed relative to their smallest vertex.
    pub(crate) fn index(&mut self) {
        self.base_step.clear();
        for (i, e) in self.edges.iter().enumerate() {
            if let Letter::Base { sym, .. } = e.label {
                self.base_step.insert(
                    (e.from, sym, false),
                    Step {
                        edge: i,
                        inverse: false,
                    },
                );
                self.base_step.insert(
                    (e.to, sym, true),
                    Step {
                        edge: i,
                        inverse: true,
                    },
                );
            }
        }
        self.comps.clear();
        self.comp_at.clear();
        for root in self.roots_present() {
            for data in analyze(self.num_vertices, &self.edges, root) {
                let placed = data
                    .vertices
                    .iter()
                    .map(|&v| (data.reps[&v].clone(), v))
                    .collect();
                let c = UComponent::new(
                    root,
                    data.base,
                    data.lattice,
                    placed,
                    &self.edges,
                    &data.edges,
                );
                for &v in &c.vertices {
                    self.comp_at.insert((v, root), self.comps.len());
                }
                self.comps.push(c);
            }
        }
    }

    fn read_letter(&self, v: usize, l: &Letter, depth: usize) -> Option<usize> {
        match l {
            Letter::Base { sym, inv } => self
                .base_step(v, *sym, *inv)
                .map(|s| self.step_target(v, s)),
            Letter::Power { root, exp } => {
                if let Some(c) = self.component_of(v, *root) {
                    if let Some(t) = c.step(v, exp) {
                        return Some(t);
                    }
                }
                // an integer power may be spelled out letter by letter
                let k = exp.as_integer()?;
                if depth > self.tower.roots.len() {
                    return None;
                }
                let word = self.tower.root_word(*root).pow(k);
                self.read_from(v, &word, depth + 1)
            }
        }
    }

    fn read_from(&self, v: usize, w: &StandardWord, depth: usize) -> Option<usize> {
        let mut cur = v;
        for l in w.letters() {
            cur = self.read_letter(cur, l, depth)?;
        }
        Some(cur)
    }

    /// Deterministic reading without the foldedness check.
    pub(crate) fn read_unchecked(&self, v: usize, w: &StandardWord) -> Option<usize> {
        self.read_from(v, w, 0)
    }

    /// Follows `w` from `v`: base letters along their unique edges, powers
    /// `u^α` to the component vertex whose coset contains `α`.
    pub fn read_word(&self, v: usize, w: &StandardWord) -> Result<Option<usize>, GraphError> {
        if !self.folded {
            return Err(GraphError::NotFolded);
        }
        Ok(self.read_unchecked(v, w))
    }

    pub fn accepts(&self, w: &StandardWord) -> Result<bool, GraphError> {
        Ok(self.read_word(self.base, w)? == Some(self.base))
    }

    /// BFS tree paths from `v`: `paths[x]` spells a path `v → x`.
    pub fn tree_paths(&self, v: usize) -> (Vec<Option<StandardWord>>, Vec<Option<Step>>) {
        let mut paths: Vec<Option<StandardWord>> = vec![None; self.num_vertices];
        let mut via: Vec<Option<Step>> = vec![None; self.num_vertices];
        paths[v] = Some(StandardWord::empty());
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for s in self.steps_from(x) {
                let y = self.step_target(x, s);
                if paths[y].is_none() {
                    let mut w = paths[x].clone().unwrap();
                    w.push(self.step_label(s));
                    paths[y] = Some(w);
                    via[y] = Some(s);
                    queue.push_back(y);
                }
            }
        }
        (paths, via)
    }

    /// Words for the loops closed by each non-tree edge of a BFS spanning
    /// tree rooted at `v`.
    pub fn language_generators(&self, v: usize) -> Vec<StandardWord> {
        let (paths, via) = self.tree_paths(v);
        let tree: std::collections::HashSet<usize> = via.iter().flatten().map(|s| s.edge).collect();
        let mut gens = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if tree.contains(&i) {
                continue;
            }
            let (Some(p), Some(q)) = (&paths[e.from], &paths[e.to]) else {
                continue;
            };
            let mut w = p.clone();
            w.push(e.label.clone());
            let w = w.concat(&q.inverse());
            if !w.is_empty() {
                gens.push(w);
            }
        }
        gens
    }

    /// Edges minus vertices plus one, over the part reachable from the base.
    pub fn cycle_rank(&self) -> usize {
        let (paths, _) = self.tree_paths(self.base);
        let v = paths.iter().filter(|p| p.is_some()).count();
        let e = self
            .edges
            .iter()
            .filter(|e| paths[e.from].is_some())
            .count();
        e + 1 - v
    }

    pub fn label_token(&self, l: &Letter) -> String {
        l.render(&self.tower)
    }

    /// `vertex`, `edge` and `base` lines.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for v in 0..self.num_vertices {
            writeln!(out, "vertex {v}").unwrap();
        }
        for (i, e) in self.edges.iter().enumerate() {
            writeln!(
                out,
                "edge {i} {} {} {}",
                e.from,
                e.to,
                self.label_token(&e.label)
            )
            .unwrap();
        }
        writeln!(out, "base {}", self.base).unwrap();
        out
    }

    pub fn load(text: &str, tower: Arc<Tower>) -> Result<Self, GraphError> {
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut raw_edges = Vec::new();
        let mut base = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| GraphError::Format {
                line: i + 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad("expected a number"));
            match parts.as_slice() {
                ["vertex", id] => {
                    let n = ids.len();
                    if ids.insert(num(id)?, n).is_some() {
                        return Err(bad("repeated vertex"));
                    }
                }
                ["edge", _, from, to, token] => {
                    let mut ls = parse_letters(token, &tower)?;
                    if ls.len() != 1 {
                        return Err(bad("expected a single letter label"));
                    }
                    raw_edges.push((num(from)?, num(to)?, ls.remove(0), i + 1));
                }
                ["base", id] => base = Some((num(id)?, i + 1)),
                _ => return Err(bad("expected 'vertex', 'edge' or 'base'")),
            }
        }
        let lookup = |v: usize, line: usize| {
            ids.get(&v).copied().ok_or(GraphError::Format {
                line,
                msg: format!("unknown vertex {v}"),
            })
        };
        let (b, line) = base.ok_or(GraphError::Format {
            line: 0,
            msg: "missing 'base' line".into(),
        })?;
        let mut g = LabeledGraph::from_parts(tower, ids.len(), Vec::new(), lookup(b, line)?);
        for (from, to, l, line) in raw_edges {
            g.push_edge_raw(lookup(from, line)?, lookup(to, line)?, l);
        }
        g.index();
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        writeln!(out, "  {} [shape=doublecircle];", self.base).unwrap();
        for v in 0..self.num_vertices {
            if v != self.base {
                writeln!(out, "  {v} [shape=circle];").unwrap();
            }
        }
        for e in &self.edges {
            writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                e.from,
                e.to,
                self.label_token(&e.label)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Raw placement data of one `u`-component.
pub(crate) struct ComponentData {
    pub base: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub lattice: Lattice,
    pub reps: HashMap<usize, Poly>,
}

/// Components of the `root`-power subgraph: potentials by BFS from the
/// smallest vertex, lattice from the cycle values, canonical reps.
pub(crate) fn analyze(num_vertices: usize, edges: &[Edge], root: usize) -> Vec<ComponentData> {
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); num_vertices];
    for (i, e) in edges.iter().enumerate() {
        if e.label.root() == Some(root) {
            adj[e.from].push((i, false));
            adj[e.to].push((i, true));
        }
    }
    let mut seen = vec![false; num_vertices];
    let mut out = Vec::new();
    for start in 0..num_vertices {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        seen[start] = true;
        let mut pot: HashMap<usize, Poly> = HashMap::from([(start, Poly::zero())]);
        let mut vertices = vec![start];
        let mut comp_edges = Vec::new();
        let mut used = vec![false; edges.len()];
        let mut cycles = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(ei, inverse) in &adj[x] {
                let e = &edges[ei];
                let (y, delta) = if inverse {
                    (e.from, -e.label.exponent().unwrap())
                } else {
                    (e.to, e.label.exponent().unwrap().clone())
                };
                let py = &pot[&x] + &delta;
                if !used[ei] {
                    used[ei] = true;
                    comp_edges.push(ei);
                    match pot.get(&y) {
                        Some(old) => cycles.push(&py - old),
                        None => {
                            pot.insert(y, py);
                            seen[y] = true;
                            vertices.push(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        vertices.sort_unstable();
        comp_edges.sort_unstable();
        let lattice = Lattice::from_generators(&cycles);
        let reps = pot.iter().map(|(v, p)| (*v, lattice.reduce(p))).collect();
        out.push(ComponentData {
            base: start,
            vertices,
            edges: comp_edges,
            lattice,
            reps,
        });
    }
    out
}
