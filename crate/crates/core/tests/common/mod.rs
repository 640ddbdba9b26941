#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use lyndon_index::graph::{graph_from_words, FoldOptions, LabeledGraph};
use lyndon_index::types::{build_automaton, TypeAutomaton, TypeLetter};
use lyndon_index::words::{
    parse_word, validate_standard, validate_tower, Letter, StandardWord, Tower,
};
use lyndon_index::zt_poly::Poly;
use rand::rngs::StdRng;
use rand::Rng;

pub const NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Free-group words as nonzero integers: `±(i+1)` is the `i`-th letter.
pub type FWord = Vec<i32>;

pub fn reduce(w: &[i32]) -> FWord {
    let mut out: FWord = Vec::new();
    for &a in w {
        if out.last() == Some(&-a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

pub fn inv(w: &[i32]) -> FWord {
    w.iter().rev().map(|a| -a).collect()
}

pub fn mul(a: &[i32], b: &[i32]) -> FWord {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    reduce(&v)
}

pub fn text(w: &[i32]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&a| {
            let n = NAMES[(a.unsigned_abs() - 1) as usize];
            if a > 0 {
                n.to_string()
            } else {
                format!("{n}^-1")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_word(rng: &mut StdRng, rank: i32, min: usize, max: usize) -> FWord {
    let len = rng.gen_range(min..=max);
    let mut w: FWord = Vec::new();
    while w.len() < len {
        let a = rng.gen_range(1..=rank) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if w.last() != Some(&-a) {
            w.push(a);
        }
    }
    w
}

/// Classical Stallings graph: `out[v][a]` is the target of letter `a`.
#[derive(Clone, Debug)]
pub struct FreeGraph {
    pub out: Vec<HashMap<i32, usize>>,
}

impl FreeGraph {
    pub fn from_words(words: &[FWord]) -> Self {
        let mut edges: Vec<(usize, i32, usize)> = Vec::new();
        let mut n = 1;
        for w in words {
            let w = reduce(w);
            let mut cur = 0;
            for (i, &a) in w.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((cur, a, next));
                cur = next;
            }
        }
        Self::fold(n, edges)
    }

    pub fn from_edges(n: usize, edges: Vec<(usize, i32, usize)>) -> Self {
        Self::fold(n, edges)
    }

    fn fold(n: usize, mut edges: Vec<(usize, i32, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while p[r] != r {
                r = p[r];
            }
            p[v] = r;
            r
        }
        loop {
            let mut seen: HashMap<(usize, i32), usize> = HashMap::new();
            let mut merge = None;
            for e in edges.iter_mut() {
                e.0 = find(&mut parent, e.0);
                e.2 = find(&mut parent, e.2);
            }
            for &(u, a, v) in &edges {
                for (x, b, y) in [(u, a, v), (v, -a, u)] {
                    if let Some(&z) = seen.get(&(x, b)) {
                        if z != y {
                            merge = Some((z, y));
                            break;
                        }
                    } else {
                        seen.insert((x, b), y);
                    }
                }
                if merge.is_some() {
                    break;
                }
            }
            match merge {
                Some((a, b)) => {
                    let (a, b) = (a.min(b), a.max(b));
                    parent[b] = a;
                }
                None => break,
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&v| find(&mut parent, v) == v).collect();
        let id: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out = vec![HashMap::new(); roots.len()];
        for (u, a, v) in edges {
            out[id[&u]].insert(a, id[&v]);
            out[id[&v]].insert(-a, id[&u]);
        }
        FreeGraph { out }
    }

    pub fn read(&self, v: usize, w: &[i32]) -> Option<usize> {
        w.iter().try_fold(v, |at, a| self.out[at].get(a).copied())
    }

    pub fn accepts(&self, w: &[i32]) -> bool {
        self.read(0, &reduce(w)) == Some(0)
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    pub fn rank(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    /// Directed edges `(from, letter, to)` with positive letters.
    pub fn edges(&self) -> Vec<(usize, i32, usize)> {
        let mut e = Vec::new();
        for (u, m) in self.out.iter().enumerate() {
            for (&a, &v) in m {
                if a > 0 {
                    e.push((u, a, v));
                }
            }
        }
        e.sort();
        e
    }

    /// Generators from a spanning tree: one per non-tree edge.
    pub fn basis(&self) -> (Vec<FWord>, HashMap<(usize, i32), i32>) {
        let mut path: Vec<Option<FWord>> = vec![None; self.num_vertices()];
        path[0] = Some(Vec::new());
        let mut tree = HashSet::new();
        let mut q = VecDeque::from([0]);
        while let Some(u) = q.pop_front() {
            let mut ls: Vec<_> = self.out[u].iter().map(|(a, v)| (*a, *v)).collect();
            ls.sort();
            for (a, v) in ls {
                if path[v].is_none() {
                    let mut p = path[u].clone().unwrap();
                    p.push(a);
                    path[v] = Some(p);
                    tree.insert((u, a));
                    tree.insert((v, -a));
                    q.push_back(v);
                }
            }
        }
        let mut gens = Vec::new();
        let mut label = HashMap::new();
        for (u, a, v) in self.edges() {
            if tree.contains(&(u, a)) {
                continue;
            }
            let w = mul(
                &mul(path[u].as_ref().unwrap(), &[a]),
                &inv(path[v].as_ref().unwrap()),
            );
            gens.push(w);
            let j = gens.len() as i32;
            label.insert((u, a), j);
            label.insert((v, -a), -j);
        }
        (gens, label)
    }
}

/// `|⟨g⟩ : ⟨h⟩|` through a Nielsen basis of `⟨g⟩`: `None` when infinite.
pub fn index_oracle(g: &[FWord], h: &[FWord]) -> Option<usize> {
    let sg = FreeGraph::from_words(g);
    let (basis, label) = sg.basis();
    let r = basis.len() as i32;
    let mut rewritten = Vec::new();
    for w in h {
        let w = reduce(w);
        let mut at = 0;
        let mut out = Vec::new();
        for &a in &w {
            if let Some(&j) = label.get(&(at, a)) {
                out.push(j);
            }
            at = sg.out[at][&a];
        }
        assert_eq!(at, 0, "subgroup generator outside the group");
        rewritten.push(reduce(&out));
    }
    let sh = FreeGraph::from_words(&rewritten);
    let complete = sh
        .out
        .iter()
        .all(|m| (1..=r).all(|a| m.contains_key(&a) && m.contains_key(&-a)));
    complete.then_some(sh.num_vertices())
}

/// Right cosets of `⟨h⟩` in `⟨g⟩` by breadth-first enumeration, `None`
/// past `bound`.
pub fn coset_oracle(g: &[FWord], h: &[FWord], bound: usize) -> Option<usize> {
    let sh = FreeGraph::from_words(h);
    let mut gens: Vec<FWord> = Vec::new();
    for w in g {
        gens.push(reduce(w));
        gens.push(inv(w));
    }
    let mut reps: Vec<FWord> = vec![Vec::new()];
    let mut i = 0;
    while i < reps.len() {
        for s in &gens {
            let w = mul(&reps[i], s);
            if !reps.iter().any(|r| sh.accepts(&mul(&w, &inv(r)))) {
                reps.push(w);
                if reps.len() > bound {
                    return None;
                }
            }
        }
        i += 1;
    }
    Some(reps.len())
}

/// Pullback of two Stallings graphs at their base vertices.
pub fn intersect(a: &FreeGraph, b: &FreeGraph) -> FreeGraph {
    let mut id: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
    let mut q = VecDeque::from([(0usize, 0usize)]);
    let mut edges = Vec::new();
    while let Some((u, v)) = q.pop_front() {
        let from = id[&(u, v)];
        let mut ls: Vec<_> = a.out[u].keys().copied().collect();
        ls.sort();
        for l in ls {
            if let Some(&v2) = b.out[v].get(&l) {
                let u2 = a.out[u][&l];
                let n = id.len();
                let to = *id.entry((u2, v2)).or_insert_with(|| {
                    q.push_back((u2, v2));
                    n
                });
                if l > 0 {
                    edges.push((from, l, to));
                }
            }
        }
    }
    FreeGraph::from_edges(id.len(), edges)
}

pub fn free_tower(rank: usize) -> Arc<Tower> {
    Arc::new(Tower::new(&NAMES[..rank]))
}

pub fn to_standard(w: &[i32]) -> StandardWord {
    StandardWord::from_letters(w.iter().map(|&a| Letter::Base {
        sym: (a.unsigned_abs() - 1) as usize,
        inv: a < 0,
    }))
}

pub fn free_graph(words: &[FWord], tower: &Arc<Tower>) -> LabeledGraph {
    let ws: Vec<_> = words.iter().map(|w| to_standard(w)).collect();
    graph_from_words(&ws, tower, &FoldOptions::default()).unwrap()
}

pub fn word(text: &str, tower: &Tower) -> StandardWord {
    parse_word(text, tower).unwrap()
}

/// Stabiliser of vertex 0 under random permutations of `k` points,
/// as a complete graph: a finite-index subgroup of the free group.
pub fn random_action(rng: &mut StdRng, rank: i32, k: usize) -> FreeGraph {
    loop {
        let mut edges = Vec::new();
        for a in 1..=rank {
            let mut p: Vec<usize> = (0..k).collect();
            for i in (1..k).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            for (u, &v) in p.iter().enumerate() {
                edges.push((u, a, v));
            }
        }
        let g = FreeGraph::from_edges(k, edges);
        let mut seen = HashSet::from([0]);
        let mut q = VecDeque::from([0]);
        while let Some(u) = q.pop_front() {
            for &v in g.out[u].values() {
                if seen.insert(v) {
                    q.push_back(v);
                }
            }
        }
        if seen.len() == k {
            return g;
        }
    }
}

/// Language generators of a Stallings graph.
pub fn generators(g: &FreeGraph) -> Vec<FWord> {
    g.basis().0
}

pub fn random_poly(rng: &mut StdRng, degree: usize, coeff: i64) -> Poly {
    loop {
        let cs: Vec<i64> = (0..=degree)
            .map(|_| rng.gen_range(-coeff..=coeff))
            .collect();
        let p = Poly::from_coeffs(cs);
        if p.is_nonstandard() {
            return p;
        }
    }
}

/// Towers with one or two roots and degree bound 2, over `x y z`.
pub fn random_tower(rng: &mut StdRng, roots: usize) -> Arc<Tower> {
    loop {
        let mut t = Tower::new(&["x", "y", "z"]);
        t.degree_bound = 2;
        let mut base = random_word(rng, 2, 2, 3);
        while base.first() == base.last().map(|a| -a).as_ref() {
            base = random_word(rng, 2, 2, 3);
        }
        t.add_root("u1", &text(&base)).unwrap();
        if roots == 2 {
            let e = random_poly(rng, 1, 2);
            let z = if rng.gen_bool(0.5) { "z" } else { "z^-1" };
            t.add_root("u2", &format!("{z} u1^{{{e}}} {z}")).unwrap();
        }
        if validate_tower(&t).is_ok() {
            return Arc::new(t);
        }
    }
}

/// A random standard word over base letters and root powers.
pub fn random_standard(rng: &mut StdRng, tower: &Tower, len: usize) -> StandardWord {
    loop {
        let mut letters = Vec::new();
        for _ in 0..len {
            if !tower.roots.is_empty() && rng.gen_bool(0.35) {
                let r = rng.gen_range(0..tower.roots.len());
                letters.push(Letter::power(r, {
                    let d = rng.gen_range(1..=2);
                    random_poly(rng, d, 2)
                }));
            } else {
                letters.push(Letter::Base {
                    sym: rng.gen_range(0..tower.alphabet.len()),
                    inv: rng.gen_bool(0.5),
                });
            }
        }
        let w = StandardWord::from_letters(letters);
        if !w.is_empty() && validate_standard(&w, tower) {
            return w;
        }
    }
}

/// U-folded graphs of random generator sets; inputs whose folding does not
/// certify are skipped and counted.
pub fn random_power_graphs(rng: &mut StdRng, count: usize) -> (Vec<LabeledGraph>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    while out.len() < count {
        let tower = random_tower(rng, 1 + out.len() % 2);
        let n = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..n)
            .map(|_| {
                let len = rng.gen_range(1..=4);
                random_standard(rng, &tower, len)
            })
            .collect();
        match graph_from_words(&gens, &tower, &FoldOptions::default()) {
            Ok(g) if g.roots_present().len() == tower.roots.len() && g.num_vertices() <= 40 => {
                out.push(g)
            }
            _ => skipped += 1,
        }
    }
    (out, skipped)
}

/// Random accepted walk in an automaton from `from`, preferring states that
/// continue forever.
pub fn random_walk(
    rng: &mut StdRng,
    auto: &TypeAutomaton,
    from: usize,
    len: usize,
) -> (Vec<TypeLetter>, usize) {
    let mut s = from;
    let mut w = Vec::new();
    for _ in 0..len {
        let live: Vec<_> = auto
            .transitions(s)
            .iter()
            .filter(|(_, t)| auto.is_live(*t))
            .collect();
        let pool: Vec<_> = if live.is_empty() {
            auto.transitions(s).iter().collect()
        } else {
            live
        };
        if pool.is_empty() {
            break;
        }
        let &(l, t) = pool[rng.gen_range(0..pool.len())];
        w.push(l);
        s = t;
    }
    (w, s)
}

/// Type automata from every vertex.
pub struct AllAutomata {
    pub autos: Vec<TypeAutomaton>,
}

impl AllAutomata {
    pub fn new(g: &LabeledGraph) -> Self {
        AllAutomata {
            autos: (0..g.num_vertices())
                .map(|v| build_automaton(g, v))
                .collect(),
        }
    }

    /// Whether `w` is a type of some path starting at the origin of its first
    /// letter.
    pub fn accepts(&self, w: &[TypeLetter]) -> bool {
        let Some(first) = w.first() else { return true };
        let (v, _) = self.autos[0].ends(*first).expect("letter of this graph");
        self.autos[v].accepts(w)
    }

    pub fn origin(&self, l: TypeLetter) -> usize {
        self.autos[0].ends(l).unwrap().0
    }

    pub fn target(&self, l: TypeLetter) -> usize {
        self.autos[0].ends(l).unwrap().1
    }
}
