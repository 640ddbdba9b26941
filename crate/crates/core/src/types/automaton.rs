use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;

use super::TypesError;
use crate::graph::{LabeledGraph, Step};
use crate::words::{class_index, equiv_classes, validate_standard, Letter, StandardWord};
use crate::zt_poly::{coset_meets_region, Coset, Poly, Region};

/// A letter of `T_Γ`: a base edge traversed in either direction, or a run
/// inside component `comp` from `a` to `b` with exponent in class `class`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeLetter {
    Edge {
        edge: usize,
        inverse: bool,
    },
    Span {
        comp: usize,
        a: usize,
        b: usize,
        class: usize,
    },
}

impl fmt::Display for TypeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLetter::Edge { edge, inverse } => {
                write!(f, "e{edge}{}", if *inverse { "^-1" } else { "" })
            }
            TypeLetter::Span { comp, a, b, class } => write!(f, "s{comp}:{a}->{b}:{class}"),
        }
    }
}

impl std::str::FromStr for TypeLetter {
    type Err = TypesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TypesError::Syntax(s.to_string());
        if let Some(rest) = s.strip_prefix('e') {
            let (num, inverse) = match rest.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (rest, false),
            };
            return Ok(TypeLetter::Edge {
                edge: num.parse().map_err(|_| bad())?,
                inverse,
            });
        }
        let rest = s.strip_prefix('s').ok_or_else(bad)?;
        let mut parts = rest.split(':');
        let comp = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let (a, b) = parts
            .next()
            .and_then(|p| p.split_once("->"))
            .ok_or_else(bad)?;
        let class = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(TypeLetter::Span {
            comp,
            a: a.parse().map_err(|_| bad())?,
            b: b.parse().map_err(|_| bad())?,
            class,
        })
    }
}

/// What a letter asks of the graph it is read in.
#[derive(Clone, Debug)]
pub enum LetterLabel {
    Base {
        sym: usize,
        inv: bool,
    },
    Span {
        root: usize,
        coset: Coset,
        class: Region,
        witness: Poly,
    },
}

/// Last letter read, which constrains the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Last {
    None,
    Edge(usize, bool),
    Comp(usize),
}

/// A vertex, the last letter read and the last `M - 1` letters, which is
/// all a standard form needs to see.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub vertex: usize,
    pub last: Last,
    pub window: Vec<TypeLetter>,
}

pub type TypeWord = Vec<TypeLetter>;

/// Types readable from one vertex, as a deterministic automaton over
/// `T_Γ`. Every state accepts.
#[derive(Clone, Debug)]
pub struct TypeAutomaton {
    num_vertices: usize,
    base_edges: usize,
    spans: Vec<TypeLetter>,
    labels: HashMap<TypeLetter, LetterLabel>,
    ends: HashMap<TypeLetter, (usize, usize)>,
    classes: BTreeMap<usize, Vec<Region>>,
    root_lengths: Vec<usize>,
    states: Vec<State>,
    index: HashMap<State, usize>,
    trans: Vec<Vec<(TypeLetter, usize)>>,
    live: Vec<bool>,
    start: usize,
}

/// The letters of `T_Γ`: every base edge plus every nonempty span letter.
pub fn type_alphabet(g: &LabeledGraph) -> Vec<TypeLetter> {
    let mut out: Vec<TypeLetter> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.label.root().is_none())
        .map(|(i, _)| TypeLetter::Edge {
            edge: i,
            inverse: false,
        })
        .collect();
    out.extend(span_letters(g).0);
    out
}

type SpanTable = (
    Vec<TypeLetter>,
    HashMap<TypeLetter, LetterLabel>,
    BTreeMap<usize, Vec<Region>>,
);

fn span_letters(g: &LabeledGraph) -> SpanTable {
    let roots = g.roots_present();
    let classes: BTreeMap<usize, Vec<Region>> = roots
        .iter()
        .map(|&u| (u, equiv_classes(g.tower(), &roots, u)))
        .collect();
    let mut letters = Vec::new();
    let mut labels = HashMap::new();
    for (ci, c) in g.components().iter().enumerate() {
        let cells = &classes[&c.root];
        for &a in &c.vertices {
            for &b in &c.vertices {
                let coset = c.coset(a, b);
                for (k, cell) in cells.iter().enumerate() {
                    if let Some(witness) = coset_meets_region(&coset, cell) {
                        let l = TypeLetter::Span {
                            comp: ci,
                            a,
                            b,
                            class: k,
                        };
                        letters.push(l);
                        labels.insert(
                            l,
                            LetterLabel::Span {
                                root: c.root,
                                coset: coset.clone(),
                                class: cell.clone(),
                                witness,
                            },
                        );
                    }
                }
            }
        }
    }
    (letters, labels, classes)
}

/// Explores the states reachable from `(v, none)`.
pub fn build_automaton(g: &LabeledGraph, v: usize) -> TypeAutomaton {
    let (spans, mut labels, classes) = span_letters(g);
    let mut ends = HashMap::new();
    let mut base_edges = 0;
    for (i, e) in g.edges().iter().enumerate() {
        if let Letter::Base { sym, .. } = e.label {
            base_edges += 1;
            for inverse in [false, true] {
                let l = TypeLetter::Edge { edge: i, inverse };
                labels.insert(l, LetterLabel::Base { sym, inv: inverse });
                let (from, to) = if inverse {
                    (e.to, e.from)
                } else {
                    (e.from, e.to)
                };
                ends.insert(l, (from, to));
            }
        }
    }
    let mut spans_at: HashMap<usize, Vec<TypeLetter>> = HashMap::new();
    for &l in &spans {
        if let TypeLetter::Span { a, b, .. } = l {
            ends.insert(l, (a, b));
            spans_at.entry(a).or_default().push(l);
        }
    }
    let root_lengths: Vec<usize> = g
        .roots_present()
        .iter()
        .map(|&u| g.tower().root_word(u).len())
        .collect();
    let keep = root_lengths.iter().copied().max().unwrap_or(0);
    let letter_of = |l: &TypeLetter| match &labels[l] {
        LetterLabel::Base { sym, inv } => Letter::Base {
            sym: *sym,
            inv: *inv,
        },
        LetterLabel::Span { root, witness, .. } => Letter::power(*root, witness.clone()),
    };
    let extend = |window: &[TypeLetter], l: TypeLetter| -> Option<Vec<TypeLetter>> {
        let mut w = window.to_vec();
        w.push(l);
        if keep > 0
            && !validate_standard(
                &StandardWord::raw(w.iter().map(letter_of).collect()),
                g.tower(),
            )
        {
            return None;
        }
        let cut = w.len().saturating_sub(keep);
        Some(w.split_off(cut))
    };

    let start_state = State {
        vertex: v,
        last: Last::None,
        window: Vec::new(),
    };
    let mut states = vec![start_state.clone()];
    let mut index = HashMap::from([(start_state, 0)]);
    let mut trans: Vec<Vec<(TypeLetter, usize)>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(si) = queue.pop_front() {
        let st = states[si].clone();
        let mut out = Vec::new();
        for s in g.steps_from(st.vertex) {
            if g.edges()[s.edge].label.root().is_some() {
                continue;
            }
            if st.last == Last::Edge(s.edge, !s.inverse) {
                continue;
            }
            let l = TypeLetter::Edge {
                edge: s.edge,
                inverse: s.inverse,
            };
            let Some(window) = extend(&st.window, l) else {
                continue;
            };
            out.push((
                l,
                State {
                    vertex: g.step_target(st.vertex, s),
                    last: Last::Edge(s.edge, s.inverse),
                    window,
                },
            ));
        }
        for &l in spans_at.get(&st.vertex).map(Vec::as_slice).unwrap_or(&[]) {
            let TypeLetter::Span { comp, b, .. } = l else {
                unreachable!()
            };
            if st.last == Last::Comp(comp) {
                continue;
            }
            let Some(window) = extend(&st.window, l) else {
                continue;
            };
            out.push((
                l,
                State {
                    vertex: b,
                    last: Last::Comp(comp),
                    window,
                },
            ));
        }
        out.sort();
        let mut row = Vec::with_capacity(out.len());
        for (l, target) in out {
            let ti = *index.entry(target.clone()).or_insert_with(|| {
                states.push(target);
                trans.push(Vec::new());
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            row.push((l, ti));
        }
        trans[si] = row;
    }
    let live = omega_live(&trans);
    TypeAutomaton {
        num_vertices: g.num_vertices(),
        base_edges,
        spans,
        labels,
        ends,
        classes,
        root_lengths,
        states,
        index,
        trans,
        live,
        start: 0,
    }
}

/// States from which an infinite run exists.
fn omega_live(trans: &[Vec<(TypeLetter, usize)>]) -> Vec<bool> {
    let n = trans.len();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            if alive[s] && !trans[s].iter().any(|&(_, t)| alive[t]) {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

impl TypeAutomaton {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, s: usize) -> &State {
        &self.states[s]
    }

    pub fn transitions(&self, s: usize) -> &[(TypeLetter, usize)] {
        &self.trans[s]
    }

    pub fn is_live(&self, s: usize) -> bool {
        self.live[s]
    }

    pub fn step(&self, s: usize, l: TypeLetter) -> Option<usize> {
        self.trans[s]
            .binary_search_by(|(x, _)| x.cmp(&l))
            .ok()
            .map(|i| self.trans[s][i].1)
    }

    pub fn run(&self, from: usize, word: &[TypeLetter]) -> Option<usize> {
        word.iter().try_fold(from, |s, &l| self.step(s, l))
    }

    pub fn accepts(&self, word: &[TypeLetter]) -> bool {
        self.run(self.start, word).is_some()
    }

    pub fn label(&self, l: TypeLetter) -> Option<&LetterLabel> {
        self.labels.get(&l)
    }

    /// Endpoints of a letter in the graph.
    pub fn ends(&self, l: TypeLetter) -> Option<(usize, usize)> {
        self.ends.get(&l).copied()
    }

    pub fn classes(&self, root: usize) -> &[Region] {
        self.classes.get(&root).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `|T_Γ|`: base edges plus span letters.
    pub fn alphabet_size(&self) -> usize {
        self.base_edges + self.spans.len()
    }

    pub fn span_letters(&self) -> &[TypeLetter] {
        &self.spans
    }

    pub fn graph_vertices(&self) -> usize {
        self.num_vertices
    }

    /// `1 + max ‖π(u)‖` over the roots present, `1` without roots.
    pub fn m_const(&self) -> usize {
        1 + self.root_lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn n_const(&self) -> BigUint {
        let m = self.m_const();
        BigUint::from(m) * (BigUint::from(1u8) + BigUint::from(self.alphabet_size()).pow(m as u32))
    }

    pub fn k_const(&self, delta_vertices: usize) -> BigUint {
        let m = self.m_const();
        let t = BigUint::from(self.alphabet_size()).pow(m as u32);
        BigUint::from(m)
            * (t * BigUint::from(delta_vertices.saturating_sub(1)) + BigUint::from(1u8))
    }

    /// Whether infinitely many types are readable from the start.
    pub fn types_infinite(&self) -> bool {
        self.live[self.start]
    }

    /// A finite word from `from` to a state on a cycle, and that cycle.
    pub fn path_to_cycle(&self, from: usize) -> Option<(TypeWord, TypeWord)> {
        if !self.live[from] {
            return None;
        }
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut word = Vec::new();
        let mut s = from;
        loop {
            if let Some(&at) = seen.get(&s) {
                let cycle = word.split_off(at);
                return Some((word, cycle));
            }
            seen.insert(s, word.len());
            let &(l, t) = self.trans[s].iter().find(|(_, t)| self.live[*t])?;
            word.push(l);
            s = t;
        }
    }

    /// Collapses maximal power runs of a path into span letters.
    pub fn type_of_path(
        &self,
        g: &LabeledGraph,
        from: usize,
        path: &[Step],
    ) -> Result<TypeWord, TypesError> {
        let mut out = Vec::new();
        let mut label = Vec::new();
        let mut at = from;
        let mut i = 0;
        while i < path.len() {
            let s = path[i];
            let l = g.step_label(s);
            match l.root() {
                None => {
                    out.push(TypeLetter::Edge {
                        edge: s.edge,
                        inverse: s.inverse,
                    });
                    label.push(l);
                    at = g.step_target(at, s);
                    i += 1;
                }
                Some(root) => {
                    let a = at;
                    let mut total = Poly::zero();
                    while i < path.len() && g.step_label(path[i]).root() == Some(root) {
                        total += g.step_label(path[i]).exponent().unwrap();
                        at = g.step_target(at, path[i]);
                        i += 1;
                    }
                    let comp = g.component_index(a, root).ok_or(TypesError::NotSpecial)?;
                    let cells = self.classes(root);
                    let class = class_index(cells, &total).map_err(|_| TypesError::NotSpecial)?;
                    out.push(TypeLetter::Span {
                        comp,
                        a,
                        b: at,
                        class,
                    });
                    label.push(Letter::power(root, total));
                }
            }
        }
        if !validate_standard(&StandardWord::raw(label), g.tower()) {
            return Err(TypesError::NotSpecial);
        }
        Ok(out)
    }

    /// The type of the path spelling the standard word `w` from `from`, one
    /// letter per letter of `w`.
    pub fn type_of_word(
        &self,
        g: &LabeledGraph,
        from: usize,
        w: &StandardWord,
    ) -> Result<TypeWord, TypesError> {
        if !validate_standard(w, g.tower()) {
            return Err(TypesError::NotSpecial);
        }
        let mut out = Vec::new();
        let mut at = from;
        for l in w.letters() {
            match l {
                Letter::Base { sym, inv } => {
                    let s = g.base_step(at, *sym, *inv).ok_or(TypesError::NotSpecial)?;
                    out.push(TypeLetter::Edge {
                        edge: s.edge,
                        inverse: s.inverse,
                    });
                    at = g.step_target(at, s);
                }
                Letter::Power { root, exp } => {
                    let comp = g.component_index(at, *root).ok_or(TypesError::NotSpecial)?;
                    let b = g.components()[comp]
                        .step(at, exp)
                        .ok_or(TypesError::NotSpecial)?;
                    let class = class_index(self.classes(*root), exp)
                        .map_err(|_| TypesError::NotSpecial)?;
                    out.push(TypeLetter::Span {
                        comp,
                        a: at,
                        b,
                        class,
                    });
                    at = b;
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self, word: &[TypeLetter]) -> String {
        word.iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn state_of(&self, st: &State) -> Option<usize> {
        self.index.get(st).copied()
    }
}

/// Whether the splice `t s r` is accepted, where `ts` ends and `sr` starts
/// with the same `s_len` letters.
pub fn concat_admissible(
    auto: &TypeAutomaton,
    ts: &[TypeLetter],
    sr: &[TypeLetter],
    s_len: usize,
) -> bool {
    assert!(s_len <= ts.len() && s_len <= sr.len());
    assert_eq!(
        ts[ts.len() - s_len..],
        sr[..s_len],
        "words must overlap on s"
    );
    let mut w = ts.to_vec();
    w.extend_from_slice(&sr[s_len..]);
    auto.accepts(&w)
}
