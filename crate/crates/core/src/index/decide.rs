use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::IndexError;
use crate::graph::{make_u_folded, wedge, FoldOptions, LabeledGraph};
use crate::types::{
    build_automaton, enumerate_periodic, is_doubled, read_type_letter, PeriodicType, TypeAutomaton,
    TypeLetter,
};
use crate::words::{Letter, StandardWord, Tower};
use crate::zt_poly::{lattice_index, transversal, Lattice, LatticeIndex, Poly};

/// Default lasso budget of the enumeration strategy.
pub const DEFAULT_LASSO_BUDGET: u64 = 1_000_000;

/// How the periodic types of `Γ` are checked against `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Breadth-first search of the product of the type automaton with `Δ`,
    /// which covers every periodic type at once.
    Product,
    /// Lassos in increasing content, up to `K(Γ,Δ)` or the budget.
    Enumerate { budget: u64 },
}

#[derive(Clone, Debug)]
pub struct IndexOptions {
    pub strategy: Strategy,
    pub fold: FoldOptions,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            strategy: Strategy::Product,
            fold: FoldOptions::default(),
        }
    }
}

/// Why the index is infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteWitness {
    /// A periodic type of `Γ` that `Δ` does not double.
    Lasso(PeriodicType),
    /// Both groups are abelian and the subgroup lattice has smaller rank.
    RankDrop { group: usize, subgroup: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexVerdict {
    Finite { index: u64, reps: Vec<StandardWord> },
    Infinite(InfiniteWitness),
    BudgetExceeded { content: usize },
}

impl IndexVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, IndexVerdict::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, IndexVerdict::Infinite(_))
    }

    /// `FINITE n` and one representative per line, `INFINITE` and the
    /// witness, or `BUDGET-EXCEEDED c`.
    pub fn render(&self, tower: &Tower) -> String {
        let mut out = String::new();
        match self {
            IndexVerdict::Finite { index, reps } => {
                writeln!(out, "FINITE {index}").unwrap();
                for r in reps {
                    writeln!(out, "{}", r.render(tower)).unwrap();
                }
            }
            IndexVerdict::Infinite(InfiniteWitness::Lasso(t)) => {
                writeln!(out, "INFINITE\n{t}").unwrap();
            }
            IndexVerdict::Infinite(InfiniteWitness::RankDrop { group, subgroup }) => {
                writeln!(out, "INFINITE\nrank {group} > {subgroup}").unwrap();
            }
            IndexVerdict::BudgetExceeded { content } => {
                writeln!(out, "BUDGET-EXCEEDED {content}").unwrap();
            }
        }
        out
    }
}

/// Fails unless every generator of `L(gh)` reads as a loop in `gg`.
pub fn check_subgroup(gg: &LabeledGraph, gh: &LabeledGraph) -> Result<(), IndexError> {
    for w in gh.language_generators(gh.base()) {
        if !gg.accepts(&w)? {
            return Err(IndexError::NotSubgroup(w.render(gg.tower())));
        }
    }
    Ok(())
}

/// Decides whether `|L(gg) : L(gh)|` is finite.
pub fn decide_index(
    gg: &LabeledGraph,
    gh: &LabeledGraph,
    opts: &IndexOptions,
) -> Result<IndexVerdict, IndexError> {
    if !gg.is_folded() || !gh.is_folded() {
        return Err(IndexError::NotFolded);
    }
    check_subgroup(gg, gh)?;
    let auto = build_automaton(gg, gg.base());
    if !auto.types_infinite() {
        return abelian_index(gg, gh);
    }
    let dauto = build_automaton(gh, gh.base());
    if !dauto.types_infinite() {
        let (prefix, cycle) = auto.path_to_cycle(auto.start()).expect("live start");
        let t = PeriodicType { prefix, cycle }.canonical();
        return Ok(IndexVerdict::Infinite(InfiniteWitness::Lasso(t)));
    }
    let verdict = match opts.strategy {
        Strategy::Product => product_search(&auto, gh)?,
        Strategy::Enumerate { budget } => enumerate_search(&auto, gh, budget)?,
    };
    match verdict {
        Some(v) => Ok(v),
        None => {
            let reps = coset_reps(gg, gh, gh.num_vertices())?;
            Ok(IndexVerdict::Finite {
                index: reps.len() as u64,
                reps,
            })
        }
    }
}

fn product_search(
    auto: &TypeAutomaton,
    gh: &LabeledGraph,
) -> Result<Option<IndexVerdict>, IndexError> {
    let start = (auto.start(), gh.base());
    type Pair = (usize, usize);
    let mut parent: HashMap<Pair, Option<(Pair, TypeLetter)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some((s, d)) = queue.pop_front() {
        for &(l, t) in auto.transitions(s) {
            if !auto.is_live(t) {
                continue;
            }
            match read_type_letter(auto, l, gh, d)? {
                Some(d2) => {
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry((t, d2)) {
                        e.insert(Some(((s, d), l)));
                        queue.push_back((t, d2));
                    }
                }
                None => {
                    let mut prefix = vec![l];
                    let mut at = (s, d);
                    while let Some(Some((prev, pl))) = parent.get(&at) {
                        prefix.push(*pl);
                        at = *prev;
                    }
                    prefix.reverse();
                    let (tail, cycle) = auto.path_to_cycle(t).expect("live state");
                    prefix.extend(tail);
                    let lasso = PeriodicType { prefix, cycle }.canonical();
                    assert!(lasso.is_valid(auto), "witness {lasso} is not a type");
                    assert!(
                        !is_doubled(auto, &lasso, gh, gh.base())?.doubled,
                        "witness {lasso} is doubled"
                    );
                    return Ok(Some(IndexVerdict::Infinite(InfiniteWitness::Lasso(lasso))));
                }
            }
        }
    }
    Ok(None)
}

fn enumerate_search(
    auto: &TypeAutomaton,
    gh: &LabeledGraph,
    budget: u64,
) -> Result<Option<IndexVerdict>, IndexError> {
    let k = auto.k_const(gh.num_vertices());
    let limit = usize::try_from(&k).unwrap_or(usize::MAX);
    let mut content = 0;
    for (checked, t) in (0u64..).zip(enumerate_periodic(auto, limit)) {
        if checked == budget {
            return Ok(Some(IndexVerdict::BudgetExceeded { content }));
        }
        content = t.content();
        if !is_doubled(auto, &t, gh, gh.base())?.doubled {
            return Ok(Some(IndexVerdict::Infinite(InfiniteWitness::Lasso(t))));
        }
    }
    Ok(None)
}

/// Both groups are `g u^L g⁻¹` for one root `u`, so the index is a
/// lattice index.
fn abelian_index(gg: &LabeledGraph, gh: &LabeledGraph) -> Result<IndexVerdict, IndexError> {
    let live: Vec<_> = gg
        .components()
        .iter()
        .filter(|c| !c.lattice.is_trivial())
        .collect();
    let c = match live.as_slice() {
        [] => {
            return Ok(IndexVerdict::Finite {
                index: 1,
                reps: vec![StandardWord::empty()],
            })
        }
        [c] => *c,
        _ => {
            return Err(IndexError::Unsupported(
                "abelian group with several components".into(),
            ))
        }
    };
    let (paths, _) = gg.tree_paths(gg.base());
    let g = paths[c.base].clone().expect("component reachable");
    let ginv = g.inverse();
    let pu = gg.tower().root_word(c.root).clone();
    let mut exps = Vec::new();
    for h in gh.language_generators(gh.base()) {
        let w = ginv.concat(&h).concat(&g);
        let alpha = match w.letters() {
            [] => Poly::zero(),
            [Letter::Power { root, exp }] if *root == c.root => exp.clone(),
            _ => (-8i64..=8)
                .find(|&k| k != 0 && pu.pow(k) == w)
                .map(Poly::constant)
                .ok_or_else(|| {
                    IndexError::Unsupported(format!(
                        "generator {} is not a power of the root",
                        h.render(gg.tower())
                    ))
                })?,
        };
        exps.push(alpha);
    }
    let sub = Lattice::from_generators(&exps);
    match lattice_index(&c.lattice, &sub).map_err(|e| IndexError::Unsupported(e.to_string()))? {
        LatticeIndex::Infinite => Ok(IndexVerdict::Infinite(InfiniteWitness::RankDrop {
            group: c.lattice.rank(),
            subgroup: sub.rank(),
        })),
        LatticeIndex::Finite(n) => {
            let reps = transversal(&c.lattice, &sub)
                .expect("finite index")
                .into_iter()
                .map(|tau| {
                    if tau.is_zero() {
                        StandardWord::empty()
                    } else {
                        g.concat(&StandardWord::from_letters([Letter::power(c.root, tau)]))
                            .concat(&ginv)
                    }
                })
                .collect();
            Ok(IndexVerdict::Finite { index: n, reps })
        }
    }
}

/// Right coset representatives of `L(gh)` in `L(gg)`, grown breadth first
/// over products of generators of `L(gg)`.
pub fn coset_reps(
    gg: &LabeledGraph,
    gh: &LabeledGraph,
    bound: usize,
) -> Result<Vec<StandardWord>, IndexError> {
    let tower = gg.tower();
    let mut gens: Vec<StandardWord> = gg
        .language_generators(gg.base())
        .into_iter()
        .flat_map(|w| [w.clone(), w.inverse()])
        .collect();
    gens.sort_by_key(|w| w.len());
    let mut seen = std::collections::HashSet::new();
    gens.retain(|w| seen.insert(w.render(tower)));
    let mut reps = vec![StandardWord::empty()];
    let mut i = 0;
    while i < reps.len() {
        for s in &gens {
            let w = reps[i].concat(s);
            let mut known = false;
            for r in &reps {
                if gh.accepts(&w.concat(&r.inverse()))? {
                    known = true;
                    break;
                }
            }
            if !known {
                reps.push(w);
                if reps.len() > bound {
                    return Err(IndexError::RepBound(bound));
                }
            }
        }
        i += 1;
    }
    Ok(reps)
}

/// The join `⟨L(g1), L(g2)⟩` folded and tested against `gh`.
pub fn join_and_decide(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    gh: &LabeledGraph,
    opts: &IndexOptions,
) -> Result<IndexVerdict, IndexError> {
    let j = make_u_folded(&wedge(g1, g2), &opts.fold)?;
    decide_index(&j, gh, opts)
}
