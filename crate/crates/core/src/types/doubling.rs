use std::collections::HashSet;

use super::automaton::{LetterLabel, TypeAutomaton, TypeLetter};
use super::lasso::PeriodicType;
use super::TypesError;
use crate::graph::LabeledGraph;
use crate::zt_poly::coset_region_subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingReport {
    pub doubled: bool,
    pub steps: usize,
}

/// Reads one letter of `T_Γ` in `delta` from `at`. A span letter moves to
/// the unique `b'` whose coset, cut by the letter's class, contains the
/// letter's exponents.
pub fn read_type_letter(
    auto: &TypeAutomaton,
    l: TypeLetter,
    delta: &LabeledGraph,
    at: usize,
) -> Result<Option<usize>, TypesError> {
    let label = auto.label(l).ok_or(TypesError::UnknownLetter(l))?;
    Ok(match label {
        LetterLabel::Base { sym, inv } => delta
            .base_step(at, *sym, *inv)
            .map(|s| delta.step_target(at, s)),
        LetterLabel::Span {
            root,
            coset,
            class,
            witness,
        } => {
            let Some(c) = delta.component_of(at, *root) else {
                return Ok(None);
            };
            let hits: Vec<usize> = c
                .vertices
                .iter()
                .copied()
                .filter(|&b| coset_region_subset((coset, class), (&c.coset(at, b), class)))
                .collect();
            assert!(
                hits.len() <= 1,
                "span {l} resolves to several vertices {hits:?}"
            );
            if let Some(&b) = hits.first() {
                assert_eq!(c.step(at, witness), Some(b));
            }
            hits.first().copied()
        }
    })
}

/// Whether `t` can be read forever in `delta` from `w`.
pub fn is_doubled(
    auto: &TypeAutomaton,
    t: &PeriodicType,
    delta: &LabeledGraph,
    w: usize,
) -> Result<DoublingReport, TypesError> {
    if t.cycle.is_empty() {
        return Err(TypesError::EmptyCycle);
    }
    let bound = t.cycle.len() * delta.num_vertices() + t.prefix.len();
    let mut steps = 0;
    let mut at = w;
    for &l in &t.prefix {
        steps += 1;
        match read_type_letter(auto, l, delta, at)? {
            Some(next) => at = next,
            None => {
                return Ok(DoublingReport {
                    doubled: false,
                    steps,
                })
            }
        }
    }
    let mut seen = HashSet::new();
    loop {
        if !seen.insert(at) {
            assert!(steps <= bound, "doubling took {steps} steps, bound {bound}");
            return Ok(DoublingReport {
                doubled: true,
                steps,
            });
        }
        for &l in &t.cycle {
            steps += 1;
            match read_type_letter(auto, l, delta, at)? {
                Some(next) => at = next,
                None => {
                    assert!(steps <= bound, "doubling took {steps} steps, bound {bound}");
                    return Ok(DoublingReport {
                        doubled: false,
                        steps,
                    });
                }
            }
        }
    }
}
