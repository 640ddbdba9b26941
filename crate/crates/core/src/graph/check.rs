use std::collections::HashMap;
use std::fmt;

use super::labeled::{LabeledGraph, Step};
use crate::words::{Letter, StandardWord};
use crate::zt_poly::Poly;

/// What the certificate covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldCertificate {
    pub paths_checked: usize,
    /// False when the path budget cut the enumeration short.
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldViolation(pub String);

impl fmt::Display for FoldViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `2·|E| + 2·max |π(u)|`.
pub fn default_assert_len(g: &LabeledGraph) -> usize {
    let longest = g
        .tower()
        .roots
        .iter()
        .map(|r| r.word.len())
        .max()
        .unwrap_or(0);
    2 * g.edges().len() + 2 * longest
}

pub fn assert_u_folded(g: &LabeledGraph, max_len: usize) -> Result<FoldCertificate, FoldViolation> {
    assert_u_folded_with(
        g,
        max_len,
        super::DEFAULT_PATH_BUDGET,
        super::DEFAULT_CLOSURE_POWER,
    )
}

/// Structural checks (deterministic base edges, separated components,
/// consistent component edges, closed levels up to `closure_power`) and a
/// bounded check that every reduced path of at most `max_len` edges is
/// recovered by reading its reduced label from its origin.
pub fn assert_u_folded_with(
    g: &LabeledGraph,
    max_len: usize,
    path_budget: usize,
    closure_power: usize,
) -> Result<FoldCertificate, FoldViolation> {
    let fail = |s: String| Err(FoldViolation(s));
    let mut ends: HashMap<(usize, usize, bool), usize> = HashMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        if let Letter::Base { sym, .. } = e.label {
            for key in [(e.from, sym, false), (e.to, sym, true)] {
                if let Some(j) = ends.insert(key, i) {
                    return fail(format!(
                        "edges {j} and {i} both read {} at vertex {}",
                        g.label_token(&if key.2 {
                            e.label.inverse()
                        } else {
                            e.label.clone()
                        }),
                        key.0
                    ));
                }
            }
        }
    }
    for c in g.components() {
        let mut reps = c.reps.clone();
        reps.dedup();
        if reps.len() != c.reps.len() {
            return fail(format!("component at {} is not separated", c.base));
        }
        for &ei in c.spine.iter().chain(&c.chords) {
            let e = &g.edges()[ei];
            let exp = e.label.exponent().unwrap();
            if c.step(e.from, exp) != Some(e.to) {
                return fail(format!("edge {ei} disagrees with its component cosets"));
            }
        }
        let pu = g.tower().root_word(c.root).clone();
        for &a in &c.vertices {
            for k in 1..=closure_power as i64 {
                for s in [k, -k] {
                    if let Some(b) = g.read_unchecked(a, &pu.pow(s)) {
                        if c.step(a, &Poly::constant(s)) != Some(b) {
                            return fail(format!(
                                "a path spelling {}^{{{s}}} joins {a} to {b} outside the component",
                                g.tower().roots[c.root].name
                            ));
                        }
                    }
                }
            }
        }
    }
    if g.roots_present().is_empty() {
        // deterministic free graphs are folded
        return Ok(FoldCertificate {
            paths_checked: 0,
            exhaustive: true,
        });
    }
    let mut checker = PathCheck {
        g,
        max_len,
        budget: path_budget,
        checked: 0,
        truncated: false,
    };
    for v in 0..g.num_vertices() {
        checker.walk(v, v, None, StandardWord::empty(), &mut Vec::new())?;
        if checker.truncated {
            break;
        }
    }
    Ok(FoldCertificate {
        paths_checked: checker.checked,
        exhaustive: !checker.truncated,
    })
}

struct PathCheck<'a> {
    g: &'a LabeledGraph,
    max_len: usize,
    budget: usize,
    checked: usize,
    truncated: bool,
}

impl PathCheck<'_> {
    fn walk(
        &mut self,
        origin: usize,
        at: usize,
        last: Option<Step>,
        label: StandardWord,
        path: &mut Vec<Step>,
    ) -> Result<(), FoldViolation> {
        if path.len() >= self.max_len {
            return Ok(());
        }
        for s in self.g.steps_from(at) {
            if last.is_some_and(|l| l.edge == s.edge && l.inverse != s.inverse) {
                continue;
            }
            if self.checked >= self.budget {
                self.truncated = true;
                return Ok(());
            }
            self.checked += 1;
            let next = self.g.step_target(at, s);
            let mut w = label.clone();
            w.push(self.g.step_label(s));
            path.push(s);
            if self.g.read_unchecked(origin, &w) != Some(next) {
                let steps: Vec<String> = path
                    .iter()
                    .map(|s| format!("e{}{}", s.edge, if s.inverse { "^-1" } else { "" }))
                    .collect();
                return Err(FoldViolation(format!(
                    "path {} from {origin} ends at {next} but its label {} does not read there",
                    steps.join(" "),
                    w.render(self.g.tower())
                )));
            }
            self.walk(origin, next, Some(s), w, path)?;
            path.pop();
            if self.truncated {
                return Ok(());
            }
        }
        Ok(())
    }
}
