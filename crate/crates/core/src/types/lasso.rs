use std::fmt;

use super::automaton::{TypeAutomaton, TypeLetter};
use super::TypesError;

/// The eventually periodic type `prefix · cycle^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicType {
    pub prefix: Vec<TypeLetter>,
    pub cycle: Vec<TypeLetter>,
}

impl PeriodicType {
    /// Letters in the prefix and one period.
    pub fn content(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Accepted forever iff enough periods to fill the automaton's window,
    /// plus one more, are accepted: the state then repeats.
    pub fn is_valid(&self, auto: &TypeAutomaton) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let periods = 2 + (auto.m_const() - 1) / self.cycle.len();
        let mut w = self.prefix.clone();
        for _ in 0..periods {
            w.extend_from_slice(&self.cycle);
        }
        auto.accepts(&w)
    }

    /// Primitive period and no letter that could move into the cycle.
    pub fn is_canonical(&self) -> bool {
        is_primitive(&self.cycle)
            && (self.prefix.is_empty() || self.prefix.last() != self.cycle.last())
    }

    /// Rewrites into the unique canonical form of the same infinite word.
    pub fn canonical(&self) -> PeriodicType {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && self.cycle.chunks(p).all(|c| c == &self.cycle[..p]))
            .unwrap_or(n);
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle[..period].to_vec();
        while !prefix.is_empty() && prefix.last() == cycle.last() {
            prefix.pop();
            cycle.rotate_right(1);
        }
        PeriodicType { prefix, cycle }
    }
}

impl fmt::Display for PeriodicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[TypeLetter]| {
            w.iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let p = join(&self.prefix);
        if p.is_empty() {
            write!(f, "| {}", join(&self.cycle))
        } else {
            write!(f, "{p} | {}", join(&self.cycle))
        }
    }
}

impl std::str::FromStr for PeriodicType {
    type Err = TypesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, c) = s
            .split_once('|')
            .ok_or_else(|| TypesError::Syntax(s.to_string()))?;
        let parse = |part: &str| {
            part.split_whitespace()
                .map(str::parse)
                .collect::<Result<Vec<TypeLetter>, _>>()
        };
        Ok(PeriodicType {
            prefix: parse(p)?,
            cycle: parse(c)?,
        })
    }
}

fn is_primitive(w: &[TypeLetter]) -> bool {
    let n = w.len();
    n > 0 && (1..n).all(|p| !n.is_multiple_of(p) || w.chunks(p).any(|c| c != &w[..p]))
}

/// Canonical periodic types in order of content, then prefix length, then
/// letter order. Lazy; stops after content `max_content`.
pub fn enumerate_periodic(auto: &TypeAutomaton, max_content: usize) -> Lassos<'_> {
    Lassos {
        auto,
        max_content,
        content: 1,
        prefix_len: 0,
        stack: Vec::new(),
        word: Vec::new(),
        fresh: true,
    }
}

pub struct Lassos<'a> {
    auto: &'a TypeAutomaton,
    max_content: usize,
    content: usize,
    prefix_len: usize,
    /// (state before position i, index of the next transition to try)
    stack: Vec<(usize, usize)>,
    word: Vec<TypeLetter>,
    fresh: bool,
}

impl Lassos<'_> {
    fn advance_shape(&mut self) -> bool {
        self.prefix_len += 1;
        if self.prefix_len >= self.content {
            self.prefix_len = 0;
            self.content += 1;
        }
        self.fresh = true;
        self.content <= self.max_content
    }

    fn candidate(&self) -> Option<PeriodicType> {
        let t = PeriodicType {
            prefix: self.word[..self.prefix_len].to_vec(),
            cycle: self.word[self.prefix_len..].to_vec(),
        };
        (t.is_canonical() && t.is_valid(self.auto)).then_some(t)
    }
}

impl Iterator for Lassos<'_> {
    type Item = PeriodicType;

    fn next(&mut self) -> Option<PeriodicType> {
        let auto = self.auto;
        if !auto.types_infinite() {
            return None;
        }
        loop {
            if self.content > self.max_content {
                return None;
            }
            if self.fresh {
                self.fresh = false;
                self.stack = vec![(auto.start(), 0)];
                self.word.clear();
            }
            // depth-first over words of length `content` through live states
            let Some(&mut (state, ref mut next)) = self.stack.last_mut() else {
                if !self.advance_shape() {
                    return None;
                }
                continue;
            };
            let trans = auto.transitions(state);
            let pick = trans[*next..].iter().position(|&(_, t)| auto.is_live(t));
            match pick {
                None => {
                    self.stack.pop();
                    self.word.pop();
                }
                Some(off) => {
                    let (l, t) = trans[*next + off];
                    *next += off + 1;
                    self.word.push(l);
                    if self.word.len() == self.content {
                        let found = self.candidate();
                        self.word.pop();
                        if found.is_some() {
                            return found;
                        }
                    } else {
                        self.stack.push((t, 0));
                    }
                }
            }
        }
    }
}
