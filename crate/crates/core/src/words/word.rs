use std::fmt;

use super::{Tower, WordsError};
use crate::zt_poly::Poly;

/// A letter of the alphabet `X^±1 ∪ {u^α}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    Base { sym: usize, inv: bool },
    Power { root: usize, exp: Poly },
}

impl Letter {
    pub fn base(sym: usize) -> Self {
        Letter::Base { sym, inv: false }
    }

    pub fn power(root: usize, exp: Poly) -> Self {
        assert!(!exp.is_zero(), "power letters carry nonzero exponents");
        Letter::Power { root, exp }
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Base { sym, inv } => Letter::Base {
                sym: *sym,
                inv: !inv,
            },
            Letter::Power { root, exp } => Letter::Power {
                root: *root,
                exp: -exp,
            },
        }
    }

    pub fn root(&self) -> Option<usize> {
        match self {
            Letter::Power { root, .. } => Some(*root),
            Letter::Base { .. } => None,
        }
    }

    pub fn exponent(&self) -> Option<&Poly> {
        match self {
            Letter::Power { exp, .. } => Some(exp),
            Letter::Base { .. } => None,
        }
    }

    pub fn render(&self, tower: &Tower) -> String {
        match self {
            Letter::Base { sym, inv: false } => tower.alphabet[*sym].clone(),
            Letter::Base { sym, inv: true } => format!("{}^-1", tower.alphabet[*sym]),
            Letter::Power { root, exp } => format!("{}^{{{}}}", tower.roots[*root].name, exp),
        }
    }
}

/// A finite product of letters, kept freely reduced with same-root powers
/// merged.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StandardWord {
    letters: Vec<Letter>,
}

impl StandardWord {
    pub fn empty() -> Self {
        StandardWord::default()
    }

    /// Normalizes while collecting: cancels inverse base pairs and merges
    /// adjacent powers of one root, dropping zero exponents.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = StandardWord::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Exactly the given letters, with no normalization.
    pub fn raw(letters: Vec<Letter>) -> Self {
        StandardWord { letters }
    }

    pub fn push(&mut self, l: Letter) {
        match (self.letters.last_mut(), &l) {
            (Some(Letter::Base { sym: a, inv: ia }), Letter::Base { sym: b, inv: ib })
                if a == b && ia != ib =>
            {
                self.letters.pop();
            }
            (Some(Letter::Power { root: r1, exp: e1 }), Letter::Power { root: r2, exp: e2 })
                if r1 == r2 =>
            {
                let sum = &*e1 + e2;
                if sum.is_zero() {
                    self.letters.pop();
                } else {
                    *e1 = sum;
                }
            }
            _ => self.letters.push(l),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation followed by normalization at the seam.
    pub fn concat(&self, other: &StandardWord) -> StandardWord {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    pub fn inverse(&self) -> StandardWord {
        StandardWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// `self^k` for an integer `k`.
    pub fn pow(&self, k: i64) -> StandardWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = StandardWord::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Whether normalization would change the letter sequence.
    pub fn is_reduced(&self) -> bool {
        StandardWord::from_letters(self.letters.iter().cloned()) == *self
    }

    pub fn render(&self, tower: &Tower) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| l.render(tower))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for StandardWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.letters).finish()
    }
}

pub fn invert_word(w: &StandardWord) -> StandardWord {
    w.inverse()
}

/// Parses whitespace-separated tokens `sym`, `sym^-1`, `name^{poly}` (and
/// the identity `1`), normalizing as it goes.
pub fn parse_word(text: &str, tower: &Tower) -> Result<StandardWord, WordsError> {
    Ok(StandardWord::from_letters(parse_letters(text, tower)?))
}

/// Same tokens, without normalization.
pub fn parse_letters(text: &str, tower: &Tower) -> Result<Vec<Letter>, WordsError> {
    let mut letters = Vec::new();
    let mut offset = 0;
    for token in text.split_whitespace() {
        let pos = offset + text[offset..].find(token).unwrap();
        offset = pos + token.len();
        if token == "1" {
            continue;
        }
        let syntax = |msg: &str| WordsError::Syntax {
            text: text.to_string(),
            pos,
            msg: msg.to_string(),
        };
        if let Some((name, rest)) = token.split_once('^') {
            if rest == "-1" {
                let sym = tower.symbol(name).ok_or_else(|| unknown(name))?;
                letters.push(Letter::Base { sym, inv: true });
                continue;
            }
            let body = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| syntax("expected '^-1' or '^{poly}'"))?;
            let root = tower.root_index(name).ok_or_else(|| unknown(name))?;
            let exp: Poly = body.parse()?;
            exp.check_degree(tower.degree_bound)?;
            if !exp.is_zero() {
                letters.push(Letter::Power { root, exp });
            }
        } else if let Some(sym) = tower.symbol(token) {
            letters.push(Letter::Base { sym, inv: false });
        } else if tower.root_index(token).is_some() {
            return Err(syntax("root powers need an exponent in braces"));
        } else {
            return Err(unknown(token));
        }
    }
    Ok(letters)
}

fn unknown(name: &str) -> WordsError {
    WordsError::UnknownSymbol {
        name: name.to_string(),
    }
}
