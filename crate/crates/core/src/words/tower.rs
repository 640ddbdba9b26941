use std::fmt;

use super::{parse_word, Letter, StandardWord, WordsError};

pub const DEFAULT_DEGREE_BOUND: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub name: String,
    pub word: StandardWord,
}

/// Base alphabet plus the roots `u1 < u2 < ...`, each given by its standard
/// decomposition over the base letters and earlier roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub alphabet: Vec<String>,
    pub degree_bound: usize,
    pub roots: Vec<Root>,
}

impl Tower {
    pub fn new(alphabet: &[&str]) -> Self {
        Tower {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            degree_bound: DEFAULT_DEGREE_BOUND,
            roots: Vec::new(),
        }
    }

    /// A tower without roots.
    pub fn free(alphabet: &[&str]) -> Self {
        Self::new(alphabet)
    }

    /// Appends a root whose word may mention only the roots declared so far.
    pub fn add_root(&mut self, name: &str, word: &str) -> Result<usize, WordsError> {
        if self.symbol(name).is_some() || self.root_index(name).is_some() {
            return Err(WordsError::Duplicate {
                name: name.to_string(),
            });
        }
        let word = parse_word(word, self)?;
        self.roots.push(Root {
            name: name.to_string(),
            word,
        });
        Ok(self.roots.len() - 1)
    }

    pub fn from_text(text: &str) -> Result<Self, WordsError> {
        let mut tower = Tower::new(&[]);
        let mut saw_alphabet = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |e: WordsError| WordsError::AtLine {
                line: line_no,
                source: Box::new(e),
            };
            let bad = |msg: &str| WordsError::AtLine {
                line: line_no,
                source: Box::new(WordsError::Format(msg.to_string())),
            };
            if let Some(rest) = line.strip_prefix("alphabet:") {
                if saw_alphabet || !tower.roots.is_empty() {
                    return Err(bad("the alphabet must be declared once, before any root"));
                }
                saw_alphabet = true;
                for sym in rest.split_whitespace() {
                    if !is_identifier(sym) || tower.symbol(sym).is_some() {
                        return Err(bad(&format!("bad or repeated symbol {sym:?}")));
                    }
                    tower.alphabet.push(sym.to_string());
                }
            } else if let Some(rest) = line.strip_prefix("D:") {
                tower.degree_bound = rest
                    .trim()
                    .parse()
                    .map_err(|_| bad("D must be a nonnegative integer"))?;
            } else if let Some(rest) = line.strip_prefix("root ") {
                let (name, word) = rest
                    .split_once('=')
                    .ok_or_else(|| bad("expected 'root <name> = <word>'"))?;
                let name = name.trim();
                if !is_identifier(name) {
                    return Err(bad(&format!("bad root name {name:?}")));
                }
                tower.add_root(name, word).map_err(at_line)?;
            } else {
                return Err(bad(&format!("unrecognized line {line:?}")));
            }
        }
        if !saw_alphabet {
            return Err(WordsError::Format("missing 'alphabet:' line".into()));
        }
        Ok(tower)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "alphabet: {}\nD: {}\n",
            self.alphabet.join(" "),
            self.degree_bound
        );
        for r in &self.roots {
            out.push_str(&format!("root {} = {}\n", r.name, r.word.render(self)));
        }
        out
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn root_index(&self, name: &str) -> Option<usize> {
        self.roots.iter().position(|r| r.name == name)
    }

    /// `π(u)`.
    pub fn root_word(&self, root: usize) -> &StandardWord {
        &self.roots[root].word
    }

    pub fn is_free(&self) -> bool {
        self.roots.is_empty()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
        && s != "t"
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerViolation {
    pub root: String,
    pub reason: String,
}

impl fmt::Display for TowerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root {}: {}", self.root, self.reason)
    }
}

pub fn validate_tower(tower: &Tower) -> Result<(), Vec<TowerViolation>> {
    let mut out = Vec::new();
    for (i, root) in tower.roots.iter().enumerate() {
        let mut flag = |reason: String| {
            out.push(TowerViolation {
                root: root.name.clone(),
                reason,
            })
        };
        let w = &root.word;
        if w.is_empty() {
            flag("word is empty after normalization".into());
            continue;
        }
        if !w.is_reduced() {
            flag("word is not reduced".into());
        }
        for l in w.letters() {
            match l {
                Letter::Base { sym, .. } if *sym >= tower.alphabet.len() => {
                    flag(format!("unknown base symbol #{sym}"))
                }
                Letter::Power { root, exp } => {
                    if *root >= i {
                        flag(format!("uses root #{root}, which is not declared earlier"));
                    }
                    if !exp.is_nonstandard() {
                        flag(format!("exponent {exp} is an integer"));
                    }
                    if exp.check_degree(tower.degree_bound).is_err() {
                        flag(format!("exponent {exp} exceeds the degree bound"));
                    }
                }
                Letter::Base { .. } => {}
            }
        }
        if w.concat(w).len() != 2 * w.len() {
            flag("squaring the word cancels or merges letters".into());
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
