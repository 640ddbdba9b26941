//! Command-line front end: `fold`, `member` and `index`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::graph::{graph_from_words, FoldOptions, GraphError, LabeledGraph};
use crate::index::{
    decide_index, IndexError, IndexOptions, IndexVerdict, Strategy, DEFAULT_LASSO_BUDGET,
};
use crate::words::{parse_word, StandardWord, Tower, WordsError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: WordsError },
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "lyndon-index",
    version,
    about = "Folding, membership and finite-index decisions over a tower of roots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the folded graph of the group generators.
    Fold {
        #[command(flatten)]
        job: Job,
        /// Also write the graph in DOT form.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print YES (exit 0) or NO (exit 1).
    Member {
        #[command(flatten)]
        job: Job,
        /// Test membership in this subgroup instead of the group.
        #[arg(long)]
        subgroup: Option<PathBuf>,
        /// The word to test.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Decide whether the subgroup has finite index: exit 0 finite,
    /// 1 infinite, 3 budget exceeded.
    Index {
        #[command(flatten)]
        job: Job,
        /// Subgroup generators; `@name` refers to a group generator.
        #[arg(long)]
        subgroup: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Product)]
        strategy: StrategyArg,
        /// Lasso budget of the enumeration strategy.
        #[arg(long, default_value_t = DEFAULT_LASSO_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Product,
    Enumerate,
}

#[derive(Debug, Args)]
pub struct Job {
    /// Tower file.
    #[arg(long)]
    pub tower: PathBuf,
    /// Group generators, one `name = word` or bare word per line.
    #[arg(long)]
    pub group: PathBuf,
    /// Overrides the tower's exponent degree bound.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_bound: Option<u64>,
    /// Largest k for which paths spelling π(u)^k are glued into u-components
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub closure_power: Option<u64>,
    /// Longest path checked by the folding certificate.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub assert_len: Option<u64>,
    /// Folding move budget.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub move_budget: Option<u64>,
}

/// Outcome of a command: the text for stdout and the exit code.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Named generators of a group file, in file order.
pub fn parse_generators(
    text: &str,
    tower: &Tower,
    named: &HashMap<String, StandardWord>,
) -> Result<Vec<(Option<String>, StandardWord)>, WordsError> {
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: WordsError| WordsError::AtLine {
            line: i + 1,
            source: Box::new(e),
        };
        let (name, body) = match line.split_once('=') {
            Some((n, b)) => {
                let n = n.trim();
                if n.is_empty() || n.contains(char::is_whitespace) {
                    return Err(at(WordsError::Format(format!("bad generator name {n:?}"))));
                }
                if seen.insert(n.to_string(), ()).is_some() {
                    return Err(at(WordsError::Duplicate {
                        name: n.to_string(),
                    }));
                }
                (Some(n.to_string()), b.trim())
            }
            None => (None, line),
        };
        let word = expand(body, tower, named).map_err(at)?;
        out.push((name, word));
    }
    Ok(out)
}

fn expand(
    body: &str,
    tower: &Tower,
    named: &HashMap<String, StandardWord>,
) -> Result<StandardWord, WordsError> {
    let mut word = StandardWord::empty();
    let mut pending: Vec<&str> = Vec::new();
    let flush = |pending: &mut Vec<&str>, word: &mut StandardWord| -> Result<(), WordsError> {
        if !pending.is_empty() {
            *word = word.concat(&parse_word(&pending.join(" "), tower)?);
            pending.clear();
        }
        Ok(())
    };
    for tok in body.split_whitespace() {
        if let Some(r) = tok.strip_prefix('@') {
            flush(&mut pending, &mut word)?;
            let (name, inv) = match r.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (r, false),
            };
            let w = named.get(name).ok_or_else(|| WordsError::UnknownSymbol {
                name: format!("@{name}"),
            })?;
            word = word.concat(&if inv { w.inverse() } else { w.clone() });
        } else {
            pending.push(tok);
        }
    }
    flush(&mut pending, &mut word)?;
    Ok(word)
}

struct Loaded {
    tower: Arc<Tower>,
    named: HashMap<String, StandardWord>,
    group: LabeledGraph,
    fold: FoldOptions,
}

fn load(job: &Job) -> Result<Loaded, CliError> {
    let mut tower = Tower::from_text(&read(&job.tower)?).map_err(|source| CliError::Input {
        path: job.tower.clone(),
        source,
    })?;
    if let Some(d) = job.degree_bound {
        tower.degree_bound = d as usize;
    }
    let tower = Arc::new(tower);
    let mut fold = FoldOptions::default();
    if let Some(k) = job.closure_power {
        fold.closure_power = k as usize;
    }
    if let Some(n) = job.assert_len {
        fold.assert_len = Some(n as usize);
    }
    if let Some(n) = job.move_budget {
        fold.move_budget = n as usize;
    }
    let gens = parse_generators(&read(&job.group)?, &tower, &HashMap::new()).map_err(|source| {
        CliError::Input {
            path: job.group.clone(),
            source,
        }
    })?;
    let named = gens
        .iter()
        .filter_map(|(n, w)| n.clone().map(|n| (n, w.clone())))
        .collect();
    let words: Vec<StandardWord> = gens.into_iter().map(|(_, w)| w).collect();
    let group = graph_from_words(&words, &tower, &fold)?;
    Ok(Loaded {
        tower,
        named,
        group,
        fold,
    })
}

fn subgroup_graph(l: &Loaded, path: &Path) -> Result<LabeledGraph, CliError> {
    let sub =
        parse_generators(&read(path)?, &l.tower, &l.named).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
    let words: Vec<StandardWord> = sub.into_iter().map(|(_, w)| w).collect();
    Ok(graph_from_words(&words, &l.tower, &l.fold)?)
}

/// Runs one command. Errors carry no partial output.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Fold { job, dot } => {
            let l = load(job)?;
            if let Some(path) = dot {
                std::fs::write(path, l.group.to_dot()).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            Ok(Outcome {
                stdout: l.group.dump(),
                code: 0,
            })
        }
        Command::Member {
            job,
            subgroup,
            word,
        } => {
            let l = load(job)?;
            let w = expand(word, &l.tower, &l.named)?;
            let yes = match subgroup {
                Some(path) => subgroup_graph(&l, path)?.accepts(&w)?,
                None => l.group.accepts(&w)?,
            };
            Ok(Outcome {
                stdout: if yes { "YES\n" } else { "NO\n" }.into(),
                code: if yes { 0 } else { 1 },
            })
        }
        Command::Index {
            job,
            subgroup,
            strategy,
            budget,
        } => {
            let l = load(job)?;
            let h = subgroup_graph(&l, subgroup)?;
            let opts = IndexOptions {
                strategy: match strategy {
                    StrategyArg::Product => Strategy::Product,
                    StrategyArg::Enumerate => Strategy::Enumerate { budget: *budget },
                },
                fold: l.fold.clone(),
            };
            let v = decide_index(&l.group, &h, &opts)?;
            let code = match v {
                IndexVerdict::Finite { .. } => 0,
                IndexVerdict::Infinite(_) => 1,
                IndexVerdict::BudgetExceeded { .. } => 3,
            };
            Ok(Outcome {
                stdout: v.render(&l.tower),
                code,
            })
        }
    }
}

/// Parses arguments and runs; returns (stdout, stderr, exit code).
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (text, String::new(), 0)
            } else {
                (String::new(), text, 2)
            };
        }
    };
    match execute(&cli) {
        Ok(o) => (o.stdout, String::new(), o.code),
        Err(e) => (String::new(), format!("error: {e}\n"), 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn files(dir: &Path, items: &[(&str, &str)]) {
        for (name, text) in items {
            std::fs::write(dir.join(name), text).unwrap();
        }
    }

    fn tmp(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("lyndon-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    fn call(dir: &Path, args: &[&str]) -> (String, String, i32) {
        let mut v = vec!["lyndon-index".to_string()];
        for a in args {
            v.push(a.replace("{d}", dir.to_str().unwrap()));
        }
        run(v)
    }

    #[test]
    fn fold_free_wedge() {
        let d = tmp("fold");
        files(&d, &[("t", "alphabet: x y\n"), ("g", "x\ny\n")]);
        let (out, _, code) = call(
            &d,
            &[
                "fold",
                "--tower",
                "{d}/t",
                "--group",
                "{d}/g",
                "--dot",
                "{d}/g.dot",
            ],
        );
        assert_eq!(code, 0);
        assert_eq!(out, "vertex 0\nedge 0 0 0 x\nedge 1 0 0 y\nbase 0\n");
        assert!(std::fs::read_to_string(d.join("g.dot"))
            .unwrap()
            .starts_with("digraph"));
    }

    #[test]
    fn member_answers() {
        let d = tmp("member");
        files(
            &d,
            &[
                ("t", "alphabet: x y\nroot u1 = x y x\n"),
                ("g", "x\n"),
                ("p", "u1^{t}\n"),
            ],
        );
        let (out, _, code) = call(
            &d,
            &[
                "member", "--tower", "{d}/t", "--group", "{d}/g", "--word", "x x",
            ],
        );
        assert_eq!((out.as_str(), code), ("YES\n", 0));
        let (out, _, code) = call(
            &d,
            &[
                "member", "--tower", "{d}/t", "--group", "{d}/p", "--word", "u1^{t+1}",
            ],
        );
        assert_eq!((out.as_str(), code), ("NO\n", 1));
        let (out, err, code) = call(
            &d,
            &[
                "member", "--tower", "{d}/t", "--group", "{d}/p", "--word", "q",
            ],
        );
        assert_eq!((out.as_str(), code), ("", 2));
        assert!(err.contains("q"));
    }

    #[test]
    fn index_codes() {
        let d = tmp("index");
        files(
            &d,
            &[
                ("t", "alphabet: x y\n"),
                ("g", "a = x\nb = y\n"),
                ("h", "@a\n"),
                ("gg", "@a\n@b^-1\n"),
            ],
        );
        let (out, _, code) = call(
            &d,
            &[
                "index",
                "--tower",
                "{d}/t",
                "--group",
                "{d}/g",
                "--subgroup",
                "{d}/h",
            ],
        );
        assert_eq!(code, 1);
        assert!(out.starts_with("INFINITE\n"));
        let (out, _, code) = call(
            &d,
            &[
                "index",
                "--tower",
                "{d}/t",
                "--group",
                "{d}/g",
                "--subgroup",
                "{d}/gg",
            ],
        );
        assert_eq!((out.as_str(), code), ("FINITE 1\n1\n", 0));
        files(&d, &[("h2", "@a @a\n@b\n@a @b @a^-1\n")]);
        let (out, _, code) = call(
            &d,
            &[
                "index",
                "--tower",
                "{d}/t",
                "--group",
                "{d}/g",
                "--subgroup",
                "{d}/h2",
                "--strategy",
                "enumerate",
                "--budget",
                "5",
            ],
        );
        assert_eq!((out.as_str(), code), ("BUDGET-EXCEEDED 2\n", 3));
    }

    #[test]
    fn errors_print_nothing() {
        let d = tmp("errors");
        files(
            &d,
            &[
                ("t", "alphabet: x y\n"),
                ("g", "x\n"),
                ("h", "@nope\n"),
                ("bad", "x = y\nx = y\n"),
            ],
        );
        for args in [
            vec![
                "index",
                "--tower",
                "{d}/t",
                "--group",
                "{d}/g",
                "--subgroup",
                "{d}/h",
            ],
            vec!["fold", "--tower", "{d}/t", "--group", "{d}/missing"],
            vec!["fold", "--tower", "{d}/t", "--group", "{d}/bad"],
            vec![
                "fold",
                "--tower",
                "{d}/t",
                "--group",
                "{d}/g",
                "--closure-power",
                "0",
            ],
            vec!["frobnicate"],
        ] {
            let (out, err, code) = call(&d, &args);
            assert_eq!((out.as_str(), code), ("", 2), "{args:?}");
            assert!(!err.is_empty());
        }
    }
}
