use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

use super::PatternGraph;

/// Recognizes one family's spec syntax. Returns `None` when the spec is not
/// in this family's syntax, `Some(Err)` when it is but the parameters are bad.
pub type PatternParser = fn(&str) -> Option<Result<PatternGraph>>;

struct Entry {
    family: &'static str,
    syntax: &'static str,
    parse: PatternParser,
}

/// Pattern families, looked up by spec string in registration order.
pub struct PatternRegistry {
    entries: Vec<Entry>,
}

impl PatternRegistry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// Books `B<p>`, wheels `W<w>`, complete bipartite `K<s>,<t>`, cliques
    /// `K<k>` and `explicit:<matrix file>`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("book", "B<p>", parse_book);
        r.register("wheel", "W<w>", parse_wheel);
        r.register("complete-bipartite", "K<s>,<t>", parse_bipartite);
        r.register("clique", "K<k>", parse_clique);
        r.register("explicit", "explicit:<matrix file>", parse_explicit);
        r
    }

    /// Shared instance of [`PatternRegistry::with_builtins`].
    pub fn builtin() -> &'static PatternRegistry {
        static BUILTIN: OnceLock<PatternRegistry> = OnceLock::new();
        BUILTIN.get_or_init(Self::with_builtins)
    }

    pub fn register(&mut self, family: &'static str, syntax: &'static str, parse: PatternParser) {
        self.entries.push(Entry {
            family,
            syntax,
            parse,
        });
    }

    /// `(family, syntax)` pairs in lookup order.
    pub fn families(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.iter().map(|e| (e.family, e.syntax))
    }

    pub fn parse(&self, spec: &str) -> Result<PatternGraph> {
        let spec = spec.trim();
        self.entries
            .iter()
            .find_map(|e| (e.parse)(spec))
            .unwrap_or_else(|| {
                let known: Vec<_> = self.entries.iter().map(|e| e.syntax).collect();
                Err(Error::Pattern(format!(
                    "unrecognized pattern `{spec}` (expected one of {})",
                    known.join(", ")
                )))
            })
    }
}

fn number(text: &str) -> Option<usize> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

fn parse_book(spec: &str) -> Option<Result<PatternGraph>> {
    let p = number(spec.strip_prefix('B')?)?;
    Some(PatternGraph::book(p))
}

fn parse_wheel(spec: &str) -> Option<Result<PatternGraph>> {
    let w = number(spec.strip_prefix('W')?)?;
    Some(PatternGraph::wheel(w))
}

fn parse_bipartite(spec: &str) -> Option<Result<PatternGraph>> {
    let (s, t) = spec.strip_prefix('K')?.split_once(',')?;
    Some(PatternGraph::complete_bipartite(
        number(s.trim())?,
        number(t.trim())?,
    ))
}

fn parse_clique(spec: &str) -> Option<Result<PatternGraph>> {
    let k = number(spec.strip_prefix('K')?)?;
    Some(PatternGraph::clique(k))
}

fn parse_explicit(spec: &str) -> Option<Result<PatternGraph>> {
    let path = spec.strip_prefix("explicit:")?;
    Some(load_explicit(spec, Path::new(path)))
}

fn load_explicit(spec: &str, path: &Path) -> Result<PatternGraph> {
    let text = std::fs::read_to_string(path)?;
    PatternGraph::explicit(SimpleGraph::from_matrix(&text)?, spec)
}
