//! Level alphabets and the optional nearest-neighbour subshift restricting
//! which symbol sequences are admissible paths.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Index into the alphabet's symbol table.
pub type Sym = u16;

/// Sequence of finite symbol sets, one per level. Levels repeat
/// cyclically, so a uniform alphabet is a single level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Sym>,
    levels: Vec<Vec<Sym>>,
    uniform: bool,
}

impl Alphabet {
    pub fn uniform<S: AsRef<str>>(symbols: &[S]) -> Result<Alphabet> {
        Alphabet::levels(&[symbols.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>()])
    }

    pub fn levels<S: AsRef<str>>(levels: &[Vec<S>]) -> Result<Alphabet> {
        if levels.is_empty() {
            return Err(Error::Validation("alphabet has no levels".into()));
        }
        let mut names: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(levels.len());
        for (i, level) in levels.iter().enumerate() {
            if level.is_empty() {
                return Err(Error::Validation(format!("alphabet level {i} is empty")));
            }
            let mut syms = Vec::with_capacity(level.len());
            for s in level {
                let s = s.as_ref();
                if !valid_token(s) {
                    return Err(Error::Validation(format!("invalid symbol name `{s}`")));
                }
                let sym = *index.entry(s.to_string()).or_insert_with(|| {
                    names.push(s.to_string());
                    (names.len() - 1) as Sym
                });
                if syms.contains(&sym) {
                    return Err(Error::Validation(format!(
                        "symbol `{s}` repeated in alphabet level {i}"
                    )));
                }
                syms.push(sym);
            }
            out.push(syms);
        }
        let uniform = out.windows(2).all(|w| {
            let a: BTreeSet<_> = w[0].iter().collect();
            let b: BTreeSet<_> = w[1].iter().collect();
            a == b
        });
        if uniform {
            out.truncate(1);
        }
        Ok(Alphabet {
            names,
            index,
            levels: out,
            uniform,
        })
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Number of distinct level sets before the sequence repeats.
    pub fn period(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, depth: usize) -> &[Sym] {
        &self.levels[depth % self.levels.len()]
    }

    pub fn level_sets(&self) -> &[Vec<Sym>] {
        &self.levels
    }

    pub fn contains(&self, depth: usize, sym: Sym) -> bool {
        self.level(depth).contains(&sym)
    }

    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, sym: Sym) -> &str {
        self.names.get(sym as usize).map_or("?", String::as_str)
    }

    pub fn symbol_count(&self) -> usize {
        self.names.len()
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.names
    }

    /// True when every symbol name is a single character, in which case
    /// words are written without separators.
    pub fn compact(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    pub fn format(&self, word: &[Sym]) -> String {
        let sep = if self.compact() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a word by greedy longest match over symbol names; whitespace
    /// separates tokens but is optional.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        let mut out = Vec::new();
        for chunk in text.split_whitespace() {
            let mut rest = chunk;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        out.push(i as Sym);
                        rest = &rest[n.len()..];
                    }
                    None => return Err(Error::UnknownSymbol(rest.to_string())),
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Where a word starts: at the root (initial-symbol constraint applies),
/// anywhere (no left context), or after a known symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prev {
    Root,
    Any,
    After(Sym),
}

/// Nearest-neighbour constraint on paths: allowed first symbols and
/// allowed consecutive pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subshift {
    pub initials: BTreeSet<Sym>,
    pub allowed: BTreeSet<(Sym, Sym)>,
}

impl Subshift {
    pub fn permits(&self, prev: Prev, sym: Sym) -> bool {
        match prev {
            Prev::Root => self.initials.contains(&sym),
            Prev::Any => true,
            Prev::After(p) => self.allowed.contains(&(p, sym)),
        }
    }

    /// Every symbol reachable from an initial symbol must have an allowed
    /// successor that again has one, forever.
    pub(crate) fn check_no_dead_ends(&self, alphabet: &Alphabet) -> Result<()> {
        let all: BTreeSet<Sym> = (0..alphabet.symbol_count() as Sym).collect();
        let mut live = all.clone();
        loop {
            let next: BTreeSet<Sym> = live
                .iter()
                .copied()
                .filter(|&s| live.iter().any(|&t| self.allowed.contains(&(s, t))))
                .collect();
            if next == live {
                break;
            }
            live = next;
        }
        let mut reach: BTreeSet<Sym> = self.initials.clone();
        let mut stack: Vec<Sym> = reach.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(a, b) in &self.allowed {
                if a == s && reach.insert(b) {
                    stack.push(b);
                }
            }
        }
        if reach.is_empty() {
            return Err(Error::Validation("subshift has no initial symbols".into()));
        }
        if let Some(dead) = reach.iter().find(|s| !live.contains(s)) {
            return Err(Error::Validation(format!(
                "subshift has a dead end at symbol `{}`",
                alphabet.name(*dead)
            )));
        }
        Ok(())
    }
}

/// Symbols admissible at `depth` after `prev`.
pub(crate) fn admissible_syms(
    alphabet: &Alphabet,
    subshift: Option<&Subshift>,
    depth: usize,
    prev: Prev,
) -> Vec<Sym> {
    alphabet
        .level(depth)
        .iter()
        .copied()
        .filter(|&s| subshift.is_none_or(|sh| sh.permits(prev, s)))
        .collect()
}

pub(crate) fn next_prev(subshift: Option<&Subshift>, sym: Sym) -> Prev {
    if subshift.is_some() {
        Prev::After(sym)
    } else {
        Prev::Any
    }
}
