//! Machines: finite systems of synchronous prefix-rewriting rules defining
//! generator homeomorphisms of a path space.
//!
//! A rule `window -> output . next` reads `window` (which may look ahead past
//! the consumed block), replaces the first `|output|` letters by `output`, and
//! continues with the group word `next` on the rest of the path.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::alphabet::{admissible_syms, next_prev, valid_token, Alphabet, Prev, Subshift, Sym};
use crate::caps::Caps;
use crate::engine::{self, Pipeline};
use crate::error::{Error, Result};
use crate::word::{GenId, GroupWord, Letter};

pub(crate) const PENDING_INVERSE: &str = "inverse pending for generator";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub window: Vec<Sym>,
    /// Replacement for the consumed block; its length is the consumed count.
    pub output: Vec<Sym>,
    pub next: GroupWord,
}

impl Rule {
    pub fn consumed(&self) -> usize {
        self.output.len()
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub rules: Vec<Rule>,
    pub inverse: Vec<Rule>,
    inverse_ready: bool,
    /// Level phases (modulo the alphabet period) at which the generator acts.
    pub phases: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct MachineDef {
    alphabet: Alphabet,
    subshift: Option<Subshift>,
    gens: Vec<Generator>,
    by_name: HashMap<String, GenId>,
    max_window: usize,
    lookahead: bool,
}

impl PartialEq for MachineDef {
    fn eq(&self, other: &Self) -> bool {
        crate::text::to_document(self) == crate::text::to_document(other)
    }
}

impl MachineDef {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn subshift(&self) -> Option<&Subshift> {
        self.subshift.as_ref()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn gen_id(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn gen_names(&self) -> Vec<&str> {
        self.gens.iter().map(|g| g.name.as_str()).collect()
    }

    /// Generators acting at the root level.
    pub fn root_generators(&self) -> Vec<GenId> {
        (0..self.gens.len() as GenId)
            .filter(|&g| self.gens[g as usize].phases.contains(&0))
            .collect()
    }

    pub fn max_window(&self) -> usize {
        self.max_window
    }

    /// True when some rule reads past its consumed block.
    pub fn has_lookahead(&self) -> bool {
        self.lookahead
    }

    pub fn is_uniform(&self) -> bool {
        self.alphabet.is_uniform()
    }

    pub(crate) fn rules_for(&self, letter: Letter) -> Result<&[Rule]> {
        let g = &self.gens[letter.gen as usize];
        if letter.inv {
            if !g.inverse_ready {
                return Err(Error::Validation(format!("{PENDING_INVERSE} `{}`", g.name)));
            }
            Ok(&g.inverse)
        } else {
            Ok(&g.rules)
        }
    }

    /// Rules of `g^-1`.
    pub fn derive_inverse(&self, g: GenId) -> &[Rule] {
        &self.gens[g as usize].inverse
    }

    pub fn word(&self, text: &str) -> Result<GroupWord> {
        parse_group_word(&self.gen_names(), text)
    }

    pub fn format_word(&self, w: &GroupWord) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.letters
            .iter()
            .map(|l| {
                let name = &self.gens[l.gen as usize].name;
                if l.inv {
                    format!("~{name}")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn symbols(&self, text: &str) -> Result<Vec<Sym>> {
        self.alphabet.parse_word(text)
    }

    pub fn format_symbols(&self, w: &[Sym]) -> String {
        self.alphabet.format(w)
    }

    pub fn admissible_next(&self, depth: usize, prev: Prev) -> Vec<Sym> {
        admissible_syms(&self.alphabet, self.subshift.as_ref(), depth, prev)
    }

    pub(crate) fn step_prev(&self, sym: Sym) -> Prev {
        next_prev(self.subshift.as_ref(), sym)
    }

    /// Admissibility of `word` placed at `depth` after `prev`.
    pub fn is_admissible_at(&self, word: &[Sym], depth: usize, prev: Prev) -> bool {
        let mut prev = prev;
        for (i, &s) in word.iter().enumerate() {
            if !self.alphabet.contains(depth + i, s) {
                return false;
            }
            if let Some(sh) = &self.subshift {
                if !sh.permits(prev, s) {
                    return false;
                }
            }
            prev = self.step_prev(s);
        }
        true
    }

    pub fn is_admissible(&self, word: &[Sym]) -> bool {
        self.is_admissible_at(word, 0, Prev::Root)
    }

    /// All admissible words of length `n` starting at the root, in
    /// lexicographic order of symbol indices within each level.
    pub fn level_words(&self, n: usize, cap: usize) -> Result<Vec<Vec<Sym>>> {
        let mut out = vec![Vec::new()];
        for depth in 0..n {
            let mut next = Vec::new();
            for w in &out {
                let prev = w.last().map_or(Prev::Root, |&s| self.step_prev(s));
                for s in self.admissible_next(depth, prev) {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                    if next.len() > cap {
                        return Err(Error::CapExceeded {
                            what: "level size",
                            cap,
                        });
                    }
                }
            }
            out = next;
        }
        out.sort_by(|a, b| {
            let ka: Vec<String> = a.iter().map(|&s| self.alphabet.name(s).to_string()).collect();
            let kb: Vec<String> = b.iter().map(|&s| self.alphabet.name(s).to_string()).collect();
            ka.cmp(&kb)
        });
        Ok(out)
    }
}

/// Parses a group word over `names`: whitespace-separated or juxtaposed
/// generator names, `~g` or `g^-1` for inverses, `e` for the identity.
pub fn parse_group_word(names: &[&str], text: &str) -> Result<GroupWord> {
    let mut letters = Vec::new();
    for chunk in text.split_whitespace() {
        let mut rest = chunk;
        while !rest.is_empty() {
            let mut inv = false;
            if let Some(r) = rest.strip_prefix('~') {
                inv = true;
                rest = r;
            }
            let best = names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(*n))
                .max_by_key(|(_, n)| n.len());
            let (id, len) = match best {
                Some((i, n)) => (Some(i), n.len()),
                None if rest.starts_with('e') => (None, 1),
                None => return Err(Error::UnknownGenerator(rest.to_string())),
            };
            rest = &rest[len..];
            let mut power = 1i32;
            if let Some(r) = rest.strip_prefix("^-1") {
                power = -1;
                rest = r;
            }
            if let Some(id) = id {
                let letter = Letter {
                    gen: id as GenId,
                    inv: inv ^ (power < 0),
                };
                letters.push(letter);
            } else if inv {
                return Err(Error::UnknownGenerator("~e".into()));
            }
        }
    }
    Ok(GroupWord::from_letters(letters))
}

struct DraftGen {
    name: String,
    rules: Vec<(Vec<Sym>, Vec<Sym>, String)>,
}

/// Incremental construction of a [`MachineDef`]; `build` validates.
pub struct MachineBuilder {
    alphabet: Alphabet,
    subshift: Option<Subshift>,
    gens: Vec<DraftGen>,
    caps: Caps,
}

impl MachineBuilder {
    pub fn new(alphabet: Alphabet) -> MachineBuilder {
        MachineBuilder {
            alphabet,
            subshift: None,
            gens: Vec::new(),
            caps: Caps::default(),
        }
    }

    pub fn caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn subshift(&mut self, initials: &[&str], allowed: &[(&str, &str)]) -> Result<&mut Self> {
        let sym = |s: &str| {
            self.alphabet
                .sym(s)
                .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
        };
        let initials = initials.iter().map(|s| sym(s)).collect::<Result<BTreeSet<_>>>()?;
        let allowed = allowed
            .iter()
            .map(|(a, b)| Ok((sym(a)?, sym(b)?)))
            .collect::<Result<BTreeSet<_>>>()?;
        self.subshift = Some(Subshift { initials, allowed });
        Ok(self)
    }

    pub fn set_subshift(&mut self, subshift: Option<Subshift>) -> &mut Self {
        self.subshift = subshift;
        self
    }

    pub fn generator(&mut self, name: &str) -> Result<&mut Self> {
        if !valid_token(name) || name == "e" {
            return Err(Error::Validation(format!("invalid generator name `{name}`")));
        }
        if !self.gens.iter().any(|g| g.name == name) {
            self.gens.push(DraftGen {
                name: name.to_string(),
                rules: Vec::new(),
            });
        }
        Ok(self)
    }

    /// Adds `name: window -> output . next`.
    pub fn rule(&mut self, name: &str, window: &str, output: &str, next: &str) -> Result<&mut Self> {
        let window = self.alphabet.parse_word(window)?;
        let output = self.alphabet.parse_word(output)?;
        self.rule_syms(name, window, output, next)
    }

    pub fn rule_syms(
        &mut self,
        name: &str,
        window: Vec<Sym>,
        output: Vec<Sym>,
        next: &str,
    ) -> Result<&mut Self> {
        self.generator(name)?;
        let g = self.gens.iter_mut().find(|g| g.name == name).unwrap();
        g.rules.push((window, output, next.to_string()));
        Ok(self)
    }

    pub fn build(self) -> Result<MachineDef> {
        if let Some(sh) = &self.subshift {
            sh.check_no_dead_ends(&self.alphabet)?;
        }
        let names: Vec<&str> = self.gens.iter().map(|g| g.name.as_str()).collect();
        let mut gens = Vec::with_capacity(self.gens.len());
        let mut max_window = 1;
        let mut lookahead = false;
        for g in &self.gens {
            if g.rules.is_empty() {
                return Err(Error::Validation(format!("generator `{}` has no rules", g.name)));
            }
            let mut rules = Vec::with_capacity(g.rules.len());
            for (window, output, next) in &g.rules {
                if output.is_empty() {
                    return Err(Error::Validation(format!(
                        "rule of `{}` consumes nothing",
                        g.name
                    )));
                }
                if output.len() > window.len() {
                    return Err(Error::Validation(format!(
                        "rule of `{}` outputs more letters than its window",
                        g.name
                    )));
                }
                max_window = max_window.max(window.len());
                lookahead |= window.len() > output.len();
                rules.push(Rule {
                    window: window.clone(),
                    output: output.clone(),
                    next: parse_group_word(&names, next)?.reduced(),
                });
            }
            rules.sort_by(|a, b| a.window.cmp(&b.window));
            gens.push(Generator {
                name: g.name.clone(),
                rules,
                inverse: Vec::new(),
                inverse_ready: false,
                phases: Vec::new(),
            });
        }
        let by_name = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), i as GenId))
            .collect();
        let mut m = MachineDef {
            alphabet: self.alphabet,
            subshift: self.subshift,
            gens,
            by_name,
            max_window,
            lookahead,
        };
        assign_phases(&mut m)?;
        derive_all_inverses(&mut m, &self.caps)?;
        check_bijective(&m, &self.caps)?;
        Ok(m)
    }
}

/// Rules whose window and output fit the levels starting at `phase`.
fn active_rules(m: &MachineDef, rules: &[Rule], phase: usize) -> Vec<usize> {
    (0..rules.len())
        .filter(|&i| m.is_admissible_at(&rules[i].window, phase, Prev::Any))
        .collect()
}

/// Complete prefix code check of the active windows at `phase`.
fn check_prefix_code(m: &MachineDef, rules: &[Rule], phase: usize, who: &str) -> Result<()> {
    let active = active_rules(m, rules, phase);
    for &i in &active {
        let r = &rules[i];
        if !m.is_admissible_at(&r.output, phase, Prev::Any) {
            return Err(Error::Validation(format!(
                "rule `{}` of `{who}` emits an inadmissible word",
                m.alphabet.format(&r.window)
            )));
        }
        for &j in &active {
            if i != j && rules[j].window.starts_with(&r.window) {
                return Err(Error::Validation(format!(
                    "windows of `{who}` are not a prefix code: `{}` overlaps `{}`",
                    m.alphabet.format(&r.window),
                    m.alphabet.format(&rules[j].window)
                )));
            }
        }
    }
    let windows: Vec<&[Sym]> = active.iter().map(|&i| rules[i].window.as_slice()).collect();
    cover(m, &windows, &mut Vec::new(), phase, Prev::Any, who)
}

fn cover(
    m: &MachineDef,
    windows: &[&[Sym]],
    prefix: &mut Vec<Sym>,
    phase: usize,
    prev: Prev,
    who: &str,
) -> Result<()> {
    for s in m.admissible_next(phase + prefix.len(), prev) {
        prefix.push(s);
        if !windows.contains(&prefix.as_slice()) {
            if windows.iter().any(|w| w.starts_with(prefix)) {
                cover(m, windows, prefix, phase, m.step_prev(s), who)?;
            } else {
                let missing = m.alphabet.format(prefix);
                prefix.pop();
                return Err(Error::Validation(format!(
                    "incomplete prefix code for `{who}`: no rule reads `{missing}`"
                )));
            }
        }
        prefix.pop();
    }
    Ok(())
}

fn assign_phases(m: &mut MachineDef) -> Result<()> {
    let period = m.alphabet.period();
    let mut phases: Vec<BTreeSet<usize>> = Vec::with_capacity(m.gens.len());
    let mut first_error: Vec<Option<Error>> = Vec::with_capacity(m.gens.len());
    for g in &m.gens {
        let mut ok = BTreeSet::new();
        let mut err = None;
        for p in 0..period {
            match check_prefix_code(m, &g.rules, p, &g.name) {
                Ok(()) => {
                    ok.insert(p);
                }
                Err(e) => {
                    err.get_or_insert(e);
                }
            }
        }
        phases.push(ok);
        first_error.push(err);
    }
    // Drop phases whose continuations are not defined where they land.
    loop {
        let mut changed = false;
        for gi in 0..m.gens.len() {
            let current: Vec<usize> = phases[gi].iter().copied().collect();
            for p in current {
                let consistent = m.gens[gi].rules.iter().all(|r| {
                    if !m.is_admissible_at(&r.window, p, Prev::Any) {
                        return true;
                    }
                    let q = (p + r.consumed()) % period;
                    r.next.letters.iter().all(|l| phases[l.gen as usize].contains(&q))
                });
                if !consistent {
                    phases[gi].remove(&p);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (gi, ph) in phases.into_iter().enumerate() {
        if ph.is_empty() {
            return Err(first_error[gi].take().unwrap_or_else(|| {
                Error::Validation(format!(
                    "generator `{}` is not defined consistently at any level",
                    m.gens[gi].name
                ))
            }));
        }
        m.gens[gi].phases = ph.into_iter().collect();
    }
    Ok(())
}

fn derive_all_inverses(m: &mut MachineDef, caps: &Caps) -> Result<()> {
    loop {
        let pending: Vec<usize> = (0..m.gens.len()).filter(|&i| !m.gens[i].inverse_ready).collect();
        if pending.is_empty() {
            return Ok(());
        }
        let mut progress = false;
        let mut last_err = None;
        for gi in pending {
            match invert_generator(m, gi as GenId, caps) {
                Ok(rules) => {
                    for p in m.gens[gi].phases.clone() {
                        check_prefix_code(m, &rules, p, &format!("~{}", m.gens[gi].name))?;
                    }
                    m.gens[gi].inverse = rules;
                    m.gens[gi].inverse_ready = true;
                    progress = true;
                }
                Err(Error::Validation(msg)) if msg.starts_with(PENDING_INVERSE) => {
                    last_err = Some(Error::Validation(msg));
                }
                Err(e) => return Err(e),
            }
        }
        if !progress {
            return Err(last_err.unwrap_or_else(|| Error::Validation("cyclic inverse derivation".into())));
        }
    }
}

/// Image prefix of `window` under a single rule, as far as it is determined
/// by the window itself.
fn rule_image(m: &MachineDef, rule: &Rule, window: &[Sym], phase: usize, caps: &Caps) -> Result<Vec<Sym>> {
    let c = rule.consumed();
    let mut image = rule.output.clone();
    if window.len() > c {
        let mut pipe = Pipeline::from_word(&rule.next);
        for &s in &window[c..] {
            pipe.feed(m, s, &mut image, caps)?;
        }
    }
    let _ = phase;
    Ok(image)
}

fn invert_generator(m: &MachineDef, g: GenId, caps: &Caps) -> Result<Vec<Rule>> {
    let mut all: Vec<Rule> = Vec::new();
    for &phase in &m.gens[g as usize].phases {
        for r in invert_at_phase(m, g, phase, caps)? {
            if !all.contains(&r) {
                all.push(r);
            }
        }
    }
    all.sort_by(|a, b| a.window.cmp(&b.window));
    Ok(all)
}

fn invert_at_phase(m: &MachineDef, g: GenId, phase: usize, caps: &Caps) -> Result<Vec<Rule>> {
    let gen = &m.gens[g as usize];
    let not_injective = || {
        Error::Validation(format!(
            "generator `{}` is not injective: rule images overlap",
            gen.name
        ))
    };
    // (rule index, forward window)
    let mut work: Vec<(usize, Vec<Sym>)> = active_rules(m, &gen.rules, phase)
        .into_iter()
        .map(|i| (i, gen.rules[i].window.clone()))
        .collect();
    for _round in 0..=caps.lookahead {
        let images: Vec<Vec<Sym>> = work
            .iter()
            .map(|(i, w)| rule_image(m, &gen.rules[*i], w, phase, caps))
            .collect::<Result<_>>()?;
        let mut refine = vec![false; work.len()];
        for a in 0..work.len() {
            for b in 0..work.len() {
                if a != b && images[b].starts_with(&images[a]) {
                    if images[a] == images[b]
                        && images[a].len() == work[a].1.len()
                        && images[b].len() == work[b].1.len()
                    {
                        return Err(not_injective());
                    }
                    refine[a] = true;
                }
            }
        }
        if !refine.iter().any(|&r| r) {
            return Ok(work
                .iter()
                .zip(images)
                .map(|((i, w), image)| {
                    let r = &gen.rules[*i];
                    Rule {
                        window: image,
                        output: w[..r.consumed()].to_vec(),
                        next: r.next.inverse(),
                    }
                })
                .collect());
        }
        let mut next_work = Vec::new();
        for (k, (i, w)) in work.into_iter().enumerate() {
            if refine[k] {
                let prev = m.step_prev(*w.last().unwrap());
                for s in m.admissible_next(phase + w.len(), prev) {
                    let mut v = w.clone();
                    v.push(s);
                    next_work.push((i, v));
                }
            } else {
                next_work.push((i, w));
            }
        }
        if next_work.len() > caps.closure {
            return Err(not_injective());
        }
        work = next_work;
    }
    Err(not_injective())
}

/// Level maps of every root generator and its inverse are injective on
/// determined words, permute the level when fully determined, and round-trip.
fn check_bijective(m: &MachineDef, caps: &Caps) -> Result<()> {
    let depth = (m.max_window + 1).max(4);
    for g in m.root_generators() {
        for letter in [Letter::new(g), Letter::new(g).inverse()] {
            let w = GroupWord::from_letters(vec![letter]);
            let name = m.format_word(&w);
            for k in 1..=depth {
                let words = match m.level_words(k, 20_000) {
                    Ok(ws) => ws,
                    Err(_) => break,
                };
                let mut images = BTreeSet::new();
                let mut all = true;
                for v in &words {
                    match engine::apply_word_with(m, &w, v, caps) {
                        Ok(img) => {
                            if !m.is_admissible(&img) {
                                return Err(Error::Validation(format!(
                                    "`{name}` maps `{}` to inadmissible `{}`",
                                    m.alphabet.format(v),
                                    m.alphabet.format(&img)
                                )));
                            }
                            if let Ok(back) = engine::apply_word_with(m, &w.inverse(), &img, caps) {
                                if &back != v {
                                    return Err(Error::Validation(format!(
                                        "`{name}` does not round-trip on `{}`",
                                        m.alphabet.format(v)
                                    )));
                                }
                            }
                            if !images.insert(img) {
                                return Err(Error::Validation(format!(
                                    "level-{k} map of `{name}` is not injective"
                                )));
                            }
                        }
                        Err(Error::NeedsMoreLetters { .. }) => all = false,
                        Err(e) => return Err(e),
                    }
                }
                if all && images.len() != words.len() {
                    return Err(Error::Validation(format!(
                        "level-{k} map of `{name}` is not a bijection"
                    )));
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for MachineDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::to_document(self))
    }
}
