//! Evaluation of group words on finite words, sections and rays.
//!
//! A group word is run as a pipeline of single-generator transducers. Input
//! enters at the rightmost factor; whatever a factor emits is passed to its
//! left neighbour, and the leftmost factor emits the image.

use crate::alphabet::{Prev, Sym};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::machine::{MachineDef, Rule};
use crate::word::{GroupWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Factor {
    pub letter: Letter,
    pub buf: Vec<Sym>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pipeline {
    factors: Vec<Factor>,
}

fn try_fire<'m>(m: &'m MachineDef, letter: Letter, buf: &[Sym]) -> Result<Option<&'m Rule>> {
    let mut partial = false;
    for r in m.rules_for(letter)? {
        let k = r.window.len().min(buf.len());
        if r.window[..k] == buf[..k] {
            if r.window.len() <= buf.len() {
                return Ok(Some(r));
            }
            partial = true;
        }
    }
    if partial {
        Ok(None)
    } else {
        Err(Error::Inadmissible(m.format_symbols(buf)))
    }
}

impl Pipeline {
    pub fn from_word(w: &GroupWord) -> Pipeline {
        let mut p = Pipeline {
            factors: w
                .letters
                .iter()
                .map(|&letter| Factor { letter, buf: Vec::new() })
                .collect(),
        };
        p.normalize();
        p
    }

    /// All buffers empty: the pipeline is a plain group word.
    pub fn is_aligned(&self) -> bool {
        self.factors.iter().all(|f| f.buf.is_empty())
    }

    pub fn word(&self) -> Option<GroupWord> {
        self.is_aligned()
            .then(|| GroupWord::from_letters(self.factors.iter().map(|f| f.letter).collect()))
    }

    /// Number of letters read but not yet emitted.
    pub fn pending(&self) -> usize {
        self.factors.iter().map(|f| f.buf.len()).sum()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn describe(&self, m: &MachineDef) -> String {
        if self.factors.is_empty() {
            return "e".into();
        }
        self.factors
            .iter()
            .map(|f| {
                let name = m.format_word(&GroupWord::from_letters(vec![f.letter]));
                if f.buf.is_empty() {
                    name
                } else {
                    format!("{name}<{}>", m.format_symbols(&f.buf))
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Cancels adjacent inverse pairs that hold no buffered letters.
    pub fn normalize(&mut self) {
        let mut out: Vec<Factor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            if let Some(top) = out.last() {
                if f.buf.is_empty() && top.buf.is_empty() && top.letter == f.letter.inverse() {
                    out.pop();
                    continue;
                }
            }
            out.push(f);
        }
        self.factors = out;
    }

    pub fn feed(&mut self, m: &MachineDef, sym: Sym, out: &mut Vec<Sym>, caps: &Caps) -> Result<()> {
        let last = self.factors.len() as isize - 1;
        self.deliver(m, last, vec![sym], out, caps)?;
        self.normalize();
        if self.factors.len() > caps.factors {
            return Err(Error::CapExceeded {
                what: "pipeline factors",
                cap: caps.factors,
            });
        }
        Ok(())
    }

    fn deliver(
        &mut self,
        m: &MachineDef,
        i: isize,
        letters: Vec<Sym>,
        out: &mut Vec<Sym>,
        caps: &Caps,
    ) -> Result<()> {
        if letters.is_empty() {
            return Ok(());
        }
        if i < 0 {
            out.extend(letters);
            return Ok(());
        }
        let i = i as usize;
        self.factors[i].buf.extend(letters);
        let Some(rule) = try_fire(m, self.factors[i].letter, &self.factors[i].buf)? else {
            return Ok(());
        };
        if self.factors.len() + rule.next.len() > 4 * caps.factors {
            return Err(Error::CapExceeded {
                what: "pipeline factors",
                cap: caps.factors,
            });
        }
        let f = self.factors.remove(i);
        let rest = f.buf[rule.consumed()..].to_vec();
        let before = self.factors.len();
        self.deliver(m, i as isize - 1, rule.output.clone(), out, caps)?;
        let at = (i as isize + self.factors.len() as isize - before as isize) as usize;
        for (k, &l) in rule.next.letters.iter().enumerate() {
            self.factors.insert(at + k, Factor { letter: l, buf: Vec::new() });
        }
        let target = at as isize + rule.next.len() as isize - 1;
        self.deliver(m, target, rest, out, caps)
    }
}

/// Image of the finite word `v` under `w`, as far as it is determined by `v`
/// alone, or `None` positions still pending.
pub(crate) fn run(
    m: &MachineDef,
    w: &GroupWord,
    v: &[Sym],
    caps: &Caps,
) -> Result<(Pipeline, Vec<Sym>)> {
    let mut p = Pipeline::from_word(w);
    let mut out = Vec::with_capacity(v.len());
    for &s in v {
        p.feed(m, s, &mut out, caps)?;
    }
    Ok((p, out))
}

fn check_input(m: &MachineDef, v: &[Sym]) -> Result<()> {
    if m.is_admissible(v) {
        Ok(())
    } else {
        Err(Error::Inadmissible(m.format_symbols(v)))
    }
}

/// `w(v)` for a finite admissible word `v`. When lookahead rules leave the
/// tail of the image undetermined, admissible extensions are tried; if they
/// disagree the result is [`Error::NeedsMoreLetters`].
pub fn apply_word(m: &MachineDef, w: &GroupWord, v: &[Sym]) -> Result<Vec<Sym>> {
    apply_word_with(m, w, v, &Caps::default())
}

pub fn apply_word_with(m: &MachineDef, w: &GroupWord, v: &[Sym], caps: &Caps) -> Result<Vec<Sym>> {
    apply_below_with(m, w, &[], v, caps)
}

/// `w|_u(v)`: the image of `v` under the section of `w` at `u`, read in the
/// subtree below `u` (so level alphabets and transitions continue from `u`).
pub fn apply_below(m: &MachineDef, w: &GroupWord, u: &[Sym], v: &[Sym]) -> Result<Vec<Sym>> {
    apply_below_with(m, w, u, v, &Caps::default())
}

pub fn apply_below_with(m: &MachineDef, w: &GroupWord, u: &[Sym], v: &[Sym], caps: &Caps) -> Result<Vec<Sym>> {
    check_input(m, u)?;
    let depth = u.len();
    let start = u.last().map_or(Prev::Root, |&s| m.step_prev(s));
    if !m.is_admissible_at(v, depth, start) {
        let mut uv = u.to_vec();
        uv.extend_from_slice(v);
        return Err(Error::Inadmissible(m.format_symbols(&uv)));
    }
    let n = v.len();
    let (p, out) = run(m, w, v, caps)?;
    if out.len() >= n {
        return Ok(out[..n].to_vec());
    }
    let prev = v.last().map_or(start, |&s| m.step_prev(s));
    let mut states = vec![(p, out, prev)];
    for k in 1..=caps.lookahead {
        let mut next = Vec::new();
        for (p, out, prev) in states {
            if out.len() >= n {
                next.push((p, out, prev));
                continue;
            }
            for s in m.admissible_next(depth + n + k - 1, prev) {
                let mut p2 = p.clone();
                let mut o2 = out.clone();
                p2.feed(m, s, &mut o2, caps)?;
                next.push((p2, o2, m.step_prev(s)));
            }
            if next.len() > caps.states {
                return Err(Error::CapExceeded {
                    what: "lookahead states",
                    cap: caps.states,
                });
            }
        }
        states = next;
        if states.iter().all(|(_, o, _)| o.len() >= n) {
            let first = states[0].1[..n].to_vec();
            if states.iter().all(|(_, o, _)| o[..n] == first[..]) {
                return Ok(first);
            }
            return Err(Error::NeedsMoreLetters { required: n + k });
        }
    }
    Err(Error::CapExceeded {
        what: "lookahead",
        cap: caps.lookahead,
    })
}

/// The section `w|_v`, defined when the pipeline is aligned after reading `v`.
pub fn section_of(m: &MachineDef, w: &GroupWord, v: &[Sym]) -> Result<GroupWord> {
    section_of_with(m, w, v, &Caps::default())
}

pub fn section_of_with(m: &MachineDef, w: &GroupWord, v: &[Sym], caps: &Caps) -> Result<GroupWord> {
    check_input(m, v)?;
    let (p, _) = run(m, w, v, caps)?;
    match p.word() {
        Some(s) => Ok(s.reduced()),
        None => Err(Error::Unaligned {
            position: v.len() - p.pending(),
        }),
    }
}

/// Applies `w` to `v` and returns the image together with the section,
/// requiring alignment.
pub fn image_and_section(m: &MachineDef, w: &GroupWord, v: &[Sym]) -> Result<(Vec<Sym>, GroupWord)> {
    let caps = Caps::default();
    check_input(m, v)?;
    let (p, out) = run(m, w, v, &caps)?;
    match p.word() {
        Some(s) => Ok((out, s.reduced())),
        None => Err(Error::Unaligned {
            position: v.len() - p.pending(),
        }),
    }
}
