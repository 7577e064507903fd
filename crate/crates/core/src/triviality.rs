//! Triviality of elements and of sections: depth-bounded checks, exact
//! equality for stationary machines, and state closure.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::alphabet::{Prev, Sym};
use crate::caps::Caps;
use crate::engine::Pipeline;
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::word::GroupWord;

/// The residual transformation after reading part of a path: the pipeline,
/// the number of letters read whose images are still pending, and the
/// position context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectionState {
    pub pipe: Pipeline,
    pub pending: usize,
    pub prev: Prev,
    pub phase: usize,
}

impl SectionState {
    pub fn start(m: &MachineDef, w: &GroupWord) -> SectionState {
        SectionState {
            pipe: Pipeline::from_word(w),
            pending: 0,
            prev: if m.subshift().is_some() { Prev::Root } else { Prev::Any },
            phase: 0,
        }
    }

    pub fn step(&self, m: &MachineDef, sym: Sym, caps: &Caps) -> Result<SectionState> {
        let mut pipe = self.pipe.clone();
        let mut out = Vec::new();
        pipe.feed(m, sym, &mut out, caps)?;
        Ok(SectionState {
            pipe,
            pending: self.pending + 1 - out.len(),
            prev: m.step_prev(sym),
            phase: (self.phase + 1) % m.alphabet().period(),
        })
    }

    /// Admissible next letters.
    pub fn letters(&self, m: &MachineDef) -> Vec<Sym> {
        m.admissible_next(self.phase, self.prev)
    }

    /// The section as a group word, when no letters are pending.
    pub fn word(&self) -> Option<GroupWord> {
        if self.pending == 0 {
            self.pipe.word()
        } else {
            None
        }
    }

    pub fn label(&self, m: &MachineDef) -> String {
        match self.word() {
            Some(w) => m.format_word(&w),
            None => format!("[{}; {} pending]", self.pipe.describe(m), self.pending),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Probe {
    pipe: Pipeline,
    /// images produced so far for the pending letters
    head: Vec<Sym>,
    /// inputs still to be matched; `None` for letters beyond the depth bound
    queue: VecDeque<Option<Sym>>,
    prev: Prev,
    phase: usize,
    fed: usize,
}

/// True iff the residual transformation at this state acts as a prefix
/// exchange: pending images are determined and the rest is the identity.
/// Exact for stationary machines, checked to `caps.triviality_depth`
/// letters otherwise.
pub fn state_is_trivial(m: &MachineDef, st: &SectionState, caps: &Caps) -> Result<bool> {
    if st.pending == 0 && st.pipe.is_empty() {
        return Ok(true);
    }
    let limit = if m.is_uniform() {
        None
    } else {
        Some(caps.triviality_depth)
    };
    explore_with_prefix(m, st, limit, caps)
}

fn explore_with_prefix(m: &MachineDef, st: &SectionState, limit: Option<usize>, caps: &Caps) -> Result<bool> {
    // the pending letters occupy the front of the queue as placeholders
    let first = Probe {
        pipe: st.pipe.clone(),
        head: Vec::new(),
        queue: std::iter::repeat_n(None, st.pending).collect(),
        prev: st.prev,
        phase: st.phase,
        fed: 0,
    };
    explore_from(m, first, st.pending, limit, caps)
}

/// Explores all continuations. The images of the `pending` placeholder
/// letters must agree across continuations; later outputs must reproduce
/// the inputs read before `limit` (all inputs if `None`).
fn explore_from(m: &MachineDef, first: Probe, pending: usize, limit: Option<usize>, caps: &Caps) -> Result<bool> {
    let mut head_seen: Option<Vec<Sym>> = None;
    let mut seen: HashSet<Probe> = HashSet::new();
    let mut stack = vec![first];
    while let Some(p) = stack.pop() {
        if p.head.len() == pending {
            match &head_seen {
                Some(h) if *h != p.head => return Ok(false),
                Some(_) => {}
                None => head_seen = Some(p.head.clone()),
            }
            let open = p.queue.iter().any(|q| q.is_some());
            match limit {
                Some(n) => {
                    if !open && p.fed >= n {
                        continue;
                    }
                    if open && p.fed > n + caps.lookahead {
                        return Err(Error::CapExceeded {
                            what: "lookahead",
                            cap: caps.lookahead,
                        });
                    }
                }
                None => {
                    if p.pipe.is_empty() && p.queue.is_empty() {
                        continue;
                    }
                }
            }
        }
        for s in m.admissible_next(p.phase, p.prev) {
            let mut q = p.clone();
            let mut out = Vec::new();
            q.pipe.feed(m, s, &mut out, caps)?;
            let track = limit.is_none_or(|n| q.fed < n);
            if let Some(n) = limit {
                q.fed = (q.fed + 1).min(n + caps.lookahead + 1);
            }
            q.queue.push_back(track.then_some(s));
            q.prev = m.step_prev(s);
            q.phase = (q.phase + 1) % m.alphabet().period();
            for o in out {
                let expected = q.queue.pop_front().flatten();
                if q.head.len() < pending {
                    q.head.push(o);
                } else if let Some(x) = expected {
                    if x != o {
                        return Ok(false);
                    }
                }
            }
            if seen.insert(q.clone()) {
                if seen.len() > caps.states {
                    return Err(Error::CapExceeded {
                        what: "explored states",
                        cap: caps.states,
                    });
                }
                stack.push(q);
            }
        }
    }
    Ok(true)
}

/// `apply(g, v) = v` for every admissible `v` of length `n`.
pub fn is_trivial_to_depth(m: &MachineDef, g: &GroupWord, n: usize) -> Result<bool> {
    is_trivial_to_depth_with(m, g, n, &Caps::default())
}

pub fn is_trivial_to_depth_with(m: &MachineDef, g: &GroupWord, n: usize, caps: &Caps) -> Result<bool> {
    let st = SectionState::start(m, &g.reduced());
    if st.pipe.is_empty() || n == 0 {
        return Ok(true);
    }
    explore_with_prefix(m, &st, Some(n), caps)
}

/// Exact equality of the homeomorphisms defined by `g` and `h`.
pub fn equals_exact(m: &MachineDef, g: &GroupWord, h: &GroupWord) -> Result<bool> {
    equals_exact_with(m, g, h, &Caps::default())
}

pub fn equals_exact_with(m: &MachineDef, g: &GroupWord, h: &GroupWord, caps: &Caps) -> Result<bool> {
    if !m.is_uniform() {
        return Err(Error::NonUniform);
    }
    let w = g.mul(&h.inverse()).reduced();
    let st = SectionState::start(m, &w);
    if st.pipe.is_empty() {
        return Ok(true);
    }
    explore_with_prefix(m, &st, None, caps)
}

/// Sections of the seeds at all aligned positions, closed under taking
/// further sections. Includes the seeds; the identity appears when some
/// section is trivial as a reduced word.
pub fn state_closure(m: &MachineDef, seeds: &[GroupWord]) -> Result<BTreeSet<GroupWord>> {
    state_closure_with(m, seeds, &Caps::default())
}

pub fn state_closure_with(m: &MachineDef, seeds: &[GroupWord], caps: &Caps) -> Result<BTreeSet<GroupWord>> {
    let period = m.alphabet().period();
    let mut nodes: HashMap<(GroupWord, Prev, usize), ()> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut words = BTreeSet::new();
    for s in seeds {
        let key = (s.reduced(), Prev::Root, 0);
        if nodes.insert(key.clone(), ()).is_none() {
            words.insert(key.0.clone());
            queue.push_back(key);
        }
    }
    while let Some((w, prev, phase)) = queue.pop_front() {
        // walk letters until the pipeline is aligned again
        let mut stack = vec![(Pipeline::from_word(&w), prev, phase, 0usize)];
        while let Some((pipe, prev, phase, depth)) = stack.pop() {
            for s in m.admissible_next(phase, prev) {
                let mut p = pipe.clone();
                let mut out = Vec::new();
                p.feed(m, s, &mut out, caps)?;
                let np = m.step_prev(s);
                let nph = (phase + 1) % period;
                if let Some(sec) = p.word() {
                    let key = (sec.reduced(), np, nph);
                    if !nodes.contains_key(&key) {
                        nodes.insert(key.clone(), ());
                        words.insert(key.0.clone());
                        if words.len() > caps.closure {
                            return Err(Error::CapExceeded {
                                what: "state closure",
                                cap: caps.closure,
                            });
                        }
                        queue.push_back(key);
                    }
                } else if depth + 1 > caps.lookahead {
                    return Err(Error::CapExceeded {
                        what: "alignment lookahead",
                        cap: caps.lookahead,
                    });
                } else {
                    stack.push((p, np, nph, depth + 1));
                }
            }
        }
    }
    Ok(words)
}
