//! Activity growth: the graph of nontrivial section states, exact counts
//! of nontrivial sections per level, and the finitary / bounded /
//! polynomial / exponential classification.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::{tarjan_scc, toposort};
use petgraph::graph::{DiGraph, NodeIndex};

use crate::alphabet::Sym;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::ray::RaySpec;
use crate::triviality::{state_is_trivial, SectionState};
use crate::word::GroupWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActivityClass {
    Finitary(usize),
    Bounded,
    Polynomial(usize),
    Exponential,
}

impl ActivityClass {
    pub fn degree(&self) -> Option<usize> {
        match self {
            ActivityClass::Finitary(_) | ActivityClass::Bounded => Some(0),
            ActivityClass::Polynomial(d) => Some(*d),
            ActivityClass::Exponential => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, ActivityClass::Finitary(_) | ActivityClass::Bounded)
    }
}

impl fmt::Display for ActivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActivityClass::Finitary(d) => write!(f, "finitary({d})"),
            ActivityClass::Bounded => write!(f, "bounded"),
            ActivityClass::Polynomial(d) => write!(f, "polynomial({d})"),
            ActivityClass::Exponential => write!(f, "exponential"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StateGraph {
    states: Vec<SectionState>,
    pub labels: Vec<String>,
    /// (from, letter, to)
    pub edges: Vec<(usize, Sym, usize)>,
    /// Index of the start state, `None` when the element is trivial.
    pub start: Option<usize>,
    /// Set when triviality of states was only checked to a finite depth.
    pub unconfirmed: bool,
}

impl StateGraph {
    pub fn vertex_count(&self) -> usize {
        self.states.len()
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &(usize, Sym, usize)> {
        self.edges.iter().filter(move |e| e.0 == v)
    }

    fn digraph(&self) -> DiGraph<(), Sym> {
        let mut g = DiGraph::new();
        for _ in 0..self.states.len() {
            g.add_node(());
        }
        for &(a, s, b) in &self.edges {
            g.add_edge(NodeIndex::new(a), NodeIndex::new(b), s);
        }
        g
    }
}

pub fn nontrivial_state_graph(m: &MachineDef, g: &GroupWord) -> Result<StateGraph> {
    nontrivial_state_graph_with(m, g, &Caps::default())
}

pub fn nontrivial_state_graph_with(m: &MachineDef, g: &GroupWord, caps: &Caps) -> Result<StateGraph> {
    let mut sg = StateGraph {
        states: Vec::new(),
        labels: Vec::new(),
        edges: Vec::new(),
        start: None,
        unconfirmed: !m.is_uniform(),
    };
    let mut trivial: HashMap<SectionState, bool> = HashMap::new();
    let mut is_trivial = |st: &SectionState| -> Result<bool> {
        if let Some(&t) = trivial.get(st) {
            return Ok(t);
        }
        let t = state_is_trivial(m, st, caps)?;
        trivial.insert(st.clone(), t);
        Ok(t)
    };
    let start = SectionState::start(m, &g.reduced());
    if is_trivial(&start)? {
        return Ok(sg);
    }
    let mut index: HashMap<SectionState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    sg.labels.push(start.label(m));
    sg.states.push(start.clone());
    sg.start = Some(0);
    queue.push_back(start);
    while let Some(st) = queue.pop_front() {
        let from = index[&st];
        for s in st.letters(m) {
            let next = st.step(m, s, caps)?;
            if is_trivial(&next)? {
                continue;
            }
            let to = match index.get(&next) {
                Some(&i) => i,
                None => {
                    let i = sg.states.len();
                    if i >= caps.closure {
                        return Err(Error::CapExceeded {
                            what: "state graph",
                            cap: caps.closure,
                        });
                    }
                    index.insert(next.clone(), i);
                    sg.labels.push(next.label(m));
                    sg.states.push(next.clone());
                    queue.push_back(next);
                    i
                }
            };
            sg.edges.push((from, s, to));
        }
    }
    Ok(sg)
}

pub fn classify_activity(sg: &StateGraph) -> ActivityClass {
    let n = sg.vertex_count();
    if n == 0 {
        return ActivityClass::Finitary(0);
    }
    let g = sg.digraph();
    let sccs = tarjan_scc(&g);
    let mut comp = vec![0usize; n];
    for (ci, c) in sccs.iter().enumerate() {
        for v in c {
            comp[v.index()] = ci;
        }
    }
    let mut internal = vec![0usize; sccs.len()];
    for &(a, _, b) in &sg.edges {
        if comp[a] == comp[b] {
            internal[comp[a]] += 1;
        }
    }
    let cyclic: Vec<bool> = (0..sccs.len()).map(|c| internal[c] > 0).collect();
    if (0..sccs.len()).any(|c| internal[c] > sccs[c].len()) {
        return ActivityClass::Exponential;
    }
    // condensation DAG, longest chains
    let mut dag: DiGraph<usize, ()> = DiGraph::new();
    for c in 0..sccs.len() {
        dag.add_node(c);
    }
    let mut seen = BTreeSet::new();
    for &(a, _, b) in &sg.edges {
        let (ca, cb) = (comp[a], comp[b]);
        if ca != cb && seen.insert((ca, cb)) {
            dag.add_edge(NodeIndex::new(ca), NodeIndex::new(cb), ());
        }
    }
    let order = toposort(&dag, None).expect("condensation is acyclic");
    let mut cycles = vec![0usize; sccs.len()];
    let mut verts = vec![0usize; sccs.len()];
    for &c in order.iter().rev() {
        let best_c = dag.neighbors(c).map(|d| cycles[d.index()]).max().unwrap_or(0);
        let best_v = dag.neighbors(c).map(|d| verts[d.index()]).max().unwrap_or(0);
        cycles[c.index()] = best_c + cyclic[c.index()] as usize;
        verts[c.index()] = best_v + sccs[c.index()].len();
    }
    let k = cycles.iter().copied().max().unwrap_or(0);
    match k {
        0 => ActivityClass::Finitary(verts.iter().copied().max().unwrap_or(0)),
        1 => ActivityClass::Bounded,
        _ => ActivityClass::Polynomial(k - 1),
    }
}

/// Number of nontrivial sections at each level `0..=n` of the state graph.
pub fn alpha_profile(sg: &StateGraph, n: usize) -> Result<Vec<u128>> {
    let mut out = Vec::with_capacity(n + 1);
    let Some(start) = sg.start else {
        return Ok(vec![0; n + 1]);
    };
    let mut counts = vec![0u128; sg.vertex_count()];
    counts[start] = 1;
    out.push(1);
    for _ in 0..n {
        let mut next = vec![0u128; counts.len()];
        for &(a, _, b) in &sg.edges {
            next[b] = next[b].checked_add(counts[a]).ok_or(Error::CapExceeded {
                what: "activity count (u128)",
                cap: usize::MAX,
            })?;
        }
        counts = next;
        let total = counts
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or(Error::CapExceeded {
                what: "activity count (u128)",
                cap: usize::MAX,
            })?;
        out.push(total);
    }
    Ok(out)
}

/// `α_n(g)`: number of admissible level-`n` words with nontrivial section.
pub fn alpha_n(m: &MachineDef, g: &GroupWord, n: usize) -> Result<u128> {
    let sg = nontrivial_state_graph(m, g)?;
    Ok(alpha_profile(&sg, n)?[n])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singular {
    pub prefixes: Vec<Vec<Sym>>,
    /// Eventually periodic rays along which nontrivial sections persist
    /// (cycles of the state graph).
    pub rays: Vec<RaySpec>,
}

pub fn singular_prefixes(m: &MachineDef, g: &GroupWord, n: usize) -> Result<Singular> {
    let sg = nontrivial_state_graph(m, g)?;
    let mut prefixes = Vec::new();
    let Some(start) = sg.start else {
        return Ok(Singular {
            prefixes,
            rays: Vec::new(),
        });
    };
    let mut adj: Vec<Vec<(Sym, usize)>> = vec![Vec::new(); sg.vertex_count()];
    for &(a, s, b) in &sg.edges {
        adj[a].push((s, b));
    }
    let mut layer = vec![(Vec::new(), start)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (w, v) in layer {
            for &(s, b) in &adj[v] {
                let mut w2 = w.clone();
                w2.push(s);
                next.push((w2, b));
            }
        }
        layer = next;
    }
    prefixes.extend(layer.into_iter().map(|(w, _)| w));
    prefixes.sort_by_key(|w| m.format_symbols(w));
    // rays: shortest path to each vertex, then around a simple cycle
    let mut path_to: Vec<Option<Vec<Sym>>> = vec![None; sg.vertex_count()];
    path_to[start] = Some(Vec::new());
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        for &(s, b) in &adj[v] {
            if path_to[b].is_none() {
                let mut p = path_to[v].clone().unwrap();
                p.push(s);
                path_to[b] = Some(p);
                q.push_back(b);
            }
        }
    }
    let mut rays = BTreeSet::new();
    if classify_activity(&sg).is_bounded() {
        for v in 0..sg.vertex_count() {
            if let Some(cycle) = cycle_through(&adj, v) {
                let prefix = path_to[v].clone().unwrap_or_default();
                rays.insert(RaySpec::new(prefix, cycle)?);
            }
        }
    }
    Ok(Singular {
        prefixes,
        rays: rays.into_iter().collect(),
    })
}

/// Labels of a shortest cycle from `v` back to `v`.
fn cycle_through(adj: &[Vec<(Sym, usize)>], v: usize) -> Option<Vec<Sym>> {
    let mut back: Vec<Option<(usize, Sym)>> = vec![None; adj.len()];
    let mut q = VecDeque::new();
    for &(s, b) in &adj[v] {
        if b == v {
            return Some(vec![s]);
        }
        if back[b].is_none() {
            back[b] = Some((v, s));
            q.push_back(b);
        }
    }
    while let Some(u) = q.pop_front() {
        for &(s, b) in &adj[u] {
            if b == v {
                let mut labels = vec![s];
                let mut cur = u;
                while cur != v {
                    let (p, l) = back[cur].unwrap();
                    labels.push(l);
                    cur = p;
                }
                labels.reverse();
                return Some(labels);
            }
            if back[b].is_none() {
                back[b] = Some((u, s));
                q.push_back(b);
            }
        }
    }
    None
}
