//! Bratteli diagrams with a finite horizon, path spaces, tail exchanges,
//! depth-n elements of the full group of the tail equivalence, ordered
//! diagrams and the adic transformation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::activity::{alpha_profile, nontrivial_state_graph};
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::word::GroupWord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    /// Position in the order on edges with the same range.
    pub order: usize,
}

/// Vertex names of level `i + 1` and edges of `E_i` (0-based `i`).
pub type LevelFn = Arc<dyn Fn(usize) -> (Vec<String>, Vec<Edge>) + Send + Sync>;

#[derive(Clone)]
pub struct BratteliDiagram {
    /// `levels[i]` holds the vertices of `V_{i+1}`.
    levels: Vec<Vec<String>>,
    /// `edges[i]` is `E_{i+1}`, from `levels[i]` to `levels[i+1]`.
    edges: Vec<Vec<Edge>>,
    extend: Option<LevelFn>,
}

impl fmt::Debug for BratteliDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BratteliDiagram")
            .field("levels", &self.levels)
            .field("edges", &self.edges)
            .field("extendable", &self.extend.is_some())
            .finish()
    }
}

impl PartialEq for BratteliDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels && self.edges == other.edges
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePath {
    /// Index of each edge within its level.
    pub edges: Vec<usize>,
}

impl FinitePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn diag(msg: impl Into<String>) -> Error {
    Error::Diagram(msg.into())
}

impl BratteliDiagram {
    pub fn new(levels: Vec<Vec<String>>, edges: Vec<Vec<Edge>>) -> Result<BratteliDiagram> {
        let d = BratteliDiagram {
            levels,
            edges,
            extend: None,
        };
        d.validate()?;
        Ok(d)
    }

    /// Diagram whose levels are produced on demand by `f`, starting from a
    /// single root level.
    pub fn lazy(root: Vec<String>, f: LevelFn) -> BratteliDiagram {
        BratteliDiagram {
            levels: vec![root],
            edges: Vec::new(),
            extend: Some(f),
        }
    }

    /// The same vertex set on every level and the same edges between
    /// consecutive levels.
    pub fn stationary(vertices: Vec<String>, edges: Vec<Edge>) -> BratteliDiagram {
        let vs = vertices.clone();
        BratteliDiagram::lazy(vertices, Arc::new(move |_| (vs.clone(), edges.clone())))
    }

    fn validate(&self) -> Result<()> {
        if self.levels.len() != self.edges.len() + 1 {
            return Err(diag("need one more vertex level than edge levels"));
        }
        for (i, es) in self.edges.iter().enumerate() {
            let (a, b) = (self.levels[i].len(), self.levels[i + 1].len());
            for e in es {
                if e.src >= a || e.dst >= b {
                    return Err(diag(format!("edge `{}` on level {} has a bad endpoint", e.name, i + 1)));
                }
            }
            for v in 0..b {
                let mut ords: Vec<usize> = es.iter().filter(|e| e.dst == v).map(|e| e.order).collect();
                if ords.is_empty() {
                    return Err(diag(format!("vertex `{}` of level {} has no incoming edge", self.levels[i + 1][v], i + 2)));
                }
                ords.sort_unstable();
                if ords.windows(2).any(|w| w[0] == w[1]) {
                    return Err(diag(format!("order on edges into `{}` is not total", self.levels[i + 1][v])));
                }
            }
            for v in 0..a {
                if !es.iter().any(|e| e.src == v) {
                    return Err(diag(format!("vertex `{}` of level {} has no outgoing edge", self.levels[i][v], i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Number of edge levels currently instantiated.
    pub fn horizon(&self) -> usize {
        self.edges.len()
    }

    /// A copy instantiated to at least `n` edge levels.
    pub fn extended(&self, n: usize) -> Result<BratteliDiagram> {
        let mut d = self.clone();
        while d.edges.len() < n {
            let f = d
                .extend
                .clone()
                .ok_or_else(|| diag(format!("level {n} is beyond the horizon {}", self.horizon())))?;
            let (vs, es) = f(d.edges.len());
            d.levels.push(vs);
            d.edges.push(es);
        }
        d.validate()?;
        Ok(d)
    }

    fn need(&self, n: usize) -> Result<()> {
        if n > self.horizon() {
            Err(diag(format!("level {n} is beyond the horizon {}", self.horizon())))
        } else {
            Ok(())
        }
    }

    /// Vertices of `V_{i}` (1-based).
    pub fn vertices(&self, i: usize) -> &[String] {
        &self.levels[i - 1]
    }

    /// Edges of `E_i` (1-based).
    pub fn edges(&self, i: usize) -> &[Edge] {
        &self.edges[i - 1]
    }

    pub fn end(&self, p: &FinitePath) -> usize {
        match p.edges.last() {
            Some(&e) => self.edges[p.len() - 1][e].dst,
            None => 0,
        }
    }

    pub fn check_path(&self, p: &FinitePath) -> Result<()> {
        self.need(p.len())?;
        for (i, &e) in p.edges.iter().enumerate() {
            let edge = self.edges[i].get(e).ok_or_else(|| diag("edge index out of range"))?;
            if i > 0 && self.edges[i - 1][p.edges[i - 1]].dst != edge.src {
                return Err(diag(format!("path is not composable at level {}", i + 1)));
            }
        }
        Ok(())
    }

    /// Paths of length `n` (ending at vertex `v` of `V_{n+1}` if given), in
    /// the canonical order: reverse lexicographic in the edge orders.
    pub fn enumerate_paths(&self, n: usize, v: Option<usize>) -> Result<Vec<FinitePath>> {
        self.need(n)?;
        let mut paths: Vec<Vec<usize>> = (0..self.levels[0].len()).map(|_| Vec::new()).collect();
        let mut ends: Vec<usize> = (0..self.levels[0].len()).collect();
        for i in 0..n {
            let mut np = Vec::new();
            let mut ne = Vec::new();
            for (p, &end) in paths.iter().zip(&ends) {
                for (k, e) in self.edges[i].iter().enumerate() {
                    if e.src == end {
                        let mut q = p.clone();
                        q.push(k);
                        np.push(q);
                        ne.push(e.dst);
                    }
                }
            }
            paths = np;
            ends = ne;
        }
        let mut out: Vec<(Vec<usize>, FinitePath)> = paths
            .into_iter()
            .zip(ends)
            .filter(|(_, end)| v.is_none_or(|v| *end == v))
            .map(|(p, end)| {
                let mut key: Vec<usize> = vec![end];
                key.extend(p.iter().enumerate().rev().map(|(i, &e)| self.edges[i][e].order));
                (key, FinitePath { edges: p })
            })
            .collect();
        out.sort();
        Ok(out.into_iter().map(|(_, p)| p).collect())
    }

    pub fn format_path(&self, p: &FinitePath) -> String {
        let names: Vec<&str> = p
            .edges
            .iter()
            .enumerate()
            .map(|(i, &e)| self.edges[i][e].name.as_str())
            .collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    pub fn parse_path(&self, text: &str) -> Result<FinitePath> {
        let tokens: Vec<String> = if text.contains(' ') {
            text.split_whitespace().map(str::to_string).collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        let mut edges = Vec::new();
        let mut at = 0usize;
        for (i, t) in tokens.iter().enumerate() {
            self.need(i + 1)?;
            let k = self.edges[i]
                .iter()
                .position(|e| &e.name == t && (i == 0 || e.src == at))
                .ok_or_else(|| diag(format!("no edge `{t}` at level {}", i + 1)))?;
            at = self.edges[i][k].dst;
            edges.push(k);
        }
        Ok(FinitePath { edges })
    }

    /// `T_{w1,w2}`: replaces the prefix `w1` of `p` by `w2`.
    pub fn tail_exchange(&self, w1: &FinitePath, w2: &FinitePath, p: &FinitePath) -> Result<FinitePath> {
        self.check_path(w1)?;
        self.check_path(w2)?;
        self.check_path(p)?;
        if w1.len() != w2.len() || self.end(w1) != self.end(w2) {
            return Err(diag("tail exchange needs paths ending at the same vertex"));
        }
        if !p.edges.starts_with(&w1.edges) {
            return Err(diag("path is not in the cylinder of the first argument"));
        }
        let mut edges = w2.edges.clone();
        edges.extend_from_slice(&p.edges[w1.len()..]);
        Ok(FinitePath { edges })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, l) in self.levels.iter().enumerate() {
            s.push_str(&format!("level {}: {}\n", i + 1, l.join(" ")));
        }
        for (i, es) in self.edges.iter().enumerate() {
            for e in es {
                s.push_str(&format!(
                    "edge {}: {} {} {} {}\n",
                    i + 1,
                    e.name,
                    self.levels[i][e.src],
                    self.levels[i + 1][e.dst],
                    e.order
                ));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<BratteliDiagram> {
        let mut levels: Vec<Vec<String>> = Vec::new();
        let mut raw_edges: Vec<(usize, usize, Vec<String>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| Error::Syntax {
                line: ln + 1,
                column: 1,
                message: msg.to_string(),
            };
            let (head, rest) = line.split_once(':').ok_or_else(|| syntax("expected `:`"))?;
            let mut h = head.split_whitespace();
            let kind = h.next().unwrap_or("");
            let idx: usize = h
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| syntax("expected a level number"))?;
            match kind {
                "level" => {
                    if idx != levels.len() + 1 {
                        return Err(syntax("levels must be listed in order"));
                    }
                    levels.push(rest.split_whitespace().map(str::to_string).collect());
                }
                "edge" => raw_edges.push((ln + 1, idx, rest.split_whitespace().map(str::to_string).collect())),
                _ => return Err(syntax("expected `level` or `edge`")),
            }
        }
        let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); levels.len().saturating_sub(1)];
        for (ln, idx, f) in raw_edges {
            let syntax = |msg: &str| Error::Syntax {
                line: ln,
                column: 1,
                message: msg.to_string(),
            };
            if idx == 0 || idx >= levels.len() {
                return Err(syntax("edge level out of range"));
            }
            if f.len() < 3 || f.len() > 4 {
                return Err(syntax("expected `name src dst [order]`"));
            }
            let find = |lv: &Vec<String>, n: &str| lv.iter().position(|x| x == n);
            let src = find(&levels[idx - 1], &f[1]).ok_or_else(|| syntax("unknown source vertex"))?;
            let dst = find(&levels[idx], &f[2]).ok_or_else(|| syntax("unknown range vertex"))?;
            let order = match f.get(3) {
                Some(o) => o.parse().map_err(|_| syntax("bad order index"))?,
                None => edges[idx - 1].iter().filter(|e| e.dst == dst).count(),
            };
            edges[idx - 1].push(Edge {
                name: f[0].clone(),
                src,
                dst,
                order,
            });
        }
        BratteliDiagram::new(levels, edges)
    }
}

/// Element of depth `n`: a permutation of `Paths_v` for each `v ∈ V_{n+1}`,
/// indexed by the canonical path order. Missing blocks are identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthNElement {
    pub n: usize,
    pub blocks: BTreeMap<usize, Vec<usize>>,
}

impl DepthNElement {
    pub fn identity(n: usize) -> DepthNElement {
        DepthNElement {
            n,
            blocks: BTreeMap::new(),
        }
    }

    pub fn new(d: &BratteliDiagram, n: usize, blocks: BTreeMap<usize, Vec<usize>>) -> Result<DepthNElement> {
        for (&v, perm) in &blocks {
            let size = d.enumerate_paths(n, Some(v))?.len();
            let mut seen = vec![false; size];
            if perm.len() != size {
                return Err(diag(format!("block at vertex {v} has the wrong size")));
            }
            for &i in perm {
                if i >= size || seen[i] {
                    return Err(diag(format!("block at vertex {v} is not a permutation")));
                }
                seen[i] = true;
            }
        }
        Ok(DepthNElement { n, blocks })
    }

    /// The depth-`n` element acting on the first `n` levels as `f` does on
    /// level-`n` paths.
    pub fn from_fn(d: &BratteliDiagram, n: usize, f: impl Fn(&FinitePath) -> Result<FinitePath>) -> Result<DepthNElement> {
        let mut blocks = BTreeMap::new();
        for v in 0..d.vertices(n + 1).len() {
            let fiber = d.enumerate_paths(n, Some(v))?;
            let perm = fiber
                .iter()
                .map(|p| {
                    let q = f(p)?;
                    fiber
                        .iter()
                        .position(|x| *x == q)
                        .ok_or_else(|| diag("image leaves the fiber"))
                })
                .collect::<Result<Vec<_>>>()?;
            if perm.iter().enumerate().any(|(i, &j)| i != j) {
                blocks.insert(v, perm);
            }
        }
        DepthNElement::new(d, n, blocks)
    }

    pub fn apply(&self, d: &BratteliDiagram, p: &FinitePath) -> Result<FinitePath> {
        if p.len() < self.n {
            return Err(diag(format!("path shorter than depth {}", self.n)));
        }
        let head = FinitePath {
            edges: p.edges[..self.n].to_vec(),
        };
        let v = d.end(&head);
        let Some(perm) = self.blocks.get(&v) else {
            return Ok(p.clone());
        };
        let fiber = d.enumerate_paths(self.n, Some(v))?;
        let i = fiber.iter().position(|x| *x == head).ok_or_else(|| diag("path not in diagram"))?;
        let mut edges = fiber[perm[i]].edges.clone();
        edges.extend_from_slice(&p.edges[self.n..]);
        Ok(FinitePath { edges })
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &DepthNElement, d: &BratteliDiagram) -> Result<DepthNElement> {
        let n = self.n.max(other.n);
        let a = self.embed_to(d, n)?;
        let b = other.embed_to(d, n)?;
        DepthNElement::from_fn(d, n, |p| a.apply(d, &b.apply(d, p)?))
    }

    pub fn embed(&self, d: &BratteliDiagram) -> Result<DepthNElement> {
        self.embed_to(d, self.n + 1)
    }

    pub fn embed_to(&self, d: &BratteliDiagram, n: usize) -> Result<DepthNElement> {
        if n == self.n {
            return Ok(self.clone());
        }
        DepthNElement::from_fn(d, n, |p| self.apply(d, p))
    }

    /// One line per moved block: `v: (p q r)(s t)` over canonical paths.
    pub fn to_cycles(&self, d: &BratteliDiagram) -> Result<String> {
        let mut out = String::new();
        for (&v, perm) in &self.blocks {
            let fiber = d.enumerate_paths(self.n, Some(v))?;
            let mut seen = vec![false; perm.len()];
            let mut s = String::new();
            for start in 0..perm.len() {
                if seen[start] || perm[start] == start {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    cyc.push(d.format_path(&fiber[i]));
                    i = perm[i];
                }
                s.push_str(&format!("({})", cyc.join(" ")));
            }
            out.push_str(&format!("{}: {}\n", d.vertices(self.n + 1)[v], s));
        }
        Ok(out)
    }

    /// Number of level-`k` paths into each vertex whose cylinder is not
    /// mapped by a prefix exchange: zero beyond the depth.
    pub fn alpha_v(&self, d: &BratteliDiagram, k: usize) -> Result<Vec<usize>> {
        alpha_v_of_map(d, k, 1, |p| self.apply(d, p))
    }
}

/// `α_v` of a map on paths: for each vertex of `V_{k+1}`, the number of
/// paths `w ∈ Paths_v` such that the map is not `T_{w,u}` on the cylinder of
/// `w`, tested on extensions by `extra` further edges.
pub fn alpha_v_of_map(
    d: &BratteliDiagram,
    k: usize,
    extra: usize,
    f: impl Fn(&FinitePath) -> Result<FinitePath>,
) -> Result<Vec<usize>> {
    let deep = d.enumerate_paths(k + extra, None)?;
    let mut out = vec![0; d.vertices(k + 1).len()];
    for v in 0..out.len() {
        for w in d.enumerate_paths(k, Some(v))? {
            let mut u: Option<Vec<usize>> = None;
            let mut exchange = true;
            for p in deep.iter().filter(|p| p.edges.starts_with(&w.edges)) {
                let img = match f(p) {
                    Ok(q) => q,
                    Err(_) => {
                        exchange = false;
                        break;
                    }
                };
                if img.edges[k..] != p.edges[k..] {
                    exchange = false;
                    break;
                }
                match &u {
                    None => u = Some(img.edges[..k].to_vec()),
                    Some(x) if *x != img.edges[..k] => {
                        exchange = false;
                        break;
                    }
                    _ => {}
                }
            }
            if !exchange {
                out[v] += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Copy, Eq)]
pub enum Extreme {
    Min,
    Max,
}

/// Bratteli diagram with linear orders on the edges entering each vertex
/// (stored in [`Edge::order`]).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedBratteliDiagram {
    pub diagram: BratteliDiagram,
    pub wrap: bool,
}

impl OrderedBratteliDiagram {
    pub fn new(diagram: BratteliDiagram) -> OrderedBratteliDiagram {
        OrderedBratteliDiagram { diagram, wrap: false }
    }

    /// One vertex per level and `k` edges `0..k` ordered by value.
    pub fn odometer(k: usize) -> OrderedBratteliDiagram {
        let edges = (0..k)
            .map(|i| Edge {
                name: std::char::from_digit(i as u32, 36).unwrap().to_string(),
                src: 0,
                dst: 0,
                order: i,
            })
            .collect();
        OrderedBratteliDiagram::new(BratteliDiagram::stationary(vec!["v".into()], edges))
    }

    /// Enables mapping the maximal path to the minimal one.
    pub fn with_wrap(mut self) -> OrderedBratteliDiagram {
        self.wrap = true;
        self
    }

    pub fn extended(&self, n: usize) -> Result<OrderedBratteliDiagram> {
        Ok(OrderedBratteliDiagram {
            diagram: self.diagram.extended(n)?,
            wrap: self.wrap,
        })
    }

    /// The path into `v ∈ V_{n+1}` using only minimal (maximal) edges.
    pub fn extreme_path(&self, n: usize, v: usize, which: Extreme) -> Result<FinitePath> {
        let d = &self.diagram;
        d.need(n)?;
        let mut edges = vec![0; n];
        let mut at = v;
        for i in (0..n).rev() {
            let into = d.edges[i].iter().enumerate().filter(|(_, e)| e.dst == at);
            let (k, e) = match which {
                Extreme::Min => into.min_by_key(|(_, e)| e.order),
                Extreme::Max => into.max_by_key(|(_, e)| e.order),
            }
            .ok_or_else(|| diag("vertex without incoming edges"))?;
            edges[i] = k;
            at = e.src;
        }
        Ok(FinitePath { edges })
    }

    fn is_max_edge(&self, i: usize, k: usize) -> bool {
        let es = &self.diagram.edges[i];
        let e = &es[k];
        !es.iter().any(|f| f.dst == e.dst && f.order > e.order)
    }

    /// The adic successor of a finite path.
    pub fn adic_successor(&self, p: &FinitePath) -> Result<FinitePath> {
        let d = &self.diagram;
        d.check_path(p)?;
        let n = p.len();
        let Some(k) = (0..n).find(|&i| !self.is_max_edge(i, p.edges[i])) else {
            if !self.wrap {
                return Err(diag("the maximal path has no successor"));
            }
            if d.vertices(n + 1).len() != 1 {
                return Err(diag("wrapping needs unique maximal and minimal paths"));
            }
            return self.extreme_path(n, 0, Extreme::Min);
        };
        let e = &d.edges[k][p.edges[k]];
        let (next, _) = d.edges[k]
            .iter()
            .enumerate()
            .filter(|(_, f)| f.dst == e.dst && f.order > e.order)
            .min_by_key(|(_, f)| f.order)
            .expect("non-maximal edge has a successor");
        let src = d.edges[k][next].src;
        let mut edges = self.extreme_path(k, src, Extreme::Min)?.edges;
        edges.push(next);
        edges.extend_from_slice(&p.edges[k + 1..]);
        Ok(FinitePath { edges })
    }

    /// `α_v` of the adic transformation at each vertex of `V_{k+1}`.
    pub fn alpha_v_adic(&self, k: usize) -> Result<Vec<usize>> {
        let d = self.diagram.extended(k + 1)?;
        let o = OrderedBratteliDiagram {
            diagram: d.clone(),
            wrap: false,
        };
        alpha_v_of_map(&d, k, 1, |p| o.adic_successor(p))
    }
}

/// `α_v(g)` for a machine on a diagram with one vertex per level whose edge
/// names are the machine's symbols; keys are levels `1..=upto`.
pub fn alpha_v_profile(
    m: &MachineDef,
    g: &GroupWord,
    d: &BratteliDiagram,
    upto: usize,
) -> Result<BTreeMap<usize, u128>> {
    let d = d.extended(upto)?;
    for i in 1..=upto {
        if d.vertices(i + 1).len() != 1 {
            return Err(diag("only diagrams with one vertex per level are identified with machines"));
        }
        let mut names: Vec<&str> = d.edges(i).iter().map(|e| e.name.as_str()).collect();
        let mut syms: Vec<&str> = m.alphabet().level(i - 1).iter().map(|&s| m.alphabet().name(s)).collect();
        names.sort_unstable();
        syms.sort_unstable();
        if names != syms {
            return Err(diag(format!("edges of level {i} do not match the alphabet")));
        }
    }
    if m.subshift().is_some() {
        return Err(diag("machines with a subshift are not identified with full diagrams"));
    }
    let sg = nontrivial_state_graph(m, g)?;
    let prof = alpha_profile(&sg, upto)?;
    Ok((1..=upto).map(|n| (n, prof[n])).collect())
}
