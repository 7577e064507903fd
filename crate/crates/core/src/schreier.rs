//! Schreier graphs on tree levels and on orbits of boundary rays, the
//! cofinality Følner sets `F_n` with their boundaries, and DOT/CSV export.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::alphabet::Sym;
use crate::caps::Caps;
use crate::engine::apply_word_with;
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::ray::{apply_ray_with, RaySpec};
use crate::word::GroupWord;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Word(Vec<Sym>),
    Ray(RaySpec),
}

impl Point {
    pub fn format(&self, m: &MachineDef) -> String {
        match self {
            Point::Word(w) => m.format_symbols(w),
            Point::Ray(r) => r.format(m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchreierGraph {
    pub points: Vec<Point>,
    pub names: Vec<String>,
    /// Generator labels; inverses of the requested generators are appended.
    pub labels: Vec<String>,
    pub words: Vec<GroupWord>,
    /// False for labels added only to make the set symmetric.
    pub positive: Vec<bool>,
    /// `targets[g][v]`; `None` when the image lies outside a ball.
    pub targets: Vec<Vec<Option<usize>>>,
    pub base: usize,
    pub dist: Vec<usize>,
}

/// Adds missing inverses; the requested words come first, in order.
pub fn symmetrize(m: &MachineDef, gens: &[GroupWord]) -> (Vec<GroupWord>, Vec<String>, Vec<bool>) {
    let mut words: Vec<GroupWord> = Vec::new();
    let mut positive = Vec::new();
    for g in gens {
        let g = g.reduced();
        if !words.contains(&g) {
            words.push(g);
            positive.push(true);
        }
    }
    for i in 0..words.len() {
        let inv = words[i].inverse();
        if !words.contains(&inv) {
            words.push(inv);
            positive.push(false);
        }
    }
    let labels = words.iter().map(|w| m.format_word(w)).collect();
    (words, labels, positive)
}

impl SchreierGraph {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// Vertices at maximal distance (the sphere of a ball).
    pub fn sphere(&self) -> Vec<usize> {
        let r = self.dist.iter().copied().max().unwrap_or(0);
        (0..self.len()).filter(|&v| self.dist[v] == r).collect()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn orbit_partition(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for t in &self.targets {
                    if let Some(u) = t[v] {
                        if comp[u] == usize::MAX {
                            comp[u] = id;
                            members.push(u);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Edges `(src, label, dst)` for the requested generators.
    pub fn positive_edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for (g, t) in self.targets.iter().enumerate() {
            if !self.positive[g] {
                continue;
            }
            for (v, d) in t.iter().enumerate() {
                if let Some(d) = d {
                    e.push((v, g, *d));
                }
            }
        }
        e
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.len()];
        for (v, _, d) in self.positive_edges() {
            if v != d {
                deg[v] += 1;
                deg[d] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Schreier graph on the admissible words of level `n`.
pub fn level_graph(m: &MachineDef, gens: &[GroupWord], n: usize) -> Result<SchreierGraph> {
    level_graph_with(m, gens, n, &Caps::default())
}

pub fn level_graph_with(m: &MachineDef, gens: &[GroupWord], n: usize, caps: &Caps) -> Result<SchreierGraph> {
    let words_n = m.level_words(n, caps.vertices)?;
    let index: HashMap<&[Sym], usize> = words_n.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let (words, labels, positive) = symmetrize(m, gens);
    let mut targets = Vec::with_capacity(words.len());
    for g in &words {
        let mut t = Vec::with_capacity(words_n.len());
        for v in &words_n {
            let img = apply_word_with(m, g, v, caps)?;
            t.push(Some(index[img.as_slice()]));
        }
        targets.push(t);
    }
    let names = words_n.iter().map(|w| m.format_symbols(w)).collect();
    let points: Vec<Point> = words_n.into_iter().map(Point::Word).collect();
    let dist = vec![0; points.len()];
    Ok(SchreierGraph {
        points,
        names,
        labels,
        words,
        positive,
        targets,
        base: 0,
        dist,
    })
}

/// All orbit points within word distance `r` of `p`.
pub fn orbit_ball(m: &MachineDef, gens: &[GroupWord], p: &RaySpec, r: usize) -> Result<SchreierGraph> {
    orbit_ball_with(m, gens, p, r, &Caps::default())
}

pub fn orbit_ball_with(
    m: &MachineDef,
    gens: &[GroupWord],
    p: &RaySpec,
    r: usize,
    caps: &Caps,
) -> Result<SchreierGraph> {
    p.check_admissible(m)?;
    let (words, labels, positive) = symmetrize(m, gens);
    let mut index: HashMap<RaySpec, usize> = HashMap::new();
    let mut rays = vec![p.clone()];
    let mut dist = vec![0usize];
    index.insert(p.clone(), 0);
    let mut images: Vec<Vec<RaySpec>> = Vec::new();
    let mut i = 0;
    while i < rays.len() {
        let x = rays[i].clone();
        let mut row = Vec::with_capacity(words.len());
        for g in &words {
            let y = apply_ray_with(m, g, &x, caps)?;
            if dist[i] < r && !index.contains_key(&y) {
                index.insert(y.clone(), rays.len());
                rays.push(y.clone());
                dist.push(dist[i] + 1);
                if rays.len() > caps.vertices {
                    return Err(Error::CapExceeded {
                        what: "ball vertices",
                        cap: caps.vertices,
                    });
                }
            }
            row.push(y);
        }
        images.push(row);
        i += 1;
    }
    let targets = (0..words.len())
        .map(|g| images.iter().map(|row| index.get(&row[g]).copied()).collect())
        .collect();
    let names = rays.iter().map(|x| x.format(m)).collect();
    Ok(SchreierGraph {
        points: rays.into_iter().map(Point::Ray).collect(),
        names,
        labels,
        words,
        positive,
        targets,
        base: 0,
        dist,
    })
}

#[derive(Debug, Clone)]
pub struct FolnerChain {
    /// Tail representatives used to build the sets.
    pub tails: Vec<RaySpec>,
    /// `sets[k]` is `F_{k+1}`.
    pub sets: Vec<BTreeSet<RaySpec>>,
    pub boundaries: Vec<BTreeSet<RaySpec>>,
}

impl FolnerChain {
    pub fn boundary_sizes(&self) -> Vec<usize> {
        self.boundaries.iter().map(|b| b.len()).collect()
    }

    /// Levels (1-based) selected greedily so that boundaries are pairwise
    /// disjoint.
    pub fn disjoint_subsequence(&self) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut used: BTreeSet<&RaySpec> = BTreeSet::new();
        for (k, b) in self.boundaries.iter().enumerate() {
            if b.iter().all(|x| !used.contains(x)) {
                used.extend(b.iter());
                chosen.push(k + 1);
            }
        }
        chosen
    }

    pub fn is_nested(&self) -> bool {
        self.sets.windows(2).all(|w| w[0].is_subset(&w[1]))
    }
}

fn in_cylinder(x: &RaySpec, tails: &[RaySpec], n: usize) -> bool {
    tails.iter().any(|q| x.agrees_beyond(q, n))
}

/// Component of `p` inside `{u·q[n..] : q ∈ tails}` in the orbit graph.
fn component(
    m: &MachineDef,
    words: &[GroupWord],
    p: &RaySpec,
    tails: &[RaySpec],
    n: usize,
    caps: &Caps,
    escapes: &mut Vec<RaySpec>,
) -> Result<(BTreeSet<RaySpec>, BTreeSet<RaySpec>)> {
    let mut set = BTreeSet::from([p.clone()]);
    let mut boundary = BTreeSet::new();
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in words {
            let y = apply_ray_with(m, g, &x, caps)?;
            if in_cylinder(&y, tails, n) {
                if set.insert(y.clone()) {
                    if set.len() > caps.vertices {
                        return Err(Error::CapExceeded {
                            what: "folner set",
                            cap: caps.vertices,
                        });
                    }
                    queue.push_back(y);
                }
            } else {
                boundary.insert(x.clone());
                escapes.push(y);
            }
        }
    }
    Ok((set, boundary))
}

/// `F_1 ⊂ … ⊂ F_depth` around `p`: points of the orbit that agree with one
/// of finitely many tail representatives beyond position `n`, connected to
/// `p` inside that set. Representatives of tail classes met on the way are
/// added until the set of tails is closed at the deepest level.
pub fn cofinality_folner_sets(m: &MachineDef, gens: &[GroupWord], p: &RaySpec, depth: usize) -> Result<FolnerChain> {
    cofinality_folner_sets_with(m, gens, p, depth, &Caps::default())
}

pub fn cofinality_folner_sets_with(
    m: &MachineDef,
    gens: &[GroupWord],
    p: &RaySpec,
    depth: usize,
    caps: &Caps,
) -> Result<FolnerChain> {
    p.check_admissible(m)?;
    let (words, _, _) = symmetrize(m, gens);
    let mut tails = vec![p.clone()];
    loop {
        let mut escapes = Vec::new();
        component(m, &words, p, &tails, depth, caps, &mut escapes)?;
        let mut grew = false;
        for y in escapes {
            if !tails.iter().any(|q| q.cofinal(&y)) {
                tails.push(y);
                grew = true;
            }
        }
        if !grew {
            break;
        }
        if tails.len() > 64 {
            return Err(Error::CapExceeded {
                what: "tail classes",
                cap: 64,
            });
        }
    }
    chain_from_tails(m, &words, p, tails, depth, caps)
}

/// `F_1 ⊂ … ⊂ F_depth` for a fixed list of tail representatives, e.g. all
/// constant rays.
pub fn tail_folner_sets(
    m: &MachineDef,
    gens: &[GroupWord],
    p: &RaySpec,
    tails: Vec<RaySpec>,
    depth: usize,
) -> Result<FolnerChain> {
    tail_folner_sets_with(m, gens, p, tails, depth, &Caps::default())
}

pub fn tail_folner_sets_with(
    m: &MachineDef,
    gens: &[GroupWord],
    p: &RaySpec,
    tails: Vec<RaySpec>,
    depth: usize,
    caps: &Caps,
) -> Result<FolnerChain> {
    p.check_admissible(m)?;
    if !tails.iter().any(|q| p.agrees_beyond(q, depth)) {
        return Err(Error::Chain(format!(
            "{} does not agree with any tail beyond position {depth}",
            p.format(m)
        )));
    }
    let (words, _, _) = symmetrize(m, gens);
    chain_from_tails(m, &words, p, tails, depth, caps)
}

fn chain_from_tails(
    m: &MachineDef,
    words: &[GroupWord],
    p: &RaySpec,
    tails: Vec<RaySpec>,
    depth: usize,
    caps: &Caps,
) -> Result<FolnerChain> {
    let mut sets = Vec::with_capacity(depth);
    let mut boundaries = Vec::with_capacity(depth);
    for n in 1..=depth {
        let mut set = BTreeSet::new();
        let mut boundary = BTreeSet::new();
        if tails.iter().any(|q| p.agrees_beyond(q, n)) {
            (set, boundary) = component(m, words, p, &tails, n, caps, &mut Vec::new())?;
        }
        sets.push(set);
        boundaries.push(boundary);
    }
    Ok(FolnerChain {
        tails,
        sets,
        boundaries,
    })
}

/// Constant rays `x^ω` over the letters admissible at every depth.
pub fn constant_rays(m: &MachineDef) -> Vec<RaySpec> {
    (0..m.alphabet().symbol_count() as Sym)
        .filter_map(|s| RaySpec::new(Vec::new(), vec![s]).ok())
        .filter(|r| r.check_admissible(m).is_ok())
        .collect()
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub fn to_dot(g: &SchreierGraph) -> String {
    let mut s = String::from("digraph schreier {\n");
    for (v, name) in g.names.iter().enumerate() {
        let _ = writeln!(s, "  n{v} [label=\"{name}\"];");
    }
    for (v, gi, d) in g.positive_edges() {
        let color = PALETTE[gi % PALETTE.len()];
        let _ = writeln!(s, "  n{v} -> n{d} [label=\"{}\", color=\"{color}\"];", g.labels[gi]);
    }
    s.push_str("}\n");
    s
}

pub fn to_csv(g: &SchreierGraph) -> String {
    let mut s = String::from("src,label,dst\n");
    for (gi, t) in g.targets.iter().enumerate() {
        for (v, d) in t.iter().enumerate() {
            if let Some(d) = d {
                let _ = writeln!(s, "{},{},{}", g.names[v], g.labels[gi], g.names[*d]);
            }
        }
    }
    s
}

/// Labeled edge list read back from [`to_csv`] output.
pub fn edges_from_csv(text: &str) -> Result<BTreeSet<(String, String, String)>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some("src,label,dst") {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "expected header `src,label,dst`".into(),
        });
    }
    let mut out = BTreeSet::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(Error::Syntax {
                line: i + 2,
                column: 1,
                message: "expected three fields".into(),
            });
        }
        out.insert((f[0].to_string(), f[1].to_string(), f[2].to_string()));
    }
    Ok(out)
}
