//! Potential theory on orbit balls: Dirichlet problems, conductance
//! profiles, product-of-vectors overlaps, Nash-Williams sums and Følner
//! ratios.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::ray::RaySpec;
use crate::schreier::{orbit_ball_with, FolnerChain, SchreierGraph};
use crate::word::GroupWord;

pub const TOLERANCE: f64 = 1e-10;
pub const CONDUCTANCE_FLOOR: f64 = 1e-6;

/// An undirected multigraph of unit resistors with distances from a base.
#[derive(Debug, Clone)]
pub struct Network {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
    pub base: usize,
    pub dist: Vec<usize>,
}

impl Network {
    pub fn new(size: usize, edges: Vec<(usize, usize)>, base: usize) -> Result<Network> {
        if base >= size || edges.iter().any(|&(x, y)| x >= size || y >= size) {
            return Err(Error::Range("edge endpoint outside the network".into()));
        }
        let adj = adjacency(size, &edges);
        let mut dist = vec![usize::MAX; size];
        dist[base] = 0;
        let mut q = VecDeque::from([base]);
        while let Some(v) = q.pop_front() {
            for &u in &adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            }
        }
        Ok(Network { size, edges, base, dist })
    }

    /// One unit edge per requested generator and point; loops carry no
    /// current and are dropped.
    pub fn from_schreier(g: &SchreierGraph) -> Network {
        let edges = g
            .positive_edges()
            .into_iter()
            .filter(|&(x, _, y)| x != y)
            .map(|(x, _, y)| (x, y))
            .collect();
        Network {
            size: g.len(),
            edges,
            base: g.base,
            dist: g.dist.clone(),
        }
    }

    pub fn path(len: usize) -> Network {
        Network::new(len + 1, (0..len).map(|k| (k, k + 1)).collect(), 0).expect("path")
    }

    /// Rooted binary tree of the given depth, root first.
    pub fn binary_tree(depth: usize) -> Network {
        let size = (1usize << (depth + 1)) - 1;
        let edges = (1..size).map(|v| ((v - 1) / 2, v)).collect();
        Network::new(size, edges, 0).expect("tree")
    }

    /// Vertices within distance `r` of the base, with the induced edges.
    pub fn ball(&self, r: usize) -> (Network, Vec<usize>) {
        let keep: Vec<usize> = (0..self.size).filter(|&v| self.dist[v] <= r).collect();
        let mut index = vec![usize::MAX; self.size];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(x, y)| index[x] != usize::MAX && index[y] != usize::MAX)
            .map(|&(x, y)| (index[x], index[y]))
            .collect();
        let net = Network {
            size: keep.len(),
            edges,
            base: index[self.base],
            dist: keep.iter().map(|&v| self.dist[v]).collect(),
        };
        (net, keep)
    }

    pub fn sphere(&self, r: usize) -> Vec<usize> {
        (0..self.size).filter(|&v| self.dist[v] == r).collect()
    }

    pub fn energy(&self, a: &[f64]) -> f64 {
        self.edges.iter().map(|&(x, y)| (a[x] - a[y]).powi(2)).sum()
    }

    pub fn without_edge(&self, k: usize) -> Network {
        let mut edges = self.edges.clone();
        edges.remove(k);
        Network {
            size: self.size,
            edges,
            base: self.base,
            dist: self.dist.clone(),
        }
    }
}

fn adjacency(size: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); size];
    for &(x, y) in edges {
        if x != y {
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    adj
}

#[derive(Debug, Clone)]
pub struct Potential {
    pub values: Vec<f64>,
    pub energy: f64,
    /// Current leaving the base.
    pub current: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Base,
    Grounded,
    Free(usize),
}

fn roles(net: &Network, grounded: &[usize]) -> Result<(Vec<Role>, usize)> {
    if grounded.is_empty() {
        return Err(Error::Singular("no grounded vertices".into()));
    }
    let mut role = vec![Role::Free(0); net.size];
    for &v in grounded {
        if v >= net.size {
            return Err(Error::Range(format!("vertex {v} outside the network")));
        }
        if v == net.base {
            return Err(Error::Singular("the base is grounded".into()));
        }
        role[v] = Role::Grounded;
    }
    role[net.base] = Role::Base;
    // every free vertex must reach a fixed one, and the base must reach ground
    let adj = adjacency(net.size, &net.edges);
    let mut reach = vec![false; net.size];
    let mut q: VecDeque<usize> = grounded.iter().copied().collect();
    for &v in grounded {
        reach[v] = true;
    }
    while let Some(v) = q.pop_front() {
        for &u in &adj[v] {
            if !reach[u] {
                reach[u] = true;
                if role[u] != Role::Base {
                    q.push_back(u);
                }
            }
        }
    }
    if !reach[net.base] {
        return Err(Error::Singular("the base is not connected to the grounded set".into()));
    }
    let mut free = 0;
    for v in 0..net.size {
        if let Role::Free(_) = role[v] {
            if !reach[v] && !adj[v].iter().any(|&u| role[u] == Role::Base) && !connected_to_base(v, &adj, &role) {
                return Err(Error::Singular(format!("vertex {v} is disconnected")));
            }
            role[v] = Role::Free(free);
            free += 1;
        }
    }
    Ok((role, free))
}

fn connected_to_base(v: usize, adj: &[Vec<usize>], role: &[Role]) -> bool {
    let mut seen = BTreeSet::from([v]);
    let mut q = VecDeque::from([v]);
    while let Some(x) = q.pop_front() {
        for &u in &adj[x] {
            match role[u] {
                Role::Base | Role::Grounded => return true,
                Role::Free(_) => {
                    if seen.insert(u) {
                        q.push_back(u);
                    }
                }
            }
        }
    }
    false
}

/// The harmonic function equal to 1 at the base and 0 on `grounded`,
/// computed by conjugate gradients and clamped to `[0, 1]`.
pub fn dirichlet_solve(net: &Network, grounded: &[usize]) -> Result<Potential> {
    let (role, free) = roles(net, grounded)?;
    // reduced Laplacian on free vertices: diagonal plus off-diagonal pairs
    let mut diag = vec![0f64; free];
    let mut off: Vec<(usize, usize)> = Vec::new();
    let mut rhs = vec![0f64; free];
    for &(x, y) in &net.edges {
        if x == y {
            continue;
        }
        for (p, q) in [(x, y), (y, x)] {
            if let Role::Free(i) = role[p] {
                diag[i] += 1.0;
                match role[q] {
                    Role::Free(j) => off.push((i, j)),
                    Role::Base => rhs[i] += 1.0,
                    Role::Grounded => {}
                }
            }
        }
    }
    let apply = |v: &[f64], out: &mut [f64]| {
        for i in 0..free {
            out[i] = diag[i] * v[i];
        }
        for &(i, j) in &off {
            out[i] -= v[j];
        }
    };
    let mut x = vec![0f64; free];
    let mut r = rhs.clone();
    let mut p = r.clone();
    let mut ap = vec![0f64; free];
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    let cap = 10 * net.size.max(1);
    let mut it = 0;
    while rr.sqrt() > TOLERANCE {
        if it >= cap {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: rr.sqrt(),
            });
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rr / pap;
        for i in 0..free {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let next: f64 = r.iter().map(|v| v * v).sum();
        let beta = next / rr;
        rr = next;
        for i in 0..free {
            p[i] = r[i] + beta * p[i];
        }
        it += 1;
    }
    // true residual of the unclamped solution
    let mut lx = vec![0f64; free];
    apply(&x, &mut lx);
    let residual = lx.iter().zip(&rhs).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let values: Vec<f64> = role
        .iter()
        .map(|r| match r {
            Role::Base => 1.0,
            Role::Grounded => 0.0,
            Role::Free(i) => x[*i].clamp(0.0, 1.0),
        })
        .collect();
    let energy = net.energy(&values);
    let current = net
        .edges
        .iter()
        .map(|&(x, y)| {
            if x == net.base && y != x {
                values[x] - values[y]
            } else if y == net.base && x != y {
                values[y] - values[x]
            } else {
                0.0
            }
        })
        .sum();
    Ok(Potential {
        values,
        energy,
        current,
        residual,
        iterations: it,
    })
}

/// The same Dirichlet problem by exact rational elimination.
pub fn dirichlet_exact(net: &Network, grounded: &[usize]) -> Result<Vec<BigRational>> {
    if net.size > 500 {
        return Err(Error::CapExceeded {
            what: "exact elimination vertices",
            cap: 500,
        });
    }
    let (role, free) = roles(net, grounded)?;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut a = vec![vec![zero.clone(); free + 1]; free];
    for &(x, y) in &net.edges {
        if x == y {
            continue;
        }
        for (p, q) in [(x, y), (y, x)] {
            if let Role::Free(i) = role[p] {
                a[i][i] += &one;
                match role[q] {
                    Role::Free(j) => a[i][j] -= &one,
                    Role::Base => a[i][free] += &one,
                    Role::Grounded => {}
                }
            }
        }
    }
    for col in 0..free {
        let pivot = (col..free)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Singular("singular Laplacian".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for k in col..=free {
            a[col][k] = &a[col][k] * &inv;
        }
        for r in 0..free {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=free {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Ok(role
        .iter()
        .map(|r| match r {
            Role::Base => one.clone(),
            Role::Grounded => zero.clone(),
            Role::Free(i) => a[*i][free].clone(),
        })
        .collect())
}

/// `Σ (a_x − a_y)²` in exact arithmetic.
pub fn exact_energy(net: &Network, a: &[BigRational]) -> BigRational {
    net.edges
        .iter()
        .map(|&(x, y)| {
            let d = &a[x] - &a[y];
            &d * &d
        })
        .fold(BigRational::zero(), |s, t| s + t)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() && a.is_finite() => a / b,
        _ => {
            let scale = BigInt::from(1u64 << 52);
            ((n * &scale) / d).to_f64().unwrap_or(f64::NAN) / (1u64 << 52) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedRecurrent,
    RecurrenceConsistent,
    TransienceConsistent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedRecurrent => "certified-recurrent",
            Verdict::RecurrenceConsistent => "recurrence-consistent",
            Verdict::TransienceConsistent => "transience-consistent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CapacityProfile {
    pub radii: Vec<usize>,
    pub energies: Vec<f64>,
    pub conductances: Vec<f64>,
    pub residuals: Vec<f64>,
    /// The orbit is finite and was exhausted before the last radius.
    pub truncated: bool,
    pub verdict: Verdict,
}

impl CapacityProfile {
    pub fn capacities(&self) -> Vec<f64> {
        self.conductances.iter().map(|c| c.sqrt()).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.conductances.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("radius,energy,conductance,residual\n");
        for i in 0..self.radii.len() {
            s.push_str(&format!(
                "{},{:.12},{:.12},{:.3e}\n",
                self.radii[i], self.energies[i], self.conductances[i], self.residuals[i]
            ));
        }
        s
    }
}

/// Conductance from the base to the sphere of each radius.
pub fn network_profile(net: &Network, radii: &[usize]) -> Result<CapacityProfile> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] == 0 {
        return Err(Error::Range("radii must be positive and increasing".into()));
    }
    let mut prof = CapacityProfile {
        radii: Vec::new(),
        energies: Vec::new(),
        conductances: Vec::new(),
        residuals: Vec::new(),
        truncated: false,
        verdict: Verdict::Inconclusive,
    };
    for &r in radii {
        let (ball, _) = net.ball(r);
        let sphere = ball.sphere(r);
        prof.radii.push(r);
        if sphere.is_empty() {
            // nothing escapes a finite orbit
            prof.energies.push(0.0);
            prof.conductances.push(0.0);
            prof.residuals.push(0.0);
            prof.truncated = true;
            break;
        }
        let pot = dirichlet_solve(&ball, &sphere)?;
        prof.energies.push(pot.energy);
        prof.conductances.push(pot.energy);
        prof.residuals.push(pot.residual);
    }
    prof.verdict = trend_verdict(&prof);
    Ok(prof)
}

/// Evidence only: a finite orbit or a conductance below the floor is
/// recurrence-consistent; a decay whose geometric extrapolation stays above
/// the floor is transience-consistent; any other decay is
/// recurrence-consistent.
fn trend_verdict(p: &CapacityProfile) -> Verdict {
    let c = &p.conductances;
    let last = match c.last() {
        Some(&x) => x,
        None => return Verdict::Inconclusive,
    };
    if p.truncated || last < CONDUCTANCE_FLOOR {
        return Verdict::RecurrenceConsistent;
    }
    let k = c.len();
    if k < 3 {
        return Verdict::Inconclusive;
    }
    let d1 = c[k - 2] - c[k - 1];
    let d0 = c[k - 3] - c[k - 2];
    if d1 <= 1e-12 * last {
        return Verdict::TransienceConsistent;
    }
    if d0 > 0.0 {
        let q = d1 / d0;
        if q < 0.5 {
            let limit = last - d1 * q / (1.0 - q);
            if limit > CONDUCTANCE_FLOOR && limit >= 0.5 * last {
                return Verdict::TransienceConsistent;
            }
        }
    }
    if last < c[0] {
        Verdict::RecurrenceConsistent
    } else {
        Verdict::Inconclusive
    }
}

/// Conductance profile of the orbital Schreier graph around `p`.
pub fn capacity_profile(m: &MachineDef, gens: &[GroupWord], p: &RaySpec, radii: &[usize]) -> Result<CapacityProfile> {
    capacity_profile_with(m, gens, p, radii, &Caps::default())
}

pub fn capacity_profile_with(
    m: &MachineDef,
    gens: &[GroupWord],
    p: &RaySpec,
    radii: &[usize],
    caps: &Caps,
) -> Result<CapacityProfile> {
    let r = radii.iter().copied().max().unwrap_or(0);
    let g = orbit_ball_with(m, gens, p, r, caps)?;
    network_profile(&Network::from_schreier(&g), radii)
}

/// `ξ_t = (√2 cos(tπ/4), √2 sin(tπ/4))`.
pub fn xi(t: f64) -> [f64; 2] {
    let s = std::f64::consts::SQRT_2;
    [s * (t * PI / 4.0).cos(), s * (t * PI / 4.0).sin()]
}

/// Inner product on functions on a two-point set with uniform measure.
pub fn xi_overlap(s: f64, t: f64) -> f64 {
    let (a, b) = (xi(s), xi(t));
    (a[0] * b[0] + a[1] * b[1]) / 2.0
}

#[derive(Debug, Clone)]
pub struct PirReport {
    pub labels: Vec<String>,
    pub overlaps: Vec<f64>,
    /// `exp(−π²/16 · E_g)` with `E_g` the energy along the edges of `g`.
    pub edge_bounds: Vec<f64>,
    /// `exp(−π²/16 · E)` with `E` the full Dirichlet energy.
    pub bound: f64,
    pub energy: f64,
}

impl PirReport {
    pub fn holds(&self) -> bool {
        self.overlaps
            .iter()
            .zip(&self.edge_bounds)
            .all(|(o, b)| *o > 0.0 && *o <= 1.0 + 1e-12 && *o + 1e-12 >= *b && *o + 1e-12 >= self.bound)
    }
}

/// `⟨g f, f⟩ = ∏_x ⟨ξ_{a_x}, ξ_{a_{g x}}⟩ = ∏_x cos(π/4 (a_x − a_{g x}))`
/// for every requested generator, with `a` extended by zero outside the
/// graph.
pub fn pir_overlap_report(g: &SchreierGraph, a: &[f64]) -> Result<PirReport> {
    if a.len() != g.len() {
        return Err(Error::Range("potential length differs from the graph".into()));
    }
    if let Some(x) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Range(format!("potential value {x} outside [0, 1]")));
    }
    let mut rep = PirReport {
        labels: Vec::new(),
        overlaps: Vec::new(),
        edge_bounds: Vec::new(),
        bound: 0.0,
        energy: 0.0,
    };
    let mut total = 0.0;
    for (k, t) in g.targets.iter().enumerate() {
        if !g.positive[k] {
            continue;
        }
        let inv = g.words[k].inverse();
        let back = g.words.iter().position(|w| *w == inv);
        let mut log = 0.0f64;
        let mut e = 0.0;
        let mut factor = |s: f64, u: f64| {
            log += (PI / 4.0 * (s - u)).cos().ln();
            e += (s - u).powi(2);
        };
        for x in 0..g.len() {
            factor(a[x], t[x].map_or(0.0, |y| a[y]));
        }
        // points outside the graph mapped into it
        if let Some(b) = back {
            for y in 0..g.len() {
                if g.targets[b][y].is_none() {
                    factor(0.0, a[y]);
                }
            }
        }
        rep.labels.push(g.labels[k].clone());
        rep.overlaps.push(log.exp());
        rep.edge_bounds.push((-PI * PI / 16.0 * e).exp());
        total += e;
    }
    rep.energy = total;
    rep.bound = (-PI * PI / 16.0 * total).exp();
    Ok(rep)
}

/// Checks `cos x ≥ e^{−x²}` on `points` evenly spaced values of `|x| ≤ π/4`.
pub fn cos_exp_inequality(points: usize) -> bool {
    (0..points).all(|i| {
        let x = -PI / 4.0 + PI / 2.0 * i as f64 / (points.max(2) - 1) as f64;
        x.cos() >= (-x * x).exp()
    })
}

#[derive(Debug, Clone)]
pub struct NashWilliamsReport {
    /// Levels used, after making boundaries disjoint.
    pub levels: Vec<usize>,
    pub boundary: Vec<usize>,
    pub partial_sums: Vec<f64>,
    /// Fitted envelope constant: `|∂F_j| ≤ envelope · j`, or `≤ envelope`
    /// when `bounded`.
    pub envelope: f64,
    pub bounded: bool,
    pub verdict: Verdict,
}

impl NashWilliamsReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,boundary,partial_sum\n");
        for i in 0..self.levels.len() {
            s.push_str(&format!("{},{},{:.12}\n", self.levels[i], self.boundary[i], self.partial_sums[i]));
        }
        s
    }
}

/// Partial sums of `Σ 1/|∂F_n|` over a disjoint subsequence of the chain.
pub fn nash_williams_certify(chain: &FolnerChain) -> Result<NashWilliamsReport> {
    if !chain.is_nested() {
        return Err(Error::Chain("sets are not nested".into()));
    }
    let levels = chain.disjoint_subsequence();
    let mut seen = BTreeSet::new();
    for &n in &levels {
        for x in &chain.boundaries[n - 1] {
            if !seen.insert(x) {
                return Err(Error::Chain("boundaries are not disjoint".into()));
            }
        }
    }
    let sizes: Vec<usize> = levels.iter().map(|&n| chain.boundaries[n - 1].len()).collect();
    let mut rep = nash_williams_from_sizes(&sizes)?;
    rep.levels = levels;
    Ok(rep)
}

/// The verdict for boundary sizes of nested sets with disjoint boundaries.
/// The envelope is fitted on the first half of the terms and must hold on
/// the second half.
pub fn nash_williams_from_sizes(sizes: &[usize]) -> Result<NashWilliamsReport> {
    if sizes.contains(&0) {
        return Err(Error::Chain("empty boundary: the set is a whole orbit".into()));
    }
    let mut partial_sums = Vec::with_capacity(sizes.len());
    let mut s = 0.0;
    for &b in sizes {
        s += 1.0 / b as f64;
        partial_sums.push(s);
    }
    let k = sizes.len();
    let half = k.div_ceil(2);
    let max_first = sizes[..half].iter().copied().max().unwrap_or(0);
    let bounded = k >= 2 && sizes[half..].iter().all(|&b| b <= max_first);
    let ratio = |j: usize| sizes[j] as f64 / (j + 1) as f64;
    let c_first = (0..half).map(ratio).fold(0.0, f64::max);
    let linear = k >= 2 && (half..k).all(|j| ratio(j) <= c_first + 1e-12);
    let (envelope, verdict) = if bounded {
        (max_first as f64, Verdict::CertifiedRecurrent)
    } else if linear {
        (c_first, Verdict::CertifiedRecurrent)
    } else {
        ((0..k).map(ratio).fold(0.0, f64::max), Verdict::Inconclusive)
    };
    Ok(NashWilliamsReport {
        levels: (1..=k).collect(),
        boundary: sizes.to_vec(),
        partial_sums,
        envelope,
        bounded,
        verdict,
    })
}

/// `Σ_{g∈S} |gF Δ F| / |F|` over the generators of the graph (both
/// orientations), as an exact ratio.
pub fn folner_quality(g: &SchreierGraph, f: &BTreeSet<usize>) -> Result<Ratio<u64>> {
    if f.is_empty() {
        return Err(Error::Range("empty set".into()));
    }
    if let Some(x) = f.iter().find(|&&x| x >= g.len()) {
        return Err(Error::Range(format!("vertex {x} outside the graph")));
    }
    let mut sym = 0u64;
    for t in &g.targets {
        let out = f.iter().filter(|&&x| t[x].is_none_or(|y| !f.contains(&y))).count() as u64;
        sym += 2 * out;
    }
    Ok(Ratio::new(sym, f.len() as u64))
}

pub fn is_folner(g: &SchreierGraph, f: &BTreeSet<usize>, eps: f64) -> Result<bool> {
    let q = folner_quality(g, f)?;
    Ok((*q.numer() as f64) < eps * *q.denom() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::zoo_build;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(r: usize) -> Network {
        // 0, 1, -1, 2, -2, ...
        let idx = |k: i64| if k > 0 { 2 * k as usize - 1 } else { (-2 * k) as usize };
        let mut edges = Vec::new();
        for k in -(r as i64)..(r as i64) {
            edges.push((idx(k), idx(k + 1)));
        }
        Network::new(2 * r + 1, edges, 0).unwrap()
    }

    #[test]
    fn linear_ramp() {
        let net = Network::path(8);
        let pot = dirichlet_solve(&net, &[8]).unwrap();
        for k in 0..=8 {
            assert!((pot.values[k] - (1.0 - k as f64 / 8.0)).abs() < 1e-10);
        }
        let exact = dirichlet_exact(&net, &[8]).unwrap();
        assert_eq!(exact[3], BigRational::new(5.into(), 8.into()));
    }

    #[test]
    fn adjacent_sphere_and_star() {
        let net = Network::new(3, vec![(0, 1), (0, 2)], 0).unwrap();
        let pot = dirichlet_solve(&net, &[1, 2]).unwrap();
        assert_eq!(pot.values, vec![1.0, 0.0, 0.0]);
        let m = 7;
        let star = Network::new(m + 1, (1..=m).map(|v| (0, v)).collect(), 0).unwrap();
        let leaves: Vec<usize> = (1..=m).collect();
        assert!((dirichlet_solve(&star, &leaves).unwrap().energy - m as f64).abs() < 1e-12);
    }

    #[test]
    fn integer_line_conductance() {
        for r in [4usize, 8, 16, 32, 64] {
            let net = ints(r);
            let pot = dirichlet_solve(&net, &net.sphere(r)).unwrap();
            assert!((pot.energy - 2.0 / r as f64).abs() < 1e-9);
            assert!((pot.current - pot.energy).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_systems() {
        let net = Network::new(4, vec![(0, 1), (2, 3)], 0).unwrap();
        assert!(matches!(dirichlet_solve(&net, &[1]), Err(Error::Singular(_))));
        assert!(matches!(dirichlet_solve(&net, &[3]), Err(Error::Singular(_))));
        assert!(matches!(dirichlet_solve(&net, &[]), Err(Error::Singular(_))));
    }

    fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Network {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        for _ in 0..rng.gen_range(0..n) {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if x != y {
                edges.push((x, y));
            }
        }
        Network::new(n, edges, 0).unwrap()
    }

    #[test]
    fn iterative_matches_exact_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(3..=12);
            let net = random_connected(&mut rng, n);
            let grounded: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.3)).collect();
            let grounded = if grounded.is_empty() { vec![n - 1] } else { grounded };
            let pot = dirichlet_solve(&net, &grounded).unwrap();
            let exact = dirichlet_exact(&net, &grounded).unwrap();
            for v in 0..n {
                assert!((pot.values[v] - rational_to_f64(&exact[v])).abs() < 1e-10);
            }
            assert!((pot.energy - rational_to_f64(&exact_energy(&net, &exact))).abs() < 1e-10);
        }
    }

    // brute-force minimum of the energy over a grid of potentials
    fn grid_min(net: &Network, grounded: &[usize], steps: usize) -> f64 {
        let free: Vec<usize> = (0..net.size).filter(|v| *v != net.base && !grounded.contains(v)).collect();
        let mut a = vec![0.0; net.size];
        a[net.base] = 1.0;
        let mut best = f64::INFINITY;
        let total = (steps + 1).pow(free.len() as u32);
        for code in 0..total {
            let mut c = code;
            for &v in &free {
                a[v] = (c % (steps + 1)) as f64 / steps as f64;
                c /= steps + 1;
            }
            best = best.min(net.energy(&a));
        }
        best
    }

    #[test]
    fn rayleigh_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.gen_range(3..=5);
            let net = random_connected(&mut rng, n);
            let grounded = vec![n - 1];
            let full = dirichlet_solve(&net, &grounded).unwrap().energy;
            assert!(full <= grid_min(&net, &grounded, 20) + 1e-12);
            for k in 0..net.edges.len() {
                let cut = net.without_edge(k);
                if let Ok(p) = dirichlet_solve(&cut, &grounded) {
                    assert!(p.energy <= full + 1e-10);
                }
            }
        }
    }

    #[test]
    fn binary_tree_is_transience_consistent() {
        let prof = network_profile(&Network::binary_tree(16), &[1, 2, 4, 8, 16]).unwrap();
        assert!(prof.conductances.iter().all(|&c| c >= 0.1));
        assert!(prof.is_monotone());
        assert_eq!(prof.verdict, Verdict::TransienceConsistent);
    }

    #[test]
    fn finite_orbit_truncates() {
        let prof = network_profile(&Network::path(3), &[1, 2, 4, 8]).unwrap();
        assert!(prof.truncated);
        assert_eq!(*prof.conductances.last().unwrap(), 0.0);
        assert_eq!(prof.verdict, Verdict::RecurrenceConsistent);
    }

    #[test]
    fn henon_tau_orbit_is_a_line() {
        let e = zoo_build("henon", "").unwrap();
        let m = &e.machine;
        let p = RaySpec::parse(m, ":0").unwrap();
        let prof = capacity_profile(m, &[m.word("t").unwrap()], &p, &[4, 8, 16]).unwrap();
        for (r, c) in prof.radii.iter().zip(&prof.conductances) {
            assert!((c - 2.0 / *r as f64).abs() < 1e-9);
        }
        assert_eq!(prof.verdict, Verdict::RecurrenceConsistent);
    }

    #[test]
    fn overlaps() {
        let e = zoo_build("odometer", "").unwrap();
        let m = &e.machine;
        let p = RaySpec::parse(m, ":0").unwrap();
        let g = orbit_ball_with(m, &[m.word("t").unwrap()], &p, 8, &Caps::default()).unwrap();
        let rep = pir_overlap_report(&g, &vec![0.0; g.len()]).unwrap();
        assert_eq!(rep.overlaps, vec![1.0]);
        let net = Network::from_schreier(&g);
        let pot = dirichlet_solve(&net, &net.sphere(8)).unwrap();
        let rep = pir_overlap_report(&g, &pot.values).unwrap();
        let expected = (PI / 32.0).cos().powi(16);
        assert!((rep.overlaps[0] - expected).abs() < 1e-12);
        assert!(rep.overlaps[0] >= (-PI * PI / 16.0 * 2.0 / 8.0).exp());
        assert!(rep.holds());
        let mut bad = pot.values.clone();
        bad[0] = 1.5;
        assert!(pir_overlap_report(&g, &bad).is_err());
        assert!((xi_overlap(1.0, 0.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        for (s, t) in [(0.3, 0.9), (1.0, 0.25), (0.5, 0.5)] {
            assert!((xi_overlap(s, t) - (PI / 4.0 * (s - t)).cos()).abs() < 1e-15);
        }
        assert!(cos_exp_inequality(10_000));
    }

    #[test]
    fn nash_williams_examples() {
        let r = nash_williams_from_sizes(&[2; 10]).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedRecurrent);
        assert!((r.partial_sums[9] - 5.0).abs() < 1e-12);
        let geo: Vec<usize> = (1..=10).map(|n| 4usize.pow(n)).collect();
        assert_eq!(nash_williams_from_sizes(&geo).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn folner_ratios() {
        let e = zoo_build("odometer", "").unwrap();
        let m = &e.machine;
        let p = RaySpec::parse(m, ":0").unwrap();
        let g = orbit_ball_with(m, &[m.word("t").unwrap()], &p, 10, &Caps::default()).unwrap();
        for n in [1usize, 3, 6] {
            let f: BTreeSet<usize> = (0..g.len()).filter(|&v| g.dist[v] <= n).collect();
            assert_eq!(folner_quality(&g, &f).unwrap(), Ratio::new(4, 2 * n as u64 + 1));
        }
        assert_eq!(folner_quality(&g, &BTreeSet::from([0])).unwrap(), Ratio::from_integer(4));
        assert!(folner_quality(&g, &BTreeSet::new()).is_err());
        let lvl = crate::schreier::level_graph(m, &[m.word("t").unwrap()], 3).unwrap();
        let all: BTreeSet<usize> = (0..lvl.len()).collect();
        assert_eq!(folner_quality(&lvl, &all).unwrap(), Ratio::from_integer(0));
    }
}
