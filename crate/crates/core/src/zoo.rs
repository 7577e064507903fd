//! Concrete groups and systems, each with machine-checkable claims.

use std::collections::BTreeMap;

use crate::activity::{alpha_profile, classify_activity, nontrivial_state_graph, ActivityClass};
use crate::alphabet::{Alphabet, Sym};
use crate::bratteli::OrderedBratteliDiagram;
use crate::engine::apply_word;
use crate::error::{Error, Result};
use crate::machine::{MachineBuilder, MachineDef};
use crate::schreier::level_graph;
use crate::triviality::{is_trivial_to_depth, state_closure};
use crate::word::GroupWord;

/// An expectation about a zoo entry, checkable with the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Claim {
    /// The activity class of an element.
    Activity { element: String, class: ActivityClass },
    /// Finitary or bounded activity, whichever applies.
    BoundedType { element: String },
    /// `α_n(element) = value` for `1 ≤ n ≤ upto`.
    AlphaConstant { element: String, value: u128, upto: usize },
    /// The state closure of the listed elements and their inverses is finite.
    FiniteClosure { elements: Vec<String> },
    /// The element acts trivially on level `depth`.
    TrivialToDepth { element: String, depth: usize },
    /// Two generating sets have the same orbits on levels `1..=upto`.
    SameOrbits { left: Vec<String>, right: Vec<String>, upto: usize },
    /// The binary machine agrees with the integer action on `[-2^bits, 2^bits]`.
    IntegerAction { bits: usize },
}

#[derive(Debug, Clone)]
pub struct ZooEntry {
    pub name: String,
    pub description: String,
    pub machine: MachineDef,
    pub diagram: Option<OrderedBratteliDiagram>,
    pub params: BTreeMap<String, String>,
    /// ASCII name, conventional name.
    pub aliases: Vec<(String, String)>,
    pub claims: Vec<Claim>,
    /// Rules taken from the standard literature rather than the catalog.
    pub externally_sourced: bool,
}

pub const NAMES: [&str; 13] = [
    "basilica",
    "henon",
    "mating_img",
    "fibonacci",
    "penrose",
    "penrose_prime",
    "zb_line",
    "neumann_segal",
    "poly_iteration_r",
    "poly_iteration_ab",
    "odometer",
    "grigorchuk",
    "identity",
];

pub fn zoo_names() -> &'static [&'static str] {
    &NAMES
}

fn parse_params(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Params(format!("expected key=value, got `{part}`")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn binary() -> Alphabet {
    Alphabet::uniform(&["0", "1"]).expect("binary alphabet")
}

fn entry(name: &str, description: &str, machine: MachineDef) -> ZooEntry {
    ZooEntry {
        name: name.to_string(),
        description: description.to_string(),
        machine,
        diagram: None,
        params: BTreeMap::new(),
        aliases: Vec::new(),
        claims: Vec::new(),
        externally_sourced: false,
    }
}

fn activity(element: &str, class: ActivityClass) -> Claim {
    Claim::Activity {
        element: element.to_string(),
        class,
    }
}

/// Builds a zoo entry; `params` is a comma-separated `key=value` list.
pub fn zoo_build(name: &str, params: &str) -> Result<ZooEntry> {
    let p = parse_params(params)?;
    let allowed: &[&str] = match name {
        "neumann_segal" => &["orders"],
        "poly_iteration_r" | "poly_iteration_ab" => &["w"],
        _ => &[],
    };
    if let Some(k) = p.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Params(format!("`{name}` takes no parameter `{k}`")));
    }
    let mut e = match name {
        "basilica" => basilica()?,
        "henon" => henon()?,
        "mating_img" => mating_img()?,
        "fibonacci" => fibonacci()?,
        "penrose" => penrose()?,
        "penrose_prime" => penrose_prime()?,
        "zb_line" => zb_line()?,
        "neumann_segal" => neumann_segal(p.get("orders").map_or("2:3", String::as_str))?,
        "poly_iteration_r" => poly_iteration_r(p.get("w").map_or("0:1", String::as_str))?,
        "poly_iteration_ab" => poly_iteration_ab(p.get("w").map_or("0:1", String::as_str))?,
        "odometer" => odometer()?,
        "grigorchuk" => grigorchuk()?,
        "identity" => identity()?,
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    for (k, v) in p {
        e.params.insert(k, v);
    }
    Ok(e)
}

fn basilica() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("a", "0", "1", "e")?
        .rule("a", "1", "0", "b")?
        .rule("b", "0", "0", "e")?
        .rule("b", "1", "1", "a")?;
    let mut e = entry("basilica", "Basilica group, IMG(z^2 - 1)", b.build()?);
    for g in ["a", "b"] {
        e.claims.push(Claim::AlphaConstant {
            element: g.into(),
            value: 1,
            upto: 16,
        });
        e.claims.push(activity(g, ActivityClass::Bounded));
    }
    Ok(e)
}

fn henon() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("al", "0", "1", "~al")?
        .rule("al", "1", "0", "be")?
        .rule("be", "0", "1", "ga")?
        .rule("be", "1", "0", "t")?
        .rule("ga", "00", "11", "~t")?
        .rule("ga", "11", "00", "t")?
        .rule("ga", "10", "10", "e")?
        .rule("ga", "01", "01", "e")?
        .rule("t", "0", "1", "e")?
        .rule("t", "1", "0", "t")?;
    let mut e = entry("henon", "holonomy generators of a Henon map", b.build()?);
    e.aliases = vec![
        ("al".into(), "alpha".into()),
        ("be".into(), "beta".into()),
        ("ga".into(), "gamma".into()),
        ("t".into(), "tau".into()),
    ];
    e.claims.push(Claim::FiniteClosure {
        elements: vec!["al".into(), "be".into(), "ga".into(), "t".into()],
    });
    e.claims.push(activity("al", ActivityClass::Polynomial(1)));
    e.claims.push(activity("be", ActivityClass::Polynomial(1)));
    e.claims.push(activity("ga", ActivityClass::Bounded));
    e.claims.push(activity("t", ActivityClass::Bounded));
    Ok(e)
}

fn mating_img() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("a", "0", "1", "e")?
        .rule("a", "1", "0", "e")?
        .rule("b", "0", "0", "e")?
        .rule("b", "1", "1", "a")?
        .rule("bp", "0", "0", "c cp a b bp")?
        .rule("bp", "1", "1", "e")?
        .rule("c", "0", "0", "c")?
        .rule("c", "1", "1", "b")?
        .rule("cp", "0", "0", "cp")?
        .rule("cp", "1", "1", "bp")?;
    let mut e = entry("mating_img", "iterated monodromy group of a mating", b.build()?);
    e.aliases = vec![
        ("bp".into(), "b'".into()),
        ("cp".into(), "c'".into()),
        ("b bp".into(), "B".into()),
        ("c cp".into(), "C".into()),
    ];
    e.claims.push(Claim::SameOrbits {
        left: vec!["a".into(), "b".into(), "c".into(), "bp".into(), "cp".into()],
        right: vec!["a".into(), "b bp".into(), "c cp".into()],
        upto: 6,
    });
    Ok(e)
}

/// Alphabet and allowed transitions of Fibonacci itineraries.
pub const FIBONACCI_PAIRS: [(&str, &str); 5] = [("a0", "a1"), ("a1", "a0"), ("a1", "b"), ("b", "a0"), ("b", "a1")];

fn fibonacci() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(Alphabet::uniform(&["a0", "a1", "b"])?);
    b.subshift(&["a0", "a1", "b"], &FIBONACCI_PAIRS)?;
    // the shift
    b.rule("t", "a0", "b", "e")?
        .rule("t", "b", "a1", "t")?
        .rule("t", "a1 a0", "b", "e")?
        .rule("t", "a1 b", "a0", "t")?;
    // restrictions of the shift to the three cylinders, made involutive
    b.rule("al0", "a0", "b", "e")?
        .rule("al0", "b a1", "a0", "e")?
        .rule("al0", "b a0", "b", "e")?
        .rule("al0", "a1", "a1", "e")?;
    b.rule("al1", "a1 a0", "b", "e")?
        .rule("al1", "a1 b", "a0", "t")?
        .rule("al1", "b a0", "a1", "e")?
        .rule("al1", "a0", "a1", "~t")?
        .rule("al1", "b a1", "b", "e")?;
    b.rule("be", "b", "a1", "t")?
        .rule("be", "a1", "b", "~t")?
        .rule("be", "a0", "a0", "e")?;
    let mut e = entry("fibonacci", "itineraries of the Fibonacci tiling", b.build()?);
    e.aliases = vec![
        ("t".into(), "tau".into()),
        ("al0".into(), "alpha_0".into()),
        ("al1".into(), "alpha_1".into()),
        ("be".into(), "beta".into()),
    ];
    Ok(e)
}

/// Fibonacci word `ψ^∞(a)` for `ψ: a ↦ ab, b ↦ a`, truncated to `len`.
pub fn fibonacci_word(len: usize) -> Vec<u8> {
    let mut w = vec![b'a'];
    while w.len() < len {
        w = w
            .iter()
            .flat_map(|&c| if c == b'a' { vec![b'a', b'b'] } else { vec![b'a'] })
            .collect();
    }
    w.truncate(len);
    w
}

/// Reconstructs, from an itinerary prefix `x_1 … x_n`, the block `ψ^{n-1}`
/// of the top-level tile containing position 0 together with the offset of
/// position 0 inside it.
pub fn fibonacci_reconstruct(m: &MachineDef, itinerary: &[Sym]) -> Result<(Vec<u8>, usize)> {
    if itinerary.is_empty() {
        return Err(Error::Params("empty itinerary".into()));
    }
    if !m.is_admissible(itinerary) {
        return Err(Error::Inadmissible(m.format_symbols(itinerary)));
    }
    let a = m.alphabet();
    // letter of the marked tile at each level: b for `b`, a for a0/a1
    let letter = |s: Sym| if a.name(s) == "b" { b'b' } else { b'a' };
    let n = itinerary.len();
    let mut block = vec![letter(itinerary[n - 1])];
    let mut offset = 0usize;
    for k in (0..n - 1).rev() {
        // expand one level down; the marked tile of level k sits inside the
        // expansion of the marked tile of level k+1
        let mut expanded = Vec::new();
        let mut new_offset = 0;
        for (i, &c) in block.iter().enumerate() {
            let start = expanded.len();
            if c == b'a' {
                expanded.extend_from_slice(b"ab");
            } else {
                expanded.push(b'a');
            }
            if i == offset {
                let within = match (block[i], a.name(itinerary[k])) {
                    (b'a', "b") => 1,
                    _ => 0,
                };
                new_offset = start + within;
            }
        }
        block = expanded;
        offset = new_offset;
        if block[offset] != letter(itinerary[k]) {
            return Err(Error::Inadmissible(m.format_symbols(itinerary)));
        }
    }
    Ok((block, offset))
}

fn abc() -> Result<Alphabet> {
    Alphabet::uniform(&["a", "b", "c"])
}

const PENROSE_PAIRS: [(&str, &str); 8] = [
    ("a", "a"),
    ("a", "b"),
    ("a", "c"),
    ("b", "b"),
    ("b", "c"),
    ("c", "a"),
    ("c", "b"),
    ("c", "c"),
];

fn penrose() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(abc()?);
    b.subshift(&["a", "b", "c"], &PENROSE_PAIRS)?;
    b.rule("S", "a", "c", "e")?
        .rule("S", "b", "b", "M")?
        .rule("S", "c", "a", "e")?;
    b.rule("L", "a a", "b", "S")?
        .rule("L", "a b", "a", "M")?
        .rule("L", "a c", "a", "M")?
        .rule("L", "b b", "b", "S")?
        .rule("L", "b c", "a", "S")?
        .rule("L", "c", "c", "L")?;
    b.rule("M", "a", "a", "L")?
        .rule("M", "b", "c", "e")?
        .rule("M", "c a", "c", "M")?
        .rule("M", "c b", "b", "e")?
        .rule("M", "c c", "b", "e")?;
    Ok(entry("penrose", "neighbour moves on Penrose tiling itineraries", b.build()?))
}

fn penrose_prime() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(abc()?);
    b.subshift(&["a", "b", "c"], &PENROSE_PAIRS)?;
    b.rule("Sp", "a", "c", "e")?
        .rule("Sp", "b", "b", "Mp")?
        .rule("Sp", "c", "a", "e")?;
    b.rule("Lp", "a a", "b", "Sp")?
        .rule("Lp", "a b", "a", "e")?
        .rule("Lp", "a c", "a", "e")?
        .rule("Lp", "b b", "b", "Sp")?
        .rule("Lp", "b c", "a", "Sp")?
        .rule("Lp", "c", "c", "Lp")?;
    b.rule("Mp", "a", "a", "e")?
        .rule("Mp", "b", "c", "e")?
        .rule("Mp", "c a", "c", "Mp")?
        .rule("Mp", "c b", "b", "e")?
        .rule("Mp", "c c", "b", "e")?;
    let mut e = entry(
        "penrose_prime",
        "Penrose neighbour moves trivialised on some cylinders",
        b.build()?,
    );
    e.aliases = vec![
        ("Lp".into(), "L'".into()),
        ("Sp".into(), "S'".into()),
        ("Mp".into(), "M'".into()),
    ];
    e.claims.push(activity("Mp", ActivityClass::Finitary(2)));
    e.claims.push(activity("Sp", ActivityClass::Finitary(3)));
    e.claims.push(activity("Lp", ActivityClass::Bounded));
    Ok(e)
}

fn zb_line() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("a", "0", "1", "e")?
        .rule("a", "1", "0", "a")?
        .rule("b", "0", "0", "b")?
        .rule("b", "1", "1", "a")?;
    let mut e = entry(
        "zb_line",
        "a: n -> n+1 and b: 2^m(2k+1) -> 2^m(2k+3) on binary expansions, least significant digit first",
        b.build()?,
    );
    e.claims.push(activity("a", ActivityClass::Bounded));
    e.claims.push(activity("b", ActivityClass::Polynomial(1)));
    e.claims.push(Claim::IntegerAction { bits: 14 });
    Ok(e)
}

/// Integer action of the line example: `a(n) = n+1`, `b(2^m(2k+1)) = 2^m(2k+3)`, `b(0) = 0`.
pub fn zb_integer(gen: &str, n: i64) -> i64 {
    match gen {
        "a" => n + 1,
        "b" if n == 0 => 0,
        "b" => {
            let m = n.trailing_zeros();
            n + (1i64 << (m + 1))
        }
        _ => panic!("unknown generator {gen}"),
    }
}

/// Least-significant-first binary digits of `n` modulo `2^len`.
pub fn to_binary(n: i64, len: usize) -> Vec<Sym> {
    (0..len).map(|i| ((n >> i) & 1) as Sym).collect()
}

fn neumann_segal(orders: &str) -> Result<ZooEntry> {
    let orders: Vec<usize> = orders
        .split(':')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Params(format!("bad order `{s}`"))))
        .collect::<Result<_>>()?;
    if orders.is_empty() || orders.iter().any(|&k| !(2..=36).contains(&k)) {
        return Err(Error::Params("orders must be integers in 2..=36".into()));
    }
    let digits: Vec<String> = (0..36).map(|i| std::char::from_digit(i, 36).unwrap().to_string()).collect();
    let levels: Vec<Vec<String>> = orders.iter().map(|&k| digits[..k].to_vec()).collect();
    let alphabet = if levels.iter().all(|l| *l == levels[0]) {
        Alphabet::uniform(&levels[0])?
    } else {
        Alphabet::levels(&levels)?
    };
    let period = orders.len();
    let mut b = MachineBuilder::new(alphabet);
    for (i, &k) in orders.iter().enumerate() {
        let next = (i + 1) % period;
        for x in 0..k {
            b.rule(&format!("al{i}"), &digits[x], &digits[(x + 1) % k], "e")?;
            let cont = match x {
                0 => format!("be{next}"),
                1 => format!("al{next}"),
                _ => "e".to_string(),
            };
            b.rule(&format!("be{i}"), &digits[x], &digits[x], &cont)?;
        }
    }
    let mut e = entry(
        "neumann_segal",
        "Segal-type construction with cyclic groups Z_k acting on each level, x_i = 0, y_i = 1",
        b.build()?,
    );
    e.params.insert("orders".into(), orders.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(":"));
    e.claims.push(activity("al0", ActivityClass::Finitary(1)));
    e.claims.push(activity("be0", ActivityClass::Bounded));
    Ok(e)
}

/// Eventually periodic binary sequence `prefix:period`, folded into
/// positions `0..prefix+period` with successor map.
fn folded_sequence(w: &str) -> Result<(Vec<u8>, Vec<usize>)> {
    let (pre, per) = w
        .split_once(':')
        .ok_or_else(|| Error::Params(format!("sequence `{w}` must be written prefix:period")))?;
    let bits = |s: &str| -> Result<Vec<u8>> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Params(format!("sequence `{w}` must be binary"))),
            })
            .collect()
    };
    let (pre, per) = (bits(pre)?, bits(per)?);
    if per.is_empty() {
        return Err(Error::Params("sequence period must be non-empty".into()));
    }
    let seq: Vec<u8> = pre.iter().chain(per.iter()).copied().collect();
    let n = seq.len();
    let succ = (0..n).map(|k| if k + 1 == n { pre.len() } else { k + 1 }).collect();
    Ok((seq, succ))
}

fn poly_iteration_r(w: &str) -> Result<ZooEntry> {
    let (seq, succ) = folded_sequence(w)?;
    let mut b = MachineBuilder::new(binary());
    for k in 0..seq.len() {
        let s = succ[k];
        b.rule(&format!("al{k}"), "0", "1", "e")?
            .rule(&format!("al{k}"), "1", "0", &format!("ga{s}"))?
            .rule(&format!("ga{k}"), "0", "0", "e")?
            .rule(&format!("ga{k}"), "1", "1", &format!("be{s}"))?;
        if seq[k] == 0 {
            b.rule(&format!("be{k}"), "0", "0", &format!("al{s}"))?
                .rule(&format!("be{k}"), "1", "1", "e")?;
        } else {
            b.rule(&format!("be{k}"), "0", "0", "e")?
                .rule(&format!("be{k}"), "1", "1", &format!("al{s}"))?;
        }
    }
    let mut e = entry(
        "poly_iteration_r",
        "the groups R_w for an eventually periodic binary sequence w; generators of index 0 are those of w",
        b.build()?,
    );
    e.params.insert("w".into(), w.to_string());
    for g in ["al0", "be0", "ga0"] {
        e.claims.push(Claim::BoundedType { element: g.into() });
    }
    Ok(e)
}

fn poly_iteration_ab(w: &str) -> Result<ZooEntry> {
    let (seq, succ) = folded_sequence(w)?;
    let mut b = MachineBuilder::new(binary());
    for k in 0..seq.len() {
        let s = succ[k];
        let (ta, tb) = if seq[k] == 0 {
            (format!("b{s}"), format!("a{s}"))
        } else {
            (format!("a{s}"), format!("b{s}"))
        };
        b.rule(&format!("a{k}"), "0", "1", "e")?
            .rule(&format!("a{k}"), "1", "0", &ta)?
            .rule(&format!("b{k}"), "0", "0", "e")?
            .rule(&format!("b{k}"), "1", "1", &tb)?;
    }
    let mut e = entry(
        "poly_iteration_ab",
        "IMG of a sequence of z^2 and 1 - z^2; generators of index 0 are a_w, b_w",
        b.build()?,
    );
    e.params.insert("w".into(), w.to_string());
    for g in ["a0", "b0"] {
        e.claims.push(Claim::BoundedType { element: g.into() });
    }
    Ok(e)
}

fn odometer() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("t", "0", "1", "e")?.rule("t", "1", "0", "t")?;
    let mut e = entry("odometer", "binary adding machine and its Bratteli-Vershik diagram", b.build()?);
    e.diagram = Some(OrderedBratteliDiagram::odometer(2));
    e.claims.push(Claim::AlphaConstant {
        element: "t".into(),
        value: 1,
        upto: 16,
    });
    e.claims.push(activity("t", ActivityClass::Bounded));
    Ok(e)
}

fn grigorchuk() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("a", "0", "1", "e")?
        .rule("a", "1", "0", "e")?
        .rule("b", "0", "0", "a")?
        .rule("b", "1", "1", "c")?
        .rule("c", "0", "0", "a")?
        .rule("c", "1", "1", "d")?
        .rule("d", "0", "0", "e")?
        .rule("d", "1", "1", "b")?;
    let mut e = entry("grigorchuk", "first Grigorchuk group (standard rules)", b.build()?);
    e.externally_sourced = true;
    e.claims.push(Claim::TrivialToDepth {
        element: "b c d".into(),
        depth: 12,
    });
    e.claims.push(Claim::TrivialToDepth {
        element: "a d a d a d a d a d a d a d a d".into(),
        depth: 16,
    });
    for g in ["b", "c", "d"] {
        e.claims.push(activity(g, ActivityClass::Bounded));
    }
    e.claims.push(activity("a", ActivityClass::Finitary(1)));
    Ok(e)
}

fn identity() -> Result<ZooEntry> {
    let mut b = MachineBuilder::new(binary());
    b.rule("i", "0", "0", "e")?.rule("i", "1", "1", "e")?;
    let mut e = entry("identity", "a single trivial generator", b.build()?);
    e.claims.push(activity("i", ActivityClass::Finitary(0)));
    Ok(e)
}

impl ZooEntry {
    pub fn word(&self, text: &str) -> Result<GroupWord> {
        self.machine.word(text)
    }

    pub fn generator_words(&self) -> Vec<GroupWord> {
        self.machine
            .root_generators()
            .into_iter()
            .map(GroupWord::gen)
            .collect()
    }

    /// Checks one claim, returning a short explanation on failure.
    pub fn check_claim(&self, claim: &Claim) -> Result<std::result::Result<(), String>> {
        let m = &self.machine;
        Ok(match claim {
            Claim::Activity { element, class } => {
                let sg = nontrivial_state_graph(m, &m.word(element)?)?;
                let got = classify_activity(&sg);
                if got == *class {
                    Ok(())
                } else {
                    Err(format!("{element}: expected {class}, got {got}"))
                }
            }
            Claim::BoundedType { element } => {
                let got = classify_activity(&nontrivial_state_graph(m, &m.word(element)?)?);
                if got.is_bounded() {
                    Ok(())
                } else {
                    Err(format!("{element}: expected bounded type, got {got}"))
                }
            }
            Claim::AlphaConstant { element, value, upto } => {
                let sg = nontrivial_state_graph(m, &m.word(element)?)?;
                let prof = alpha_profile(&sg, *upto)?;
                match (1..=*upto).find(|&n| prof[n] != *value) {
                    None => Ok(()),
                    Some(n) => Err(format!("{element}: alpha_{n} = {}", prof[n])),
                }
            }
            Claim::FiniteClosure { elements } => {
                let mut seeds = Vec::new();
                for e in elements {
                    let w = m.word(e)?;
                    seeds.push(w.inverse());
                    seeds.push(w);
                }
                match state_closure(m, &seeds) {
                    Ok(_) => Ok(()),
                    Err(e) => Err(e.to_string()),
                }
            }
            Claim::TrivialToDepth { element, depth } => {
                if is_trivial_to_depth(m, &m.word(element)?, *depth)? {
                    Ok(())
                } else {
                    Err(format!("{element} moves level {depth}"))
                }
            }
            Claim::SameOrbits { left, right, upto } => {
                let l: Vec<GroupWord> = left.iter().map(|s| m.word(s)).collect::<Result<_>>()?;
                let r: Vec<GroupWord> = right.iter().map(|s| m.word(s)).collect::<Result<_>>()?;
                let mut res = Ok(());
                for n in 1..=*upto {
                    let a = level_graph(m, &l, n)?.orbit_partition();
                    let b = level_graph(m, &r, n)?.orbit_partition();
                    if a != b {
                        res = Err(format!("orbits differ on level {n}"));
                        break;
                    }
                }
                res
            }
            Claim::IntegerAction { bits } => {
                let len = bits + 2;
                let mut res = Ok(());
                'outer: for n in -(1i64 << bits)..=(1i64 << bits) {
                    for g in ["a", "b"] {
                        let img = apply_word(m, &m.word(g)?, &to_binary(n, len))?;
                        if img != to_binary(zb_integer(g, n), len) {
                            res = Err(format!("{g}({n}) disagrees"));
                            break 'outer;
                        }
                    }
                }
                res
            }
        })
    }

    /// All claims with their outcomes.
    pub fn check_claims(&self) -> Result<Vec<(Claim, std::result::Result<(), String>)>> {
        self.claims
            .iter()
            .map(|c| Ok((c.clone(), self.check_claim(c)?)))
            .collect()
    }
}
