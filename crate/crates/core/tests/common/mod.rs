//! Shared checks over zoo machines.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sslab::engine::{apply_below, apply_word, section_of};
use sslab::triviality::{equals_exact, is_trivial_to_depth};
use sslab::zoo::ZooEntry;
use sslab::{Error, GroupWord, MachineDef, Prev, Sym};

pub mod fib;

/// Extra letters read past the compared prefix.
pub const MARGIN: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn start(m: &MachineDef, u: &[Sym]) -> Prev {
    match (u.last(), m.subshift()) {
        (None, _) => Prev::Root,
        (Some(&s), Some(_)) => Prev::After(s),
        (Some(_), None) => Prev::Any,
    }
}

/// Random admissible continuation of `u` by `len` letters.
pub fn extend(m: &MachineDef, u: &[Sym], len: usize, rng: &mut ChaCha8Rng) -> Vec<Sym> {
    let mut w = u.to_vec();
    for _ in 0..len {
        let next = m.admissible_next(w.len(), start(m, &w));
        w.push(next[rng.gen_range(0..next.len())]);
    }
    w[u.len()..].to_vec()
}

/// `g|_u(v)`, extending `v` admissibly while lookahead leaves it open.
pub fn apply_ext(m: &MachineDef, g: &GroupWord, u: &[Sym], v: &[Sym], rng: &mut ChaCha8Rng) -> Vec<Sym> {
    let mut w = v.to_vec();
    loop {
        match apply_below(m, g, u, &w) {
            Ok(img) => return img[..v.len()].to_vec(),
            Err(Error::NeedsMoreLetters { .. }) => {
                let mut uw = u.to_vec();
                uw.extend_from_slice(&w);
                w.extend(extend(m, &uw, 1, rng));
            }
            Err(e) => panic!("{e}"),
        }
    }
}

/// Root generators, their inverses and a few random products.
pub fn sample_elements(e: &ZooEntry, extra: usize, rng: &mut ChaCha8Rng) -> Vec<GroupWord> {
    let mut out: Vec<GroupWord> = Vec::new();
    for g in e.generator_words() {
        out.push(g.inverse());
        out.push(g);
    }
    let base = out.clone();
    for _ in 0..extra {
        let k = rng.gen_range(2..=3);
        let w = (0..k).fold(GroupWord::identity(), |acc, _| acc.mul(&base[rng.gen_range(0..base.len())]));
        out.push(w);
    }
    out
}

pub fn length_and_subshift(e: &ZooEntry, samples: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let m = &e.machine;
    let els = sample_elements(e, 6, rng);
    for _ in 0..samples {
        let n = rng.gen_range(0..=12);
        let v = extend(m, &[], n, rng);
        let g = &els[rng.gen_range(0..els.len())];
        let img = apply_ext(m, g, &[], &v, rng);
        if img.len() != v.len() {
            return Err(format!("{}: length changed on {}", e.name, m.format_symbols(&v)));
        }
        if !m.is_admissible(&img) {
            return Err(format!("{}: inadmissible image of {}", e.name, m.format_symbols(&v)));
        }
    }
    Ok(samples)
}

pub fn section_identity(e: &ZooEntry, samples: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let m = &e.machine;
    let els = sample_elements(e, 6, rng);
    let mut checked = 0;
    for _ in 0..samples {
        let k = rng.gen_range(0..=6);
        let v = extend(m, &[], k, rng);
        let w = extend(m, &v, rng.gen_range(0..=12 - k), rng);
        let g = &els[rng.gen_range(0..els.len())];
        let s = match section_of(m, g, &v) {
            Ok(s) => s,
            Err(Error::Unaligned { .. }) => continue,
            Err(err) => return Err(err.to_string()),
        };
        // a shared tail keeps lookahead resolution consistent on both sides
        let mut wt = w.clone();
        let mut vw = v.clone();
        vw.extend_from_slice(&w);
        wt.extend(extend(m, &vw, MARGIN, rng));
        vw.extend_from_slice(&wt[w.len()..]);
        let whole = apply_ext(m, g, &[], &vw, rng)[..v.len() + w.len()].to_vec();
        let mut split = apply_word(m, g, &v).map_err(|err| err.to_string())?;
        split.extend_from_slice(&apply_ext(m, &s, &v, &wt, rng)[..w.len()]);
        if whole != split {
            return Err(format!(
                "{}: {} at {} . {}",
                e.name,
                m.format_word(g),
                m.format_symbols(&v),
                m.format_symbols(&w)
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

pub fn cocycle(e: &ZooEntry, samples: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let m = &e.machine;
    let els = sample_elements(e, 4, rng);
    let mut checked = 0;
    for _ in 0..samples {
        let g = &els[rng.gen_range(0..els.len())];
        let h = &els[rng.gen_range(0..els.len())];
        let v = extend(m, &[], rng.gen_range(0..=4), rng);
        let hv = apply_ext(m, h, &[], &v, rng);
        let (Ok(gh), Ok(sg), Ok(sh)) = (section_of(m, &g.mul(h), &v), section_of(m, g, &hv), section_of(m, h, &v)) else {
            continue;
        };
        for _ in 0..8 {
            let w = extend(m, &v, 8 + MARGIN, rng);
            let lhs = apply_ext(m, &gh, &v, &w, rng)[..8].to_vec();
            let mid = apply_ext(m, &sh, &v, &w, rng);
            let rhs = apply_ext(m, &sg, &hv, &mid, rng)[..8].to_vec();
            if lhs != rhs {
                return Err(format!("{}: cocycle fails for {} {} at {}", e.name, m.format_word(g), m.format_word(h), m.format_symbols(&v)));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

pub fn inverse_round_trip(e: &ZooEntry, samples: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let m = &e.machine;
    let els = sample_elements(e, 6, rng);
    for _ in 0..samples {
        let n = rng.gen_range(0..=10);
        let v = extend(m, &[], n + MARGIN, rng);
        let g = &els[rng.gen_range(0..els.len())];
        let img = apply_ext(m, g, &[], &v, rng);
        let back = apply_ext(m, &g.inverse(), &[], &img, rng);
        if back[..n] != v[..n] {
            return Err(format!("{}: {} does not round-trip on {}", e.name, m.format_word(g), m.format_symbols(&v)));
        }
    }
    Ok(samples)
}

/// Level maps permute the level wherever they are determined by the level.
pub fn bijectivity(e: &ZooEntry, max_level: usize, max_words: usize) -> Result<usize, String> {
    let m = &e.machine;
    let mut checked = 0;
    for g in e.generator_words() {
        for g in [g.inverse(), g] {
            for n in 1..=max_level {
                let Ok(words) = m.level_words(n, max_words) else { break };
                let mut images = std::collections::BTreeSet::new();
                let mut determined = 0;
                for v in &words {
                    match apply_word(m, &g, v) {
                        Ok(img) => {
                            determined += 1;
                            if !words.binary_search(&img).is_ok() && !words.contains(&img) {
                                return Err(format!("{}: image outside level {n}", e.name));
                            }
                            if !images.insert(img) {
                                return Err(format!("{}: {} not injective on level {n}", e.name, m.format_word(&g)));
                            }
                        }
                        Err(Error::NeedsMoreLetters { .. }) => {}
                        Err(err) => return Err(err.to_string()),
                    }
                }
                if determined == words.len() && images.len() != words.len() {
                    return Err(format!("{}: level {n} not permuted", e.name));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// `equals_exact(g, h)` against `is_trivial_to_depth(g h⁻¹, n)` for `n ≤ 12`.
pub fn exact_vs_depth(e: &ZooEntry, pairs: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let m = &e.machine;
    if !m.is_uniform() {
        return match equals_exact(m, &GroupWord::identity(), &GroupWord::identity()) {
            Err(Error::NonUniform) => Ok(0),
            other => Err(format!("{}: non-uniform machine accepted: {other:?}", e.name)),
        };
    }
    let els = sample_elements(e, 10, rng);
    let mut checked = 0;
    for k in 0..pairs {
        let g = &els[rng.gen_range(0..els.len())];
        // every other pair is built to be equal
        let h = if k % 2 == 0 {
            let c = &els[rng.gen_range(0..els.len())];
            g.mul(c).mul(&c.inverse())
        } else {
            els[rng.gen_range(0..els.len())].clone()
        };
        let exact = equals_exact(m, g, &h).map_err(|err| err.to_string())?;
        let q = g.mul(&h.inverse());
        let deep = (1..=12).all(|n| is_trivial_to_depth(m, &q, n).unwrap());
        if exact != deep {
            return Err(format!("{}: {} vs {}: exact {exact}, depth {deep}", e.name, m.format_word(g), m.format_word(&h)));
        }
        checked += 1;
    }
    Ok(checked)
}
