//! One line per acceptance criterion. Runs without the test harness so the
//! report prints in order; exits nonzero only on an unexpected outcome.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::fib::{apply_extended, itinerary, syms};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sslab::activity::{alpha_profile, classify_activity, nontrivial_state_graph, ActivityClass};
use sslab::bratteli::OrderedBratteliDiagram;
use sslab::bratteli::Extreme;
use sslab::engine::apply_word;
use sslab::ray::RaySpec;
use sslab::recurrence::{
    capacity_profile, cos_exp_inequality, dirichlet_solve, nash_williams_certify, network_profile, pir_overlap_report,
    Network, Verdict,
};
use sslab::schreier::{cofinality_folner_sets, constant_rays, level_graph, orbit_ball, tail_folner_sets};
use sslab::triviality::{equals_exact, is_trivial_to_depth};
use sslab::zoo::{fibonacci_reconstruct, fibonacci_word, zoo_build, zoo_names, ZooEntry};
use sslab::{GroupWord, MachineDef, Sym};

/// Largest Nash-Williams boundary along the Basilica chain at `1^ω`.
const BASILICA_BOUNDARY: usize = 5;

/// Criteria whose failure is explained in the notes and expected.
const EXPECTED_FAIL: &[usize] = &[2];

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome, u64);

fn entry(name: &str) -> ZooEntry {
    zoo_build(name, "").unwrap()
}

fn words(e: &ZooEntry, list: &[&str]) -> Vec<GroupWord> {
    list.iter().map(|w| e.word(w).unwrap()).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Outcome {
    let e = entry("basilica");
    for g in ["a", "b"] {
        let sg = nontrivial_state_graph(&e.machine, &e.word(g).unwrap()).map_err(|x| x.to_string())?;
        let prof = alpha_profile(&sg, 16).map_err(|x| x.to_string())?;
        ensure(prof[1..].iter().all(|&x| x == 1), || format!("alpha({g}) = {:?}", &prof[1..]))?;
        let class = classify_activity(&sg);
        ensure(class == ActivityClass::Bounded, || format!("{g} classified {class}"))?;
    }
    Ok("alpha_n(a) = alpha_n(b) = 1 for n <= 16, both bounded".into())
}

/// Whether the counts `α_0..=α_20` fit the class.
fn consistent(class: ActivityClass, a: &[u128]) -> bool {
    let f = |n: usize| a[n] as f64;
    match class {
        ActivityClass::Finitary(d) => a[d..].iter().all(|&x| x == 0) && (d == 0 || a[d - 1] > 0),
        // profiles of bounded elements are eventually periodic; the maxima
        // over windows of length 6 cover periods 1, 2 and 3
        ActivityClass::Bounded => {
            let maxima: Vec<u128> = (4..=15).map(|n| *a[n..n + 6].iter().max().unwrap()).collect();
            a[4..].iter().all(|&x| x > 0) && maxima.iter().all(|&m| m == maxima[0])
        }
        ActivityClass::Polynomial(k) => {
            let r: Vec<f64> = (4..=20).map(|n| f(n) / (n as f64).powi(k as i32)).collect();
            let (lo, hi) = r.iter().fold((f64::MAX, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
            lo > 0.0 && hi / lo <= 4.0
        }
        ActivityClass::Exponential => f(10) > 0.0 && (f(20) / f(10)).powf(0.1) >= 1.3,
    }
}

fn c2() -> Outcome {
    let mut checked = 0;
    let mut classes = BTreeMap::new();
    for name in zoo_names() {
        let e = entry(name);
        for g in e.machine.gen_names() {
            let w = e.word(g).unwrap();
            // generators that only act below the root level
            let Ok(sg) = nontrivial_state_graph(&e.machine, &w) else { continue };
            let class = classify_activity(&sg);
            let prof = alpha_profile(&sg, 20).map_err(|x| x.to_string())?;
            ensure(consistent(class, &prof), || format!("{name}/{g}: {class} vs {:?}", prof))?;
            classes.insert(format!("{name}/{g}"), class);
            checked += 1;
        }
    }
    let expected = [
        ("zb_line/b", ActivityClass::Polynomial(1)),
        ("henon/al", ActivityClass::Polynomial(1)),
        ("henon/be", ActivityClass::Polynomial(1)),
        ("henon/ga", ActivityClass::Bounded),
        ("henon/t", ActivityClass::Bounded),
    ];
    let wrong: Vec<String> = expected
        .iter()
        .filter(|(k, c)| classes[*k] != *c)
        .map(|(k, c)| format!("{k} expected {c}, got {}", classes[*k]))
        .collect();
    ensure(wrong.is_empty(), || format!("{checked} elements consistent; {}", wrong.join("; ")))?;
    Ok(format!("{checked} elements consistent with their counts"))
}

fn c3() -> Outcome {
    let e = entry("penrose_prime");
    let class = |g: &str| classify_activity(&nontrivial_state_graph(&e.machine, &e.word(g).unwrap()).unwrap());
    let (m, s, l) = (class("Mp"), class("Sp"), class("Lp"));
    ensure(m == ActivityClass::Finitary(2), || format!("M' is {m}"))?;
    ensure(matches!(s, ActivityClass::Finitary(d) if d <= 3), || format!("S' is {s}"))?;
    ensure(l == ActivityClass::Bounded, || format!("L' is {l}"))?;
    Ok(format!("M' {m}, S' {s}, L' {l}"))
}

fn c4() -> Outcome {
    let e = entry("mating_img");
    let m = &e.machine;
    let full = words(&e, &["a", "b", "c", "bp", "cp"]);
    let small = words(&e, &["a", "b bp", "c cp"]);
    let pairs = [("b", "b bp"), ("bp", "b bp"), ("c", "c cp"), ("cp", "c cp")];
    let pairs: Vec<(GroupWord, GroupWord)> = pairs.iter().map(|(x, y)| (e.word(x).unwrap(), e.word(y).unwrap())).collect();
    let mut points = 0;
    for n in 1..=10 {
        let p = level_graph(m, &full, n).map_err(|x| x.to_string())?.orbit_partition();
        let q = level_graph(m, &small, n).map_err(|x| x.to_string())?.orbit_partition();
        ensure(p == q, || format!("orbit partitions differ on level {n}"))?;
        for v in m.level_words(n, 1 << n).map_err(|x| x.to_string())? {
            for (g, big) in &pairs {
                let gv = apply_word(m, g, &v).unwrap();
                if gv != v {
                    ensure(gv == apply_word(m, big, &v).unwrap(), || {
                        format!("{} at {}", m.format_word(g), m.format_symbols(&v))
                    })?;
                }
            }
            points += 1;
        }
    }
    Ok(format!("partitions equal on levels 1..=10, implication at {points} words"))
}

fn reduced_words(e: &ZooEntry, letters: &[&str], max_len: usize) -> Vec<(String, GroupWord)> {
    let mut base = Vec::new();
    for l in letters {
        let w = e.word(l).unwrap();
        let name = if l.contains(' ') { l.replace(' ', "") } else { l.to_string() };
        base.push((name.clone(), w.clone()));
        base.push((format!("{name}^-1"), w.inverse()));
    }
    let mut out: Vec<(Vec<usize>, String, GroupWord)> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..base.len() {
                if w.last().is_some_and(|&j| j ^ 1 == i) {
                    continue;
                }
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        for v in &next {
            let name = v.iter().map(|&i| base[i].0.as_str()).collect::<Vec<_>>().join(" ");
            let g = v.iter().fold(GroupWord::identity(), |acc, &i| acc.mul(&base[i].1));
            out.push((v.clone(), name, g));
        }
        layer = next;
    }
    out.into_iter().map(|(_, n, g)| (n, g)).collect()
}

/// Length of the orbit of `0^depth` under `g`, or `None` past `cap`.
fn orbit_length(m: &MachineDef, g: &GroupWord, depth: usize, cap: usize) -> Option<usize> {
    let start: Vec<Sym> = vec![0; depth];
    let mut v = apply_word(m, g, &start).unwrap();
    let mut k = 1;
    while v != start {
        if k > cap {
            return None;
        }
        v = apply_word(m, g, &v).unwrap();
        k += 1;
    }
    Some(k)
}

fn level_order(m: &MachineDef, g: &GroupWord, n: usize) -> u64 {
    let words = m.level_words(n, 1 << n).unwrap();
    let index: BTreeMap<&[Sym], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let perm: Vec<usize> = words.iter().map(|v| index[apply_word(m, g, v).unwrap().as_slice()]).collect();
    let mut seen = vec![false; perm.len()];
    let mut order = 1u64;
    for s in 0..perm.len() {
        let mut len = 0u64;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            order = num_lcm(order, len);
        }
    }
    order
}

fn num_lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// A vertex whose `g`-orbit is longer than `bound` at some depth: no power
/// `g^k` with `1 ≤ k ≤ bound` is trivial.
fn infinite_order_certificate(m: &MachineDef, g: &GroupWord, bound: usize) -> Option<(usize, usize)> {
    for depth in (16..=48).step_by(2) {
        if orbit_length(m, g, depth, bound).is_none() {
            return Some((depth, bound + 1));
        }
    }
    None
}

fn c5() -> Outcome {
    let e = entry("mating_img");
    let m = &e.machine;
    let cands = reduced_words(&e, &["a", "b bp", "c cp"], 4);
    let nontrivial: Vec<&(String, GroupWord)> =
        cands.iter().filter(|(_, g)| !is_trivial_to_depth(m, g, 16).unwrap()).collect();
    for (j, (vn, v)) in nontrivial.iter().enumerate() {
        for (un, u) in &nontrivial[..j] {
            let comm = GroupWord::commutator(u, v);
            if !is_trivial_to_depth(m, &comm, 8).unwrap() || !equals_exact(m, &comm, &GroupWord::identity()).unwrap() {
                continue;
            }
            // no relation u^p v^q = 1 with small exponents
            let independent = (-4i64..=4)
                .flat_map(|p| (-4i64..=4).map(move |q| (p, q)))
                .filter(|&pq| pq != (0, 0))
                .all(|(p, q)| !is_trivial_to_depth(m, &u.pow(p).mul(&v.pow(q)), 16).unwrap());
            if !independent {
                continue;
            }
            let bound = 1usize << 16;
            let (Some((du, _)), Some((dv, _))) =
                (infinite_order_certificate(m, u, bound), infinite_order_certificate(m, v, bound))
            else {
                continue;
            };
            return Ok(format!(
                "u = {un}, v = {vn}: [u,v] = 1 exactly; orbits of 0^n longer than 2^16 at n = {du}, {dv}; \
                 orders on level 16 are {} and {}",
                level_order(m, u, 16),
                level_order(m, v, 16)
            ));
        }
    }
    Err("no commuting pair of infinite order among words of length <= 4".into())
}

fn c6() -> Outcome {
    let e = entry("basilica");
    let m = &e.machine;
    let p = RaySpec::parse(m, ":1").unwrap();
    let chain = cofinality_folner_sets(m, &e.generator_words(), &p, 14).map_err(|x| x.to_string())?;
    let sizes = chain.boundary_sizes();
    ensure(sizes.iter().copied().max() == Some(BASILICA_BOUNDARY), || format!("boundaries {sizes:?}"))?;
    let rep = nash_williams_certify(&chain).map_err(|x| x.to_string())?;
    for (j, s) in rep.partial_sums.iter().enumerate() {
        ensure(*s + 1e-12 >= (j + 1) as f64 / BASILICA_BOUNDARY as f64, || format!("partial sum {j}: {s}"))?;
    }
    ensure(rep.verdict == Verdict::CertifiedRecurrent, || format!("verdict {}", rep.verdict))?;

    let z = entry("zb_line");
    let zm = &z.machine;
    let gens = z.generator_words();
    let q = RaySpec::parse(zm, ":0").unwrap();
    let zchain = tail_folner_sets(zm, &gens, &q, constant_rays(zm), 12).map_err(|x| x.to_string())?;
    let x = zm.alphabet().symbol_count() as u128;
    let profiles: Vec<Vec<u128>> = gens
        .iter()
        .map(|g| alpha_profile(&nontrivial_state_graph(zm, g).unwrap(), 12).unwrap())
        .collect();
    for (k, b) in zchain.boundary_sizes().iter().enumerate() {
        let n = k + 1;
        let bound = x * profiles.iter().map(|a| a[n]).sum::<u128>();
        ensure(*b as u128 <= bound, || format!("zb_line level {n}: {b} > {bound}"))?;
    }
    Ok(format!(
        "Basilica boundaries {sizes:?}, {} disjoint levels, {}; zb_line boundaries {:?} within |X| sum alpha_n",
        rep.levels.len(),
        rep.verdict,
        zchain.boundary_sizes()
    ))
}

fn c7() -> Outcome {
    let od = entry("odometer");
    let om = &od.machine;
    let origin = RaySpec::parse(om, ":0").unwrap();
    let radii = [4, 8, 16, 32, 64];
    let prof = capacity_profile(om, &od.generator_words(), &origin, &radii).map_err(|x| x.to_string())?;
    for (r, c) in radii.iter().zip(&prof.conductances) {
        ensure((c - 2.0 / *r as f64).abs() <= 1e-9, || format!("r = {r}: conductance {c}"))?;
    }
    let orbits = [
        ("basilica", ":1"),
        ("henon", ":0"),
        ("zb_line", ":0"),
        ("odometer", ":1"),
        ("grigorchuk", ":1"),
        ("mating_img", ":0"),
        ("neumann_segal", "0:1"),
        ("poly_iteration_r", ":0"),
    ];
    for (name, ray) in orbits {
        let e = entry(name);
        let p = RaySpec::parse(&e.machine, ray).map_err(|x| x.to_string())?;
        let prof = capacity_profile(&e.machine, &e.generator_words(), &p, &[2, 4, 8, 16]).map_err(|x| format!("{name}: {x}"))?;
        ensure(prof.is_monotone(), || format!("{name}: {:?}", prof.conductances))?;
    }
    let tree = network_profile(&Network::binary_tree(16), &[1, 2, 4, 8, 16]).map_err(|x| x.to_string())?;
    ensure(tree.conductances.iter().all(|&c| c >= 0.1), || format!("tree {:?}", tree.conductances))?;
    ensure(tree.verdict == Verdict::TransienceConsistent, || format!("tree verdict {}", tree.verdict))?;
    Ok(format!(
        "Z: 2/r to 1e-9; {} zoo profiles monotone; tree conductances {:.4?}",
        orbits.len(),
        tree.conductances
    ))
}

fn c8() -> Outcome {
    let od = entry("odometer");
    let om = &od.machine;
    let origin = RaySpec::parse(om, ":0").unwrap();
    let mut last = 0.0;
    let mut seen = Vec::new();
    for r in [8usize, 16, 32] {
        let g = orbit_ball(om, &od.generator_words(), &origin, r).map_err(|x| x.to_string())?;
        let net = Network::from_schreier(&g);
        let pot = dirichlet_solve(&net, &net.sphere(r)).map_err(|x| x.to_string())?;
        let rep = pir_overlap_report(&g, &pot.values).map_err(|x| x.to_string())?;
        let floor = (-PI * PI / 16.0 * 2.0 / r as f64).exp();
        for o in &rep.overlaps {
            ensure(*o + 1e-12 >= floor, || format!("r = {r}: overlap {o} < {floor}"))?;
        }
        ensure(rep.holds(), || format!("r = {r}: bounds fail"))?;
        let o = rep.overlaps.iter().copied().fold(1.0, f64::min);
        ensure(o > last && o < 1.0, || format!("r = {r}: overlap {o} after {last}"))?;
        last = o;
        seen.push(o);
    }
    ensure(cos_exp_inequality(10_000), || "cos x < exp(-x^2) somewhere".into())?;
    Ok(format!("overlaps {seen:.6?}; cos x >= exp(-x^2) on 10^4 points"))
}

fn c9() -> Outcome {
    let od = entry("odometer");
    let m = &od.machine;
    let t = od.word("t").unwrap();
    let base = OrderedBratteliDiagram::odometer(2);
    for n in 1..=12 {
        let o = base.extended(n).map_err(|x| x.to_string())?.with_wrap();
        let d = &o.diagram;
        let start = o.extreme_path(n, 0, Extreme::Min).map_err(|x| x.to_string())?;
        let mut p = start.clone();
        let mut period = 0usize;
        loop {
            let next = o.adic_successor(&p).map_err(|x| x.to_string())?;
            // edge `k` at level `i` is the letter `k` at position `i`
            let word: Vec<Sym> = p.edges.iter().map(|&k| k as Sym).collect();
            let image: Vec<Sym> = next.edges.iter().map(|&k| k as Sym).collect();
            ensure(m.format_symbols(&word).replace(' ', "") == d.format_path(&p).replace(' ', ""), || {
                format!("identification breaks at {}", d.format_path(&p))
            })?;
            ensure(apply_word(m, &t, &word).unwrap() == image, || format!("level {n}: successor of {}", d.format_path(&p)))?;
            p = next;
            period += 1;
            if p == start || period > 1 << n {
                break;
            }
        }
        ensure(period == 1 << n, || format!("level {n}: period {period}"))?;
    }
    Ok("periods 2^n for n <= 12; successor equals t on every path".into())
}

fn c10() -> Outcome {
    let e = entry("fibonacci");
    let m = &e.machine;
    let gens: Vec<GroupWord> = ["t", "al0", "al1", "be"]
        .iter()
        .flat_map(|g| {
            let w = m.word(g).unwrap();
            [w.inverse(), w]
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let mut v = vec![rng.gen_range(0..3) as Sym];
        while v.len() < 20 {
            let next = m.admissible_next(v.len(), sslab::Prev::After(*v.last().unwrap()));
            v.push(next[rng.gen_range(0..next.len())]);
        }
        let g = &gens[rng.gen_range(0..gens.len())];
        let img = apply_extended(m, g, &v, &mut rng);
        ensure(m.is_admissible(&img), || format!("{} -> {}", m.format_symbols(&v), m.format_symbols(&img)))?;
    }
    let t = m.word("t").unwrap();
    let seq = fibonacci_word(500_000);
    let mut checked = 0;
    for pos in (200_000..200_500).step_by(7) {
        for n in 1..=20 {
            let it = syms(m, &itinerary(&seq, pos, n));
            let (block, off) = fibonacci_reconstruct(m, &it).map_err(|x| x.to_string())?;
            ensure(seq[pos - off..pos - off + block.len()] == block[..], || format!("block at {pos}, n = {n}"))?;
            let (b2, off2) = fibonacci_reconstruct(m, &apply_extended(m, &t, &it, &mut rng)).map_err(|x| x.to_string())?;
            let expected = if off + 1 < block.len() { (block, off + 1) } else { (b2.clone(), 0) };
            ensure((b2, off2) == expected, || format!("shift at {pos}, n = {n}"))?;
            checked += 1;
        }
    }
    Ok(format!("10^4 applications admissible; {checked} reconstructions commute with t"))
}

fn c11() -> Outcome {
    let mut r = rng(11);
    let mut counts = [0usize; 6];
    for name in zoo_names() {
        let e = entry(name);
        counts[0] += length_and_subshift(&e, 300, &mut r)?;
        counts[1] += section_identity(&e, 300, &mut r)?;
        counts[2] += cocycle(&e, 60, &mut r)?;
        counts[3] += inverse_round_trip(&e, 300, &mut r)?;
        counts[4] += bijectivity(&e, 10, 1 << 11)?;
        counts[5] += exact_vs_depth(&e, 16, &mut r)?;
    }
    Ok(format!(
        "{} machines: length {}, section {}, cocycle {}, inverse {}, bijectivity {}, exact/depth {}",
        zoo_names().len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        counts[4],
        counts[5]
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "Basilica activity", c1, 1),
        (2, "activity classifier against counts", c2, 5),
        (3, "Penrose verdicts", c3, 1),
        (4, "mating Schreier coincidence", c4, 30),
        (5, "mating commuting pair", c5, 60),
        (6, "Nash-Williams certification", c6, 60),
        (7, "capacity numerics", c7, 60),
        (8, "p.i.r. overlaps", c8, 10),
        (9, "adic odometer", c9, 5),
        (10, "Fibonacci subshift", c10, 10),
        (11, "core algebraic suite", c11, 120),
    ];
    let mut unexpected = 0;
    for (k, title, f, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; over the {limit} s limit")),
            other => other,
        };
        let pass = outcome.is_ok();
        let msg = outcome.unwrap_or_else(|e| e);
        let note = match (pass, EXPECTED_FAIL.contains(&k)) {
            (false, true) => " (expected)",
            (true, true) => " (unexpected pass)",
            _ => "",
        };
        if pass == EXPECTED_FAIL.contains(&k) {
            unexpected += 1;
        }
        println!(
            "{} criterion {k:>2} {title}{note}: {msg} [{:.2} s / {limit} s]",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
