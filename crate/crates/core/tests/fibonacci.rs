//! Fibonacci itineraries checked against sequences built directly from the
//! substitution.

mod common;

use common::fib::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sslab::engine::apply_word;
use sslab::zoo::{fibonacci_reconstruct, fibonacci_word, zoo_build, FIBONACCI_PAIRS};
use sslab::Sym;

#[test]
fn real_sequences_give_admissible_itineraries() {
    let e = zoo_build("fibonacci", "").unwrap();
    let m = &e.machine;
    let seq = fibonacci_word(2_000_000);
    let allowed: Vec<(&str, &str)> = FIBONACCI_PAIRS.to_vec();
    for pos in (900_000..900_400).step_by(7) {
        let it = itinerary(&seq, pos, 22);
        for w in it.windows(2) {
            assert!(allowed.contains(&(w[0], w[1])), "{w:?}");
        }
        assert!(m.is_admissible(&syms(m, &it)));
    }
}

#[test]
fn shift_matches_machine_on_real_sequences() {
    let e = zoo_build("fibonacci", "").unwrap();
    let m = &e.machine;
    let t = m.word("t").unwrap();
    let seq = fibonacci_word(2_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for pos in (1_000_000..1_000_300).step_by(3) {
        let here = syms(m, &itinerary(&seq, pos, 24));
        let next = syms(m, &itinerary(&seq, pos + 1, 24));
        let img = apply_extended(m, &t, &here[..20], &mut rng);
        assert_eq!(img, next[..20].to_vec(), "position {pos}");
    }
}

#[test]
fn reconstruction_commutes_with_the_shift() {
    let e = zoo_build("fibonacci", "").unwrap();
    let m = &e.machine;
    let t = m.word("t").unwrap();
    let seq = fibonacci_word(2_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for pos in (700_000..700_200).step_by(5) {
        for n in [5usize, 12, 20] {
            let it = syms(m, &itinerary(&seq, pos, n));
            let (block, off) = fibonacci_reconstruct(m, &it).unwrap();
            // the block is the tile containing `pos`, laid over the sequence
            assert_eq!(&seq[pos - off..pos - off + block.len()], &block[..]);
            let shifted = apply_extended(m, &t, &it, &mut rng);
            let (b2, off2) = fibonacci_reconstruct(m, &shifted).unwrap();
            if off + 1 < block.len() {
                assert_eq!((b2, off2), (block.clone(), off + 1));
            } else {
                assert_eq!(off2, 0);
            }
        }
    }
}

#[test]
fn random_applications_respect_the_subshift() {
    let e = zoo_build("fibonacci", "").unwrap();
    let m = &e.machine;
    let gens: Vec<_> = ["t", "al0", "al1", "be"]
        .iter()
        .flat_map(|g| {
            let w = m.word(g).unwrap();
            [w.inverse(), w]
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10_000 {
        let mut v = vec![rng.gen_range(0..3) as Sym];
        while v.len() < 20 {
            let next = m.admissible_next(v.len(), sslab::Prev::After(*v.last().unwrap()));
            v.push(next[rng.gen_range(0..next.len())]);
        }
        let g = &gens[rng.gen_range(0..gens.len())];
        let img = apply_extended(m, g, &v, &mut rng);
        assert!(m.is_admissible(&img), "{} -> {}", m.format_symbols(&v), m.format_symbols(&img));
    }
}

#[test]
fn restricted_shifts_are_involutions() {
    let e = zoo_build("fibonacci", "").unwrap();
    let m = &e.machine;
    for g in ["al0", "al1", "be"] {
        let w = m.word(g).unwrap();
        for v in m.level_words(8, 10_000).unwrap() {
            if let Ok(img) = apply_word(m, &w.mul(&w), &v) {
                assert_eq!(img, v);
            }
        }
    }
}
