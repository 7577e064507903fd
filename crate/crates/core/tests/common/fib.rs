//! Fibonacci itineraries computed directly from the substitution.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sslab::engine::apply_word;
use sslab::{Error, MachineDef, Sym};

/// Groups `ab -> a`, lone `a -> b`; returns the new sequence and the index
/// of the group containing `pos`.
pub fn sigma(seq: &[u8], pos: usize) -> (Vec<u8>, usize) {
    let mut out = Vec::new();
    let mut new_pos = usize::MAX;
    let mut i = usize::from(seq[0] == b'b');
    // a final `a` may be grouped with a letter beyond the window
    let end = if seq[seq.len() - 1] == b'a' { seq.len() - 1 } else { seq.len() };
    while i < end {
        let pair = seq[i] == b'a' && seq.get(i + 1) == Some(&b'b');
        if pos == i || (pair && pos == i + 1) {
            new_pos = out.len();
        }
        if pair {
            out.push(b'a');
            i += 2;
        } else {
            assert_eq!(seq[i], b'a', "two b in a row");
            out.push(b'b');
            i += 1;
        }
    }
    (out, new_pos)
}

pub fn symbol(seq: &[u8], pos: usize) -> &'static str {
    match (seq[pos - 1], seq[pos]) {
        (_, b'b') => "b",
        (b'a', b'a') => "a0",
        _ => "a1",
    }
}

pub fn itinerary(seq: &[u8], pos: usize, n: usize) -> Vec<&'static str> {
    let mut out = Vec::new();
    let (mut s, mut p) = (seq.to_vec(), pos);
    for _ in 0..n {
        assert!(p >= 1 && p + 1 < s.len(), "window too short");
        out.push(symbol(&s, p));
        (s, p) = sigma(&s, p);
    }
    out
}

pub fn syms(m: &MachineDef, names: &[&str]) -> Vec<Sym> {
    m.symbols(&names.join(" ")).unwrap()
}

/// Applies `g` to `v`, extending `v` admissibly when more letters are
/// needed, and returns the image of the first `v.len()` letters.
pub fn apply_extended(m: &MachineDef, g: &sslab::GroupWord, v: &[Sym], rng: &mut ChaCha8Rng) -> Vec<Sym> {
    let mut w = v.to_vec();
    loop {
        match apply_word(m, g, &w) {
            Ok(img) => return img[..v.len()].to_vec(),
            Err(Error::NeedsMoreLetters { .. }) => {
                let next = m.admissible_next(w.len(), sslab::Prev::After(*w.last().unwrap()));
                w.push(next[rng.gen_range(0..next.len())]);
            }
            Err(e) => panic!("{e}"),
        }
    }
}
