//! Eventually periodic infinite paths `prefix · period^ω`.

use std::fmt;

use crate::alphabet::{Prev, Sym};
use crate::caps::Caps;
use crate::engine::Pipeline;
use crate::error::{Error, Result};
use crate::machine::MachineDef;
use crate::word::GroupWord;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySpec {
    pub prefix: Vec<Sym>,
    pub period: Vec<Sym>,
}

impl RaySpec {
    /// Canonical form: primitive period and shortest prefix.
    pub fn new(prefix: Vec<Sym>, period: Vec<Sym>) -> Result<RaySpec> {
        if period.is_empty() {
            return Err(Error::Usage("ray period must be non-empty".into()));
        }
        let mut r = RaySpec { prefix, period };
        r.canonicalize();
        Ok(r)
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (0..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn letter(&self, i: usize) -> Sym {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<Sym> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// Same tail up to a shift of at most... any finite prefix: the rays are
    /// cofinal when they agree from some position on.
    pub fn cofinal(&self, other: &RaySpec) -> bool {
        let n = self.prefix.len().max(other.prefix.len());
        let span = self.period.len() * other.period.len();
        (n..n + span).all(|i| self.letter(i) == other.letter(i))
    }

    /// Agreement from position `n` on.
    pub fn agrees_beyond(&self, other: &RaySpec, n: usize) -> bool {
        let start = self.prefix.len().max(other.prefix.len());
        let span = self.period.len() * other.period.len();
        (n..start.max(n) + span).all(|i| self.letter(i) == other.letter(i))
    }

    /// Replaces the first `n` letters with `head` (of length `n`).
    pub fn with_head(&self, head: &[Sym]) -> RaySpec {
        let n = head.len();
        let mut prefix = head.to_vec();
        let tail_start = n;
        if tail_start < self.prefix.len() {
            prefix.extend_from_slice(&self.prefix[tail_start..]);
            RaySpec::new(prefix, self.period.clone()).unwrap()
        } else {
            let off = (tail_start - self.prefix.len()) % self.period.len();
            let mut period = self.period.clone();
            period.rotate_left(off);
            RaySpec::new(prefix, period).unwrap()
        }
    }

    pub fn parse(m: &MachineDef, text: &str) -> Result<RaySpec> {
        let (p, q) = text
            .split_once(':')
            .ok_or_else(|| Error::Usage(format!("ray `{text}` must be written prefix:period")))?;
        let r = RaySpec::new(m.symbols(p)?, m.symbols(q)?)?;
        r.check_admissible(m)?;
        Ok(r)
    }

    pub fn check_admissible(&self, m: &MachineDef) -> Result<()> {
        let mut n = self.prefix.len() + self.period.len() * 2;
        let ap = m.alphabet().period();
        n += self.period.len() * ap;
        if m.is_admissible(&self.take(n)) {
            Ok(())
        } else {
            Err(Error::Inadmissible(self.format(m)))
        }
    }

    pub fn format(&self, m: &MachineDef) -> String {
        format!("{}:{}", m.format_symbols(&self.prefix), m.format_symbols(&self.period))
    }
}

impl fmt::Display for RaySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |w: &[Sym]| w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:{}", s(&self.prefix), s(&self.period))
    }
}

/// Image of a ray, found by detecting a repeated pipeline state at period
/// boundaries.
pub fn apply_ray(m: &MachineDef, w: &GroupWord, r: &RaySpec) -> Result<RaySpec> {
    apply_ray_with(m, w, r, &Caps::default())
}

pub fn apply_ray_with(m: &MachineDef, w: &GroupWord, r: &RaySpec, caps: &Caps) -> Result<RaySpec> {
    let _ = Prev::Root;
    let mut pipe = Pipeline::from_word(w);
    let mut out = Vec::new();
    for &s in &r.prefix {
        pipe.feed(m, s, &mut out, caps)?;
    }
    let ap = m.alphabet().period();
    let mut seen: std::collections::HashMap<(Pipeline, usize), usize> = std::collections::HashMap::new();
    let mut pos = r.prefix.len();
    for _ in 0..=caps.ray_periods {
        let key = (pipe.clone(), pos % ap);
        if let Some(&start) = seen.get(&key) {
            if out.len() == start {
                break;
            }
            let period = out[start..].to_vec();
            out.truncate(start);
            return RaySpec::new(out, period);
        }
        seen.insert(key, out.len());
        for &s in &r.period {
            pipe.feed(m, s, &mut out, caps)?;
        }
        pos += r.period.len();
    }
    Err(Error::NonPeriodic {
        bound: caps.ray_periods,
    })
}
