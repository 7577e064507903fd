use std::fmt;

/// Generator index inside a machine.
pub type GenId = u32;

/// A signed generator symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GenId,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: GenId) -> Letter {
        Letter { gen, inv: false }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// Product of signed generators, applied right to left: the word `g h`
/// acts on a point `x` as `g(h(x))`. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> GroupWord {
        GroupWord::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> GroupWord {
        GroupWord { letters }
    }

    pub fn gen(gen: GenId) -> GroupWord {
        GroupWord::from_letters(vec![Letter::new(gen)])
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free reduction: cancels adjacent `g g^-1` pairs.
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord { letters: out }
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }.reduced()
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        GroupWord { letters }.reduced()
    }

    /// Commutator `u v u^-1 v^-1`.
    pub fn commutator(u: &GroupWord, v: &GroupWord) -> GroupWord {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", if l.inv { "~" } else { "" }, l.gen)?;
        }
        Ok(())
    }
}
