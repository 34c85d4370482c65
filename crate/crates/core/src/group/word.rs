//! Reduced words in a free group.

use std::fmt;

use super::GroupError;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub const fn new(gen: u32, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub const fn pos(gen: u32) -> Self {
        Letter { gen, inv: false }
    }

    pub const fn neg(gen: u32) -> Self {
        Letter { gen, inv: true }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    #[inline]
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    /// Position in the letter order `a < A < b < B < ...` used for
    /// length-lexicographic enumeration.
    pub fn rank(self) -> u32 {
        2 * self.gen + self.inv as u32
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces `letters`, rejecting generator indices `>= rank`.
    pub fn reduce<I>(letters: I, rank: u32) -> Result<Word, GroupError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.gen >= rank {
                return Err(GroupError::LetterOutOfRange { gen: l.gen, rank });
            }
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Ok(Word(out))
    }

    /// Wraps letters already known to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| !w[0].cancels(w[1])));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k].cancels(b[k]) {
            k += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
        out.extend_from_slice(&a[..a.len() - k]);
        out.extend_from_slice(&b[k..]);
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, n: i64) -> Word {
        if n == 0 || self.is_empty() {
            return Word::identity();
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let n = n.unsigned_abs();
        // g = u c u^-1 with c cyclically reduced, so g^n = u c^n u^-1 is reduced.
        let (u, c) = base.cyclic_split();
        let mut letters = Vec::with_capacity(2 * u.len() + c.len() * n as usize);
        letters.extend_from_slice(&u.0);
        for _ in 0..n {
            letters.extend_from_slice(&c.0);
        }
        letters.extend(u.0.iter().rev().map(|l| l.inverse()));
        Word(letters)
    }

    /// Splits `self = u c u^-1` with `c` cyclically reduced.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let w = &self.0;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k].cancels(w[w.len() - 1 - k]) {
            k += 1;
        }
        (
            Word(w[..k].to_vec()),
            Word(w[k..w.len() - k].to_vec()),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(f), Some(l)) if self.0.len() > 1 => !f.cancels(*l),
            _ => true,
        }
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(x, y)| x == y)
            .count()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn exponent_sum(&self, gen: u32) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.sign())
            .sum()
    }

    /// Primitive root `r` and exponent `k` with `c = r^k`, for a cyclically
    /// reduced nonempty `c`.
    pub fn primitive_root(&self) -> (Word, usize) {
        let n = self.0.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]) {
                return (Word(self.0[..d].to_vec()), n / d);
            }
        }
        (self.clone(), 1)
    }

    /// Ordering key for length-lexicographic enumeration.
    pub fn lex_key(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|l| l.rank())
    }
}

/// Renders with a naming function, collapsing runs into powers.
pub(crate) fn render_letters(
    f: &mut fmt::Formatter<'_>,
    letters: &[Letter],
    name: &dyn Fn(u32) -> String,
) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let run = (j - i) as i64 * l.sign();
        if !first {
            write!(f, " ")?;
        }
        first = false;
        if run == 1 {
            write!(f, "{}", name(l.gen))?;
        } else {
            write!(f, "{}^{}", name(l.gen), run)?;
        }
        i = j;
    }
    Ok(())
}
