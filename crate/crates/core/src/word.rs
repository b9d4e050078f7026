//! Words in a finite alphabet of generators and their inverses.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest supported generator count; generators are named `a`..`z`.
pub const MAX_GENERATORS: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed word {0:?}")]
    Malformed(String),
}

/// A generator or its inverse. Ordered `a < a^-1 < b < b^-1 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter {
            gen: gen as u32,
            inverse,
        }
    }

    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn gen(self) -> usize {
        self.gen as usize
    }

    /// Dense index `2*gen + inverse`, matching the letter order.
    pub fn index(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter::new(i / 2, i % 2 == 1)
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// All letters over `generator_count` generators, in letter order.
    pub fn alphabet(generator_count: usize) -> impl Iterator<Item = Letter> {
        (0..2 * generator_count).map(Letter::from_index)
    }
}

pub fn generator_name(gen: usize) -> char {
    (b'a' + gen as u8) as char
}

/// A word in the generators. Ordered shortlex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// `[a,b] = a b a^-1 b^-1`.
    pub fn commutator(a: usize, b: usize) -> Self {
        Word(vec![Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)])
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

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            out.extend_from_slice(&base.0);
        }
        Word(out)
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.len() == 1 || f != l.inv(),
                _ => true,
            }
    }

    /// Freely and cyclically reduced form (a conjugate of the input).
    pub fn cyclic_reduce(&self) -> Word {
        let mut v = self.free_reduce().0;
        while v.len() >= 2 && v[0] == v[v.len() - 1].inv() {
            v.pop();
            v.remove(0);
        }
        Word(v)
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::identity();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Least representative, in letter order, among the rotations of the
    /// word and of its inverse.
    pub fn necklace_representative(&self) -> Word {
        let inv = self.inverse();
        (0..self.len().max(1))
            .flat_map(|k| [self.rotate(k), inv.rotate(k)])
            .min_by(|a, b| a.0.cmp(&b.0))
            .unwrap_or_default()
    }

    /// Signed exponent sum of every generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for l in &self.0 {
            sums[l.gen()] += l.sign();
        }
        sums
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen()).max()
    }

    /// Parses `"a b a^-1 b^-1"`, `"ab^2"`, `"a*b^-1"`, or `"1"` for the identity.
    pub fn parse(text: &str, generator_count: usize) -> Result<Word, WordError> {
        let malformed = || WordError::Malformed(text.to_string());
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(Word::identity());
        }
        let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '*' {
                i += 1;
                continue;
            }
            if !c.is_ascii_lowercase() {
                return Err(malformed());
            }
            let gen = (c as u8 - b'a') as usize;
            if gen >= generator_count {
                return Err(WordError::UnknownGenerator(c.to_string()));
            }
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                exp = s.parse().map_err(|_| malformed())?;
            }
            let l = Letter::new(gen, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                letters.push(l);
            }
        }
        Ok(Word(letters))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Runs of a repeated letter print as powers: `a^2b^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            write!(f, "{}", generator_name(l.gen()))?;
            if run != 1 {
                write!(f, "^{run}")?;
            }
            i = j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let w = Word::parse("a b a^-1 b^-1", 2).unwrap();
        assert_eq!(w, Word::commutator(0, 1));
        assert_eq!(w.to_string(), "aba^-1b^-1");
        assert_eq!(Word::parse("a^2*b^-2", 2).unwrap().to_string(), "a^2b^-2");
        assert_eq!(Word::parse("1", 2).unwrap(), Word::identity());
        assert!(Word::parse("c", 2).is_err());
        assert!(Word::parse("a^", 2).is_err());
    }

    #[test]
    fn reductions() {
        let w = Word::parse("a a^-1 b", 2).unwrap();
        assert_eq!(w.free_reduce().to_string(), "b");
        let c = Word::parse("b a b^-1", 2).unwrap();
        assert_eq!(c.cyclic_reduce().to_string(), "a");
        assert!(Word::commutator(0, 1).is_cyclically_reduced());
    }

    #[test]
    fn shortlex_and_letter_order() {
        let a = Word::parse("a", 2).unwrap();
        let ai = Word::parse("a^-1", 2).unwrap();
        let b = Word::parse("b", 2).unwrap();
        let aa = Word::parse("a^2", 2).unwrap();
        let mut v = vec![aa.clone(), b.clone(), ai.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, ai, b, aa]);
    }

    #[test]
    fn necklaces_agree_across_rotations_and_inversion() {
        let w = Word::commutator(0, 1);
        let rep = w.necklace_representative();
        for k in 0..4 {
            assert_eq!(w.rotate(k).necklace_representative(), rep);
            assert_eq!(w.inverse().rotate(k).necklace_representative(), rep);
        }
    }
}
