//! The group ring RG: finitely supported coefficient maps on a group, with
//! the support norm, the involution `(sum r_g g)* = sum r_g* g^-1`, twisting
//! by a character, and matrices acting on row vectors.

mod character;
mod matrix;
mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{ElementKey, Group};
use crate::ring::{RingDescriptor, RingError, RingValue};
use crate::word::Word;

pub use character::Character;
pub use matrix::GroupRingMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupRingError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("group ring elements over different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("twisting needs a commutative coefficient ring, got {0}")]
    UnsupportedTwist(RingDescriptor),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse {0:?} as a group ring element")]
    Parse(String),
}

#[derive(Debug, Clone)]
struct Term {
    key: ElementKey,
    word: Word,
    coeff: RingValue,
}

/// A finite sum `sum r_g g` with nonzero coefficients and one term per group
/// element. Terms are kept in shortlex order of their representative words.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    ring: RingDescriptor,
    group: Arc<Group>,
    terms: Vec<Term>,
}

fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> Result<(), GroupRingError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(GroupRingError::GroupMismatch(a.to_string(), b.to_string()))
    }
}

impl GroupRingElement {
    pub fn zero(ring: RingDescriptor, group: Arc<Group>) -> Self {
        GroupRingElement {
            ring,
            group,
            terms: Vec::new(),
        }
    }

    pub fn one(ring: RingDescriptor, group: Arc<Group>) -> Self {
        Self::monomial(ring, group, &Word::identity(), ring.one())
    }

    /// `coeff * g`, with `g` given by any word.
    pub fn monomial(ring: RingDescriptor, group: Arc<Group>, g: &Word, coeff: RingValue) -> Self {
        Self::from_terms(ring, group, [(g.clone(), coeff)]).expect("coefficient in ring")
    }

    /// Sums arbitrary `(word, coefficient)` pairs, merging equal group elements.
    pub fn from_terms(
        ring: RingDescriptor,
        group: Arc<Group>,
        terms: impl IntoIterator<Item = (Word, RingValue)>,
    ) -> Result<Self, GroupRingError> {
        let mut raw: Vec<Term> = Vec::new();
        for (w, c) in terms {
            if c.descriptor() != ring {
                return Err(RingError::DescriptorMismatch(ring, c.descriptor()).into());
            }
            if c.is_zero() {
                continue;
            }
            let word = group.normalize(&w);
            let key = group.key_of_normalized(&word);
            raw.push(Term { key, word, coeff: c });
        }
        raw.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.word.cmp(&b.word)));

        let mut merged: Vec<Term> = Vec::with_capacity(raw.len());
        let mut bucket_start = 0;
        for t in raw {
            if merged.get(bucket_start).is_some_and(|m| m.key != t.key) {
                bucket_start = merged.len();
            }
            match merged[bucket_start..]
                .iter_mut()
                .find(|m| group.equal_normalized(&m.word, &t.word))
            {
                Some(m) => m.coeff = m.coeff.checked_add(&t.coeff)?,
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        merged.sort_by(|a, b| a.word.cmp(&b.word).then_with(|| a.key.cmp(&b.key)));
        Ok(GroupRingElement {
            ring,
            group,
            terms: merged,
        })
    }

    fn rebuild(&self, terms: impl IntoIterator<Item = (Word, RingValue)>) -> Result<Self, GroupRingError> {
        Self::from_terms(self.ring, self.group.clone(), terms)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    /// `(word, coefficient)` pairs in shortlex order of the words.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RingValue)> {
        self.terms.iter().map(|t| (&t.word, &t.coeff))
    }

    /// The support norm: number of group elements with nonzero coefficient.
    pub fn norm(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Word> {
        self.terms.iter().map(|t| t.word.clone()).collect()
    }

    /// Coefficient of the group element represented by `g`.
    pub fn coefficient(&self, g: &Word) -> RingValue {
        let g = self.group.normalize(g);
        let key = self.group.key_of_normalized(&g);
        self.terms
            .iter()
            .find(|t| t.key == key && self.group.equal_normalized(&t.word, &g))
            .map_or(self.ring.zero(), |t| t.coeff)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), GroupRingError> {
        if self.ring != other.ring {
            return Err(RingError::DescriptorMismatch(self.ring, other.ring).into());
        }
        same_group(&self.group, &other.group)
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_compatible(other)?;
        self.rebuild(self.terms.iter().chain(&other.terms).map(|t| (t.word.clone(), t.coeff)))
    }

    pub fn neg(&self) -> Result<Self, GroupRingError> {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = t.coeff.checked_neg()?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.add(&other.neg()?)
    }

    /// Convolution: the coefficient of `g` is `sum_{hk = g} x(h) y(k)`.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_compatible(other)?;
        let mut products = Vec::with_capacity(self.norm() * other.norm());
        for a in &self.terms {
            for b in &other.terms {
                products.push((a.word.concat(&b.word), a.coeff.checked_mul(&b.coeff)?));
            }
        }
        self.rebuild(products)
    }

    /// `r * x`, scaling from the left.
    pub fn scale_left(&self, r: &RingValue) -> Result<Self, GroupRingError> {
        let mut out = Vec::with_capacity(self.norm());
        for t in &self.terms {
            out.push((t.word.clone(), r.checked_mul(&t.coeff)?));
        }
        self.rebuild(out)
    }

    /// `x * r`, scaling from the right.
    pub fn scale_right(&self, r: &RingValue) -> Result<Self, GroupRingError> {
        let mut out = Vec::with_capacity(self.norm());
        for t in &self.terms {
            out.push((t.word.clone(), t.coeff.checked_mul(r)?));
        }
        self.rebuild(out)
    }

    /// `(sum r_g g)* = sum r_g* g^-1`.
    pub fn involute(&self) -> Self {
        self.rebuild(self.terms.iter().map(|t| (t.word.inverse(), t.coeff.involute())))
            .expect("involution preserves the ring")
    }

    /// `sum r_g g  ->  sum r_g rho(g) g`.
    pub fn twist(&self, rho: &Character) -> Result<Self, GroupRingError> {
        if !self.ring.is_commutative() {
            return Err(GroupRingError::UnsupportedTwist(self.ring));
        }
        if rho.ring() != self.ring {
            return Err(RingError::DescriptorMismatch(self.ring, rho.ring()).into());
        }
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = t.coeff.checked_mul(&rho.eval(&t.word)?)?;
        }
        out.terms.retain(|t| !t.coeff.is_zero());
        Ok(out)
    }

    /// Sum of the coefficients (the map `g -> 1`).
    pub fn augmentation(&self) -> Result<RingValue, GroupRingError> {
        let mut s = self.ring.zero();
        for t in &self.terms {
            s = s.checked_add(&t.coeff)?;
        }
        Ok(s)
    }

    /// Image under the coefficient map `R -> S` (from Z into any ring).
    pub fn coerce(&self, target: RingDescriptor) -> Result<Self, GroupRingError> {
        let mut out = Vec::with_capacity(self.norm());
        for t in &self.terms {
            out.push((t.word.clone(), t.coeff.coerce(target)?));
        }
        Self::from_terms(target, self.group.clone(), out)
    }
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        if self.check_compatible(other).is_err() {
            return false;
        }
        if self.group.has_canonical_forms() {
            return self.terms.len() == other.terms.len()
                && self
                    .terms
                    .iter()
                    .zip(&other.terms)
                    .all(|(a, b)| a.word == b.word && a.coeff == b.coeff);
        }
        self.sub(other).is_ok_and(|d| d.is_zero())
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_element(self))
    }
}

impl GroupRingElement {
    /// Parses `"1 - a + 2*b^-1"`; coefficients are read in `ring`.
    pub fn parse(text: &str, ring: RingDescriptor, group: Arc<Group>) -> Result<Self, GroupRingError> {
        text::parse_element(text, ring, group)
    }
}
