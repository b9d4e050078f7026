use crate::groups::Presentation;
use crate::ring::{RingDescriptor, RingValue};
use crate::word::{Word, MAX_GENERATORS};

use super::GroupRingError;

/// A homomorphism from the group to the units of R, given by its values on
/// the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    ring: RingDescriptor,
    values: Vec<RingValue>,
}

impl Character {
    pub fn new(ring: RingDescriptor, values: Vec<RingValue>) -> Result<Self, GroupRingError> {
        for (i, v) in values.iter().enumerate() {
            if !ring.is_unit(v) {
                return Err(GroupRingError::InvalidCharacter(format!(
                    "value {v} on generator {} is not a unit of {ring}",
                    crate::word::generator_name(i)
                )));
            }
        }
        Ok(Character { ring, values })
    }

    pub fn trivial(ring: RingDescriptor, generator_count: usize) -> Self {
        Character {
            ring,
            values: vec![ring.one(); generator_count],
        }
    }

    /// Parses `"a:-1,b:1"`. Generators not mentioned take the value 1.
    pub fn parse(text: &str, ring: RingDescriptor, generator_count: usize) -> Result<Self, GroupRingError> {
        let bad = |m: String| GroupRingError::InvalidCharacter(m);
        let mut values = vec![ring.one(); generator_count];
        let mut seen = [false; MAX_GENERATORS];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once(':')
                .ok_or_else(|| bad(format!("expected gen:value, got {part:?}")))?;
            let name = name.trim();
            let gen = match name.as_bytes() {
                [c @ b'a'..=b'z'] => (c - b'a') as usize,
                _ => return Err(bad(format!("unknown generator {name:?}"))),
            };
            if gen >= generator_count {
                return Err(bad(format!("unknown generator {name:?}")));
            }
            if std::mem::replace(&mut seen[gen], true) {
                return Err(bad(format!("generator {name:?} given twice")));
            }
            values[gen] = ring.parse_value(value).map_err(|e| bad(e.to_string()))?;
        }
        Self::new(ring, values)
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn values(&self) -> &[RingValue] {
        &self.values
    }

    /// Value on a word: the product of generator values (inverted for
    /// inverse letters), taken left to right.
    pub fn eval(&self, w: &Word) -> Result<RingValue, GroupRingError> {
        let mut acc = self.ring.one();
        for l in w.letters() {
            let v = self
                .values
                .get(l.gen())
                .ok_or_else(|| GroupRingError::InvalidCharacter(format!("no value for generator {}", l.gen())))?;
            let v = if l.inverse {
                self.ring.unit_inverse(v).expect("character values are units")
            } else {
                *v
            };
            acc = acc.checked_mul(&v)?;
        }
        Ok(acc)
    }

    /// True iff every relator evaluates to 1, i.e. the assignment defines a
    /// homomorphism on the presented group.
    pub fn validate(&self, p: &Presentation) -> Result<bool, GroupRingError> {
        if self.values.len() != p.generator_count() {
            return Err(GroupRingError::InvalidCharacter(format!(
                "{} values for {} generators",
                self.values.len(),
                p.generator_count()
            )));
        }
        for r in p.relators() {
            if !self.eval(r)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pointwise inverse; twisting by it undoes twisting by `self`.
    pub fn inverse(&self) -> Self {
        Character {
            ring: self.ring,
            values: self
                .values
                .iter()
                .map(|v| self.ring.unit_inverse(v).expect("character values are units"))
                .collect(),
        }
    }
}
