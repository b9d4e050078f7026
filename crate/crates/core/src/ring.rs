//! Coefficient rings with involution.
//!
//! Four exact rings are supported: the integers, the rationals, the residue
//! rings `Z/m`, and the integer quaternions. Commutative rings carry the
//! identity involution; quaternions carry conjugation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedNeg, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    DescriptorMismatch(RingDescriptor, RingDescriptor),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("unknown ring descriptor {0:?} (expected Z, Q, Z/m or H)")]
    UnknownDescriptor(String),
    #[error("cannot parse {text:?} as an element of {ring}")]
    BadValue { ring: RingDescriptor, text: String },
    #[error("arithmetic overflow in {0}")]
    Overflow(RingDescriptor),
    #[error("{0} is not a field")]
    NotAField(RingDescriptor),
    #[error("cannot map {value} into {target}")]
    NoCoercion { value: String, target: RingDescriptor },
}

/// Which coefficient ring a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Rationals,
    IntegersMod(u64),
    Quaternions,
}

/// An exact ring element. The variant determines the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingValue {
    Int(i64),
    Rat(Ratio<i64>),
    Mod {
        residue: u64,
        modulus: u64,
    },
    /// `w + x i + y j + z k`
    Quat([i64; 4]),
}

impl RingDescriptor {
    pub fn integers_mod(modulus: u64) -> Result<Self, RingError> {
        if modulus < 2 {
            return Err(RingError::BadModulus(modulus));
        }
        Ok(RingDescriptor::IntegersMod(modulus))
    }

    pub fn zero(self) -> RingValue {
        self.from_int(0)
    }

    pub fn one(self) -> RingValue {
        self.from_int(1)
    }

    pub fn from_int(self, n: i64) -> RingValue {
        match self {
            RingDescriptor::Integers => RingValue::Int(n),
            RingDescriptor::Rationals => RingValue::Rat(Ratio::from_integer(n)),
            RingDescriptor::IntegersMod(m) => RingValue::Mod {
                residue: n.rem_euclid(m as i64) as u64,
                modulus: m,
            },
            RingDescriptor::Quaternions => RingValue::Quat([n, 0, 0, 0]),
        }
    }

    pub fn is_commutative(self) -> bool {
        !matches!(self, RingDescriptor::Quaternions)
    }

    /// Rationals and prime residue rings.
    pub fn is_field(self) -> bool {
        match self {
            RingDescriptor::Rationals => true,
            RingDescriptor::IntegersMod(m) => is_prime(m),
            _ => false,
        }
    }

    pub fn contains(self, value: &RingValue) -> bool {
        value.descriptor() == self
    }

    /// Units: `±1` in Z, residues coprime to m, nonzero fractions, and
    /// the eight quaternions `±1, ±i, ±j, ±k`.
    pub fn is_unit(self, value: &RingValue) -> bool {
        if !self.contains(value) {
            return false;
        }
        match *value {
            RingValue::Int(n) => n == 1 || n == -1,
            RingValue::Rat(q) => !q.is_zero(),
            RingValue::Mod { residue, modulus } => residue.gcd(&modulus) == 1,
            RingValue::Quat(q) => q.iter().map(|c| c.abs()).sum::<i64>() == 1,
        }
    }

    /// Two-sided inverse of a unit.
    pub fn unit_inverse(self, value: &RingValue) -> Option<RingValue> {
        if !self.is_unit(value) {
            return None;
        }
        Some(match *value {
            RingValue::Int(n) => RingValue::Int(n),
            RingValue::Rat(q) => RingValue::Rat(q.recip()),
            RingValue::Mod { residue, modulus } => {
                let inv = mod_inverse(residue, modulus)?;
                RingValue::Mod { residue: inv, modulus }
            }
            // unit quaternions have norm 1, so the inverse is the conjugate
            RingValue::Quat(_) => value.involute(),
        })
    }

    /// Parses a coefficient written in this ring: `-3`, `3/4`, `(w,x,y,z)`.
    pub fn parse_value(self, text: &str) -> Result<RingValue, RingError> {
        let t = text.trim();
        let bad = || RingError::BadValue {
            ring: self,
            text: text.to_string(),
        };
        match self {
            RingDescriptor::Integers | RingDescriptor::IntegersMod(_) => {
                let n: i64 = t.parse().map_err(|_| bad())?;
                Ok(self.from_int(n))
            }
            RingDescriptor::Rationals => {
                let q = match t.split_once('/') {
                    Some((p, d)) => {
                        let p: i64 = p.trim().parse().map_err(|_| bad())?;
                        let d: i64 = d.trim().parse().map_err(|_| bad())?;
                        if d == 0 {
                            return Err(bad());
                        }
                        Ratio::new(p, d)
                    }
                    None => Ratio::from_integer(t.parse().map_err(|_| bad())?),
                };
                Ok(RingValue::Rat(q))
            }
            RingDescriptor::Quaternions => {
                if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                    let parts: Vec<&str> = inner.split(',').collect();
                    if parts.len() != 4 {
                        return Err(bad());
                    }
                    let mut q = [0i64; 4];
                    for (slot, part) in q.iter_mut().zip(parts) {
                        *slot = part.trim().parse().map_err(|_| bad())?;
                    }
                    Ok(RingValue::Quat(q))
                } else {
                    let n: i64 = t.parse().map_err(|_| bad())?;
                    Ok(self.from_int(n))
                }
            }
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::IntegersMod(m) => write!(f, "Z/{m}"),
            RingDescriptor::Quaternions => write!(f, "H"),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" => Ok(RingDescriptor::Integers),
            "Q" => Ok(RingDescriptor::Rationals),
            "H" => Ok(RingDescriptor::Quaternions),
            other => {
                let m = other
                    .strip_prefix("Z/")
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| RingError::UnknownDescriptor(other.to_string()))?;
                RingDescriptor::integers_mod(m)
            }
        }
    }
}

impl RingValue {
    pub fn descriptor(&self) -> RingDescriptor {
        match *self {
            RingValue::Int(_) => RingDescriptor::Integers,
            RingValue::Rat(_) => RingDescriptor::Rationals,
            RingValue::Mod { modulus, .. } => RingDescriptor::IntegersMod(modulus),
            RingValue::Quat(_) => RingDescriptor::Quaternions,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            RingValue::Int(n) => n == 0,
            RingValue::Rat(q) => q.is_zero(),
            RingValue::Mod { residue, .. } => residue == 0,
            RingValue::Quat(q) => q == [0; 4],
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.descriptor().one()
    }

    fn same_ring(&self, other: &RingValue) -> Result<RingDescriptor, RingError> {
        let (a, b) = (self.descriptor(), other.descriptor());
        if a != b {
            return Err(RingError::DescriptorMismatch(a, b));
        }
        Ok(a)
    }

    pub fn checked_add(&self, other: &RingValue) -> Result<RingValue, RingError> {
        let ring = self.same_ring(other)?;
        let overflow = || RingError::Overflow(ring);
        Ok(match (*self, *other) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a.checked_add(b).ok_or_else(overflow)?),
            (RingValue::Rat(a), RingValue::Rat(b)) => RingValue::Rat(a.checked_add(&b).ok_or_else(overflow)?),
            (RingValue::Mod { residue: a, modulus }, RingValue::Mod { residue: b, .. }) => RingValue::Mod {
                residue: ((a as u128 + b as u128) % modulus as u128) as u64,
                modulus,
            },
            (RingValue::Quat(a), RingValue::Quat(b)) => {
                let mut out = [0i64; 4];
                for i in 0..4 {
                    out[i] = a[i].checked_add(b[i]).ok_or_else(overflow)?;
                }
                RingValue::Quat(out)
            }
            _ => unreachable!("descriptors already compared"),
        })
    }

    pub fn checked_mul(&self, other: &RingValue) -> Result<RingValue, RingError> {
        let ring = self.same_ring(other)?;
        let overflow = || RingError::Overflow(ring);
        Ok(match (*self, *other) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a.checked_mul(b).ok_or_else(overflow)?),
            (RingValue::Rat(a), RingValue::Rat(b)) => RingValue::Rat(a.checked_mul(&b).ok_or_else(overflow)?),
            (RingValue::Mod { residue: a, modulus }, RingValue::Mod { residue: b, .. }) => RingValue::Mod {
                residue: ((a as u128 * b as u128) % modulus as u128) as u64,
                modulus,
            },
            (RingValue::Quat(a), RingValue::Quat(b)) => RingValue::Quat(quaternion_product(a, b).ok_or_else(overflow)?),
            _ => unreachable!("descriptors already compared"),
        })
    }

    pub fn checked_neg(&self) -> Result<RingValue, RingError> {
        let overflow = || RingError::Overflow(self.descriptor());
        Ok(match *self {
            RingValue::Int(a) => RingValue::Int(a.checked_neg().ok_or_else(overflow)?),
            RingValue::Rat(a) => {
                let numer = a.numer().checked_neg().ok_or_else(overflow)?;
                RingValue::Rat(Ratio::new_raw(numer, *a.denom()))
            }
            RingValue::Mod { residue, modulus } => RingValue::Mod {
                residue: (modulus - residue) % modulus,
                modulus,
            },
            RingValue::Quat(q) => {
                let mut out = [0i64; 4];
                for i in 0..4 {
                    out[i] = q[i].checked_neg().ok_or_else(overflow)?;
                }
                RingValue::Quat(out)
            }
        })
    }

    /// The involution: identity on commutative rings, conjugation on quaternions.
    pub fn involute(&self) -> RingValue {
        match *self {
            RingValue::Quat([w, x, y, z]) => RingValue::Quat([w, -x, -y, -z]),
            other => other,
        }
    }

    /// Multiplicative inverse in a field.
    pub fn field_inverse(&self) -> Option<RingValue> {
        let ring = self.descriptor();
        if !ring.is_field() || self.is_zero() {
            return None;
        }
        ring.unit_inverse(self)
    }

    /// Image under the canonical map into `target` (Z into any ring, Q into Q,
    /// a residue ring into itself).
    pub fn coerce(&self, target: RingDescriptor) -> Result<RingValue, RingError> {
        match (*self, target) {
            (v, t) if v.descriptor() == t => Ok(v),
            (RingValue::Int(n), t) => Ok(t.from_int(n)),
            (v, t) => Err(RingError::NoCoercion {
                value: v.to_string(),
                target: t,
            }),
        }
    }

    /// Sign used when printing sums: true if the value reads as negative.
    pub(crate) fn reads_negative(&self) -> bool {
        match *self {
            RingValue::Int(n) => n < 0,
            RingValue::Rat(q) => q.is_negative(),
            RingValue::Mod { .. } => false,
            RingValue::Quat([w, x, y, z]) => x == 0 && y == 0 && z == 0 && w < 0,
        }
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Int(n) => write!(f, "{n}"),
            RingValue::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            RingValue::Mod { residue, .. } => write!(f, "{residue}"),
            RingValue::Quat([w, x, y, z]) => {
                if *x == 0 && *y == 0 && *z == 0 {
                    write!(f, "{w}")
                } else {
                    write!(f, "({w},{x},{y},{z})")
                }
            }
        }
    }
}

// Operator impls panic on mismatched rings or overflow; callers that cannot
// guarantee a common ring use the `checked_*` methods.
impl Add for RingValue {
    type Output = RingValue;
    fn add(self, rhs: RingValue) -> RingValue {
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for RingValue {
    type Output = RingValue;
    fn sub(self, rhs: RingValue) -> RingValue {
        self + (-rhs)
    }
}

impl Mul for RingValue {
    type Output = RingValue;
    fn mul(self, rhs: RingValue) -> RingValue {
        self.checked_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        self.checked_neg().unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Checked `ring_add`.
pub fn ring_add(a: &RingValue, b: &RingValue) -> Result<RingValue, RingError> {
    a.checked_add(b)
}

/// Checked `ring_mul`.
pub fn ring_mul(a: &RingValue, b: &RingValue) -> Result<RingValue, RingError> {
    a.checked_mul(b)
}

pub fn ring_involute(a: &RingValue) -> RingValue {
    a.involute()
}

fn quaternion_product(a: [i64; 4], b: [i64; 4]) -> Option<[i64; 4]> {
    let [a1, b1, c1, d1] = a.map(i128::from);
    let [a2, b2, c2, d2] = b.map(i128::from);
    let out = [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ];
    let mut res = [0i64; 4];
    for (slot, v) in res.iter_mut().zip(out) {
        *slot = i64::try_from(v).ok()?;
    }
    Some(res)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
