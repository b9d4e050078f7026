//! Finite free chain complexes over RG: presentation complexes from Fox
//! calculus, dualization, twisting, Euler characteristic and homology with
//! trivial field coefficients.

use std::sync::Arc;

use thiserror::Error;

use crate::group_ring::{Character, GroupRingElement, GroupRingError, GroupRingMatrix};
use crate::groups::Group;
use crate::ring::{RingDescriptor, RingError, RingValue};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("composite of the differentials into degree {0} is nonzero")]
    NotAComplex(usize),
    #[error("{0}")]
    Shape(String),
}

/// `C_top -> ... -> C_1 -> C_0` with `d_k` stored as a
/// `rank(C_k) x rank(C_{k-1})` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    differentials: Vec<GroupRingMatrix>,
}

/// Fox derivative `dw/ds`: `ds/ds = 1`, `ds^-1/ds = -s^-1`,
/// `d(uv)/ds = du/ds + u dv/ds`.
pub fn fox_derivative(
    w: &Word,
    s: usize,
    ring: RingDescriptor,
    group: &Arc<Group>,
) -> Result<GroupRingElement, GroupRingError> {
    let mut terms = Vec::new();
    let mut prefix = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if l.gen() == s {
            if l.inverse {
                prefix.push(l);
                terms.push((Word(prefix.clone()), ring.from_int(-1)));
                continue;
            }
            terms.push((Word(prefix.clone()), ring.one()));
        }
        prefix.push(l);
    }
    GroupRingElement::from_terms(ring, group.clone(), terms)
}

/// Relators-by-generators matrix of Fox derivatives.
pub fn fox_jacobian(group: &Arc<Group>, ring: RingDescriptor) -> Result<GroupRingMatrix, GroupRingError> {
    let p = group.presentation();
    let rows = p
        .relators()
        .iter()
        .map(|r| {
            (0..p.generator_count())
                .map(|s| fox_derivative(r, s, ring, group))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupRingMatrix::from_rows(ring, group.clone(), rows, p.generator_count())
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, differentials: Vec<GroupRingMatrix>) -> Result<Self, ComplexError> {
        if ranks.is_empty() || differentials.len() + 1 != ranks.len() {
            return Err(ComplexError::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if (d.rows(), d.cols()) != (ranks[k + 1], ranks[k]) {
                return Err(ComplexError::Shape(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        Ok(ChainComplex { ranks, differentials })
    }

    /// Ranks `(1, m, #relators)`, `d_1 = (1 - s_i)^T`, `d_2` the Fox Jacobian.
    pub fn presentation_complex(group: &Arc<Group>, ring: RingDescriptor) -> Result<Self, ComplexError> {
        let p = group.presentation();
        let m = p.generator_count();
        let one = GroupRingElement::one(ring, group.clone());
        let d1_rows = (0..m)
            .map(|i| {
                let s = GroupRingElement::monomial(ring, group.clone(), &Word(vec![Letter::pos(i)]), ring.one());
                one.sub(&s).map(|e| vec![e])
            })
            .collect::<Result<Vec<_>, _>>()?;
        let d1 = GroupRingMatrix::from_rows(ring, group.clone(), d1_rows, 1)?;
        let d2 = fox_jacobian(group, ring)?;
        Self::new(vec![1, m, p.relators().len()], vec![d1, d2])
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Top degree.
    pub fn dimension(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_k : C_k -> C_{k-1}` for `1 <= k <= dimension`.
    pub fn differential(&self, k: usize) -> &GroupRingMatrix {
        &self.differentials[k - 1]
    }

    pub fn differentials(&self) -> &[GroupRingMatrix] {
        &self.differentials
    }

    pub fn ring(&self) -> Option<RingDescriptor> {
        self.differentials.first().map(GroupRingMatrix::ring)
    }

    /// `d_k d_{k-1}` (first `d_k`, then `d_{k-1}`) for `2 <= k <= dimension`.
    pub fn composite(&self, k: usize) -> Result<GroupRingMatrix, ComplexError> {
        Ok(self.differential(k).mul(self.differential(k - 1))?)
    }

    /// Checks that every composite of consecutive differentials vanishes.
    pub fn verify(&self) -> Result<(), ComplexError> {
        for k in 2..=self.dimension() {
            if !self.composite(k)?.is_zero() {
                return Err(ComplexError::NotAComplex(k - 2));
            }
        }
        Ok(())
    }

    /// Applies `Hom(-, RG)` and re-indexes so that degree `j` holds the dual
    /// of `C_{n-j}`; the differential out of degree `j` is `(d_{n-j+1})^dagger`.
    pub fn dualize(&self) -> Self {
        let n = self.dimension();
        let ranks = self.ranks.iter().rev().copied().collect();
        let differentials = (1..=n)
            .map(|j| self.differential(n - j + 1).conjugate_transpose())
            .collect();
        ChainComplex { ranks, differentials }
    }

    /// Twists every entry by `rho`, which must be a character of the group.
    pub fn twist(&self, rho: &Character) -> Result<Self, ComplexError> {
        if let Some(d) = self.differentials.first() {
            if !rho.validate(d.group().presentation())? {
                return Err(GroupRingError::InvalidCharacter("values do not satisfy the relators".into()).into());
            }
        }
        Ok(ChainComplex {
            ranks: self.ranks.clone(),
            differentials: self
                .differentials
                .iter()
                .map(|d| d.twist(rho))
                .collect::<Result<_, _>>()?,
        })
    }

    /// `sum_k (-1)^k rank C_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Betti numbers of `C (x)_RG F` with G acting trivially on the field F.
    pub fn homology_trivial_coeffs(&self, field: RingDescriptor) -> Result<Vec<usize>, ComplexError> {
        if !field.is_field() {
            return Err(RingError::NotAField(field).into());
        }
        // rank of d_k for k = 0..=dimension + 1, with d_0 = d_{top+1} = 0
        let mut ranks_of_d = vec![0usize];
        for d in &self.differentials {
            let scalars = (0..d.rows())
                .map(|i| {
                    d.row(i)
                        .iter()
                        .map(|e| Ok(e.augmentation()?.coerce(field)?))
                        .collect::<Result<Vec<_>, ComplexError>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            ranks_of_d.push(field_rank(scalars)?);
        }
        ranks_of_d.push(0);
        Ok((0..self.ranks.len())
            .map(|k| self.ranks[k] - ranks_of_d[k] - ranks_of_d[k + 1])
            .collect())
    }
}

/// Rank over a field by Gaussian elimination.
pub fn field_rank(mut rows: Vec<Vec<RingValue>>) -> Result<usize, RingError> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c]
            .field_inverse()
            .ok_or(RingError::NotAField(rows[rank][c].descriptor()))?;
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].checked_mul(&inv)?;
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = x.checked_add(&factor.checked_mul(p)?.checked_neg()?)?;
            }
        }
        rank += 1;
    }
    Ok(rank)
}
