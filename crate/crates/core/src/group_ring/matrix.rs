use std::sync::Arc;

use crate::groups::Group;
use crate::ring::RingDescriptor;

use super::{same_group, Character, GroupRingElement, GroupRingError};

/// A dense matrix over RG, read as a map of based free modules acting on
/// row vectors from the right: `v -> v A`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingMatrix {
    ring: RingDescriptor,
    group: Arc<Group>,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn zeros(ring: RingDescriptor, group: Arc<Group>, rows: usize, cols: usize) -> Self {
        let zero = GroupRingElement::zero(ring, group.clone());
        GroupRingMatrix {
            ring,
            group,
            rows,
            cols,
            entries: vec![zero; rows * cols],
        }
    }

    pub fn identity(ring: RingDescriptor, group: Arc<Group>, n: usize) -> Self {
        let mut m = Self::zeros(ring, group.clone(), n, n);
        for i in 0..n {
            m.entries[i * n + i] = GroupRingElement::one(ring, group.clone());
        }
        m
    }

    /// Builds a matrix from rows, which must all have the same length.
    pub fn from_rows(
        ring: RingDescriptor,
        group: Arc<Group>,
        rows: Vec<Vec<GroupRingElement>>,
        cols: usize,
    ) -> Result<Self, GroupRingError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(GroupRingError::Shape(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(crate::ring::RingError::DescriptorMismatch(ring, e.ring()).into());
                }
                same_group(&group, e.group())?;
                entries.push(e);
            }
        }
        Ok(GroupRingMatrix {
            ring,
            group,
            rows: n,
            cols,
            entries,
        })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GroupRingElement) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[GroupRingElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// `|A| = sum_ij |a_ij|`.
    pub fn norm(&self) -> usize {
        self.entries.iter().map(GroupRingElement::norm).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }

    fn map_entries(
        &self,
        f: impl Fn(&GroupRingElement) -> Result<GroupRingElement, GroupRingError>,
    ) -> Result<Self, GroupRingError> {
        Ok(GroupRingMatrix {
            entries: self.entries.iter().map(f).collect::<Result<_, _>>()?,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupRingError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(GroupRingError::Shape(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<Self, GroupRingError> {
        self.map_entries(GroupRingElement::neg)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.add(&other.neg()?)
    }

    /// Matrix product `A B`; as maps on row vectors, first `A`, then `B`.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        if self.cols != other.rows {
            return Err(GroupRingError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(crate::ring::RingError::DescriptorMismatch(self.ring, other.ring).into());
        }
        same_group(&self.group, &other.group)?;
        let mut out = Self::zeros(self.ring, self.group.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut terms = Vec::new();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    for (wa, ca) in a.terms() {
                        for (wb, cb) in b.terms() {
                            terms.push((wa.concat(wb), ca.checked_mul(cb)?));
                        }
                    }
                }
                out.set(
                    i,
                    j,
                    GroupRingElement::from_terms(self.ring, self.group.clone(), terms)?,
                );
            }
        }
        Ok(out)
    }

    /// Entrywise involution followed by transpose: `(A^dagger)_ij = (A_ji)*`.
    pub fn conjugate_transpose(&self) -> Self {
        let mut out = Self::zeros(self.ring, self.group.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).involute());
            }
        }
        out
    }

    pub fn twist(&self, rho: &Character) -> Result<Self, GroupRingError> {
        self.map_entries(|e| e.twist(rho))
    }

    pub fn coerce(&self, target: RingDescriptor) -> Result<Self, GroupRingError> {
        let mut out = self.map_entries(|e| e.coerce(target))?;
        out.ring = target;
        Ok(out)
    }

    /// Entries as text, row by row.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.to_string()).collect())
            .collect()
    }

    pub fn parse_rows(
        rows: &[Vec<String>],
        cols: usize,
        ring: RingDescriptor,
        group: Arc<Group>,
    ) -> Result<Self, GroupRingError> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| GroupRingElement::parse(s, ring, group.clone()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(ring, group, parsed, cols)
    }
}
