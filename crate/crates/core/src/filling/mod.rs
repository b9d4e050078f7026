//! Truncated Cayley 2-complexes and minimal-support fillings of 1-cycles.

mod search;
mod sweep;
mod transfer;

use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::groups::{Ball, Group, GroupError};
use crate::ring::RingDescriptor;
use crate::word::{Letter, Word};

pub use search::{minimal_filling, FillingOptions, FillingResult};
pub use sweep::{
    isoperimetric_sweep, null_homotopic_necklaces, CycleOutcome, CycleStatus, RatioCount, SweepConfig, SweepReport,
};
pub use transfer::{transfer_constant, TransferCheck, TransferPair, TransferSample};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillingError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("word {0} does not represent the identity")]
    NotACycle(String),
    #[error("path of {0} leaves the window")]
    OutOfWindow(String),
    #[error("no filling within the window and coefficient bound")]
    NoFillingInWindow,
    #[error("fillings are computed over Z or Z/m, not {0}")]
    UnsupportedRing(RingDescriptor),
    #[error("vector of length {got} does not match a basis of size {expected}")]
    Length { expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("negative input: {0}")]
    NegativeInput(String),
}

/// Coefficient domain for chains in the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    /// Integers; fillers are searched with entries in `[-bound, bound]`.
    Integer { bound: i64 },
    /// Residues mod m; every residue is allowed.
    Modular { modulus: i64 },
}

impl Coefficients {
    pub fn new(ring: RingDescriptor, coeff_bound: i64) -> Result<Self, FillingError> {
        match ring {
            RingDescriptor::Integers => Ok(Coefficients::Integer {
                bound: coeff_bound.max(1),
            }),
            RingDescriptor::IntegersMod(m) => Ok(Coefficients::Modular { modulus: m as i64 }),
            other => Err(FillingError::UnsupportedRing(other)),
        }
    }

    pub(crate) fn reduce(self, x: i64) -> i64 {
        match self {
            Coefficients::Integer { .. } => x,
            Coefficients::Modular { modulus } => x.rem_euclid(modulus),
        }
    }
}

/// The part of the Cayley 2-complex spanned by a ball: all vertices of the
/// ball, an edge `(v, s)` for each generator whose endpoint stays inside,
/// and a face `(v, r)` for each relator whose whole attaching path stays
/// inside. Boundaries follow the row convention: `d(v, s) = vs - v`, and a
/// face's boundary is the signed sum of the edges along its relator read
/// from the base vertex.
#[derive(Debug, Clone)]
pub struct CayleyBallComplex {
    group: Arc<Group>,
    ball: Ball,
    coefficients: Coefficients,
    edges: Vec<(u32, u32)>,
    /// `edge_of[v * m + s]`
    edge_of: Vec<Option<u32>>,
    faces: Vec<(u32, u32)>,
    face_boundary: Vec<Vec<(u32, i64)>>,
    edge_faces: Vec<Vec<(u32, i64)>>,
}

/// Signed edge walk of `w` from vertex `v`; `None` if the path leaves the window.
fn edge_walk(ball: &Ball, edge_of: &[Option<u32>], m: usize, v: usize, w: &Word) -> Option<(Vec<(u32, i64)>, usize)> {
    let mut cur = v;
    let mut steps = Vec::with_capacity(w.len());
    for &l in w.letters() {
        let next = ball.neighbor(cur, l)?;
        let (tail, sign) = if l.inverse { (next, -1) } else { (cur, 1) };
        steps.push((edge_of[tail * m + l.gen()]?, sign));
        cur = next;
    }
    Some((steps, cur))
}

fn accumulate(steps: &[(u32, i64)]) -> Vec<(u32, i64)> {
    let mut v = steps.to_vec();
    v.sort_unstable();
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(v.len());
    for (e, s) in v {
        match out.last_mut() {
            Some(last) if last.0 == e => last.1 += s,
            _ => out.push((e, s)),
        }
    }
    out.retain(|&(_, s)| s != 0);
    out
}

impl CayleyBallComplex {
    pub fn build(
        group: &Arc<Group>,
        radius: usize,
        ring: RingDescriptor,
        max_elements: usize,
    ) -> Result<Self, FillingError> {
        let coefficients = Coefficients::new(ring, 1)?;
        let ball = group.ball(radius, max_elements)?;
        let m = group.generator_count();
        let mut edges = Vec::new();
        let mut edge_of = vec![None; ball.len() * m];
        for v in 0..ball.len() {
            for s in 0..m {
                if ball.neighbor(v, Letter::pos(s)).is_some() {
                    edge_of[v * m + s] = Some(edges.len() as u32);
                    edges.push((v as u32, s as u32));
                }
            }
        }
        let mut faces = Vec::new();
        let mut face_boundary = Vec::new();
        let mut edge_faces = vec![Vec::new(); edges.len()];
        for v in 0..ball.len() {
            for (ri, r) in group.presentation().relators().iter().enumerate() {
                if let Some((steps, end)) = edge_walk(&ball, &edge_of, m, v, r) {
                    if end != v {
                        return Err(FillingError::Invariant(format!(
                            "relator {r} does not close up at vertex {v}"
                        )));
                    }
                    let f = faces.len() as u32;
                    let boundary = accumulate(&steps);
                    for &(e, k) in &boundary {
                        edge_faces[e as usize].push((f, k));
                    }
                    faces.push((v as u32, ri as u32));
                    face_boundary.push(boundary);
                }
            }
        }
        Ok(CayleyBallComplex {
            group: group.clone(),
            ball,
            coefficients,
            edges,
            edge_of,
            faces,
            face_boundary,
            edge_faces,
        })
    }

    /// Same window, different coefficient bound (ignored for residue rings).
    pub fn with_coeff_bound(mut self, bound: i64) -> Self {
        if let Coefficients::Integer { .. } = self.coefficients {
            self.coefficients = Coefficients::Integer { bound: bound.max(1) };
        }
        self
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn vertex_count(&self) -> usize {
        self.ball.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// `(source vertex, generator)` of an edge.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        let (v, s) = self.edges[e];
        (v as usize, s as usize)
    }

    /// `(base vertex, relator index)` of a face.
    pub fn face(&self, f: usize) -> (usize, usize) {
        let (v, r) = self.faces[f];
        (v as usize, r as usize)
    }

    /// Nonzero entries of row `f` of the face boundary matrix.
    pub fn face_boundary(&self, f: usize) -> &[(u32, i64)] {
        &self.face_boundary[f]
    }

    /// Faces incident to edge `e`, with incidence numbers.
    pub fn edge_faces(&self, e: usize) -> &[(u32, i64)] {
        &self.edge_faces[e]
    }

    /// Longest face boundary, counted in edges of the attaching path.
    pub fn max_face_length(&self) -> usize {
        self.group.presentation().max_relator_length().unwrap_or(0)
    }

    /// Dense `#edges x #vertices` incidence matrix.
    pub fn boundary1(&self) -> Vec<Vec<i64>> {
        let m = self.group.generator_count();
        self.edges
            .iter()
            .map(|&(v, s)| {
                let mut row = vec![0; self.vertex_count()];
                let t = self.ball.neighbor(v as usize, Letter::pos(s as usize)).unwrap();
                row[v as usize] -= 1;
                row[t] += 1;
                debug_assert!(self.edge_of[v as usize * m + s as usize].is_some());
                row
            })
            .collect()
    }

    /// Dense `#faces x #edges` boundary matrix.
    pub fn boundary2(&self) -> Vec<Vec<i64>> {
        self.face_boundary
            .iter()
            .map(|b| {
                let mut row = vec![0; self.edge_count()];
                for &(e, k) in b {
                    row[e as usize] = k;
                }
                row
            })
            .collect()
    }

    /// Boundary of a 1-chain, as a vertex vector.
    pub fn boundary_of_edges(&self, chain: &[i64]) -> Result<Vec<i64>, FillingError> {
        if chain.len() != self.edge_count() {
            return Err(FillingError::Length {
                expected: self.edge_count(),
                got: chain.len(),
            });
        }
        let mut out = vec![0i64; self.vertex_count()];
        for (e, &c) in chain.iter().enumerate() {
            if c != 0 {
                let (v, s) = self.edges[e];
                let t = self.ball.neighbor(v as usize, Letter::pos(s as usize)).unwrap();
                out[v as usize] -= c;
                out[t] += c;
            }
        }
        Ok(out.into_iter().map(|x| self.coefficients.reduce(x)).collect())
    }

    /// Boundary of a 2-chain, as an edge vector.
    pub fn boundary_of_faces(&self, chain: &[i64]) -> Result<Vec<i64>, FillingError> {
        if chain.len() != self.face_count() {
            return Err(FillingError::Length {
                expected: self.face_count(),
                got: chain.len(),
            });
        }
        let mut out = vec![0i64; self.edge_count()];
        for (f, &c) in chain.iter().enumerate() {
            if c != 0 {
                for &(e, k) in &self.face_boundary[f] {
                    out[e as usize] += k * c;
                }
            }
        }
        Ok(out.into_iter().map(|x| self.coefficients.reduce(x)).collect())
    }

    /// Signed edge vector of the path of `w` starting at the element `base`.
    /// `w` must represent the identity.
    pub fn word_cycle_at(&self, base: &Word, w: &Word) -> Result<Vec<i64>, FillingError> {
        if !self.group.is_identity(w) {
            return Err(FillingError::NotACycle(w.to_string()));
        }
        let v = self
            .ball
            .index_of(base)
            .ok_or_else(|| FillingError::OutOfWindow(base.to_string()))?;
        self.cycle_from_vertex(v, w)
            .ok_or_else(|| FillingError::OutOfWindow(w.to_string()))
    }

    pub fn word_cycle(&self, w: &Word) -> Result<Vec<i64>, FillingError> {
        self.word_cycle_at(&Word::identity(), w)
    }

    pub(crate) fn cycle_from_vertex(&self, v: usize, w: &Word) -> Option<Vec<i64>> {
        let m = self.group.generator_count();
        let (steps, _) = edge_walk(&self.ball, &self.edge_of, m, v, w)?;
        let mut cycle = vec![0i64; self.edge_count()];
        for (e, s) in steps {
            cycle[e as usize] += s;
        }
        for c in &mut cycle {
            *c = self.coefficients.reduce(*c);
        }
        Some(cycle)
    }
}

/// Support size of a chain.
pub fn support(chain: &[i64]) -> usize {
    chain.iter().filter(|&&c| c != 0).count()
}

pub(crate) fn ratio(num: usize, den: usize) -> Ratio<i64> {
    if den == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(num as i64, den as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_group, GroupSpec};

    const Z: RingDescriptor = RingDescriptor::Integers;

    fn window(spec: &str, r: usize) -> CayleyBallComplex {
        let g = make_group(&spec.parse::<GroupSpec>().unwrap()).unwrap();
        CayleyBallComplex::build(&g, r, Z, 1_000_000).unwrap()
    }

    fn compose_is_zero(x: &CayleyBallComplex) -> bool {
        (0..x.face_count()).all(|f| {
            let mut chain = vec![0; x.face_count()];
            chain[f] = 1;
            let b = x.boundary_of_faces(&chain).unwrap();
            x.boundary_of_edges(&b).unwrap().iter().all(|&c| c == 0)
        })
    }

    #[test]
    fn windows() {
        let f2 = window("F2", 2);
        assert_eq!((f2.vertex_count(), f2.face_count()), (17, 0));
        let z2 = window("Z^2", 2);
        // unit squares with all four corners in the l1 ball of radius 2
        assert_eq!(z2.face_count(), 4);
        assert!(compose_is_zero(&z2));
        let s2 = window("Sigma2", 1);
        assert_eq!((s2.vertex_count(), s2.face_count()), (9, 0));
        assert!(compose_is_zero(&window("Sigma2", 4)));
    }

    #[test]
    fn word_cycles() {
        let z2 = window("Z^2", 2);
        let c = z2.word_cycle(&Word::commutator(0, 1)).unwrap();
        assert_eq!(support(&c), 4);
        assert!(z2.boundary_of_edges(&c).unwrap().iter().all(|&x| x == 0));
        let back = z2.word_cycle(&Word::parse("a a^-1", 2).unwrap()).unwrap();
        assert_eq!(support(&back), 0);
        assert!(matches!(
            z2.word_cycle(&Word::parse("a", 2).unwrap()),
            Err(FillingError::NotACycle(_))
        ));
        assert!(matches!(
            z2.word_cycle(&Word::parse("a^3 b a^-3 b^-1", 2).unwrap()),
            Err(FillingError::OutOfWindow(_))
        ));

        let s2 = window("Sigma2", 4);
        let r = s2.group().presentation().relators()[0].clone();
        assert_eq!(support(&s2.word_cycle(&r).unwrap()), 8);
    }
}
