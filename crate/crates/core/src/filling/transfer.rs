//! Moving a linear isoperimetric constant between two resolutions.
//!
//! Given chain maps `xi: C -> C'`, `zeta: C' -> C` and a homotopy `H` with
//! `zeta xi = id - d'H - Hd'` on `C'`, a boundary `gamma` in `C'_1` is
//! filled by `d xi_2 + gamma H_1`, where `d` fills `gamma zeta_1` in `C`.
//! Its support is at most `(kappa |X| |Z| + |H|) |gamma|`.

use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{ChainComplex, ComplexError};
use crate::group_ring::{GroupRingElement, GroupRingError, GroupRingMatrix};
use crate::groups::{make_group, Group, GroupSpec};
use crate::ring::RingDescriptor;
use crate::word::Word;

use super::FillingError;

/// `kappa |X| |Z| + |H|`.
pub fn transfer_constant(kappa: Ratio<i64>, norm_x: i64, norm_z: i64, norm_h: i64) -> Result<Ratio<i64>, FillingError> {
    if kappa < Ratio::from_integer(0) {
        return Err(FillingError::NegativeInput(format!("kappa = {kappa}")));
    }
    for (name, v) in [("|X|", norm_x), ("|Z|", norm_z), ("|H|", norm_h)] {
        if v < 0 {
            return Err(FillingError::NegativeInput(format!("{name} = {v}")));
        }
    }
    Ok(kappa * norm_x * norm_z + norm_h)
}

/// Two resolutions with explicit comparison maps in degrees 0..=2.
#[derive(Debug, Clone)]
pub struct TransferPair {
    pub source: ChainComplex,
    pub target: ChainComplex,
    /// `xi_k: C_k -> C'_k`
    pub xi: Vec<GroupRingMatrix>,
    /// `zeta_k: C'_k -> C_k`
    pub zeta: Vec<GroupRingMatrix>,
    /// `H_k: C'_k -> C'_{k+1}` for k = 0, 1
    pub homotopy: Vec<GroupRingMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferSample {
    pub gamma_norm: usize,
    pub filler_norm: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub bound: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferCheck {
    pub samples: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub kappa_hat: Ratio<i64>,
    pub norm_x: usize,
    pub norm_z: usize,
    pub norm_h: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub constant: Ratio<i64>,
    /// Samples whose filler failed to have boundary `gamma`.
    pub boundary_failures: usize,
    /// Samples exceeding the bound.
    pub violations: usize,
    pub per_sample: Vec<TransferSample>,
}

fn matrix(
    ring: RingDescriptor,
    g: &Arc<Group>,
    rows: &[&[&str]],
    cols: usize,
) -> Result<GroupRingMatrix, GroupRingError> {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    GroupRingMatrix::parse_rows(&rows, cols, ring, g.clone())
}

impl TransferPair {
    /// The presentation complex of Z^2 against the copy with its two edge
    /// generators swapped, compared through a non-trivial homotopy.
    pub fn z2_swap() -> Result<Self, ComplexError> {
        let ring = RingDescriptor::Integers;
        let g = make_group(&GroupSpec::FreeAbelian(2)).map_err(|e| ComplexError::Shape(e.to_string()))?;
        let source = ChainComplex::presentation_complex(&g, ring)?;
        let p = matrix(ring, &g, &[&["0", "1"], &["1", "0"]], 2)?;
        let i1 = GroupRingMatrix::identity(ring, g.clone(), 1);
        let i2 = GroupRingMatrix::identity(ring, g.clone(), 2);
        let target = ChainComplex::new(
            vec![1, 2, 1],
            vec![p.mul(source.differential(1))?, source.differential(2).mul(&p)?],
        )?;
        let h0 = GroupRingMatrix::zeros(ring, g.clone(), 1, 2);
        let h1 = matrix(ring, &g, &[&["b"], &["0"]], 1)?;
        // phi = id - d'H - Hd' is chain homotopic to the identity
        let phi1 = i2.sub(&h1.mul(target.differential(2))?)?;
        let phi2 = i1.sub(&target.differential(2).mul(&h1)?)?;
        let xi = vec![i1.clone(), p.clone(), i1.clone()];
        // xi is its own inverse, so zeta = phi xi^-1 gives zeta xi = phi
        let zeta = vec![i1.clone(), phi1.mul(&p)?, phi2];
        Ok(TransferPair {
            source,
            target,
            xi,
            zeta,
            homotopy: vec![h0, h1],
        })
    }

    /// Checks the chain-map identities and the homotopy relation.
    pub fn verify(&self) -> Result<bool, ComplexError> {
        for k in 1..=2 {
            let d = self.source.differential(k);
            let d2 = self.target.differential(k);
            if d.mul(&self.xi[k - 1])? != self.xi[k].mul(d2)? {
                return Ok(false);
            }
            if d2.mul(&self.zeta[k - 1])? != self.zeta[k].mul(d)? {
                return Ok(false);
            }
        }
        let g = self.source.differential(1).group().clone();
        let ring = self.source.differential(1).ring();
        for k in 0..=2 {
            let rank = self.target.ranks()[k];
            let mut htpy = GroupRingMatrix::zeros(ring, g.clone(), rank, rank);
            if k >= 1 {
                htpy = htpy.add(&self.target.differential(k).mul(&self.homotopy[k - 1])?)?;
            }
            if k <= 1 {
                htpy = htpy.add(&self.homotopy[k].mul(self.target.differential(k + 1))?)?;
            }
            let expected = GroupRingMatrix::identity(ring, g.clone(), rank).sub(&htpy)?;
            if self.zeta[k].mul(&self.xi[k])? != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Samples boundaries `gamma = c d'_2` with random `c`, fills them
    /// through the source complex, and compares with the transferred bound.
    pub fn check(&self, samples: usize, seed: u64) -> Result<TransferCheck, ComplexError> {
        let d2 = self.target.differential(2);
        let g = d2.group().clone();
        let ring = d2.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::with_capacity(samples);
        for _ in 0..samples {
            let terms: Vec<(Word, _)> = (0..rng.gen_range(1..=6))
                .map(|_| {
                    let (i, j) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                    let w = Word::parse(&format!("a^{i} b^{j}"), 2).expect("valid word");
                    (w, ring.from_int(rng.gen_range(-3..=3)))
                })
                .collect();
            let c = GroupRingElement::from_terms(ring, g.clone(), terms)?;
            let c = GroupRingMatrix::from_rows(ring, g.clone(), vec![vec![c]], 1)?;
            let gamma = c.mul(d2)?;
            let pushed = gamma.mul(&self.zeta[1])?;
            let d = if pushed.is_zero() {
                GroupRingMatrix::zeros(ring, g.clone(), 1, 1)
            } else {
                c.mul(&self.zeta[2])?
            };
            if d.mul(self.source.differential(2))? != pushed {
                return Err(ComplexError::Shape("sample filler in C does not fill".into()));
            }
            data.push((gamma, pushed, d));
        }
        let kappa_hat = data
            .iter()
            .filter(|(_, pushed, _)| !pushed.is_zero())
            .map(|(_, pushed, d)| Ratio::new(d.norm() as i64, pushed.norm() as i64))
            .max()
            .unwrap_or_else(|| Ratio::from_integer(0));
        let (nx, nz, nh) = (self.xi[2].norm(), self.zeta[1].norm(), self.homotopy[1].norm());
        let constant = transfer_constant(kappa_hat, nx as i64, nz as i64, nh as i64)
            .map_err(|e| ComplexError::Shape(e.to_string()))?;
        let mut per_sample = Vec::with_capacity(samples);
        let (mut boundary_failures, mut violations) = (0, 0);
        for (gamma, _, d) in &data {
            let filler = d.mul(&self.xi[2])?.add(&gamma.mul(&self.homotopy[1])?)?;
            if filler.mul(d2)? != *gamma {
                boundary_failures += 1;
            }
            let bound = constant * gamma.norm() as i64;
            if Ratio::from_integer(filler.norm() as i64) > bound {
                violations += 1;
            }
            per_sample.push(TransferSample {
                gamma_norm: gamma.norm(),
                filler_norm: filler.norm(),
                bound,
            });
        }
        Ok(TransferCheck {
            samples,
            kappa_hat,
            norm_x: nx,
            norm_z: nz,
            norm_h: nh,
            constant,
            boundary_failures,
            violations,
            per_sample,
        })
    }
}
