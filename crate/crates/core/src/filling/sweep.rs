use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::groups::{Ball, Group};
use crate::ring::RingDescriptor;
use crate::word::{Letter, Word};

use super::{minimal_filling, support, CayleyBallComplex, FillingError, FillingOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleStatus {
    Filled,
    NoFillingInWindow,
    OutOfWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleOutcome {
    pub word: String,
    pub cycle_norm: usize,
    pub status: CycleStatus,
    pub filler_norm: Option<usize>,
    #[serde(serialize_with = "crate::serde_ratio::serialize_option")]
    pub ratio: Option<Ratio<i64>>,
    pub optimal: bool,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioCount {
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub ratio: Ratio<i64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub group: String,
    pub radius: usize,
    pub coeff_bound: i64,
    pub word_length_cap: usize,
    pub corpus_size: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub max_ratio: Ratio<i64>,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub kappa_hat: Ratio<i64>,
    pub per_cycle: Vec<CycleOutcome>,
    pub distribution: Vec<RatioCount>,
}

/// Cyclically reduced words of length `1..=cap` representing the identity,
/// one per class under rotation and inversion, in shortlex order.
///
/// Prefixes are pruned by distance: a prefix of length `i` can only close
/// up within `cap` letters if its endpoint lies within `cap - i` of the
/// identity, so the walk never leaves the ball of radius `cap / 2`.
pub fn null_homotopic_necklaces(ball: &Ball, cap: usize) -> Vec<Word> {
    fn extend(ball: &Ball, cap: usize, letters: &mut Vec<Letter>, at: usize, out: &mut Vec<Word>) {
        let m = ball.group().generator_count();
        for l in Letter::alphabet(m) {
            if letters.last() == Some(&l.inv()) {
                continue;
            }
            let Some(next) = ball.neighbor(at, l) else {
                continue;
            };
            let len = letters.len() + 1;
            if ball.distance(next) > cap - len {
                continue;
            }
            letters.push(l);
            if next == 0 && (len == 1 || letters[0] != l.inv()) {
                let w = Word(letters.clone());
                if w.necklace_representative() == w {
                    out.push(w);
                }
            }
            if len < cap {
                extend(ball, cap, letters, next, out);
            }
            letters.pop();
        }
    }
    let mut out = Vec::new();
    if cap > 0 {
        extend(ball, cap, &mut Vec::new(), 0, &mut out);
    }
    out.sort();
    out
}

/// The base vertex keeping the path of `w` closest to the centre; ties go
/// to the lowest vertex index.
fn placement(x: &CayleyBallComplex, w: &Word) -> Option<usize> {
    let ball = x.ball();
    let mut best: Option<(usize, usize)> = None;
    'vertices: for v in 0..ball.len() {
        let limit = best.map_or(usize::MAX, |(d, _)| d);
        let mut cur = v;
        let mut worst = ball.distance(v);
        if worst >= limit {
            continue;
        }
        for &l in w.letters() {
            match ball.neighbor(cur, l) {
                Some(n) => cur = n,
                None => continue 'vertices,
            }
            worst = worst.max(ball.distance(cur));
            if worst >= limit {
                continue 'vertices;
            }
        }
        best = Some((worst, v));
    }
    best.map(|(_, v)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub radius: usize,
    pub word_length_cap: usize,
    pub coeff_bound: i64,
    pub ring: RingDescriptor,
    pub max_elements: usize,
    pub filling: FillingOptions,
}

/// Fills every null-homotopic word up to the length cap that fits in the
/// window and reports the filling ratios `|d| / |gamma|`.
pub fn isoperimetric_sweep(group: &Arc<Group>, config: &SweepConfig) -> Result<SweepReport, FillingError> {
    let x = CayleyBallComplex::build(group, config.radius, config.ring, config.max_elements)?
        .with_coeff_bound(config.coeff_bound);
    let corpus_ball = group.ball(config.word_length_cap / 2, config.max_elements)?;
    let corpus = null_homotopic_necklaces(&corpus_ball, config.word_length_cap);

    let per_cycle = corpus
        .par_iter()
        .map(|w| -> Result<CycleOutcome, FillingError> {
            let mut outcome = CycleOutcome {
                word: w.to_string(),
                cycle_norm: 0,
                status: CycleStatus::OutOfWindow,
                filler_norm: None,
                ratio: None,
                optimal: false,
                nodes_explored: 0,
            };
            let Some(v) = placement(&x, w) else {
                return Ok(outcome);
            };
            let cycle = x.cycle_from_vertex(v, w).expect("placement stays in the window");
            outcome.cycle_norm = support(&cycle);
            match minimal_filling(&x, &cycle, config.coeff_bound, &config.filling) {
                Ok(r) => {
                    outcome.status = CycleStatus::Filled;
                    outcome.filler_norm = Some(r.filler_norm);
                    outcome.ratio = Some(r.ratio);
                    outcome.optimal = r.optimal;
                    outcome.nodes_explored = r.nodes_explored;
                }
                Err(FillingError::NoFillingInWindow) => outcome.status = CycleStatus::NoFillingInWindow,
                Err(e) => return Err(e),
            }
            Ok(outcome)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut counts: BTreeMap<Ratio<i64>, usize> = BTreeMap::new();
    for r in per_cycle.iter().filter_map(|c| c.ratio) {
        *counts.entry(r).or_default() += 1;
    }
    let max_ratio = counts
        .keys()
        .next_back()
        .copied()
        .unwrap_or_else(|| Ratio::from_integer(0));
    Ok(SweepReport {
        group: group.to_string(),
        radius: config.radius,
        coeff_bound: config.coeff_bound,
        word_length_cap: config.word_length_cap,
        corpus_size: corpus.len(),
        max_ratio,
        kappa_hat: max_ratio,
        per_cycle,
        distribution: counts
            .into_iter()
            .map(|(ratio, count)| RatioCount { ratio, count })
            .collect(),
    })
}
