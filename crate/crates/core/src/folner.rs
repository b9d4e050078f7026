//! Følner boundaries `B(F) = { g in F : g s^-1 not in F for some generator s }`
//! and sweeps of the ratio `|B(F)| / |F|` over families of finite sets.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::group_ring::{GroupRingElement, GroupRingError};
use crate::groups::{Ball, ElementKey, Group, GroupError};
use crate::ring::RingDescriptor;
use crate::word::{Letter, Word};

/// Largest size for which connected sets are enumerated exhaustively.
pub const MAX_CONNECTED_SIZE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolnerError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    GroupRing(#[from] GroupRingError),
    #[error("unrecognized family {0:?} (expected balls:R, boxes:N or connected:K)")]
    UnknownFamily(String),
    #[error("box family needs a free abelian group, not {0}")]
    NotFreeAbelian(String),
    #[error("connected-set enumeration is limited to size {MAX_CONNECTED_SIZE}, asked for {0}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Balls of radius `0..=r`.
    Balls(usize),
    /// Cubes `{0..n-1}^d` for `n = 2..=n_max` in a free abelian group.
    Boxes(usize),
    /// Every connected set containing the identity, up to the given size.
    Connected(usize),
}

impl Family {
    pub fn is_exhaustive(self) -> bool {
        matches!(self, Family::Connected(_))
    }
}

impl FromStr for Family {
    type Err = FolnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FolnerError::UnknownFamily(s.to_string());
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "balls" => Ok(Family::Balls(n)),
            "boxes" => Ok(Family::Boxes(n)),
            "connected" => Ok(Family::Connected(n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Balls(n) => write!(f, "balls:{n}"),
            Family::Boxes(n) => write!(f, "boxes:{n}"),
            Family::Connected(n) => write!(f, "connected:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RatioVanishing,
    RatioBoundedBelow,
    Inconclusive,
}

/// One member (or, for connected sets, one size class) of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesPoint {
    pub set_size: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub ratio: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FolnerReport {
    pub group: String,
    pub family: String,
    pub sets_examined: u64,
    pub best_set_size: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub best_ratio: Ratio<i64>,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub epsilon_hat: Ratio<i64>,
    #[serde(serialize_with = "crate::serde_ratio::serialize_option")]
    pub kappa_hat: Option<Ratio<i64>>,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub threshold: Ratio<i64>,
    pub verdict: Verdict,
    /// Ratio per family member; for connected sets, the minimum per size.
    pub series: Vec<SeriesPoint>,
}

/// Membership test for a finite set of elements under group equality.
struct ElementSet<'a> {
    group: &'a Group,
    words: Vec<Word>,
    index: HashMap<ElementKey, Vec<usize>>,
}

impl<'a> ElementSet<'a> {
    fn new(group: &'a Group, elements: &[Word]) -> Self {
        let mut set = ElementSet {
            group,
            words: Vec::new(),
            index: HashMap::new(),
        };
        for g in elements {
            set.insert(g);
        }
        set
    }

    fn find(&self, g: &Word) -> Option<usize> {
        self.index
            .get(&self.group.key_of_normalized(g))?
            .iter()
            .copied()
            .find(|&i| self.group.equal_normalized(&self.words[i], g))
    }

    fn insert(&mut self, g: &Word) -> bool {
        let g = self.group.normalize(g);
        if self.find(&g).is_some() {
            return false;
        }
        let key = self.group.key_of_normalized(&g);
        self.index.entry(key).or_default().push(self.words.len());
        self.words.push(g);
        true
    }

    fn contains(&self, g: &Word) -> bool {
        self.find(&self.group.normalize(g)).is_some()
    }
}

/// `B(F)`, in the order the elements appear in `f` (duplicates removed).
pub fn folner_boundary(group: &Group, f: &[Word]) -> Vec<Word> {
    let set = ElementSet::new(group, f);
    let m = group.generator_count();
    set.words
        .iter()
        .filter(|g| (0..m).any(|s| !set.contains(&g.concat(&Word(vec![Letter::neg(s)])))))
        .cloned()
        .collect()
}

/// `|B(F)|` for a set of ball indices marked in `member`.
fn boundary_size(ball: &Ball, members: &[usize], member: &[bool]) -> usize {
    let m = ball.group().generator_count();
    members
        .iter()
        .filter(|&&g| {
            (0..m).any(|s| match ball.neighbor(g, Letter::neg(s)) {
                Some(h) => !member[h],
                None => true,
            })
        })
        .count()
}

/// Redelmeier-style enumeration of connected sets containing vertex 0;
/// each set is visited exactly once.
struct Animals<'a> {
    ball: &'a Ball,
    max_size: usize,
    member: Vec<bool>,
    marked: Vec<bool>,
    set: Vec<usize>,
    count: u64,
    /// min ratio per size, with the first set attaining it
    best: Vec<Option<(Ratio<i64>, usize)>>,
}

impl Animals<'_> {
    fn grow(&mut self, mut untried: Vec<usize>) {
        let m2 = 2 * self.ball.group().generator_count();
        while let Some(v) = untried.pop() {
            self.set.push(v);
            self.member[v] = true;
            self.count += 1;
            let size = self.set.len();
            let b = boundary_size(self.ball, &self.set, &self.member);
            let r = Ratio::new(b as i64, size as i64);
            if self.best[size].is_none_or(|(best, _)| r < best) {
                self.best[size] = Some((r, size));
            }
            if size < self.max_size {
                let mut fresh = Vec::new();
                for i in 0..m2 {
                    if let Some(u) = self.ball.neighbor(v, Letter::from_index(i)) {
                        if !self.marked[u] {
                            self.marked[u] = true;
                            fresh.push(u);
                        }
                    }
                }
                let mut next = untried.clone();
                next.extend_from_slice(&fresh);
                self.grow(next);
                for u in fresh {
                    self.marked[u] = false;
                }
            }
            self.member[v] = false;
            self.set.pop();
        }
    }
}

pub fn folner_sweep(
    group: &Arc<Group>,
    family: Family,
    threshold: Ratio<i64>,
    max_elements: usize,
) -> Result<FolnerReport, FolnerError> {
    let mut series = Vec::new();
    let mut examined: u64 = 0;
    match family {
        Family::Balls(r_max) => {
            let ball = group.ball(r_max + 1, max_elements)?;
            for r in 0..=r_max {
                let size = ball.sphere(r).end;
                let member: Vec<bool> = (0..ball.len()).map(|i| ball.distance(i) <= r).collect();
                let members: Vec<usize> = (0..size).collect();
                let b = boundary_size(&ball, &members, &member);
                series.push(SeriesPoint {
                    set_size: size,
                    ratio: Ratio::new(b as i64, size as i64),
                });
                examined += 1;
            }
        }
        Family::Boxes(n_max) => {
            if !group.is_free_abelian() {
                return Err(FolnerError::NotFreeAbelian(group.to_string()));
            }
            let d = group.generator_count();
            for n in 2..=n_max {
                let cube = cube_words(d, n);
                let b = folner_boundary(group, &cube).len();
                series.push(SeriesPoint {
                    set_size: cube.len(),
                    ratio: Ratio::new(b as i64, cube.len() as i64),
                });
                examined += 1;
            }
        }
        Family::Connected(k) => {
            if k > MAX_CONNECTED_SIZE {
                return Err(FolnerError::TooLarge(k));
            }
            let ball = group.ball(k, max_elements)?;
            let mut animals = Animals {
                ball: &ball,
                max_size: k,
                member: vec![false; ball.len()],
                marked: vec![false; ball.len()],
                set: Vec::new(),
                count: 0,
                best: vec![None; k + 1],
            };
            if k >= 1 {
                animals.marked[0] = true;
                animals.grow(vec![0]);
            }
            examined = animals.count;
            series = animals
                .best
                .iter()
                .flatten()
                .map(|&(ratio, set_size)| SeriesPoint { set_size, ratio })
                .collect();
        }
    }
    let (best_ratio, best_set_size) = series
        .iter()
        .map(|p| (p.ratio, p.set_size))
        .min()
        .unwrap_or((Ratio::from_integer(0), 0));
    let zero = Ratio::from_integer(0);
    let verdict = if best_ratio < threshold {
        Verdict::RatioVanishing
    } else if family.is_exhaustive() && best_ratio > zero {
        Verdict::RatioBoundedBelow
    } else {
        Verdict::Inconclusive
    };
    Ok(FolnerReport {
        group: group.to_string(),
        family: family.to_string(),
        sets_examined: examined,
        best_set_size,
        best_ratio,
        epsilon_hat: best_ratio,
        kappa_hat: (best_ratio > zero).then(|| best_ratio.recip()),
        threshold,
        verdict,
        series,
    })
}

/// `{0..n-1}^d` as words `a^i b^j ...`.
pub fn cube_words(d: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    for g in 0..d {
        out = out
            .iter()
            .flat_map(|w| (0..n).map(move |i| w.concat(&Word(vec![Letter::pos(g); i]))))
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportBoundReport {
    pub group: String,
    pub ring: String,
    pub samples: usize,
    pub support_radius: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub epsilon_hat: Ratio<i64>,
    /// Samples where some element of `B(supp d)` is missing from every `supp (d d)_i`.
    pub inclusion_failures: usize,
    /// Samples with `eps |d| > |d d|`.
    pub inequality_violations: usize,
    /// Smallest observed `|d d| / |d|` over nonzero samples.
    #[serde(serialize_with = "crate::serde_ratio::serialize_option")]
    pub min_ratio: Option<Ratio<i64>>,
}

/// `d -> (d - d r_i s_i)_i`.
pub fn folner_differential(
    d: &GroupRingElement,
    units: &[crate::ring::RingValue],
) -> Result<Vec<GroupRingElement>, GroupRingError> {
    let group = d.group().clone();
    units
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let s = GroupRingElement::monomial(d.ring(), group.clone(), &Word(vec![Letter::pos(i)]), *r);
            d.sub(&d.mul(&s)?)
        })
        .collect()
}

/// Samples `d` supported in a ball and checks the support inclusion
/// `B(supp d) ⊆ ∪_i supp (d - d r_i s_i)` and the inequality `eps |d| <= |d d|`.
pub fn verify_support_bound(
    group: &Arc<Group>,
    ring: RingDescriptor,
    samples: usize,
    support_radius: usize,
    epsilon_hat: Ratio<i64>,
    units: Option<&[crate::ring::RingValue]>,
    seed: u64,
) -> Result<SupportBoundReport, FolnerError> {
    let m = group.generator_count();
    let units: Vec<_> = units.map_or_else(|| vec![ring.one(); m], <[_]>::to_vec);
    let ball = group.ball(support_radius, usize::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inclusion_failures = 0;
    let mut inequality_violations = 0;
    let mut min_ratio: Option<Ratio<i64>> = None;
    let pool: Vec<usize> = (0..ball.len()).collect();
    for _ in 0..samples {
        let k = rng.gen_range(0..=ball.len().min(12));
        let chosen: Vec<&usize> = pool.choose_multiple(&mut rng, k).collect();
        let terms: Vec<(Word, _)> = chosen
            .iter()
            .map(|&&i| {
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-3..=3);
                }
                (ball.element(i).clone(), ring.from_int(c))
            })
            .collect();
        let d = GroupRingElement::from_terms(ring, group.clone(), terms)?;
        let gamma = folner_differential(&d, &units)?;
        let gamma_norm: usize = gamma.iter().map(GroupRingElement::norm).sum();
        let boundary = folner_boundary(group, &d.support());
        let included = boundary
            .iter()
            .all(|g| gamma.iter().any(|x| !x.coefficient(g).is_zero()));
        if !included {
            inclusion_failures += 1;
        }
        if epsilon_hat * d.norm() as i64 > Ratio::from_integer(gamma_norm as i64) {
            inequality_violations += 1;
        }
        if !d.is_zero() {
            let r = Ratio::new(gamma_norm as i64, d.norm() as i64);
            if min_ratio.is_none_or(|m| r < m) {
                min_ratio = Some(r);
            }
        }
    }
    Ok(SupportBoundReport {
        group: group.to_string(),
        ring: ring.to_string(),
        samples,
        support_radius,
        epsilon_hat,
        inclusion_failures,
        inequality_violations,
        min_ratio,
    })
}
