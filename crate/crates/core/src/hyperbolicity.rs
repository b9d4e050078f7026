//! Slim-triangle estimates on Cayley-graph balls, and the constants
//! `N`, `k = κN² + 1`, `m = κN` attached to a presentation.
//!
//! Triangles have corners on the sphere of radius `⌊R/2⌋`, so every side
//! and every distance that matters is realized inside the ball of radius
//! `R`. Distances are computed by looking up `p⁻¹q` in that ball, so they
//! are word-metric distances rather than distances inside the window.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{Ball, Group, GroupError, Presentation};
use crate::word::{Letter, Word};

pub const DEFAULT_TRIANGLE_LIMIT: usize = 20_000;
pub const DEFAULT_SAMPLE_SEED: u64 = 0x5eed;
/// Geodesic triangles examined per corner triple in the exhaustive variant.
pub const EXHAUSTIVE_TRIANGLE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperbolicityError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("vertex {0} is not in the ball")]
    NotInBall(usize),
    #[error("no path between vertices {0} and {1} inside the ball")]
    Disconnected(usize, usize),
    #[error("exhaustive geodesic enumeration exceeds {limit} triangles for one corner triple")]
    TooManyGeodesics { limit: usize },
    #[error("N is undefined: the presentation has no relators")]
    NoRelators,
    #[error("kappa must be a positive integer, got {0}")]
    BadKappa(i64),
}

/// A geodesic edge path between two ball vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    pub word: Word,
    pub vertices: Vec<usize>,
    /// False when an endpoint lies outside the half-radius ball, in which
    /// case the path is only shortest among paths inside the window.
    pub window_safe: bool,
}

/// Distance between ball vertices in the word metric, if it is at most the
/// ball radius.
fn word_distance(ball: &Ball, p: usize, q: usize) -> Option<usize> {
    if p == q {
        return Some(0);
    }
    let g = ball.group();
    let h = g.multiply(&g.invert(ball.element(p)), ball.element(q));
    ball.index_of(&h).map(|i| ball.distance(i))
}

/// The shortlex-least geodesic from `u` to `v`: the letters are chosen
/// greedily in generator order among those that decrease the distance to `v`.
pub fn geodesic(ball: &Ball, u: usize, v: usize) -> Result<GeodesicPath, HyperbolicityError> {
    for x in [u, v] {
        if x >= ball.len() {
            return Err(HyperbolicityError::NotInBall(x));
        }
    }
    let half = ball.radius() / 2;
    let window_safe = ball.distance(u) <= half && ball.distance(v) <= half;
    if window_safe {
        // u⁻¹v has length at most R, and its BFS geodesic is shortlex-least
        let g = ball.group();
        let h = g.multiply(&g.invert(ball.element(u)), ball.element(v));
        let i = ball.index_of(&h).ok_or(HyperbolicityError::Disconnected(u, v))?;
        let word = ball.geodesic(i);
        let vertices = ball.walk(u, &word).ok_or(HyperbolicityError::Disconnected(u, v))?;
        return Ok(GeodesicPath {
            word,
            vertices,
            window_safe,
        });
    }
    let to_v = window_bfs(ball, v);
    if to_v[u] == usize::MAX {
        return Err(HyperbolicityError::Disconnected(u, v));
    }
    let mut vertices = vec![u];
    let mut letters = Vec::new();
    let mut cur = u;
    while cur != v {
        let (l, next) = Letter::alphabet(ball.group().generator_count())
            .filter_map(|l| ball.neighbor(cur, l).map(|n| (l, n)))
            .find(|&(_, n)| to_v[n] + 1 == to_v[cur])
            .expect("BFS distances decrease along some edge");
        letters.push(l);
        vertices.push(next);
        cur = next;
    }
    Ok(GeodesicPath {
        word: Word(letters),
        vertices,
        window_safe,
    })
}

fn window_bfs(ball: &Ball, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; ball.len()];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    let m = ball.group().generator_count();
    while let Some(x) = queue.pop_front() {
        for l in Letter::alphabet(m) {
            if let Some(y) = ball.neighbor(x, l) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    dist
}

/// All geodesics from `u` to `v` as vertex lists, at most `limit` of them.
fn all_geodesics(ball: &Ball, u: usize, v: usize, limit: usize) -> Option<Vec<Vec<usize>>> {
    fn extend(
        ball: &Ball,
        v: usize,
        path: &mut Vec<usize>,
        left: usize,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        let cur = *path.last().expect("non-empty path");
        if left == 0 {
            out.push(path.clone());
            return out.len() <= limit;
        }
        for l in Letter::alphabet(ball.group().generator_count()) {
            let Some(n) = ball.neighbor(cur, l) else { continue };
            if word_distance(ball, n, v) == Some(left - 1) {
                path.push(n);
                let ok = extend(ball, v, path, left - 1, out, limit);
                path.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let d = word_distance(ball, u, v)?;
    let mut out = Vec::new();
    extend(ball, v, &mut vec![u], d, &mut out, limit).then_some(out)
}

/// Smallest `n` with every side vertex within `n` of the other two sides.
fn slimness(ball: &Ball, sides: [&[usize]; 3]) -> usize {
    let mut worst = 0;
    for i in 0..3 {
        let others: Vec<usize> = (0..3)
            .filter(|&j| j != i)
            .flat_map(|j| sides[j].iter().copied())
            .collect();
        for &p in sides[i] {
            let near = others
                .iter()
                .filter_map(|&q| word_distance(ball, p, q))
                .min()
                .expect("sides share their endpoints");
            worst = worst.max(near);
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleSample {
    /// Every triple when there are at most `limit`, else `limit` seeded draws.
    Auto {
        limit: usize,
        seed: u64,
    },
    All,
}

impl Default for TriangleSample {
    fn default() -> Self {
        TriangleSample::Auto {
            limit: DEFAULT_TRIANGLE_LIMIT,
            seed: DEFAULT_SAMPLE_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlimnessConfig {
    pub radius: usize,
    pub sample: TriangleSample,
    /// Also maximize over every choice of geodesic sides.
    pub exhaustive: bool,
    pub max_elements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub corners: [String; 3],
    pub delta: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlimnessReport {
    pub group: String,
    pub radius: usize,
    pub corner_radius: usize,
    pub triangles_examined: usize,
    pub sampled: bool,
    pub delta_hat: usize,
    pub witness: Option<Witness>,
    /// Maximum over all geodesic choices, when the exhaustive variant ran.
    pub exhaustive_delta_hat: Option<usize>,
    pub exhaustive_agrees: Option<bool>,
}

fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) / 2 * (n - 2) / 3
    }
}

fn corner_triples(n: usize, sample: TriangleSample) -> (Vec<[usize; 3]>, bool) {
    let all = || {
        let mut out = Vec::with_capacity(choose3(n));
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push([i, j, k]);
                }
            }
        }
        out
    };
    match sample {
        TriangleSample::All => (all(), false),
        TriangleSample::Auto { limit, .. } if choose3(n) <= limit => (all(), false),
        TriangleSample::Auto { limit, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(limit);
            while out.len() < limit {
                let mut t = [0; 3];
                for x in &mut t {
                    *x = rng.gen_range(0..n);
                }
                t.sort_unstable();
                if t[0] < t[1] && t[1] < t[2] && seen.insert(t) {
                    out.push(t);
                }
            }
            (out, true)
        }
    }
}

pub fn slimness_sweep(group: &Arc<Group>, config: &SlimnessConfig) -> Result<SlimnessReport, HyperbolicityError> {
    let ball = group.ball(config.radius, config.max_elements)?;
    let corner_radius = config.radius / 2;
    let sphere = ball.sphere(corner_radius);
    let (triples, sampled) = corner_triples(sphere.len(), config.sample);
    let triples: Vec<[usize; 3]> = triples.into_iter().map(|t| t.map(|i| sphere.start + i)).collect();

    let deltas = triples
        .par_iter()
        .map(|&[u, v, w]| -> Result<(usize, Option<usize>), HyperbolicityError> {
            let s1 = geodesic(&ball, u, v)?.vertices;
            let s2 = geodesic(&ball, v, w)?.vertices;
            let s3 = geodesic(&ball, w, u)?.vertices;
            let delta = slimness(&ball, [&s1, &s2, &s3]);
            if !config.exhaustive {
                return Ok((delta, None));
            }
            let limit = EXHAUSTIVE_TRIANGLE_LIMIT;
            let too_many = HyperbolicityError::TooManyGeodesics { limit };
            let side = |a, b| all_geodesics(&ball, a, b, limit).ok_or(too_many.clone());
            let (g1, g2, g3) = (side(u, v)?, side(v, w)?, side(w, u)?);
            if g1.len() * g2.len() * g3.len() > limit {
                return Err(too_many);
            }
            let mut worst = 0;
            for a in &g1 {
                for b in &g2 {
                    for c in &g3 {
                        worst = worst.max(slimness(&ball, [a, b, c]));
                    }
                }
            }
            Ok((delta, Some(worst)))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut delta_hat = 0;
    let mut witness = None;
    for (t, &(d, _)) in triples.iter().zip(&deltas) {
        if witness.is_none() || d > delta_hat {
            delta_hat = d;
            witness = Some(Witness {
                corners: t.map(|i| ball.element(i).to_string()),
                delta: d,
            });
        }
    }
    let exhaustive_delta_hat = config
        .exhaustive
        .then(|| deltas.iter().filter_map(|&(_, e)| e).max().unwrap_or(0));
    Ok(SlimnessReport {
        group: group.to_string(),
        radius: config.radius,
        corner_radius,
        triangles_examined: triples.len(),
        sampled,
        delta_hat,
        witness,
        exhaustive_delta_hat,
        exhaustive_agrees: exhaustive_delta_hat.map(|e| e == delta_hat),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlimConstants {
    #[serde(rename = "N")]
    pub n: i64,
    pub kappa: i64,
    pub k: i64,
    pub m: i64,
    /// A non-slim triangle needs a side vertex farther than this from the
    /// other two sides for the contradiction to apply.
    pub slimness_threshold: i64,
}

impl SlimConstants {
    pub fn new(n: i64, kappa: i64) -> Result<Self, HyperbolicityError> {
        if kappa < 1 {
            return Err(HyperbolicityError::BadKappa(kappa));
        }
        let k = kappa * n * n + 1;
        Ok(SlimConstants {
            n,
            kappa,
            k,
            m: kappa * n,
            slimness_threshold: 6 * k,
        })
    }

    pub fn for_presentation(p: &Presentation, kappa: i64) -> Result<Self, HyperbolicityError> {
        let n = p.max_relator_length().ok_or(HyperbolicityError::NoRelators)?;
        Self::new(n as i64, kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_group, GroupSpec};

    fn group(s: &str) -> Arc<Group> {
        make_group(&s.parse::<GroupSpec>().unwrap()).unwrap()
    }

    fn sweep(g: &str, radius: usize, exhaustive: bool) -> SlimnessReport {
        let config = SlimnessConfig {
            radius,
            sample: TriangleSample::default(),
            exhaustive,
            max_elements: 1_000_000,
        };
        slimness_sweep(&group(g), &config).unwrap()
    }

    #[test]
    fn geodesic_tie_break() {
        let z2 = group("Z^2");
        let ball = z2.ball(4, 1000).unwrap();
        let ab = ball.index_of(&Word::parse("ab", 2).unwrap()).unwrap();
        let p = geodesic(&ball, 0, ab).unwrap();
        assert_eq!(p.word.to_string(), "ab");
        assert!(p.window_safe);
        assert!(geodesic(&ball, ab, ab).unwrap().word.is_empty());
        let far = ball.index_of(&Word::parse("a^4", 2).unwrap()).unwrap();
        let q = geodesic(&ball, far, 0).unwrap();
        assert!(!q.window_safe);
        assert_eq!(q.word.to_string(), "a^-4");
    }

    #[test]
    fn trees_are_zero_slim() {
        for r in 1..=4 {
            let rep = sweep("F2", r, true);
            assert_eq!(rep.delta_hat, 0);
            assert_eq!(rep.exhaustive_delta_hat, Some(0));
        }
    }

    #[test]
    fn z2_grows() {
        let d2 = sweep("Z^2", 2, false).delta_hat;
        let d4 = sweep("Z^2", 4, false).delta_hat;
        assert!(d2 < d4, "{d2} {d4}");
    }

    #[test]
    fn constants() {
        let c = SlimConstants::new(8, 1).unwrap();
        assert_eq!((c.n, c.k, c.m), (8, 65, 8));
        let c = SlimConstants::for_presentation(group("Klein").presentation(), 1).unwrap();
        assert_eq!((c.n, c.k, c.m), (4, 17, 4));
        let c = SlimConstants::for_presentation(group("Sigma2").presentation(), 2).unwrap();
        assert_eq!((c.k, c.m), (129, 16));
        assert!(SlimConstants::for_presentation(group("F2").presentation(), 1).is_err());
        assert!(SlimConstants::new(8, 0).is_err());
    }
}
