use std::collections::HashMap;
use std::ops::Range;

use crate::word::{Letter, Word};

use super::{ElementKey, Group, GroupError};

/// The ball of radius `r` about the identity in the Cayley graph, built
/// breadth first. Letters are tried in order, so each element's recorded
/// geodesic (via [`Ball::geodesic`]) is the shortlex-least one.
#[derive(Debug, Clone)]
pub struct Ball {
    group: Group,
    radius: usize,
    elements: Vec<Word>,
    distances: Vec<usize>,
    parents: Vec<Option<(u32, Letter)>>,
    /// `spheres[k]..spheres[k+1]` are the indices at distance `k`.
    spheres: Vec<usize>,
    /// `neighbors[v * 2m + letter.index()]` is the index of `v * letter`.
    neighbors: Vec<Option<u32>>,
    index: HashMap<ElementKey, Vec<u32>>,
}

impl Ball {
    pub(super) fn new(group: &Group, radius: usize, max_elements: usize) -> Result<Ball, GroupError> {
        let letters: Vec<Letter> = Letter::alphabet(group.generator_count()).collect();
        let mut ball = Ball {
            group: group.clone(),
            radius,
            elements: vec![Word::identity()],
            distances: vec![0],
            parents: vec![None],
            spheres: vec![0, 1],
            neighbors: Vec::new(),
            index: HashMap::new(),
        };
        ball.index
            .entry(group.key_of_normalized(&Word::identity()))
            .or_default()
            .push(0);
        for r in 1..=radius {
            let previous = ball.spheres[r - 1]..ball.spheres[r];
            for v in previous {
                for &l in &letters {
                    let w = group.multiply(&ball.elements[v], &Word(vec![l]));
                    if ball.lookup_normalized(&w).is_none() {
                        if ball.elements.len() >= max_elements {
                            return Err(GroupError::BudgetExceeded {
                                attained_radius: r - 1,
                                limit: max_elements,
                            });
                        }
                        let i = ball.elements.len() as u32;
                        ball.index.entry(group.key_of_normalized(&w)).or_default().push(i);
                        ball.elements.push(w);
                        ball.distances.push(r);
                        ball.parents.push(Some((v as u32, l)));
                    }
                }
            }
            ball.spheres.push(ball.elements.len());
        }
        let m2 = letters.len();
        let mut neighbors = vec![None; ball.elements.len() * m2];
        for v in 0..ball.elements.len() {
            for &l in &letters {
                let w = group.multiply(&ball.elements[v], &Word(vec![l]));
                neighbors[v * m2 + l.index()] = ball.lookup_normalized(&w).map(|i| i as u32);
            }
        }
        ball.neighbors = neighbors;
        Ok(ball)
    }

    fn lookup_normalized(&self, w: &Word) -> Option<usize> {
        let bucket = self.index.get(&self.group.key_of_normalized(w))?;
        bucket
            .iter()
            .map(|&i| i as usize)
            .find(|&i| self.group.equal_normalized(&self.elements[i], w))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Word {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn distance(&self, i: usize) -> usize {
        self.distances[i]
    }

    /// Indices of the elements at distance exactly `k`.
    pub fn sphere(&self, k: usize) -> Range<usize> {
        if k > self.radius {
            return 0..0;
        }
        self.spheres[k]..self.spheres[k + 1]
    }

    /// Index of the element represented by an arbitrary word, if it lies in the ball.
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.lookup_normalized(&self.group.normalize(w))
    }

    pub fn neighbor(&self, v: usize, l: Letter) -> Option<usize> {
        let m2 = 2 * self.group.generator_count();
        self.neighbors[v * m2 + l.index()].map(|i| i as usize)
    }

    /// Walks a word from vertex `v`, returning the visited vertices
    /// (including `v`) or `None` if the path leaves the ball.
    pub fn walk(&self, v: usize, w: &Word) -> Option<Vec<usize>> {
        let mut path = Vec::with_capacity(w.len() + 1);
        path.push(v);
        let mut cur = v;
        for &l in w.letters() {
            cur = self.neighbor(cur, l)?;
            path.push(cur);
        }
        Some(path)
    }

    /// Shortlex-least geodesic word from the identity to element `i`.
    pub fn geodesic(&self, i: usize) -> Word {
        let mut letters = Vec::with_capacity(self.distances[i]);
        let mut cur = i;
        while let Some((p, l)) = self.parents[cur] {
            letters.push(l);
            cur = p as usize;
        }
        letters.reverse();
        Word(letters)
    }
}
