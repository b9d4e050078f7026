use std::collections::{HashSet, VecDeque};

use crate::word::{Letter, Word};

use super::{GroupError, Presentation};

/// A finite group given by its Cayley table, with element 0 the identity,
/// together with a generating list of elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTable {
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    /// Shortlex-least word for each element.
    representatives: Vec<Word>,
}

impl FiniteTable {
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self, GroupError> {
        let bad = |m: &str| GroupError::BadTable(m.to_string());
        let n = table.len();
        if n == 0 {
            return Err(bad("empty table"));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(bad("table is not n x n over 0..n"));
        }
        for (i, row) in table.iter().enumerate() {
            if row[0] != i || table[0][i] != i {
                return Err(bad("element 0 is not the identity"));
            }
            let distinct: HashSet<_> = row.iter().collect();
            if distinct.len() != n {
                return Err(bad("row is not a permutation"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad("multiplication is not associative"));
                    }
                }
            }
        }
        if generators.is_empty() || generators.iter().any(|&g| g >= n) {
            return Err(bad("generators must be a nonempty list of elements"));
        }
        let inverses: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();

        // Breadth first over letters in order gives shortlex-least words.
        let mut representatives: Vec<Option<Word>> = vec![None; n];
        representatives[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let w = representatives[x].clone().unwrap();
            for l in Letter::alphabet(generators.len()) {
                let s = generators[l.gen()];
                let y = table[x][if l.inverse { inverses[s] } else { s }];
                if representatives[y].is_none() {
                    let mut v = w.0.clone();
                    v.push(l);
                    representatives[y] = Some(Word(v));
                    queue.push_back(y);
                }
            }
        }
        let representatives = representatives
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("generators do not generate the group"))?;
        Ok(FiniteTable {
            table,
            generators,
            inverses,
            representatives,
        })
    }

    /// Z/n generated by 1 (by 0 when n = 1).
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::BadParameter("cyclic group order must be >= 1".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(table, vec![if n == 1 { 0 } else { 1 }])
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn eval(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |x, l| {
            let s = self.generators[l.gen()];
            self.table[x][if l.inverse { self.inverses[s] } else { s }]
        })
    }

    pub fn word_of(&self, element: usize) -> &Word {
        &self.representatives[element]
    }

    /// Presentation read off the shortlex spanning tree: one relator
    /// `rep(x) s rep(xs)^-1` per non-tree edge, up to cyclic equivalence.
    pub fn presentation(&self) -> Result<Presentation, GroupError> {
        let mut seen = HashSet::new();
        let mut relators = Vec::new();
        for x in 0..self.order() {
            for s in 0..self.generators.len() {
                let y = self.table[x][self.generators[s]];
                let mut r = self.representatives[x].clone();
                r.0.push(Letter::pos(s));
                let r = r.concat(&self.representatives[y].inverse()).free_reduce();
                let r = r.cyclic_reduce();
                if !r.is_empty() && seen.insert(r.necklace_representative()) {
                    relators.push(r);
                }
            }
        }
        Presentation::new(self.generators.len(), relators)
    }
}
