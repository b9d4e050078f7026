//! Dehn's algorithm for one-relator surface presentations.
//!
//! The orientable relator `prod [a_i, b_i]` (genus >= 2) satisfies C'(1/6)
//! since every piece has length one. The non-orientable relator
//! `prod x_i^2` satisfies C'(1/6) for n >= 4 and C'(1/4)-T(4) for n = 3; in
//! all these cases a freely reduced word is trivial exactly when repeatedly
//! replacing more than half of a relator by the shorter complement empties it.

use crate::word::{Letter, Word};

use super::{ElementKey, Presentation};

/// Homomorphism from the presented group into a free product of cyclic
/// groups, where normal forms are cheap. Used only to bucket elements.
#[derive(Debug, Clone)]
struct FoldMap {
    /// 0 for an infinite cyclic factor.
    orders: Vec<i64>,
    /// Image of each generator as (factor, exponent) syllables.
    images: Vec<Vec<(usize, i64)>>,
}

impl FoldMap {
    fn push(&self, out: &mut Vec<(usize, i64)>, (g, e): (usize, i64)) {
        let order = self.orders[g];
        let reduce = |e: i64| if order > 0 { e.rem_euclid(order) } else { e };
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 = reduce(last.1 + e);
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => {
                let e = reduce(e);
                if e != 0 {
                    out.push((g, e));
                }
            }
        }
    }

    fn image(&self, w: &Word) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.gen()];
            if l.inverse {
                for &(g, e) in img.iter().rev() {
                    self.push(&mut out, (g, -e));
                }
            } else {
                for &s in img {
                    self.push(&mut out, s);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct DehnSolver {
    generator_count: usize,
    relator_length: usize,
    /// Cyclic rotations of the relator and its inverse, bucketed by first letter.
    by_first_letter: Vec<Vec<Vec<Letter>>>,
    /// Relator exponent vector, scaled so its first nonzero entry is positive.
    relation: Vec<i64>,
    folds: Vec<FoldMap>,
}

impl DehnSolver {
    fn from_relator(p: &Presentation, folds: Vec<FoldMap>) -> Self {
        let m = p.generator_count();
        let r = &p.relators()[0];
        let mut by_first_letter = vec![Vec::new(); 2 * m];
        let inv = r.inverse();
        for base in [r, &inv] {
            for k in 0..base.len() {
                let rot = base.rotate(k).0;
                let bucket: &mut Vec<Vec<Letter>> = &mut by_first_letter[rot[0].index()];
                if !bucket.contains(&rot) {
                    bucket.push(rot);
                }
            }
        }
        let mut relation = r.exponent_sums(m);
        if let Some(first) = relation.iter().copied().find(|&e| e != 0) {
            if first < 0 {
                relation.iter_mut().for_each(|e| *e = -*e);
            }
        }
        DehnSolver {
            generator_count: m,
            relator_length: r.len(),
            by_first_letter,
            relation,
            folds,
        }
    }

    pub(super) fn orientable(p: &Presentation, genus: usize) -> Self {
        // Handles are paired (h, h+1); within a pair
        //   a_h -> x, b_h -> y, a_{h+1} -> y, b_{h+1} -> x        (fold 1)
        //   a_h -> x, b_h -> y, a_{h+1} -> t y t^-1, b_{h+1} -> t x t^-1,
        //   t = y x y^-1 x^-1                                      (fold 2)
        // both kill [x,y][y,x]. An unpaired last handle goes to [z,z].
        let mut fold1 = vec![Vec::new(); 2 * genus];
        let mut fold2 = vec![Vec::new(); 2 * genus];
        let mut factors = 0;
        let mut h = 0;
        while h + 1 < genus {
            let (x, y) = (factors, factors + 1);
            factors += 2;
            fold1[2 * h] = vec![(x, 1)];
            fold1[2 * h + 1] = vec![(y, 1)];
            fold1[2 * h + 2] = vec![(y, 1)];
            fold1[2 * h + 3] = vec![(x, 1)];
            let t = [(y, 1), (x, 1), (y, -1), (x, -1)];
            let t_inv = [(x, 1), (y, 1), (x, -1), (y, -1)];
            let conj = |g: usize| {
                let mut v = t.to_vec();
                v.push((g, 1));
                v.extend_from_slice(&t_inv);
                v
            };
            fold2[2 * h] = vec![(x, 1)];
            fold2[2 * h + 1] = vec![(y, 1)];
            fold2[2 * h + 2] = conj(y);
            fold2[2 * h + 3] = conj(x);
            h += 2;
        }
        if h < genus {
            let z = factors;
            factors += 1;
            for f in [&mut fold1, &mut fold2] {
                f[2 * h] = vec![(z, 1)];
                f[2 * h + 1] = vec![(z, 1)];
            }
        }
        let orders = vec![0; factors];
        let folds = vec![
            FoldMap {
                orders: orders.clone(),
                images: fold1,
            },
            FoldMap { orders, images: fold2 },
        ];
        Self::from_relator(p, folds)
    }

    pub(super) fn nonorientable(p: &Presentation, n: usize) -> Self {
        // x_i -> s_i in the free product of n copies of Z/2, and
        // (x_{2p}, x_{2p+1}) -> (u_p, u_p^-1) with any odd one out -> an involution.
        let involutions = FoldMap {
            orders: vec![2; n],
            images: (0..n).map(|i| vec![(i, 1)]).collect(),
        };
        let mut orders = Vec::new();
        let mut images = vec![Vec::new(); n];
        let mut i = 0;
        while i + 1 < n {
            let u = orders.len();
            orders.push(0);
            images[i] = vec![(u, 1)];
            images[i + 1] = vec![(u, -1)];
            i += 2;
        }
        if i < n {
            let s = orders.len();
            orders.push(2);
            images[i] = vec![(s, 1)];
        }
        let pairs = FoldMap { orders, images };
        Self::from_relator(p, vec![involutions, pairs])
    }

    /// Free reduction followed by Dehn replacements until none applies.
    pub fn reduce(&self, w: &Word) -> Word {
        let mut v = w.free_reduce().0;
        let half = self.relator_length / 2;
        'scan: loop {
            for i in 0..v.len() {
                for rot in &self.by_first_letter[v[i].index()] {
                    let matched = v[i..].iter().zip(rot).take_while(|(a, b)| a == b).count();
                    if matched > half {
                        let replacement = rot[matched..].iter().rev().map(|l| l.inv());
                        v.splice(i..i + matched, replacement);
                        v = Word(v).free_reduce().0;
                        continue 'scan;
                    }
                }
            }
            break;
        }
        Word(v)
    }

    /// Abelianization (modulo the relator's exponent vector) followed by the
    /// normal forms of the fold images.
    pub fn invariant_key(&self, w: &Word) -> ElementKey {
        let mut ab = w.exponent_sums(self.generator_count);
        if let Some(j) = self.relation.iter().position(|&e| e != 0) {
            let q = ab[j].div_euclid(self.relation[j]);
            for (a, r) in ab.iter_mut().zip(&self.relation) {
                *a -= q * r;
            }
        }
        let mut key = ab;
        for fold in &self.folds {
            key.push(i64::MIN);
            for (g, e) in fold.image(w) {
                key.push(g as i64);
                key.push(e);
            }
        }
        key
    }
}
