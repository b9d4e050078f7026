//! Exact minimal-support filling by branch and bound, with a greedy fallback.
//!
//! The search assigns face coefficients. Every edge keeps a residual (the
//! part of the target cycle not yet produced) and a count of faces still
//! free. Unit propagation does most of the work: an edge with a single free
//! face forces that face's value, and an edge with no free face must have
//! zero residual. On simply connected planar windows this alone pins down
//! the unique filler; branching handles the rest.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::{ratio, support, CayleyBallComplex, Coefficients, FillingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillingOptions {
    /// Exact search runs only if at most this many faces remain free after
    /// the initial propagation; otherwise the greedy fallback is used.
    pub face_budget: usize,
    /// Search nodes before giving up on proving optimality.
    pub node_limit: u64,
}

impl Default for FillingOptions {
    fn default() -> Self {
        FillingOptions {
            face_budget: 64,
            node_limit: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillingResult {
    pub cycle: Vec<i64>,
    pub filler: Vec<i64>,
    pub cycle_norm: usize,
    pub filler_norm: usize,
    #[serde(serialize_with = "crate::serde_ratio::serialize")]
    pub ratio: Ratio<i64>,
    pub nodes_explored: u64,
    pub optimal: bool,
}

/// Indexed set of edges with nonzero residual.
struct EdgeSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl EdgeSet {
    fn new(n: usize) -> Self {
        EdgeSet {
            items: Vec::new(),
            pos: vec![ABSENT; n],
        }
    }

    fn insert(&mut self, e: u32) {
        if self.pos[e as usize] == ABSENT {
            self.pos[e as usize] = self.items.len() as u32;
            self.items.push(e);
        }
    }

    fn remove(&mut self, e: u32) {
        let p = self.pos[e as usize];
        if p != ABSENT {
            let last = *self.items.last().unwrap();
            self.items.swap_remove(p as usize);
            if last != e {
                self.pos[last as usize] = p;
            }
            self.pos[e as usize] = ABSENT;
        }
    }
}

struct Search<'a> {
    x: &'a CayleyBallComplex,
    coeffs: Coefficients,
    values: Vec<Option<i64>>,
    residual: Vec<i64>,
    free: Vec<u32>,
    open: EdgeSet,
    nonzero: usize,
    trail: Vec<u32>,
    queue: Vec<u32>,
    face_length: usize,
    best: Option<(usize, Vec<(u32, i64)>)>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(x: &'a CayleyBallComplex, coeffs: Coefficients, cycle: &[i64], node_limit: u64) -> Self {
        let mut open = EdgeSet::new(x.edge_count());
        let residual: Vec<i64> = cycle.iter().map(|&c| coeffs.reduce(c)).collect();
        for (e, &r) in residual.iter().enumerate() {
            if r != 0 {
                open.insert(e as u32);
            }
        }
        Search {
            x,
            coeffs,
            values: vec![None; x.face_count()],
            residual,
            free: (0..x.edge_count()).map(|e| x.edge_faces(e).len() as u32).collect(),
            open,
            nonzero: 0,
            trail: Vec::new(),
            queue: Vec::new(),
            face_length: x.max_face_length().max(1),
            best: None,
            nodes: 0,
            node_limit,
            aborted: false,
        }
    }

    fn set_residual(&mut self, e: u32, r: i64) {
        self.residual[e as usize] = r;
        if r == 0 {
            self.open.remove(e);
        } else {
            self.open.insert(e);
        }
    }

    fn assign(&mut self, f: u32, value: i64) {
        self.values[f as usize] = Some(value);
        self.trail.push(f);
        if value != 0 {
            self.nonzero += 1;
        }
        for &(e, k) in self.x.face_boundary(f as usize) {
            self.free[e as usize] -= 1;
            if value != 0 {
                let r = self.coeffs.reduce(self.residual[e as usize] - k * value);
                self.set_residual(e, r);
            }
            self.queue.push(e);
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let f = self.trail.pop().unwrap();
            let value = self.values[f as usize].take().unwrap();
            if value != 0 {
                self.nonzero -= 1;
            }
            for &(e, k) in self.x.face_boundary(f as usize) {
                self.free[e as usize] += 1;
                if value != 0 {
                    let r = self.coeffs.reduce(self.residual[e as usize] + k * value);
                    self.set_residual(e, r);
                }
            }
        }
    }

    /// Value `x` with `k x = r`, if it is determined and allowed.
    fn solve(&self, k: i64, r: i64) -> Result<Option<i64>, ()> {
        match self.coeffs {
            Coefficients::Integer { bound } => {
                if r % k != 0 || (r / k).abs() > bound {
                    Err(())
                } else {
                    Ok(Some(r / k))
                }
            }
            Coefficients::Modular { modulus } => {
                let k = k.rem_euclid(modulus);
                let g = k.extended_gcd(&modulus);
                if g.gcd != 1 {
                    // not determined by this edge alone
                    return Ok(None);
                }
                Ok(Some((r * g.x).rem_euclid(modulus)))
            }
        }
    }

    /// Runs unit propagation; false on conflict (queue is cleared either way).
    fn propagate(&mut self) -> bool {
        while let Some(e) = self.queue.pop() {
            let e = e as usize;
            match self.free[e] {
                0 => {
                    if self.residual[e] != 0 {
                        self.queue.clear();
                        return false;
                    }
                }
                1 => {
                    let (f, k) = *self
                        .x
                        .edge_faces(e)
                        .iter()
                        .find(|(f, _)| self.values[*f as usize].is_none())
                        .unwrap();
                    match self.solve(k, self.residual[e]) {
                        Err(()) => {
                            self.queue.clear();
                            return false;
                        }
                        Ok(Some(v)) => self.assign(f, v),
                        Ok(None) => {}
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn lower_bound(&self) -> usize {
        self.nonzero + self.open.items.len().div_ceil(self.face_length)
    }

    fn value_order(&self, k: i64, r: i64) -> Vec<i64> {
        let mut vals: Vec<i64> = match self.coeffs {
            Coefficients::Integer { bound } => (1..=bound).flat_map(|v| [v, -v]).collect(),
            Coefficients::Modular { modulus } => (1..modulus).collect(),
        };
        // try the value that clears the branching edge first
        if let Ok(Some(v)) = self.solve(k, r) {
            if let Some(p) = vals.iter().position(|&x| x == v) {
                let v = vals.remove(p);
                vals.insert(0, v);
            }
        }
        vals
    }

    fn record(&mut self) {
        if self.best.as_ref().is_none_or(|(n, _)| self.nonzero < *n) {
            let chosen = self
                .trail
                .iter()
                .filter_map(|&f| match self.values[f as usize] {
                    Some(v) if v != 0 => Some((f, v)),
                    _ => None,
                })
                .collect();
            self.best = Some((self.nonzero, chosen));
        }
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        if self.open.items.is_empty() {
            self.record();
            return;
        }
        if let Some((best, _)) = &self.best {
            if self.lower_bound() >= *best {
                return;
            }
        }
        let Some(e) = self
            .open
            .items
            .iter()
            .copied()
            .min_by_key(|&e| (self.free[e as usize], e))
        else {
            return;
        };
        if self.free[e as usize] == 0 {
            return;
        }
        let mark0 = self.trail.len();
        let candidates: Vec<(u32, i64)> = self.x.edge_faces(e as usize).to_vec();
        for (f, k) in candidates {
            if self.values[f as usize].is_some() {
                continue;
            }
            for v in self.value_order(k, self.residual[e as usize]) {
                let mark = self.trail.len();
                self.assign(f, v);
                if self.propagate() {
                    self.dfs();
                }
                self.undo_to(mark);
                if self.aborted {
                    self.undo_to(mark0);
                    return;
                }
            }
            // later siblings have this face fixed to zero
            self.assign(f, 0);
            if !self.propagate() {
                break;
            }
        }
        self.undo_to(mark0);
    }

    /// Adds, one at a time, the free face and value that clear the most
    /// residual edges; fails when no move helps.
    fn greedy(&mut self) -> bool {
        while !self.open.items.is_empty() {
            let mut touching: Vec<u32> = self
                .open
                .items
                .iter()
                .flat_map(|&e| self.x.edge_faces(e as usize).iter().map(|&(f, _)| f))
                .filter(|&f| self.values[f as usize].is_none())
                .collect();
            touching.sort_unstable();
            touching.dedup();
            let mut best: Option<(i64, u32, i64)> = None;
            for f in touching {
                for v in self.value_order(1, 1) {
                    let mut gain = 0i64;
                    for &(e, k) in self.x.face_boundary(f as usize) {
                        let before = self.residual[e as usize] != 0;
                        let after = self.coeffs.reduce(self.residual[e as usize] - k * v) != 0;
                        gain += before as i64 - after as i64;
                    }
                    if best.is_none_or(|(g, _, _)| gain > g) {
                        best = Some((gain, f, v));
                    }
                }
            }
            match best {
                Some((gain, f, v)) if gain > 0 => self.assign(f, v),
                _ => return false,
            }
            self.queue.clear();
        }
        true
    }
}

fn finish(
    x: &CayleyBallComplex,
    cycle: &[i64],
    chosen: &[(u32, i64)],
    nodes: u64,
    optimal: bool,
) -> Result<FillingResult, FillingError> {
    let mut filler = vec![0i64; x.face_count()];
    for &(f, v) in chosen {
        filler[f as usize] = v;
    }
    let reduced: Vec<i64> = cycle.iter().map(|&c| x.coefficients().reduce(c)).collect();
    if x.boundary_of_faces(&filler)? != reduced {
        return Err(FillingError::Invariant("filler boundary differs from the cycle".into()));
    }
    let cycle_norm = support(&reduced);
    let filler_norm = support(&filler);
    Ok(FillingResult {
        cycle: reduced,
        filler,
        cycle_norm,
        filler_norm,
        ratio: ratio(filler_norm, cycle_norm),
        nodes_explored: nodes,
        optimal,
    })
}

/// Minimal-support 2-chain `d` in the window with `d d = cycle`, coefficients
/// in `[-coeff_bound, coeff_bound]` (any residue over Z/m).
pub fn minimal_filling(
    x: &CayleyBallComplex,
    cycle: &[i64],
    coeff_bound: i64,
    options: &FillingOptions,
) -> Result<FillingResult, FillingError> {
    if cycle.len() != x.edge_count() {
        return Err(FillingError::Length {
            expected: x.edge_count(),
            got: cycle.len(),
        });
    }
    if x.boundary_of_edges(cycle)?.iter().any(|&c| c != 0) {
        return Err(FillingError::NotACycle("edge vector".into()));
    }
    let coeffs = match x.coefficients() {
        Coefficients::Integer { .. } => Coefficients::Integer {
            bound: coeff_bound.max(1),
        },
        modular => modular,
    };
    let mut s = Search::new(x, coeffs, cycle, options.node_limit);
    s.queue = (0..x.edge_count() as u32).rev().collect();
    if !s.propagate() {
        return Err(FillingError::NoFillingInWindow);
    }
    let root = s.trail.len();
    let free_faces = s.values.iter().filter(|v| v.is_none()).count();
    if free_faces <= options.face_budget {
        s.dfs();
        if let Some((_, chosen)) = s.best.take() {
            return finish(x, cycle, &chosen, s.nodes, !s.aborted);
        }
        if !s.aborted {
            return Err(FillingError::NoFillingInWindow);
        }
        s.undo_to(root);
    }
    if !s.greedy() {
        return Err(FillingError::NoFillingInWindow);
    }
    let chosen: Vec<(u32, i64)> = s
        .trail
        .iter()
        .filter_map(|&f| s.values[f as usize].filter(|&v| v != 0).map(|v| (f, v)))
        .collect();
    finish(x, cycle, &chosen, s.nodes, false)
}
