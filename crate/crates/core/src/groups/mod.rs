//! Finitely generated groups behind a uniform oracle.
//!
//! Every element is carried as a [`Word`] in the generators. Each group
//! normalizes words with its own word-problem solver: free reduction for free
//! groups, exponent vectors for free abelian groups, a semidirect-product
//! normal form for the Klein bottle group, table lookup for finite groups, and
//! Dehn's algorithm for the hyperbolic surface presentations. Only the Dehn
//! groups lack canonical forms; their elements are compared with
//! [`Group::equal`] and bucketed by [`Group::key`], which is a homomorphism
//! invariant rather than a normal form.

mod ball;
mod dehn;
mod finite;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::word::{Letter, Word, WordError, MAX_GENERATORS};

pub use ball::Ball;
pub use dehn::DehnSolver;
pub use finite::FiniteTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unrecognized group spec {0:?}")]
    UnknownSpec(String),
    #[error("surface groups need genus >= 2 (got {0}); use Z^2 or Klein for the flat cases")]
    GenusTooSmall(usize),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("invalid presentation: {0}")]
    BadPresentation(String),
    #[error("invalid Cayley table: {0}")]
    BadTable(String),
    #[error("ball exceeds size budget of {limit} elements; largest complete radius is {attained_radius}")]
    BudgetExceeded { attained_radius: usize, limit: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// The two families of one-relator surface presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    /// `prod [g_{2i-1}, g_{2i}]`, n >= 1
    Orientable,
    /// `prod g_i^2`, n >= 2
    NonOrientable,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Free(usize),
    FreeAbelian(usize),
    /// Closed orientable surface of genus >= 2.
    Surface(usize),
    /// `<a, b | a b a b^-1>`
    Klein,
    SurfaceFamily {
        kind: SurfaceKind,
        n: usize,
    },
    Cyclic(usize),
    FiniteTable(FiniteTable),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free(n) => write!(f, "F{n}"),
            GroupSpec::FreeAbelian(n) => write!(f, "Z^{n}"),
            GroupSpec::Surface(g) => write!(f, "Sigma{g}"),
            GroupSpec::Klein => write!(f, "Klein"),
            GroupSpec::SurfaceFamily {
                kind: SurfaceKind::Orientable,
                n,
            } => write!(f, "T11a:{n}"),
            GroupSpec::SurfaceFamily {
                kind: SurfaceKind::NonOrientable,
                n,
            } => write!(f, "T11b:{n}"),
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::FiniteTable(t) => write!(f, "Table{}", t.order()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Accepts `F2`, `Z^2`, `Sigma2`, `Klein`, `T11a:3`, `T11b:2`, `C5`, `Trivial`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || GroupError::UnknownSpec(s.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| unknown());
        if s == "Klein" {
            return Ok(GroupSpec::Klein);
        }
        if s == "Trivial" {
            return Ok(GroupSpec::Cyclic(1));
        }
        if let Some(n) = s.strip_prefix("Z^") {
            return Ok(GroupSpec::FreeAbelian(num(n)?));
        }
        if let Some(g) = s.strip_prefix("Sigma") {
            return Ok(GroupSpec::Surface(num(g)?));
        }
        if let Some(n) = s.strip_prefix("T11a:") {
            return Ok(GroupSpec::SurfaceFamily {
                kind: SurfaceKind::Orientable,
                n: num(n)?,
            });
        }
        if let Some(n) = s.strip_prefix("T11b:") {
            return Ok(GroupSpec::SurfaceFamily {
                kind: SurfaceKind::NonOrientable,
                n: num(n)?,
            });
        }
        if let Some(n) = s.strip_prefix('F') {
            return Ok(GroupSpec::Free(num(n)?));
        }
        if let Some(n) = s.strip_prefix('C') {
            return Ok(GroupSpec::Cyclic(num(n)?));
        }
        Err(unknown())
    }
}

/// A finite presentation `<s_1, ..., s_m | r_1, ..., r_k>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        if generator_count == 0 || generator_count > MAX_GENERATORS {
            return Err(GroupError::BadPresentation(format!(
                "generator count {generator_count} outside 1..={MAX_GENERATORS}"
            )));
        }
        for r in &relators {
            if r.is_empty() {
                return Err(GroupError::BadPresentation("empty relator".into()));
            }
            if !r.is_freely_reduced() {
                return Err(GroupError::BadPresentation(format!(
                    "relator {r} is not freely reduced"
                )));
            }
            if r.max_generator().is_some_and(|g| g >= generator_count) {
                return Err(GroupError::BadPresentation(format!(
                    "relator {r} uses an unknown generator"
                )));
            }
        }
        Ok(Presentation {
            generator_count,
            relators,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Length of the longest relator, i.e. the longest attaching path.
    pub fn max_relator_length(&self) -> Option<usize> {
        self.relators.iter().map(Word::len).max()
    }

    pub fn generator(&self, i: usize) -> Word {
        Word(vec![Letter::pos(i)])
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.generator_count)
            .map(|i| crate::word::generator_name(i).to_string())
            .collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "<{} | {}>", gens.join(", "), rels.join(", "))
    }
}

/// Bucket key for elements. Equal elements always share a key; for groups
/// with canonical forms, distinct elements never do.
pub type ElementKey = Vec<i64>;

/// Klein bottle group elements `a^n b^m` multiply as
/// `(n1, m1)(n2, m2) = (n1 + (-1)^m1 n2, m1 + m2)`.
#[derive(Debug, Clone)]
struct KleinSolver {
    images: Vec<(i64, i64)>,
    a_word: Word,
    b_word: Word,
}

impl KleinSolver {
    fn mul(x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let sign = if x.1.rem_euclid(2) == 0 { 1 } else { -1 };
        (x.0 + sign * y.0, x.1 + y.1)
    }

    fn inv(x: (i64, i64)) -> (i64, i64) {
        let sign = if x.1.rem_euclid(2) == 0 { 1 } else { -1 };
        (-sign * x.0, -x.1)
    }

    fn eval(&self, w: &Word) -> (i64, i64) {
        w.letters().iter().fold((0, 0), |acc, l| {
            let img = self.images[l.gen()];
            Self::mul(acc, if l.inverse { Self::inv(img) } else { img })
        })
    }

    fn word_of(&self, (n, m): (i64, i64)) -> Word {
        self.a_word.pow(n).concat(&self.b_word.pow(m)).free_reduce()
    }
}

#[derive(Debug, Clone)]
enum Solver {
    Free,
    Abelian,
    Klein(KleinSolver),
    Finite(FiniteTable),
    Dehn(DehnSolver),
}

/// The group oracle: multiply, invert, identity test, equality, generators.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    presentation: Presentation,
    solver: Solver,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Group {}

/// Builds the oracle for a group spec.
pub fn make_group(spec: &GroupSpec) -> Result<Arc<Group>, GroupError> {
    Group::new(spec.clone()).map(Arc::new)
}

fn orientable_relator(genus: usize) -> Word {
    Word::from_letters((0..genus).flat_map(|i| Word::commutator(2 * i, 2 * i + 1).0))
}

fn nonorientable_relator(n: usize) -> Word {
    Word::from_letters((0..n).flat_map(|i| [Letter::pos(i), Letter::pos(i)]))
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Group, GroupError> {
        let bad = |msg: String| GroupError::BadParameter(msg);
        let (presentation, solver) = match &spec {
            GroupSpec::Free(n) => {
                if *n == 0 {
                    return Err(bad("free group needs rank >= 1".into()));
                }
                (Presentation::new(*n, vec![])?, Solver::Free)
            }
            GroupSpec::FreeAbelian(n) => {
                if *n == 0 {
                    return Err(bad("free abelian group needs rank >= 1".into()));
                }
                let rels = (0..*n)
                    .flat_map(|i| (i + 1..*n).map(move |j| Word::commutator(i, j)))
                    .collect();
                (Presentation::new(*n, rels)?, Solver::Abelian)
            }
            GroupSpec::Surface(g) => {
                if *g < 2 {
                    return Err(GroupError::GenusTooSmall(*g));
                }
                let p = Presentation::new(2 * g, vec![orientable_relator(*g)])?;
                let solver = Solver::Dehn(DehnSolver::orientable(&p, *g));
                (p, solver)
            }
            GroupSpec::Klein => {
                let rel = Word::parse("a b a b^-1", 2)?;
                let solver = KleinSolver {
                    images: vec![(1, 0), (0, 1)],
                    a_word: Word::parse("a", 2)?,
                    b_word: Word::parse("b", 2)?,
                };
                (Presentation::new(2, vec![rel])?, Solver::Klein(solver))
            }
            GroupSpec::SurfaceFamily { kind, n } => match kind {
                SurfaceKind::Orientable => {
                    if *n < 1 {
                        return Err(bad("T11a needs n >= 1".into()));
                    }
                    let p = Presentation::new(2 * n, vec![orientable_relator(*n)])?;
                    if *n == 1 {
                        (p, Solver::Abelian)
                    } else {
                        let solver = Solver::Dehn(DehnSolver::orientable(&p, *n));
                        (p, solver)
                    }
                }
                SurfaceKind::NonOrientable => {
                    if *n < 2 {
                        return Err(bad("T11b needs n >= 2".into()));
                    }
                    let p = Presentation::new(*n, vec![nonorientable_relator(*n)])?;
                    if *n == 2 {
                        // a = g1 g2, b = g2^-1 identifies <g1,g2 | g1^2 g2^2>
                        // with <a,b | abab^-1>.
                        let solver = KleinSolver {
                            images: vec![(1, 1), (0, -1)],
                            a_word: Word::parse("ab", 2)?,
                            b_word: Word::parse("b^-1", 2)?,
                        };
                        (p, Solver::Klein(solver))
                    } else {
                        let solver = Solver::Dehn(DehnSolver::nonorientable(&p, *n));
                        (p, solver)
                    }
                }
            },
            GroupSpec::Cyclic(n) => {
                let table = FiniteTable::cyclic(*n)?;
                (table.presentation()?, Solver::Finite(table))
            }
            GroupSpec::FiniteTable(table) => (table.presentation()?, Solver::Finite(table.clone())),
        };
        Ok(Group {
            spec,
            presentation,
            solver,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generator_count
    }

    pub fn generators(&self) -> Vec<Word> {
        (0..self.generator_count())
            .map(|i| self.normalize(&self.presentation.generator(i)))
            .collect()
    }

    /// Whether [`Group::normalize`] returns a canonical form.
    pub fn has_canonical_forms(&self) -> bool {
        !matches!(self.solver, Solver::Dehn(_))
    }

    /// Normal form of a word; Dehn-reduced (not canonical) for surface groups.
    pub fn normalize(&self, w: &Word) -> Word {
        match &self.solver {
            Solver::Free => w.free_reduce(),
            Solver::Abelian => {
                let sums = w.exponent_sums(self.generator_count());
                Word::from_letters(
                    sums.iter()
                        .enumerate()
                        .flat_map(|(g, &e)| std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize)),
                )
            }
            Solver::Klein(k) => k.word_of(k.eval(w)),
            Solver::Finite(t) => t.word_of(t.eval(w)).clone(),
            Solver::Dehn(d) => d.reduce(w),
        }
    }

    pub fn multiply(&self, g: &Word, h: &Word) -> Word {
        self.normalize(&g.concat(h))
    }

    pub fn invert(&self, g: &Word) -> Word {
        self.normalize(&g.inverse())
    }

    pub fn identity(&self) -> Word {
        Word::identity()
    }

    pub fn is_identity(&self, g: &Word) -> bool {
        self.normalize(g).is_empty()
    }

    /// Group equality. Equivalent to `is_identity(g h^-1)`.
    pub fn equal(&self, g: &Word, h: &Word) -> bool {
        if self.has_canonical_forms() {
            self.normalize(g) == self.normalize(h)
        } else {
            self.is_identity(&g.concat(&h.inverse()))
        }
    }

    /// Equality for words that are already outputs of [`Group::normalize`].
    pub(crate) fn equal_normalized(&self, g: &Word, h: &Word) -> bool {
        if self.has_canonical_forms() {
            g == h
        } else {
            g == h || self.is_identity(&g.concat(&h.inverse()))
        }
    }

    /// Bucket key: the normal form itself when canonical, otherwise images
    /// under a few homomorphisms into groups with canonical forms.
    pub fn key(&self, g: &Word) -> ElementKey {
        match &self.solver {
            Solver::Dehn(d) => d.invariant_key(g),
            _ => self.normalize(g).letters().iter().map(|l| l.index() as i64).collect(),
        }
    }

    pub(crate) fn key_of_normalized(&self, g: &Word) -> ElementKey {
        match &self.solver {
            Solver::Dehn(d) => d.invariant_key(g),
            _ => g.letters().iter().map(|l| l.index() as i64).collect(),
        }
    }

    /// Order of the group when finite.
    pub fn finite_order(&self) -> Option<usize> {
        match &self.solver {
            Solver::Finite(t) => Some(t.order()),
            _ => None,
        }
    }

    pub fn is_free_abelian(&self) -> bool {
        matches!(self.solver, Solver::Abelian)
    }

    /// Exponent vector of an element of a free abelian group.
    pub fn abelian_coordinates(&self, g: &Word) -> Option<Vec<i64>> {
        match self.solver {
            Solver::Abelian => Some(g.exponent_sums(self.generator_count())),
            _ => None,
        }
    }

    /// All elements of word length at most `radius`, breadth first.
    pub fn ball(&self, radius: usize, max_elements: usize) -> Result<Ball, GroupError> {
        Ball::new(self, radius, max_elements)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, g: &Group) -> Word {
        Word::parse(s, g.generator_count()).unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["F2", "Z^2", "Sigma2", "Klein", "T11a:3", "T11b:2", "C5"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("X7".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn surface_presentations() {
        let g = Group::new(GroupSpec::Surface(2)).unwrap();
        assert_eq!(g.presentation().to_string(), "<a, b, c, d | aba^-1b^-1cdc^-1d^-1>");
        let k = Group::new("T11b:2".parse().unwrap()).unwrap();
        assert_eq!(k.presentation().to_string(), "<a, b | a^2b^2>");
        assert!(matches!(
            Group::new(GroupSpec::Surface(1)),
            Err(GroupError::GenusTooSmall(1))
        ));
        assert!(Group::new("T11b:1".parse().unwrap()).is_err());
        assert!(Group::new("T11a:0".parse().unwrap()).is_err());
    }

    #[test]
    fn free_group() {
        let g = Group::new(GroupSpec::Free(2)).unwrap();
        assert!(g.is_identity(&w("a a^-1", &g)));
        assert!(!g.is_identity(&w("a b a^-1 b^-1", &g)));
    }

    #[test]
    fn free_abelian_group() {
        let g = Group::new(GroupSpec::FreeAbelian(2)).unwrap();
        assert_eq!(g.multiply(&w("a", &g), &w("b", &g)), w("ab", &g));
        assert!(g.is_identity(&w("a b a^-1 b^-1", &g)));
        assert!(g.equal(&w("ba", &g), &w("ab", &g)));
    }

    #[test]
    fn surface_word_problem() {
        let g = Group::new(GroupSpec::Surface(2)).unwrap();
        let r = g.presentation().relators()[0].clone();
        assert!(g.is_identity(&r));
        assert!(g.is_identity(&r.concat(&r.inverse())));
        assert!(g.is_identity(&r.rotate(3)));
        assert!(!g.is_identity(&w("a", &g)));
        assert!(!g.is_identity(&w("a b a^-1 b^-1", &g)));
        // five letters of the relator equal the inverse of the other three
        assert!(g.equal(&w("aba^-1b^-1c", &g), &w("dcd^-1", &g)));
    }

    #[test]
    fn klein_normal_forms() {
        let k = Group::new(GroupSpec::Klein).unwrap();
        assert!(k.is_identity(&w("a b a b^-1", &k)));
        assert!(k.equal(&w("ba", &k), &w("a^-1 b", &k)));
        assert!(!k.is_identity(&w("a^2", &k)));
        let t = Group::new("T11b:2".parse().unwrap()).unwrap();
        assert!(t.is_identity(&w("a^2 b^2", &t)));
        assert!(t.is_identity(&w("b^2 a^2", &t)));
        assert!(!t.is_identity(&w("a^2", &t)));
        assert!(!t.is_identity(&w("ab", &t)));
    }

    #[test]
    fn nonorientable_dehn() {
        for n in 3..=4 {
            let g = Group::new(GroupSpec::SurfaceFamily {
                kind: SurfaceKind::NonOrientable,
                n,
            })
            .unwrap();
            let r = g.presentation().relators()[0].clone();
            for k in 0..r.len() {
                assert!(g.is_identity(&r.rotate(k)));
                assert!(g.is_identity(&r.rotate(k).inverse()));
            }
            assert!(!g.is_identity(&w("a^2", &g)));
        }
    }

    #[test]
    fn keys_are_invariant() {
        let g = Group::new(GroupSpec::Surface(2)).unwrap();
        let x = w("aba^-1b^-1c", &g);
        let y = w("dcd^-1", &g);
        assert_eq!(g.key(&x), g.key(&y));
        assert_ne!(g.key(&w("a", &g)), g.key(&w("b", &g)));
    }
}
