//! Two-part names for sets in the forcing model.
//!
//! A [`Term`] carries open entries `⟨child, J⟩` (the child is a member
//! wherever `J` holds) and settled entries `⟨child, r⟩` (the child becomes a
//! member when the term settles at exactly `r`). Terms without settled
//! entries are the names of the standard semantics.
//!
//! Terms are immutable, shared behind an [`Arc`], and kept canonical:
//! entries are sorted by a total structural order and duplicates removed.
//! Each node caches its rank, hash, groundness and hereditary breakpoints.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::Error;
use crate::opens::{OpenSet, Partition, Rat};

/// A hereditarily finite set whose urelements are tagged rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HFSet {
    Atom(Rat),
    Set(BTreeSet<HFSet>),
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet::Set(BTreeSet::new())
    }

    pub fn set(members: impl IntoIterator<Item = HFSet>) -> Self {
        HFSet::Set(members.into_iter().collect())
    }

    /// The von Neumann natural `n`.
    pub fn natural(n: usize) -> Self {
        let mut acc = BTreeSet::new();
        for _ in 0..n {
            let next = HFSet::Set(acc.clone());
            acc.insert(next);
        }
        HFSet::Set(acc)
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn pair(a: HFSet, b: HFSet) -> Self {
        HFSet::set([HFSet::set([a.clone()]), HFSet::set([a, b])])
    }

    pub fn members(&self) -> Vec<HFSet> {
        match self {
            HFSet::Atom(_) => Vec::new(),
            HFSet::Set(m) => m.iter().cloned().collect(),
        }
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFSet::Atom(q) => write!(f, "(ratq {q})"),
            HFSet::Set(m) => {
                f.write_str("(set")?;
                for x in m {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum TermKind {
    Atom(Rat),
    Set {
        open: Vec<(Term, OpenSet)>,
        settled: Vec<(Term, Rat)>,
    },
}

#[derive(Debug)]
struct Node {
    kind: TermKind,
    hash: u64,
    rank: usize,
    ground: bool,
    breakpoints: Vec<Rat>,
}

/// A canonical, hash-consed-by-value term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.kind.cmp(&other.0.kind)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Term {
    fn from_kind(kind: TermKind) -> Term {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let (rank, ground, breakpoints) = match &kind {
            TermKind::Atom(_) => (0, true, Vec::new()),
            TermKind::Set { open, settled } => {
                let rank = open
                    .iter()
                    .map(|(c, _)| c.rank() + 1)
                    .chain(settled.iter().map(|(c, _)| c.rank() + 1))
                    .max()
                    .unwrap_or(0);
                let ground = settled.is_empty()
                    && open.iter().all(|(c, j)| j.is_real_line() && c.is_ground());
                let mut bp = BTreeSet::new();
                for (c, j) in open {
                    bp.extend(j.finite_endpoints().cloned());
                    bp.extend(c.breakpoints().iter().cloned());
                }
                for (c, q) in settled {
                    bp.insert(q.clone());
                    bp.extend(c.breakpoints().iter().cloned());
                }
                (rank, ground, bp.into_iter().collect())
            }
        };
        Term(Arc::new(Node {
            kind,
            hash: h.finish(),
            rank,
            ground,
            breakpoints,
        }))
    }

    /// Canonical term with the given entries (sorted, duplicates removed).
    pub fn new(mut open: Vec<(Term, OpenSet)>, mut settled: Vec<(Term, Rat)>) -> Term {
        open.sort();
        open.dedup();
        settled.sort();
        settled.dedup();
        Term::from_kind(TermKind::Set { open, settled })
    }

    /// Term with open entries only.
    pub fn with_entries(open: Vec<(Term, OpenSet)>) -> Term {
        Term::new(open, Vec::new())
    }

    /// `{⟨c, ℝ⟩ | c ∈ children}`
    pub fn ground_set(children: impl IntoIterator<Item = Term>) -> Term {
        Term::with_entries(children.into_iter().map(|c| (c, OpenSet::real_line())).collect())
    }

    /// The name of the rational urelement `q`.
    pub fn atom(q: Rat) -> Term {
        Term::from_kind(TermKind::Atom(q))
    }

    /// `∅̂`
    pub fn empty() -> Term {
        Term::new(Vec::new(), Vec::new())
    }

    pub fn atom_value(&self) -> Option<&Rat> {
        match &self.0.kind {
            TermKind::Atom(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        self.atom_value().is_some()
    }

    pub fn open_entries(&self) -> &[(Term, OpenSet)] {
        match &self.0.kind {
            TermKind::Set { open, .. } => open,
            TermKind::Atom(_) => &[],
        }
    }

    pub fn settled_entries(&self) -> &[(Term, Rat)] {
        match &self.0.kind {
            TermKind::Set { settled, .. } => settled,
            TermKind::Atom(_) => &[],
        }
    }

    /// 0 for atoms and `∅̂`, otherwise one more than the largest child rank.
    /// Settled entries count.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// All regions are ℝ, there are no settled entries, hereditarily.
    pub fn is_ground(&self) -> bool {
        self.0.ground
    }

    /// Every finite interval endpoint and settling real occurring
    /// hereditarily, sorted.
    pub fn breakpoints(&self) -> &[Rat] {
        &self.0.breakpoints
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.breakpoints().iter().cloned())
    }

    /// The ground term this term settles to at `r`.
    pub fn settle(&self, r: &Rat) -> Term {
        if self.is_ground() {
            return self.clone();
        }
        let open = self
            .open_entries()
            .iter()
            .filter(|(_, j)| j.contains(r))
            .map(|(c, _)| c.settle(r));
        let settled = self
            .settled_entries()
            .iter()
            .filter(|(_, q)| q == r)
            .map(|(c, _)| c.settle(r));
        Term::ground_set(open.chain(settled))
    }

    /// Translate every interval endpoint and settling real by `d`,
    /// hereditarily. Ground terms (atoms included) are fixed.
    pub fn shift(&self, d: &Rat) -> Term {
        if self.is_ground() {
            return self.clone();
        }
        Term::new(
            self.open_entries()
                .iter()
                .map(|(c, j)| (c.shift(d), j.shift(d)))
                .collect(),
            self.settled_entries()
                .iter()
                .map(|(c, q)| (c.shift(d), q + d))
                .collect(),
        )
    }

    /// The ground-model set a ground term names.
    pub fn to_hf(&self) -> Result<HFSet, Error> {
        if !self.is_ground() {
            return Err(Error::NotGround(self.to_string()));
        }
        Ok(self.to_hf_unchecked())
    }

    fn to_hf_unchecked(&self) -> HFSet {
        match &self.0.kind {
            TermKind::Atom(q) => HFSet::Atom(q.clone()),
            TermKind::Set { open, .. } => HFSet::set(open.iter().map(|(c, _)| c.to_hf_unchecked())),
        }
    }

    /// Children of a ground term.
    pub fn ground_members(&self) -> impl Iterator<Item = &Term> + '_ {
        self.open_entries().iter().map(|(c, _)| c)
    }
}

/// `x̂ = {⟨ŷ, ℝ⟩ | y ∈ x}`; atoms map to atom names.
pub fn canon(x: &HFSet) -> Term {
    match x {
        HFSet::Atom(q) => Term::atom(q.clone()),
        HFSet::Set(m) => Term::ground_set(m.iter().map(canon)),
    }
}

pub fn rank(t: &Term) -> usize {
    t.rank()
}

pub fn settle(t: &Term, r: &Rat) -> Term {
    t.settle(r)
}

pub fn shift(t: &Term, d: &Rat) -> Term {
    t.shift(d)
}

pub fn breakpoints(t: &Term) -> BTreeSet<Rat> {
    t.breakpoints().iter().cloned().collect()
}

/// Structural equality of two ground terms.
pub fn ground_equal(a: &Term, b: &Term) -> Result<bool, Error> {
    for t in [a, b] {
        if !t.is_ground() {
            return Err(Error::NotGround(t.to_string()));
        }
    }
    Ok(a == b)
}

/// `n̂` for the von Neumann natural `n`.
pub fn natural(n: usize) -> Term {
    canon(&HFSet::natural(n))
}

/// A finite, strictly increasing, nonempty set of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid(Vec<Rat>);

impl Grid {
    pub fn new(points: impl IntoIterator<Item = Rat>) -> Result<Grid, Error> {
        let set: BTreeSet<Rat> = points.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(Grid(set.into_iter().collect()))
    }

    pub fn points(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The grid with the midpoint of every consecutive pair added.
    pub fn refined(&self) -> Grid {
        let mids = self.0.windows(2).map(|w| (&w[0] + &w[1]) / crate::opens::int(2));
        Grid::new(self.0.iter().cloned().chain(mids)).expect("refining keeps the grid nonempty")
    }
}

/// The generic real restricted to a grid:
/// `{⟨q̂, (q, +∞)⟩ | q ∈ grid}` with `q̂` the atom name of `q`.
pub fn generic(grid: &Grid) -> Term {
    Term::with_entries(
        grid.points()
            .iter()
            .map(|q| (Term::atom(q.clone()), OpenSet::above(q.clone())))
            .collect(),
    )
}

/// The ground name of the grid cut below `c`: `{⟨q̂, ℝ⟩ | q ∈ grid, q < c}`.
pub fn grid_cut(grid: &Grid, c: &Rat) -> Term {
    Term::ground_set(grid.points().iter().filter(|q| *q < c).map(|q| Term::atom(q.clone())))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ground() {
            return write!(f, "(hat {})", self.to_hf_unchecked());
        }
        f.write_str("(term")?;
        for (c, j) in self.open_entries() {
            write!(f, " (p {c} {j})")?;
        }
        for (c, q) in self.settled_entries() {
            write!(f, " (s {c} {q})")?;
        }
        f.write_str(")")
    }
}
