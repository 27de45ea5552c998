//! Exact open subsets of the real line.
//!
//! An [`OpenSet`] is a finite union of open intervals whose endpoints are
//! rationals or infinities, kept in a canonical form: the list of its
//! connected components in increasing order. Two components may share an
//! endpoint (`(0,1)` and `(1,2)`); the shared point is not a member, so they
//! stay separate.
//!
//! The set of such opens is closed under finite union, finite intersection
//! and the Heyting implication `interior((R \ a) ∪ b)`, which is all the
//! forcing evaluators ever need.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational number.
pub type Rat = BigRational;

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds the rational `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// An interval endpoint. The derived order is `NegInf < Fin(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    NegInf,
    Fin(Rat),
    PosInf,
}

impl Endpoint {
    /// True when this endpoint lies strictly below `r`.
    pub fn below(&self, r: &Rat) -> bool {
        match self {
            Endpoint::NegInf => true,
            Endpoint::Fin(q) => q < r,
            Endpoint::PosInf => false,
        }
    }

    /// True when this endpoint lies strictly above `r`.
    pub fn above(&self, r: &Rat) -> bool {
        match self {
            Endpoint::NegInf => false,
            Endpoint::Fin(q) => q > r,
            Endpoint::PosInf => true,
        }
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Endpoint::Fin(q) => Some(q),
            _ => None,
        }
    }

    fn shifted(&self, d: &Rat) -> Endpoint {
        match self {
            Endpoint::Fin(q) => Endpoint::Fin(q + d),
            other => other.clone(),
        }
    }
}

impl From<Rat> for Endpoint {
    fn from(q: Rat) -> Self {
        Endpoint::Fin(q)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::Fin(q) => write!(f, "{q}"),
            Endpoint::PosInf => f.write_str("+inf"),
        }
    }
}

/// A rational strictly inside the open interval `(lo, hi)`.
///
/// Bounded intervals use the midpoint; half-lines step one unit away from
/// the finite end; the whole line uses `0`. Panics on an empty interval.
pub fn representative(lo: &Endpoint, hi: &Endpoint) -> Rat {
    assert!(lo < hi, "empty interval has no representative");
    match (lo, hi) {
        (Endpoint::Fin(a), Endpoint::Fin(b)) => (a + b) / int(2),
        (Endpoint::NegInf, Endpoint::Fin(b)) => b - Rat::one(),
        (Endpoint::Fin(a), Endpoint::PosInf) => a + Rat::one(),
        _ => Rat::zero(),
    }
}

/// Canonical finite union of open intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpenSet {
    intervals: Vec<(Endpoint, Endpoint)>,
}

impl OpenSet {
    pub fn empty() -> Self {
        OpenSet::default()
    }

    pub fn real_line() -> Self {
        OpenSet {
            intervals: vec![(Endpoint::NegInf, Endpoint::PosInf)],
        }
    }

    /// The open interval `(lo, hi)`; empty when `lo >= hi`.
    pub fn interval(lo: Endpoint, hi: Endpoint) -> Self {
        Self::normalize(vec![(lo, hi)])
    }

    /// The bounded open interval `(lo, hi)`.
    pub fn between(lo: Rat, hi: Rat) -> Self {
        Self::interval(Endpoint::Fin(lo), Endpoint::Fin(hi))
    }

    /// `(q, +inf)`
    pub fn above(q: Rat) -> Self {
        Self::interval(Endpoint::Fin(q), Endpoint::PosInf)
    }

    /// `(-inf, q)`
    pub fn below(q: Rat) -> Self {
        Self::interval(Endpoint::NegInf, Endpoint::Fin(q))
    }

    /// Canonical form of the union of the given open intervals.
    ///
    /// Pairs with `lo >= hi` denote the empty interval and are dropped.
    /// Overlapping intervals merge; intervals that only share an endpoint
    /// do not.
    pub fn normalize(raw: Vec<(Endpoint, Endpoint)>) -> Self {
        let mut raw: Vec<_> = raw.into_iter().filter(|(lo, hi)| lo < hi).collect();
        raw.sort();
        let mut out: Vec<(Endpoint, Endpoint)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some(last) if lo < last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        OpenSet { intervals: out }
    }

    /// Connected components in increasing order.
    pub fn intervals(&self) -> &[(Endpoint, Endpoint)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_real_line(&self) -> bool {
        matches!(self.intervals.as_slice(), [(Endpoint::NegInf, Endpoint::PosInf)])
    }

    pub fn intersect(&self, other: &OpenSet) -> OpenSet {
        if self.is_real_line() {
            return other.clone();
        }
        if other.is_real_line() {
            return self.clone();
        }
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a_lo, a_hi) = &self.intervals[i];
            let (b_lo, b_hi) = &other.intervals[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // components of the result are already disjoint and sorted
        OpenSet { intervals: out }
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let mut raw = self.intervals.clone();
        raw.extend(other.intervals.iter().cloned());
        Self::normalize(raw)
    }

    /// Heyting implication: the largest open `c` with `c ∩ self ⊆ other`.
    pub fn heyting_implies(&self, other: &OpenSet) -> OpenSet {
        if other.is_real_line() || self.is_empty() || self.subset(other) {
            return OpenSet::real_line();
        }
        let partition = Partition::new(self.finite_endpoints().chain(other.finite_endpoints()).cloned());
        partition
            .region_where(|r| !self.contains(r) || other.contains(r))
            .interior()
    }

    /// Largest open set disjoint from `self`; `self → ∅`.
    pub fn pseudo_complement(&self) -> OpenSet {
        self.heyting_implies(&OpenSet::empty())
    }

    /// True iff every point of `self` lies in `other`.
    pub fn subset(&self, other: &OpenSet) -> bool {
        // a component of self is connected, so it must sit inside a single
        // component of other
        let mut j = 0;
        'outer: for (lo, hi) in &self.intervals {
            while j < other.intervals.len() {
                let (c, d) = &other.intervals[j];
                if d <= lo {
                    j += 1;
                    continue;
                }
                if c <= lo && hi <= d {
                    continue 'outer;
                }
                return false;
            }
            return false;
        }
        true
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.intervals
            .iter()
            .any(|(lo, hi)| lo.below(r) && hi.above(r))
    }

    /// Every finite endpoint, in increasing order (shared endpoints repeat).
    pub fn finite_endpoints(&self) -> impl Iterator<Item = &Rat> + '_ {
        self.intervals
            .iter()
            .flat_map(|(lo, hi)| [lo.finite(), hi.finite()])
            .flatten()
    }

    /// Translate every endpoint by `d`.
    pub fn shift(&self, d: &Rat) -> OpenSet {
        OpenSet {
            intervals: self
                .intervals
                .iter()
                .map(|(lo, hi)| (lo.shifted(d), hi.shifted(d)))
                .collect(),
        }
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(opens")?;
        for (lo, hi) in &self.intervals {
            write!(f, " (iv {lo} {hi})")?;
        }
        f.write_str(")")
    }
}

/// Free-function spellings of the lattice operations.
pub fn intersect(a: &OpenSet, b: &OpenSet) -> OpenSet {
    a.intersect(b)
}

pub fn union(a: &OpenSet, b: &OpenSet) -> OpenSet {
    a.union(b)
}

pub fn heyting_implies(a: &OpenSet, b: &OpenSet) -> OpenSet {
    a.heyting_implies(b)
}

pub fn subset(a: &OpenSet, b: &OpenSet) -> bool {
    a.subset(b)
}

pub fn contains(a: &OpenSet, r: &Rat) -> bool {
    a.contains(r)
}

pub fn normalize(raw: Vec<(Endpoint, Endpoint)>) -> OpenSet {
    OpenSet::normalize(raw)
}

/// A set of reals of the shape `open ∪ finite set of points`.
///
/// Sets of the form `{r : condition holds at r}` come out this way whenever
/// the condition only changes at finitely many breakpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SettledRegion {
    cells: OpenSet,
    points: BTreeSet<Rat>,
}

impl SettledRegion {
    /// Points already covered by `cells` are dropped.
    pub fn new(cells: OpenSet, points: impl IntoIterator<Item = Rat>) -> Self {
        let points = points.into_iter().filter(|p| !cells.contains(p)).collect();
        SettledRegion { cells, points }
    }

    pub fn cells(&self) -> &OpenSet {
        &self.cells
    }

    pub fn points(&self) -> &BTreeSet<Rat> {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty() && self.points.is_empty()
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.points.contains(r) || self.cells.contains(r)
    }

    /// Largest open set contained in `cells ∪ points`.
    ///
    /// A point is interior exactly when it glues two cells `(a,p)` and
    /// `(p,b)`; every other isolated point has empty interior.
    pub fn interior(&self) -> OpenSet {
        let mut out: Vec<(Endpoint, Endpoint)> = Vec::with_capacity(self.cells.intervals.len());
        for (lo, hi) in &self.cells.intervals {
            if let Some(last) = out.last_mut() {
                if let (Endpoint::Fin(p), Endpoint::Fin(q)) = (&last.1, lo) {
                    if p == q && self.points.contains(p) {
                        last.1 = hi.clone();
                        continue;
                    }
                }
            }
            out.push((lo.clone(), hi.clone()));
        }
        OpenSet { intervals: out }
    }
}

impl fmt::Display for SettledRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(region {} (points", self.cells)?;
        for p in &self.points {
            write!(f, " {p}")?;
        }
        f.write_str("))")
    }
}

pub fn interior_of(region: &SettledRegion) -> OpenSet {
    region.interior()
}

/// One open cell of a [`Partition`] together with a rational inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub rep: Rat,
}

impl Cell {
    pub fn as_open(&self) -> OpenSet {
        OpenSet::interval(self.lo.clone(), self.hi.clone())
    }
}

/// The decomposition of the line cut at finitely many breakpoints into
/// open cells and the breakpoints themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    points: Vec<Rat>,
}

impl Partition {
    pub fn new(points: impl IntoIterator<Item = Rat>) -> Self {
        let set: BTreeSet<Rat> = points.into_iter().collect();
        Partition {
            points: set.into_iter().collect(),
        }
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut bounds = Vec::with_capacity(self.points.len() + 2);
        bounds.push(Endpoint::NegInf);
        bounds.extend(self.points.iter().cloned().map(Endpoint::Fin));
        bounds.push(Endpoint::PosInf);
        bounds
            .windows(2)
            .map(|w| Cell {
                rep: representative(&w[0], &w[1]),
                lo: w[0].clone(),
                hi: w[1].clone(),
            })
            .collect()
    }

    /// One rational per cell followed by every breakpoint.
    pub fn representatives(&self) -> Vec<Rat> {
        let mut reps: Vec<Rat> = self.cells().into_iter().map(|c| c.rep).collect();
        reps.extend(self.points.iter().cloned());
        reps
    }

    /// Representatives lying inside `j`. Exhaustive for conditions that are
    /// constant on cells, provided `j`'s endpoints are among the breakpoints.
    pub fn representatives_within(&self, j: &OpenSet) -> Vec<Rat> {
        self.representatives()
            .into_iter()
            .filter(|r| j.contains(r))
            .collect()
    }

    /// `{r : pred(r)}` for a predicate constant on each cell.
    pub fn region_where(&self, mut pred: impl FnMut(&Rat) -> bool) -> SettledRegion {
        let cells: Vec<_> = self
            .cells()
            .into_iter()
            .filter(|c| pred(&c.rep))
            .map(|c| (c.lo, c.hi))
            .collect();
        let points: Vec<Rat> = self.points.iter().filter(|p| pred(p)).cloned().collect();
        SettledRegion {
            cells: OpenSet { intervals: cells },
            points: points.into_iter().collect(),
        }
    }

    /// Like [`Partition::region_where`] but each cell contributes an
    /// arbitrary open piece of itself.
    pub fn region_from_pieces(
        &self,
        mut cell_piece: impl FnMut(&Cell) -> OpenSet,
        mut point_pred: impl FnMut(&Rat) -> bool,
    ) -> SettledRegion {
        let mut cells = OpenSet::empty();
        for cell in self.cells() {
            let piece = cell_piece(&cell).intersect(&cell.as_open());
            cells = cells.union(&piece);
        }
        let points: Vec<Rat> = self.points.iter().filter(|p| point_pred(p)).cloned().collect();
        SettledRegion::new(cells, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> (Endpoint, Endpoint) {
        (Endpoint::Fin(int(lo)), Endpoint::Fin(int(hi)))
    }

    fn set(ivs: &[(i64, i64)]) -> OpenSet {
        OpenSet::normalize(ivs.iter().map(|&(a, b)| iv(a, b)).collect())
    }

    #[test]
    fn normalize_merges_overlap_only() {
        assert_eq!(set(&[(0, 2), (1, 3)]).intervals(), &[iv(0, 3)]);
        assert_eq!(set(&[(0, 1), (1, 2)]).intervals(), &[iv(0, 1), iv(1, 2)]);
        assert!(OpenSet::normalize(vec![]).is_empty());
        assert!(set(&[(2, 1), (3, 3)]).is_empty());
        assert_eq!(set(&[(1, 2), (0, 5), (6, 7)]).intervals(), &[iv(0, 5), iv(6, 7)]);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(set(&[(0, 2)]).intersect(&set(&[(1, 3)])), set(&[(1, 2)]));
        assert!(set(&[(0, 1)]).intersect(&set(&[(1, 2)])).is_empty());
        let j = set(&[(0, 1), (2, 5)]);
        assert_eq!(OpenSet::real_line().intersect(&j), j);
        assert_eq!(
            set(&[(0, 3), (4, 8)]).intersect(&set(&[(1, 5), (6, 7)])),
            set(&[(1, 3), (4, 5), (6, 7)])
        );
    }

    #[test]
    fn union_examples() {
        assert_eq!(set(&[(0, 1)]).union(&set(&[(1, 2)])).intervals().len(), 2);
        let j = set(&[(0, 1)]);
        assert_eq!(OpenSet::empty().union(&j), j);
        assert_eq!(set(&[(0, 2)]).union(&set(&[(1, 3)])), set(&[(0, 3)]));
    }

    #[test]
    fn heyting_examples() {
        let j = set(&[(0, 1), (3, 4)]);
        assert!(j.heyting_implies(&j).is_real_line());
        assert!(OpenSet::real_line().heyting_implies(&OpenSet::empty()).is_empty());
        let got = set(&[(0, 2)]).heyting_implies(&set(&[(0, 1)]));
        let want = OpenSet::normalize(vec![
            (Endpoint::NegInf, Endpoint::Fin(int(1))),
            (Endpoint::Fin(int(2)), Endpoint::PosInf),
        ]);
        assert_eq!(got, want);
        // the pseudo-complement of (0,1) ∪ (1,2) does not contain 1
        let pc = set(&[(0, 1), (1, 2)]).pseudo_complement();
        assert_eq!(pc, OpenSet::below(int(0)).union(&OpenSet::above(int(2))));
    }

    #[test]
    fn subset_and_contains() {
        assert!(set(&[(1, 2)]).subset(&set(&[(0, 3)])));
        assert!(!set(&[(0, 2)]).subset(&set(&[(0, 1)])));
        assert!(OpenSet::empty().subset(&set(&[(4, 5)])));
        assert!(!set(&[(0, 2)]).subset(&set(&[(0, 1), (1, 2)])));
        assert!(set(&[(0, 1)]).contains(&frac(1, 2)));
        assert!(!set(&[(0, 1)]).contains(&int(1)));
        assert!(!OpenSet::empty().contains(&int(0)));
    }

    #[test]
    fn interior_glues_only_between_cells() {
        let r = SettledRegion::new(set(&[(0, 1), (1, 2)]), [int(1)]);
        assert_eq!(r.interior(), set(&[(0, 2)]));
        let r = SettledRegion::new(set(&[(0, 1)]), [int(5)]);
        assert_eq!(r.interior(), set(&[(0, 1)]));
        let r = SettledRegion::new(OpenSet::empty(), [int(1), int(2)]);
        assert!(r.interior().is_empty());
        let r = SettledRegion::new(set(&[(0, 1), (1, 2), (2, 3)]), [int(1), int(2)]);
        assert_eq!(r.interior(), set(&[(0, 3)]));
    }

    #[test]
    fn settled_region_drops_covered_points() {
        let r = SettledRegion::new(set(&[(0, 2)]), [int(1), int(2)]);
        assert_eq!(r.points().len(), 1);
        assert!(r.contains(&int(2)) && r.contains(&int(1)));
    }

    #[test]
    fn partition_cells_and_reps() {
        let p = Partition::new([int(1), int(0), int(1)]);
        let cells = p.cells();
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[0].rep, int(-1));
        assert_eq!(cells[1].rep, frac(1, 2));
        assert_eq!(cells[2].rep, int(2));
        assert_eq!(Partition::new([]).cells()[0].rep, int(0));
        let inside = p.representatives_within(&set(&[(0, 5)]));
        assert_eq!(inside, vec![frac(1, 2), int(2), int(1)]);
    }

    #[test]
    fn display_matches_text_syntax() {
        let s = OpenSet::below(frac(-1, 2)).union(&set(&[(0, 1)]));
        assert_eq!(s.to_string(), "(opens (iv -inf -1/2) (iv 0 1))");
        assert_eq!(OpenSet::empty().to_string(), "(opens)");
        assert_eq!(OpenSet::real_line().to_string(), "(opens (iv -inf +inf))");
    }

    #[test]
    fn shift_translates_finite_endpoints() {
        let s = set(&[(0, 1)]).union(&OpenSet::above(int(3)));
        let t = s.shift(&int(2));
        assert_eq!(t, set(&[(2, 3)]).union(&OpenSet::above(int(5))));
        assert_eq!(t.shift(&int(-2)), s);
    }
}
