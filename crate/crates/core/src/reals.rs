//! Fundamental sequences with a modulus, the cut they embed to, and finite
//! checks of the left-cut clauses. Unbounded quantifiers are truncated at
//! explicit bounds.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::opens::Rat;
use crate::syntax::sexp::{read_one, Sexp};

/// Extra indices checked past `f(K) + K` by [`is_fundamental_upto`].
pub const FUNDAMENTAL_SLACK: u64 = 16;

/// `2^(−k)`
pub fn pow2_neg(k: u64) -> Rat {
    Rat::new(One::one(), num_bigint::BigInt::one() << k)
}

#[derive(Clone)]
pub enum Terms {
    Const(Rat),
    /// `1/(n+1)`
    RecipSucc,
    /// Listed values, then a constant.
    Table(Vec<Rat>, Rat),
    Fn(Arc<dyn Fn(u64) -> Rat + Send + Sync>),
}

#[derive(Clone)]
pub enum Modulus {
    /// Listed values; the last repeats.
    Table(Vec<u64>),
    /// `2^(k+s)`
    Pow2Shift(u32),
    Fn(Arc<dyn Fn(u64) -> u64 + Send + Sync>),
}

/// A sequence of rationals together with a claimed Cauchy modulus.
#[derive(Clone)]
pub struct FundamentalSeq {
    pub terms: Terms,
    pub modulus: Modulus,
}

impl FundamentalSeq {
    pub fn constant(q: Rat) -> Self {
        FundamentalSeq {
            terms: Terms::Const(q),
            modulus: Modulus::Table(vec![0]),
        }
    }

    pub fn recip_succ() -> Self {
        FundamentalSeq {
            terms: Terms::RecipSucc,
            modulus: Modulus::Pow2Shift(1),
        }
    }

    pub fn from_fn(f: impl Fn(u64) -> Rat + Send + Sync + 'static, modulus: Modulus) -> Self {
        FundamentalSeq {
            terms: Terms::Fn(Arc::new(f)),
            modulus,
        }
    }

    pub fn at(&self, n: u64) -> Rat {
        match &self.terms {
            Terms::Const(q) => q.clone(),
            Terms::RecipSucc => Rat::new(One::one(), (n + 1).into()),
            Terms::Table(v, tail) => v.get(n as usize).unwrap_or(tail).clone(),
            Terms::Fn(f) => f(n),
        }
    }

    pub fn modulus_at(&self, k: u64) -> u64 {
        match &self.modulus {
            Modulus::Table(v) => v.get(k as usize).or(v.last()).copied().unwrap_or(0),
            Modulus::Pow2Shift(s) => 1u64 << (k + u64::from(*s)).min(62),
            Modulus::Fn(f) => f(k),
        }
    }
}

impl fmt::Debug for FundamentalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FundamentalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(seq ")?;
        match &self.terms {
            Terms::Const(q) => write!(f, "(const {q})")?,
            Terms::RecipSucc => write!(f, "(recip-succ)")?,
            Terms::Table(v, tail) => {
                write!(f, "(table")?;
                for q in v {
                    write!(f, " {q}")?;
                }
                write!(f, " (tail const {tail}))")?;
            }
            Terms::Fn(_) => write!(f, "(fn)")?,
        }
        write!(f, " (modulus ")?;
        match &self.modulus {
            Modulus::Table(v) => {
                write!(f, "(table")?;
                for n in v {
                    write!(f, " {n}")?;
                }
                write!(f, ")")?;
            }
            Modulus::Pow2Shift(s) => write!(f, "(pow2-shift {s})")?,
            Modulus::Fn(_) => write!(f, "(fn)")?,
        }
        write!(f, "))")
    }
}

/// `∀k ≤ K ∀m,n ∈ [f(k), N] |s(m) − s(n)| < 2^(−k)` with
/// `N = max_{k≤K} f(k) + K + FUNDAMENTAL_SLACK`.
pub fn is_fundamental_upto(s: &FundamentalSeq, k_max: u64) -> bool {
    let top = (0..=k_max).map(|k| s.modulus_at(k)).max().unwrap_or(0) + k_max + FUNDAMENTAL_SLACK;
    let values: Vec<Rat> = (0..=top).map(|n| s.at(n)).collect();
    // Suffix minima and maxima give the spread of every window [f(k), top].
    let mut lo = vec![Rat::zero(); values.len()];
    let mut hi = vec![Rat::zero(); values.len()];
    for i in (0..values.len()).rev() {
        let (l, h) = match i + 1 < values.len() {
            true => (lo[i + 1].clone().min(values[i].clone()), hi[i + 1].clone().max(values[i].clone())),
            false => (values[i].clone(), values[i].clone()),
        };
        lo[i] = l;
        hi[i] = h;
    }
    (0..=k_max).all(|k| {
        let start = s.modulus_at(k).min(top) as usize;
        &hi[start] - &lo[start] < pow2_neg(k)
    })
}

/// `∀k ≤ K ∃n ≤ H ∀m ∈ [n, 2H] |s(m) − t(m)| < 2^(−k)`. A `false` answer
/// only says no witness `n` exists below the horizon `H`.
pub fn coincide_upto(s: &FundamentalSeq, t: &FundamentalSeq, k_max: u64, horizon: u64) -> bool {
    let diffs: Vec<Rat> = (0..=2 * horizon).map(|m| (s.at(m) - t.at(m)).abs()).collect();
    (0..=k_max).all(|k| {
        let eps = pow2_neg(k);
        // The last index that is too far apart must lie below the horizon.
        match diffs.iter().rposition(|d| *d >= eps) {
            None => true,
            Some(bad) => (bad as u64) < horizon,
        }
    })
}

/// `q ∈ X_s` witnessed below `M`: some `m ≤ M` has `q < s(f(m)) − 2^(−m)`.
pub fn in_cut_x(q: &Rat, s: &FundamentalSeq, m_max: u64) -> bool {
    (0..=m_max).any(|m| *q < s.at(s.modulus_at(m)) - pow2_neg(m))
}

/// Precision sufficient for [`in_cut_x`] of a constant sequence to decide
/// every query at least `gap` away from the constant: `2 + ⌈log₂(1/gap)⌉`.
pub fn precision_for_gap(gap: &Rat) -> u64 {
    let mut m = 0;
    while pow2_neg(m) > *gap {
        m += 1;
    }
    m + 2
}

/// A finite sample of a left cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutWindow {
    pub members: BTreeSet<Rat>,
    pub nonmembers: BTreeSet<Rat>,
    pub window: (Rat, Rat),
}

/// Outcome of [`check_cut_window`], clause by clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutCheck {
    pub in_window: bool,
    pub bounded: bool,
    pub ordered: bool,
    pub open: bool,
    pub located: bool,
}

impl CutCheck {
    pub fn pass(&self) -> bool {
        self.in_window && self.bounded && self.ordered && self.open && self.located
    }
}

pub fn check_cut_window_detail(c: &CutWindow) -> CutCheck {
    let (lo, hi) = &c.window;
    let all: BTreeSet<&Rat> = c.members.iter().chain(&c.nonmembers).collect();
    let in_window = all.iter().all(|q| lo < *q && *q < hi);
    let bounded = !c.members.is_empty() && !c.nonmembers.is_empty();
    let ordered = match (c.members.last(), c.nonmembers.first()) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    };
    // A largest member is open relative to the window when it lies below
    // the window's upper end.
    let open = c.members.iter().all(|m| c.members.range(m..).nth(1).is_some() || m < hi);
    let all: Vec<&Rat> = all.into_iter().collect();
    let located = all.iter().enumerate().all(|(i, r)| {
        all[i + 1..].iter().all(|s| c.members.contains(*r) || c.nonmembers.contains(*s))
    });
    CutCheck { in_window, bounded, ordered, open, located }
}

/// Boundedness, order, openness relative to the window, and locatedness
/// for every declared pair.
pub fn check_cut_window(c: &CutWindow) -> bool {
    check_cut_window_detail(c).pass()
}

/// Sorts `queries` into members and nonmembers of `X_s` at precision `M`.
pub fn harvest(s: &FundamentalSeq, m_max: u64, queries: &[Rat], window: (Rat, Rat)) -> CutWindow {
    let (members, nonmembers) = queries.iter().cloned().partition(|q| in_cut_x(q, s, m_max));
    CutWindow { members, nonmembers, window }
}

fn nat(s: &Sexp) -> Result<u64> {
    s.as_atom()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| s.error("expected a natural number"))
}

fn rat(s: &Sexp) -> Result<Rat> {
    let text = s.as_atom().ok_or_else(|| s.error("expected a rational"))?;
    crate::syntax::parse_rat(text).map_err(|_| s.error(format!("`{text}` is not a rational")))
}

/// Parses `(seq <terms> (modulus <modulus>))` where `<terms>` is
/// `(const q)`, `(recip-succ)` or `(table q... (tail const q))` and
/// `<modulus>` is `(table n...)` or `(pow2-shift n)`.
pub fn parse_seq(text: &str) -> Result<FundamentalSeq> {
    let s = read_one(text)?;
    let Some(("seq", [terms, modulus])) = s.head() else {
        return Err(s.error("expected (seq <terms> (modulus <modulus>))"));
    };
    let terms = match terms.head() {
        Some(("const", [q])) => Terms::Const(rat(q)?),
        Some(("recip-succ", [])) => Terms::RecipSucc,
        Some(("table", items)) => {
            let (tail, values) = items
                .split_last()
                .ok_or_else(|| terms.error("table needs (tail const <rat>)"))?;
            let tail = match tail.head() {
                Some(("tail", [kw, q])) if kw.as_atom() == Some("const") => rat(q)?,
                _ => return Err(tail.error("expected (tail const <rat>)")),
            };
            Terms::Table(values.iter().map(rat).collect::<Result<_>>()?, tail)
        }
        _ => return Err(terms.error("expected (const q), (recip-succ) or (table ...)")),
    };
    let modulus = match modulus.head() {
        Some(("modulus", [m])) => match m.head() {
            Some(("table", ns)) if !ns.is_empty() => Modulus::Table(ns.iter().map(nat).collect::<Result<_>>()?),
            Some(("pow2-shift", [n])) => Modulus::Pow2Shift(nat(n)? as u32),
            _ => return Err(m.error("expected (table n...) or (pow2-shift n)")),
        },
        _ => return Err(modulus.error("expected (modulus ...)")),
    };
    Ok(FundamentalSeq { terms, modulus })
}

impl std::str::FromStr for FundamentalSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_seq(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opens::{frac, int};

    fn alternating() -> FundamentalSeq {
        FundamentalSeq::from_fn(|n| if n % 2 == 0 { int(1) } else { int(-1) }, Modulus::Table(vec![0]))
    }

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental_upto(&FundamentalSeq::constant(frac(3, 7)), 20));
        assert!(is_fundamental_upto(&FundamentalSeq::recip_succ(), 10));
        assert!(!is_fundamental_upto(&alternating(), 1));
        let slow = FundamentalSeq {
            terms: Terms::RecipSucc,
            modulus: Modulus::Table(vec![0, 1, 2]),
        };
        assert!(!is_fundamental_upto(&slow, 3));
    }

    #[test]
    fn coincidence_examples() {
        let r = FundamentalSeq::recip_succ();
        assert!(coincide_upto(&r, &r, 10, 1 << 12));
        assert!(coincide_upto(&r, &FundamentalSeq::constant(int(0)), 10, 1 << 12));
        assert!(!coincide_upto(&FundamentalSeq::constant(int(0)), &FundamentalSeq::constant(int(1)), 1, 64));
    }

    #[test]
    fn cut_examples() {
        let c = FundamentalSeq::constant(int(3));
        assert!(in_cut_x(&int(2), &c, 2));
        assert!(!in_cut_x(&int(2), &c, 0));
        for m in 0..12 {
            assert!(!in_cut_x(&int(3), &c, m));
        }
        assert_eq!(precision_for_gap(&frac(1, 8)), 5);
    }

    #[test]
    fn window_examples() {
        let w = CutWindow {
            members: [int(0), int(1)].into(),
            nonmembers: [int(2)].into(),
            window: (int(-1), int(3)),
        };
        assert!(check_cut_window(&w));
        let bad = CutWindow {
            members: [int(1)].into(),
            nonmembers: [int(0)].into(),
            window: (int(-1), int(3)),
        };
        assert!(!check_cut_window(&bad));
        let q0 = frac(1, 3);
        let queries: Vec<Rat> = (-4..=4).map(|i| &q0 + frac(i, 4)).collect();
        let h = harvest(&FundamentalSeq::constant(q0.clone()), precision_for_gap(&frac(1, 4)), &queries, (int(-2), int(3)));
        assert_eq!(h.members.len(), 4);
        assert!(check_cut_window(&h));
    }

    #[test]
    fn seq_syntax_round_trips() {
        for text in [
            "(seq (const 1/2) (modulus (table 0)))",
            "(seq (recip-succ) (modulus (pow2-shift 1)))",
            "(seq (table 1 0 1/2 (tail const 0)) (modulus (table 0 3 5)))",
        ] {
            let s = parse_seq(text).unwrap();
            assert_eq!(s.to_string(), text);
        }
        let t = parse_seq("(seq (table 1 0 (tail const 7)) (modulus (table 0)))").unwrap();
        assert_eq!(t.at(1), int(0));
        assert_eq!(t.at(9), int(7));
        assert!(parse_seq("(seq (const x) (modulus (table 0)))").is_err());
        assert!(parse_seq("(seq (const 1) (modulus (table)))").is_err());
    }
}
