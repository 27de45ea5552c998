//! Forcing without settling: maximal forcing regions by structural
//! recursion, and a direct clause-by-clause evaluator used as an oracle.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Mutex, OnceLock};

use crate::opens::{OpenSet, Rat};
use crate::syntax::{Context, Formula, Operand};
use crate::terms::Term;

/// A cache of pure results. Concurrent callers may compute the same entry
/// twice; both write the same value.
pub(crate) struct Memo<K, V> {
    map: Mutex<HashMap<K, V>>,
}

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    pub(crate) fn new() -> Self {
        Memo { map: Mutex::new(HashMap::new()) }
    }

    pub(crate) fn get_or(&self, key: K, compute: impl FnOnce() -> V) -> V {
        if let Some(v) = self.map.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = compute();
        self.map.lock().unwrap().insert(key, v.clone());
        v
    }

    pub(crate) fn clear(&self) {
        self.map.lock().unwrap().clear();
    }
}

pub(crate) fn ordered(a: &Term, b: &Term) -> (Term, Term) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn eq_memo() -> &'static Memo<(Term, Term), OpenSet> {
    static M: OnceLock<Memo<(Term, Term), OpenSet>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

fn mem_memo() -> &'static Memo<(Term, Term), OpenSet> {
    static M: OnceLock<Memo<(Term, Term), OpenSet>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

/// Drops every memoized region. Results are unaffected.
pub fn clear_caches() {
    eq_memo().clear();
    mem_memo().clear();
}

/// Regions on which two rational atoms, or an atom and a set, are equal.
/// `None` when both are sets.
pub(crate) fn atom_eq(s: &Term, t: &Term) -> Option<OpenSet> {
    match (s.atom_value(), t.atom_value()) {
        (None, None) => None,
        (Some(a), Some(b)) if a == b => Some(OpenSet::real_line()),
        _ => Some(OpenSet::empty()),
    }
}

/// The largest open forcing `σ = τ`.
pub fn max_eq(s: &Term, t: &Term) -> OpenSet {
    if s == t {
        return OpenSet::real_line();
    }
    if let Some(r) = atom_eq(s, t) {
        return r;
    }
    eq_memo().get_or(ordered(s, t), || {
        let mut acc = OpenSet::real_line();
        for (a, b) in [(s, t), (t, s)] {
            for (child, j) in a.open_entries() {
                if acc.is_empty() {
                    return acc;
                }
                acc = acc.intersect(&j.heyting_implies(&max_mem(child, b)));
            }
        }
        acc
    })
}

/// The largest open forcing `σ ∈ τ`.
pub fn max_mem(s: &Term, t: &Term) -> OpenSet {
    if t.is_atom() || t.open_entries().is_empty() {
        return OpenSet::empty();
    }
    mem_memo().get_or((s.clone(), t.clone()), || {
        t.open_entries()
            .iter()
            .filter(|(_, k)| !k.is_empty())
            .fold(OpenSet::empty(), |acc, (child, k)| acc.union(&k.intersect(&max_eq(s, child))))
    })
}

pub(crate) fn param<'a>(o: &'a Operand, phi: &Formula) -> &'a Term {
    match o {
        Operand::Param(t) => t,
        Operand::Var(x) => panic!("free variable `{x}` in {phi}; evaluate sentences only"),
    }
}

/// The maximal open forcing the sentence `φ`, quantifiers ranging over
/// `ctx.terms()`.
///
/// # Panics
/// If `φ` has a free variable.
pub fn value(phi: &Formula, ctx: &Context) -> OpenSet {
    match phi {
        Formula::Eq(a, b) => max_eq(param(a, phi), param(b, phi)),
        Formula::Mem(a, b) => max_mem(param(a, phi), param(b, phi)),
        Formula::And(a, b) => {
            let va = value(a, ctx);
            if va.is_empty() {
                return va;
            }
            va.intersect(&value(b, ctx))
        }
        Formula::Or(a, b) => value(a, ctx).union(&value(b, ctx)),
        Formula::Implies(a, b) => value(a, ctx).heyting_implies(&value(b, ctx)),
        Formula::Bot => OpenSet::empty(),
        Formula::Exists(x, body) => ctx
            .terms()
            .iter()
            .fold(OpenSet::empty(), |acc, t| acc.union(&value(&body.substitute(x, t), ctx))),
        Formula::Forall(x, body) => {
            let mut acc = OpenSet::real_line();
            for t in ctx.terms() {
                if acc.is_empty() {
                    break;
                }
                acc = acc.intersect(&value(&body.substitute(x, t), ctx));
            }
            acc
        }
    }
}

/// `J ⊩ φ`, i.e. `J ⊆ value(φ)`.
pub fn forces(j: &OpenSet, phi: &Formula, ctx: &Context) -> bool {
    j.is_empty() || j.subset(&value(phi, ctx))
}

/// Node satisfaction `r ⊨ φ`.
pub fn satisfies(r: &Rat, phi: &Formula, ctx: &Context) -> bool {
    value(phi, ctx).contains(r)
}

/// Literal evaluation of every forcing clause, with "there is a `J'`" and
/// "for all `J' ⊆ J`" ranging over `ctx.subbase()` (for the latter,
/// intersected with `J`). "For all `r ∈ J`" is decided by a covering check.
pub fn direct_forces(j: &OpenSet, phi: &Formula, ctx: &Context) -> bool {
    Direct::new(ctx).formula(j, phi)
}

struct Direct<'a> {
    ctx: &'a Context,
    eq: HashMap<(OpenSet, Term, Term), bool>,
    mem: HashMap<(OpenSet, Term, Term), bool>,
}

impl<'a> Direct<'a> {
    fn new(ctx: &'a Context) -> Self {
        Direct { ctx, eq: HashMap::new(), mem: HashMap::new() }
    }

    /// Whether `J` is covered by the subbase opens satisfying `pred`.
    fn covered(&mut self, j: &OpenSet, mut pred: impl FnMut(&mut Self, &OpenSet) -> bool) -> bool {
        if j.is_empty() {
            return true;
        }
        let mut cover = OpenSet::empty();
        for k in self.ctx.subbase().to_vec() {
            if k.intersect(j).is_empty() || k.intersect(j).subset(&cover) {
                continue;
            }
            if pred(self, &k) {
                cover = cover.union(&k);
                if j.subset(&cover) {
                    return true;
                }
            }
        }
        j.subset(&cover)
    }

    fn eq(&mut self, j: &OpenSet, s: &Term, t: &Term) -> bool {
        if j.is_empty() {
            return true;
        }
        if let Some(r) = atom_eq(s, t) {
            return j.subset(&r);
        }
        let key = (j.clone(), s.clone(), t.clone());
        if let Some(&b) = self.eq.get(&key) {
            return b;
        }
        let mut ok = true;
        'outer: for (a, b) in [(s, t), (t, s)] {
            for (child, ji) in a.open_entries() {
                if !self.mem(&j.intersect(ji), child, b) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        self.eq.insert(key, ok);
        ok
    }

    fn mem(&mut self, j: &OpenSet, s: &Term, t: &Term) -> bool {
        if j.is_empty() {
            return true;
        }
        let key = (j.clone(), s.clone(), t.clone());
        if let Some(&b) = self.mem.get(&key) {
            return b;
        }
        let mut cover = OpenSet::empty();
        'search: for k in self.ctx.subbase().to_vec() {
            for (child, ji) in t.open_entries() {
                let piece = k.intersect(ji);
                if piece.intersect(j).is_empty() || piece.intersect(j).subset(&cover) {
                    continue;
                }
                if self.eq(&piece, s, child) {
                    cover = cover.union(&piece);
                    if j.subset(&cover) {
                        break 'search;
                    }
                }
            }
        }
        let ok = j.subset(&cover);
        self.mem.insert(key, ok);
        ok
    }

    fn formula(&mut self, j: &OpenSet, phi: &Formula) -> bool {
        if j.is_empty() {
            return true;
        }
        match phi {
            Formula::Eq(a, b) => self.eq(j, param(a, phi), param(b, phi)),
            Formula::Mem(a, b) => self.mem(j, param(a, phi), param(b, phi)),
            Formula::And(a, b) => self.formula(j, a) && self.formula(j, b),
            Formula::Or(a, b) => self.covered(j, |me, k| {
                let jk = j.intersect(k);
                me.formula(&jk, a) || me.formula(&jk, b)
            }),
            Formula::Implies(a, b) => self.ctx.subbase().to_vec().iter().all(|k| {
                let jk = j.intersect(k);
                !self.formula(&jk, a) || self.formula(&jk, b)
            }),
            Formula::Bot => false,
            Formula::Exists(x, body) => {
                let terms = self.ctx.terms().to_vec();
                self.covered(j, |me, k| {
                    let jk = j.intersect(k);
                    terms.iter().any(|t| me.formula(&jk, &body.substitute(x, t)))
                })
            }
            Formula::Forall(x, body) => self.ctx.terms().to_vec().iter().all(|t| {
                let inst = body.substitute(x, t);
                self.covered(j, |me, k| me.formula(&j.intersect(k), &inst))
            }),
        }
    }
}
