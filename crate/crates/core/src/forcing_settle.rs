//! Forcing with settling-down. Each clause of the plain semantics gains a
//! pointwise condition on the settled instances, decided exactly on the
//! cells of the breakpoint partition.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use crate::forcing_std::{atom_eq, ordered, param, Memo};
use crate::opens::{OpenSet, Partition, Rat, SettledRegion};
use crate::syntax::{Context, Formula};
use crate::terms::Term;

fn eq_memo() -> &'static Memo<(Term, Term), OpenSet> {
    static M: OnceLock<Memo<(Term, Term), OpenSet>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

fn mem_memo() -> &'static Memo<(Term, Term), OpenSet> {
    static M: OnceLock<Memo<(Term, Term), OpenSet>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

pub fn clear_caches() {
    eq_memo().clear();
    mem_memo().clear();
}

fn joint_partition(a: &Term, b: &Term) -> Partition {
    Partition::new(a.breakpoints().iter().chain(b.breakpoints()).cloned())
}

/// `⟨σ^r, ℝ⟩ ∈ τ^r` as a literal entry.
fn settled_member(s: &Term, t: &Term, r: &Rat) -> bool {
    let sr = s.settle(r);
    t.settle(r).ground_members().any(|c| *c == sr)
}

/// `{r : σ^r = τ^r}`
pub fn settled_eq_region(s: &Term, t: &Term) -> SettledRegion {
    joint_partition(s, t).region_where(|r| s.settle(r) == t.settle(r))
}

/// `{r : ⟨σ^r, ℝ⟩ ∈ τ^r}`
pub fn settled_mem_region(s: &Term, t: &Term) -> SettledRegion {
    joint_partition(s, t).region_where(|r| settled_member(s, t, r))
}

/// The largest open forcing `σ = τ` with settling.
pub fn max_eq3(s: &Term, t: &Term) -> OpenSet {
    if s == t {
        return OpenSet::real_line();
    }
    if let Some(r) = atom_eq(s, t) {
        return r;
    }
    eq_memo().get_or(ordered(s, t), || {
        let mut acc = settled_eq_region(s, t).interior();
        for (a, b) in [(s, t), (t, s)] {
            for (child, j) in a.open_entries() {
                if acc.is_empty() {
                    return acc;
                }
                acc = acc.intersect(&j.heyting_implies(&max_mem3(child, b)));
            }
        }
        acc
    })
}

/// The largest open forcing `σ ∈ τ` with settling.
pub fn max_mem3(s: &Term, t: &Term) -> OpenSet {
    if t.open_entries().is_empty() {
        return OpenSet::empty();
    }
    mem_memo().get_or((s.clone(), t.clone()), || {
        let structural = t
            .open_entries()
            .iter()
            .filter(|(_, k)| !k.is_empty())
            .fold(OpenSet::empty(), |acc, (child, k)| acc.union(&k.intersect(&max_eq3(s, child))));
        if structural.is_empty() {
            return structural;
        }
        structural.intersect(&settled_mem_region(s, t).interior())
    })
}

/// `ℝ ⊩ φ^r`, for `φ^r` already settled.
fn forced_everywhere(phi: &Formula, ctx: &Context) -> bool {
    value3(phi, ctx).is_real_line()
}

/// `{r : ℝ ⊩ φ^r}`, one evaluation per cell of `φ`'s breakpoint partition
/// and one per breakpoint.
pub fn settled_truth(phi: &Formula, ctx: &Context) -> SettledRegion {
    phi.partition()
        .region_where(|r| forced_everywhere(&phi.settle(r), ctx))
}

/// The maximal open forcing the sentence `φ` with settling, quantifiers
/// ranging over `ctx.terms()`.
///
/// # Panics
/// If `φ` has a free variable.
pub fn value3(phi: &Formula, ctx: &Context) -> OpenSet {
    match phi {
        Formula::Eq(a, b) => max_eq3(param(a, phi), param(b, phi)),
        Formula::Mem(a, b) => max_mem3(param(a, phi), param(b, phi)),
        Formula::And(a, b) => {
            let va = value3(a, ctx);
            if va.is_empty() {
                return va;
            }
            va.intersect(&value3(b, ctx))
        }
        Formula::Or(a, b) => value3(a, ctx).union(&value3(b, ctx)),
        Formula::Implies(a, b) => {
            let heyting = value3(a, ctx).heyting_implies(&value3(b, ctx));
            if heyting.is_empty() {
                return heyting;
            }
            let pointwise = phi.partition().region_where(|r| {
                !forced_everywhere(&a.settle(r), ctx) || forced_everywhere(&b.settle(r), ctx)
            });
            heyting.intersect(&pointwise.interior())
        }
        Formula::Bot => OpenSet::empty(),
        Formula::Exists(x, body) => ctx
            .terms()
            .iter()
            .fold(OpenSet::empty(), |acc, t| acc.union(&value3(&body.substitute(x, t), ctx))),
        Formula::Forall(x, body) => {
            let mut acc = OpenSet::real_line();
            for t in ctx.terms() {
                if acc.is_empty() {
                    return acc;
                }
                acc = acc.intersect(&value3(&body.substitute(x, t), ctx));
            }
            if acc.is_empty() {
                return acc;
            }
            // Parameters are settled at r, the instantiating term is not.
            let all_instances = |settled: &Formula| {
                let mut v = OpenSet::real_line();
                for t in ctx.terms() {
                    if v.is_empty() {
                        break;
                    }
                    v = v.intersect(&value3(&settled.substitute(x, t), ctx));
                }
                v
            };
            let pointwise = body.partition().region_from_pieces(
                |cell| all_instances(&body.settle(&cell.rep)),
                |p| all_instances(&body.settle(p)).contains(p),
            );
            acc.intersect(&pointwise.interior())
        }
    }
}

pub fn forces3(j: &OpenSet, phi: &Formula, ctx: &Context) -> bool {
    j.is_empty() || j.subset(&value3(phi, ctx))
}

pub fn satisfies3(r: &Rat, phi: &Formula, ctx: &Context) -> bool {
    value3(phi, ctx).contains(r)
}

/// Literal evaluation of the settling clauses over `ctx.subbase()`. Every
/// "for all `r ∈ J`" condition is checked on the cells of a partition that
/// includes `J`'s endpoints.
pub fn direct_forces3(j: &OpenSet, phi: &Formula, ctx: &Context) -> bool {
    Direct3::new(ctx).formula(j, phi)
}

fn partition_with(j: &OpenSet, points: impl IntoIterator<Item = Rat>) -> Partition {
    Partition::new(points.into_iter().chain(j.finite_endpoints().cloned()))
}

struct Direct3<'a> {
    ctx: &'a Context,
    eq: HashMap<(OpenSet, Term, Term), bool>,
    mem: HashMap<(OpenSet, Term, Term), bool>,
    everywhere: HashMap<Formula, bool>,
}

impl<'a> Direct3<'a> {
    fn new(ctx: &'a Context) -> Self {
        Direct3 {
            ctx,
            eq: HashMap::new(),
            mem: HashMap::new(),
            everywhere: HashMap::new(),
        }
    }

    /// Union of the subbase opens satisfying `pred`.
    fn cover(&mut self, mut pred: impl FnMut(&mut Self, &OpenSet) -> bool) -> OpenSet {
        let mut cover = OpenSet::empty();
        for k in self.ctx.subbase().to_vec() {
            if !k.is_empty() && !k.subset(&cover) && pred(self, &k) {
                cover = cover.union(&k);
            }
        }
        cover
    }

    fn covered(&mut self, j: &OpenSet, mut pred: impl FnMut(&mut Self, &OpenSet) -> bool) -> bool {
        if j.is_empty() {
            return true;
        }
        let cover = self.cover(|me, k| !k.intersect(j).is_empty() && pred(me, k));
        j.subset(&cover)
    }

    fn pointwise(j: &OpenSet, s: &Term, t: &Term, pred: impl Fn(&Rat) -> bool) -> bool {
        let points = s.breakpoints().iter().chain(t.breakpoints()).cloned();
        partition_with(j, points).representatives_within(j).iter().all(pred)
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
        let mut ok = Self::pointwise(j, s, t, |r| s.settle(r) == t.settle(r));
        'outer: for (a, b) in [(s, t), (t, s)] {
            for (child, ji) in a.open_entries() {
                if !ok {
                    break 'outer;
                }
                ok = self.mem(&j.intersect(ji), child, b);
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
        let mut ok = Self::pointwise(j, s, t, |r| settled_member(s, t, r));
        if ok {
            let mut cover = OpenSet::empty();
            'search: for k in self.ctx.subbase().to_vec() {
                // J' ⊆ J
                let jk = k.intersect(j);
                for (child, ji) in t.open_entries() {
                    let piece = jk.intersect(ji);
                    if piece.is_empty() || piece.subset(&cover) {
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
            ok = j.subset(&cover);
        }
        self.mem.insert(key, ok);
        ok
    }

    /// `ℝ ⊩ φ^r` for a settled `φ^r`.
    fn everywhere(&mut self, phi: &Formula) -> bool {
        if let Some(&b) = self.everywhere.get(phi) {
            return b;
        }
        let b = self.formula(&OpenSet::real_line(), phi);
        self.everywhere.insert(phi.clone(), b);
        b
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
            Formula::Implies(a, b) => {
                let open_part = self.ctx.subbase().to_vec().iter().all(|k| {
                    let jk = j.intersect(k);
                    !self.formula(&jk, a) || self.formula(&jk, b)
                });
                open_part
                    && partition_with(j, phi.breakpoints())
                        .representatives_within(j)
                        .iter()
                        .all(|r| !self.everywhere(&a.settle(r)) || self.everywhere(&b.settle(r)))
            }
            Formula::Bot => false,
            Formula::Exists(x, body) => {
                let terms = self.ctx.terms().to_vec();
                self.covered(j, |me, k| {
                    let jk = j.intersect(k);
                    terms.iter().any(|t| me.formula(&jk, &body.substitute(x, t)))
                })
            }
            Formula::Forall(x, body) => {
                let terms = self.ctx.terms().to_vec();
                let open_part = terms.iter().all(|t| {
                    let inst = body.substitute(x, t);
                    self.covered(j, |me, k| me.formula(&j.intersect(k), &inst))
                });
                if !open_part {
                    return false;
                }
                let partition = partition_with(j, body.breakpoints());
                let witnessed = |me: &mut Self, settled: &Formula| -> OpenSet {
                    let mut w = OpenSet::real_line();
                    for t in &terms {
                        let inst = settled.substitute(x, t);
                        w = w.intersect(&me.cover(|me, k| me.formula(k, &inst)));
                    }
                    w
                };
                for cell in partition.cells() {
                    let c = cell.as_open();
                    if c.subset(j) && !c.subset(&witnessed(self, &body.settle(&cell.rep))) {
                        return false;
                    }
                }
                let points: BTreeSet<Rat> = partition.points().iter().filter(|p| j.contains(p)).cloned().collect();
                points.iter().all(|p| witnessed(self, &body.settle(p)).contains(p))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opens::int;
    use crate::terms::{generic, grid_cut, natural, Grid};

    fn sigma01() -> Term {
        Term::with_entries(vec![(Term::empty(), OpenSet::between(int(0), int(1)))])
    }

    #[test]
    fn settled_truth_examples() {
        let ctx = Context::with_terms(vec![]);
        let phi = Formula::mem(Term::empty(), sigma01());
        let region = settled_truth(&phi, &ctx);
        assert_eq!(region.cells(), &OpenSet::between(int(0), int(1)));
        assert!(region.points().is_empty());
        let x = natural(2);
        assert!(settled_truth(&Formula::eq(&x, &x), &ctx).cells().is_real_line());
        assert!(settled_truth(&Formula::Bot, &ctx).is_empty());
    }

    #[test]
    fn atomic_examples() {
        let one = natural(1);
        assert_eq!(max_eq3(&sigma01(), &one), OpenSet::between(int(0), int(1)));
        assert!(max_mem3(&Term::empty(), &one).is_real_line());
        let at3 = Term::new(vec![], vec![(Term::empty(), int(3))]);
        assert!(max_mem3(&Term::empty(), &at3).is_empty());
        let g = generic(&Grid::new([int(0), int(1)]).unwrap());
        assert_eq!(max_mem3(&Term::atom(int(0)), &g), OpenSet::above(int(0)));
    }

    #[test]
    fn generic_against_cut_on_single_point_grid() {
        // With grid {0} the empty cut agrees with G left of 0.
        let grid = Grid::new([int(0)]).unwrap();
        let g = generic(&grid);
        let cut = grid_cut(&grid, &int(0));
        assert_eq!(max_eq3(&g, &cut), OpenSet::below(int(0)));
    }

    #[test]
    fn implication_adds_pointwise_condition() {
        let ctx = Context::with_terms(vec![]);
        let phi = Formula::not(Formula::mem(Term::empty(), sigma01()));
        let want = OpenSet::below(int(0)).union(&OpenSet::above(int(1)));
        assert_eq!(value3(&phi, &ctx), want);
        assert!(value3(&Formula::implies(Formula::Bot, phi), &ctx).is_real_line());
    }

    #[test]
    fn direct_matches_on_atoms() {
        let ctx = Context::with_generators(
            vec![],
            vec![OpenSet::between(int(0), int(1)), OpenSet::between(int(1), int(2))],
            Grid::new([int(0)]).unwrap(),
        );
        let atoms = [
            Formula::eq(sigma01(), natural(1)),
            Formula::mem(Term::empty(), sigma01()),
            Formula::mem(sigma01(), natural(2)),
        ];
        for phi in &atoms {
            for j in ctx.subbase() {
                assert_eq!(direct_forces3(j, phi, &ctx), forces3(j, phi, &ctx), "{j} {phi}");
            }
        }
    }
}
