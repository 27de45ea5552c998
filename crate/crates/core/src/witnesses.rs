//! Witness terms for set-theoretic axioms, and the checks on the generic
//! real and the power-set failure example.

use std::collections::BTreeSet;
use std::fmt;

use crate::opens::{OpenSet, Partition, Rat};
use crate::syntax::{Context, Formula};
use crate::terms::{generic, grid_cut, natural, Grid, Term};
use crate::Semantics;

/// One checked axiom instance. `pass` holds iff the expected region was
/// obtained (ℝ unless stated otherwise by the check).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub axiom: String,
    pub instance: String,
    pub formula: Option<Formula>,
    pub region: OpenSet,
    pub pass: bool,
}

impl WitnessReport {
    /// A report that passes iff `region` is the whole line.
    pub fn total(axiom: &str, instance: impl Into<String>, formula: Formula, region: OpenSet) -> Self {
        WitnessReport {
            axiom: axiom.to_string(),
            instance: instance.into(),
            pass: region.is_real_line(),
            formula: Some(formula),
            region,
        }
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {} {}", self.axiom, self.instance, self.region)
    }
}

/// `{⟨σ, ℝ⟩, ⟨τ, ℝ⟩}`
pub fn pair_term(s: &Term, t: &Term) -> Term {
    Term::with_entries(vec![(s.clone(), OpenSet::real_line()), (t.clone(), OpenSet::real_line())])
}

/// Kuratowski pair `{{σ}, {σ, τ}}`.
pub fn kpair(s: &Term, t: &Term) -> Term {
    pair_term(&pair_term(s, s), &pair_term(s, t))
}

/// `ω̂` cut off at `n`: the canonical name of `{0, …, n−1}`.
pub fn omega_prefix(n: usize) -> Term {
    natural(n)
}

/// `{⟨τ, J ∩ Jᵢ⟩ | ⟨τ, J⟩ ∈ σᵢ, ⟨σᵢ, Jᵢ⟩ ∈ σ}`, plus under settling
/// `{⟨τ, r⟩ | ⟨τ, r⟩ ∈ σᵢ, ⟨σᵢ, r⟩ ∈ σ}`. Entries with empty region are
/// dropped.
pub fn union_term(s: &Term, sem: Semantics) -> Term {
    let mut open = Vec::new();
    for (child, ji) in s.open_entries() {
        for (grand, j) in child.open_entries() {
            let region = j.intersect(ji);
            if !region.is_empty() {
                open.push((grand.clone(), region));
            }
        }
    }
    let mut settled = Vec::new();
    if sem == Semantics::Settle {
        for (child, r) in s.settled_entries() {
            for (grand, q) in child.settled_entries() {
                if q == r {
                    settled.push((grand.clone(), r.clone()));
                }
            }
        }
    }
    Term::new(open, settled)
}

/// Separation witness for `{x ∈ σ | φ(x)}`. Each entry `⟨σᵢ, Jᵢ⟩` keeps the
/// region `Jᵢ ∩ value(φ(σᵢ))`. Under settling, `⟨x, s⟩` is added for every
/// representative `s` of the breakpoint partition of `σ` and `φ` with
/// `x ∈ σ^s` and `ℝ ⊩ φ^s(x)`.
pub fn sep_term(s: &Term, x: &str, phi: &Formula, ctx: &Context, sem: Semantics) -> Term {
    let mut open = Vec::new();
    for (child, ji) in s.open_entries() {
        let region = ji.intersect(&sem.value(&phi.substitute(x, child), ctx));
        if !region.is_empty() {
            open.push((child.clone(), region));
        }
    }
    let mut settled = Vec::new();
    if sem == Semantics::Settle {
        let points = s.breakpoints().iter().cloned().chain(phi.breakpoints());
        for r in Partition::new(points).representatives() {
            let settled_phi = phi.settle(&r);
            for m in s.settle(&r).ground_members() {
                if sem.value(&settled_phi.substitute(x, m), ctx).is_real_line() {
                    settled.push((m.clone(), r.clone()));
                }
            }
        }
    }
    Term::new(open, settled)
}

/// Normal-form subsets of `σ`, each paired with ℝ. A subset keeps or omits
/// each entry `⟨σᵢ, Jᵢ⟩`, a kept entry getting a nonempty region `K ∩ Jᵢ`
/// for `K` in `ctx.subbase()`. Plain semantics only.
pub fn powerset_term(s: &Term, ctx: &Context) -> Term {
    let mut subsets: Vec<Vec<(Term, OpenSet)>> = vec![Vec::new()];
    for (child, ji) in s.open_entries() {
        let choices: BTreeSet<OpenSet> = ctx
            .subbase()
            .iter()
            .map(|k| k.intersect(ji))
            .filter(|r| !r.is_empty())
            .collect();
        let mut next = Vec::with_capacity(subsets.len() * (choices.len() + 1));
        for sub in &subsets {
            next.push(sub.clone());
            for region in &choices {
                let mut extended = sub.clone();
                extended.push((child.clone(), region.clone()));
                next.push(extended);
            }
        }
        subsets = next;
    }
    Term::ground_set(subsets.into_iter().map(Term::with_entries))
}

fn members(t: &Term) -> Vec<Term> {
    let set: BTreeSet<Term> = t
        .open_entries()
        .iter()
        .map(|(c, _)| c.clone())
        .chain(t.settled_entries().iter().map(|(c, _)| c.clone()))
        .collect();
    set.into_iter().collect()
}

/// `ρ : σ → τ is a function`, with the bounded quantifiers expanded over
/// the children of `ρ`, `σ` and `τ`: the graph lies in `σ × τ`, every
/// `x ∈ σ` has a value, and values are unique.
pub fn function_formula(rho: &Term, s: &Term, t: &Term) -> Formula {
    let xs = members(s);
    let ys = members(t);
    let graph = Formula::all_of(members(rho).into_iter().map(|p| {
        let mut inside = Vec::new();
        for x in &xs {
            for y in &ys {
                inside.push(Formula::all_of([Formula::mem(x, s), Formula::mem(y, t), Formula::eq(&p, kpair(x, y))]));
            }
        }
        Formula::implies(Formula::mem(&p, rho), Formula::any_of(inside))
    }));
    let total = Formula::all_of(xs.iter().map(|x| {
        let some = ys
            .iter()
            .map(|y| Formula::and(Formula::mem(y, t), Formula::mem(kpair(x, y), rho)));
        Formula::implies(Formula::mem(x, s), Formula::any_of(some))
    }));
    let mut single = Vec::new();
    for x in &xs {
        for (i, y) in ys.iter().enumerate() {
            for y2 in &ys[i + 1..] {
                let hyp = Formula::all_of([
                    Formula::mem(x, s),
                    Formula::mem(y, t),
                    Formula::mem(y2, t),
                    Formula::mem(kpair(x, y), rho),
                    Formula::mem(kpair(x, y2), rho),
                ]);
                single.push(Formula::implies(hyp, Formula::eq(y, y2)));
            }
        }
    }
    Formula::all_of([graph, total, Formula::all_of(single)])
}

/// Every function between two ground sets, as the canonical name of its
/// graph.
pub fn ground_functions(dom: &Term, cod: &Term) -> Vec<Term> {
    let xs: Vec<&Term> = dom.ground_members().collect();
    let ys: Vec<&Term> = cod.ground_members().collect();
    let mut graphs: Vec<Vec<Term>> = vec![Vec::new()];
    for x in &xs {
        let mut next = Vec::with_capacity(graphs.len() * ys.len());
        for g in &graphs {
            for y in &ys {
                let mut g2 = g.clone();
                g2.push(kpair(x, y));
                next.push(g2);
            }
        }
        graphs = next;
    }
    let set: BTreeSet<Term> = graphs.into_iter().map(Term::ground_set).collect();
    set.into_iter().collect()
}

/// Exponentiation candidate `C` for `σ → τ` under settling: `⟨ρ, J⟩` for
/// every `ρ` in `ctx.terms()` with `J` the region forcing `ρ` to be a
/// function (the rank bound admits every finite term), and `⟨ĥ, s⟩` for
/// every ground function `h : σ^s → τ^s` at each representative `s` of the
/// breakpoint partition of `σ` and `τ`.
pub fn exp_candidate(s: &Term, t: &Term, ctx: &Context) -> Term {
    let mut open = Vec::new();
    for rho in ctx.terms() {
        let region = Semantics::Settle.value(&function_formula(rho, s, t), ctx);
        if !region.is_empty() {
            open.push((rho.clone(), region));
        }
    }
    let mut settled = Vec::new();
    let points = s.breakpoints().iter().chain(t.breakpoints()).cloned();
    for r in Partition::new(points).representatives() {
        for h in ground_functions(&s.settle(&r), &t.settle(&r)) {
            settled.push((h, r.clone()));
        }
    }
    Term::new(open, settled)
}

/// `{⟨∅̂, (r, +∞)⟩}`: a subset of `1̂` that is `0` before `r` and `1` after.
pub fn powerset_failure_demo(r: &Rat) -> Term {
    Term::with_entries(vec![(Term::empty(), OpenSet::above(r.clone()))])
}

/// The ground names of every cut of the grid: `{q̂ | q ∈ grid, q < c}` for
/// each grid point `c`, and the whole grid.
pub fn ground_cuts(grid: &Grid) -> Vec<Term> {
    let mut cuts: Vec<Term> = grid.points().iter().map(|c| grid_cut(grid, c)).collect();
    cuts.push(Term::ground_set(grid.points().iter().cloned().map(Term::atom)));
    cuts
}

fn neighbourhood_report(axiom: &str, instance: String, phi: Formula, region: OpenSet, r: &Rat) -> WitnessReport {
    WitnessReport {
        axiom: axiom.to_string(),
        instance,
        pass: region.contains(r),
        formula: Some(phi),
        region,
    }
}

/// Left-cut checks on the generic real over `ctx.grid()`.
///
/// Boundedness is checked at the representative `r` of every bounded grid
/// cell, with the nearest grid points below and above `r` standing in for
/// `r − 1` and `r + 1`; it passes when the value contains `r`. Downward
/// closure and locatedness are checked for all grid pairs `s < t` and pass
/// when forced by ℝ. Openness is relative to a twice-refined grid: at each
/// node, every grid point in the cut has a larger refined-grid point in
/// the refined generic cut.
pub fn check_left_cut(ctx: &Context, sem: Semantics) -> Vec<WitnessReport> {
    let grid = ctx.grid();
    let g = generic(grid);
    let pts = grid.points();
    let atom = |q: &Rat| Term::atom(q.clone());
    let mut out = Vec::new();
    let nodes: Vec<Rat> = pts.windows(2).map(|w| (&w[0] + &w[1]) / Rat::from_integer(2.into())).collect();

    for (k, r) in nodes.iter().enumerate() {
        let (lo, hi) = (&pts[k], &pts[k + 1]);
        let phi = Formula::and(Formula::mem(atom(lo), &g), Formula::not(Formula::mem(atom(hi), &g)));
        let region = sem.value(&phi, ctx);
        out.push(neighbourhood_report("boundedness", format!("node={r} below={lo} above={hi}"), phi, region, r));
    }
    for (i, s) in pts.iter().enumerate() {
        for t in &pts[i + 1..] {
            let down = Formula::implies(Formula::mem(atom(t), &g), Formula::mem(atom(s), &g));
            let region = sem.value(&down, ctx);
            out.push(WitnessReport::total("downward-closure", format!("s={s} t={t}"), down, region));
            let located = Formula::or(Formula::mem(atom(s), &g), Formula::not(Formula::mem(atom(t), &g)));
            let region = sem.value(&located, ctx);
            out.push(WitnessReport::total("locatedness", format!("s={s} t={t}"), located, region));
        }
    }
    let fine = grid.refined().refined();
    let g_fine = generic(&fine);
    for r in &nodes {
        for s in pts.iter().filter(|s| *s < r) {
            let witness = fine
                .points()
                .iter()
                .filter(|t| *t > s)
                .find(|t| sem.max_mem(&atom(t), &g_fine).contains(r));
            let (region, pass) = match witness {
                Some(t) => (sem.max_mem(&atom(t), &g_fine), true),
                None => (OpenSet::empty(), false),
            };
            out.push(WitnessReport {
                axiom: "openness(context-relative)".into(),
                instance: format!("node={r} s={s}"),
                formula: None,
                region,
                pass,
            });
        }
    }
    out
}

/// Checks that no open forces the generic real equal to a ground cut:
/// `max_eq(G, ĉ) = ∅` for every cut name `ĉ` of the grid.
pub fn check_not_ground(ctx: &Context, sem: Semantics) -> Vec<WitnessReport> {
    let g = generic(ctx.grid());
    ground_cuts(ctx.grid())
        .into_iter()
        .map(|c| {
            let region = sem.max_eq(&g, &c);
            WitnessReport {
                axiom: "not-ground".into(),
                instance: format!("cut={c}"),
                formula: Some(Formula::eq(&g, &c)),
                pass: region.is_empty(),
                region,
            }
        })
        .collect()
}

/// The refinement form of the not-ground argument: for every cut `ĉ` and
/// every component `I` of `max_eq(G, ĉ)`, adding a grid point inside `I`
/// gives a generic real that `I` no longer forces equal to `ĉ`.
pub fn check_not_ground_refined(ctx: &Context, sem: Semantics) -> Vec<WitnessReport> {
    let grid = ctx.grid();
    let g = generic(grid);
    let mut out = Vec::new();
    for c in ground_cuts(grid) {
        let region = sem.max_eq(&g, &c);
        for (lo, hi) in region.intervals() {
            let q = crate::opens::representative(lo, hi);
            let finer = Grid::new(grid.points().iter().cloned().chain([q.clone()])).expect("nonempty");
            let component = OpenSet::interval(lo.clone(), hi.clone());
            let after = sem.max_eq(&generic(&finer), &c);
            out.push(WitnessReport {
                axiom: "not-ground-refined".into(),
                instance: format!("cut={c} split={q}"),
                formula: None,
                pass: !component.subset(&after),
                region: after.intersect(&component),
            });
        }
    }
    out
}
