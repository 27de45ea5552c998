//! Seeded random instances and the property suites behind `check`.
//!
//! Every suite stops at its first counterexample and reports it in the
//! context and formula syntax, so the failure can be replayed with
//! `value`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::opens::{frac, int, Endpoint, OpenSet, Partition, Rat};
use crate::reals::{
    check_cut_window, coincide_upto, harvest, in_cut_x, is_fundamental_upto, precision_for_gap, FundamentalSeq,
    Modulus,
};
use crate::syntax::{Context, Formula, Operand};
use crate::terms::{generic, grid_cut, natural, Grid, Term};
use crate::witnesses::{self, WitnessReport};
use crate::{forcing_settle, Semantics};

/// `{0, 1/2, 1, 2}`
pub fn endpoint_pool() -> Vec<Rat> {
    vec![int(0), frac(1, 2), int(1), int(2)]
}

/// Random terms, opens and sentences from a seeded ChaCha stream.
pub struct Gen {
    rng: ChaCha8Rng,
    pool: Vec<Rat>,
    settled: bool,
    ground: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: endpoint_pool(),
            settled: false,
            ground: false,
        }
    }

    /// Also generate settled entries `⟨child, q⟩`.
    pub fn with_settled(mut self, yes: bool) -> Self {
        self.settled = yes;
        self
    }

    /// Only canonical names of ground sets.
    pub fn ground_only(mut self, yes: bool) -> Self {
        self.ground = yes;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn point(&mut self) -> Rat {
        self.pool.choose(&mut self.rng).unwrap().clone()
    }

    fn two_points(&mut self) -> (Rat, Rat) {
        let mut picks: Vec<Rat> = self.pool.choose_multiple(&mut self.rng, 2).cloned().collect();
        picks.sort();
        (picks[0].clone(), picks[1].clone())
    }

    /// A random open with endpoints from the pool.
    pub fn region(&mut self) -> OpenSet {
        match self.rng.gen_range(0..10) {
            0..=2 => OpenSet::real_line(),
            3..=5 => {
                let (a, b) = self.two_points();
                OpenSet::between(a, b)
            }
            6 => OpenSet::below(self.point()),
            7 => OpenSet::above(self.point()),
            8 => {
                let (a, b) = self.two_points();
                let (c, d) = self.two_points();
                OpenSet::between(a, b).union(&OpenSet::between(c, d))
            }
            _ => {
                let (a, b) = self.two_points();
                OpenSet::below(a).union(&OpenSet::above(b))
            }
        }
    }

    /// A random term of rank at most `rank`.
    pub fn term(&mut self, rank: usize) -> Term {
        if rank == 0 {
            return if !self.ground && self.rng.gen_bool(0.15) {
                Term::atom(self.point())
            } else {
                Term::empty()
            };
        }
        let n = self.rng.gen_range(0..=3);
        let mut open = Vec::with_capacity(n);
        for _ in 0..n {
            let r = self.rng.gen_range(0..rank);
            let child = self.term(r);
            let region = if self.ground { OpenSet::real_line() } else { self.region() };
            open.push((child, region));
        }
        let mut settled = Vec::new();
        if self.settled && !self.ground && self.rng.gen_bool(0.4) {
            let r = self.rng.gen_range(0..rank);
            let child = self.term(r);
            settled.push((child, self.point()));
        }
        Term::new(open, settled)
    }

    /// `t` with one region replaced, or `t` itself.
    pub fn perturb(&mut self, t: &Term) -> Term {
        let mut open = t.open_entries().to_vec();
        if open.is_empty() || self.ground || self.rng.gen_bool(0.3) {
            return t.clone();
        }
        let i = self.rng.gen_range(0..open.len());
        open[i].1 = self.region();
        Term::new(open, t.settled_entries().to_vec())
    }

    fn operand(&mut self, params: &[Term], vars: &[String]) -> Operand {
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            Operand::Var(vars.choose(&mut self.rng).unwrap().clone())
        } else {
            Operand::Param(params.choose(&mut self.rng).unwrap().clone())
        }
    }

    fn formula(&mut self, params: &[Term], vars: &mut Vec<String>, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return match self.rng.gen_range(0..9) {
                0 => Formula::Bot,
                1..=4 => Formula::Eq(self.operand(params, vars), self.operand(params, vars)),
                _ => Formula::Mem(self.operand(params, vars), self.operand(params, vars)),
            };
        }
        match self.rng.gen_range(0..6) {
            0 => Formula::and(self.formula(params, vars, depth - 1), self.formula(params, vars, depth - 1)),
            1 => Formula::or(self.formula(params, vars, depth - 1), self.formula(params, vars, depth - 1)),
            2 => Formula::implies(self.formula(params, vars, depth - 1), self.formula(params, vars, depth - 1)),
            3 => Formula::not(self.formula(params, vars, depth - 1)),
            q => {
                let x = format!("x{}", vars.len());
                vars.push(x.clone());
                let body = self.formula(params, vars, depth - 1);
                vars.pop();
                if q == 4 {
                    Formula::exists(&x, body)
                } else {
                    Formula::forall(&x, body)
                }
            }
        }
    }

    /// A random sentence of depth at most `depth` over `params`.
    pub fn sentence(&mut self, params: &[Term], depth: usize) -> Formula {
        self.formula(params, &mut Vec::new(), depth)
    }

    /// A context with `n` domain terms of rank at most `rank`, two random
    /// subbase generators and grid `{0}`.
    pub fn context(&mut self, n: usize, rank: usize) -> Context {
        let terms = (0..n).map(|_| self.term(rank)).collect();
        let gens = (0..2)
            .map(|_| {
                let (a, b) = self.two_points();
                OpenSet::between(a, b)
            })
            .collect();
        Context::with_generators(terms, gens, Grid::new([int(0)]).expect("nonempty"))
    }

    /// A random finite union of intervals with endpoints in
    /// `{−2, −7/4, …, 2} ∪ {±∞}`.
    pub fn open_set(&mut self) -> OpenSet {
        let k = self.rng.gen_range(0..=4);
        let mut raw = Vec::with_capacity(k);
        for _ in 0..k {
            let lo = match self.rng.gen_range(0..10) {
                0 => Endpoint::NegInf,
                _ => Endpoint::Fin(frac(self.rng.gen_range(-8..=8), 4)),
            };
            let hi = match self.rng.gen_range(0..10) {
                0 => Endpoint::PosInf,
                _ => Endpoint::Fin(frac(self.rng.gen_range(-8..=8), 4)),
            };
            raw.push((lo, hi));
        }
        OpenSet::normalize(raw)
    }
}

/// The first failure found by a suite, in replayable form.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub check: String,
    pub sem: Semantics,
    pub ctx: Context,
    pub formula: Option<Formula>,
    pub open: Option<OpenSet>,
    pub region: Option<OpenSet>,
    pub detail: String,
}

impl Counterexample {
    fn new(check: &str, sem: Semantics, ctx: &Context, detail: impl Into<String>) -> Self {
        Counterexample {
            check: check.to_string(),
            sem,
            ctx: ctx.clone(),
            formula: None,
            open: None,
            region: None,
            detail: detail.into(),
        }
    }

    fn formula(mut self, phi: &Formula) -> Self {
        self.formula = Some(phi.clone());
        self
    }

    fn open(mut self, j: &OpenSet) -> Self {
        self.open = Some(j.clone());
        self
    }

    fn region(mut self, r: &OpenSet) -> Self {
        self.region = Some(r.clone());
        self
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counterexample: {}: {}", self.check, self.detail)?;
        writeln!(f, "sem: {}", self.sem)?;
        write!(f, "context: {}", self.ctx)?;
        if let Some(phi) = &self.formula {
            write!(f, "\nformula: {phi}")?;
        }
        if let Some(j) = &self.open {
            write!(f, "\nopen: {j}")?;
        }
        if let Some(r) = &self.region {
            write!(f, "\nregion: {r}")?;
        }
        Ok(())
    }
}

/// Outcome of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub lines: Vec<String>,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checked: 0,
            lines: Vec::new(),
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn fail(&mut self, c: Counterexample) {
        if self.counterexample.is_none() {
            self.counterexample = Some(c);
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.lines.extend(other.lines);
        if let Some(c) = other.counterexample {
            self.fail(c);
        }
    }

    fn witness(&mut self, r: WitnessReport, sem: Semantics, ctx: &Context) {
        self.checked += 1;
        self.lines.push(format!("{sem} {r}"));
        if !r.pass {
            let mut c = Counterexample::new(&r.axiom, sem, ctx, r.instance.clone()).region(&r.region);
            c.formula = r.formula.clone();
            self.fail(c);
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checks)", self.name, self.checked)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n{c}")?;
        }
        Ok(())
    }
}

/// Lattice laws and the adjunction `c ∩ a ⊆ b ⇔ c ⊆ (a → b)` on random
/// opens.
pub fn heyting_laws(seed: u64, count: usize) -> SuiteReport {
    let mut gen = Gen::new(seed);
    let mut rep = SuiteReport::new("heyting-laws");
    let ctx = Context::with_terms(vec![]);
    for i in 0..count {
        let (a, b, c) = (gen.open_set(), gen.open_set(), gen.open_set());
        let imp = a.heyting_implies(&b);
        let laws = [
            ("commutative", a.intersect(&b) == b.intersect(&a) && a.union(&b) == b.union(&a)),
            (
                "associative",
                a.intersect(&b).intersect(&c) == a.intersect(&b.intersect(&c))
                    && a.union(&b).union(&c) == a.union(&b.union(&c)),
            ),
            ("absorption", a.union(&a.intersect(&b)) == a && a.intersect(&a.union(&b)) == a),
            ("distributive", a.intersect(&b.union(&c)) == a.intersect(&b).union(&a.intersect(&c))),
            ("modus-ponens", a.intersect(&imp).subset(&b)),
            ("adjunction", c.intersect(&a).subset(&b) == c.subset(&imp)),
            ("bounds", a.union(&OpenSet::empty()) == a && a.intersect(&OpenSet::real_line()) == a),
        ];
        for (law, ok) in laws {
            rep.checked += 1;
            if !ok {
                rep.fail(Counterexample::new(law, Semantics::Std, &ctx, format!("instance {i}: a={a} b={b} c={c}")));
            }
        }
    }
    rep
}

/// The five equality axioms as instances `x = x`, `x = y → y = x`,
/// `x = y ∧ y = z → x = z`, `x = y ∧ x ∈ z → y ∈ z`,
/// `x = y ∧ z ∈ x → z ∈ y`, on random triples.
pub fn equality_axioms(sem: Semantics, seed: u64, rank: usize, count: usize) -> SuiteReport {
    let mut gen = Gen::new(seed).with_settled(sem == Semantics::Settle);
    let mut rep = SuiteReport::new("equality-axioms");
    for _ in 0..count {
        let x = gen.term(rank);
        let y = gen.perturb(&x);
        let z = if gen.rng().gen_bool(0.5) { gen.perturb(&y) } else { gen.term(rank) };
        let ctx = Context::with_terms(vec![x.clone(), y.clone(), z.clone()]);
        let eq = |a: &Term, b: &Term| Formula::eq(a, b);
        let axioms = [
            ("reflexivity", eq(&x, &x)),
            ("symmetry", Formula::implies(eq(&x, &y), eq(&y, &x))),
            ("transitivity", Formula::implies(Formula::and(eq(&x, &y), eq(&y, &z)), eq(&x, &z))),
            (
                "congruence-left",
                Formula::implies(Formula::and(eq(&x, &y), Formula::mem(&x, &z)), Formula::mem(&y, &z)),
            ),
            (
                "congruence-right",
                Formula::implies(Formula::and(eq(&x, &y), Formula::mem(&z, &x)), Formula::mem(&z, &y)),
            ),
        ];
        for (name, phi) in axioms {
            rep.checked += 1;
            let region = sem.value(&phi, &ctx);
            if !region.is_real_line() {
                rep.fail(Counterexample::new(name, sem, &ctx, "value is not ℝ").formula(&phi).region(&region));
                return rep;
            }
        }
    }
    rep
}

/// Parts 1–4 of the forcing lemma for the direct evaluator over each
/// random context's subbase: `∅` forces everything, forcing is monotone,
/// closed under unions, and local. The maximal region must also force.
pub fn helpful_lemma(sem: Semantics, seed: u64, count: usize) -> SuiteReport {
    let mut gen = Gen::new(seed).with_settled(sem == Semantics::Settle);
    let mut rep = SuiteReport::new("helpful-lemma");
    for _ in 0..count {
        let ctx = gen.context(3, 2);
        let params: Vec<Term> = (0..3).map(|_| gen.term(2)).collect();
        let phi = gen.sentence(&params, 3);
        let value = sem.value(&phi, &ctx);
        let subbase = ctx.subbase().to_vec();
        let d: Vec<bool> = subbase.iter().map(|j| sem.direct_forces(j, &phi, &ctx)).collect();
        let fail = |law: &str, j: &OpenSet, detail: &str| {
            Counterexample::new(law, sem, &ctx, detail.to_string()).formula(&phi).open(j).region(&value)
        };
        rep.checked += 1;
        if !sem.direct_forces(&OpenSet::empty(), &phi, &ctx) || !sem.forces(&OpenSet::empty(), &phi, &ctx) {
            rep.fail(fail("empty-forces", &OpenSet::empty(), "∅ does not force"));
            return rep;
        }
        if !sem.forces(&value, &phi, &ctx) {
            rep.fail(fail("maximal-region", &value, "the maximal region does not force"));
            return rep;
        }
        for (i, j) in subbase.iter().enumerate() {
            for (k, j2) in subbase.iter().enumerate() {
                if d[i] && j2.subset(j) && !d[k] {
                    rep.fail(fail("monotone", j2, &format!("forced by {j} but not by the smaller open")));
                    return rep;
                }
                if d[i] && d[k] {
                    let u = j.union(j2);
                    if !sem.direct_forces(&u, &phi, &ctx) {
                        rep.fail(fail("union", &u, &format!("forced by {j} and {j2} but not by their union")));
                        return rep;
                    }
                }
            }
            let cover = subbase
                .iter()
                .filter(|k| !k.intersect(j).is_empty() && sem.direct_forces(&k.intersect(j), &phi, &ctx))
                .fold(OpenSet::empty(), |acc, k| acc.union(k));
            if d[i] != j.subset(&cover) {
                rep.fail(fail("local", j, "forcing disagrees with local forcing"));
                return rep;
            }
            rep.checked += 1;
        }
    }
    rep
}

/// A sentence over nonground two-part parameters with ground quantifier
/// domain, for the settling lemma parts that need it.
fn settling_instance(gen: &mut Gen, ground_params: bool) -> (Context, Formula) {
    let mut ground = Gen::new(gen.rng().gen()).ground_only(true);
    let domain: Vec<Term> = (0..3).map(|_| ground.term(2)).collect();
    let params: Vec<Term> = (0..3)
        .map(|_| if ground_params { ground.term(2) } else { gen.term(2) })
        .collect();
    let phi = gen.sentence(&params, 3);
    (Context::with_terms(domain), phi)
}

/// Settling soundness: whenever `J ⊩ φ`, every representative of `J`'s
/// cells and breakpoints lies in `settled_truth(φ)`. `J` is the maximal
/// region and its intersection with a random open.
pub fn settle_soundness(seed: u64, count: usize) -> SuiteReport {
    let mut gen = Gen::new(seed).with_settled(true);
    let mut rep = SuiteReport::new("settle-soundness");
    let mut found = 0;
    let mut attempts = 0;
    while found < count && attempts < count * 50 {
        attempts += 1;
        let (ctx, phi) = settling_instance(&mut gen, false);
        let value = forcing_settle::value3(&phi, &ctx);
        if value.is_empty() {
            continue;
        }
        found += 1;
        let truth = forcing_settle::settled_truth(&phi, &ctx);
        for j in [value.clone(), value.intersect(&gen.region())] {
            rep.checked += 1;
            let points = phi.breakpoints().into_iter().chain(j.finite_endpoints().cloned());
            for r in Partition::new(points).representatives_within(&j) {
                if !truth.contains(&r) {
                    let c = Counterexample::new("soundness", Semantics::Settle, &ctx, format!("{r} is not in {truth}"));
                    rep.fail(c.formula(&phi).open(&j).region(&value));
                    return rep;
                }
            }
        }
    }
    rep.lines.push(format!("{found} sentences with a nonempty forcing region in {attempts} draws"));
    rep
}

/// Ground decidability: with ground parameters and domain, exactly one of
/// `φ`, `¬φ` is forced by ℝ.
pub fn ground_decidability(seed: u64, count: usize) -> SuiteReport {
    let mut gen = Gen::new(seed).ground_only(true);
    let mut rep = SuiteReport::new("ground-decidability");
    for _ in 0..count {
        let (ctx, phi) = settling_instance(&mut gen, true);
        let v = forcing_settle::value3(&phi, &ctx);
        let nv = forcing_settle::value3(&Formula::not(phi.clone()), &ctx);
        rep.checked += 1;
        if v.is_real_line() == nv.is_real_line() || !(v.is_empty() || v.is_real_line()) {
            let c = Counterexample::new("decidability", Semantics::Settle, &ctx, format!("value of the negation is {nv}"));
            rep.fail(c.formula(&phi).region(&v));
            return rep;
        }
    }
    rep
}

/// Everything about the settling semantics: equality axioms, parts 1–4,
/// soundness and ground decidability.
pub fn settle_lemma(seed: u64, rank: usize, count: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("settle-lemma");
    rep.absorb(equality_axioms(Semantics::Settle, seed, rank, count));
    rep.absorb(helpful_lemma(Semantics::Settle, seed, count));
    rep.absorb(settle_soundness(seed, count));
    rep.absorb(ground_decidability(seed, count));
    rep
}

fn x() -> Operand {
    Operand::var("x")
}

fn z() -> Operand {
    Operand::var("z")
}

fn y() -> Operand {
    Operand::var("y")
}

fn with_entries(entries: &[(&Term, OpenSet)]) -> Term {
    Term::with_entries(entries.iter().map(|(t, j)| ((*t).clone(), j.clone())).collect())
}

/// The curated witness instances: pairing, union, separation and power
/// set without settling, union, separation and exponentiation with it.
/// Each checks `∀z (z ∈ W ↔ spec(z))` over a small domain.
pub fn witness_suite() -> SuiteReport {
    let mut rep = SuiteReport::new("witnesses");
    let iv = |a: i64, b: i64| OpenSet::between(int(a), int(b));
    let e = Term::empty();
    let one = natural(1);
    let two = natural(2);
    let s01 = with_entries(&[(&e, iv(0, 1))]);
    let one12 = with_entries(&[(&one, iv(1, 2))]);
    let pool = vec![e.clone(), one.clone(), two.clone(), s01.clone(), one12.clone()];
    let grid = Grid::new([int(0)]).expect("nonempty");
    let base = Context::with_generators(pool.clone(), vec![iv(0, 1), iv(1, 2), iv(0, 2)], grid);
    let domain = |extra: &[&Term]| {
        let mut terms = pool.clone();
        terms.extend(extra.iter().map(|t| (*t).clone()));
        terms.sort();
        terms.dedup();
        base.with_domain(terms)
    };
    let check = |rep: &mut SuiteReport, sem: Semantics, axiom: &str, name: String, ctx: &Context, spec: Formula| {
        let phi = Formula::forall("z", spec);
        let region = sem.value(&phi, ctx);
        rep.witness(WitnessReport::total(axiom, name, phi, region), sem, ctx);
    };

    for sem in [Semantics::Std] {
        for (a, b) in [(&e, &one), (&s01, &one), (&s01, &one12)] {
            let p = witnesses::pair_term(a, b);
            let spec = Formula::iff(Formula::mem(z(), &p), Formula::or(Formula::eq(z(), a), Formula::eq(z(), b)));
            check(&mut rep, sem, "pairing", format!("{a},{b}"), &domain(&[a, b]), spec);
        }
    }
    let nested = with_entries(&[(&s01, OpenSet::real_line()), (&one, iv(1, 2))]);
    for sem in [Semantics::Std, Semantics::Settle] {
        for s in [&two, &with_entries(&[(&one, iv(0, 2))]), &nested] {
            let u = witnesses::union_term(s, sem);
            let spec = Formula::iff(
                Formula::mem(z(), &u),
                Formula::exists("y", Formula::and(Formula::mem(y(), s), Formula::mem(z(), y()))),
            );
            let kids: Vec<&Term> = s.open_entries().iter().map(|(c, _)| c).collect();
            check(&mut rep, sem, "union", s.to_string(), &domain(&kids), spec);
        }
    }
    let sep_cases = |v: Operand| {
        [
            (two.clone(), Formula::mem(v.clone(), &one)),
            (with_entries(&[(&e, OpenSet::real_line()), (&one, iv(0, 2))]), Formula::eq(v, &e)),
        ]
    };
    for sem in [Semantics::Std, Semantics::Settle] {
        for ((s, phi), (_, phi_z)) in sep_cases(x()).into_iter().zip(sep_cases(z())) {
            let ctx = domain(&[&s]);
            let w = witnesses::sep_term(&s, "x", &phi, &ctx, sem);
            let spec = Formula::iff(Formula::mem(z(), &w), Formula::and(Formula::mem(z(), &s), phi_z));
            check(&mut rep, sem, "separation", format!("{s} {phi}"), &ctx, spec);
        }
    }
    for s in [&one, &s01, &one12] {
        let p = witnesses::powerset_term(s, &base);
        let members: Vec<&Term> = p.ground_members().collect();
        let ctx = domain(&members);
        let subset = Formula::forall("y", Formula::implies(Formula::mem(y(), z()), Formula::mem(y(), s)));
        let spec = Formula::iff(Formula::mem(z(), &p), subset);
        check(&mut rep, Semantics::Std, "power-set", s.to_string(), &ctx, spec);
    }
    for (a, b) in [(&one, &one), (&two, &two), (&one, &two), (&e, &one)] {
        let fns = witnesses::ground_functions(a, b);
        let mut terms = fns.clone();
        terms.extend([e.clone(), one.clone(), two.clone()]);
        let ctx = base.with_domain(terms.clone());
        let c = witnesses::exp_candidate(a, b, &ctx);
        for rho in &terms {
            let spec = Formula::iff(Formula::mem(rho, &c), witnesses::function_formula(rho, a, b));
            let region = Semantics::Settle.value(&spec, &ctx);
            rep.witness(
                WitnessReport::total("exponentiation", format!("{a}->{b} rho={rho}"), spec, region),
                Semantics::Settle,
                &ctx,
            );
        }
        let per_instance = c.settled_entries().len();
        let expected = b.ground_members().count().pow(a.ground_members().count() as u32);
        rep.checked += 1;
        rep.lines.push(format!("exp-count {a}->{b} {per_instance} expected {expected}"));
        if per_instance != expected {
            rep.fail(Counterexample::new(
                "exp-count",
                Semantics::Settle,
                &ctx,
                format!("{a}->{b}: {per_instance} ground functions, expected {expected}"),
            ));
        }
    }
    rep
}

fn generic_grids(seed: u64, max_points: usize) -> Vec<Grid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=max_points)
        .map(|n| {
            let mut pts: Vec<Rat> = (0..n as i64).map(|i| frac(i, 2)).collect();
            if rng.gen_bool(0.5) {
                pts = (0..n).map(|_| frac(rng.gen_range(-16..=16), 4)).collect();
            }
            Grid::new(pts).expect("nonempty")
        })
        .collect()
}

/// Left-cut checks in both semantics and settling of the generic real, on
/// grids of 1 to `max_points` points.
pub fn generic_cut_suite(seed: u64, max_points: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("generic-cut");
    for grid in generic_grids(seed, max_points) {
        let ctx = Context::with_generators(vec![], vec![], grid.clone());
        for sem in [Semantics::Std, Semantics::Settle] {
            for r in witnesses::check_left_cut(&ctx, sem) {
                rep.witness(r, sem, &ctx);
            }
        }
        let g = generic(&grid);
        for s in Partition::new(grid.points().iter().cloned()).representatives() {
            rep.checked += 1;
            let settled = g.settle(&s);
            let ok = settled == grid_cut(&grid, &s);
            rep.lines.push(format!("{} settled-generic s={s} {settled}", if ok { "PASS" } else { "FAIL" }));
            if !ok {
                rep.fail(Counterexample::new(
                    "settled-generic",
                    Semantics::Settle,
                    &ctx,
                    format!("G^{s} = {settled}, expected the grid cut below {s}"),
                ));
            }
        }
    }
    rep
}

/// `max_eq(G, ĉ) = ∅` for every grid cut `ĉ` in both semantics, followed
/// by the refinement form, on grids of 1 to `max_points` points.
pub fn not_ground_suite(seed: u64, max_points: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("not-ground");
    for grid in generic_grids(seed, max_points) {
        let ctx = Context::with_generators(vec![], vec![], grid);
        for sem in [Semantics::Std, Semantics::Settle] {
            for r in witnesses::check_not_ground(&ctx, sem) {
                rep.witness(r, sem, &ctx);
            }
        }
    }
    rep
}

/// The refinement form of the not-ground argument on the same grids.
pub fn not_ground_refined_suite(seed: u64, max_points: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("not-ground-refined");
    for grid in generic_grids(seed, max_points) {
        let ctx = Context::with_generators(vec![], vec![], grid);
        for sem in [Semantics::Std, Semantics::Settle] {
            for r in witnesses::check_not_ground_refined(&ctx, sem) {
                rep.witness(r, sem, &ctx);
            }
        }
    }
    rep
}

/// All generic-real checks: [`generic_cut_suite`], [`not_ground_suite`]
/// and [`not_ground_refined_suite`].
pub fn generic_suite(seed: u64, max_points: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("generic");
    rep.absorb(generic_cut_suite(seed, max_points));
    rep.absorb(not_ground_suite(seed, max_points));
    rep.absorb(not_ground_refined_suite(seed, max_points));
    rep
}

/// `settle(demo(r), s)` is `∅̂` for `s ≤ r` and `1̂` for `s > r` on random
/// pairs, and `demo(r) ⊆ 1̂` is forced by ℝ in both semantics.
pub fn powerset_demo(seed: u64, count: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("powerset-demo");
    let small = |rng: &mut ChaCha8Rng| frac(rng.gen_range(-20..=20), rng.gen_range(1..=4));
    for _ in 0..count {
        let r = small(&mut rng);
        let s = if rng.gen_bool(0.2) { r.clone() } else { small(&mut rng) };
        let demo = witnesses::powerset_failure_demo(&r);
        let ctx = Context::with_terms(vec![Term::empty(), natural(1)]);
        rep.checked += 1;
        let got = demo.settle(&s);
        let want = if s <= r { Term::empty() } else { natural(1) };
        if got != want {
            rep.fail(Counterexample::new("demo-settle", Semantics::Settle, &ctx, format!("r={r} s={s}: got {got}")));
        }
        for sem in [Semantics::Std, Semantics::Settle] {
            let phi = Formula::forall("z", Formula::implies(Formula::mem(z(), &demo), Formula::mem(z(), natural(1))));
            let region = sem.value(&phi, &ctx);
            rep.witness(WitnessReport::total("demo-subset", format!("r={r}"), phi, region), sem, &ctx);
        }
    }
    rep
}

/// Constant-sequence embedding against `{q < q₀}` on random queries, the
/// example families for fundamentality and coincidence, downward closure
/// and monotone precision of the embedded cut, and a harvested window.
pub fn reals_suite(seed: u64, count: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("reals");
    let ctx = Context::with_terms(vec![]);
    let expect = |rep: &mut SuiteReport, what: String, ok: bool| {
        rep.checked += 1;
        rep.lines.push(format!("{} {what}", if ok { "PASS" } else { "FAIL" }));
        if !ok {
            rep.fail(Counterexample::new("reals", Semantics::Std, &ctx, what));
        }
    };
    let q0 = frac(rng.gen_range(-50..=50), rng.gen_range(1..=7));
    let c = FundamentalSeq::constant(q0.clone());
    let queries: Vec<Rat> = (0..count)
        .map(|_| match rng.gen_range(0..10) {
            0 => q0.clone(),
            _ => frac(rng.gen_range(-400..=400), rng.gen_range(1..=16)),
        })
        .collect();
    let gap = queries
        .iter()
        .filter(|q| **q != q0)
        .map(|q| num_traits::Signed::abs(&(q - &q0)))
        .min()
        .unwrap_or_else(|| int(1));
    let m = precision_for_gap(&gap);
    let mismatches: Vec<&Rat> = queries.iter().filter(|q| in_cut_x(q, &c, m) != (**q < q0)).collect();
    expect(
        &mut rep,
        format!("embedding q0={q0} M={m} queries={} mismatches={}", queries.len(), mismatches.len()),
        mismatches.is_empty(),
    );
    let down = queries.iter().all(|q| {
        !in_cut_x(q, &c, m) || queries.iter().filter(|p| *p < q).all(|p| in_cut_x(p, &c, m))
    });
    expect(&mut rep, format!("downward-closure M={m}"), down);
    let r = FundamentalSeq::recip_succ();
    let mono = queries.iter().all(|q| (0..m + 4).all(|k| !in_cut_x(q, &r, k) || in_cut_x(q, &r, k + 1)));
    expect(&mut rep, format!("monotone-precision up to M={}", m + 4), mono);

    let alternating = FundamentalSeq::from_fn(
        |n| if n % 2 == 0 { int(1) } else { int(-1) },
        Modulus::Table(vec![0]),
    );
    let zero = FundamentalSeq::constant(int(0));
    let one = FundamentalSeq::constant(int(1));
    expect(&mut rep, format!("fundamental constant {q0} K=20"), is_fundamental_upto(&c, 20));
    expect(&mut rep, "fundamental recip-succ K=10".into(), is_fundamental_upto(&r, 10));
    expect(&mut rep, "not fundamental alternating K=1".into(), !is_fundamental_upto(&alternating, 1));
    expect(&mut rep, "coincide s=s K=10 H=4096".into(), coincide_upto(&r, &r, 10, 1 << 12));
    expect(&mut rep, "coincide recip-succ ~ 0 K=10 H=4096".into(), coincide_upto(&r, &zero, 10, 1 << 12));
    expect(&mut rep, "not coincide 0 ~ 1 K=1 H=4096".into(), !coincide_upto(&zero, &one, 1, 1 << 12));

    let window = (q0.clone() - int(100), q0.clone() + int(100));
    let inside: Vec<Rat> = queries.iter().filter(|q| window.0 < **q && **q < window.1).cloned().collect();
    let w = harvest(&c, m, &inside, window);
    expect(&mut rep, format!("harvested window M={m}"), check_cut_window(&w));
    rep
}
