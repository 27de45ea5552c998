//! First-order formulas over terms, the quantifier context, and the text
//! format for both.

mod parse;
pub mod sexp;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::opens::{OpenSet, Partition, Rat};
use crate::terms::{Grid, Term};

pub use parse::{
    parse_context, parse_endpoint, parse_formula, parse_formula_file, parse_opens, parse_rat,
    parse_symbols, parse_term, parse_term_file, SymbolTable,
};

/// An argument of `=` or `∈`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    Var(String),
    Param(Term),
}

impl Operand {
    pub fn var(name: &str) -> Operand {
        Operand::Var(name.to_string())
    }

    pub fn term(&self) -> Option<&Term> {
        match self {
            Operand::Param(t) => Some(t),
            Operand::Var(_) => None,
        }
    }

    fn map_param(&self, f: &mut impl FnMut(&Term) -> Term) -> Operand {
        match self {
            Operand::Param(t) => Operand::Param(f(t)),
            v => v.clone(),
        }
    }
}

impl From<Term> for Operand {
    fn from(t: Term) -> Self {
        Operand::Param(t)
    }
}

impl From<&Term> for Operand {
    fn from(t: &Term) -> Self {
        Operand::Param(t.clone())
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Var(x) => write!(f, "(var {x})"),
            Operand::Param(t) => write!(f, "{t}"),
        }
    }
}

/// Formulas over `=, ∈, ∧, ∨, →, ⊥, ∃, ∀`. Negation is `φ → ⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Operand, Operand),
    Mem(Operand, Operand),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Bot,
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: impl Into<Operand>, b: impl Into<Operand>) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn mem(a: impl Into<Operand>, b: impl Into<Operand>) -> Formula {
        Formula::Mem(a.into(), b.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bot)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(body))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(body))
    }

    /// `∀x (x ∈ t → φ)`
    pub fn forall_in(x: &str, t: impl Into<Operand>, body: Formula) -> Formula {
        Formula::forall(x, Formula::implies(Formula::mem(Operand::var(x), t), body))
    }

    /// `∃x (x ∈ t ∧ φ)`
    pub fn exists_in(x: &str, t: impl Into<Operand>, body: Formula) -> Formula {
        Formula::exists(x, Formula::and(Formula::mem(Operand::var(x), t), body))
    }

    /// Conjunction of a list; `⊥ → ⊥` when empty.
    pub fn all_of(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(|| Formula::implies(Formula::Bot, Formula::Bot))
    }

    /// Disjunction of a list; `⊥` when empty.
    pub fn any_of(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut op = |o: &Operand, bound: &Vec<String>| {
                if let Operand::Var(x) = o {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
            };
            match f {
                Formula::Eq(a, b) | Formula::Mem(a, b) => {
                    op(a, bound);
                    op(b, bound);
                }
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Bot => {}
                Formula::Exists(x, body) | Formula::Forall(x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Error naming a free variable unless the formula is closed.
    pub fn check_sentence(&self) -> Result<()> {
        match self.free_vars().into_iter().next() {
            Some(x) => Err(Error::NotClosed(x)),
            None => Ok(()),
        }
    }

    /// Every term parameter, in order of occurrence.
    pub fn parameters(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.visit_params(&mut |t| out.push(t.clone()));
        out
    }

    fn visit_params(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                for o in [a, b] {
                    if let Operand::Param(t) = o {
                        f(t);
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_params(f);
                b.visit_params(f);
            }
            Formula::Bot => {}
            Formula::Exists(_, body) | Formula::Forall(_, body) => body.visit_params(f),
        }
    }

    /// True when every parameter is a ground term.
    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit_params(&mut |t| ground &= t.is_ground());
        ground
    }

    /// Union of the breakpoints of all parameters.
    pub fn breakpoints(&self) -> BTreeSet<Rat> {
        let mut out = BTreeSet::new();
        self.visit_params(&mut |t| out.extend(t.breakpoints().iter().cloned()));
        out
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.breakpoints())
    }

    /// Apply `f` to every parameter.
    pub fn map_params(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.map_param(f), b.map_param(f)),
            Formula::Mem(a, b) => Formula::Mem(a.map_param(f), b.map_param(f)),
            Formula::And(a, b) => Formula::and(a.map_params(f), b.map_params(f)),
            Formula::Or(a, b) => Formula::or(a.map_params(f), b.map_params(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_params(f), b.map_params(f)),
            Formula::Bot => Formula::Bot,
            Formula::Exists(x, body) => Formula::exists(x, body.map_params(f)),
            Formula::Forall(x, body) => Formula::forall(x, body.map_params(f)),
        }
    }

    /// Replace free occurrences of `v` by the closed term `t`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let op = |o: &Operand| match o {
            Operand::Var(x) if x == v => Operand::Param(t.clone()),
            other => other.clone(),
        };
        match self {
            Formula::Eq(a, b) => Formula::Eq(op(a), op(b)),
            Formula::Mem(a, b) => Formula::Mem(op(a), op(b)),
            Formula::And(a, b) => Formula::and(a.substitute(v, t), b.substitute(v, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(v, t), b.substitute(v, t)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(v, t), b.substitute(v, t)),
            Formula::Bot => Formula::Bot,
            Formula::Exists(x, _) | Formula::Forall(x, _) if x == v => self.clone(),
            Formula::Exists(x, body) => Formula::exists(x, body.substitute(v, t)),
            Formula::Forall(x, body) => Formula::forall(x, body.substitute(v, t)),
        }
    }

    /// `φ^r`: every parameter replaced by its settling at `r`.
    pub fn settle(&self, r: &Rat) -> Formula {
        self.map_params(&mut |t| t.settle(r))
    }

    /// Every parameter shifted by `d`.
    pub fn shift(&self, d: &Rat) -> Formula {
        self.map_params(&mut |t| t.shift(d))
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Mem(..) | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.size(),
        }
    }
}

pub fn substitute(phi: &Formula, v: &str, t: &Term) -> Formula {
    phi.substitute(v, t)
}

pub fn settle_formula(phi: &Formula, r: &Rat) -> Formula {
    phi.settle(r)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(eq {a} {b})"),
            Formula::Mem(a, b) => write!(f, "(mem {a} {b})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(imp {a} {b})"),
            Formula::Bot => f.write_str("(bot)"),
            Formula::Exists(x, b) => write!(f, "(ex {x} {b})"),
            Formula::Forall(x, b) => write!(f, "(all {x} {b})"),
        }
    }
}

/// Finite quantifier domain, open subbase and grid for one evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    terms: Vec<Term>,
    subbase: Vec<OpenSet>,
    grid: Grid,
}

impl Context {
    /// Checks that the subbase contains ∅ and ℝ and is closed under
    /// pairwise intersection.
    pub fn new(terms: Vec<Term>, subbase: Vec<OpenSet>, grid: Grid) -> Result<Context> {
        let mut subbase = subbase;
        subbase.sort();
        subbase.dedup();
        if !subbase.iter().any(OpenSet::is_empty) {
            return Err(Error::InvalidContext("subbase must contain the empty open".into()));
        }
        if !subbase.iter().any(OpenSet::is_real_line) {
            return Err(Error::InvalidContext("subbase must contain the real line".into()));
        }
        for a in &subbase {
            for b in &subbase {
                let c = a.intersect(b);
                if subbase.binary_search(&c).is_err() {
                    return Err(Error::InvalidContext(format!(
                        "subbase is not closed under intersection: {a} ∩ {b} = {c} is missing"
                    )));
                }
            }
        }
        Ok(Context { terms, subbase, grid })
    }

    /// Context whose subbase is the closure of `generators ∪ {∅, ℝ}` under
    /// pairwise intersection.
    pub fn with_generators(terms: Vec<Term>, generators: Vec<OpenSet>, grid: Grid) -> Context {
        let subbase = intersection_closure(generators);
        Context::new(terms, subbase, grid).expect("closure satisfies the subbase invariants")
    }

    /// Context with the trivial subbase `{∅, ℝ}` and grid `{0}`.
    pub fn with_terms(terms: Vec<Term>) -> Context {
        let grid = Grid::new([crate::opens::int(0)]).expect("nonempty");
        Context::with_generators(terms, Vec::new(), grid)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn subbase(&self) -> &[OpenSet] {
        &self.subbase
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// The same context with a different quantifier domain.
    pub fn with_domain(&self, terms: Vec<Term>) -> Context {
        Context {
            terms,
            subbase: self.subbase.clone(),
            grid: self.grid.clone(),
        }
    }

    /// Breakpoints of every domain term.
    pub fn breakpoints(&self) -> BTreeSet<Rat> {
        self.terms
            .iter()
            .flat_map(|t| t.breakpoints().iter().cloned())
            .collect()
    }
}

impl fmt::Display for Context {
    /// The context file syntax; parses back to an equal context.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(context (terms")?;
        for t in &self.terms {
            write!(f, " {t}")?;
        }
        write!(f, ") (subbase")?;
        for o in self.subbase.iter().filter(|o| !o.is_empty() && !o.is_real_line()) {
            write!(f, " {o}")?;
        }
        write!(f, ") (grid")?;
        for q in self.grid.points() {
            write!(f, " {q}")?;
        }
        write!(f, "))")
    }
}

/// Closure of `generators ∪ {∅, ℝ}` under pairwise intersection, sorted.
pub fn intersection_closure(generators: Vec<OpenSet>) -> Vec<OpenSet> {
    let mut set: BTreeSet<OpenSet> = generators.into_iter().collect();
    set.insert(OpenSet::empty());
    set.insert(OpenSet::real_line());
    loop {
        let items: Vec<OpenSet> = set.iter().cloned().collect();
        let before = set.len();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                set.insert(a.intersect(b));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opens::{frac, int};
    use crate::terms::natural;

    fn sigma01() -> Term {
        Term::with_entries(vec![(Term::empty(), OpenSet::between(int(0), int(1)))])
    }

    #[test]
    fn substitute_examples() {
        let e = Term::empty();
        let f = Formula::eq(Operand::var("x"), Operand::var("x")).substitute("x", &e);
        assert_eq!(f, Formula::eq(&e, &e));

        let one = natural(1);
        let f = Formula::exists("x", Formula::eq(Operand::var("x"), Operand::var("y")));
        assert_eq!(
            f.substitute("y", &one),
            Formula::exists("x", Formula::eq(Operand::var("x"), &one))
        );

        let shadowed = Formula::and(
            Formula::mem(Operand::var("x"), &one),
            Formula::forall("x", Formula::mem(Operand::var("x"), &one)),
        );
        let got = shadowed.substitute("x", &e);
        assert_eq!(
            got,
            Formula::and(
                Formula::mem(&e, &one),
                Formula::forall("x", Formula::mem(Operand::var("x"), &one)),
            )
        );
    }

    #[test]
    fn settle_formula_examples() {
        let two = natural(2);
        let one = natural(1);
        let f = Formula::eq(&two, &one);
        assert_eq!(f.settle(&int(5)), f);

        let f = Formula::mem(Term::empty(), sigma01());
        assert_eq!(f.settle(&frac(1, 2)), Formula::mem(Term::empty(), &one));

        let f = Formula::forall("x", Formula::mem(Operand::var("x"), sigma01()));
        let once = f.settle(&frac(1, 2));
        assert_eq!(once.settle(&int(7)), once);
    }

    #[test]
    fn free_vars_and_sentences() {
        let f = Formula::forall("x", Formula::eq(Operand::var("x"), Operand::var("y")));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert!(matches!(f.check_sentence(), Err(Error::NotClosed(_))));
        assert!(Formula::exists("y", f).is_sentence());
    }

    #[test]
    fn breakpoints_collect_parameters() {
        let f = Formula::or(Formula::mem(Term::empty(), sigma01()), Formula::Bot);
        assert_eq!(f.breakpoints().into_iter().collect::<Vec<_>>(), vec![int(0), int(1)]);
    }

    #[test]
    fn context_checks_subbase() {
        let grid = Grid::new([int(0)]).unwrap();
        let a = OpenSet::between(int(0), int(2));
        let b = OpenSet::between(int(1), int(3));
        let bad = vec![OpenSet::empty(), OpenSet::real_line(), a.clone(), b.clone()];
        assert!(Context::new(vec![], bad, grid.clone()).is_err());
        assert!(Context::new(vec![], vec![OpenSet::real_line()], grid.clone()).is_err());
        let ctx = Context::with_generators(vec![], vec![a, b], grid);
        assert_eq!(ctx.subbase().len(), 5);
    }
}
